#include "qbench/linedraw.hpp"

#include <algorithm>
#include <cmath>

#include "qbench/threadpool.hpp"

namespace qbench {

namespace {
constexpr cplx i1{0.0, 1.0};

int log2_exact(size_t n) {
    int k = 0;
    while ((size_t(1) << k) < n) ++k;
    if ((size_t(1) << k) != n) throw Error("curve size must be a power of two");
    return k;
}
}  // namespace

Curve reference_curve(const std::string& name) {
    Curve c;
    c.name = name;
    if (name == "kite") {
        c.points = {cplx(1.0, 0.0), cplx(0.0, 0.4), cplx(-0.55, 0.0), cplx(0.0, -1.0)};
    } else if (name == "heart8" || name == "heart16") {
        const int n = name == "heart8" ? 8 : 16;
        for (int k = 0; k < n; ++k) {
            const double t = 2.0 * M_PI * k / n;
            const double s = std::sin(t);
            const double x = 16.0 * s * s * s;
            const double y =
                13.0 * std::cos(t) - 5.0 * std::cos(2 * t) - 2.0 * std::cos(3 * t) - std::cos(4 * t);
            c.points.emplace_back(x, y);
        }
    } else {
        throw InvalidConfig("unknown curve: " + name);
    }
    double norm2 = 0.0;
    for (const auto& z : c.points) norm2 += std::norm(z);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& z : c.points) z *= inv;
    return c;
}

std::vector<cplx> fourier_coefficients(const Curve& curve) {
    const size_t n = curve.points.size();
    if (n < 4) throw Error("curve needs at least 4 points");
    log2_exact(n);
    std::vector<cplx> coeffs(n, cplx(0, 0));
    for (size_t j = 0; j < n; ++j) {
        cplx acc(0, 0);
        for (size_t t = 0; t < n; ++t)
            acc += curve.points[t] * std::exp(-i1 * (2.0 * M_PI * double(j * t) / double(n)));
        coeffs[j] = acc / double(n);
    }
    double norm2 = 0.0;
    for (const auto& v : coeffs) norm2 += std::norm(v);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : coeffs) v *= inv;
    return coeffs;
}

Circuit qft_circuit(int n_qubits) {
    if (n_qubits < 1) throw Error("qft needs at least one qubit");
    Circuit c(n_qubits);
    for (int i = 0; i < n_qubits; ++i) {
        c.add(Gate::one_qubit(gates::H(), i, "H"));
        for (int k = 2; k <= n_qubits - i; ++k)
            c.add(Gate::controlled(i + k - 1, gates::qft_rk(k), i, "R" + std::to_string(k)));
    }
    return c;
}

std::vector<Gate> pauli_measure_suffix(const std::string& pauli_string) {
    std::vector<Gate> out;
    for (size_t q = 0; q < pauli_string.size(); ++q) {
        switch (pauli_string[q]) {
            case 'X':
                out.push_back(Gate::one_qubit(gates::H(), int(q), "H"));
                break;
            case 'Y':
                out.push_back(Gate::one_qubit(gates::Sdg(), int(q), "Sdg"));
                out.push_back(Gate::one_qubit(gates::H(), int(q), "H"));
                break;
            case 'Z':
                break;
            default:
                throw Error("pauli string must be over {X,Y,Z}");
        }
    }
    return out;
}

std::string pauli_string_from_index(int n_qubits, int index) {
    std::string s(size_t(n_qubits), 'Z');
    for (int q = n_qubits - 1; q >= 0; --q) {
        s[size_t(q)] = "XYZ"[index % 3];
        index /= 3;
    }
    return s;
}

namespace {

// Single-qubit measurement eigenstate for basis P and outcome bit b.
Eigen::Vector2cd pauli_eigenstate(char basis, int bit) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (basis) {
        case 'X':
            return bit == 0 ? Eigen::Vector2cd(s, s) : Eigen::Vector2cd(s, -s);
        case 'Y':
            return bit == 0 ? Eigen::Vector2cd(s, i1 * s) : Eigen::Vector2cd(s, -i1 * s);
        default:
            return bit == 0 ? Eigen::Vector2cd(1, 0) : Eigen::Vector2cd(0, 1);
    }
}

}  // namespace

DensityEstimate estimate_state(const TomographyBatch& batch) {
    const int n = batch.n_qubits;
    int nstrings = 1;
    for (int i = 0; i < n; ++i) nstrings *= 3;
    if (int(batch.counts.size()) != nstrings)
        throw IncompleteBatch("tomography batch must cover all 3^n Pauli strings");
    const size_t dim = size_t(1) << n;

    double total = 0.0;
    for (const auto& row : batch.counts)
        for (double v : row) total += v;
    if (total <= 0.0) throw IncompleteBatch("tomography batch is empty");

    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(long(dim), long(dim));
    for (int si = 0; si < nstrings; ++si) {
        const std::string ps = pauli_string_from_index(n, si);
        const auto& row = batch.counts[size_t(si)];
        if (row.size() != dim) throw IncompleteBatch("outcome table has wrong width");
        for (size_t out = 0; out < dim; ++out) {
            const double w = row[out];
            if (w == 0.0) continue;
            // Tensor product of (3|e><e| - I) over the qubits; qubit 0 is the
            // most significant factor, so build from the last qubit outward.
            Eigen::MatrixXcd term = Eigen::MatrixXcd::Ones(1, 1);
            for (int q = n - 1; q >= 0; --q) {
                const int bit = int((out >> (n - 1 - q)) & 1);
                const Eigen::Vector2cd e = pauli_eigenstate(ps[size_t(q)], bit);
                const Eigen::Matrix2cd f =
                    3.0 * (e * e.adjoint()) - Eigen::Matrix2cd::Identity();
                Eigen::MatrixXcd next(term.rows() * 2, term.cols() * 2);
                next.block(0, 0, term.rows(), term.cols()) = term * f(0, 0);
                next.block(0, term.cols(), term.rows(), term.cols()) = term * f(0, 1);
                next.block(term.rows(), 0, term.rows(), term.cols()) = term * f(1, 0);
                next.block(term.rows(), term.cols(), term.rows(), term.cols()) = term * f(1, 1);
                term.swap(next);
            }
            L += (w / total) * term;
        }
    }

    DensityEstimate est;
    est.L = 0.5 * (L + L.adjoint());  // clean rounding asymmetry
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(est.L);
    long best = eig.eigenvalues().size() - 1;
    const double lam = eig.eigenvalues()(best);
    // Deterministic tie-break: among near-maximal eigenvalues prefer the
    // eigenvector with the largest first-component magnitude.
    for (long i = eig.eigenvalues().size() - 2; i >= 0; --i) {
        if (lam - eig.eigenvalues()(i) > 1e-12) break;
        if (std::abs(eig.eigenvectors().col(i)(0)) >
            std::abs(eig.eigenvectors().col(best)(0)))
            best = i;
    }
    est.top_eigenvalue = eig.eigenvalues()(best);
    Eigen::VectorXcd v = eig.eigenvectors().col(best);
    // Canonical phase: first component with significant magnitude made real
    // and positive.
    for (long i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-9) {
            v *= std::conj(v(i)) / std::abs(v(i));
            break;
        }
    }
    est.top_eigenvector = v;
    return est;
}

std::pair<double, Eigen::VectorXcd> align_and_score(const Eigen::VectorXcd& target,
                                                    const Eigen::VectorXcd& estimate, double p) {
    if (p < 0.0 || p > 1.0) throw Error("purity must lie in [0,1]");
    const cplx overlap = target.dot(estimate);  // <target|estimate>
    const double rho = std::min(std::abs(overlap), 1.0);
    const double dist = std::sqrt(std::max(0.0, 2.0 - 2.0 * rho));
    const double sp = std::sqrt(p);
    const double score = (1.0 - sp) + sp * dist;
    const cplx phase =
        std::abs(overlap) < 1e-15 ? cplx(1, 0) : std::conj(overlap) / std::abs(overlap);
    return {score, phase * estimate};
}

namespace {

// Physical tomography estimates live in circuit qubit order; the dropped QFT
// swaps mean the logical amplitude index is the bit reversal.
Eigen::VectorXcd bit_reverse_vector(const Eigen::VectorXcd& v, int n) {
    Eigen::VectorXcd out(v.size());
    for (long i = 0; i < v.size(); ++i) {
        size_t r = 0;
        for (int b = 0; b < n; ++b)
            if (size_t(i) & (size_t(1) << b)) r |= size_t(1) << (n - 1 - b);
        out(long(r)) = v(i);
    }
    return out;
}

}  // namespace

LineDrawRun run_linedraw(const Curve& curve, int batches, uint64_t shots,
                         const LineDrawBackendOptions& backend, uint64_t seed) {
    const size_t npoints = curve.points.size();
    if (npoints != 4 && npoints != 8 && npoints != 16)
        throw InvalidConfig("line drawing supports 4, 8 or 16 points");
    const int n = log2_exact(npoints);

    Curve normalized = curve;
    double norm2 = 0.0;
    for (const auto& z : normalized.points) norm2 += std::norm(z);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& z : normalized.points) z *= inv;

    const auto coeffs = fourier_coefficients(normalized);
    Circuit base = state_prep_circuit(coeffs, n);
    base.append(qft_circuit(n));
    base.measured_qubits.clear();
    for (int q = 0; q < n; ++q) base.measured_qubits.push_back(q);

    // Target state in physical (pre-reversal) order: the dropped QFT swaps
    // put curve point z_t at physical index bitrev(t).
    Eigen::VectorXcd target(static_cast<long>(npoints));
    for (size_t t = 0; t < npoints; ++t) {
        size_t r = 0;
        for (int b = 0; b < n; ++b)
            if (t & (size_t(1) << b)) r |= size_t(1) << (n - 1 - b);
        target(long(r)) = normalized.points[t];
    }

    int nstrings = 1;
    for (int i = 0; i < n; ++i) nstrings *= 3;

    LineDrawRun run;
    run.curve = normalized;
    run.target_points = normalized.points;
    run.batch_scores.assign(size_t(batches), 0.0);

    std::vector<Eigen::VectorXcd> last_estimate(static_cast<size_t>(batches));
    parallel_for(size_t(batches), [&](size_t bi) {
        TomographyBatch batch;
        batch.n_qubits = n;
        batch.shots_per_string = shots;
        batch.counts.assign(size_t(nstrings), std::vector<double>(npoints, 0.0));
        for (int si = 0; si < nstrings; ++si) {
            const std::string ps = pauli_string_from_index(n, si);
            Circuit c = base;
            c.basis_rotations = pauli_measure_suffix(ps);
            if (backend.exact) {
                const StateVector s = simulate(c);
                const auto probs = probabilities(s, c.measured_qubits);
                for (size_t out = 0; out < npoints; ++out)
                    batch.counts[size_t(si)][out] = probs[out];
            } else {
                const uint64_t cseed = derive_seed(
                    seed, "line/" + curve.name + "/" + std::to_string(bi) + "/" + ps);
                CountsHistogram h;
                if (backend.noisy)
                    h = sample_noisy(c, backend.noise, shots, cseed);
                else
                    h = sample_circuit(c, shots, cseed);
                for (const auto& [bits, cnt] : h.counts) {
                    size_t out = 0;
                    for (char ch : bits) out = (out << 1) | (ch == '1' ? 1u : 0u);
                    batch.counts[size_t(si)][out] += double(cnt);
                }
            }
        }
        const DensityEstimate est = estimate_state(batch);
        const double p = std::clamp(est.top_eigenvalue, 0.0, 1.0);
        auto [score, rotated] = align_and_score(target, est.top_eigenvector, p);
        run.batch_scores[bi] = score;
        last_estimate[bi] = rotated;
    });

    double mean = 0.0;
    for (double s : run.batch_scores) mean += s;
    mean /= double(batches);
    double var = 0.0;
    for (double s : run.batch_scores) var += (s - mean) * (s - mean);
    run.score.value = mean;
    run.score.stderr_ =
        batches > 1 ? std::sqrt(var / double(batches - 1)) / std::sqrt(double(batches)) : 0.0;

    // Estimated curve from the final batch, in logical point order.
    const Eigen::VectorXcd logical = bit_reverse_vector(last_estimate.back(), n);
    run.estimated_points.resize(npoints);
    for (size_t i = 0; i < npoints; ++i) run.estimated_points[i] = logical(long(i));
    return run;
}

ScoreWithError overall_line_score(const ScoreWithError& kite, const ScoreWithError& heart8) {
    ScoreWithError s;
    s.value = (kite.value + heart8.value) / 2.0;
    s.stderr_ = std::sqrt(kite.stderr_ * kite.stderr_ + heart8.stderr_ * heart8.stderr_) / 2.0;
    return s;
}

}  // namespace qbench
