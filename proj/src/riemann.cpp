#include "qbench/riemann.hpp"

#include <algorithm>
#include <cmath>

#include "qbench/threadpool.hpp"

namespace qbench {

namespace {
constexpr double kInfThreshold = 1e150;
constexpr cplx i1{0.0, 1.0};
}  // namespace

std::array<cplx, 2> riemann_state(const ExtComplex& z) {
    if (z.infinite) return {cplx(1, 0), cplx(0, 0)};
    const double n = std::sqrt(std::norm(z.value) + 1.0);
    return {z.value / n, cplx(1, 0) / n};
}

std::pair<double, double> prepare_psi(const ExtComplex& z) {
    if (z.infinite) return {0.0, 0.0};
    const double mag = std::abs(z.value);
    const double phi1 = (2.0 / M_PI) * std::acos(mag / std::sqrt(mag * mag + 1.0));
    const double phi2 = z.value == cplx(0, 0) ? 0.0 : -std::arg(z.value) / M_PI;
    return {phi1, phi2};
}

ExtComplex Mobius::apply(const ExtComplex& z) const {
    if (z.infinite) {
        if (std::abs(c) == 0.0) return ExtComplex::inf();
        return ExtComplex::of(a / c);
    }
    const cplx num = a * z.value + b;
    const cplx den = c * z.value + d;
    if (std::abs(den) == 0.0) return ExtComplex::inf();
    return ExtComplex::of(num / den);
}

Mobius mobius_of_unitary(const Mat2& u) { return {u[0], u[1], u[2], u[3]}; }

ExtComplex F_map(const ExtComplex& z) {
    if (z.infinite) return ExtComplex::of(-i1);  // z^2/(i z^2) = 1/i
    const cplx z2 = z.value * z.value;
    const cplx den = i1 * z2 + 1.0;
    if (std::abs(den) == 0.0) return ExtComplex::inf();
    return ExtComplex::of((z2 + i1) / den);
}

ExtComplex F_iter(const ExtComplex& z, int n) {
    ExtComplex w = z;
    for (int k = 0; k < n; ++k) w = F_map(w);
    return w;
}

ExtComplex Gc_map(const ExtComplex& z, cplx c) {
    if (z.infinite) return ExtComplex::inf();
    if (std::abs(z.value) > kInfThreshold) return ExtComplex::inf();
    return ExtComplex::of(z.value * z.value + c);
}

ExtComplex Gc_iter_from_zero(cplx c, int n) {
    ExtComplex w = ExtComplex::of(cplx(0, 0));
    for (int k = 0; k < n; ++k) w = Gc_map(w, c);
    return w;
}

static void append_psi_prep(Circuit& c, int qubit, const ExtComplex& z) {
    auto [phi1, phi2] = prepare_psi(z);
    c.add(Gate::one_qubit(gates::ypow(phi1), qubit, "Ypow"));
    c.add(Gate::one_qubit(gates::zpow(phi2), qubit, "Zpow"));
}

static void append_f_block(Circuit& c, int qa, int qb) {
    c.add(Gate::controlled(qa, gates::X(), qb, "CNOT"));
    c.add(Gate::one_qubit(gates::S(), qa, "S"));
    c.add(Gate::one_qubit(gates::H(), qa, "H"));
    c.add(Gate::one_qubit(gates::S(), qa, "S"));
    c.postselect[qb] = 0;
}

Circuit microscope_circuit(int level, const ExtComplex& z) {
    if (level < 1) throw Error("microscope level must be >= 1");
    const int n = 1 << level;
    Circuit c(n);
    for (int q = 0; q < n; ++q) append_psi_prep(c, q, z);
    for (int l = 1; l <= level; ++l) {
        const int stride = 1 << l;
        for (int i = 0; i < n; i += stride) append_f_block(c, i, i + stride / 2);
    }
    c.measured_qubits.assign(1, 0);
    for (int q = 1; q < n; ++q) c.measured_qubits.push_back(q);
    return c;
}

void append_gc_block(Circuit& c, int qa, int qb, cplx param_c) {
    if (std::abs(param_c) == 0.0) {
        c.add(Gate::controlled(qa, gates::X(), qb, "CNOT"));
        c.postselect[qb] = 0;
        return;
    }
    const double ac = std::abs(param_c);
    const double r2 = ac * std::sqrt(0.5 * (1.0 + std::sqrt(1.0 + 4.0 / (ac * ac))));
    const double r1 = 1.0 / r2;
    const double phi = std::arg(param_c) / M_PI;

    c.add(Gate::controlled(qa, gates::X(), qb, "CNOT"));
    // Controlled-H (control qb, target qa) as Ry(pi/4) . CZ . Ry(-pi/4).
    c.add(Gate::one_qubit(gates::ry(-M_PI / 4), qa, "Ry"));
    c.add(Gate::controlled(qa, gates::Z(), qb, "CZ"));
    c.add(Gate::one_qubit(gates::ry(M_PI / 4), qa, "Ry"));
    c.add(Gate::controlled(qa, gates::reflection_r(r1), qb, "CR1"));
    c.add(Gate::one_qubit(gates::zpow(phi), qa, "Zpow"));
    c.add(Gate::one_qubit(gates::zpow(-phi), qb, "Zpow"));
    c.add(Gate::one_qubit(gates::X(), qb, "X"));
    c.add(Gate::controlled(qb, gates::reflection_r(r2), qa, "CR2"));
    // The trailing X commutes with the CNOT; emitting it first keeps both
    // wires busy through the block's final layer.
    c.add(Gate::one_qubit(gates::X(), qb, "X"));
    c.add(Gate::controlled(qa, gates::X(), qb, "CNOT"));
    c.postselect[qb] = 0;
}

Circuit mandelbrot_circuit(int level, cplx param_c) {
    if (level < 1) throw Error("mandelbrot level must be >= 1");
    const int n = 1 << level;
    Circuit c(n);
    for (int q = 0; q < n; ++q) c.add(Gate::one_qubit(gates::X(), q, "X"));
    for (int l = 1; l <= level; ++l) {
        const int stride = 1 << l;
        for (int i = 0; i < n; i += stride) append_gc_block(c, i, i + stride / 2, param_c);
    }
    c.measured_qubits.assign(1, 0);
    for (int q = 1; q < n; ++q) c.measured_qubits.push_back(q);
    return c;
}

double microscope_step_probability(const ExtComplex& z) {
    if (z.infinite) return 1.0;
    const double m2 = std::norm(z.value);
    if (m2 > 1e100) return 1.0;
    const double m4 = m2 * m2;
    const double d = m2 + 1.0;
    return (m4 + 1.0) / (d * d);
}

std::pair<double, double> analytic_microscope(int level, const ExtComplex& z) {
    double p_ps = 1.0;
    ExtComplex w = z;
    for (int l = 1; l <= level; ++l) {
        const double q = microscope_step_probability(w);
        const int blocks = 1 << (level - l);
        p_ps *= std::pow(q, blocks);
        w = F_map(w);
    }
    const double p1 = w.infinite ? 0.0 : 1.0 / (std::norm(w.value) + 1.0);
    return {p_ps, p1};
}

namespace {

// Dense 4x4 of the G_c block (basis a x b), used by the analytic oracle.
// Independent of the statevector engine: plain 4x4 matrix products.
struct Mat4 {
    cplx m[4][4]{};
};

Mat4 mat4_mul(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx acc = 0;
            for (int k = 0; k < 4; ++k) acc += x.m[i][k] * y.m[k][j];
            r.m[i][j] = acc;
        }
    return r;
}

Mat4 lift_a(const Mat2& u) {  // u on qubit a (most significant)
    Mat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int b = 0; b < 2; ++b) r.m[i * 2 + b][j * 2 + b] = u[size_t(i * 2 + j)];
    return r;
}

Mat4 lift_b(const Mat2& u) {
    Mat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int a = 0; a < 2; ++a) r.m[a * 2 + i][a * 2 + j] = u[size_t(i * 2 + j)];
    return r;
}

Mat4 controlled_on_a(const Mat2& u) {  // control a=1, target b
    Mat4 r;
    r.m[0][0] = r.m[1][1] = 1;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[2 + i][2 + j] = u[size_t(i * 2 + j)];
    return r;
}

Mat4 controlled_on_b(const Mat2& u) {  // control b=1, target a
    Mat4 r;
    r.m[0][0] = r.m[2][2] = 1;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[1 + 2 * i][1 + 2 * j] = u[size_t(i * 2 + j)];
    return r;
}

Mat4 gc_block_matrix(cplx c) {
    const double ac = std::abs(c);
    const double r2v = ac * std::sqrt(0.5 * (1.0 + std::sqrt(1.0 + 4.0 / (ac * ac))));
    const double r1v = 1.0 / r2v;
    const double phi = std::arg(c) / M_PI;
    Mat4 u;
    for (int i = 0; i < 4; ++i) u.m[i][i] = 1;
    auto push = [&](const Mat4& g) { u = mat4_mul(g, u); };
    push(controlled_on_a(gates::X()));
    push(lift_a(gates::ry(-M_PI / 4)));
    push(controlled_on_a(gates::Z()));
    push(lift_a(gates::ry(M_PI / 4)));
    push(controlled_on_a(gates::reflection_r(r1v)));
    push(lift_a(gates::zpow(phi)));
    push(lift_b(gates::zpow(-phi)));
    push(lift_b(gates::X()));
    push(controlled_on_b(gates::reflection_r(r2v)));
    push(controlled_on_a(gates::X()));
    push(lift_b(gates::X()));
    return u;
}

// Branch amplitude scale gamma_c: the b=0 rows of the block map
// (z^2, z, z, 1)/(|z|^2+1) to gamma*(z^2+c, 1).
cplx gc_gamma(cplx c) {
    if (std::abs(c) == 0.0) return cplx(1, 0);  // bare CNOT block
    const Mat4 u = gc_block_matrix(c);
    return u.m[2][3];  // <a=1,b=0| U |a=1,b=1>
}

}  // namespace

double gc_step_probability(const ExtComplex& z, cplx c) {
    const double g2 = std::norm(gc_gamma(c));
    if (z.infinite) return g2;
    const double m2 = std::norm(z.value);
    if (m2 > 1e100) return g2;  // ratio tends to 1 on escaping orbits
    const ExtComplex next = Gc_map(z, c);
    if (next.infinite) return g2;
    const double out2 = std::norm(next.value);
    return g2 * (out2 + 1.0) / ((m2 + 1.0) * (m2 + 1.0));
}

std::pair<double, double> analytic_mandelbrot(int level, cplx c) {
    double p_ps = 1.0;
    ExtComplex w = ExtComplex::of(cplx(0, 0));
    for (int l = 1; l <= level; ++l) {
        const double q = gc_step_probability(w, c);
        const int blocks = 1 << (level - l);
        p_ps *= std::pow(q, blocks);
        w = Gc_map(w, c);
    }
    const double p1 = w.infinite ? 0.0 : 1.0 / (std::norm(w.value) + 1.0);
    return {p_ps, p1};
}

cplx pixel_center(int resolution, int row, int col) {
    const double step = 4.0 / resolution;
    return {-2.0 + (col + 0.5) * step, 2.0 - (row + 0.5) * step};
}

uint64_t riemann_default_shots(int level) { return level >= 3 ? 8192 : 4096; }

LevelRun run_grid(RiemannKind kind, int level, int resolution, uint64_t shots,
                  const RiemannBackendOptions& backend, uint64_t seed) {
    if (resolution < 2) throw Error("grid resolution must be >= 2");
    LevelRun run;
    run.kind = kind;
    run.level = level;
    run.shots = shots;
    run.exact = backend.exact;
    run.grid_ps.resolution = resolution;
    run.grid_1.resolution = resolution;
    run.grid_ps.values.assign(size_t(resolution) * resolution, 0.0);
    run.grid_1.values.assign(size_t(resolution) * resolution, 0.0);

    const double root_exp = 1.0 / double((1 << level) - 1);
    const char* tag = kind == RiemannKind::Microscope ? "sm" : "mandelbrot";

    parallel_for(size_t(resolution) * resolution, [&](size_t idx) {
        const int row = int(idx) / resolution, col = int(idx) % resolution;
        const cplx z = pixel_center(resolution, row, col);
        const Circuit c = kind == RiemannKind::Microscope
                              ? microscope_circuit(level, ExtComplex::of(z))
                              : mandelbrot_circuit(level, z);
        double ps_raw = 0.0, q1 = 0.0;
        if (backend.exact) {
            const StateVector s = simulate(c);
            // Joint post-selection probability and conditional P(top = 1).
            double pvalid = 0.0, p1 = 0.0;
            for (size_t i = 0; i < s.amplitudes.size(); ++i) {
                const double p = std::norm(s.amplitudes[i]);
                if (p == 0.0) continue;
                bool ok = true;
                for (const auto& [q, b] : c.postselect) {
                    const size_t qbit = size_t(1) << (c.n_qubits - 1 - q);
                    if (((i & qbit) != 0) != (b == 1)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                pvalid += p;
                if (i & (size_t(1) << (c.n_qubits - 1))) p1 += p;
            }
            ps_raw = pvalid;
            q1 = pvalid > 0.0 ? p1 / pvalid : 0.0;
        } else {
            const uint64_t pixel_seed =
                derive_seed(seed, std::string(tag) + "/" + std::to_string(level) + "/" +
                                      std::to_string(idx));
            CountsHistogram h;
            if (backend.noisy)
                h = sample_noisy(c, backend.noise, shots, pixel_seed);
            else
                h = sample_circuit(c, shots, pixel_seed);
            ps_raw = double(h.valid_shots) / double(shots);
            uint64_t ones = 0;
            for (const auto& [bits, n] : h.counts)
                if (bits[0] == '1') ones += n;
            q1 = h.valid_shots > 0 ? double(ones) / double(h.valid_shots) : 0.0;
        }
        run.grid_ps.values[idx] = std::pow(ps_raw, root_exp);
        run.grid_1.values[idx] = q1;
    });
    return run;
}

LevelRun oracle_grid(RiemannKind kind, int level, int resolution) {
    LevelRun run;
    run.kind = kind;
    run.level = level;
    run.shots = 0;
    run.exact = true;
    run.grid_ps.resolution = resolution;
    run.grid_1.resolution = resolution;
    run.grid_ps.values.assign(size_t(resolution) * resolution, 0.0);
    run.grid_1.values.assign(size_t(resolution) * resolution, 0.0);
    const double root_exp = 1.0 / double((1 << level) - 1);
    for (int row = 0; row < resolution; ++row)
        for (int col = 0; col < resolution; ++col) {
            const cplx z = pixel_center(resolution, row, col);
            const auto [ps, p1] = kind == RiemannKind::Microscope
                                      ? analytic_microscope(level, ExtComplex::of(z))
                                      : analytic_mandelbrot(level, z);
            run.grid_ps.at(row, col) = std::pow(ps, root_exp);
            run.grid_1.at(row, col) = p1;
        }
    return run;
}

std::pair<ScoreWithError, ScoreWithError> score_grids(const LevelRun& run,
                                                      const LevelRun& oracle) {
    if (run.grid_ps.resolution != oracle.grid_ps.resolution)
        throw ResolutionMismatch("grid resolutions differ");
    const int p = run.grid_ps.resolution;
    const size_t npix = size_t(p) * p;
    const double K = double((1 << run.level) - 1);
    const double shots = double(run.shots);

    double d_ps = 0.0, d_1 = 0.0;
    for (size_t i = 0; i < npix; ++i) {
        const double e_ps = run.grid_ps.values[i] - oracle.grid_ps.values[i];
        const double e_1 = run.grid_1.values[i] - oracle.grid_1.values[i];
        d_ps += e_ps * e_ps;
        d_1 += e_1 * e_1;
    }
    ScoreWithError s_ps, s_1;
    s_ps.value = std::sqrt(d_ps / double(npix));
    s_1.value = std::sqrt(d_1 / double(npix));

    if (!run.exact && shots > 0) {
        // Propagate the binomial errors of the raw frequencies through the
        // geometric-mean root and the RMS.
        double var_ps = 0.0, var_1 = 0.0;
        for (size_t i = 0; i < npix; ++i) {
            const double pv = run.grid_ps.values[i];
            const double F = std::pow(pv, K);  // raw valid fraction
            const double q = run.grid_1.values[i];
            double dp = 0.0, dq = 0.0;
            if (F > 0.0 && F < 1.0) {
                const double dF = std::sqrt(F * (1.0 - F) / shots);
                dp = pv > 0.0 ? (1.0 / K) * std::pow(F, 1.0 / K - 1.0) * dF : 0.0;
            }
            if (F > 0.0 && q > 0.0 && q < 1.0)
                dq = std::sqrt(q * (1.0 - q) / (F * shots));
            if (s_ps.value > 0.0) {
                const double grad = (pv - oracle.grid_ps.values[i]) / (double(npix) * s_ps.value);
                var_ps += grad * grad * dp * dp;
            }
            if (s_1.value > 0.0) {
                const double grad =
                    (q - oracle.grid_1.values[i]) / (double(npix) * s_1.value);
                var_1 += grad * grad * dq * dq;
            }
        }
        s_ps.stderr_ = std::sqrt(var_ps);
        s_1.stderr_ = std::sqrt(var_1);
    }
    return {s_ps, s_1};
}

ScoreWithError overall_riemann_score(const std::pair<ScoreWithError, ScoreWithError>& level1,
                                     const std::pair<ScoreWithError, ScoreWithError>& level2) {
    ScoreWithError s;
    s.value = (level1.first.value + level1.second.value + level2.first.value +
               level2.second.value) /
              4.0;
    s.stderr_ = std::sqrt(level1.first.stderr_ * level1.first.stderr_ +
                          level1.second.stderr_ * level1.second.stderr_ +
                          level2.first.stderr_ * level2.first.stderr_ +
                          level2.second.stderr_ * level2.second.stderr_) /
                4.0;
    return s;
}

GridShotRecords run_grid_records(RiemannKind kind, int level, int resolution, uint64_t shots,
                                 const RiemannBackendOptions& backend, uint64_t seed) {
    GridShotRecords rec;
    rec.kind = kind;
    rec.level = level;
    rec.resolution = resolution;
    rec.shots = shots;
    rec.codes.assign(size_t(resolution) * resolution, {});
    const char* tag = kind == RiemannKind::Microscope ? "sm" : "mandelbrot";

    parallel_for(size_t(resolution) * resolution, [&](size_t idx) {
        const int row = int(idx) / resolution, col = int(idx) % resolution;
        const cplx z = pixel_center(resolution, row, col);
        const Circuit c = kind == RiemannKind::Microscope
                              ? microscope_circuit(level, ExtComplex::of(z))
                              : mandelbrot_circuit(level, z);
        std::vector<uint8_t>& codes = rec.codes[idx];
        codes.assign(shots, 0);
        const uint64_t pixel_seed = derive_seed(
            seed, std::string(tag) + "/rec/" + std::to_string(level) + "/" + std::to_string(idx));
        if (backend.noisy) {
            // One trajectory per shot; sample_noisy with shots=1 keeps the
            // per-shot trajectories independent and reproducible.
            Rng seeder(pixel_seed);
            for (uint64_t t = 0; t < shots; ++t) {
                const CountsHistogram h = sample_noisy(c, backend.noise, 1, seeder.next_u64());
                if (h.valid_shots == 0) continue;
                codes[t] = h.counts.begin()->first[0] == '1' ? 2 : 1;
            }
        } else {
            const StateVector s = simulate(c);
            const size_t dim = s.amplitudes.size();
            std::vector<double> cdf(dim);
            double acc = 0.0;
            for (size_t i = 0; i < dim; ++i) {
                acc += std::norm(s.amplitudes[i]);
                cdf[i] = acc;
            }
            Rng rng(pixel_seed);
            for (uint64_t t = 0; t < shots; ++t) {
                const double u = rng.next_double() * cdf.back();
                size_t outcome = size_t(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
                outcome = std::min(outcome, dim - 1);
                bool ok = true;
                for (const auto& [q, b] : c.postselect) {
                    const size_t qbit = size_t(1) << (c.n_qubits - 1 - q);
                    if (((outcome & qbit) != 0) != (b == 1)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                const bool top = (outcome & (size_t(1) << (c.n_qubits - 1))) != 0;
                codes[t] = top ? 2 : 1;
            }
        }
    });
    return rec;
}

std::pair<double, double> score_from_records(const GridShotRecords& records,
                                             const std::vector<uint32_t>& shot_indices,
                                             const LevelRun& oracle) {
    const int p = records.resolution;
    if (oracle.grid_ps.resolution != p) throw ResolutionMismatch("grid resolutions differ");
    const size_t npix = size_t(p) * p;
    const double K = double((1 << records.level) - 1);
    double d_ps = 0.0, d_1 = 0.0;
    for (size_t i = 0; i < npix; ++i) {
        uint64_t valid = 0, ones = 0;
        for (uint32_t t : shot_indices) {
            const uint8_t code = records.codes[i][t];
            if (code == 0) continue;
            ++valid;
            if (code == 2) ++ones;
        }
        const double F = double(valid) / double(shot_indices.size());
        const double pv = std::pow(F, 1.0 / K);
        const double q = valid > 0 ? double(ones) / double(valid) : 0.0;
        const double e_ps = pv - oracle.grid_ps.values[i];
        const double e_1 = q - oracle.grid_1.values[i];
        d_ps += e_ps * e_ps;
        d_1 += e_1 * e_1;
    }
    return {std::sqrt(d_ps / double(npix)), std::sqrt(d_1 / double(npix))};
}

}  // namespace qbench
