#include <cmath>

#include "doctest.h"
#include "qbench/linedraw.hpp"
#include "qbench/rng.hpp"

using namespace qbench;

namespace {
constexpr cplx I1{0.0, 1.0};

size_t count_cnots(const Circuit& c) {
    size_t n = 0;
    for (const auto& g : c.gate_list)
        if (g.kind == Gate::Kind::Controlled) ++n;
    return n;
}

std::vector<cplx> random_unit_vector(int n, uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> v(size_t(1) << n);
    double norm2 = 0.0;
    for (auto& a : v) {
        a = cplx(rng.next_double() * 2 - 1, rng.next_double() * 2 - 1);
        norm2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : v) a *= inv;
    return v;
}

double prep_fidelity(const std::vector<cplx>& target, int n) {
    const Circuit c = state_prep_circuit(target, n);
    const StateVector s = simulate(c);
    cplx ov(0, 0);
    for (size_t i = 0; i < target.size(); ++i) ov += std::conj(target[i]) * s.amplitudes[i];
    return std::abs(ov);
}
}  // namespace

TEST_CASE("fourier coefficients: DC and single-frequency anchors") {
    Curve constant;
    constant.name = "custom";
    constant.points.assign(8, cplx(0.5, 0));
    const auto c0 = fourier_coefficients(constant);
    CHECK(std::abs(c0[0]) == doctest::Approx(1.0));
    for (size_t j = 1; j < 8; ++j) CHECK(std::abs(c0[j]) < 1e-12);

    Curve loop;
    loop.name = "custom";
    for (int t = 0; t < 8; ++t)
        loop.points.push_back(std::exp(I1 * (2.0 * M_PI * t / 8.0)) / std::sqrt(8.0));
    const auto c1 = fourier_coefficients(loop);
    CHECK(std::abs(c1[1]) == doctest::Approx(1.0));
    for (size_t j = 0; j < 8; ++j)
        if (j != 1) CHECK(std::abs(c1[j]) < 1e-12);
}

TEST_CASE("fourier coefficients: kite round trip") {
    const Curve kite = reference_curve("kite");
    const auto coeffs = fourier_coefficients(kite);
    // Reapplying the forward transform recovers the points up to scale.
    const size_t n = kite.points.size();
    std::vector<cplx> rec(n, cplx(0, 0));
    for (size_t t = 0; t < n; ++t)
        for (size_t j = 0; j < n; ++j)
            rec[t] += coeffs[j] * std::exp(I1 * (2.0 * M_PI * double(j * t) / double(n)));
    // Normalize both and compare.
    double n1 = 0, n2 = 0;
    for (size_t t = 0; t < n; ++t) {
        n1 += std::norm(rec[t]);
        n2 += std::norm(kite.points[t]);
    }
    for (size_t t = 0; t < n; ++t)
        CHECK(std::abs(rec[t] / std::sqrt(n1) - kite.points[t] / std::sqrt(n2)) < 1e-10);
}

TEST_CASE("state prep: n=1 trivial sizes") {
    const std::vector<cplx> v = {1.0, 0.0};
    const Circuit c = state_prep_circuit(v, 1);
    CHECK(count_cnots(c) == 0);
    CHECK(gate_count(c) == 1);
    CHECK(prep_fidelity(v, 1) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("state prep: CNOT count is exactly 2^n - n - 1 for n = 2, 3, 4") {
    for (int n = 2; n <= 4; ++n) {
        const auto v = random_unit_vector(n, 137 + uint64_t(n));
        const Circuit c = state_prep_circuit(v, n);
        CHECK(count_cnots(c) == size_t((1 << n) - n - 1));
        CHECK(gate_count(c) - count_cnots(c) == size_t((1 << n) - 1));
    }
}

TEST_CASE("state prep: random states are prepared to 1 - 1e-9 fidelity") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        CHECK(prep_fidelity(random_unit_vector(3, 1000 + seed), 3) >=
              doctest::Approx(1.0 - 1e-9));
    }
    for (uint64_t seed = 0; seed < 4; ++seed) {
        CHECK(prep_fidelity(random_unit_vector(4, 2000 + seed), 4) >=
              doctest::Approx(1.0 - 1e-9));
        CHECK(prep_fidelity(random_unit_vector(2, 3000 + seed), 2) >=
              doctest::Approx(1.0 - 1e-9));
    }
    // Edge cases: basis states and states with zero blocks.
    std::vector<cplx> basis(8, cplx(0, 0));
    basis[5] = 1.0;
    CHECK(prep_fidelity(basis, 3) == doctest::Approx(1.0).epsilon(1e-10));
    std::vector<cplx> half(8, cplx(0, 0));
    half[0] = std::sqrt(0.5);
    half[7] = cplx(0, -std::sqrt(0.5));
    CHECK(prep_fidelity(half, 3) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("state prep rejects non-normalized input") {
    std::vector<cplx> bad(4, cplx(0.9, 0));
    CHECK_THROWS_AS(state_prep_circuit(bad, 2), NormViolation);
}

TEST_CASE("QFT circuit: gate counts and matrix") {
    const Circuit q1 = qft_circuit(1);
    CHECK(gate_count(q1) == 1);

    const Circuit q3 = qft_circuit(3);
    size_t two_qubit = count_cnots(q3);
    CHECK(two_qubit == 3);  // n(n-1)/2
    CHECK(gate_count(q3) == 6);

    // Dense matrix with output bit reversal equals DFT / sqrt(8).
    const int n = 3;
    const size_t dim = 8;
    for (size_t col = 0; col < dim; ++col) {
        Circuit c(n);
        for (int q = 0; q < n; ++q)
            if (col & (size_t(1) << (n - 1 - q))) c.add(Gate::one_qubit(gates::X(), q, "X"));
        c.append(qft_circuit(n));
        const StateVector s = simulate(c);
        for (size_t row = 0; row < dim; ++row) {
            size_t rrow = 0;  // reverse bits of row
            for (int b = 0; b < n; ++b)
                if (row & (size_t(1) << b)) rrow |= size_t(1) << (n - 1 - b);
            const cplx expected =
                std::exp(I1 * (2.0 * M_PI * double(row * col) / double(dim))) / std::sqrt(8.0);
            CHECK(std::abs(s.amplitudes[rrow] - expected) < 1e-10);
        }
    }
}

TEST_CASE("pauli measurement suffixes") {
    CHECK(pauli_measure_suffix("ZZZ").empty());
    const auto x = pauli_measure_suffix("X");
    REQUIRE(x.size() == 1);
    CHECK(x[0].label == "H");
    const auto y = pauli_measure_suffix("Y");
    REQUIRE(y.size() == 2);
    CHECK(y[0].label == "Sdg");
    CHECK(y[1].label == "H");
    CHECK_THROWS_AS(pauli_measure_suffix("A"), Error);
}

TEST_CASE("estimator is unbiased: exhaustive n = 1 check") {
    // Average of the estimator over all (basis, outcome) pairs weighted by
    // Born probabilities equals the density matrix.
    const std::vector<cplx> amps = {std::sqrt(0.3), std::sqrt(0.7) * std::exp(I1 * 0.9)};
    Eigen::Vector2cd psi;
    psi << amps[0], amps[1];
    const Eigen::Matrix2cd rho = psi * psi.adjoint();

    TomographyBatch batch;
    batch.n_qubits = 1;
    batch.shots_per_string = 1;
    batch.counts.assign(3, std::vector<double>(2, 0.0));
    for (int si = 0; si < 3; ++si) {
        const std::string ps = pauli_string_from_index(1, si);
        Circuit c(1);
        c.add(Gate::one_qubit(gates::ypow(0.0), 0, "I"));
        // Prepare the state explicitly.
        StateVector s(1);
        s.amplitudes = {amps[0], amps[1]};
        for (const auto& g : pauli_measure_suffix(ps)) s.apply(g);
        const auto probs = probabilities(s, {0});
        batch.counts[size_t(si)] = {probs[0], probs[1]};
    }
    const DensityEstimate est = estimate_state(batch);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(est.L(i, j) - rho(i, j)) < 1e-12);
    CHECK(std::abs(est.L.trace().real() - 1.0) < 1e-9);
}

TEST_CASE("estimator is unbiased: exhaustive n = 2 check") {
    const auto amps = random_unit_vector(2, 77);
    Eigen::VectorXcd psi(4);
    for (int i = 0; i < 4; ++i) psi(i) = amps[size_t(i)];
    const Eigen::MatrixXcd rho = psi * psi.adjoint();

    TomographyBatch batch;
    batch.n_qubits = 2;
    batch.shots_per_string = 1;
    batch.counts.assign(9, std::vector<double>(4, 0.0));
    for (int si = 0; si < 9; ++si) {
        const std::string ps = pauli_string_from_index(2, si);
        StateVector s(2);
        s.amplitudes.assign(amps.begin(), amps.end());
        for (const auto& g : pauli_measure_suffix(ps)) s.apply(g);
        const auto probs = probabilities(s, {0, 1});
        for (size_t o = 0; o < 4; ++o) batch.counts[size_t(si)][o] = probs[o];
    }
    const DensityEstimate est = estimate_state(batch);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(est.L(i, j) - rho(i, j)) < 1e-12);
}

TEST_CASE("estimate converges to the plus state with growing shots") {
    // Batches sampled from |+>: top eigenvector overlap -> 1.
    const Eigen::Vector2cd plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    Rng rng(4);
    TomographyBatch batch;
    batch.n_qubits = 1;
    batch.shots_per_string = 20000;
    batch.counts.assign(3, std::vector<double>(2, 0.0));
    for (int si = 0; si < 3; ++si) {
        const std::string ps = pauli_string_from_index(1, si);
        StateVector s(1);
        s.amplitudes = {plus(0), plus(1)};
        for (const auto& g : pauli_measure_suffix(ps)) s.apply(g);
        const auto probs = probabilities(s, {0});
        for (uint64_t t = 0; t < batch.shots_per_string; ++t)
            batch.counts[size_t(si)][rng.next_double() < probs[0] ? 0 : 1] += 1.0;
    }
    const DensityEstimate est = estimate_state(batch);
    Eigen::VectorXcd psi(2);
    psi << plus(0), plus(1);
    CHECK(std::abs(psi.dot(est.top_eigenvector)) > 0.999);
}

TEST_CASE("incomplete batches are rejected") {
    TomographyBatch batch;
    batch.n_qubits = 2;
    batch.counts.assign(5, std::vector<double>(4, 0.0));
    CHECK_THROWS_AS(estimate_state(batch), IncompleteBatch);
}

TEST_CASE("align_and_score anchors and phase invariance") {
    Eigen::VectorXcd psi(4);
    psi << 0.5, 0.5, 0.5, 0.5;
    auto [s0, r0] = align_and_score(psi, psi, 1.0);
    CHECK(s0 == doctest::Approx(0.0));

    const Eigen::VectorXcd rotated = std::exp(I1 * 1.234) * psi;
    auto [s1, r1] = align_and_score(psi, rotated, 1.0);
    CHECK(s1 == doctest::Approx(0.0).epsilon(1e-12));
    // Rotated estimate matches the target after alignment.
    for (int i = 0; i < 4; ++i) CHECK(std::abs(r1(i) - psi(i)) < 1e-12);

    Eigen::VectorXcd perp(4);
    perp << 0.5, -0.5, 0.5, -0.5;
    auto [s2, r2] = align_and_score(psi, perp, 1.0);
    CHECK(s2 == doctest::Approx(std::sqrt(2.0)));

    // Score also invariant under a global phase on the target.
    auto [s3, r3] = align_and_score(std::exp(I1 * 0.7) * psi, rotated, 1.0);
    CHECK(s3 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("reference curves: sampling anchors") {
    const Curve h8 = reference_curve("heart8");
    CHECK(h8.points.size() == 8);
    const Curve h16 = reference_curve("heart16");
    CHECK(h16.points.size() == 16);
    const Curve kite = reference_curve("kite");
    CHECK(kite.points.size() == 4);

    // t = 0 point of the heart: x = 0, y = 13 - 5 - 2 - 1 = 5 before scaling.
    // After normalization the ratio y0 / x(pi/2-ish) is fixed; check the
    // unnormalized relation via the stored first point direction.
    CHECK(std::abs(h8.points[0].real()) < 1e-12);
    CHECK(h8.points[0].imag() > 0.0);
    // Recover the pre-normalization value: scale by the common factor using
    // the known second sample x(2pi/8) = 16 sin^3(pi/4).
    const double x1 = 16.0 * std::pow(std::sin(2.0 * M_PI / 8.0), 3.0);
    const double scale = x1 / h8.points[1].real();
    CHECK(h8.points[0].imag() * scale == doctest::Approx(5.0).epsilon(1e-9));

    double norm2 = 0.0;
    for (const auto& z : h16.points) norm2 += std::norm(z);
    CHECK(norm2 == doctest::Approx(1.0));

    CHECK_THROWS_AS(reference_curve("square"), InvalidConfig);
}

TEST_CASE("round trip: prep + QFT + exact tomography reproduces the curve") {
    for (const char* name : {"kite", "heart8"}) {
        const Curve curve = reference_curve(name);
        LineDrawBackendOptions opt;
        opt.exact = true;
        const LineDrawRun run = run_linedraw(curve, 1, 16, opt, 0);
        CHECK(std::abs(run.score.value) < 1e-7);
        for (size_t t = 0; t < curve.points.size(); ++t)
            CHECK(std::abs(run.estimated_points[t] - run.target_points[t]) < 1e-6);
    }
}

TEST_CASE("sampled line drawing stays near the ideal floor") {
    const Curve kite = reference_curve("kite");
    LineDrawBackendOptions opt;
    const LineDrawRun run = run_linedraw(kite, 5, 4096, opt, 31337);
    CHECK(run.score.value < 0.05);
    CHECK(run.score.value > 0.0);
}

TEST_CASE("overall line score is the kite/heart8 mean") {
    const ScoreWithError o = overall_line_score({0.01, 0.002}, {0.03, 0.004});
    CHECK(o.value == doctest::Approx(0.02));
    CHECK(o.stderr_ == doctest::Approx(std::sqrt(0.002 * 0.002 + 0.004 * 0.004) / 2.0));
}
