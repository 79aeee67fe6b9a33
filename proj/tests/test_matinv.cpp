#include <cmath>

#include "doctest.h"
#include "qbench/matinv.hpp"
#include "qbench/rng.hpp"

using namespace qbench;

namespace {

OddPolynomial random_admissible_odd(int degree, uint64_t seed) {
    Rng rng(seed);
    OddPolynomial p;
    p.coeffs.assign(size_t(degree) + 1, 0.0);
    for (int k = 1; k <= degree; k += 2) p.coeffs[size_t(k)] = rng.next_double() * 2 - 1;
    const double sup = p.max_abs_on_interval();
    for (auto& c : p.coeffs) c *= 0.9 / sup;
    return p;
}

}  // namespace

TEST_CASE("inversion polynomial: published coefficients at sigma = (1, 0.5)") {
    const auto [p, c] = inversion_polynomial(1.0, 0.5);
    // P(x) = c(5x - 4x^3).
    CHECK(p.coeffs[1] / c == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(p.coeffs[3] / c == doctest::Approx(-4.0).epsilon(1e-9));
    CHECK(c == doctest::Approx(0.46475).epsilon(1e-4));
    // Exact interpolation: P(sigma) * sigma / c = 1.
    for (double s : {1.0, 0.5}) CHECK(p.eval(s) * s / c == doctest::Approx(1.0).epsilon(1e-9));
    // Bounded by 1 on [-1,1].
    CHECK(p.max_abs_on_interval() <= 1.0);

    CHECK_THROWS_AS(inversion_polynomial(0.5, 0.5), DegenerateSigmas);
    CHECK_THROWS_AS(inversion_polynomial(0.5, 0.9), DegenerateSigmas);
}

TEST_CASE("qsp phases: P(x) = x is the trivial sequence") {
    OddPolynomial p;
    p.coeffs = {0.0, 1.0};
    const PhaseSequence seq = qsp_phases(p);
    for (int k = 0; k < 50; ++k) {
        const double x = std::cos(M_PI * (k + 0.5) / 50.0);
        CHECK(std::abs(qsp_product_real(seq.phases, x) - x) < 1e-9);
    }
}

TEST_CASE("qsp phases: inversion polynomial verified at Chebyshev nodes") {
    const auto [p, c] = inversion_polynomial(1.0, 0.5);
    const PhaseSequence seq = qsp_phases(p);
    CHECK(seq.degree == 3);
    for (int k = 0; k < 50; ++k) {
        const double x = std::cos(M_PI * (k + 0.5) / 50.0);
        CHECK(std::abs(qsp_product_real(seq.phases, x) - p.eval(x)) < 1e-9);
    }
}

TEST_CASE("qsp phases: random admissible odd polynomials round trip") {
    for (int d : {1, 3, 5, 7}) {
        for (uint64_t seed = 0; seed < 5; ++seed) {
            const OddPolynomial p = random_admissible_odd(d, 100 * uint64_t(d) + seed);
            const PhaseSequence seq = qsp_phases(p);
            double max_err = 0.0;
            for (int k = 0; k < 50; ++k) {
                const double x = std::cos(M_PI * (k + 0.5) / 50.0);
                max_err = std::max(max_err,
                                   std::abs(qsp_product_real(seq.phases, x) - p.eval(x)));
            }
            CHECK(max_err < 1e-9);
        }
    }
}

TEST_CASE("block encoding: extraction, unitarity and singular values") {
    for (uint64_t seed : {1ull, 11ull, 42ull}) {
        for (int n : {1, 2, 3}) {
            const BlockEncoding be = make_block_encoding(n, 1.0, 0.5, seed);
            const Eigen::MatrixXcd U = block_encoding_unitary(be);
            const long dim = U.rows();
            // Unitarity to 1e-10.
            CHECK((U.adjoint() * U - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() <
                  1e-10);
            // Bottom-right block equals A.
            const long half = dim / 2;
            CHECK((U.block(half, half, half, half) - be.A).cwiseAbs().maxCoeff() < 1e-10);
            // Singular values of A are exactly {1.0, 0.5}.
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(be.A);
            for (long i = 0; i < svd.singularValues().size(); ++i) {
                const double s = svd.singularValues()(i);
                CHECK((std::abs(s - 1.0) < 1e-10 || std::abs(s - 0.5) < 1e-10));
            }
            // A is Hermitian.
            CHECK((be.A - be.A.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    CHECK_THROWS_AS(make_block_encoding(1, 1.0, 1.0, 0), DegenerateSigmas);
}

TEST_CASE("qsvt circuit: d = 1 with P(x) = x reproduces the block A") {
    OddPolynomial p;
    p.coeffs = {0.0, 1.0};
    const auto phases = circuit_phases_from_qsp(qsp_phases(p));
    for (int n : {1, 2}) {
        const BlockEncoding be = make_block_encoding(n, 1.0, 0.5, 7);
        const Eigen::MatrixXcd block = qsvt_block(be, phases);
        CHECK((block - be.A).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("qsvt circuit: random odd polynomials act as P(A)") {
    for (int d : {1, 3, 5, 7}) {
        const OddPolynomial p = random_admissible_odd(d, 900 + uint64_t(d));
        const auto phases = circuit_phases_from_qsp(qsp_phases(p));
        const BlockEncoding be = make_block_encoding(2, 0.95, 0.35, 13);
        // P(A) via the eigen decomposition.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(be.A);
        Eigen::VectorXd vals = eig.eigenvalues();
        Eigen::VectorXcd pvals(vals.size());
        for (long i = 0; i < vals.size(); ++i) pvals(i) = p.eval(vals(i));
        const Eigen::MatrixXcd pa =
            eig.eigenvectors() * pvals.asDiagonal() * eig.eigenvectors().adjoint();
        const Eigen::MatrixXcd block = qsvt_block(be, phases);
        CHECK((block - pa).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("qsvt inversion: block is proportional to the inverse") {
    const auto [p, c] = inversion_polynomial(1.0, 0.5);
    const auto phases = circuit_phases_from_qsp(qsp_phases(p));
    for (int n : {1, 2, 3}) {
        const BlockEncoding be = make_block_encoding(n, 1.0, 0.5, 11);
        const Eigen::MatrixXcd block = qsvt_block(be, phases);
        const Eigen::MatrixXcd target = c * be.a_inverse();
        CHECK((block - target).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("gate count and depth stay within half of the published estimates") {
    const auto [p, c] = inversion_polynomial(1.0, 0.5);
    const auto phases = circuit_phases_from_qsp(qsp_phases(p));
    for (int n : {1, 2, 3}) {
        const BlockEncoding be = make_block_encoding(n, 1.0, 0.5, 11);
        const Circuit circ = qsvt_circuit(be, phases);
        const double expect_gates = 4.5 * (n + 2) * (n + 1);
        const double g = double(gate_count(circ));
        CHECK(g >= 0.5 * expect_gates);
        CHECK(g <= 1.5 * expect_gates);
        const double expect_depth = 6.0 * n + 20.0;
        const double dep = double(depth(circ));
        CHECK(dep >= 0.5 * expect_depth);
        CHECK(dep <= 1.5 * expect_depth);
    }
}

TEST_CASE("run_columns: exact backend matches the ideal column distributions") {
    const auto [p, c] = inversion_polynomial(1.0, 0.5);
    const auto phases = circuit_phases_from_qsp(qsp_phases(p));
    const BlockEncoding be = make_block_encoding(2, 1.0, 0.5, 11);
    MatinvBackendOptions opt;
    opt.exact = true;
    const ColumnHistograms hist = run_columns(be, phases, 0, opt, 0);
    const auto ideal = ideal_columns(be, c);
    for (size_t j = 0; j < 4; ++j)
        for (size_t k = 0; k < 4; ++k)
            CHECK(hist.values[j][k] == doctest::Approx(ideal[j][k]).epsilon(1e-8));
    // Score of the exact run is 0.
    CHECK(matinv_score(hist, ideal, 0).value == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("matinv score: limits and monotonicity") {
    std::vector<std::vector<double>> v = {{0.4, 0.1}, {0.1, 0.4}};
    ColumnHistograms same;
    same.n = 1;
    same.shots = 0;
    same.values = v;
    CHECK(matinv_score(same, v, 0).value == doctest::Approx(0.0));

    ColumnHistograms zero;
    zero.n = 1;
    zero.shots = 0;
    zero.values = {{0.0, 0.0}, {0.0, 0.0}};
    CHECK(matinv_score(zero, v, 0).value == doctest::Approx(1.0));

    // Mixing toward the ideal shrinks the score.
    double prev = 2.0;
    for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        ColumnHistograms mix;
        mix.n = 1;
        mix.shots = 0;
        mix.values = v;
        for (size_t j = 0; j < 2; ++j)
            for (size_t k = 0; k < 2; ++k) mix.values[j][k] = lam * v[j][k];
        const double s = matinv_score(mix, v, 0).value;
        CHECK(s <= prev + 1e-12);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        prev = s;
    }
}

TEST_CASE("sampled matinv scores stay near the ideal floor") {
    MatinvBackendOptions opt;
    const MatinvInstance inst = default_matinv_instance(2);
    const MatinvRun run = run_matinv(inst, opt, 12345);
    CHECK(run.score.value < 0.02);
    CHECK(run.score.value >= 0.0);
}

TEST_CASE("overall score is the mean of the three instances") {
    const ScoreWithError o =
        overall_matinv_score({{0.070, 0.008}, {0.149, 0.009}, {0.126, 0.022}});
    CHECK(o.value == doctest::Approx(0.115));

    CHECK(overall_matinv_score({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}).value ==
          doctest::Approx(0.0));
}

TEST_CASE("histogram rendering: clamping and the all-white limit") {
    ColumnHistograms hist;
    hist.n = 1;
    hist.shots = 0;
    hist.values = {{0.0, 0.0}, {0.0, 0.0}};
    auto img = render_histogram_image(hist, 0.5);
    for (uint8_t px : img) CHECK(px == 255);

    hist.values = {{0.5, 0.0}, {0.0, 1.0}};
    img = render_histogram_image(hist, 0.5);
    // prob == ideal max -> 90% black; prob > ideal max -> clamped full black.
    CHECK((img[0] == 25 || img[0] == 26));  // 10% white up to float rounding
    CHECK(img[3] == 0);
}
