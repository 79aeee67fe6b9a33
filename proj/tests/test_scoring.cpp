#include <cmath>

#include "doctest.h"
#include "qbench/rng.hpp"
#include "qbench/scoring.hpp"

using namespace qbench;

TEST_CASE("binomial stderr anchors") {
    CHECK(binomial_stderr(0.0, 100) == doctest::Approx(0.0));
    CHECK(binomial_stderr(1.0, 100) == doctest::Approx(0.0));
    CHECK(binomial_stderr(0.5, 100) == doctest::Approx(0.05));
    CHECK(binomial_stderr(0.25, 8192) == doctest::Approx(0.00478).epsilon(1e-3));
    CHECK_THROWS_AS(binomial_stderr(1.5, 10), Error);
}

TEST_CASE("fit_noise recovers an exact synthetic law") {
    std::vector<std::pair<uint64_t, double>> pts;
    for (uint64_t n : {16u, 64u, 256u, 1024u, 4096u})
        pts.emplace_back(n, 2.0 / std::sqrt(double(n)) + 0.03);
    const NoiseFit fit = fit_noise(pts);
    CHECK(fit.n_s == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.n_d == doctest::Approx(0.03).epsilon(1e-9));
    CHECK(fit.residual < 1e-10);
}

TEST_CASE("fit_noise: constant scores give n_s = 0") {
    std::vector<std::pair<uint64_t, double>> pts;
    for (uint64_t n : {16u, 64u, 256u, 1024u}) pts.emplace_back(n, 0.11);
    const NoiseFit fit = fit_noise(pts);
    CHECK(fit.n_s == doctest::Approx(0.0));
    CHECK(fit.n_d == doctest::Approx(0.11));
}

TEST_CASE("fit_noise needs three distinct shot counts") {
    std::vector<std::pair<uint64_t, double>> pts = {{16, 0.5}, {16, 0.4}, {64, 0.3}};
    CHECK_THROWS_AS(fit_noise(pts), InsufficientPoints);
}

TEST_CASE("fit_noise recovers planted parameters within 3 sigma on noisy data") {
    Rng rng(8);
    const double ns = 1.7, nd = 0.02;
    std::vector<std::pair<uint64_t, double>> pts;
    for (uint64_t n = 8; n <= 8192; n *= 2) {
        for (int rep = 0; rep < 8; ++rep) {
            const double mean = ns / std::sqrt(double(n)) + nd;
            // Binomial-ish jitter shrinking with sqrt(n).
            const double jitter = (rng.next_double() * 2 - 1) * 0.3 / std::sqrt(double(n));
            pts.emplace_back(n, mean + jitter);
        }
    }
    const NoiseFit fit = fit_noise(pts);
    CHECK(std::abs(fit.n_s - ns) < 3.0 * std::max(fit.n_s_stderr, 1e-6));
    CHECK(std::abs(fit.n_d - nd) < 3.0 * std::max(fit.n_d_stderr, 1e-6));
}

TEST_CASE("bin_resample: bins shrink by powers of two and reuse every shot once") {
    std::vector<int> seen;
    const auto pts = bin_resample(64, 32, 5, [&](const std::vector<uint32_t>& idx) {
        for (uint32_t i : idx) seen.push_back(int(i));
        return double(idx.size());
    });
    REQUIRE(pts.size() == 4);  // 32, 16, 8, 4
    CHECK(pts[0].first == 32);
    CHECK(pts[3].first == 4);
    for (const auto& [n, v] : pts) CHECK(v == doctest::Approx(double(n)));
}

TEST_CASE("mean_score: anchors, homogeneity and the Bell normalization") {
    DeviceReport rep;
    rep.overall["sm"] = {0.1, 0.0};
    rep.overall["mandelbrot"] = {0.1, 0.0};
    rep.overall["matinv"] = {0.1, 0.0};
    rep.overall["platonic"] = {0.2, 0.0};   // x 1/2 -> 0.1
    rep.overall["line"] = {0.1 * std::sqrt(2.0), 0.0};  // x 1/sqrt2 -> 0.1
    // Bell: (1.5 - s)/s = 0.1 at s = 1.5/1.1.
    rep.overall["bell"] = {1.5 / 1.1, 0.0};
    CHECK(mean_score(rep) == doctest::Approx(10.0).epsilon(1e-9));

    // Halving every error score doubles the mean score.
    DeviceReport half = rep;
    half.overall["sm"].value /= 2;
    half.overall["mandelbrot"].value /= 2;
    half.overall["matinv"].value /= 2;
    half.overall["platonic"].value /= 2;
    half.overall["line"].value /= 2;
    half.overall["bell"] = {1.5 / 1.05, 0.0};  // error 0.05
    CHECK(mean_score(half) == doctest::Approx(20.0).epsilon(1e-9));

    // Perfect Bell contributes zero error.
    DeviceReport perfect = rep;
    perfect.overall["bell"] = {1.5, 0.0};
    const double with_perfect = mean_score(perfect);
    CHECK(with_perfect > mean_score(rep));

    // Weak devices clamp at 1 instead of blowing past the interval.
    DeviceReport weak = rep;
    weak.overall["bell"] = {0.53, 0.33};
    const double bell_err = (1.5 - 0.53) / 0.53;  // > 1 before clamping
    CHECK(bell_err > 1.0);
    CHECK(mean_score(weak) > 0.0);

    DeviceReport missing = rep;
    missing.overall.erase("line");
    CHECK_THROWS_AS(mean_score(missing), MissingBenchmark);
}

TEST_CASE("mean_score is monotone when one benchmark improves") {
    DeviceReport rep;
    rep.overall["sm"] = {0.05, 0.0};
    rep.overall["mandelbrot"] = {0.07, 0.0};
    rep.overall["matinv"] = {0.02, 0.0};
    rep.overall["platonic"] = {0.12, 0.0};
    rep.overall["line"] = {0.22, 0.0};
    rep.overall["bell"] = {1.38, 0.03};
    const double base = mean_score(rep);
    rep.overall["sm"].value = 0.01;
    CHECK(mean_score(rep) >= base);
}

TEST_CASE("correlate: exact and noisy anchors") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y = {2, 4, 6, 8, 10};
    const Correlation up = correlate(x, y);
    CHECK(up.r == doctest::Approx(1.0));
    CHECK(up.confidence > 0.999);

    std::vector<double> yn = {10, 8, 6, 4, 2};
    CHECK(correlate(x, yn).r == doctest::Approx(-1.0));

    // Noisy linear data: r matches the direct formula.
    Rng rng(12);
    std::vector<double> xs, ys;
    for (int i = 0; i < 40; ++i) {
        const double v = rng.next_double();
        xs.push_back(v);
        ys.push_back(0.8 * v + 0.1 * (rng.next_double() - 0.5));
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(xs.size());
    my /= double(xs.size());
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double oracle_r = sxy / std::sqrt(sxx * syy);
    CHECK(correlate(xs, ys).r == doctest::Approx(oracle_r).epsilon(1e-12));
    CHECK(std::abs(correlate(xs, ys).r - oracle_r) < 0.05);

    CHECK_THROWS_AS(correlate({1, 2}, {1, 2}), InsufficientPoints);
}

TEST_CASE("quadrature identity on linear combinations") {
    // stderr of a mean of independent terms: sqrt(sum e_i^2)/n.
    const std::vector<double> errs = {0.3, 0.4};
    CHECK(quadrature_mean_stderr(errs) == doctest::Approx(0.25));
    const std::vector<double> one = {0.7};
    CHECK(quadrature_mean_stderr(one) == doctest::Approx(0.7));
}
