#include "qbench/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qbench/rng.hpp"

namespace qbench {

double binomial_stderr(double p_hat, uint64_t n) {
    if (p_hat < 0.0 || p_hat > 1.0) throw Error("p_hat must lie in [0,1]");
    if (n < 1) throw Error("n must be >= 1");
    return std::sqrt(p_hat * (1.0 - p_hat) / double(n));
}

NoiseFit fit_noise(const std::vector<std::pair<uint64_t, double>>& points) {
    std::vector<uint64_t> ns;
    for (const auto& [n, s] : points) ns.push_back(n);
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.size() < 3) throw InsufficientPoints("fit_noise needs >= 3 distinct N values");

    // Least squares for score = a/sqrt(N) + b, then clamp negatives to the
    // boundary and re-solve the remaining coefficient.
    const size_t m = points.size();
    double sxx = 0, sx1 = 0, s11 = 0, sxy = 0, s1y = 0;
    for (const auto& [n, y] : points) {
        const double x = 1.0 / std::sqrt(double(n));
        sxx += x * x;
        sx1 += x;
        s11 += 1.0;
        sxy += x * y;
        s1y += y;
    }
    const double det = sxx * s11 - sx1 * sx1;
    double a = (sxy * s11 - s1y * sx1) / det;
    double b = (sxx * s1y - sx1 * sxy) / det;
    if (a < 0.0) {
        a = 0.0;
        b = s1y / s11;
        if (b < 0.0) b = 0.0;
    } else if (b < 0.0) {
        b = 0.0;
        a = sxy / sxx;
        if (a < 0.0) a = 0.0;
    }

    NoiseFit fit;
    fit.n_s = a;
    fit.n_d = b;
    double ss = 0.0;
    for (const auto& [n, y] : points) {
        const double pred = a / std::sqrt(double(n)) + b;
        ss += (y - pred) * (y - pred);
    }
    fit.residual = std::sqrt(ss / double(m));
    // Parameter uncertainties from the unconstrained normal equations.
    const double dof = double(m) > 2 ? double(m) - 2 : 1.0;
    const double sigma2 = ss / dof;
    fit.n_s_stderr = std::sqrt(std::max(0.0, sigma2 * s11 / det));
    fit.n_d_stderr = std::sqrt(std::max(0.0, sigma2 * sxx / det));
    return fit;
}

std::vector<std::pair<uint64_t, double>> bin_resample(
    uint64_t total_shots, uint64_t max_bin, uint64_t seed,
    const std::function<double(const std::vector<uint32_t>&)>& score_fn) {
    std::vector<uint32_t> order(total_shots);
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(seed);
    for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.next_below(i)]);

    std::vector<std::pair<uint64_t, double>> out;
    for (uint64_t bin = max_bin; bin >= 4; bin /= 2) {
        const uint64_t nbins = total_shots / bin;
        if (nbins == 0) continue;
        double acc = 0.0;
        for (uint64_t k = 0; k < nbins; ++k) {
            std::vector<uint32_t> idx(order.begin() + long(k * bin),
                                      order.begin() + long((k + 1) * bin));
            acc += score_fn(idx);
        }
        out.emplace_back(bin, acc / double(nbins));
    }
    return out;
}

double mean_score(const DeviceReport& report) {
    static const char* required[] = {"bell", "sm", "mandelbrot", "line", "matinv", "platonic"};
    double acc = 0.0;
    for (const char* id : required) {
        auto it = report.overall.find(id);
        if (it == report.overall.end())
            throw MissingBenchmark(std::string("missing benchmark: ") + id);
        const double s = it->second.value;
        double err;
        if (std::string(id) == "platonic") {
            err = 0.5 * s;
        } else if (std::string(id) == "line") {
            err = s / std::sqrt(2.0);
        } else if (std::string(id) == "bell") {
            // (1.5 - s)/s exceeds 1 for weak devices; clamp to keep the
            // normalized error inside [0,1].
            err = s > 0.0 ? std::clamp((1.5 - s) / s, 0.0, 1.0) : 1.0;
        } else {
            err = s;
        }
        acc += err;
    }
    const double mean_err = acc / 6.0;
    if (mean_err <= 0.0) throw Error("mean error score is zero; mean score undefined");
    return 1.0 / mean_err;
}

namespace {

// Regularized incomplete beta via the Lentz continued fraction.
double betacf(double a, double b, double x) {
    const double eps = 1e-14, fpmin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

double betai(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    const double front = std::exp(lbeta + a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - std::exp(lbeta + b * std::log(1.0 - x) + a * std::log(x)) *
                     betacf(b, a, 1.0 - x) / b;
}

}  // namespace

Correlation correlate(const std::vector<double>& scores, const std::vector<double>& qv) {
    if (scores.size() != qv.size()) throw Error("correlate: size mismatch");
    const size_t n = scores.size();
    if (n < 3) throw InsufficientPoints("correlate needs >= 3 paired points");
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += scores[i];
        my += qv[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = scores[i] - mx, dy = qv[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Correlation c;
    if (sxx == 0.0 || syy == 0.0) {
        c.r = 0.0;
        c.confidence = 0.0;
        return c;
    }
    c.r = sxy / std::sqrt(sxx * syy);
    const double df = double(n) - 2.0;
    const double r2 = std::min(c.r * c.r, 1.0 - 1e-15);
    const double t2 = r2 * df / (1.0 - r2);
    // Two-sided p-value of the t statistic: I_{df/(df+t^2)}(df/2, 1/2).
    const double p = betai(df / 2.0, 0.5, df / (df + t2));
    c.confidence = 1.0 - p;
    return c;
}

double quadrature_mean_stderr(const std::vector<double>& errs) {
    double acc = 0.0;
    for (double e : errs) acc += e * e;
    return errs.empty() ? 0.0 : std::sqrt(acc) / double(errs.size());
}

}  // namespace qbench
