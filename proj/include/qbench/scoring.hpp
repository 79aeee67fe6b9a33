#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbench/errors.hpp"

namespace qbench {

struct ScoreWithError {
    double value = 0.0;
    double stderr_ = 0.0;  // 1 sigma
};

// sqrt(p(1-p)/n)
double binomial_stderr(double p_hat, uint64_t n);

struct NoiseFit {
    double n_s = 0.0;        // statistical coefficient of 1/sqrt(N)
    double n_d = 0.0;        // device floor
    double n_s_stderr = 0.0;
    double n_d_stderr = 0.0;
    double residual = 0.0;   // rms residual of the fit
};

// Non-negative least squares of score against (1/sqrt(N), 1).
// Needs at least 3 distinct N values.
NoiseFit fit_noise(const std::vector<std::pair<uint64_t, double>>& points);

// Splits shot indices into bins of size 2^k (max_bin, max_bin/2, ..., down
// to 4) after a seeded shuffle; calls score_fn on each bin and returns the
// (bin size, mean score) points used by fit_noise.
std::vector<std::pair<uint64_t, double>> bin_resample(
    uint64_t total_shots, uint64_t max_bin, uint64_t seed,
    const std::function<double(const std::vector<uint32_t>&)>& score_fn);

struct DeviceReport {
    // Keyed by benchmark id: bell, sm, mandelbrot, line, matinv, platonic.
    std::map<std::string, ScoreWithError> overall;
    std::optional<double> quantum_volume;
};

// Normalizes each benchmark to an error score in [0,1], averages the six and
// returns the reciprocal. Throws MissingBenchmark unless all six are present.
double mean_score(const DeviceReport& report);

struct Correlation {
    double r = 0.0;
    double confidence = 0.0;  // 1 - p of the two-sided t-test, n-2 dof
};

Correlation correlate(const std::vector<double>& scores, const std::vector<double>& qv);

// Quadrature helpers.
double quadrature_mean_stderr(const std::vector<double>& errs);

}  // namespace qbench
