#pragma once

#include <array>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/scoring.hpp"
#include "qbench/sim.hpp"
#include "qbench/topology.hpp"

namespace qbench {

// The three rotation settings (theta_A, theta_B) of the Bell test.
inline constexpr std::array<std::pair<double, double>, 3> kBellSettings = {
    std::pair<double, double>{0.0, M_PI / 3},
    std::pair<double, double>{0.0, 2 * M_PI / 3},
    std::pair<double, double>{M_PI / 3, 2 * M_PI / 3},
};

inline constexpr uint64_t kBellDefaultShots = 8192;

struct BellResult {
    int a = 0, b = 0;                 // directed endpoint pair
    std::array<double, 3> corr{};     // C per setting, kBellSettings order
    std::array<double, 3> corr_err{};
    double cbell = 0.0;
    double stderr_ = 0.0;
};

// Singlet preparation along `path` followed by the (theta_A, theta_B)
// rotated X-basis measurement of the endpoints. The measurement-basis
// suffix (R_A, R_B and the two H's) is stored as basis rotations, so
// depth/gate_count report the entangling part only.
Circuit bell_circuit(const std::vector<int>& path, double theta_a, double theta_b);

// C = p_eq - p_ineq = 2 p_eq - 1 from a two-qubit histogram.
std::pair<double, double> correlation(const CountsHistogram& hist);

BellResult cbell(int a, int b, const std::array<std::pair<double, double>, 3>& corr_per_setting);

// Mean C_Bell over all directed adjacent pairs; quadrature-of-the-mean error.
ScoreWithError bell_score(const std::vector<BellResult>& per_pair, const Topology& topo);

}  // namespace qbench
