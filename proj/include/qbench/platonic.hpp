#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/scoring.hpp"
#include "qbench/sim.hpp"

namespace qbench {

enum class PauliBasis { X = 0, Y = 1, Z = 2 };

struct WeakMeasSpec {
    double strength = 0.75;          // s in (0, 1]
    PauliBasis basis = PauliBasis::Z;

    double theta() const;            // arccos(sqrt((1+s)/2))
    double k() const;                // (1 - sqrt(1-s^2))/s
};

struct BlochPoint {
    double x = 0, y = 0, z = 0;
};

// Appends the weak-measurement block: ancilla |0>, anti-controlled
// exp(i*theta*sigma_x), controlled exp(i*(pi/2-theta)*sigma_x); X/Y bases by
// conjugating the system qubit with basis-change rotations.
void append_weak_block(Circuit& c, int system, int ancilla, const WeakMeasSpec& spec);

// Standalone two-qubit circuit (system = 0, ancilla = 1) for the block.
Circuit weak_circuit(const WeakMeasSpec& spec);

// Bloch-vector update for basis b, outcome o, strength s.
BlochPoint bloch_update(const BlochPoint& r, PauliBasis b, int outcome, double s);

// Probability of outcome o for a weak measurement of basis b on Bloch r.
double weak_outcome_probability(const BlochPoint& r, PauliBasis b, int outcome, double s);

struct TrajectoryLabel {
    std::vector<PauliBasis> bases;   // length d
    std::vector<int> outcomes;       // length d
};

// Folds bloch_update over the label starting from e_x; returns start plus all
// intermediate points (length d + 1).
std::vector<BlochPoint> expected_trajectory(const TrajectoryLabel& label, double s);

struct PlatonicLabelResult {
    TrajectoryLabel label;
    double prob = 0.0;         // analytic label probability
    double y = 0.0, z = 0.0;   // estimated Bloch components
    uint64_t shots_y = 0, shots_z = 0;
    bool low_statistics = false;
};

struct PlatonicRun {
    int depth = 1;
    double strength = 0.75;
    uint64_t shots = 0;
    std::vector<PlatonicLabelResult> labels;  // all 6^d labels
};

struct PlatonicBackendOptions {
    bool exact = false;
    bool noisy = false;
    NoiseModel noise;
};

inline constexpr uint64_t kPlatonicDefaultShots = 131072;
inline constexpr double kPlatonicDefaultStrength = 0.75;

// Runs all 3^d basis sequences with both final bases (Y, Z); groups shots by
// ancilla outcome pattern and estimates the Y/Z Bloch components per label.
PlatonicRun run_platonic(int depth, double strength, uint64_t shots,
                         const PlatonicBackendOptions& backend, uint64_t seed);

// Mean l2 distance between measured and expected (y, z); stderr = sample
// standard deviation of the distances.
ScoreWithError platonic_score(const PlatonicRun& run);

// Overall score for depths 1..3: mean with quadrature stderr / 3.
ScoreWithError overall_platonic_score(const std::array<ScoreWithError, 3>& per_depth);

}  // namespace qbench
