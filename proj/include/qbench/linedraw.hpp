#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbench/circuit.hpp"
#include "qbench/scoring.hpp"
#include "qbench/sim.hpp"

namespace qbench {

struct Curve {
    std::string name;          // kite, heart8, heart16 or custom
    std::vector<cplx> points;  // 2^n points, closed polyline in draw order
};

// The three reference curves. The hearts sample the Lissajous figure
// x(t) = 16 sin^3 t, y(t) = 13 cos t - 5 cos 2t - 2 cos 3t - cos 4t at evenly
// spaced t; the kite is a fixed four-point quadrilateral.
Curve reference_curve(const std::string& name);

// Inverse DFT of the curve points, normalized to unit l2 norm.
std::vector<cplx> fourier_coefficients(const Curve& curve);

// State preparation with exactly 2^n - n - 1 CNOTs and 2^n - 1 one-qubit
// gates in the block structure G_1..G_n.
Circuit state_prep_circuit(const std::vector<cplx>& amplitudes, int n_qubits);

// QFT without the final swaps; output read with qubit order reversed.
Circuit qft_circuit(int n_qubits);

// Measurement-basis suffix for a Pauli string over {X,Y,Z} (one char per
// qubit, most significant first). Z wires stay untouched.
std::vector<Gate> pauli_measure_suffix(const std::string& pauli_string);

struct TomographyBatch {
    int n_qubits = 0;
    uint64_t shots_per_string = 0;
    // counts[string index][outcome index]; strings enumerated in base-3 order
    // with digits X=0, Y=1, Z=2, most significant qubit first.
    std::vector<std::vector<double>> counts;
};

std::string pauli_string_from_index(int n_qubits, int index);

struct DensityEstimate {
    Eigen::MatrixXcd L;
    Eigen::VectorXcd top_eigenvector;
    double top_eigenvalue = 0.0;
};

// Assembles the tensor-product estimator from the batch and extracts the
// dominant eigenpair (deterministic; phase fixed to first component >= 0).
DensityEstimate estimate_state(const TomographyBatch& batch);

// (1 - sqrt(p)) + sqrt(p) * min_phi || psi - e^{i phi} psi_tilde ||, with the
// minimum evaluated in closed form. Returns the score and the rotated
// estimate.
std::pair<double, Eigen::VectorXcd> align_and_score(const Eigen::VectorXcd& target,
                                                    const Eigen::VectorXcd& estimate, double p);

struct LineDrawBackendOptions {
    bool exact = false;  // analytic infinite-shot expectations
    bool noisy = false;
    NoiseModel noise;
};

struct LineDrawRun {
    Curve curve;
    ScoreWithError score;
    std::vector<double> batch_scores;
    std::vector<cplx> target_points;     // normalized curve
    std::vector<cplx> estimated_points;  // from the last batch, aligned
};

inline constexpr int kLineDefaultBatches = 25;
inline constexpr uint64_t kLineDefaultShots = 4096;

LineDrawRun run_linedraw(const Curve& curve, int batches, uint64_t shots,
                         const LineDrawBackendOptions& backend, uint64_t seed);

ScoreWithError overall_line_score(const ScoreWithError& kite, const ScoreWithError& heart8);

}  // namespace qbench
