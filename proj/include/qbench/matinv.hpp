#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qbench/circuit.hpp"
#include "qbench/qsp.hpp"
#include "qbench/scoring.hpp"
#include "qbench/sim.hpp"

namespace qbench {

// Block encoding of a Hermitian positive matrix A with two distinct
// eigenvalues; A sits in the bottom-right (ancilla |1>) block of U.
struct BlockEncoding {
    int n = 1;                 // system qubits
    double sigma1 = 1.0, sigma2 = 0.5;
    uint64_t basis_seed = 0;
    Eigen::MatrixXcd A;        // 2^n x 2^n
    std::vector<Gate> u_gates;  // U on local qubits: 0 = block ancilla, 1.. = system

    Eigen::MatrixXcd a_inverse() const;
};

BlockEncoding make_block_encoding(int n, double sigma1, double sigma2, uint64_t seed);

// Dense matrix of U reconstructed from the gate list (test oracle helper).
Eigen::MatrixXcd block_encoding_unitary(const BlockEncoding& be);

// The QSVT circuit of the inversion run: qubit 0 = QSP ancilla, qubit 1 =
// block ancilla, qubits 2..n+1 = system. Alternates U-dagger/U d times with
// the CNOT / Z-rotation / CNOT phase gadgets, H on the QSP ancilla at both
// ends. The block ancilla is initialized to |1>.
Circuit qsvt_circuit(const BlockEncoding& be, const std::vector<double>& circuit_phases);

// Dense (qsp=0, banc=1) block of the circuit action on the system: should
// equal P(A) for the target polynomial.
Eigen::MatrixXcd qsvt_block(const BlockEncoding& be, const std::vector<double>& circuit_phases);

struct ColumnHistograms {
    int n = 1;
    uint64_t shots = 0;
    // values[j][k]: subnormalized frequency of valid outcome k for input |j>.
    std::vector<std::vector<double>> values;
};

struct MatinvBackendOptions {
    bool exact = false;
    bool noisy = false;
    NoiseModel noise;
};

ColumnHistograms run_columns(const BlockEncoding& be, const std::vector<double>& circuit_phases,
                             uint64_t shots, const MatinvBackendOptions& backend, uint64_t seed);

// Ideal valid-outcome distribution v[j][k] = |c (A^-1)_{kj}|^2.
std::vector<std::vector<double>> ideal_columns(const BlockEncoding& be, double scale_c);

// || v - v~ ||_1 / (||v||_1 + ||v~||_1) with binomial error propagation.
ScoreWithError matinv_score(const ColumnHistograms& hist,
                            const std::vector<std::vector<double>>& ideal, uint64_t shots);

ScoreWithError overall_matinv_score(const std::vector<ScoreWithError>& sizes_2_4_8);

// Grayscale rendering: darkness 0.9 * (prob / ideal_max), clamped to 1.
// Returns row-major bytes (255 = white), rows = outcomes, cols = inputs.
std::vector<uint8_t> render_histogram_image(const ColumnHistograms& hist, double ideal_max);

struct MatinvInstance {
    int size = 2;              // matrix dimension 2^n
    double sigma1 = 1.0, sigma2 = 0.5;
    uint64_t basis_seed = 0;
    uint64_t shots = 8192;
};

// Frozen default instances per size (2..64), calibrated so the ideal-max
// probabilities reproduce the published color-scale constants.
MatinvInstance default_matinv_instance(int size);

// Max entry of the ideal valid-outcome distribution for the default instance.
double ideal_max_probability(const MatinvInstance& inst);

struct MatinvRun {
    MatinvInstance instance;
    std::vector<double> circuit_phases;
    double scale_c = 0.0;
    ColumnHistograms hist;
    std::vector<std::vector<double>> ideal;
    ScoreWithError score;
    double ideal_max = 0.0;
};

MatinvRun run_matinv(const MatinvInstance& inst, const MatinvBackendOptions& backend,
                     uint64_t seed);

}  // namespace qbench
