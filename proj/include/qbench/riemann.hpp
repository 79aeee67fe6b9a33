#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/scoring.hpp"
#include "qbench/sim.hpp"

namespace qbench {

// Point on the Riemann sphere: a finite complex number or infinity.
struct ExtComplex {
    cplx value{0.0, 0.0};
    bool infinite = false;

    static ExtComplex inf() { return {cplx(0, 0), true}; }
    static ExtComplex of(cplx z) { return {z, false}; }
};

// |psi_z> as a 2-vector (normalized; |psi_inf> = |0>).
std::array<cplx, 2> riemann_state(const ExtComplex& z);

// Rotation pair preparing |psi_z> = Z^{phi2} Y^{phi1} |0> up to global phase.
std::pair<double, double> prepare_psi(const ExtComplex& z);

struct Mobius {
    cplx a, b, c, d;
    ExtComplex apply(const ExtComplex& z) const;
};

// Reads the Möbius coefficients off a 1-qubit unitary's entries.
Mobius mobius_of_unitary(const Mat2& u);

// F : z -> (z^2 + i) / (i z^2 + 1)
ExtComplex F_map(const ExtComplex& z);
ExtComplex F_iter(const ExtComplex& z, int n);

// G_c : z -> z^2 + c
ExtComplex Gc_map(const ExtComplex& z, cplx c);
ExtComplex Gc_iter_from_zero(cplx c, int n);

// Microscope level-n circuit on 2^n qubits, all prepared in |psi_z>, with the
// binary-tree multiplexed F block and post-selection on the 2^n - 1 lower
// qubits. Gate count 2*2^n + 4(2^n - 1); depth 2 + 4n.
Circuit microscope_circuit(int level, const ExtComplex& z);

// Two-qubit G_c block on (a, b): maps |psi_z>x|psi_z>, post-selected on b=0,
// to |psi_{z^2+c}> on a. c == 0 degenerates to a single CNOT.
void append_gc_block(Circuit& c, int qa, int qb, cplx param_c);

// Mandelbrot level-n circuit: all qubits in |psi_0> = |1>, multiplexed G_c
// blocks. Gate count 2^n + 11(2^n - 1); depth 1 + 10n.
Circuit mandelbrot_circuit(int level, cplx c);

// Closed-form probabilities: overall post-selection success p_ps and
// conditional top-qubit |1> probability p_1.
std::pair<double, double> analytic_microscope(int level, const ExtComplex& z);
std::pair<double, double> analytic_mandelbrot(int level, cplx c);

// Single-step post-selection probability of the F block on |psi_z>^x2.
double microscope_step_probability(const ExtComplex& z);
// Same for the G_c block.
double gc_step_probability(const ExtComplex& z, cplx c);

struct PixelGrid {
    int resolution = 32;
    std::vector<double> values;  // row-major, row 0 = top (im = +2)

    double& at(int row, int col) { return values[size_t(row * resolution + col)]; }
    double at(int row, int col) const { return values[size_t(row * resolution + col)]; }
};

// Pixel centers: re = -2 + (col+0.5)*4/p, im = +2 - (row+0.5)*4/p.
cplx pixel_center(int resolution, int row, int col);

enum class RiemannKind { Microscope, Mandelbrot };

struct LevelRun {
    RiemannKind kind = RiemannKind::Microscope;
    int level = 1;
    uint64_t shots = 0;
    bool exact = false;
    PixelGrid grid_ps;  // geometric-mean post-selection estimate
    PixelGrid grid_1;   // conditional success frequency
};

struct RiemannBackendOptions {
    bool exact = false;          // exact Born probabilities instead of sampling
    bool noisy = false;
    NoiseModel noise;
};

uint64_t riemann_default_shots(int level);  // Table defaults: 4096, 4096, 8192

LevelRun run_grid(RiemannKind kind, int level, int resolution, uint64_t shots,
                  const RiemannBackendOptions& backend, uint64_t seed);

// Analytic oracle grids at the same convention.
LevelRun oracle_grid(RiemannKind kind, int level, int resolution);

// RMS pixel differences with binomial error propagation.
std::pair<ScoreWithError, ScoreWithError> score_grids(const LevelRun& run,
                                                      const LevelRun& oracle);

// Mean of the four level-1/level-2 scores, quadrature stderr / 4.
ScoreWithError overall_riemann_score(const std::pair<ScoreWithError, ScoreWithError>& level1,
                                     const std::pair<ScoreWithError, ScoreWithError>& level2);

// Per-shot outcome records kept for the statistical/device noise
// disentangling fit: 0 = post-selection failed, 1 = valid with top qubit 0,
// 2 = valid with top qubit 1.
struct GridShotRecords {
    RiemannKind kind = RiemannKind::Microscope;
    int level = 1;
    int resolution = 32;
    uint64_t shots = 0;
    std::vector<std::vector<uint8_t>> codes;  // [pixel][shot]
};

GridShotRecords run_grid_records(RiemannKind kind, int level, int resolution, uint64_t shots,
                                 const RiemannBackendOptions& backend, uint64_t seed);

// Re-scores the grids using only the given shot indices (both scores, values
// only). Used by the bin-resampling noise fit.
std::pair<double, double> score_from_records(const GridShotRecords& records,
                                             const std::vector<uint32_t>& shot_indices,
                                             const LevelRun& oracle);

}  // namespace qbench
