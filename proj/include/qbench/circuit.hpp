#pragma once

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbench/errors.hpp"

namespace qbench {

using cplx = std::complex<double>;

// 2x2 unitary stored row-major: {m00, m01, m10, m11}.
using Mat2 = std::array<cplx, 4>;

Mat2 mat2_mul(const Mat2& a, const Mat2& b);
Mat2 mat2_dag(const Mat2& m);
double mat2_unitarity_defect(const Mat2& m);

// A gate is either a one-qubit unitary or a singly-controlled one-qubit
// unitary. Every circuit in the suite is expressible in this set.
struct Gate {
    enum class Kind { OneQubit, Controlled };
    Kind kind = Kind::OneQubit;
    Mat2 matrix{};           // target unitary
    int target = 0;
    int control = -1;        // valid when kind == Controlled
    std::string label;

    static Gate one_qubit(const Mat2& m, int target, std::string label);
    static Gate controlled(int control, const Mat2& m, int target, std::string label);

    std::vector<int> qubits() const;
};

// Named constructors for the gates used across the benchmarks.
namespace gates {
Mat2 I();
Mat2 X();
Mat2 Y();
Mat2 Z();
Mat2 H();
Mat2 S();
Mat2 Sdg();
// Power gates: B^t for B in {X,Y,Z} via principal eigenvalue power,
// B^t = V diag(1, exp(i*pi*t)) V^dag. Angles of the paper's phi-exponents are
// in units of pi, so Z^phi == zpow(phi) verbatim.
Mat2 xpow(double t);
Mat2 ypow(double t);
Mat2 zpow(double t);
// exp(i*theta*sigma_x) and exp(i*phi*sigma_z) (radians).
Mat2 exp_ix(double theta);
Mat2 exp_iz(double phi);
// QFT phase gate R_k = diag(1, exp(2*pi*i/2^k)).
Mat2 qft_rk(int k);
// Reflection (1/sqrt(1+r^2)) [[1, r], [r, -1]] used by the Mandelbrot block.
Mat2 reflection_r(double r);
// Ry(theta) = exp(-i*theta/2 * sigma_y), Rz(lambda) = exp(-i*lambda/2 * sigma_z).
Mat2 ry(double theta);
Mat2 rz(double lambda);
}  // namespace gates

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gate_list;
    // Qubits whose measured bit must equal the given value for a shot to
    // count as valid.
    std::map<int, int> postselect;
    // Qubits read out, in output-bitstring order. Post-selected qubits are
    // also measured.
    std::vector<int> measured_qubits;
    // Optional trailing measurement-basis rotations; excluded from the
    // default depth/gate-count metrics but applied by the simulator.
    std::vector<Gate> basis_rotations;

    Circuit() = default;
    explicit Circuit(int n) : n_qubits(n) {}

    void add(const Gate& g);
    void add_basis_rotation(const Gate& g);
    void append(const Circuit& other);   // same width; concatenates gate lists

    void validate() const;               // unitarity + qubit-range invariants
};

// ASAP-layered depth: minimal layer count with qubit-disjoint layers and
// per-qubit gate order preserved. Empty circuit has depth 0.
int depth(const Circuit& c, bool include_basis_rotations = false);

size_t gate_count(const Circuit& c, bool include_basis_rotations = false);

// JSON wire format used by the mock remote backend.
std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& text);

}  // namespace qbench
