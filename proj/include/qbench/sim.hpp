#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/rng.hpp"

namespace qbench {

// Dense statevector, qubit 0 = most significant bit of the basis index.
struct StateVector {
    int n_qubits = 0;
    std::vector<cplx> amplitudes;

    StateVector() = default;
    explicit StateVector(int n)
        : n_qubits(n), amplitudes(size_t(1) << n, cplx(0, 0)) {
        amplitudes[0] = 1.0;
    }

    double norm2() const;
    void apply(const Gate& g);
};

struct CountsHistogram {
    uint64_t shots = 0;
    uint64_t valid_shots = 0;
    std::map<std::string, uint64_t> counts;  // bitstring over measured qubits
};

struct NoiseModel {
    double p1 = 0.0;    // depolarizing probability after 1-qubit gates
    double p2 = 0.0;    // per touched qubit of a 2-qubit gate
    double ro01 = 0.0;  // readout flip 0 -> 1
    double ro10 = 0.0;  // readout flip 1 -> 0

    bool is_zero() const { return p1 == 0 && p2 == 0 && ro01 == 0 && ro10 == 0; }
};

constexpr int kMaxSimQubits = 24;

// Applies gate_list then basis_rotations to |0...0>.
StateVector simulate(const Circuit& c);

// Marginal Born distribution over the given qubits (listed MSB first).
std::vector<double> probabilities(const StateVector& s, const std::vector<int>& qubits);

// Probability that the given qubit measures to `bit`.
double qubit_probability(const StateVector& s, int qubit, int bit);

// Renormalized projection onto qubit == bit and the branch probability.
std::pair<StateVector, double> postselect_state(const StateVector& s, int qubit, int bit);

// Draws shots i.i.d. from the Born distribution over `measured` qubits.
// Shots violating `postselect` count toward shots but not counts.
CountsHistogram sample(const StateVector& s, const std::vector<int>& measured,
                       const std::map<int, int>& postselect, uint64_t shots, uint64_t seed);

// Convenience: exact simulation then sampling with the circuit's own
// measured/postselect annotations.
CountsHistogram sample_circuit(const Circuit& c, uint64_t shots, uint64_t seed);

// Monte-Carlo trajectory noise: after each gate, each touched qubit suffers a
// uniformly random Pauli with probability p1/p2; readout bits flip with
// ro01/ro10. Idle qubits receive no noise.
CountsHistogram sample_noisy(const Circuit& c, const NoiseModel& noise, uint64_t shots,
                             uint64_t seed);

std::string histogram_to_json(const CountsHistogram& h);
CountsHistogram histogram_from_json(const std::string& text);

std::string noise_to_json(const NoiseModel& n);
NoiseModel noise_from_json(const std::string& text);
NoiseModel load_noise(const std::string& path);

}  // namespace qbench
