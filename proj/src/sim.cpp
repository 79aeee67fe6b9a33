#include "qbench/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qbench {

double StateVector::norm2() const {
    double n = 0.0;
    for (const auto& a : amplitudes) n += std::norm(a);
    return n;
}

void StateVector::apply(const Gate& g) {
    const size_t dim = amplitudes.size();
    const size_t tbit = size_t(1) << (n_qubits - 1 - g.target);
    if (g.kind == Gate::Kind::OneQubit) {
        for (size_t i = 0; i < dim; ++i) {
            if (i & tbit) continue;
            const size_t j = i | tbit;
            const cplx a0 = amplitudes[i], a1 = amplitudes[j];
            amplitudes[i] = g.matrix[0] * a0 + g.matrix[1] * a1;
            amplitudes[j] = g.matrix[2] * a0 + g.matrix[3] * a1;
        }
    } else {
        const size_t cbit = size_t(1) << (n_qubits - 1 - g.control);
        for (size_t i = 0; i < dim; ++i) {
            if ((i & tbit) || !(i & cbit)) continue;
            const size_t j = i | tbit;
            const cplx a0 = amplitudes[i], a1 = amplitudes[j];
            amplitudes[i] = g.matrix[0] * a0 + g.matrix[1] * a1;
            amplitudes[j] = g.matrix[2] * a0 + g.matrix[3] * a1;
        }
    }
}

StateVector simulate(const Circuit& c) {
    if (c.n_qubits > kMaxSimQubits)
        throw WidthExceeded("circuit width " + std::to_string(c.n_qubits) + " exceeds " +
                            std::to_string(kMaxSimQubits));
    StateVector s(c.n_qubits);
    for (const auto& g : c.gate_list) s.apply(g);
    for (const auto& g : c.basis_rotations) s.apply(g);
    return s;
}

std::vector<double> probabilities(const StateVector& s, const std::vector<int>& qubits) {
    const size_t k = qubits.size();
    std::vector<double> probs(size_t(1) << k, 0.0);
    const size_t dim = s.amplitudes.size();
    for (size_t i = 0; i < dim; ++i) {
        const double p = std::norm(s.amplitudes[i]);
        if (p == 0.0) continue;
        size_t key = 0;
        for (size_t b = 0; b < k; ++b) {
            const size_t qbit = size_t(1) << (s.n_qubits - 1 - qubits[b]);
            key = (key << 1) | ((i & qbit) ? 1u : 0u);
        }
        probs[key] += p;
    }
    return probs;
}

double qubit_probability(const StateVector& s, int qubit, int bit) {
    const size_t qbit = size_t(1) << (s.n_qubits - 1 - qubit);
    double p = 0.0;
    for (size_t i = 0; i < s.amplitudes.size(); ++i)
        if (((i & qbit) != 0) == (bit == 1)) p += std::norm(s.amplitudes[i]);
    return p;
}

std::pair<StateVector, double> postselect_state(const StateVector& s, int qubit, int bit) {
    const double p = qubit_probability(s, qubit, bit);
    if (p < 1e-14) throw ZeroBranch("post-selection branch has vanishing probability");
    StateVector out = s;
    const size_t qbit = size_t(1) << (s.n_qubits - 1 - qubit);
    const double inv = 1.0 / std::sqrt(p);
    for (size_t i = 0; i < out.amplitudes.size(); ++i) {
        if (((i & qbit) != 0) == (bit == 1))
            out.amplitudes[i] *= inv;
        else
            out.amplitudes[i] = 0.0;
    }
    return {out, p};
}

namespace {

std::string bits_to_string(size_t key, size_t nbits) {
    std::string s(nbits, '0');
    for (size_t b = 0; b < nbits; ++b)
        if (key & (size_t(1) << (nbits - 1 - b))) s[b] = '1';
    return s;
}

// Samples one basis index from the cumulative distribution.
size_t draw(const std::vector<double>& cdf, Rng& rng) {
    const double u = rng.next_double() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    size_t i = size_t(it - cdf.begin());
    return std::min(i, cdf.size() - 1);
}

}  // namespace

CountsHistogram sample(const StateVector& s, const std::vector<int>& measured,
                       const std::map<int, int>& postselect, uint64_t shots, uint64_t seed) {
    // Sample full basis states so post-selected qubits outside `measured`
    // still gate validity.
    const size_t dim = s.amplitudes.size();
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (size_t i = 0; i < dim; ++i) {
        acc += std::norm(s.amplitudes[i]);
        cdf[i] = acc;
    }
    Rng rng(seed);
    CountsHistogram h;
    h.shots = shots;
    for (uint64_t t = 0; t < shots; ++t) {
        const size_t outcome = draw(cdf, rng);
        bool ok = true;
        for (const auto& [q, b] : postselect) {
            const size_t qbit = size_t(1) << (s.n_qubits - 1 - q);
            if (((outcome & qbit) != 0) != (b == 1)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        size_t key = 0;
        for (size_t k = 0; k < measured.size(); ++k) {
            const size_t qbit = size_t(1) << (s.n_qubits - 1 - measured[k]);
            key = (key << 1) | ((outcome & qbit) ? 1u : 0u);
        }
        ++h.valid_shots;
        ++h.counts[bits_to_string(key, measured.size())];
    }
    return h;
}

CountsHistogram sample_circuit(const Circuit& c, uint64_t shots, uint64_t seed) {
    const StateVector s = simulate(c);
    return sample(s, c.measured_qubits, c.postselect, shots, seed);
}

CountsHistogram sample_noisy(const Circuit& c, const NoiseModel& noise, uint64_t shots,
                             uint64_t seed) {
    if (noise.is_zero()) return sample_circuit(c, shots, seed);
    if (c.n_qubits > kMaxSimQubits)
        throw WidthExceeded("circuit width exceeds simulator limit");

    Rng rng(seed);
    CountsHistogram h;
    h.shots = shots;
    const Mat2 paulis[3] = {gates::X(), gates::Y(), gates::Z()};

    std::vector<const Gate*> all_gates;
    for (const auto& g : c.gate_list) all_gates.push_back(&g);
    for (const auto& g : c.basis_rotations) all_gates.push_back(&g);

    for (uint64_t t = 0; t < shots; ++t) {
        StateVector s(c.n_qubits);
        for (const Gate* g : all_gates) {
            s.apply(*g);
            const double p = g->kind == Gate::Kind::OneQubit ? noise.p1 : noise.p2;
            if (p <= 0.0) continue;
            for (int q : g->qubits()) {
                if (rng.next_double() < p) {
                    const Mat2& pauli = paulis[rng.next_below(3)];
                    s.apply(Gate::one_qubit(pauli, q, "noise"));
                }
            }
        }
        // Terminal measurement of the full register, then readout flips.
        std::vector<double> cdf(s.amplitudes.size());
        double acc = 0.0;
        for (size_t i = 0; i < cdf.size(); ++i) {
            acc += std::norm(s.amplitudes[i]);
            cdf[i] = acc;
        }
        size_t outcome = draw(cdf, rng);
        if (noise.ro01 > 0.0 || noise.ro10 > 0.0) {
            for (int q = 0; q < c.n_qubits; ++q) {
                const size_t qbit = size_t(1) << (c.n_qubits - 1 - q);
                const bool one = (outcome & qbit) != 0;
                const double pflip = one ? noise.ro10 : noise.ro01;
                if (pflip > 0.0 && rng.next_double() < pflip) outcome ^= qbit;
            }
        }
        bool ok = true;
        for (const auto& [q, b] : c.postselect) {
            const size_t qbit = size_t(1) << (c.n_qubits - 1 - q);
            if (((outcome & qbit) != 0) != (b == 1)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        size_t key = 0;
        for (size_t k = 0; k < c.measured_qubits.size(); ++k) {
            const size_t qbit = size_t(1) << (c.n_qubits - 1 - c.measured_qubits[k]);
            key = (key << 1) | ((outcome & qbit) ? 1u : 0u);
        }
        ++h.valid_shots;
        ++h.counts[bits_to_string(key, c.measured_qubits.size())];
    }
    return h;
}

std::string histogram_to_json(const CountsHistogram& h) {
    nlohmann::json j;
    j["shots"] = h.shots;
    j["valid_shots"] = h.valid_shots;
    j["counts"] = nlohmann::json::object();
    for (const auto& [bits, n] : h.counts) j["counts"][bits] = n;
    return j.dump();
}

CountsHistogram histogram_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedJob(std::string("bad histogram JSON: ") + e.what());
    }
    CountsHistogram h;
    h.shots = j.at("shots").get<uint64_t>();
    if (j.contains("valid_shots")) h.valid_shots = j["valid_shots"].get<uint64_t>();
    for (auto it = j.at("counts").begin(); it != j.at("counts").end(); ++it)
        h.counts[it.key()] = it.value().get<uint64_t>();
    if (!j.contains("valid_shots")) {
        h.valid_shots = 0;
        for (const auto& [k, v] : h.counts) h.valid_shots += v;
    }
    return h;
}

std::string noise_to_json(const NoiseModel& n) {
    nlohmann::json j;
    j["p1"] = n.p1;
    j["p2"] = n.p2;
    j["ro01"] = n.ro01;
    j["ro10"] = n.ro10;
    return j.dump();
}

NoiseModel noise_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(std::string("bad noise JSON: ") + e.what());
    }
    NoiseModel n;
    n.p1 = j.value("p1", 0.0);
    n.p2 = j.value("p2", 0.0);
    n.ro01 = j.value("ro01", 0.0);
    n.ro10 = j.value("ro10", 0.0);
    for (double v : {n.p1, n.p2, n.ro01, n.ro10})
        if (v < 0.0 || v > 1.0) throw InvalidConfig("noise probabilities must lie in [0,1]");
    return n;
}

NoiseModel load_noise(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open noise file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return noise_from_json(ss.str());
}

}  // namespace qbench
