#include "qbench/backend.hpp"

#include <cmath>

#include "qbench/jobqueue.hpp"

namespace qbench {

BackendDescriptor BackendDescriptor::parse(const std::string& text) {
    BackendDescriptor b;
    if (text == "exact") {
        b.kind = Kind::Exact;
    } else if (text == "sample") {
        b.kind = Kind::Sample;
    } else if (text.rfind("noisy:", 0) == 0) {
        b.kind = Kind::Noisy;
        b.noise_path = text.substr(6);
        b.noise = load_noise(b.noise_path);
    } else if (text.rfind("mock-remote:", 0) == 0) {
        b.kind = Kind::MockRemote;
        b.endpoint = text.substr(12);
    } else {
        throw InvalidConfig("unknown backend: " + text);
    }
    return b;
}

std::string BackendDescriptor::to_string() const {
    switch (kind) {
        case Kind::Exact:
            return "exact";
        case Kind::Sample:
            return "sample";
        case Kind::Noisy:
            return "noisy:" + noise_path;
        case Kind::MockRemote:
            return "mock-remote:" + endpoint;
    }
    return "sample";
}

CountsHistogram backend_sample(const BackendDescriptor& backend, const Circuit& c,
                               uint64_t shots, uint64_t seed) {
    switch (backend.kind) {
        case BackendDescriptor::Kind::Exact: {
            // Exact probabilities presented as an idealized histogram with
            // the nominal shot count.
            const StateVector s = simulate(c);
            const auto probs = probabilities(s, c.measured_qubits);
            CountsHistogram h;
            h.shots = shots;
            // Validity fraction from the post-selection projector.
            double pvalid = 0.0;
            for (size_t i = 0; i < s.amplitudes.size(); ++i) {
                const double p = std::norm(s.amplitudes[i]);
                if (p == 0.0) continue;
                bool ok = true;
                for (const auto& [q, bit] : c.postselect) {
                    const size_t qbit = size_t(1) << (c.n_qubits - 1 - q);
                    if (((i & qbit) != 0) != (bit == 1)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) pvalid += p;
            }
            h.valid_shots = uint64_t(std::llround(pvalid * double(shots)));
            (void)probs;
            return h;
        }
        case BackendDescriptor::Kind::Sample:
            return sample_circuit(c, shots, seed);
        case BackendDescriptor::Kind::Noisy:
            return sample_noisy(c, backend.noise, shots, seed);
        case BackendDescriptor::Kind::MockRemote: {
            MockRemoteQueue q(backend.endpoint);
            return q.roundtrip({c}, {shots}, {seed})[0];
        }
    }
    throw Error("unreachable backend kind");
}

}  // namespace qbench
