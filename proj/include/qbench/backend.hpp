#pragma once

#include <string>

#include "qbench/circuit.hpp"
#include "qbench/sim.hpp"

namespace qbench {

// Backend selection shared by all benchmark drivers.
//   exact       : Born probabilities, no sampling noise
//   sample      : seeded shot sampling of the ideal distribution
//   noisy:FILE  : Monte-Carlo trajectory noise from a noise JSON
//   mock-remote:DIR : file-based job queue answered by a worker process
struct BackendDescriptor {
    enum class Kind { Exact, Sample, Noisy, MockRemote };
    Kind kind = Kind::Sample;
    NoiseModel noise;
    std::string noise_path;
    std::string endpoint;  // job directory for mock-remote

    static BackendDescriptor parse(const std::string& text);
    std::string to_string() const;
};

// Runs one circuit on the backend. Exact backends still record the nominal
// shot count so score formulas stay defined.
CountsHistogram backend_sample(const BackendDescriptor& backend, const Circuit& c,
                               uint64_t shots, uint64_t seed);

}  // namespace qbench
