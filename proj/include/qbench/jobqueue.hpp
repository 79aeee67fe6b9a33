#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/sim.hpp"

namespace qbench {

// File-based mock of a remote execution service. Jobs are JSON files in
// <dir>/jobs/, answers appear in <dir>/results/; a worker process (the local
// simulator behind the file interface) produces them. No sockets involved.
struct MockRemoteQueue {
    std::string dir;
    double timeout_seconds = 30.0;

    explicit MockRemoteQueue(std::string directory) : dir(std::move(directory)) {}

    // Submits circuits and blocks until the worker answered all of them.
    // Results match direct local sampling for the same seeds.
    std::vector<CountsHistogram> roundtrip(const std::vector<Circuit>& circuits,
                                           const std::vector<uint64_t>& shots,
                                           const std::vector<uint64_t>& seeds) const;
};

// Processes pending job files once (used by `qbench worker`). Returns the
// number of jobs answered. Throws MalformedJob on undecodable job files.
int run_worker_pass(const std::string& dir);

// Serves until a stop file appears or idle_limit_seconds elapse with no work.
void run_worker_loop(const std::string& dir, double idle_limit_seconds);

}  // namespace qbench
