#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qbench/errors.hpp"

namespace qbench {

// Device interaction graph with vendor-reported gate fidelities.
struct Topology {
    struct Edge {
        int a = 0, b = 0;
        double fidelity = 1.0;
    };
    int n_qubits = 0;
    std::vector<Edge> edges;
    std::vector<double> one_qubit_fidelity;

    bool adjacent(int a, int b) const;
    double edge_fidelity(int a, int b) const;
    std::vector<std::pair<int, int>> directed_adjacent_pairs() const;
    std::vector<std::pair<int, int>> directed_all_pairs() const;

    static Topology line(int n, double fidelity = 0.99);
};

// Among all fewest-edge paths from a to b, returns the one maximizing the
// sum of edge fidelities; ties broken by lexicographically smaller qubit
// sequence. Throws NoPath when a and b are disconnected.
std::vector<int> best_path(const Topology& topo, int a, int b);

std::string topology_to_json(const Topology& t);
Topology topology_from_json(const std::string& text);
Topology load_topology(const std::string& path);

}  // namespace qbench
