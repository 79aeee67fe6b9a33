#include "qbench/topology.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include "json.hpp"

namespace qbench {

bool Topology::adjacent(int a, int b) const {
    for (const auto& e : edges)
        if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return true;
    return false;
}

double Topology::edge_fidelity(int a, int b) const {
    for (const auto& e : edges)
        if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.fidelity;
    throw NoPath("no edge between q" + std::to_string(a) + " and q" + std::to_string(b));
}

std::vector<std::pair<int, int>> Topology::directed_adjacent_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& e : edges) {
        out.emplace_back(e.a, e.b);
        out.emplace_back(e.b, e.a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::pair<int, int>> Topology::directed_all_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n_qubits; ++a)
        for (int b = 0; b < n_qubits; ++b)
            if (a != b) out.emplace_back(a, b);
    return out;
}

Topology Topology::line(int n, double fidelity) {
    Topology t;
    t.n_qubits = n;
    for (int i = 0; i + 1 < n; ++i) t.edges.push_back({i, i + 1, fidelity});
    t.one_qubit_fidelity.assign(size_t(n), fidelity);
    return t;
}

std::vector<int> best_path(const Topology& topo, int a, int b) {
    if (a == b) throw Error("best_path endpoints must differ");
    if (a < 0 || b < 0 || a >= topo.n_qubits || b >= topo.n_qubits)
        throw Error("best_path qubit out of range");

    std::vector<std::vector<std::pair<int, double>>> adj(size_t(topo.n_qubits));
    for (const auto& e : topo.edges) {
        adj[size_t(e.a)].emplace_back(e.b, e.fidelity);
        adj[size_t(e.b)].emplace_back(e.a, e.fidelity);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());

    // BFS distances from a, then DP over the shortest-path DAG keeping the
    // (max fidelity sum, lexicographically smallest path) per node.
    const int INF = std::numeric_limits<int>::max();
    std::vector<int> dist(size_t(topo.n_qubits), INF);
    std::queue<int> q;
    dist[size_t(a)] = 0;
    q.push(a);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [v, f] : adj[size_t(u)]) {
            (void)f;
            if (dist[size_t(v)] == INF) {
                dist[size_t(v)] = dist[size_t(u)] + 1;
                q.push(v);
            }
        }
    }
    if (dist[size_t(b)] == INF) throw NoPath("qubits disconnected");

    struct Best {
        double fidsum = -1.0;
        std::vector<int> path;
    };
    std::vector<Best> best(size_t(topo.n_qubits));
    best[size_t(a)] = {0.0, {a}};
    // Process nodes in increasing BFS distance.
    std::vector<int> order(size_t(topo.n_qubits));
    for (int i = 0; i < topo.n_qubits; ++i) order[size_t(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return dist[size_t(x)] < dist[size_t(y)]; });
    for (int u : order) {
        if (dist[size_t(u)] == INF || best[size_t(u)].fidsum < 0) continue;
        for (auto [v, f] : adj[size_t(u)]) {
            if (dist[size_t(v)] != dist[size_t(u)] + 1) continue;
            double cand = best[size_t(u)].fidsum + f;
            std::vector<int> cand_path = best[size_t(u)].path;
            cand_path.push_back(v);
            Best& cur = best[size_t(v)];
            if (cand > cur.fidsum + 1e-15 ||
                (std::abs(cand - cur.fidsum) <= 1e-15 && cand_path < cur.path)) {
                cur.fidsum = cand;
                cur.path = std::move(cand_path);
            }
        }
    }
    return best[size_t(b)].path;
}

std::string topology_to_json(const Topology& t) {
    nlohmann::json j;
    j["n"] = t.n_qubits;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : t.edges)
        j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"fidelity", e.fidelity}});
    j["q1_fidelity"] = t.one_qubit_fidelity;
    return j.dump(2);
}

Topology topology_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(std::string("bad topology JSON: ") + e.what());
    }
    Topology t;
    t.n_qubits = j.at("n").get<int>();
    for (const auto& je : j.at("edges")) {
        Topology::Edge e;
        e.a = je.at("a").get<int>();
        e.b = je.at("b").get<int>();
        e.fidelity = je.at("fidelity").get<double>();
        if (e.fidelity <= 0.0 || e.fidelity > 1.0)
            throw InvalidConfig("edge fidelity must lie in (0,1]");
        t.edges.push_back(e);
    }
    if (j.contains("q1_fidelity"))
        t.one_qubit_fidelity = j["q1_fidelity"].get<std::vector<double>>();
    else
        t.one_qubit_fidelity.assign(size_t(t.n_qubits), 1.0);
    for (double f : t.one_qubit_fidelity)
        if (f <= 0.0 || f > 1.0) throw InvalidConfig("1q fidelity must lie in (0,1]");
    return t;
}

Topology load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open topology file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return topology_from_json(ss.str());
}

}  // namespace qbench
