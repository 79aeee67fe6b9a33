#include "qbench/bell.hpp"

#include <cmath>
#include <set>

namespace qbench {

Circuit bell_circuit(const std::vector<int>& path, double theta_a, double theta_b) {
    if (path.size() < 2) throw Error("bell path needs at least two qubits");
    int width = 0;
    for (int q : path) width = std::max(width, q + 1);
    Circuit c(width);

    const int start = path.front(), end = path.back();
    c.add(Gate::one_qubit(gates::X(), start, "X"));
    c.add(Gate::one_qubit(gates::X(), end, "X"));
    c.add(Gate::one_qubit(gates::H(), start, "H"));
    // CNOT ladder out to the far endpoint, then back, leaving a singlet on
    // the endpoints and |0> on the interior.
    for (size_t i = 0; i + 1 < path.size(); ++i)
        c.add(Gate::controlled(path[i], gates::X(), path[i + 1], "CNOT"));
    for (size_t i = path.size() - 2; i >= 1; --i)
        c.add(Gate::controlled(path[i - 1], gates::X(), path[i], "CNOT"));

    // R_A, R_B are Z power gates: theta enters as Z^(theta/pi) = diag(1, e^{i theta}).
    c.add_basis_rotation(Gate::one_qubit(gates::zpow(theta_a / M_PI), start, "RA"));
    c.add_basis_rotation(Gate::one_qubit(gates::zpow(theta_b / M_PI), end, "RB"));
    c.add_basis_rotation(Gate::one_qubit(gates::H(), start, "H"));
    c.add_basis_rotation(Gate::one_qubit(gates::H(), end, "H"));

    c.measured_qubits = {start, end};
    return c;
}

std::pair<double, double> correlation(const CountsHistogram& hist) {
    if (hist.valid_shots == 0) throw EmptyHistogram("correlation needs valid shots");
    uint64_t n_eq = 0;
    for (const auto& [bits, n] : hist.counts) {
        if (bits.size() != 2) throw Error("correlation expects two measured qubits");
        if (bits[0] == bits[1]) n_eq += n;
    }
    const double n = double(hist.valid_shots);
    const double p_eq = double(n_eq) / n;
    const double c = 2.0 * p_eq - 1.0;
    const double dc = 2.0 * binomial_stderr(p_eq, hist.valid_shots);
    return {c, dc};
}

BellResult cbell(int a, int b, const std::array<std::pair<double, double>, 3>& per_setting) {
    BellResult r;
    r.a = a;
    r.b = b;
    for (size_t i = 0; i < 3; ++i) {
        r.corr[i] = per_setting[i].first;
        r.corr_err[i] = per_setting[i].second;
    }
    // C_Bell = C(0, 2pi/3) - C(0, pi/3) - C(pi/3, 2pi/3)
    r.cbell = r.corr[1] - r.corr[0] - r.corr[2];
    r.stderr_ = std::sqrt(r.corr_err[0] * r.corr_err[0] + r.corr_err[1] * r.corr_err[1] +
                          r.corr_err[2] * r.corr_err[2]);
    return r;
}

ScoreWithError bell_score(const std::vector<BellResult>& per_pair, const Topology& topo) {
    const auto wanted = topo.directed_adjacent_pairs();
    std::set<std::pair<int, int>> have;
    double acc = 0.0, err2 = 0.0;
    size_t n = 0;
    for (const auto& r : per_pair) {
        if (!topo.adjacent(r.a, r.b)) continue;
        have.insert({r.a, r.b});
        acc += r.cbell;
        err2 += r.stderr_ * r.stderr_;
        ++n;
    }
    for (const auto& p : wanted)
        if (!have.count(p))
            throw IncompleteCoverage("missing Bell result for directed pair (" +
                                     std::to_string(p.first) + "," + std::to_string(p.second) +
                                     ")");
    ScoreWithError s;
    s.value = acc / double(n);
    s.stderr_ = std::sqrt(err2) / double(n);
    return s;
}

}  // namespace qbench
