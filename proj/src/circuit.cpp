#include "qbench/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace qbench {

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 mat2_dag(const Mat2& m) {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

double mat2_unitarity_defect(const Mat2& m) {
    Mat2 p = mat2_mul(mat2_dag(m), m);
    double d = 0.0;
    d = std::max(d, std::abs(p[0] - 1.0));
    d = std::max(d, std::abs(p[1]));
    d = std::max(d, std::abs(p[2]));
    d = std::max(d, std::abs(p[3] - 1.0));
    return d;
}

Gate Gate::one_qubit(const Mat2& m, int target, std::string label) {
    Gate g;
    g.kind = Kind::OneQubit;
    g.matrix = m;
    g.target = target;
    g.label = std::move(label);
    return g;
}

Gate Gate::controlled(int control, const Mat2& m, int target, std::string label) {
    Gate g;
    g.kind = Kind::Controlled;
    g.matrix = m;
    g.target = target;
    g.control = control;
    g.label = std::move(label);
    return g;
}

std::vector<int> Gate::qubits() const {
    if (kind == Kind::Controlled) return {control, target};
    return {target};
}

namespace gates {

constexpr cplx i1{0.0, 1.0};

Mat2 I() { return {1, 0, 0, 1}; }
Mat2 X() { return {0, 1, 1, 0}; }
Mat2 Y() { return {0, -i1, i1, 0}; }
Mat2 Z() { return {1, 0, 0, -1}; }
Mat2 H() {
    const double s = 1.0 / std::sqrt(2.0);
    return {s, s, s, -s};
}
Mat2 S() { return {1, 0, 0, i1}; }
Mat2 Sdg() { return {1, 0, 0, -i1}; }

static Mat2 pauli_pow(const Mat2& eigvec0, const Mat2&, double t) {
    // eigvec0 columns are the +1 and -1 eigenvectors of the Pauli.
    // B^t = v0 v0^dag + e^{i pi t} v1 v1^dag.
    const cplx w = std::exp(i1 * M_PI * t);
    Mat2 r{};
    const cplx v0[2] = {eigvec0[0], eigvec0[2]};
    const cplx v1[2] = {eigvec0[1], eigvec0[3]};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            r[size_t(a * 2 + b)] = v0[a] * std::conj(v0[b]) + w * v1[a] * std::conj(v1[b]);
    return r;
}

Mat2 xpow(double t) {
    const double s = 1.0 / std::sqrt(2.0);
    Mat2 v = {s, s, s, -s};  // |+>, |->
    return pauli_pow(v, v, t);
}

Mat2 ypow(double t) {
    const double s = 1.0 / std::sqrt(2.0);
    Mat2 v = {s, s, i1 * s, -i1 * s};  // |y+>, |y->
    return pauli_pow(v, v, t);
}

Mat2 zpow(double t) { return {1, 0, 0, std::exp(i1 * M_PI * t)}; }

Mat2 exp_ix(double theta) {
    return {std::cos(theta), i1 * std::sin(theta), i1 * std::sin(theta), std::cos(theta)};
}

Mat2 exp_iz(double phi) { return {std::exp(i1 * phi), 0, 0, std::exp(-i1 * phi)}; }

Mat2 qft_rk(int k) { return {1, 0, 0, std::exp(i1 * (2.0 * M_PI / std::pow(2.0, k)))}; }

Mat2 reflection_r(double r) {
    const double n = 1.0 / std::sqrt(1.0 + r * r);
    return {n, n * r, n * r, -n};
}

Mat2 ry(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return {c, -s, s, c};
}

Mat2 rz(double lambda) {
    return {std::exp(-i1 * (lambda / 2)), 0, 0, std::exp(i1 * (lambda / 2))};
}

}  // namespace gates

void Circuit::add(const Gate& g) { gate_list.push_back(g); }

void Circuit::add_basis_rotation(const Gate& g) { basis_rotations.push_back(g); }

void Circuit::append(const Circuit& other) {
    for (const auto& g : other.gate_list) gate_list.push_back(g);
}

void Circuit::validate() const {
    auto check_gate = [&](const Gate& g) {
        if (mat2_unitarity_defect(g.matrix) > 1e-12)
            throw Error("gate '" + g.label + "' is not unitary to 1e-12");
        for (int q : g.qubits())
            if (q < 0 || q >= n_qubits) throw Error("gate qubit out of range");
        if (g.kind == Gate::Kind::Controlled && g.control == g.target)
            throw Error("control equals target");
    };
    for (const auto& g : gate_list) check_gate(g);
    for (const auto& g : basis_rotations) check_gate(g);
    for (const auto& [q, b] : postselect) {
        if (q < 0 || q >= n_qubits) throw Error("postselect qubit out of range");
        if (b != 0 && b != 1) throw Error("postselect bit must be 0 or 1");
    }
    for (int q : measured_qubits)
        if (q < 0 || q >= n_qubits) throw Error("measured qubit out of range");
}

int depth(const Circuit& c, bool include_basis_rotations) {
    std::vector<int> frontier(size_t(c.n_qubits), 0);
    auto place = [&](const Gate& g) {
        int layer = 0;
        for (int q : g.qubits()) layer = std::max(layer, frontier[size_t(q)]);
        ++layer;
        for (int q : g.qubits()) frontier[size_t(q)] = layer;
    };
    for (const auto& g : c.gate_list) place(g);
    if (include_basis_rotations)
        for (const auto& g : c.basis_rotations) place(g);
    return frontier.empty() ? 0 : *std::max_element(frontier.begin(), frontier.end());
}

size_t gate_count(const Circuit& c, bool include_basis_rotations) {
    return c.gate_list.size() + (include_basis_rotations ? c.basis_rotations.size() : 0);
}

static nlohmann::json gate_to_json(const Gate& g) {
    nlohmann::json jm = nlohmann::json::array();
    for (const auto& e : g.matrix) jm.push_back({e.real(), e.imag()});
    nlohmann::json j;
    j["label"] = g.label;
    j["qubits"] = g.qubits();
    j["matrix"] = jm;
    return j;
}

static Gate gate_from_json(const nlohmann::json& j) {
    Mat2 m;
    const auto& jm = j.at("matrix");
    if (jm.size() != 4) throw MalformedJob("gate matrix must have 4 entries");
    for (size_t k = 0; k < 4; ++k)
        m[k] = cplx(jm[k][0].get<double>(), jm[k][1].get<double>());
    std::vector<int> qs = j.at("qubits").get<std::vector<int>>();
    std::string label = j.at("label").get<std::string>();
    if (qs.size() == 1) return Gate::one_qubit(m, qs[0], label);
    if (qs.size() == 2) return Gate::controlled(qs[0], m, qs[1], label);
    throw MalformedJob("gate must act on 1 or 2 qubits");
}

std::string circuit_to_json(const Circuit& c) {
    nlohmann::json j;
    j["n"] = c.n_qubits;
    j["gates"] = nlohmann::json::array();
    for (const auto& g : c.gate_list) j["gates"].push_back(gate_to_json(g));
    j["basis_rotations"] = nlohmann::json::array();
    for (const auto& g : c.basis_rotations) j["basis_rotations"].push_back(gate_to_json(g));
    j["postselect"] = nlohmann::json::object();
    for (const auto& [q, b] : c.postselect) j["postselect"][std::to_string(q)] = b;
    j["measured"] = c.measured_qubits;
    return j.dump();
}

Circuit circuit_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedJob(std::string("bad circuit JSON: ") + e.what());
    }
    try {
        Circuit c(j.at("n").get<int>());
        for (const auto& jg : j.at("gates")) c.add(gate_from_json(jg));
        if (j.contains("basis_rotations"))
            for (const auto& jg : j["basis_rotations"]) c.add_basis_rotation(gate_from_json(jg));
        if (j.contains("postselect"))
            for (auto it = j["postselect"].begin(); it != j["postselect"].end(); ++it)
                c.postselect[std::stoi(it.key())] = it.value().get<int>();
        if (j.contains("measured"))
            c.measured_qubits = j["measured"].get<std::vector<int>>();
        c.validate();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedJob(std::string("bad circuit JSON: ") + e.what());
    }
}

}  // namespace qbench
