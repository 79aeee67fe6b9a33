#include "qbench/platonic.hpp"

#include <algorithm>
#include <cmath>

#include "qbench/threadpool.hpp"

namespace qbench {

double WeakMeasSpec::theta() const { return std::acos(std::sqrt((1.0 + strength) / 2.0)); }

double WeakMeasSpec::k() const {
    if (strength <= 0.0) return 0.0;
    return (1.0 - std::sqrt(1.0 - strength * strength)) / strength;
}

namespace {

// Basis change V with V Z V^dag = basis; identity for Z.
Mat2 basis_change(PauliBasis b) {
    switch (b) {
        case PauliBasis::X:
            return gates::H();
        case PauliBasis::Y:
            return mat2_mul(gates::S(), gates::H());
        case PauliBasis::Z:
            return gates::I();
    }
    return gates::I();
}

double axis_component(const BlochPoint& r, PauliBasis b) {
    switch (b) {
        case PauliBasis::X:
            return r.x;
        case PauliBasis::Y:
            return r.y;
        case PauliBasis::Z:
            return r.z;
    }
    return 0.0;
}

}  // namespace

void append_weak_block(Circuit& c, int system, int ancilla, const WeakMeasSpec& spec) {
    const double th = spec.theta();
    const Mat2 v = basis_change(spec.basis);
    if (spec.basis != PauliBasis::Z)
        c.add(Gate::one_qubit(mat2_dag(v), system, "basis_in"));
    // Anti-controlled exp(i th sx) followed by controlled exp(i (pi/2 - th) sx)
    // merged into one controlled gate and one ancilla rotation.
    c.add(Gate::controlled(system, gates::exp_ix(M_PI / 2 - 2 * th), ancilla, "CWeak"));
    c.add(Gate::one_qubit(gates::exp_ix(th), ancilla, "Xexp"));
    if (spec.basis != PauliBasis::Z)
        c.add(Gate::one_qubit(v, system, "basis_out"));
    c.measured_qubits.push_back(ancilla);
}

Circuit weak_circuit(const WeakMeasSpec& spec) {
    const double th = spec.theta();
    Circuit c(2);
    const Mat2 v = basis_change(spec.basis);
    if (spec.basis != PauliBasis::Z) c.add(Gate::one_qubit(mat2_dag(v), 0, "basis_in"));
    // Literal anti-control via X conjugation.
    c.add(Gate::one_qubit(gates::X(), 0, "X"));
    c.add(Gate::controlled(0, gates::exp_ix(th), 1, "CXexp"));
    c.add(Gate::one_qubit(gates::X(), 0, "X"));
    c.add(Gate::controlled(0, gates::exp_ix(M_PI / 2 - th), 1, "CXexp"));
    if (spec.basis != PauliBasis::Z) c.add(Gate::one_qubit(v, 0, "basis_out"));
    c.measured_qubits = {1};
    return c;
}

BlochPoint bloch_update(const BlochPoint& r, PauliBasis b, int outcome, double s) {
    const double k = WeakMeasSpec{s, b}.k();
    const double sign = outcome == 0 ? 1.0 : -1.0;
    BlochPoint n{0, 0, 0};
    switch (b) {
        case PauliBasis::X:
            n.x = sign;
            break;
        case PauliBasis::Y:
            n.y = sign;
            break;
        case PauliBasis::Z:
            n.z = sign;
            break;
    }
    const double nr = n.x * r.x + n.y * r.y + n.z * r.z;
    const double denom = 1.0 + k * k + 2.0 * k * nr;
    const double rc = (1.0 - k * k) / denom;
    const double nc = 2.0 * k * (1.0 + k * nr) / denom;
    return {rc * r.x + nc * n.x, rc * r.y + nc * n.y, rc * r.z + nc * n.z};
}

double weak_outcome_probability(const BlochPoint& r, PauliBasis b, int outcome, double s) {
    const double sign = outcome == 0 ? 1.0 : -1.0;
    return (1.0 + s * sign * axis_component(r, b)) / 2.0;
}

std::vector<BlochPoint> expected_trajectory(const TrajectoryLabel& label, double s) {
    std::vector<BlochPoint> out;
    BlochPoint r{1, 0, 0};
    out.push_back(r);
    for (size_t i = 0; i < label.bases.size(); ++i) {
        r = bloch_update(r, label.bases[i], label.outcomes[i], s);
        out.push_back(r);
    }
    return out;
}

namespace {

std::vector<PauliBasis> sequence_from_index(int depth, int idx) {
    std::vector<PauliBasis> seq(static_cast<size_t>(depth));
    for (int i = depth - 1; i >= 0; --i) {
        seq[size_t(i)] = PauliBasis(idx % 3);
        idx /= 3;
    }
    return seq;
}

Circuit platonic_circuit(const std::vector<PauliBasis>& seq, double strength,
                         PauliBasis final_basis) {
    const int d = int(seq.size());
    Circuit c(d + 1);
    c.add(Gate::one_qubit(gates::H(), 0, "H"));  // |+>, Bloch e_x
    c.measured_qubits = {0};
    for (int i = 0; i < d; ++i) {
        WeakMeasSpec spec{strength, seq[size_t(i)]};
        append_weak_block(c, 0, i + 1, spec);
    }
    if (final_basis != PauliBasis::Z) {
        const Mat2 v = basis_change(final_basis);
        c.add_basis_rotation(Gate::one_qubit(mat2_dag(v), 0, "final_basis"));
    }
    return c;
}

// Per (sequence, final basis): expectation estimate 1 - 2 P(sys=1) and shot
// count per ancilla pattern.
struct FamilyStats {
    std::vector<double> expectation;   // indexed by ancilla pattern
    std::vector<uint64_t> shots;
};

FamilyStats run_family(const std::vector<PauliBasis>& seq, double strength,
                       PauliBasis final_basis, uint64_t shots,
                       const PlatonicBackendOptions& backend, uint64_t seed) {
    const int d = int(seq.size());
    const size_t npat = size_t(1) << d;
    FamilyStats st;
    st.expectation.assign(npat, 0.0);
    st.shots.assign(npat, 0);
    const Circuit c = platonic_circuit(seq, strength, final_basis);

    if (backend.exact) {
        const StateVector s = simulate(c);
        // outcome bits: qubit 0 = system, qubits 1..d = ancillas in step order.
        std::vector<double> p_pat(npat, 0.0), p_pat_sys1(npat, 0.0);
        for (size_t i = 0; i < s.amplitudes.size(); ++i) {
            const double p = std::norm(s.amplitudes[i]);
            if (p == 0.0) continue;
            size_t pat = 0;
            for (int a = 1; a <= d; ++a) {
                const size_t qbit = size_t(1) << (c.n_qubits - 1 - a);
                pat = (pat << 1) | ((i & qbit) ? 1u : 0u);
            }
            p_pat[pat] += p;
            if (i & (size_t(1) << (c.n_qubits - 1))) p_pat_sys1[pat] += p;
        }
        for (size_t pat = 0; pat < npat; ++pat) {
            st.expectation[pat] =
                p_pat[pat] > 0.0 ? 1.0 - 2.0 * p_pat_sys1[pat] / p_pat[pat] : 0.0;
            st.shots[pat] = uint64_t(std::llround(p_pat[pat] * double(shots)));
        }
        return st;
    }

    CountsHistogram h;
    if (backend.noisy)
        h = sample_noisy(c, backend.noise, shots, seed);
    else
        h = sample_circuit(c, shots, seed);
    std::vector<uint64_t> n_pat(npat, 0), n_sys1(npat, 0);
    for (const auto& [bits, n] : h.counts) {
        // bits[0] = system, bits[1..d] = ancillas.
        size_t pat = 0;
        for (int a = 1; a <= d; ++a) pat = (pat << 1) | (bits[size_t(a)] == '1' ? 1u : 0u);
        n_pat[pat] += n;
        if (bits[0] == '1') n_sys1[pat] += n;
    }
    for (size_t pat = 0; pat < npat; ++pat) {
        st.shots[pat] = n_pat[pat];
        st.expectation[pat] =
            n_pat[pat] > 0 ? 1.0 - 2.0 * double(n_sys1[pat]) / double(n_pat[pat]) : 0.0;
    }
    return st;
}

}  // namespace

PlatonicRun run_platonic(int depth, double strength, uint64_t shots,
                         const PlatonicBackendOptions& backend, uint64_t seed) {
    if (depth < 1) throw Error("platonic depth must be >= 1");
    if (depth + 1 > kMaxSimQubits) throw WidthExceeded("platonic depth exceeds qubit budget");
    PlatonicRun run;
    run.depth = depth;
    run.strength = strength;
    run.shots = shots;

    int nseq = 1;
    for (int i = 0; i < depth; ++i) nseq *= 3;
    const size_t npat = size_t(1) << depth;
    run.labels.resize(size_t(nseq) * npat);

    std::vector<FamilyStats> stats_y(static_cast<size_t>(nseq)), stats_z(static_cast<size_t>(nseq));
    parallel_for(size_t(nseq) * 2, [&](size_t job) {
        const int si = int(job / 2);
        const bool is_y = (job % 2) == 0;
        const auto seq = sequence_from_index(depth, si);
        const uint64_t s = derive_seed(seed, "platonic/" + std::to_string(depth) + "/" +
                                                 std::to_string(si) + (is_y ? "/y" : "/z"));
        if (is_y)
            stats_y[size_t(si)] = run_family(seq, strength, PauliBasis::Y, shots, backend, s);
        else
            stats_z[size_t(si)] = run_family(seq, strength, PauliBasis::Z, shots, backend, s);
    });

    for (int si = 0; si < nseq; ++si) {
        const auto seq = sequence_from_index(depth, si);
        for (size_t pat = 0; pat < npat; ++pat) {
            PlatonicLabelResult& lr = run.labels[size_t(si) * npat + pat];
            lr.label.bases = seq;
            lr.label.outcomes.resize(size_t(depth));
            for (int i = 0; i < depth; ++i)
                lr.label.outcomes[size_t(i)] = int((pat >> (depth - 1 - i)) & 1);
            // Analytic label probability along the expected trajectory.
            BlochPoint r{1, 0, 0};
            double prob = 1.0;
            for (int i = 0; i < depth; ++i) {
                prob *= weak_outcome_probability(r, seq[size_t(i)],
                                                 lr.label.outcomes[size_t(i)], strength);
                r = bloch_update(r, seq[size_t(i)], lr.label.outcomes[size_t(i)], strength);
            }
            lr.prob = prob;
            lr.y = stats_y[size_t(si)].expectation[pat];
            lr.z = stats_z[size_t(si)].expectation[pat];
            lr.shots_y = stats_y[size_t(si)].shots[pat];
            lr.shots_z = stats_z[size_t(si)].shots[pat];
            lr.low_statistics = lr.shots_y < 16 || lr.shots_z < 16;
        }
    }
    return run;
}

ScoreWithError platonic_score(const PlatonicRun& run) {
    std::vector<double> dists;
    dists.reserve(run.labels.size());
    for (const auto& lr : run.labels) {
        const auto traj = expected_trajectory(lr.label, run.strength);
        const BlochPoint& e = traj.back();
        const double dy = lr.y - e.y, dz = lr.z - e.z;
        dists.push_back(std::sqrt(dy * dy + dz * dz));
    }
    double mean = 0.0;
    for (double d : dists) mean += d;
    mean /= double(dists.size());
    double var = 0.0;
    for (double d : dists) var += (d - mean) * (d - mean);
    const double sd = dists.size() > 1 ? std::sqrt(var / double(dists.size() - 1)) : 0.0;
    return {mean, sd};
}

ScoreWithError overall_platonic_score(const std::array<ScoreWithError, 3>& per_depth) {
    ScoreWithError s;
    s.value = (per_depth[0].value + per_depth[1].value + per_depth[2].value) / 3.0;
    s.stderr_ = std::sqrt(per_depth[0].stderr_ * per_depth[0].stderr_ +
                          per_depth[1].stderr_ * per_depth[1].stderr_ +
                          per_depth[2].stderr_ * per_depth[2].stderr_) /
                3.0;
    return s;
}

}  // namespace qbench
