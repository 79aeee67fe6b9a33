#include "qbench/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qbench/bell.hpp"
#include "qbench/image.hpp"
#include "qbench/linedraw.hpp"
#include "qbench/matinv.hpp"
#include "qbench/platonic.hpp"
#include "qbench/riemann.hpp"
#include "qbench/topology.hpp"

namespace qbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw MissingData("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << text;
    }
    fs::rename(tmp, p);
}

// Load-or-compute for resumable per-circuit histogram files.
CountsHistogram cached_histogram(const fs::path& file,
                                 const std::function<CountsHistogram()>& compute) {
    if (fs::exists(file)) return histogram_from_json(slurp(file));
    const CountsHistogram h = compute();
    write_atomic(file, histogram_to_json(h));
    return h;
}

json score_json(const ScoreWithError& s) {
    return json{{"value", s.value}, {"stderr", s.stderr_}};
}

}  // namespace

std::string RunManifest::to_json() const {
    json j;
    j["benchmark"] = benchmark;
    j["backend"] = backend;
    j["seed"] = seed;
    j["shots"] = shots;
    j["level"] = level;
    j["resolution"] = resolution;
    j["curve"] = curve;
    j["batches"] = batches;
    j["size"] = size;
    j["depth"] = depth;
    j["strength"] = strength;
    j["topology"] = topology_path;
    j["pairs"] = pairs;
    j["allow_deep"] = allow_deep;
    j["version"] = version;
    return j.dump(2);
}

RunManifest RunManifest::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("bad manifest JSON: ") + e.what());
    }
    RunManifest m;
    m.benchmark = j.at("benchmark").get<std::string>();
    m.backend = j.value("backend", std::string("sample"));
    m.seed = j.value("seed", uint64_t(0));
    m.shots = j.value("shots", uint64_t(0));
    m.level = j.value("level", 0);
    m.resolution = j.value("resolution", 32);
    m.curve = j.value("curve", std::string());
    m.batches = j.value("batches", 25);
    m.size = j.value("size", 0);
    m.depth = j.value("depth", 0);
    m.strength = j.value("strength", 0.75);
    m.topology_path = j.value("topology", std::string());
    m.pairs = j.value("pairs", std::string("adjacent"));
    m.allow_deep = j.value("allow_deep", false);
    m.version = j.value("version", std::string(kVersion));
    return m;
}

RunManifest RunManifest::load(const std::string& path) {
    return from_json(slurp(fs::path(path)));
}

namespace {

// ---------------------------------------------------------------- bell ----

json run_bell(const RunManifest& m, const BackendDescriptor& backend, const fs::path& dir,
              ScoreWithError& overall) {
    const Topology topo = m.topology_path.empty() ? Topology::line(5, 0.99)
                                                  : load_topology(m.topology_path);
    const uint64_t shots = m.shots ? m.shots : kBellDefaultShots;
    const auto pairs =
        m.pairs == "all" ? topo.directed_all_pairs() : topo.directed_adjacent_pairs();

    std::vector<BellResult> results;
    for (const auto& [a, b] : pairs) {
        const auto path = best_path(topo, a, b);
        std::array<std::pair<double, double>, 3> corr;
        for (size_t si = 0; si < kBellSettings.size(); ++si) {
            const auto [ta, tb] = kBellSettings[si];
            const Circuit c = bell_circuit(path, ta, tb);
            if (backend.kind == BackendDescriptor::Kind::Exact) {
                const StateVector s = simulate(c);
                const auto probs = probabilities(s, c.measured_qubits);
                const double p_eq = probs[0] + probs[3];
                corr[si] = {2.0 * p_eq - 1.0, 0.0};
            } else {
                const fs::path file = dir / "histograms" /
                                      ("bell_" + std::to_string(a) + "_" + std::to_string(b) +
                                       "_s" + std::to_string(si) + ".json");
                const uint64_t useed =
                    derive_seed(m.seed, "bell/" + std::to_string(a) + "/" + std::to_string(b) +
                                            "/" + std::to_string(si));
                const CountsHistogram h = cached_histogram(
                    file, [&] { return backend_sample(backend, c, shots, useed); });
                corr[si] = correlation(h);
            }
        }
        results.push_back(cbell(a, b, corr));
    }
    overall = bell_score(results, topo);

    json jpairs = json::array();
    for (const auto& r : results) {
        jpairs.push_back({{"a", r.a},
                          {"b", r.b},
                          {"C", {r.corr[0], r.corr[1], r.corr[2]}},
                          {"C_err", {r.corr_err[0], r.corr_err[1], r.corr_err[2]}},
                          {"cbell", r.cbell},
                          {"stderr", r.stderr_}});
    }
    json out;
    out["pairs"] = jpairs;
    out["n_qubits"] = topo.n_qubits;
    out["overall"] = score_json(overall);
    return out;
}

// ----------------------------------------------------- sm / mandelbrot ----

struct PixelCounts {
    uint64_t valid = 0, ones = 0;
};

LevelRun assemble_run(RiemannKind kind, int level, int res, uint64_t shots,
                      const std::vector<PixelCounts>& counts) {
    LevelRun run;
    run.kind = kind;
    run.level = level;
    run.shots = shots;
    run.exact = false;
    run.grid_ps.resolution = res;
    run.grid_1.resolution = res;
    run.grid_ps.values.assign(size_t(res) * res, 0.0);
    run.grid_1.values.assign(size_t(res) * res, 0.0);
    const double root_exp = 1.0 / double((1 << level) - 1);
    for (size_t i = 0; i < counts.size(); ++i) {
        const double F = double(counts[i].valid) / double(shots);
        run.grid_ps.values[i] = std::pow(F, root_exp);
        run.grid_1.values[i] =
            counts[i].valid > 0 ? double(counts[i].ones) / double(counts[i].valid) : 0.0;
    }
    return run;
}

json run_riemann(const RunManifest& m, const BackendDescriptor& backend, const fs::path& dir,
                 ScoreWithError& overall) {
    const RiemannKind kind = m.benchmark == "sm" ? RiemannKind::Microscope
                                                 : RiemannKind::Mandelbrot;
    std::vector<int> levels;
    if (m.level > 0)
        levels = {m.level};
    else
        levels = {1, 2, 3};
    for (int l : levels)
        if (l > 3 && !m.allow_deep)
            throw InvalidConfig("levels above 3 require --allow-deep");
    const int res = m.resolution;
    const char* tag = m.benchmark.c_str();

    json jlevels = json::array();
    std::vector<std::pair<ScoreWithError, ScoreWithError>> level_scores;
    for (int level : levels) {
        const uint64_t shots = m.shots ? m.shots : riemann_default_shots(level);
        LevelRun run;
        if (backend.kind == BackendDescriptor::Kind::Exact) {
            RiemannBackendOptions opt;
            opt.exact = true;
            run = run_grid(kind, level, res, shots, opt, m.seed);
        } else if (backend.kind == BackendDescriptor::Kind::Sample ||
                   backend.kind == BackendDescriptor::Kind::Noisy) {
            RiemannBackendOptions opt;
            opt.noisy = backend.kind == BackendDescriptor::Kind::Noisy;
            opt.noise = backend.noise;
            // Row-level resume: cache per-row pixel counts.
            std::vector<PixelCounts> counts(size_t(res) * res);
            for (int r = 0; r < res; ++r) {
                const fs::path file =
                    dir / "histograms" /
                    (std::string(tag) + "_l" + std::to_string(level) + "_row" +
                     std::to_string(r) + ".json");
                if (fs::exists(file)) {
                    const json jr = json::parse(slurp(file));
                    for (int c = 0; c < res; ++c) {
                        counts[size_t(r * res + c)].valid = jr["valid"][size_t(c)];
                        counts[size_t(r * res + c)].ones = jr["ones"][size_t(c)];
                    }
                    continue;
                }
                json jr;
                jr["valid"] = json::array();
                jr["ones"] = json::array();
                for (int c = 0; c < res; ++c) {
                    const size_t idx = size_t(r * res + c);
                    const cplx z = pixel_center(res, r, c);
                    const Circuit circ = kind == RiemannKind::Microscope
                                             ? microscope_circuit(level, ExtComplex::of(z))
                                             : mandelbrot_circuit(level, z);
                    const uint64_t pseed =
                        derive_seed(m.seed, std::string(tag) + "/" + std::to_string(level) +
                                                "/" + std::to_string(idx));
                    const CountsHistogram h = backend_sample(backend, circ, shots, pseed);
                    uint64_t ones = 0;
                    for (const auto& [bits, n] : h.counts)
                        if (bits[0] == '1') ones += n;
                    counts[idx].valid = h.valid_shots;
                    counts[idx].ones = ones;
                    jr["valid"].push_back(counts[idx].valid);
                    jr["ones"].push_back(counts[idx].ones);
                }
                write_atomic(file, jr.dump());
            }
            run = assemble_run(kind, level, res, shots, counts);
        } else {
            // Mock remote: route every pixel circuit through the queue.
            std::vector<PixelCounts> counts(size_t(res) * res);
            for (size_t idx = 0; idx < counts.size(); ++idx) {
                const int r = int(idx) / res, c = int(idx) % res;
                const cplx z = pixel_center(res, r, c);
                const Circuit circ = kind == RiemannKind::Microscope
                                         ? microscope_circuit(level, ExtComplex::of(z))
                                         : mandelbrot_circuit(level, z);
                const uint64_t pseed = derive_seed(
                    m.seed, std::string(tag) + "/" + std::to_string(level) + "/" +
                                std::to_string(idx));
                const CountsHistogram h = backend_sample(backend, circ, shots, pseed);
                uint64_t ones = 0;
                for (const auto& [bits, n] : h.counts)
                    if (bits[0] == '1') ones += n;
                counts[idx].valid = h.valid_shots;
                counts[idx].ones = ones;
            }
            run = assemble_run(kind, level, res, shots, counts);
        }

        const LevelRun oracle = oracle_grid(kind, level, res);
        const auto scores = score_grids(run, oracle);
        if (level <= 2) level_scores.push_back(scores);

        json jl;
        jl["level"] = level;
        jl["shots"] = shots;
        jl["score_ps"] = score_json(scores.first);
        jl["score_1"] = score_json(scores.second);
        jl["grid_ps"] = run.grid_ps.values;
        jl["grid_1"] = run.grid_1.values;
        jl["oracle_ps"] = oracle.grid_ps.values;
        jl["oracle_1"] = oracle.grid_1.values;
        jlevels.push_back(jl);
    }

    json out;
    out["resolution"] = res;
    out["levels"] = jlevels;
    if (level_scores.size() >= 2) {
        overall = overall_riemann_score(level_scores[0], level_scores[1]);
        out["overall"] = score_json(overall);
    } else if (!level_scores.empty()) {
        overall = {(level_scores[0].first.value + level_scores[0].second.value) / 2.0,
                   std::sqrt(level_scores[0].first.stderr_ * level_scores[0].first.stderr_ +
                             level_scores[0].second.stderr_ * level_scores[0].second.stderr_) /
                       2.0};
        out["overall"] = score_json(overall);
    }
    return out;
}

// ---------------------------------------------------------------- line ----

json run_line(const RunManifest& m, const BackendDescriptor& backend, const fs::path& dir,
              ScoreWithError& overall) {
    std::vector<std::string> curves;
    if (!m.curve.empty())
        curves = {m.curve};
    else
        curves = {"kite", "heart8", "heart16"};
    const uint64_t shots = m.shots ? m.shots : kLineDefaultShots;
    const int batches = m.batches;

    json jcurves = json::array();
    ScoreWithError kite_score{}, heart8_score{};
    bool have_kite = false, have_heart8 = false;
    for (const auto& name : curves) {
        const Curve curve = reference_curve(name);
        const int n = [&] {
            int k = 0;
            while ((size_t(1) << k) < curve.points.size()) ++k;
            return k;
        }();
        Circuit base = state_prep_circuit(fourier_coefficients(curve), n);
        base.append(qft_circuit(n));
        base.measured_qubits.clear();
        for (int q = 0; q < n; ++q) base.measured_qubits.push_back(q);
        int nstrings = 1;
        for (int i = 0; i < n; ++i) nstrings *= 3;
        const size_t npoints = curve.points.size();

        // Physical-order target (QFT swaps dropped).
        Eigen::VectorXcd target(static_cast<long>(npoints));
        for (size_t t = 0; t < npoints; ++t) {
            size_t rv = 0;
            for (int b = 0; b < n; ++b)
                if (t & (size_t(1) << b)) rv |= size_t(1) << (n - 1 - b);
            target(long(rv)) = curve.points[t];
        }

        std::vector<double> batch_scores;
        std::vector<cplx> estimate_points(npoints, cplx(0, 0));
        for (int bi = 0; bi < batches; ++bi) {
            const fs::path file = dir / "histograms" /
                                  ("line_" + name + "_b" + std::to_string(bi) + ".json");
            json jb;
            if (fs::exists(file) && backend.kind != BackendDescriptor::Kind::Exact) {
                jb = json::parse(slurp(file));
            } else {
                jb["counts"] = json::array();
                for (int si = 0; si < nstrings; ++si) {
                    const std::string ps = pauli_string_from_index(n, si);
                    Circuit c = base;
                    c.basis_rotations = pauli_measure_suffix(ps);
                    std::vector<double> row(npoints, 0.0);
                    if (backend.kind == BackendDescriptor::Kind::Exact) {
                        const StateVector s = simulate(c);
                        const auto probs = probabilities(s, c.measured_qubits);
                        for (size_t out = 0; out < npoints; ++out) row[out] = probs[out];
                    } else {
                        const uint64_t cseed = derive_seed(
                            m.seed, "line/" + name + "/" + std::to_string(bi) + "/" + ps);
                        const CountsHistogram h = backend_sample(backend, c, shots, cseed);
                        for (const auto& [bits, cnt] : h.counts) {
                            size_t out = 0;
                            for (char ch : bits) out = (out << 1) | (ch == '1' ? 1u : 0u);
                            row[out] += double(cnt);
                        }
                    }
                    jb["counts"].push_back(row);
                }
                if (backend.kind != BackendDescriptor::Kind::Exact)
                    write_atomic(file, jb.dump());
            }
            TomographyBatch batch;
            batch.n_qubits = n;
            batch.shots_per_string = shots;
            for (const auto& row : jb["counts"])
                batch.counts.push_back(row.get<std::vector<double>>());
            const DensityEstimate est = estimate_state(batch);
            const double p = std::clamp(est.top_eigenvalue, 0.0, 1.0);
            auto [score, rotated] = align_and_score(target, est.top_eigenvector, p);
            batch_scores.push_back(score);
            if (bi == batches - 1) {
                for (size_t t = 0; t < npoints; ++t) {
                    size_t rv = 0;
                    for (int b = 0; b < n; ++b)
                        if (t & (size_t(1) << b)) rv |= size_t(1) << (n - 1 - b);
                    estimate_points[t] = rotated(long(rv));
                }
            }
        }
        double mean = 0.0;
        for (double s : batch_scores) mean += s;
        mean /= double(batch_scores.size());
        double var = 0.0;
        for (double s : batch_scores) var += (s - mean) * (s - mean);
        ScoreWithError sc{mean, batch_scores.size() > 1
                                    ? std::sqrt(var / double(batch_scores.size() - 1)) /
                                          std::sqrt(double(batch_scores.size()))
                                    : 0.0};
        if (name == "kite") {
            kite_score = sc;
            have_kite = true;
        }
        if (name == "heart8") {
            heart8_score = sc;
            have_heart8 = true;
        }
        json jc;
        jc["curve"] = name;
        jc["score"] = score_json(sc);
        jc["batch_scores"] = batch_scores;
        json jt = json::array(), je = json::array();
        for (const auto& z : curve.points) jt.push_back({z.real(), z.imag()});
        for (const auto& z : estimate_points) je.push_back({z.real(), z.imag()});
        jc["target_points"] = jt;
        jc["estimated_points"] = je;
        jcurves.push_back(jc);
    }

    json out;
    out["curves"] = jcurves;
    if (have_kite && have_heart8) {
        overall = overall_line_score(kite_score, heart8_score);
        out["overall"] = score_json(overall);
    } else if (jcurves.size() == 1) {
        overall = {jcurves[0]["score"]["value"], jcurves[0]["score"]["stderr"]};
        out["overall"] = score_json(overall);
    }
    return out;
}

// -------------------------------------------------------------- matinv ----

json run_matinv_bench(const RunManifest& m, const BackendDescriptor& backend,
                      const fs::path& dir, ScoreWithError& overall) {
    std::vector<int> sizes;
    if (m.size > 0)
        sizes = {m.size};
    else
        sizes = {2, 4, 8};

    json jsizes = json::array();
    std::vector<ScoreWithError> size_scores;
    for (int size : sizes) {
        MatinvInstance inst = default_matinv_instance(size);
        if (m.shots) inst.shots = m.shots;
        const int n = [&] {
            int k = 0;
            while ((1 << k) < size) ++k;
            return k;
        }();
        const BlockEncoding be =
            make_block_encoding(n, inst.sigma1, inst.sigma2, inst.basis_seed);
        const auto [poly, c] = inversion_polynomial(inst.sigma1, inst.sigma2);
        const auto phases = circuit_phases_from_qsp(qsp_phases(poly));
        const Circuit core = qsvt_circuit(be, phases);

        ColumnHistograms hist;
        hist.n = n;
        hist.shots = inst.shots;
        hist.values.assign(size_t(size), std::vector<double>(size_t(size), 0.0));
        for (int j = 0; j < size; ++j) {
            Circuit circ(n + 2);
            circ.add(Gate::one_qubit(gates::X(), 1, "X"));
            for (int q = 0; q < n; ++q)
                if (j & (1 << (n - 1 - q))) circ.add(Gate::one_qubit(gates::X(), 2 + q, "X"));
            circ.append(core);
            circ.postselect = core.postselect;
            circ.measured_qubits = core.measured_qubits;
            if (backend.kind == BackendDescriptor::Kind::Exact) {
                const StateVector s = simulate(circ);
                for (int k = 0; k < size; ++k) {
                    const size_t idx = (size_t(1) << n) | size_t(k);
                    hist.values[size_t(j)][size_t(k)] = std::norm(s.amplitudes[idx]);
                }
            } else {
                const fs::path file = dir / "histograms" /
                                      ("matinv_s" + std::to_string(size) + "_col" +
                                       std::to_string(j) + ".json");
                const uint64_t cseed = derive_seed(
                    m.seed, "matinv/" + std::to_string(size) + "/" + std::to_string(j));
                const CountsHistogram h = cached_histogram(
                    file, [&] { return backend_sample(backend, circ, inst.shots, cseed); });
                for (const auto& [bits, cnt] : h.counts) {
                    size_t k = 0;
                    for (size_t b = 2; b < bits.size(); ++b)
                        k = (k << 1) | (bits[b] == '1' ? 1u : 0u);
                    hist.values[size_t(j)][k] += double(cnt) / double(inst.shots);
                }
            }
        }
        const auto ideal = ideal_columns(be, c);
        const ScoreWithError sc = matinv_score(
            hist, ideal, backend.kind == BackendDescriptor::Kind::Exact ? 0 : inst.shots);
        size_scores.push_back(sc);
        double ideal_max = 0.0;
        for (const auto& col : ideal)
            for (double x : col) ideal_max = std::max(ideal_max, x);

        json js;
        js["size"] = size;
        js["shots"] = inst.shots;
        js["sigma1"] = inst.sigma1;
        js["sigma2"] = inst.sigma2;
        js["basis_seed"] = inst.basis_seed;
        js["phases"] = phases;
        js["scale_c"] = c;
        js["ideal_max_prob"] = ideal_max;
        js["score"] = score_json(sc);
        js["histogram"] = hist.values;
        js["ideal"] = ideal;
        jsizes.push_back(js);
    }

    json out;
    out["sizes"] = jsizes;
    if (size_scores.size() == 3) {
        overall = overall_matinv_score(size_scores);
        out["overall"] = score_json(overall);
    } else if (size_scores.size() == 1) {
        overall = size_scores[0];
        out["overall"] = score_json(overall);
    }
    return out;
}

// ------------------------------------------------------------ platonic ----

json run_platonic_bench(const RunManifest& m, const BackendDescriptor& backend,
                        const fs::path& dir, ScoreWithError& overall) {
    std::vector<int> depths;
    if (m.depth > 0)
        depths = {m.depth};
    else
        depths = {1, 2, 3};
    for (int d : depths)
        if (d > 3 && !m.allow_deep) throw InvalidConfig("depths above 3 require --allow-deep");
    const uint64_t shots = m.shots ? m.shots : kPlatonicDefaultShots;

    json jdepths = json::array();
    std::array<ScoreWithError, 3> per_depth{};
    bool standard = depths.size() == 3;
    for (size_t di = 0; di < depths.size(); ++di) {
        const int depth = depths[di];
        PlatonicRun run;
        if (backend.kind == BackendDescriptor::Kind::Exact ||
            backend.kind == BackendDescriptor::Kind::Sample ||
            backend.kind == BackendDescriptor::Kind::Noisy) {
            PlatonicBackendOptions opt;
            opt.exact = backend.kind == BackendDescriptor::Kind::Exact;
            opt.noisy = backend.kind == BackendDescriptor::Kind::Noisy;
            opt.noise = backend.noise;
            run = run_platonic(depth, m.strength, shots, opt, m.seed);
        } else {
            throw InvalidConfig("platonic does not support the mock-remote backend");
        }
        const ScoreWithError sc = platonic_score(run);
        if (standard && di < 3) per_depth[di] = sc;

        json jd;
        jd["depth"] = depth;
        jd["strength"] = m.strength;
        jd["shots"] = shots;
        jd["score"] = score_json(sc);
        json jl = json::array();
        for (const auto& lr : run.labels) {
            json e;
            std::string bases;
            for (auto b : lr.label.bases) bases += "XYZ"[int(b)];
            std::string outs;
            for (int o : lr.label.outcomes) outs += char('0' + o);
            e["bases"] = bases;
            e["outcomes"] = outs;
            e["prob"] = lr.prob;
            e["y"] = lr.y;
            e["z"] = lr.z;
            e["low_statistics"] = lr.low_statistics;
            const auto traj = expected_trajectory(lr.label, m.strength);
            json jt = json::array();
            for (const auto& pt : traj) jt.push_back({pt.y, pt.z});
            e["expected_path"] = jt;
            jl.push_back(e);
        }
        jd["labels"] = jl;
        jdepths.push_back(jd);
    }

    json out;
    out["depths"] = jdepths;
    if (standard) {
        overall = overall_platonic_score(per_depth);
        out["overall"] = score_json(overall);
    } else {
        overall = {jdepths[0]["score"]["value"], jdepths[0]["score"]["stderr"]};
        out["overall"] = score_json(overall);
    }
    return out;
}

}  // namespace

ScoreWithError run_command(const RunManifest& manifest, const std::string& run_dir) {
    const fs::path dir(run_dir);
    fs::create_directories(dir / "histograms");
    const BackendDescriptor backend = BackendDescriptor::parse(manifest.backend);

    // Manifest with timestamp lives alongside the deterministic outputs.
    {
        json j = json::parse(manifest.to_json());
        const auto now = std::chrono::system_clock::now();
        j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                             now.time_since_epoch())
                             .count();
        write_atomic(dir / "manifest.json", j.dump(2));
    }

    ScoreWithError overall{};
    json scores;
    scores["benchmark"] = manifest.benchmark;
    scores["backend"] = manifest.backend;
    scores["seed"] = manifest.seed;
    scores["version"] = manifest.version;
    if (manifest.benchmark == "bell")
        scores["result"] = run_bell(manifest, backend, dir, overall);
    else if (manifest.benchmark == "sm" || manifest.benchmark == "mandelbrot")
        scores["result"] = run_riemann(manifest, backend, dir, overall);
    else if (manifest.benchmark == "line")
        scores["result"] = run_line(manifest, backend, dir, overall);
    else if (manifest.benchmark == "matinv")
        scores["result"] = run_matinv_bench(manifest, backend, dir, overall);
    else if (manifest.benchmark == "platonic")
        scores["result"] = run_platonic_bench(manifest, backend, dir, overall);
    else
        throw InvalidConfig("unknown benchmark: " + manifest.benchmark);

    scores["overall"] = score_json(overall);
    write_atomic(dir / "scores.json", scores.dump(2));
    return overall;
}

// ------------------------------------------------------------- render -----

namespace {

void render_grid_images(const json& result, const std::string& bench, const fs::path& images) {
    const int res = result.at("resolution").get<int>();
    for (const auto& jl : result.at("levels")) {
        const int level = jl.at("level").get<int>();
        for (const char* key : {"grid_ps", "grid_1"}) {
            const auto values = jl.at(key).get<std::vector<double>>();
            const GrayImage img = image_from_grid(values, res, 8);
            const std::string stem =
                bench + "_level" + std::to_string(level) + "_" + (key[5] == 'p' ? "ps" : "p1");
            write_file(images / (stem + ".pgm"), encode_pgm(img));
            write_file(images / (stem + ".png"), encode_png(img));
        }
    }
}

void render_bell_heatmap(const json& result, const fs::path& images) {
    const int n = result.at("n_qubits").get<int>();
    // Full asymmetric matrix; value range [0, 1.5]; diagonal blank (white).
    std::vector<double> grid(size_t(n) * size_t(n), 0.0);
    for (const auto& jp : result.at("pairs")) {
        const int a = jp.at("a").get<int>(), b = jp.at("b").get<int>();
        grid[size_t(a * n + b)] = std::clamp(jp.at("cbell").get<double>() / 1.5, 0.0, 1.0);
    }
    for (int i = 0; i < n; ++i) grid[size_t(i * n + i)] = 0.0;
    const GrayImage img = image_from_grid(grid, n, 32);
    write_file(images / "bell_heatmap.pgm", encode_pgm(img));
    write_file(images / "bell_heatmap.png", encode_png(img));
}

void render_line_curves(const json& result, const fs::path& images) {
    for (const auto& jc : result.at("curves")) {
        const std::string name = jc.at("curve").get<std::string>();
        auto pts = [&](const char* key) {
            std::vector<std::pair<double, double>> out;
            for (const auto& p : jc.at(key))
                out.emplace_back(p[0].get<double>(), p[1].get<double>());
            return out;
        };
        auto target = pts("target_points");
        auto estimate = pts("estimated_points");
        // Scale into a 400x400 canvas.
        double m = 1e-9;
        for (const auto& [x, y] : target) m = std::max({m, std::abs(x), std::abs(y)});
        for (const auto& [x, y] : estimate) m = std::max({m, std::abs(x), std::abs(y)});
        auto mapped = [&](const std::vector<std::pair<double, double>>& in) {
            std::vector<std::pair<double, double>> out;
            for (const auto& [x, y] : in)
                out.emplace_back(200.0 + 180.0 * x / m, 200.0 - 180.0 * y / m);
            return out;
        };
        SvgBuilder svg(400, 400);
        svg.polyline(mapped(target), "black", 2.0, true);
        svg.polyline(mapped(estimate), "red", 1.5, true);
        write_text_file(images / ("line_" + name + ".svg"), svg.finish());
    }
}

void render_matinv_histograms(const json& result, const fs::path& images) {
    for (const auto& js : result.at("sizes")) {
        const int size = js.at("size").get<int>();
        const double ideal_max = js.at("ideal_max_prob").get<double>();
        ColumnHistograms hist;
        hist.n = 0;
        hist.shots = js.at("shots").get<uint64_t>();
        hist.values = js.at("histogram").get<std::vector<std::vector<double>>>();
        const auto img_bytes = render_histogram_image(hist, ideal_max);
        GrayImage img;
        img.width = size;
        img.height = size;
        img.pixels = img_bytes;
        // Upscale for visibility.
        const int scale = std::max(1, 256 / size);
        GrayImage big;
        big.width = size * scale;
        big.height = size * scale;
        big.pixels.assign(size_t(big.width) * size_t(big.height), 255);
        for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c)
                for (int dr = 0; dr < scale; ++dr)
                    for (int dc = 0; dc < scale; ++dc)
                        big.at(r * scale + dr, c * scale + dc) = img.at(r, c);
        const std::string stem = "matinv_" + std::to_string(size);
        write_file(images / (stem + ".pgm"), encode_pgm(big));
        write_file(images / (stem + ".png"), encode_png(big));
    }
}

void render_platonic_lsystem(const json& result, const fs::path& images) {
    for (const auto& jd : result.at("depths")) {
        const int depth = jd.at("depth").get<int>();
        SvgBuilder svg(440, 440);
        auto map_y = [](double y) { return 220.0 + 200.0 * y; };
        auto map_z = [](double z) { return 220.0 - 200.0 * z; };
        // Expected L-system in light gray, measured endpoints in black.
        for (const auto& jl : jd.at("labels")) {
            const auto& path = jl.at("expected_path");
            std::vector<std::pair<double, double>> pts;
            for (const auto& p : path)
                pts.emplace_back(map_y(p[0].get<double>()), map_z(p[1].get<double>()));
            svg.polyline(pts, "#bbbbbb", 0.7);
            svg.circle(map_y(jl.at("y").get<double>()), map_z(jl.at("z").get<double>()), 2.0,
                       "black");
        }
        write_text_file(images / ("platonic_d" + std::to_string(depth) + ".svg"), svg.finish());
    }
}

}  // namespace

void render(const std::string& run_dir) {
    const fs::path dir(run_dir);
    if (!fs::exists(dir / "scores.json"))
        throw MissingData("no scores.json in " + run_dir + "; run the benchmark first");
    const json scores = json::parse(slurp(dir / "scores.json"));
    const fs::path images = dir / "images";
    fs::create_directories(images);
    const std::string bench = scores.at("benchmark").get<std::string>();
    const json& result = scores.at("result");
    if (bench == "sm" || bench == "mandelbrot")
        render_grid_images(result, bench, images);
    else if (bench == "bell")
        render_bell_heatmap(result, images);
    else if (bench == "line")
        render_line_curves(result, images);
    else if (bench == "matinv")
        render_matinv_histograms(result, images);
    else if (bench == "platonic")
        render_platonic_lsystem(result, images);
    else
        throw MissingData("cannot render benchmark: " + bench);
}

// ------------------------------------------------------------- report -----

std::optional<double> report(const std::string& results_dir) {
    const fs::path dir(results_dir);
    if (!fs::exists(dir)) throw MissingData("no such directory: " + results_dir);
    DeviceReport rep;
    json jbench = json::object();
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.path().filename() != "scores.json") continue;
        const json scores = json::parse(slurp(entry.path()));
        if (!scores.contains("overall")) continue;
        const std::string bench = scores.at("benchmark").get<std::string>();
        ScoreWithError s{scores["overall"]["value"].get<double>(),
                         scores["overall"]["stderr"].get<double>()};
        rep.overall[bench] = s;
        jbench[bench] = {{"value", s.value}, {"stderr", s.stderr_}};
    }
    json out;
    out["benchmarks"] = jbench;
    std::optional<double> mean;
    try {
        mean = mean_score(rep);
        out["mean_score"] = *mean;
    } catch (const MissingBenchmark&) {
        out["mean_score"] = nullptr;
        out["note"] = "mean score requires all six benchmarks";
    }
    write_atomic(dir / "report.json", out.dump(2));

    // Bar chart of the normalized per-benchmark error scores.
    SvgBuilder svg(560, 320);
    double x = 40.0;
    for (auto it = rep.overall.begin(); it != rep.overall.end(); ++it) {
        const double v = std::clamp(it->second.value, 0.0, 1.5);
        const double h = 180.0 * std::min(v, 1.0);
        svg.rect(x, 260.0 - h, 50.0, h, "#4477aa");
        svg.text(x, 285.0, it->first, 11.0);
        x += 80.0;
    }
    svg.text(40.0, 30.0,
             mean ? ("mean score: " + std::to_string(*mean)) : "mean score: incomplete", 14.0);
    write_text_file((dir / "meanscores.svg").string(), svg.finish());
    return mean;
}

// ---------------------------------------------------------- fit-noise -----

NoiseFit fit_noise_command(int level, uint64_t shots, const BackendDescriptor& backend,
                           uint64_t seed, const std::string& out_dir) {
    RiemannBackendOptions opt;
    opt.exact = false;
    opt.noisy = backend.kind == BackendDescriptor::Kind::Noisy;
    opt.noise = backend.noise;
    const GridShotRecords rec =
        run_grid_records(RiemannKind::Microscope, level, 32, shots, opt, seed);
    const LevelRun oracle = oracle_grid(RiemannKind::Microscope, level, 32);

    const auto points = bin_resample(shots, shots / 2, derive_seed(seed, "fit/shuffle"),
                                     [&](const std::vector<uint32_t>& idx) {
                                         return score_from_records(rec, idx, oracle).first;
                                     });
    const NoiseFit fit = fit_noise(points);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    json j;
    j["n_s"] = fit.n_s;
    j["n_d"] = fit.n_d;
    j["n_s_stderr"] = fit.n_s_stderr;
    j["n_d_stderr"] = fit.n_d_stderr;
    j["residual"] = fit.residual;
    j["points"] = json::array();
    for (const auto& [n, s] : points) j["points"].push_back({n, s});
    write_atomic(dir / "noisefit.json", j.dump(2));

    // score vs shots on log-x.
    SvgBuilder svg(480, 320);
    double smax = 1e-9;
    for (const auto& [n, s] : points) smax = std::max(smax, s);
    const double x0 = std::log2(4.0), x1 = std::log2(double(shots));
    auto mapx = [&](double n) { return 40.0 + 400.0 * (std::log2(n) - x0) / (x1 - x0); };
    auto mapy = [&](double s) { return 280.0 - 240.0 * s / smax; };
    std::vector<std::pair<double, double>> pts;
    for (const auto& [n, s] : points) {
        svg.circle(mapx(double(n)), mapy(s), 3.0, "black");
        pts.emplace_back(mapx(double(n)), mapy(fit.n_s / std::sqrt(double(n)) + fit.n_d));
    }
    std::sort(pts.begin(), pts.end());
    svg.polyline(pts, "red", 1.5);
    svg.text(40.0, 20.0, "score vs shots (dots: bins, line: n_s/sqrt(N)+n_d)", 12.0);
    write_text_file((dir / "score_vs_shots.svg").string(), svg.finish());
    return fit;
}

}  // namespace qbench
