#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qbench/jobqueue.hpp"
#include "qbench/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBackend = 3;

void add_common(CLI::App* cmd, qbench::RunManifest& m, std::string& out_dir) {
    cmd->add_option("--backend", m.backend,
                    "exact | sample | noisy:noise.json | mock-remote:dir");
    cmd->add_option("--seed", m.seed, "root RNG seed");
    cmd->add_option("--shots", m.shots, "shots per circuit (0 = benchmark default)");
    cmd->add_option("--out", out_dir, "run directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qbench: structured quantum benchmark suite"};
    app.require_subcommand(1);

    qbench::RunManifest manifest;
    std::string out_dir;
    std::string run_dir;
    std::string results_dir;
    std::string manifest_path;
    std::string worker_dir;
    double worker_idle = 30.0;
    uint64_t fit_shots = 4096;
    int fit_level = 1;
    std::string fit_backend = "sample";
    uint64_t fit_seed = 0;
    std::string fit_out;

    CLI::App* run = app.add_subcommand("run", "run a benchmark");
    run->require_subcommand(1);

    CLI::App* bell = run->add_subcommand("bell", "Bell test");
    bell->add_option("--topology", manifest.topology_path, "topology JSON file");
    bell->add_option("--pairs", manifest.pairs, "adjacent | all");
    add_common(bell, manifest, out_dir);

    CLI::App* sm = run->add_subcommand("sm", "Schrodinger's Microscope");
    sm->add_option("--level", manifest.level, "level n (0 = 1..3)");
    sm->add_option("--res", manifest.resolution, "grid resolution");
    sm->add_flag("--allow-deep", manifest.allow_deep, "permit level > 3");
    add_common(sm, manifest, out_dir);

    CLI::App* mandel = run->add_subcommand("mandelbrot", "Mandelbrot");
    mandel->add_option("--level", manifest.level, "level n (0 = 1..3)");
    mandel->add_option("--res", manifest.resolution, "grid resolution");
    mandel->add_flag("--allow-deep", manifest.allow_deep, "permit level > 3");
    add_common(mandel, manifest, out_dir);

    CLI::App* line = run->add_subcommand("line", "Line drawing");
    line->add_option("--curve", manifest.curve, "kite | heart8 | heart16 (empty = all)");
    line->add_option("--batches", manifest.batches, "tomography batches");
    add_common(line, manifest, out_dir);

    CLI::App* matinv = run->add_subcommand("matinv", "Quantum matrix inversion");
    matinv->add_option("--size", manifest.size, "matrix size 2|4|8|16|32|64 (0 = 2,4,8)");
    add_common(matinv, manifest, out_dir);

    CLI::App* platonic = run->add_subcommand("platonic", "Platonic fractals");
    platonic->add_option("--depth", manifest.depth, "measurement steps (0 = 1..3)");
    platonic->add_option("--strength", manifest.strength, "weak measurement strength");
    platonic->add_flag("--allow-deep", manifest.allow_deep, "permit depth > 3");
    add_common(platonic, manifest, out_dir);

    CLI::App* run_manifest = app.add_subcommand("score", "re-run from a manifest file");
    run_manifest->add_option("--manifest", manifest_path, "manifest.json path")->required();
    run_manifest->add_option("--out", run_dir, "run directory")->required();

    CLI::App* render_cmd = app.add_subcommand("render", "render images for a run");
    render_cmd->add_option("dir", run_dir, "run directory")->required();

    CLI::App* report_cmd = app.add_subcommand("report", "collate device report");
    report_cmd->add_option("--device", results_dir, "results directory")->required();

    std::string fit_benchmark = "sm";
    CLI::App* fit = app.add_subcommand("fit-noise", "statistical/device noise fit");
    fit->add_option("--benchmark", fit_benchmark, "benchmark id (sm supported)");
    fit->add_option("--level", fit_level, "microscope level");
    fit->add_option("--shots", fit_shots, "shots per pixel");
    fit->add_option("--backend", fit_backend, "sample | noisy:noise.json");
    fit->add_option("--seed", fit_seed, "root RNG seed");
    fit->add_option("--out", fit_out, "output directory")->required();

    CLI::App* list_cmd = app.add_subcommand("list-benchmarks", "list benchmark ids");

    CLI::App* worker = app.add_subcommand("worker", "serve a mock-remote job directory");
    worker->add_option("--jobs", worker_dir, "job directory")->required();
    worker->add_option("--idle-limit", worker_idle, "exit after this many idle seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) {
            for (CLI::App* sub : {bell, sm, mandel, line, matinv, platonic}) {
                if (sub->parsed()) {
                    manifest.benchmark = sub->get_name();
                    break;
                }
            }
            const auto overall = qbench::run_command(manifest, out_dir);
            std::cout << manifest.benchmark << " overall score: " << overall.value << " +- "
                      << overall.stderr_ << "\n";
            return kExitOk;
        }
        if (run_manifest->parsed()) {
            const auto m = qbench::RunManifest::load(manifest_path);
            const auto overall = qbench::run_command(m, run_dir);
            std::cout << m.benchmark << " overall score: " << overall.value << " +- "
                      << overall.stderr_ << "\n";
            return kExitOk;
        }
        if (render_cmd->parsed()) {
            qbench::render(run_dir);
            std::cout << "images written to " << run_dir << "/images\n";
            return kExitOk;
        }
        if (report_cmd->parsed()) {
            const auto mean = qbench::report(results_dir);
            if (mean)
                std::cout << "mean score: " << *mean << "\n";
            else
                std::cout << "mean score unavailable (missing benchmarks)\n";
            return kExitOk;
        }
        if (fit->parsed()) {
            if (fit_benchmark != "sm")
                throw qbench::InvalidConfig("fit-noise supports only --benchmark sm");
            const auto backend = qbench::BackendDescriptor::parse(fit_backend);
            const auto nf =
                qbench::fit_noise_command(fit_level, fit_shots, backend, fit_seed, fit_out);
            std::cout << "n_s = " << nf.n_s << " +- " << nf.n_s_stderr << ", n_d = " << nf.n_d
                      << " +- " << nf.n_d_stderr << "\n";
            return kExitOk;
        }
        if (list_cmd->parsed()) {
            std::cout << "bell\nsm\nmandelbrot\nline\nmatinv\nplatonic\n";
            return kExitOk;
        }
        if (worker->parsed()) {
            qbench::run_worker_loop(worker_dir, worker_idle);
            return kExitOk;
        }
    } catch (const qbench::InvalidConfig& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qbench::Timeout& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const qbench::MalformedJob& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const qbench::MissingData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBackend;
    }
    return kExitConfig;
}
