#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qbench/backend.hpp"
#include "qbench/scoring.hpp"

namespace qbench {

inline constexpr const char* kVersion = "0.1.0";

// One benchmark invocation. Re-running a manifest with the same seed on
// local backends reproduces bit-identical histogram and score files.
struct RunManifest {
    std::string benchmark;  // bell | sm | mandelbrot | line | matinv | platonic
    std::string backend = "sample";
    uint64_t seed = 0;
    uint64_t shots = 0;  // 0 = per-benchmark defaults
    // Benchmark-specific knobs (defaults mirror the standard settings).
    int level = 0;       // sm/mandelbrot: 0 = all standard levels
    int resolution = 32;
    std::string curve;   // line: empty = kite, heart8, heart16
    int batches = 25;
    int size = 0;        // matinv: 0 = sizes 2,4,8
    int depth = 0;       // platonic: 0 = depths 1..3
    double strength = 0.75;
    std::string topology_path;  // bell (empty = built-in 5-qubit line)
    std::string pairs = "adjacent";
    bool allow_deep = false;  // unlocks level/depth > 3
    std::string version = kVersion;

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
    static RunManifest load(const std::string& path);
};

// Executes the benchmark and writes manifest.json, histograms/, scores.json
// into run_dir (created if needed). Existing per-circuit histogram files are
// reused, which makes interrupted runs resumable. Returns the overall score.
ScoreWithError run_command(const RunManifest& manifest, const std::string& run_dir);

// Renders the images for a completed run directory (reads scores.json).
void render(const std::string& run_dir);

// Collates per-benchmark overall scores found under results_dir (each run in
// its own subdirectory) into report.json plus a bar chart; returns the mean
// score when all six benchmarks are present.
std::optional<double> report(const std::string& results_dir);

// Score-vs-shots noise decomposition for the microscope benchmark; writes
// noisefit.json and a score-vs-shots plot into out_dir.
NoiseFit fit_noise_command(int level, uint64_t shots, const BackendDescriptor& backend,
                           uint64_t seed, const std::string& out_dir);

}  // namespace qbench
