#include "qbench/jobqueue.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace qbench {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const fs::path& p, const std::string& text) {
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << text;
    }
    fs::rename(tmp, p);
}

}  // namespace

std::vector<CountsHistogram> MockRemoteQueue::roundtrip(const std::vector<Circuit>& circuits,
                                                        const std::vector<uint64_t>& shots,
                                                        const std::vector<uint64_t>& seeds) const {
    if (circuits.size() != shots.size() || circuits.size() != seeds.size())
        throw Error("mock remote: argument sizes differ");
    fs::create_directories(fs::path(dir) / "jobs");
    fs::create_directories(fs::path(dir) / "results");

    std::vector<std::string> ids;
    for (size_t i = 0; i < circuits.size(); ++i) {
        nlohmann::json j;
        j["id"] = "job" + std::to_string(i);
        j["shots"] = shots[i];
        j["seed"] = seeds[i];
        j["circuit"] = nlohmann::json::parse(circuit_to_json(circuits[i]));
        const std::string id = j["id"].get<std::string>();
        ids.push_back(id);
        write_atomic(fs::path(dir) / "jobs" / (id + ".json"), j.dump());
    }

    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_seconds);
    std::vector<CountsHistogram> out(circuits.size());
    std::vector<bool> done(circuits.size(), false);
    size_t remaining = circuits.size();
    while (remaining > 0) {
        for (size_t i = 0; i < ids.size(); ++i) {
            if (done[i]) continue;
            const fs::path rp = fs::path(dir) / "results" / (ids[i] + ".json");
            if (!fs::exists(rp)) continue;
            out[i] = histogram_from_json(slurp(rp));
            done[i] = true;
            --remaining;
        }
        if (remaining == 0) break;
        if (std::chrono::steady_clock::now() > deadline)
            throw Timeout("mock remote worker did not answer in time");
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    return out;
}

int run_worker_pass(const std::string& dir) {
    const fs::path jobs = fs::path(dir) / "jobs";
    const fs::path results = fs::path(dir) / "results";
    if (!fs::exists(jobs)) return 0;
    fs::create_directories(results);
    int answered = 0;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(jobs))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& jp : files) {
        const fs::path rp = results / jp.filename();
        if (fs::exists(rp)) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(slurp(jp));
        } catch (const nlohmann::json::exception& e) {
            throw MalformedJob("unreadable job file " + jp.string() + ": " + e.what());
        }
        if (!j.contains("circuit") || !j.contains("shots") || !j.contains("seed"))
            throw MalformedJob("job file missing fields: " + jp.string());
        const Circuit c = circuit_from_json(j["circuit"].dump());
        const CountsHistogram h =
            sample_circuit(c, j["shots"].get<uint64_t>(), j["seed"].get<uint64_t>());
        write_atomic(rp, histogram_to_json(h));
        ++answered;
    }
    return answered;
}

void run_worker_loop(const std::string& dir, double idle_limit_seconds) {
    auto last_work = std::chrono::steady_clock::now();
    for (;;) {
        if (fs::exists(fs::path(dir) / "stop")) return;
        const int n = run_worker_pass(dir);
        const auto now = std::chrono::steady_clock::now();
        if (n > 0)
            last_work = now;
        else if (std::chrono::duration<double>(now - last_work).count() > idle_limit_seconds)
            return;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
}

}  // namespace qbench
