// Acceptance runner: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance here is exact agreement.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "homlab/suites.hpp"

int main(int argc, char** argv) {
    homlab::SuiteConfig cfg;
    std::vector<std::string> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) cfg.seed = std::stoull(argv[++i]);
        else if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc) cfg.jobs = std::stoi(argv[++i]);
        else selected.push_back(argv[i]);
    }
    if (selected.empty()) selected = homlab::suite_names();

    int failed_suites = 0;
    for (const std::string& name : selected) {
        auto start = std::chrono::steady_clock::now();
        homlab::SuiteReport rep;
        try {
            rep = homlab::run_suite(name, cfg);
        } catch (const std::exception& e) {
            std::printf("[FAIL] %-28s crashed: %s\n", name.c_str(), e.what());
            ++failed_suites;
            continue;
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::string seed_note = rep.seed ? ", seed " + std::to_string(rep.seed) : "";
        std::printf("[%s] %-28s %6d instances, %d failures (%.1fs%s)\n",
                    rep.ok() ? "PASS" : "FAIL", rep.name.c_str(), rep.instances, rep.failures,
                    secs, seed_note.c_str());
        for (const auto& w : rep.witnesses) std::printf("         witness: %s\n", w.c_str());
        if (!rep.ok()) ++failed_suites;
        std::fflush(stdout);
    }
    return failed_suites == 0 ? 0 : 1;
}
