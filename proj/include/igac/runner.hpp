#pragma once

#include <string>
#include <vector>

#include "igac/complexity.hpp"
#include "igac/scenario.hpp"

namespace igac {

struct Assertion {
    std::string name;
    std::string detail;    // human readable statement of the check
    double measured = 0.0;
    double bound = 0.0;
    bool passed = false;
};

struct RunReport {
    std::string id;
    std::vector<std::string> files;  // paths written, in creation order
    bool has_fit = false;
    GrowthFit fit;
    std::vector<Assertion> assertions;
    double duration_seconds = 0.0;
    std::string error;  // nonempty when the scenario aborted

    bool ok() const {
        if (!error.empty()) return false;
        for (const auto& a : assertions)
            if (!a.passed) return false;
        return true;
    }
};

// Output directory precedence: the override argument (--out), then the
// IGAC_OUT environment variable, then the scenario's [output] dir, then
// "out".
std::string resolve_out_dir(const Scenario& sc,
                            const std::string& out_dir_override);

// Execute one scenario, writing its files under the resolved directory.
// Module errors are rethrown tagged with the pipeline stage.
RunReport run(const Scenario& sc, const std::string& out_dir_override = "");

// All *.scn files in a directory (sorted by name) on a bounded worker pool.
// Per-scenario errors land in the corresponding report instead of aborting
// the batch.
std::vector<RunReport> run_directory(const std::string& dir,
                                     const std::string& out_dir_override,
                                     int workers);

// Multi-line console summary of one report.
std::string summarize(const RunReport& r);

}  // namespace igac
