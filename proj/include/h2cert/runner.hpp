// Task orchestration behind the CLI: executes one analysis per call and
// assembles the machine report plus optional columnar plot data.

#pragma once

#include <optional>
#include <string>

#include "h2cert/report.hpp"

namespace h2cert::runner {

struct RunOutcome {
    io::Json report;
    bool verdict = false;
    std::string summary;                  // human-readable lines for stdout
    std::optional<std::string> plot_data; // columnar text with '#' headers
};

// Executes cfg.task. Throws std::invalid_argument / std::domain_error on bad
// input (CLI exit 2) and std::runtime_error on numerical failure (exit 3).
RunOutcome run_task(const io::AnalysisConfig& cfg);

std::string serialize_report(const io::Json& report);

}  // namespace h2cert::runner
