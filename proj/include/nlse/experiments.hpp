// Named experiment presets: committed scenario fixtures plus the pass
// criteria evaluated over their runs. Each preset probes one verified
// property of the dynamics families.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlse/scenario.hpp"

namespace nlse::experiments {

struct Check {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;  ///< the limit the measurement was held against
    bool pass = false;
    std::string note;
};

struct ExperimentReport {
    std::string preset;
    bool pass = false;
    std::vector<Check> checks;
    double runtime_seconds = 0.0;
    std::vector<std::string> artifacts;  ///< CSV files written, if any
    std::string diagnostic;              ///< guard-abort message, if the run failed
    std::vector<std::pair<std::string, std::string>> info;  ///< measured facts, not judgments
};

/// All runnable presets, in criterion order.
const std::vector<std::string>& preset_names();

/// Names of the committed scenario fixture documents.
const std::vector<std::string>& fixture_names();

/// The embedded fixture document (throws std::invalid_argument if unknown).
std::string_view fixture_document(std::string_view name);

/// Parse an embedded fixture (fixtures are unit-tested to be valid).
Scenario load_fixture(std::string_view name);

/// Run one preset and evaluate its criteria. When out_dir is non-empty the
/// scenario CSVs and a <preset>.json report are written there.
ExperimentReport run_experiment(std::string_view preset,
                                const std::filesystem::path& out_dir = {});

/// JSON form of a report (stable key order).
std::string report_to_json(const ExperimentReport& report);

/// One human-readable line per check, prefixed with PASS/FAIL.
std::string format_report(const ExperimentReport& report);

}  // namespace nlse::experiments
