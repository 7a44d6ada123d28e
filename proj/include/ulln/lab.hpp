#pragma once

// Experiment runner behind the ulln_lab tool: configuration checks, seeded
// trial dispatch and report serialization.
//
// Trial i of a run uses the sub-seed derive_seed(seed, i); within a trial the
// j-th sample stream uses derive_seed(sub-seed, j). Rows are assembled in
// trial order, so a report depends only on its configuration.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ulln::lab {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kConfigError = 2, kCapacityError = 3, kIoError = 4 };

struct ExperimentConfig {
    std::string experiment;  ///< gap-lip, gap-cvx, ulln-1d, eps-ulln, gadget-stats, shatter
    std::optional<std::uint64_t> nu;
    std::vector<std::uint64_t> nu_list;
    std::optional<std::uint64_t> trials;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    std::optional<double> epsilon;
    std::string out;  ///< empty writes to stdout
    std::string format = "json";
};

struct ConfigIssue {
    enum class Kind { Config, Capacity };
    Kind kind;
    std::string message;
};

const std::vector<std::string>& experiment_names();

/// Every violation, not just the first.
std::vector<ConfigIssue> validate(const ExperimentConfig& config);

/// Trials or seeds actually used, after experiment defaults.
std::uint64_t effective_trials(const ExperimentConfig& config);
/// nu values actually used by the convergence experiments, after defaults.
std::vector<std::uint64_t> effective_nu_list(const ExperimentConfig& config);

struct Report {
    nlohmann::ordered_json config;
    std::vector<std::string> columns;
    /// One JSON scalar (or null) per column.
    std::vector<std::vector<nlohmann::ordered_json>> rows;
    nlohmann::ordered_json summary;
    double wall_time_s = 0.0;
};

/// Runs a validated configuration. Throws CapacityError, DomainError or
/// UnsupportedInput from the experiment modules.
Report run(const ExperimentConfig& config);

nlohmann::ordered_json to_json(const Report& report);
/// Header row, then one line per row; cells are the JSON scalars, strings
/// unquoted, null empty.
void write_csv(const Report& report, std::ostream& os);
void write_json(const Report& report, std::ostream& os);

/// The cell text shared by both encodings.
std::string csv_cell(const nlohmann::ordered_json& value);

}  // namespace ulln::lab
