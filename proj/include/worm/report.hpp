#pragma once

// Command runner behind the `worm` executable: builds the domain, runs the
// requested analyses and writes report.json, periods.json and samples.csv.

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "worm/constants.hpp"
#include "worm/dangelo.hpp"
#include "worm/levi.hpp"

namespace worm {

inline constexpr const char* kSchemaVersion = "1.0.0";

enum class ExitCode : int { Ok = 0, CertificationFailure = 1, ConfigError = 2, NumericalError = 3 };

enum class Command { Build, Certify, Dangelo, Constants, All };

const char* command_name(Command c);

struct RunConfig {
    Command command = Command::All;
    std::filesystem::path spec_path;
    std::filesystem::path out_dir = ".";
    std::optional<int> samples;  ///< base grid points per dimension
    std::optional<int> sphere;   ///< fiber directions per base point
    std::optional<int> segments; ///< quadrature segments per loop
    std::optional<double> tol_psc;
    std::optional<double> zero_tol;
    std::optional<double> strong_margin;
    std::optional<double> K; ///< overrides the spec
    bool k_auto = false;     ///< forces the K search
    bool dump_csv = false;
    bool timestamp = false; ///< adds a "timestamp" field; off keeps reports byte-identical

    /// Throws ConfigError for a missing spec file or densities below minimums.
    void validate() const;
};

struct RunResult {
    ExitCode code = ExitCode::Ok;
    nlohmann::json report;
    std::optional<nlohmann::json> periods;
    std::optional<std::string> samples_csv;
    std::string message;
};

/// Runs without touching the filesystem beyond reading the spec.
RunResult execute(const RunConfig& config);

/// execute() plus report files under config.out_dir.  Returns the exit code.
int run(const RunConfig& config, std::ostream& log);

nlohmann::json budget_to_json(const ConstantBudget& budget);
nlohmann::json levi_to_json(const LeviReport& report);
nlohmann::json period_to_json(const PeriodReport& report);

void write_samples_csv(std::ostream& out, const WormDomain& domain, std::span<const BoundarySample> samples,
                       const LeviReport& levi);

/// JSON schema (draft 2020-12 subset) for report.json; periods.json is
/// described by "$defs/periods_file".
std::string report_schema();

/// Checks `doc` against `schema` (type, enum, const, required, properties,
/// additionalProperties, items, minimum, $ref into "$defs").  In strict mode
/// objects with "properties" reject keys they do not list.
std::vector<std::string> validate_json(const nlohmann::json& doc, const nlohmann::json& schema,
                                       bool strict = true);

} // namespace worm
