#pragma once

// Command implementations behind the preempt executable. Each command
// builds a Table; rendering is a separate step so the commands stay
// testable without a process boundary.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "preempt/model.hpp"
#include "preempt/regulator.hpp"
#include "preempt/sim.hpp"

namespace preempt::cli {

/// Unreadable or structurally malformed configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SimSection {
    SimConfig config;
    double max_truncated = 0.05;  ///< tolerated fraction of trials with no investment
};

struct RunConfig {
    ModelParams model;
    RegulatorLaw law;
    std::optional<double> gamma;
    std::optional<SimSection> sim;
};

RunConfig default_config();
RunConfig parse_config(const nlohmann::ordered_json& doc);
RunConfig load_config(const std::string& path);
nlohmann::ordered_json to_json(const RunConfig& config);

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> warnings;  ///< printed to stderr
};

enum class Format { kTable, kCsv, kJson };

Format parse_format(const std::string& name);
void render(const Table& table, Format format, std::ostream& out);

Table cmd_value(const RunConfig& config, double y);
Table cmd_thresholds(const RunConfig& config);
Table cmd_strategy(const RunConfig& config, double y);
Table cmd_regime(const RunConfig& config);

struct SweepRequest {
    std::string quantity = "p1p2";  ///< p1p2 | options | thresholds_vs_gamma
    double y_min = 0.0;
    double y_max = 2.0;
    double gamma_min = 1e-3;
    double gamma_max = 10.0;
    std::size_t n = 101;
};

Table cmd_sweep(const RunConfig& config, const SweepRequest& request);

/// Throws NumericalFailure when more than sim.max_truncated of the trials
/// never invest within the horizon.
Table cmd_simulate(const RunConfig& config, double y0);

}  // namespace preempt::cli
