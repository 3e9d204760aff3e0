#pragma once

// Run configuration and report types shared by the command-line driver, with
// JSON and CSV encodings. Numbers are written in shortest round-trip form so
// both encodings parse back to the same doubles.

#include "boolemap/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace boolemap {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Command { iterate_params, verify_pf, geometry, orbit };
enum class OutputFormat { json, csv };

[[nodiscard]] constexpr std::string_view to_string(Command c) noexcept {
    switch (c) {
    case Command::iterate_params: return "iterate-params";
    case Command::verify_pf: return "verify-pf";
    case Command::geometry: return "geometry";
    case Command::orbit: return "orbit";
    }
    return "?";
}

[[nodiscard]] constexpr std::string_view to_string(OutputFormat f) noexcept {
    return f == OutputFormat::csv ? "csv" : "json";
}

[[nodiscard]] inline std::optional<Command> parse_command(std::string_view s) {
    for (Command c : {Command::iterate_params, Command::verify_pf, Command::geometry, Command::orbit})
        if (to_string(c) == s) return c;
    return std::nullopt;
}

[[nodiscard]] inline std::optional<OutputFormat> parse_format(std::string_view s) {
    if (s == "json") return OutputFormat::json;
    if (s == "csv") return OutputFormat::csv;
    return std::nullopt;
}

struct RunConfig {
    Command command = Command::iterate_params;
    double alpha = 0.5;
    double nu0 = 1.0;
    double gamma0 = 1.0;
    double xi0 = 1.4142135623730951;
    std::size_t n = 1'000'000;
    std::size_t steps = 10;
    std::uint64_t seed = 42;
    std::size_t grid_size = 4096;
    std::string output_path = "-"; ///< "-" is stdout
    OutputFormat format = OutputFormat::json;
    unsigned workers = 0;          ///< 0 = hardware concurrency
};

namespace detail {
[[noreturn]] inline void config_error(const std::string& msg) { throw invalid_parameter("invalid configuration: " + msg); }
} // namespace detail

/// Throws invalid_parameter with a message naming the offending flag.
inline void validate(const RunConfig& cfg) {
    std::ostringstream os;
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        os << "--alpha must lie strictly between 0 and 1 (got " << cfg.alpha << "); try --alpha 0.5";
        detail::config_error(os.str());
    }
    if (!std::isfinite(cfg.nu0)) detail::config_error("--nu0 must be a finite number");
    if (!std::isfinite(cfg.gamma0) || !(cfg.gamma0 > 0.0)) {
        os << "--gamma0 must be a finite positive scale (got " << cfg.gamma0 << ")";
        detail::config_error(os.str());
    }
    if (!std::isfinite(cfg.xi0) || cfg.xi0 == 0.0) {
        os << "--xi0 must be finite and nonzero; 0 is the pole of the map (got " << cfg.xi0 << ")";
        detail::config_error(os.str());
    }
    if (cfg.n < 1) detail::config_error("--n must be at least 1");
    if (cfg.steps < 1) detail::config_error("--steps must be at least 1");
    if (cfg.grid_size < 2) detail::config_error("--grid-size must be at least 2 nodes");
    if (cfg.output_path.empty()) detail::config_error("--out must be a file path or '-' for stdout");
    if (cfg.output_path != "-") {
        namespace fs = std::filesystem;
        const fs::path out(cfg.output_path);
        std::error_code ec;
        if (fs::is_directory(out, ec)) detail::config_error("--out '" + cfg.output_path + "' is a directory, expected a file");
        const fs::path parent = out.has_parent_path() ? out.parent_path() : fs::path(".");
        if (!fs::is_directory(parent, ec))
            detail::config_error("--out directory '" + parent.string() + "' does not exist; create it first");
    }
}

/// One tolerance check; passes when value <= tolerance.
struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

[[nodiscard]] inline Check make_check(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, value <= tolerance};
}

/// Column-major description, row-major storage: rows[i][j] is column j of record i.
struct RecordTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct RunReport {
    RunConfig config;
    RecordTable records;
    nlohmann::ordered_json oracles = nlohmann::ordered_json::object(); ///< command-specific values
    std::vector<Check> checks;
    std::vector<std::string> warnings;
    double wall_time_seconds = 0.0;

    [[nodiscard]] bool passed() const {
        for (const Check& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

/// Shortest decimal that parses back to exactly `v`; "nan", "inf", "-inf" otherwise.
[[nodiscard]] inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

[[nodiscard]] inline nlohmann::ordered_json config_to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["command"] = to_string(c.command);
    j["alpha"] = c.alpha;
    j["nu0"] = c.nu0;
    j["gamma0"] = c.gamma0;
    j["xi0"] = c.xi0;
    j["n"] = c.n;
    j["steps"] = c.steps;
    j["seed"] = c.seed;
    j["grid_size"] = c.grid_size;
    j["output_path"] = c.output_path;
    j["format"] = to_string(c.format);
    return j;
}

[[nodiscard]] inline nlohmann::ordered_json to_json(const RunReport& r) {
    nlohmann::ordered_json out;
    out["config"] = config_to_json(r.config);
    auto records = nlohmann::ordered_json::array();
    for (const auto& row : r.records.rows) {
        nlohmann::ordered_json rec;
        for (std::size_t j = 0; j < r.records.columns.size(); ++j) rec[r.records.columns[j]] = row[j];
        records.push_back(std::move(rec));
    }
    out["records"] = std::move(records);
    nlohmann::ordered_json oracles = r.oracles;
    auto checks = nlohmann::ordered_json::array();
    for (const Check& c : r.checks)
        checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    oracles["checks"] = std::move(checks);
    oracles["warnings"] = r.warnings;
    out["oracles"] = std::move(oracles);
    out["meta"] = {{"version", kVersion},
                   {"seed", r.config.seed},
                   {"wall_time_seconds", r.wall_time_seconds},
                   {"passed", r.passed()}};
    return out;
}

[[nodiscard]] inline std::string to_csv(const RunReport& r) {
    std::string out;
    for (std::size_t j = 0; j < r.records.columns.size(); ++j) {
        if (j) out += ',';
        out += r.records.columns[j];
    }
    out += '\n';
    for (const auto& row : r.records.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            out += format_number(row[j]);
        }
        out += '\n';
    }
    return out;
}

inline void write_report(const RunReport& r, OutputFormat format, std::ostream& os) {
    if (format == OutputFormat::csv)
        os << to_csv(r);
    else
        os << to_json(r).dump(2) << '\n';
}

} // namespace boolemap
