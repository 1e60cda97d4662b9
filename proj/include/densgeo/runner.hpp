#ifndef DENSGEO_RUNNER_HPP
#define DENSGEO_RUNNER_HPP

#include <json.hpp>

#include <cstdint>
#include <string>

namespace densgeo::cli {

/** Thrown for malformed configs; carries the offending field name.
 * Maps to exit code 1 (numerical failures map to 2). */
struct config_error : std::runtime_error {
    std::string field;
    config_error(const std::string& f, const std::string& msg)
        : std::runtime_error(msg), field(f) {}
};

struct experiment_config {
    std::string module;
    std::string operation;
    int dim = 1;
    int n = 128;
    double length = 1.0;
    nlohmann::json params;
    std::string output_dir = ".";
    std::uint64_t seed = 0;

    static experiment_config from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/** Deterministic payload (config echo, scalar results, residuals, artifact
 * list) plus wall time kept outside the payload so reports hash stably. */
struct run_report {
    nlohmann::json payload;
    double wall_time_ms = 0.0;

    nlohmann::json to_json() const;
    /** 17-significant-digit serialization of the payload alone. */
    std::string payload_dump() const;
};

/** Executes one experiment; writes CSV/JSON artifacts under output_dir. */
run_report run(const experiment_config& cfg);

/** Runs the acceptance criteria (all, or the one with id `only` when > 0);
 * returns the aggregate report. `all_passed` reflects the suite outcome. */
run_report reproduce_all(const std::string& output_dir, int only, bool* all_passed);

} // namespace densgeo::cli

#endif
