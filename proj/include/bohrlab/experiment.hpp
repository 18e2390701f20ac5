#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bohrlab/space_action.hpp"

namespace bohrlab {

// One experiment per run. Config files are plain `key = value` lines with #
// comments; the schema is documented in the README.
struct ExperimentConfig {
    std::map<std::string, std::string> kv;

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& text);

    bool has(const std::string& key) const { return kv.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const;
    std::string require(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::vector<std::int64_t> get_schedule(const std::string& key,
                                           const std::vector<std::int64_t>& fallback) const;
    std::uint64_t seed() const { return static_cast<std::uint64_t>(get_int("seed", 1)); }
};

struct RunReport {
    nlohmann::json report;           // written to <out>/report.json
    std::vector<std::string> files;  // manifest of everything written
    double wall_seconds = 0.0;       // printed to the terminal, never serialized
};

// builders for the tagged built-in systems (see `list`)
Semigroup make_semigroup(const std::string& tag);
ActionSystem make_action(const std::string& action_tag, const std::string& semigroup_tag,
                         std::uint64_t seed);
Point parse_basepoint(const ActionSystem& sys, const std::string& spec, std::uint64_t seed);
std::vector<Point> parse_basepoints(const ActionSystem& sys, const std::string& spec,
                                    std::uint64_t seed);

RunReport run_experiment(const ExperimentConfig& config, const std::string& out_dir);

std::string list_systems();

} // namespace bohrlab
