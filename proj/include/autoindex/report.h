#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace autoindex {

struct RelationReport {
    std::string name;
    std::vector<std::string> searches;
    std::vector<std::string> chains;
    /// Indexes chosen by minimal selection.
    std::vector<std::string> indexes;
    std::size_t naive_index_count = 0;
    std::uint64_t tuples = 0;
    /// Index inserts per executed mode.
    std::map<std::string, std::uint64_t> index_inserts;

    friend bool operator==(const RelationReport&, const RelationReport&) = default;
};

struct ModeStats {
    std::size_t index_count = 0;
    std::uint64_t index_inserts = 0;
    std::uint64_t tuples_derived = 0;
    double load_ms = 0;
    double eval_ms = 0;

    friend bool operator==(const ModeStats&, const ModeStats&) = default;
};

struct RunReport {
    std::string command;
    std::vector<RelationReport> relations;
    std::uint64_t tuples_loaded = 0;
    /// Keyed by mode name (auto, naive, scan).
    std::map<std::string, ModeStats> modes;
    /// Wall-clock milliseconds of phases shared by all modes.
    std::map<std::string, double> phase_ms;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

std::string render_text(const RunReport& report);

}  // namespace autoindex
