#include "autoindex/report.h"

#include <iomanip>
#include <sstream>

namespace autoindex {

using nlohmann::json;

json to_json(const RunReport& report) {
    json j;
    j["command"] = report.command;
    j["tuples_loaded"] = report.tuples_loaded;
    j["relations"] = json::array();
    for (const auto& r : report.relations) {
        j["relations"].push_back({{"name", r.name},
                                  {"searches", r.searches},
                                  {"chains", r.chains},
                                  {"indexes", r.indexes},
                                  {"naive_index_count", r.naive_index_count},
                                  {"tuples", r.tuples},
                                  {"index_inserts", r.index_inserts}});
    }
    j["modes"] = json::object();
    for (const auto& [mode, s] : report.modes) {
        j["modes"][mode] = {{"index_count", s.index_count},
                            {"index_inserts", s.index_inserts},
                            {"tuples_derived", s.tuples_derived},
                            {"load_ms", s.load_ms},
                            {"eval_ms", s.eval_ms}};
    }
    j["phase_ms"] = report.phase_ms;
    return j;
}

RunReport report_from_json(const json& j) {
    RunReport report;
    report.command = j.at("command").get<std::string>();
    report.tuples_loaded = j.at("tuples_loaded").get<std::uint64_t>();
    for (const auto& r : j.at("relations")) {
        RelationReport rel;
        rel.name = r.at("name").get<std::string>();
        rel.searches = r.at("searches").get<std::vector<std::string>>();
        rel.chains = r.at("chains").get<std::vector<std::string>>();
        rel.indexes = r.at("indexes").get<std::vector<std::string>>();
        rel.naive_index_count = r.at("naive_index_count").get<std::size_t>();
        rel.tuples = r.at("tuples").get<std::uint64_t>();
        rel.index_inserts = r.at("index_inserts").get<std::map<std::string, std::uint64_t>>();
        report.relations.push_back(std::move(rel));
    }
    for (const auto& [mode, s] : j.at("modes").items()) {
        ModeStats stats;
        stats.index_count = s.at("index_count").get<std::size_t>();
        stats.index_inserts = s.at("index_inserts").get<std::uint64_t>();
        stats.tuples_derived = s.at("tuples_derived").get<std::uint64_t>();
        stats.load_ms = s.at("load_ms").get<double>();
        stats.eval_ms = s.at("eval_ms").get<double>();
        report.modes.emplace(mode, stats);
    }
    report.phase_ms = j.at("phase_ms").get<std::map<std::string, double>>();
    return report;
}

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
    if (items.empty()) return "none";
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += sep;
        out += items[i];
    }
    return out;
}

}  // namespace

std::string render_text(const RunReport& report) {
    std::ostringstream os;
    for (const auto& r : report.relations) {
        os << "relation " << r.name << "\n";
        os << "  searches (" << r.searches.size() << "): " << join(r.searches, "  ") << "\n";
        os << "  chains   (" << r.chains.size() << "): " << join(r.chains, "  |  ") << "\n";
        os << "  indexes  (" << r.indexes.size() << ", naive " << r.naive_index_count << "): " << join(r.indexes, ",  ")
           << "\n";
        if (!r.index_inserts.empty()) {
            os << "  tuples " << r.tuples << ", index inserts:";
            for (const auto& [mode, n] : r.index_inserts) os << " " << mode << "=" << n;
            os << "\n";
        }
    }
    if (!report.modes.empty()) {
        os << "\n"
           << std::left << std::setw(8) << "mode" << std::right << std::setw(10) << "indexes" << std::setw(16)
           << "index inserts" << std::setw(12) << "derived" << std::setw(12) << "load ms" << std::setw(12) << "eval ms"
           << "\n";
        for (const auto& [mode, s] : report.modes) {
            os << std::left << std::setw(8) << mode << std::right << std::setw(10) << s.index_count << std::setw(16)
               << s.index_inserts << std::setw(12) << s.tuples_derived << std::fixed << std::setprecision(3)
               << std::setw(12) << s.load_ms << std::setw(12) << s.eval_ms << "\n";
        }
        auto a = report.modes.find("auto");
        auto n = report.modes.find("naive");
        auto s = report.modes.find("scan");
        if (a != report.modes.end() && n != report.modes.end() && a->second.index_inserts > 0) {
            os << "naive/auto index-insert ratio: " << std::setprecision(3)
               << static_cast<double>(n->second.index_inserts) / static_cast<double>(a->second.index_inserts) << "\n";
        }
        if (a != report.modes.end() && n != report.modes.end() && a->second.eval_ms > 0) {
            os << "naive/auto eval-time ratio: " << std::setprecision(3) << n->second.eval_ms / a->second.eval_ms << "\n";
        }
        if (a != report.modes.end() && s != report.modes.end() && a->second.eval_ms > 0) {
            os << "scan/auto eval-time ratio: " << std::setprecision(3) << s->second.eval_ms / a->second.eval_ms << "\n";
        }
    }
    if (report.tuples_loaded > 0) os << "tuples loaded: " << report.tuples_loaded << "\n";
    return os.str();
}

}  // namespace autoindex
