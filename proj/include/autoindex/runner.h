#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "autoindex/engine.h"
#include "autoindex/report.h"

namespace autoindex {

/// Reads and parses a program file. Throws IoError or the parse errors.
Program load_program(const std::filesystem::path& path);

/// Searches, chains and index selections per declared relation, without data.
RunReport select_report(const Program& program);

struct RunOptions {
    IndexMode mode = IndexMode::Auto;
    unsigned threads = 1;
    /// Directory for .input files; defaults to the program's directory.
    std::optional<std::filesystem::path> facts_dir;
    /// Directory for .output files; defaults to the program's directory.
    std::optional<std::filesystem::path> output_dir;
    bool write_outputs = true;
};

struct RunResult {
    RunReport report;
    /// Rendered contents of every .output relation.
    std::map<std::string, std::string> outputs;
};

RunResult run_program(const Program& program, const std::filesystem::path& program_dir, const RunOptions& options);

/// Facts as tab-separated text, keyed by relation name.
using FactText = std::map<std::string, std::string>;

/// Evaluates without touching the filesystem. Relations named in .input
/// directives read from `facts` (missing entries are empty).
RunResult run_in_memory(const Program& program, IndexMode mode, const FactText& facts, unsigned threads = 1);

struct BenchOptions {
    unsigned threads = 1;
    std::size_t warmup = 1;
    std::size_t repeats = 3;
    std::optional<std::filesystem::path> facts_dir;
};

/// Runs every index mode; timings are the minimum over `repeats` runs
/// after `warmup` discarded runs.
RunReport bench_program(const Program& program, const std::filesystem::path& program_dir, const BenchOptions& options);

}  // namespace autoindex
