#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "autoindex/engine.h"

namespace testing_support {

std::filesystem::path source_dir();

/// Corpus programs sorted by file name.
std::vector<std::filesystem::path> corpus_programs();

/// Fresh empty directory under the system temp directory.
std::filesystem::path scratch_dir(const std::string& name);

/// Writes `n` random tuples for every .input relation of `program` into
/// `dir`. Values are drawn from "v0".."v{d-1}" with d chosen so that a
/// bound attribute matches about ten tuples.
void write_random_facts(const autoindex::Program& program, const std::filesystem::path& dir, std::uint64_t seed,
                        std::size_t n);

std::string read_file(const std::filesystem::path& path);

}  // namespace testing_support
