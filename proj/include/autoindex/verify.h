#pragma once

// Randomized self-checks against independent reference procedures.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "autoindex/core.h"
#include "autoindex/runner.h"

namespace autoindex {

struct VerifyOptions {
    std::uint64_t seed = 42;
    std::size_t trials = 200;
    /// Largest random search set for the chain-cover suite.
    std::size_t max_searches = 14;
    /// Largest relation for the range-search suite.
    std::size_t max_tuples = 2000;
    /// Drops one matched pair before chain extraction; the chain-cover
    /// suite is expected to fail.
    bool corrupt_matching = false;
};

struct SuiteResult {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::string first_failure;
    double elapsed_ms = 0;

    bool passed() const { return failures == 0; }
};

SuiteResult verify_dilworth(const VerifyOptions& options);
SuiteResult verify_mosp(const VerifyOptions& options);
SuiteResult verify_range_cover(const VerifyOptions& options);
SuiteResult verify_end_to_end(const VerifyOptions& options);

std::vector<SuiteResult> run_verification(const VerifyOptions& options);

/// Distinct nonempty searches over `attributes` attributes.
SearchSet random_search_set(std::mt19937_64& rng, std::size_t attributes, std::size_t count);

struct RandomProgram {
    std::string text;
    FactText facts;
};

/// A random non-recursive program with inputs, negation and constants,
/// plus facts over a small domain.
RandomProgram random_program(std::mt19937_64& rng, std::size_t max_facts);

}  // namespace autoindex
