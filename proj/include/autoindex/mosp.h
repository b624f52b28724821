#pragma once

// Minimal index selection. A minimum chain cover of the searches is turned
// into a minimum set of lexicographic orders by concatenating the set
// differences along each chain (chain -> index), and orders are mapped back
// to chains by collecting the searches that are their prefixes
// (index -> chain). Also hosts the exhaustive oracles used to check
// optimality.

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "autoindex/core.h"

namespace autoindex {

/// How attributes inside one set-difference block are ordered.
enum class ChoosePolicy {
    Ascending,   ///< ascending attribute id (the default)
    Descending,  ///< descending attribute id
};

/// Index selection result for one relation.
struct MospSolution {
    SearchSet search_set;
    ChainCover chain_cover;
    IndexSet index_set;
    std::map<Search, LexOrder> assignment;

    /// Order assigned to s; throws std::out_of_range if s is unknown.
    const LexOrder& order_for(Search s) const { return assignment.at(s); }

    friend bool operator==(const MospSolution&, const MospSolution&) = default;
};

/// Chain to index: s1 ≺ (s2 - s1) ≺ ... ≺ (sk - s(k-1)).
LexOrder gamma0(const Chain& c, ChoosePolicy choose = ChoosePolicy::Ascending);

/// Every order the chain maps to (all permutations inside each block).
std::vector<LexOrder> gamma0_all(const Chain& c);

/// One order per chain.
IndexSet gamma1(const ChainCover& c, ChoosePolicy choose = ChoosePolicy::Ascending);

/// Index to chain: the searches of q that are prefixes of the order, by size.
Chain alpha0(const LexOrder& order, const SearchSet& q);

/// alpha0 applied to every order.
ChainCover alpha1(const IndexSet& l, const SearchSet& q);

/// Minimum-cardinality l-cover of q with a per-search assignment.
MospSolution min_index(const SearchSet& q, ChoosePolicy choose = ChoosePolicy::Ascending);

/// Baseline: one order per distinct search, attributes in ascending id order.
MospSolution naive_index(const SearchSet& q);

/// Number of nonempty sequences of distinct attributes drawn from m
/// attributes, i.e. the sum over i of C(m,i)·i!. Valid for 1 <= m <= 20.
std::uint64_t enumerate_lex_count(unsigned m);

inline constexpr unsigned kMaxLexCountAttributes = 20;
inline constexpr std::size_t kBruteForceMaxAttributes = 4;
inline constexpr std::size_t kBruteForceMaxSearches = 8;

/// All nonempty sequences of distinct attributes drawn from `attrs`.
std::vector<LexOrder> enumerate_lex_orders(Search attrs);

/// Smallest k such that some k orders over q's attributes l-cover q,
/// found by exhaustive search. Gated to 4 attributes and 8 searches.
std::size_t brute_force_min_cover_size(const SearchSet& q);

}  // namespace autoindex
