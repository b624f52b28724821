#pragma once

// Minimum chain cover of a search set via maximum bipartite matching.
//
// Both sides of the bipartite graph are the searches of the set (in
// canonical order); left i is joined to right j iff search i is a strict
// subset of search j. A maximum matching E selects, for as many searches as
// possible, an immediate successor; following matched edges from every
// search without a matched predecessor yields |q| - |E| chains, which is the
// minimum by Dilworth's theorem.

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "autoindex/core.h"

namespace autoindex {

struct BipartiteGraph {
    std::size_t left_size = 0;
    std::size_t right_size = 0;
    /// Right neighbours of each left vertex, ascending.
    std::vector<std::vector<std::size_t>> adjacency;

    std::size_t edge_count() const;
    bool has_edge(std::size_t left, std::size_t right) const;
};

class Matching {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    Matching() = default;
    Matching(std::size_t left_size, std::size_t right_size)
        : mate_of_left_(left_size, npos), mate_of_right_(right_size, npos) {}

    /// Adds (left, right); both endpoints must currently be free.
    void add(std::size_t left, std::size_t right);
    /// Removes the pair incident to `left`, if any.
    void remove_left(std::size_t left);

    std::size_t mate_of_left(std::size_t left) const { return mate_of_left_[left]; }
    std::size_t mate_of_right(std::size_t right) const { return mate_of_right_[right]; }
    std::size_t size() const;
    /// Matched pairs ordered by left index.
    std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

private:
    friend Matching max_matching(const BipartiteGraph& g);

    std::vector<std::size_t> mate_of_left_;
    std::vector<std::size_t> mate_of_right_;
};

/// Strict-subset graph over q; vertex i on either side is q[i].
BipartiteGraph build_subset_graph(const SearchSet& q);

/// Hopcroft-Karp. Vertices and neighbours are visited in index order, so
/// the result is a deterministic function of the graph.
Matching max_matching(const BipartiteGraph& g);

/// True iff every pair is an edge and no vertex is matched twice.
bool is_valid_matching(const BipartiteGraph& g, const Matching& m);

/// Chains obtained by following matched edges from each search that has no
/// matched predecessor. Heads are taken in canonical order.
ChainCover chains_from_matching(const SearchSet& q, const Matching& m);

ChainCover min_chain_cover(const SearchSet& q);

/// Largest pairwise-incomparable subset of q by exhaustive search.
/// Throws InstanceTooLarge when |q| > 20.
std::size_t max_antichain_bruteforce(const SearchSet& q);

inline constexpr std::size_t kMaxAntichainOracleSize = 20;

}  // namespace autoindex
