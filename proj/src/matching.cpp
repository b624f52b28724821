#include "autoindex/matching.h"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

#include "autoindex/error.h"

namespace autoindex {

std::size_t BipartiteGraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& nbrs : adjacency) n += nbrs.size();
    return n;
}

bool BipartiteGraph::has_edge(std::size_t left, std::size_t right) const {
    if (left >= adjacency.size()) return false;
    const auto& nbrs = adjacency[left];
    return std::binary_search(nbrs.begin(), nbrs.end(), right);
}

void Matching::add(std::size_t left, std::size_t right) {
    if (mate_of_left_.at(left) != npos || mate_of_right_.at(right) != npos) {
        throw std::logic_error("matching endpoint already used");
    }
    mate_of_left_[left] = right;
    mate_of_right_[right] = left;
}

void Matching::remove_left(std::size_t left) {
    const std::size_t right = mate_of_left_.at(left);
    if (right == npos) return;
    mate_of_left_[left] = npos;
    mate_of_right_[right] = npos;
}

std::size_t Matching::size() const {
    return static_cast<std::size_t>(
        std::count_if(mate_of_left_.begin(), mate_of_left_.end(), [](std::size_t r) { return r != npos; }));
}

std::vector<std::pair<std::size_t, std::size_t>> Matching::pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t l = 0; l < mate_of_left_.size(); ++l) {
        if (mate_of_left_[l] != npos) out.emplace_back(l, mate_of_left_[l]);
    }
    return out;
}

BipartiteGraph build_subset_graph(const SearchSet& q) {
    BipartiteGraph g;
    g.left_size = g.right_size = q.size();
    g.adjacency.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            if (is_strict_subset(q[i], q[j])) g.adjacency[i].push_back(j);
        }
    }
    return g;
}

namespace {

class HopcroftKarp {
public:
    explicit HopcroftKarp(const BipartiteGraph& g)
        : g_(g), m_(g.left_size, g.right_size), layer_(g.left_size) {}

    Matching run() {
        while (bfs()) {
            for (std::size_t u = 0; u < g_.left_size; ++u) {
                if (m_.mate_of_left(u) == Matching::npos) dfs(u);
            }
        }
        return std::move(m_);
    }

private:
    static constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

    // Layers free left vertices at 0 and alternates along unmatched then
    // matched edges; reports whether some free right vertex is reachable.
    bool bfs() {
        std::queue<std::size_t> frontier;
        for (std::size_t u = 0; u < g_.left_size; ++u) {
            if (m_.mate_of_left(u) == Matching::npos) {
                layer_[u] = 0;
                frontier.push(u);
            } else {
                layer_[u] = kInf;
            }
        }
        bool found = false;
        while (!frontier.empty()) {
            const std::size_t u = frontier.front();
            frontier.pop();
            for (std::size_t v : g_.adjacency[u]) {
                const std::size_t w = m_.mate_of_right(v);
                if (w == Matching::npos) {
                    found = true;
                } else if (layer_[w] == kInf) {
                    layer_[w] = layer_[u] + 1;
                    frontier.push(w);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t u) {
        for (std::size_t v : g_.adjacency[u]) {
            const std::size_t w = m_.mate_of_right(v);
            if (w == Matching::npos || (layer_[w] == layer_[u] + 1 && dfs(w))) {
                m_.remove_left(u);
                m_.add(u, v);
                return true;
            }
        }
        layer_[u] = kInf;
        return false;
    }

    const BipartiteGraph& g_;
    Matching m_;
    std::vector<std::size_t> layer_;
};

}  // namespace

Matching max_matching(const BipartiteGraph& g) { return HopcroftKarp(g).run(); }

bool is_valid_matching(const BipartiteGraph& g, const Matching& m) {
    std::vector<bool> right_used(g.right_size, false);
    for (auto [l, r] : m.pairs()) {
        if (!g.has_edge(l, r) || right_used[r] || m.mate_of_right(r) != l) return false;
        right_used[r] = true;
    }
    return true;
}

ChainCover chains_from_matching(const SearchSet& q, const Matching& m) {
    ChainCover cover;
    for (std::size_t head = 0; head < q.size(); ++head) {
        if (m.mate_of_right(head) != Matching::npos) continue;
        Chain chain;
        for (std::size_t u = head; u != Matching::npos; u = m.mate_of_left(u)) chain.push_back(q[u]);
        cover.add(std::move(chain));
    }
    return cover;
}

ChainCover min_chain_cover(const SearchSet& q) {
    return chains_from_matching(q, max_matching(build_subset_graph(q)));
}

namespace {

void grow_antichain(const SearchSet& q, std::size_t next, std::vector<Search>& chosen, std::size_t& best) {
    best = std::max(best, chosen.size());
    if (chosen.size() + (q.size() - next) <= best) return;
    for (std::size_t i = next; i < q.size(); ++i) {
        const bool incomparable = std::none_of(chosen.begin(), chosen.end(), [&](Search c) {
            return c.is_subset_of(q[i]) || q[i].is_subset_of(c);
        });
        if (!incomparable) continue;
        chosen.push_back(q[i]);
        grow_antichain(q, i + 1, chosen, best);
        chosen.pop_back();
    }
}

}  // namespace

std::size_t max_antichain_bruteforce(const SearchSet& q) {
    if (q.size() > kMaxAntichainOracleSize) {
        throw InstanceTooLarge("antichain oracle limited to " + std::to_string(kMaxAntichainOracleSize) +
                               " searches, got " + std::to_string(q.size()));
    }
    std::vector<Search> chosen;
    std::size_t best = 0;
    grow_antichain(q, 0, chosen, best);
    return best;
}

}  // namespace autoindex
