#include "autoindex/mosp.h"

#include <algorithm>
#include <string>

#include "autoindex/error.h"
#include "autoindex/matching.h"

namespace autoindex {

namespace {

std::vector<AttrId> block(Search s, ChoosePolicy choose) {
    std::vector<AttrId> attrs = s.attributes();
    if (choose == ChoosePolicy::Descending) std::reverse(attrs.begin(), attrs.end());
    return attrs;
}

}  // namespace

LexOrder gamma0(const Chain& c, ChoosePolicy choose) {
    std::vector<AttrId> seq;
    Search previous;
    for (Search s : c) {
        for (AttrId a : block(s.minus(previous), choose)) seq.push_back(a);
        previous = s;
    }
    return LexOrder(std::move(seq));
}

std::vector<LexOrder> gamma0_all(const Chain& c) {
    std::vector<std::vector<AttrId>> partial{{}};
    Search previous;
    for (Search s : c) {
        std::vector<AttrId> blk = s.minus(previous).attributes();
        std::vector<std::vector<AttrId>> next;
        do {
            for (const auto& prefix : partial) {
                auto seq = prefix;
                seq.insert(seq.end(), blk.begin(), blk.end());
                next.push_back(std::move(seq));
            }
        } while (std::next_permutation(blk.begin(), blk.end()));
        partial = std::move(next);
        previous = s;
    }
    std::vector<LexOrder> out;
    out.reserve(partial.size());
    for (auto& seq : partial) out.emplace_back(std::move(seq));
    return out;
}

IndexSet gamma1(const ChainCover& c, ChoosePolicy choose) {
    IndexSet l;
    for (const Chain& chain : c) l.insert(gamma0(chain, choose));
    return l;
}

Chain alpha0(const LexOrder& order, const SearchSet& q) {
    Chain c;
    // Canonical order lists smaller searches first, so prefixes arrive in
    // increasing length.
    for (Search s : q) {
        if (s.size() <= order.size() && prefix_set(order, s.size()) == s) c.push_back(s);
    }
    return c;
}

ChainCover alpha1(const IndexSet& l, const SearchSet& q) {
    ChainCover c;
    for (const LexOrder& o : l) {
        Chain chain = alpha0(o, q);
        if (std::find(c.begin(), c.end(), chain) == c.end()) c.add(std::move(chain));
    }
    return c;
}

MospSolution min_index(const SearchSet& q, ChoosePolicy choose) {
    MospSolution sol;
    sol.search_set = q;
    sol.chain_cover = min_chain_cover(q);
    for (const Chain& chain : sol.chain_cover) {
        LexOrder order = gamma0(chain, choose);
        for (Search s : chain) {
            auto it = sol.assignment.find(s);
            // Unreachable for a partition; the shorter chain would win.
            if (it != sol.assignment.end() && alpha0(it->second, q).size() <= chain.size()) continue;
            sol.assignment.insert_or_assign(s, order);
        }
        sol.index_set.insert(std::move(order));
    }
    return sol;
}

MospSolution naive_index(const SearchSet& q) {
    MospSolution sol;
    sol.search_set = q;
    for (Search s : q) {
        sol.chain_cover.add(Chain{s});
        LexOrder order(s.attributes());
        sol.assignment.emplace(s, order);
        sol.index_set.insert(std::move(order));
    }
    return sol;
}

std::uint64_t enumerate_lex_count(unsigned m) {
    if (m < 1 || m > kMaxLexCountAttributes) {
        throw std::out_of_range("attribute count must be in [1, " + std::to_string(kMaxLexCountAttributes) + "]");
    }
    // Sequences of length i number m!/(m-i)!, a running falling factorial.
    std::uint64_t total = 0;
    std::uint64_t falling = 1;
    for (unsigned i = 1; i <= m; ++i) {
        falling *= m - i + 1;
        total += falling;
    }
    return total;
}

std::vector<LexOrder> enumerate_lex_orders(Search attrs) {
    const std::vector<AttrId> universe = attrs.attributes();
    const std::size_t n = universe.size();
    if (n >= 16) throw InstanceTooLarge("lexicographic order enumeration limited to 15 attributes");
    std::vector<LexOrder> out;
    for (std::uint32_t subset = 1; subset < (1u << n); ++subset) {
        std::vector<AttrId> seq;
        for (std::size_t i = 0; i < n; ++i) {
            if (subset & (1u << i)) seq.push_back(universe[i]);
        }
        do {
            out.emplace_back(seq);
        } while (std::next_permutation(seq.begin(), seq.end()));
    }
    return out;
}

namespace {

bool covers_with(const std::vector<std::uint32_t>& masks, std::size_t k, std::size_t start, std::uint32_t acc,
                 std::uint32_t full) {
    if (acc == full) return true;
    if (k == 0) return false;
    for (std::size_t i = start; i < masks.size(); ++i) {
        if (covers_with(masks, k - 1, i + 1, acc | masks[i], full)) return true;
    }
    return false;
}

}  // namespace

std::size_t brute_force_min_cover_size(const SearchSet& q) {
    const Search attrs = q.attributes();
    if (attrs.size() > kBruteForceMaxAttributes || q.size() > kBruteForceMaxSearches) {
        throw InstanceTooLarge("brute-force cover oracle limited to " + std::to_string(kBruteForceMaxAttributes) +
                               " attributes and " + std::to_string(kBruteForceMaxSearches) + " searches");
    }
    if (q.empty()) return 0;

    // Each order is reduced to the set of searches it covers. Orders with
    // equal coverage are interchangeable and an order whose coverage is a
    // strict subset of another's can always be swapped for it, so only the
    // maximal coverage sets need to be combined.
    std::vector<std::uint32_t> masks;
    for (const LexOrder& order : enumerate_lex_orders(attrs)) {
        std::uint32_t m = 0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (prefix_set(order, q[i].size()) == q[i]) m |= 1u << i;
        }
        if (m != 0) masks.push_back(m);
    }
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    std::vector<std::uint32_t> maximal;
    for (std::uint32_t m : masks) {
        const bool dominated = std::any_of(masks.begin(), masks.end(), [m](std::uint32_t o) {
            return o != m && (m & ~o) == 0;
        });
        if (!dominated) maximal.push_back(m);
    }

    const std::uint32_t full = (1u << q.size()) - 1;
    for (std::size_t k = 1; k <= q.size(); ++k) {
        if (covers_with(maximal, k, 0, 0, full)) return k;
    }
    return q.size();  // one order per search always suffices
}

}  // namespace autoindex
