#pragma once

// Shared vocabulary for index selection: attribute schemas, searches
// (attribute sets of equality predicates), lexicographic orders, chains,
// and the prefix / cover predicates that relate them.

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace autoindex {

/// Dense per-relation attribute ordinal.
using AttrId = std::uint8_t;

/// Upper bound on relation arity; attribute sets are 64-bit masks.
inline constexpr std::size_t kMaxAttributes = 64;

/// Named attributes of one relation, ids 0..m-1 in declaration order.
class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<std::string> names);

    /// Schema whose attributes are named x, y, z (arity <= 3) or a0, a1, ...
    static Schema anonymous(std::size_t arity);

    std::size_t size() const { return names_.size(); }
    const std::string& name(AttrId id) const { return names_.at(id); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<AttrId> find(std::string_view name) const;

    friend bool operator==(const Schema&, const Schema&) = default;

private:
    std::vector<std::string> names_;
};

/// The attribute set of a primitive search. Only equality predicates are
/// supported, so the set of constrained attributes is all that index
/// selection needs to know.
class Search {
public:
    constexpr Search() = default;
    constexpr explicit Search(std::uint64_t mask) : mask_(mask) {}
    Search(std::initializer_list<AttrId> attrs);

    constexpr std::uint64_t mask() const { return mask_; }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr bool contains(AttrId a) const { return (mask_ >> a) & 1u; }
    constexpr bool is_subset_of(Search other) const { return (mask_ & ~other.mask_) == 0; }

    Search with(AttrId a) const;
    Search minus(Search other) const { return Search(mask_ & ~other.mask_); }

    /// Attribute ids in ascending order.
    std::vector<AttrId> attributes() const;

    friend constexpr bool operator==(Search, Search) = default;

    /// Canonical order: by cardinality, then by mask value.
    friend constexpr std::strong_ordering operator<=>(Search a, Search b) {
        if (auto c = a.size() <=> b.size(); c != 0) return c;
        return a.mask_ <=> b.mask_;
    }

private:
    std::uint64_t mask_ = 0;
};

bool is_strict_subset(Search a, Search b);

/// Deduplicated searches of one relation, held in canonical order.
class SearchSet {
public:
    SearchSet() = default;
    SearchSet(std::initializer_list<Search> searches);
    explicit SearchSet(const std::vector<Search>& searches);

    /// Returns false if the search was already present.
    bool insert(Search s);
    bool contains(Search s) const;
    /// Position of s in canonical order.
    std::optional<std::size_t> position(Search s) const;

    std::size_t size() const { return searches_.size(); }
    bool empty() const { return searches_.empty(); }
    Search operator[](std::size_t i) const { return searches_[i]; }
    auto begin() const { return searches_.begin(); }
    auto end() const { return searches_.end(); }

    /// Union of all member attribute sets.
    Search attributes() const;

    friend bool operator==(const SearchSet&, const SearchSet&) = default;

private:
    std::vector<Search> searches_;
};

/// A lexicographic order x1 < x2 < ... over distinct attributes; the
/// abstract description of an index.
class LexOrder {
public:
    LexOrder() = default;
    explicit LexOrder(std::vector<AttrId> seq);
    LexOrder(std::initializer_list<AttrId> seq) : LexOrder(std::vector<AttrId>(seq)) {}

    std::size_t size() const { return seq_.size(); }
    bool empty() const { return seq_.empty(); }
    AttrId operator[](std::size_t i) const { return seq_[i]; }
    const std::vector<AttrId>& sequence() const { return seq_; }
    auto begin() const { return seq_.begin(); }
    auto end() const { return seq_.end(); }

    /// All attributes of the order as a set.
    Search attributes() const;

    /// True iff this order's sequence starts with other's sequence.
    bool starts_with(const LexOrder& other) const;

    /// Appends every attribute of a relation with the given arity that is
    /// not yet present, in ascending id order.
    LexOrder extended_to(std::size_t arity) const;

    friend bool operator==(const LexOrder&, const LexOrder&) = default;
    friend auto operator<=>(const LexOrder&, const LexOrder&) = default;

private:
    std::vector<AttrId> seq_;
};

/// The set of the first min(k, |order|) attributes of an order.
Search prefix_set(const LexOrder& order, std::size_t k);

/// Set of orders, deduplicated by sequence equality; keeps insertion order.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(std::initializer_list<LexOrder> orders);

    bool insert(LexOrder order);
    bool contains(const LexOrder& order) const;
    std::size_t size() const { return orders_.size(); }
    bool empty() const { return orders_.empty(); }
    const LexOrder& operator[](std::size_t i) const { return orders_[i]; }
    auto begin() const { return orders_.begin(); }
    auto end() const { return orders_.end(); }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    std::vector<LexOrder> orders_;
};

/// Searches ordered by strict inclusion: s1 ⊂ s2 ⊂ ... ⊂ sk.
class Chain {
public:
    Chain() = default;
    explicit Chain(std::vector<Search> links);
    Chain(std::initializer_list<Search> links) : Chain(std::vector<Search>(links)) {}

    /// Appends a link; it must strictly contain the current last link.
    void push_back(Search s);

    std::size_t size() const { return links_.size(); }
    bool empty() const { return links_.empty(); }
    bool contains(Search s) const;
    Search operator[](std::size_t i) const { return links_[i]; }
    Search front() const { return links_.front(); }
    Search back() const { return links_.back(); }
    const std::vector<Search>& links() const { return links_; }
    auto begin() const { return links_.begin(); }
    auto end() const { return links_.end(); }

    friend bool operator==(const Chain&, const Chain&) = default;

private:
    std::vector<Search> links_;
};

class ChainCover {
public:
    ChainCover() = default;
    explicit ChainCover(std::vector<Chain> chains) : chains_(std::move(chains)) {}
    ChainCover(std::initializer_list<Chain> chains) : chains_(chains) {}

    void add(Chain c) { chains_.push_back(std::move(c)); }
    std::size_t size() const { return chains_.size(); }
    bool empty() const { return chains_.empty(); }
    const Chain& operator[](std::size_t i) const { return chains_[i]; }
    const std::vector<Chain>& chains() const { return chains_; }
    auto begin() const { return chains_.begin(); }
    auto end() const { return chains_.end(); }

    friend bool operator==(const ChainCover&, const ChainCover&) = default;

private:
    std::vector<Chain> chains_;
};

/// Every search equals the |s|-prefix set of some order.
bool l_cover(const SearchSet& q, const IndexSet& l);

/// Every search is a member of some chain.
bool c_cover(const SearchSet& q, const ChainCover& c);

/// Every search of q is in exactly one chain and chains hold nothing else.
bool is_partition(const SearchSet& q, const ChainCover& c);

// Rendering. A null schema prints numeric attribute ids.
std::string to_string(Search s, const Schema* schema = nullptr);
std::string to_string(const LexOrder& order, const Schema* schema = nullptr);
std::string to_string(const Chain& chain, const Schema* schema = nullptr);

}  // namespace autoindex
