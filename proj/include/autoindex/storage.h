#pragma once

// In-memory relations with set semantics. Tuples live once in an arena;
// every maintained index is an ordered set of tuple ids under the index's
// lexicographic order, extended to full width so that it totally orders
// the tuples. Range searches navigate an index between a lower and an
// upper bound tuple whose unconstrained positions are padded with
// comparator-level infimum / supremum sentinels.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <iterator>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "autoindex/core.h"

namespace autoindex {

/// Interned domain constant.
using Value = std::uint64_t;
using Tuple = std::vector<Value>;
using TupleRef = std::span<const Value>;

/// Maps constant spellings to dense ordinals in first-seen order.
class SymbolTable {
public:
    Value intern(std::string_view text);
    const std::string& resolve(Value v) const { return names_.at(v); }
    std::size_t size() const { return names_.size(); }

private:
    std::unordered_map<std::string, Value> ids_;
    std::vector<std::string> names_;
};

/// Element of a bound tuple: a concrete value, the infimum ⊥, the
/// supremum ⊤, or the unspecified marker △ that bound construction
/// replaces before any comparison.
class BoundValue {
public:
    enum class Kind : std::uint8_t { Bottom, Concrete, Top, Unspecified };

    static constexpr BoundValue bottom() { return BoundValue(Kind::Bottom, 0); }
    static constexpr BoundValue top() { return BoundValue(Kind::Top, 0); }
    static constexpr BoundValue unspecified() { return BoundValue(Kind::Unspecified, 0); }
    static constexpr BoundValue concrete(Value v) { return BoundValue(Kind::Concrete, v); }

    constexpr Kind kind() const { return kind_; }
    constexpr Value value() const { return value_; }
    constexpr bool is_concrete() const { return kind_ == Kind::Concrete; }

    friend constexpr bool operator==(BoundValue, BoundValue) = default;

private:
    constexpr BoundValue(Kind k, Value v) : kind_(k), value_(v) {}

    Kind kind_ = Kind::Unspecified;
    Value value_ = 0;
};

using BoundTuple = std::vector<BoundValue>;

/// ⊥ < every concrete value < ⊤. Throws std::logic_error on △.
std::strong_ordering compare(BoundValue a, BoundValue b);
std::strong_ordering compare(Value a, BoundValue b);

/// Element-wise comparison in the order's sequence; the first non-tie decides.
std::strong_ordering lex_compare(const LexOrder& order, TupleRef a, TupleRef b);
std::strong_ordering lex_compare(const LexOrder& order, std::span<const BoundValue> a, std::span<const BoundValue> b);
std::strong_ordering lex_compare(const LexOrder& order, TupleRef a, std::span<const BoundValue> b);

/// One conjunct t(attr) = value of a primitive search predicate.
struct Equality {
    AttrId attr;
    Value value;

    friend bool operator==(const Equality&, const Equality&) = default;
};

/// Search attributes of a predicate.
Search search_of(std::span<const Equality> pred);

/// Replaces △ by ⊥.
BoundTuple lower_bound_of(std::span<const BoundValue> partial);
/// Replaces △ by ⊤.
BoundTuple upper_bound_of(std::span<const BoundValue> partial);

/// Bounds (a, b) of the range search that answers `pred` on `order`.
/// Throws CoverViolation unless pred's attributes are the |pred|-prefix
/// set of the order.
std::pair<BoundTuple, BoundTuple> make_bounds(std::span<const Equality> pred, const LexOrder& order,
                                              std::size_t arity);

class Relation {
    using TupleId = std::uint32_t;

    struct Arena {
        std::size_t arity = 0;
        std::vector<Value> data;

        TupleRef at(TupleId id) const { return {data.data() + static_cast<std::size_t>(id) * arity, arity}; }
    };

    struct BoundKey {
        const BoundValue* values;
    };
    struct ValueKey {
        const Value* values;
    };

    // Orders tuple ids by the referenced tuples; also compares ids against
    // bound tuples and plain tuples for heterogeneous lookup.
    struct KeyOrder {
        using is_transparent = void;

        const Arena* arena;
        std::vector<AttrId> order;

        bool operator()(TupleId a, TupleId b) const;
        bool operator()(TupleId a, BoundKey b) const;
        bool operator()(BoundKey a, TupleId b) const;
        bool operator()(TupleId a, ValueKey b) const;
        bool operator()(ValueKey a, TupleId b) const;
    };

    using Container = std::set<TupleId, KeyOrder>;

    struct Index {
        LexOrder order;
        LexOrder full_order;
        Container tuples;
        std::uint64_t inserts = 0;
    };

public:
    /// Forward iterator over tuples of a range, in index order.
    class const_iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = TupleRef;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = TupleRef;

        const_iterator() = default;
        TupleRef operator*() const { return arena_->at(*it_); }
        const_iterator& operator++() {
            ++it_;
            return *this;
        }
        const_iterator operator++(int) {
            auto tmp = *this;
            ++it_;
            return tmp;
        }
        friend bool operator==(const const_iterator& a, const const_iterator& b) { return a.it_ == b.it_; }

    private:
        friend class Relation;
        const_iterator(const Arena* arena, Container::const_iterator it) : arena_(arena), it_(it) {}

        const Arena* arena_ = nullptr;
        Container::const_iterator it_;
    };

    class Range {
    public:
        const_iterator begin() const { return begin_; }
        const_iterator end() const { return end_; }
        bool empty() const { return begin_ == end_; }
        std::size_t size() const { return static_cast<std::size_t>(std::distance(begin_, end_)); }

    private:
        friend class Relation;
        Range(const_iterator b, const_iterator e) : begin_(b), end_(e) {}

        const_iterator begin_;
        const_iterator end_;
    };

    Relation(std::string name, Schema schema);

    Relation(Relation&&) noexcept = default;
    Relation& operator=(Relation&&) noexcept = default;
    Relation(const Relation&) = delete;
    Relation& operator=(const Relation&) = delete;

    const std::string& name() const { return name_; }
    const Schema& schema() const { return schema_; }
    std::size_t arity() const { return arena_->arity; }
    std::size_t size() const { return primary_.size(); }
    bool empty() const { return primary_.empty(); }

    /// Full-width identity order that holds canonical storage.
    const LexOrder& primary_order() const { return primary_order_; }

    /// Maintains an index for `order` and returns its slot. Existing tuples
    /// are copied in and counted as inserts. Adding an order that is already
    /// maintained returns the existing slot.
    std::size_t add_index(const LexOrder& order);
    std::size_t index_count() const { return indexes_.size(); }
    const LexOrder& index_order(std::size_t slot) const { return indexes_.at(slot).order; }
    const LexOrder& index_full_order(std::size_t slot) const { return indexes_.at(slot).full_order; }
    std::uint64_t index_inserts(std::size_t slot) const { return indexes_.at(slot).inserts; }
    /// Sum of insert counters over all maintained indexes.
    std::uint64_t total_index_inserts() const;

    /// Inserts into storage and every index. Returns false, touching no
    /// counter, if the tuple is already present. Throws ArityMismatch.
    bool insert(TupleRef t);
    bool contains(TupleRef t) const;

    /// All tuples in primary order.
    Range scan() const;

    /// Tuples t with a ⊑ t ⊑ b under `order`, using a maintained index
    /// whose order starts with `order`. Throws MissingIndex otherwise.
    Range range_search(const LexOrder& order, std::span<const BoundValue> a, std::span<const BoundValue> b) const;

    /// Linear-scan reference semantics of a primitive search.
    std::vector<Tuple> primitive_search_scan(std::span<const Equality> pred) const;

    /// True iff every index enumerates exactly the stored tuples.
    bool mirror_consistent() const;

private:
    Range range_in(const Container& c, std::span<const BoundValue> a, std::span<const BoundValue> b) const;

    std::string name_;
    Schema schema_;
    std::unique_ptr<Arena> arena_;
    LexOrder primary_order_;
    Container primary_;
    std::vector<Index> indexes_;
};

/// Reads tab-separated facts, one tuple per line, interning each field.
/// Returns the number of lines read. Throws IoError.
std::size_t load_facts(const std::filesystem::path& path, Relation& rel, SymbolTable& symbols);
/// As above; `source` names the stream in error messages.
std::size_t load_facts(std::istream& in, const std::string& source, Relation& rel, SymbolTable& symbols);

/// Renders tuples as tab-separated lines in primary order.
std::string format_facts(const Relation& rel, const SymbolTable& symbols);

void write_facts(const std::filesystem::path& path, const Relation& rel, const SymbolTable& symbols);

}  // namespace autoindex
