#include "autoindex/storage.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "autoindex/error.h"

namespace autoindex {

Value SymbolTable::intern(std::string_view text) {
    auto [it, fresh] = ids_.try_emplace(std::string(text), names_.size());
    if (fresh) names_.emplace_back(text);
    return it->second;
}

std::strong_ordering compare(BoundValue a, BoundValue b) {
    using K = BoundValue::Kind;
    if (a.kind() == K::Unspecified || b.kind() == K::Unspecified) {
        throw std::logic_error("unspecified bound element reached a comparison");
    }
    if (a.kind() != b.kind()) return static_cast<int>(a.kind()) <=> static_cast<int>(b.kind());
    if (a.kind() == K::Concrete) return a.value() <=> b.value();
    return std::strong_ordering::equal;
}

std::strong_ordering compare(Value a, BoundValue b) {
    switch (b.kind()) {
        case BoundValue::Kind::Bottom:
            return std::strong_ordering::greater;
        case BoundValue::Kind::Top:
            return std::strong_ordering::less;
        case BoundValue::Kind::Concrete:
            return a <=> b.value();
        case BoundValue::Kind::Unspecified:
            break;
    }
    throw std::logic_error("unspecified bound element reached a comparison");
}

namespace {

template <typename A, typename B>
std::strong_ordering lex_compare_impl(const LexOrder& order, A a, B b) {
    for (AttrId attr : order) {
        if (attr >= a.size() || attr >= b.size()) throw std::out_of_range("order attribute beyond tuple arity");
        if (auto c = compare(a[attr], b[attr]); c != 0) return c;
    }
    return std::strong_ordering::equal;
}

}  // namespace

std::strong_ordering lex_compare(const LexOrder& order, TupleRef a, TupleRef b) {
    for (AttrId attr : order) {
        if (attr >= a.size() || attr >= b.size()) throw std::out_of_range("order attribute beyond tuple arity");
        if (auto c = a[attr] <=> b[attr]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

std::strong_ordering lex_compare(const LexOrder& order, std::span<const BoundValue> a, std::span<const BoundValue> b) {
    return lex_compare_impl(order, a, b);
}

std::strong_ordering lex_compare(const LexOrder& order, TupleRef a, std::span<const BoundValue> b) {
    return lex_compare_impl(order, a, b);
}

Search search_of(std::span<const Equality> pred) {
    Search s;
    for (const Equality& e : pred) s = s.with(e.attr);
    return s;
}

BoundTuple lower_bound_of(std::span<const BoundValue> partial) {
    BoundTuple out(partial.begin(), partial.end());
    for (auto& v : out) {
        if (v.kind() == BoundValue::Kind::Unspecified) v = BoundValue::bottom();
    }
    return out;
}

BoundTuple upper_bound_of(std::span<const BoundValue> partial) {
    BoundTuple out(partial.begin(), partial.end());
    for (auto& v : out) {
        if (v.kind() == BoundValue::Kind::Unspecified) v = BoundValue::top();
    }
    return out;
}

std::pair<BoundTuple, BoundTuple> make_bounds(std::span<const Equality> pred, const LexOrder& order,
                                              std::size_t arity) {
    const Search s = search_of(pred);
    if (s.size() != pred.size()) throw CoverViolation("predicate constrains an attribute twice");
    if (prefix_set(order, s.size()) != s) {
        throw CoverViolation("search " + to_string(s) + " is not a prefix of order " + to_string(order));
    }
    BoundTuple partial(arity, BoundValue::unspecified());
    for (const Equality& e : pred) {
        if (e.attr >= arity) throw CoverViolation("predicate attribute beyond relation arity");
        partial[e.attr] = BoundValue::concrete(e.value);
    }
    return {lower_bound_of(partial), upper_bound_of(partial)};
}

bool Relation::KeyOrder::operator()(TupleId a, TupleId b) const {
    const Value* ta = arena->data.data() + static_cast<std::size_t>(a) * arena->arity;
    const Value* tb = arena->data.data() + static_cast<std::size_t>(b) * arena->arity;
    for (AttrId attr : order) {
        if (ta[attr] != tb[attr]) return ta[attr] < tb[attr];
    }
    return false;
}

bool Relation::KeyOrder::operator()(TupleId a, BoundKey b) const {
    const Value* ta = arena->data.data() + static_cast<std::size_t>(a) * arena->arity;
    for (AttrId attr : order) {
        if (auto c = compare(ta[attr], b.values[attr]); c != 0) return c < 0;
    }
    return false;
}

bool Relation::KeyOrder::operator()(BoundKey a, TupleId b) const {
    const Value* tb = arena->data.data() + static_cast<std::size_t>(b) * arena->arity;
    for (AttrId attr : order) {
        if (auto c = compare(tb[attr], a.values[attr]); c != 0) return c > 0;
    }
    return false;
}

bool Relation::KeyOrder::operator()(TupleId a, ValueKey b) const {
    const Value* ta = arena->data.data() + static_cast<std::size_t>(a) * arena->arity;
    for (AttrId attr : order) {
        if (ta[attr] != b.values[attr]) return ta[attr] < b.values[attr];
    }
    return false;
}

bool Relation::KeyOrder::operator()(ValueKey a, TupleId b) const {
    const Value* tb = arena->data.data() + static_cast<std::size_t>(b) * arena->arity;
    for (AttrId attr : order) {
        if (a.values[attr] != tb[attr]) return a.values[attr] < tb[attr];
    }
    return false;
}

namespace {

LexOrder identity_order(std::size_t arity) {
    std::vector<AttrId> seq(arity);
    for (std::size_t i = 0; i < arity; ++i) seq[i] = static_cast<AttrId>(i);
    return LexOrder(std::move(seq));
}

}  // namespace

Relation::Relation(std::string name, Schema schema)
    : name_(std::move(name)),
      schema_(std::move(schema)),
      arena_(std::make_unique<Arena>()),
      primary_order_(schema_.size() == 0 ? LexOrder{} : identity_order(schema_.size())),
      primary_(KeyOrder{arena_.get(), primary_order_.sequence()}) {
    if (schema_.size() == 0) throw ArityMismatch("relation '" + name_ + "' must have at least one attribute");
    arena_->arity = schema_.size();
}

std::size_t Relation::add_index(const LexOrder& order) {
    for (std::size_t i = 0; i < indexes_.size(); ++i) {
        if (indexes_[i].order == order) return i;
    }
    if (!order.attributes().is_subset_of(primary_order_.attributes())) {
        throw ArityMismatch("index " + to_string(order) + " names attributes beyond the arity of '" + name_ + "'");
    }
    LexOrder full = order.extended_to(arity());
    Index idx{order, full, Container(KeyOrder{arena_.get(), full.sequence()}), 0};
    for (TupleId id : primary_) {
        idx.tuples.insert(id);
        ++idx.inserts;
    }
    indexes_.push_back(std::move(idx));
    return indexes_.size() - 1;
}

std::uint64_t Relation::total_index_inserts() const {
    std::uint64_t n = 0;
    for (const auto& idx : indexes_) n += idx.inserts;
    return n;
}

bool Relation::insert(TupleRef t) {
    if (t.size() != arity()) {
        throw ArityMismatch("tuple of arity " + std::to_string(t.size()) + " for relation '" + name_ + "' of arity " +
                            std::to_string(arity()));
    }
    if (primary_.find(ValueKey{t.data()}) != primary_.end()) return false;
    const auto id = static_cast<TupleId>(primary_.size());
    arena_->data.insert(arena_->data.end(), t.begin(), t.end());
    primary_.insert(id);
    for (auto& idx : indexes_) {
        idx.tuples.insert(id);
        ++idx.inserts;
    }
    return true;
}

bool Relation::contains(TupleRef t) const {
    if (t.size() != arity()) return false;
    return primary_.find(ValueKey{t.data()}) != primary_.end();
}

Relation::Range Relation::scan() const {
    return Range(const_iterator(arena_.get(), primary_.begin()), const_iterator(arena_.get(), primary_.end()));
}

Relation::Range Relation::range_in(const Container& c, std::span<const BoundValue> a,
                                   std::span<const BoundValue> b) const {
    if (a.size() != arity() || b.size() != arity()) throw ArityMismatch("bound tuple arity mismatch");
    auto lo = c.lower_bound(BoundKey{a.data()});
    auto hi = c.upper_bound(BoundKey{b.data()});
    // An inverted range would place hi before lo.
    for (AttrId attr : c.key_comp().order) {
        if (auto cmp = compare(a[attr], b[attr]); cmp != 0) {
            if (cmp > 0) lo = hi;
            break;
        }
    }
    return Range(const_iterator(arena_.get(), lo), const_iterator(arena_.get(), hi));
}

Relation::Range Relation::range_search(const LexOrder& order, std::span<const BoundValue> a,
                                       std::span<const BoundValue> b) const {
    for (const auto& idx : indexes_) {
        if (idx.full_order.starts_with(order)) return range_in(idx.tuples, a, b);
    }
    if (primary_order_.starts_with(order)) return range_in(primary_, a, b);
    throw MissingIndex("relation '" + name_ + "' maintains no index starting with " + to_string(order));
}

std::vector<Tuple> Relation::primitive_search_scan(std::span<const Equality> pred) const {
    std::vector<Tuple> out;
    for (TupleRef t : scan()) {
        const bool match = std::all_of(pred.begin(), pred.end(), [&](const Equality& e) {
            return e.attr < t.size() && t[e.attr] == e.value;
        });
        if (match) out.emplace_back(t.begin(), t.end());
    }
    return out;
}

bool Relation::mirror_consistent() const {
    std::vector<TupleId> base(primary_.begin(), primary_.end());
    std::sort(base.begin(), base.end());
    for (const auto& idx : indexes_) {
        std::vector<TupleId> ids(idx.tuples.begin(), idx.tuples.end());
        if (!std::is_sorted(ids.begin(), ids.end(), [&](TupleId x, TupleId y) { return idx.tuples.key_comp()(x, y); })) {
            return false;
        }
        std::sort(ids.begin(), ids.end());
        if (ids != base) return false;
    }
    return true;
}

std::size_t load_facts(const std::filesystem::path& path, Relation& rel, SymbolTable& symbols) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open fact file '" + path.string() + "'");
    return load_facts(in, path.string(), rel, symbols);
}

std::size_t load_facts(std::istream& in, const std::string& source, Relation& rel, SymbolTable& symbols) {
    std::string line;
    std::size_t lineno = 0;
    std::size_t count = 0;
    Tuple t;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        t.clear();
        std::size_t start = 0;
        while (true) {
            const std::size_t tab = line.find('\t', start);
            t.push_back(symbols.intern(std::string_view(line).substr(start, tab - start)));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (t.size() != rel.arity()) {
            throw IoError(source + ":" + std::to_string(lineno) + ": expected " + std::to_string(rel.arity()) +
                          " fields, found " + std::to_string(t.size()));
        }
        rel.insert(t);
        ++count;
    }
    return count;
}

std::string format_facts(const Relation& rel, const SymbolTable& symbols) {
    std::string out;
    for (TupleRef t : rel.scan()) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i > 0) out += '\t';
            out += symbols.resolve(t[i]);
        }
        out += '\n';
    }
    return out;
}

void write_facts(const std::filesystem::path& path, const Relation& rel, const SymbolTable& symbols) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write fact file '" + path.string() + "'");
    out << format_facts(rel, symbols);
    if (!out) throw IoError("error writing fact file '" + path.string() + "'");
}

}  // namespace autoindex
