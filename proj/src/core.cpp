#include "autoindex/core.h"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace autoindex {

Schema::Schema(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() > kMaxAttributes) {
        throw std::invalid_argument("relation arity exceeds " + std::to_string(kMaxAttributes));
    }
    std::set<std::string_view> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw std::invalid_argument("attribute name must be nonempty");
        if (!seen.insert(n).second) throw std::invalid_argument("duplicate attribute name '" + n + "'");
    }
}

Schema Schema::anonymous(std::size_t arity) {
    std::vector<std::string> names;
    names.reserve(arity);
    for (std::size_t i = 0; i < arity; ++i) {
        names.push_back(arity <= 3 ? std::string(1, static_cast<char>('x' + i)) : "a" + std::to_string(i));
    }
    return Schema(std::move(names));
}

std::optional<AttrId> Schema::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return static_cast<AttrId>(i);
    }
    return std::nullopt;
}

Search::Search(std::initializer_list<AttrId> attrs) {
    for (AttrId a : attrs) *this = with(a);
}

Search Search::with(AttrId a) const {
    if (a >= kMaxAttributes) throw std::out_of_range("attribute id out of range");
    return Search(mask_ | (std::uint64_t{1} << a));
}

std::vector<AttrId> Search::attributes() const {
    std::vector<AttrId> out;
    out.reserve(size());
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
        out.push_back(static_cast<AttrId>(std::countr_zero(m)));
    }
    return out;
}

bool is_strict_subset(Search a, Search b) { return a != b && a.is_subset_of(b); }

SearchSet::SearchSet(std::initializer_list<Search> searches) {
    for (Search s : searches) insert(s);
}

SearchSet::SearchSet(const std::vector<Search>& searches) {
    for (Search s : searches) insert(s);
}

bool SearchSet::insert(Search s) {
    auto it = std::lower_bound(searches_.begin(), searches_.end(), s);
    if (it != searches_.end() && *it == s) return false;
    searches_.insert(it, s);
    return true;
}

bool SearchSet::contains(Search s) const { return std::binary_search(searches_.begin(), searches_.end(), s); }

std::optional<std::size_t> SearchSet::position(Search s) const {
    auto it = std::lower_bound(searches_.begin(), searches_.end(), s);
    if (it == searches_.end() || *it != s) return std::nullopt;
    return static_cast<std::size_t>(it - searches_.begin());
}

Search SearchSet::attributes() const {
    std::uint64_t m = 0;
    for (Search s : searches_) m |= s.mask();
    return Search(m);
}

LexOrder::LexOrder(std::vector<AttrId> seq) : seq_(std::move(seq)) {
    if (seq_.empty()) throw std::invalid_argument("lexicographic order must be nonempty");
    std::uint64_t seen = 0;
    for (AttrId a : seq_) {
        if (a >= kMaxAttributes) throw std::out_of_range("attribute id out of range");
        const std::uint64_t bit = std::uint64_t{1} << a;
        if (seen & bit) throw std::invalid_argument("attribute repeated in lexicographic order");
        seen |= bit;
    }
}

Search LexOrder::attributes() const { return prefix_set(*this, seq_.size()); }

bool LexOrder::starts_with(const LexOrder& other) const {
    return other.size() <= size() && std::equal(other.begin(), other.end(), seq_.begin());
}

LexOrder LexOrder::extended_to(std::size_t arity) const {
    std::vector<AttrId> full = seq_;
    const Search present = attributes();
    for (std::size_t a = 0; a < arity; ++a) {
        if (!present.contains(static_cast<AttrId>(a))) full.push_back(static_cast<AttrId>(a));
    }
    return LexOrder(std::move(full));
}

Search prefix_set(const LexOrder& order, std::size_t k) {
    std::uint64_t m = 0;
    const std::size_t n = std::min(k, order.size());
    for (std::size_t i = 0; i < n; ++i) m |= std::uint64_t{1} << order[i];
    return Search(m);
}

IndexSet::IndexSet(std::initializer_list<LexOrder> orders) {
    for (const auto& o : orders) insert(o);
}

bool IndexSet::insert(LexOrder order) {
    if (contains(order)) return false;
    orders_.push_back(std::move(order));
    return true;
}

bool IndexSet::contains(const LexOrder& order) const {
    return std::find(orders_.begin(), orders_.end(), order) != orders_.end();
}

Chain::Chain(std::vector<Search> links) {
    links_.reserve(links.size());
    for (Search s : links) push_back(s);
}

void Chain::push_back(Search s) {
    if (!links_.empty() && !is_strict_subset(links_.back(), s)) {
        throw std::invalid_argument("chain links must strictly increase under inclusion");
    }
    links_.push_back(s);
}

bool Chain::contains(Search s) const { return std::find(links_.begin(), links_.end(), s) != links_.end(); }

bool l_cover(const SearchSet& q, const IndexSet& l) {
    return std::all_of(q.begin(), q.end(), [&](Search s) {
        return std::any_of(l.begin(), l.end(), [&](const LexOrder& o) { return prefix_set(o, s.size()) == s; });
    });
}

bool c_cover(const SearchSet& q, const ChainCover& c) {
    return std::all_of(q.begin(), q.end(), [&](Search s) {
        return std::any_of(c.begin(), c.end(), [&](const Chain& ch) { return ch.contains(s); });
    });
}

bool is_partition(const SearchSet& q, const ChainCover& c) {
    std::vector<int> hits(q.size(), 0);
    for (const Chain& ch : c) {
        for (Search s : ch) {
            auto pos = q.position(s);
            if (!pos) return false;
            ++hits[*pos];
        }
    }
    return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

namespace {

std::string attr_name(AttrId a, const Schema* schema) {
    if (schema != nullptr && a < schema->size()) return schema->name(a);
    return std::to_string(a);
}

}  // namespace

std::string to_string(Search s, const Schema* schema) {
    std::string out = "{";
    bool first = true;
    for (AttrId a : s.attributes()) {
        if (!first) out += ',';
        out += attr_name(a, schema);
        first = false;
    }
    return out + "}";
}

std::string to_string(const LexOrder& order, const Schema* schema) {
    std::string out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0) out += " ≺ ";
        out += attr_name(order[i], schema);
    }
    return out;
}

std::string to_string(const Chain& chain, const Schema* schema) {
    std::string out;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i > 0) out += " ⊂ ";
        out += to_string(chain[i], schema);
    }
    return out;
}

}  // namespace autoindex
