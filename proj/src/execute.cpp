#include <algorithm>
#include <functional>
#include <stdexcept>
#include <thread>

#include "autoindex/engine.h"
#include "autoindex/error.h"

namespace autoindex {

Relation& Database::add_relation(const std::string& name, Schema schema) {
    auto [it, fresh] = relations_.try_emplace(name, name, std::move(schema));
    if (!fresh) throw std::invalid_argument("relation '" + name + "' already exists");
    return it->second;
}

Relation& Database::relation(std::string_view name) {
    auto it = relations_.find(name);
    if (it == relations_.end()) throw MissingRelation("no relation named '" + std::string(name) + "'");
    return it->second;
}

const Relation& Database::relation(std::string_view name) const {
    auto it = relations_.find(name);
    if (it == relations_.end()) throw MissingRelation("no relation named '" + std::string(name) + "'");
    return it->second;
}

bool Database::has_relation(std::string_view name) const { return relations_.find(name) != relations_.end(); }

std::vector<std::string> Database::relation_names() const {
    std::vector<std::string> out;
    for (const auto& [name, rel] : relations_) out.push_back(name);
    return out;
}

namespace {

CompiledAccess compile_access(const Access& a, std::size_t arity, const IndexPlan* plan) {
    CompiledAccess ca;
    ca.relation = a.relation;
    ca.search = a.search;
    ca.residual = a.residual;
    if (a.search.empty()) {
        ca.kind = AccessKind::FullScan;
        return ca;
    }
    if (plan == nullptr) {
        ca.kind = AccessKind::LinearScan;
        return ca;
    }
    const Search s = a.search_attributes();
    auto sol = plan->find(a.relation);
    if (sol == plan->end() || !sol->second.assignment.count(s)) {
        throw std::logic_error("internal error: no index assigned to search " + to_string(s) + " on '" + a.relation + "'");
    }
    ca.kind = AccessKind::Range;
    ca.order = sol->second.order_for(s);
    if (prefix_set(ca.order, s.size()) != s) {
        throw std::logic_error("internal error: index " + to_string(ca.order) + " does not cover search " + to_string(s));
    }
    ca.recipe.assign(arity, BoundSlot{});
    for (const Condition& c : a.search) {
        BoundSlot& slot = ca.recipe.at(c.attr);
        if (c.rhs.kind == Operand::Kind::Constant) {
            slot = {BoundSlot::Kind::Constant, c.rhs.constant, {}};
        } else {
            slot = {BoundSlot::Kind::Attribute, 0, c.rhs.ref};
        }
    }
    return ca;
}

std::size_t arity_of(const Program& program, const std::string& relation) {
    const RelationDecl* d = program.find(relation);
    if (d == nullptr) throw MissingRelation("undeclared relation '" + relation + "'");
    return d->schema.size();
}

class Executor {
public:
    using Sink = std::function<void(const Tuple&)>;

    Executor(const CompiledJoin& join, const Database& db) : join_(&join) {
        for (const CompiledAccess& loop : join.loops) {
            const Relation& rel = db.relation(loop.relation);
            loop_rels_.push_back(&rel);
            lo_.emplace_back(rel.arity(), BoundValue::unspecified());
            hi_.emplace_back(rel.arity(), BoundValue::unspecified());
        }
        checks_at_.resize(join.loops.size() + 1);
        for (const CompiledCheck& check : join.negations) {
            const Relation& rel = db.relation(check.access.relation);
            check_rels_.push_back(&rel);
            check_lo_.emplace_back(rel.arity(), BoundValue::unspecified());
            check_hi_.emplace_back(rel.arity(), BoundValue::unspecified());
            checks_at_.at(std::min(check.depth, join.loops.size())).push_back(check_rels_.size() - 1);
        }
        current_.resize(join.loops.size());
    }

    /// Runs loops from `depth` on, given tuples for all outer loops.
    void descend(std::size_t depth, const Sink& sink) {
        if (!checks_pass(depth)) return;
        if (depth == join_->loops.size()) {
            emit(sink);
            return;
        }
        for_each_candidate(depth, [&](TupleRef t) {
            current_[depth] = t;
            descend(depth + 1, sink);
        });
    }

    bool checks_pass(std::size_t depth) {
        for (std::size_t i : checks_at_[depth]) {
            if (!empty_access(join_->negations[i].access, *check_rels_[i], check_lo_[i], check_hi_[i])) return false;
        }
        return true;
    }

    /// Tuples of loop `depth` passing its search and residual predicates.
    template <typename F>
    void for_each_candidate(std::size_t depth, F&& f) {
        const CompiledAccess& access = join_->loops[depth];
        const Relation& rel = *loop_rels_[depth];
        auto visit = [&](TupleRef t) {
            if (residual_holds(access, t, depth)) f(t);
        };
        switch (access.kind) {
            case AccessKind::FullScan:
                for (TupleRef t : rel.scan()) visit(t);
                break;
            case AccessKind::Range:
                fill_bounds(access, lo_[depth], hi_[depth]);
                for (TupleRef t : rel.range_search(access.order, lo_[depth], hi_[depth])) visit(t);
                break;
            case AccessKind::LinearScan: {
                const std::vector<Tuple> rows = rel.primitive_search_scan(instantiate(access.search));
                for (const Tuple& row : rows) visit(row);
                break;
            }
        }
    }

    void set_outer(std::size_t depth, TupleRef t) { current_[depth] = t; }

private:
    Value value_of(const Operand& op) const {
        if (op.kind == Operand::Kind::Constant) return op.constant;
        return current_[op.ref.loop][op.ref.attr];
    }

    bool residual_holds(const CompiledAccess& access, TupleRef t, std::size_t depth) {
        if (access.residual.empty()) return true;
        current_[depth] = t;
        return std::all_of(access.residual.begin(), access.residual.end(),
                           [&](const Condition& c) { return t[c.attr] == value_of(c.rhs); });
    }

    std::vector<Equality> instantiate(const std::vector<Condition>& conds) const {
        std::vector<Equality> pred;
        pred.reserve(conds.size());
        for (const Condition& c : conds) pred.push_back({c.attr, value_of(c.rhs)});
        return pred;
    }

    void fill_bounds(const CompiledAccess& access, BoundTuple& lo, BoundTuple& hi) const {
        for (std::size_t i = 0; i < access.recipe.size(); ++i) {
            const BoundSlot& slot = access.recipe[i];
            switch (slot.kind) {
                case BoundSlot::Kind::Pad:
                    lo[i] = BoundValue::bottom();
                    hi[i] = BoundValue::top();
                    break;
                case BoundSlot::Kind::Constant:
                    lo[i] = hi[i] = BoundValue::concrete(slot.constant);
                    break;
                case BoundSlot::Kind::Attribute:
                    lo[i] = hi[i] = BoundValue::concrete(current_[slot.ref.loop][slot.ref.attr]);
                    break;
            }
        }
    }

    bool empty_access(const CompiledAccess& access, const Relation& rel, BoundTuple& lo, BoundTuple& hi) const {
        switch (access.kind) {
            case AccessKind::FullScan:
                return rel.empty();
            case AccessKind::Range:
                fill_bounds(access, lo, hi);
                return rel.range_search(access.order, lo, hi).empty();
            case AccessKind::LinearScan:
                return rel.primitive_search_scan(instantiate(access.search)).empty();
        }
        return true;
    }

    void emit(const Sink& sink) {
        scratch_.clear();
        for (const Operand& op : join_->projection) scratch_.push_back(value_of(op));
        sink(scratch_);
    }

    const CompiledJoin* join_;
    std::vector<const Relation*> loop_rels_;
    std::vector<const Relation*> check_rels_;
    std::vector<BoundTuple> lo_, hi_;
    std::vector<BoundTuple> check_lo_, check_hi_;
    std::vector<std::vector<std::size_t>> checks_at_;
    std::vector<TupleRef> current_;
    Tuple scratch_;
};

}  // namespace

CompiledJoin compile(const LoopNest& nest, const IndexPlan* plan, const Program& program) {
    if (!nest.rewritten) throw std::logic_error("compile requires a rewritten loop nest");
    CompiledJoin join;
    join.head = nest.head;
    join.projection = nest.projection;
    for (const Access& loop : nest.loops) {
        join.loops.push_back(compile_access(loop, arity_of(program, loop.relation), plan));
    }
    for (const NegationCheck& check : nest.negations) {
        join.negations.push_back(
            {compile_access(check.access, arity_of(program, check.access.relation), plan), check.depth});
    }
    return join;
}

std::size_t execute(const CompiledJoin& join, Database& db, unsigned threads) {
    Relation& head = db.relation(join.head);
    if (join.projection.size() != head.arity()) throw ArityMismatch("projection does not match head arity");
    Executor exec(join, db);
    std::size_t inserted = 0;

    if (threads <= 1 || join.loops.empty()) {
        exec.descend(0, [&](const Tuple& t) {
            if (!head.contains(t) && head.insert(t)) ++inserted;
        });
        return inserted;
    }

    if (!exec.checks_pass(0)) return 0;
    // Copy the outermost candidates so workers can index them.
    std::vector<Tuple> outer;
    exec.for_each_candidate(0, [&](TupleRef t) { outer.emplace_back(t.begin(), t.end()); });

    const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(outer.size(), 1));
    std::vector<std::vector<Tuple>> produced(workers);
    std::vector<std::thread> pool;
    const std::size_t chunk = (outer.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            Executor local = exec;
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(outer.size(), begin + chunk);
            for (std::size_t i = begin; i < end; ++i) {
                local.set_outer(0, outer[i]);
                local.descend(1, [&](const Tuple& t) { produced[w].push_back(t); });
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& batch : produced) {
        for (const Tuple& t : batch) {
            if (!head.contains(t) && head.insert(t)) ++inserted;
        }
    }
    return inserted;
}

std::string_view to_string(IndexMode mode) {
    switch (mode) {
        case IndexMode::Auto:
            return "auto";
        case IndexMode::Naive:
            return "naive";
        case IndexMode::Scan:
            return "scan";
    }
    return "auto";
}

std::optional<IndexMode> parse_index_mode(std::string_view text) {
    if (text == "auto") return IndexMode::Auto;
    if (text == "naive") return IndexMode::Naive;
    if (text == "scan") return IndexMode::Scan;
    return std::nullopt;
}

CompiledProgram compile_program(const Program& program, IndexMode mode, SymbolTable& symbols) {
    CompiledProgram out;
    out.mode = mode;
    for (std::size_t i : evaluation_order(program)) {
        out.nests.push_back(rewrite_searches(translate(program.rules[i], program, symbols)));
    }
    out.searches = collect_searches(out.nests);
    switch (mode) {
        case IndexMode::Auto:
            out.plan = optimize_indexes(out.searches);
            break;
        case IndexMode::Naive:
            out.plan = naive_indexes(out.searches);
            break;
        case IndexMode::Scan:
            break;
    }
    const IndexPlan* plan = mode == IndexMode::Scan ? nullptr : &out.plan;
    for (const LoopNest& nest : out.nests) out.joins.push_back(compile(nest, plan, program));
    return out;
}

void prepare_database(const Program& program, const CompiledProgram& compiled, Database& db) {
    for (const RelationDecl& d : program.relations) {
        Relation& rel = db.has_relation(d.name) ? db.relation(d.name) : db.add_relation(d.name, d.schema);
        if (auto it = compiled.plan.find(d.name); it != compiled.plan.end()) {
            for (const LexOrder& order : it->second.index_set) rel.add_index(order);
        }
    }
}

std::size_t evaluate(const CompiledProgram& compiled, Database& db, unsigned threads) {
    std::size_t derived = 0;
    for (const CompiledJoin& join : compiled.joins) derived += execute(join, db, threads);
    return derived;
}

}  // namespace autoindex
