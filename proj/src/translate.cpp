#include <map>
#include <numeric>
#include <stdexcept>

#include "autoindex/engine.h"
#include "autoindex/error.h"

namespace autoindex {

Search Access::search_attributes() const {
    Search s;
    for (const Condition& c : search) s = s.with(c.attr);
    return s;
}

namespace {

Operand constant_operand(const Term& t, SymbolTable& symbols) { return Operand::of_constant(symbols.intern(t.text)); }

}  // namespace

LoopNest translate(const Rule& rule, const Program& program, SymbolTable& symbols) {
    std::vector<const Literal*> positives;
    std::vector<const Literal*> negatives;
    for (const Literal& lit : rule.body) (lit.negated ? negatives : positives).push_back(&lit);

    std::vector<std::size_t> order(positives.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (!rule.plan.empty()) {
        if (rule.plan.size() != positives.size()) throw std::invalid_argument("plan does not match positive atoms");
        order = rule.plan;
    }

    LoopNest nest;
    nest.head = rule.head.relation;
    std::map<std::string, TupleAttr> binding;

    for (std::size_t j = 0; j < order.size(); ++j) {
        const Atom& atom = positives.at(order[j])->atom;
        Access loop;
        loop.relation = atom.relation;
        for (std::size_t p = 0; p < atom.args.size(); ++p) {
            const Term& t = atom.args[p];
            const auto attr = static_cast<AttrId>(p);
            switch (t.kind) {
                case Term::Kind::Wildcard:
                    break;
                case Term::Kind::Constant:
                    loop.conditions.push_back({attr, constant_operand(t, symbols)});
                    break;
                case Term::Kind::Variable:
                    if (auto it = binding.find(t.text); it != binding.end()) {
                        loop.conditions.push_back({attr, Operand::of_attribute(it->second.loop, it->second.attr)});
                    } else {
                        binding.emplace(t.text, TupleAttr{j, attr});
                    }
                    break;
            }
        }
        nest.loops.push_back(std::move(loop));
    }

    for (const Literal* lit : negatives) {
        NegationCheck check;
        check.access.relation = lit->atom.relation;
        for (std::size_t p = 0; p < lit->atom.args.size(); ++p) {
            const Term& t = lit->atom.args[p];
            const auto attr = static_cast<AttrId>(p);
            if (t.kind == Term::Kind::Constant) {
                check.access.conditions.push_back({attr, constant_operand(t, symbols)});
            } else if (t.kind == Term::Kind::Variable) {
                auto it = binding.find(t.text);
                if (it == binding.end()) throw UnsafeRuleError("variable '" + t.text + "' of a negated atom is unbound");
                check.access.conditions.push_back({attr, Operand::of_attribute(it->second.loop, it->second.attr)});
                check.depth = std::max(check.depth, it->second.loop + 1);
            }
        }
        nest.negations.push_back(std::move(check));
    }

    for (const Term& t : rule.head.args) {
        if (t.kind == Term::Kind::Constant) {
            nest.projection.push_back(constant_operand(t, symbols));
        } else if (t.kind == Term::Kind::Variable) {
            auto it = binding.find(t.text);
            if (it == binding.end()) throw UnsafeRuleError("head variable '" + t.text + "' is unbound");
            nest.projection.push_back(Operand::of_attribute(it->second.loop, it->second.attr));
        } else {
            throw UnsafeRuleError("wildcard in rule head");
        }
    }
    if (program.find(nest.head) == nullptr) throw MissingRelation("undeclared relation '" + nest.head + "'");
    return nest;
}

LoopNest rewrite_searches(LoopNest nest) {
    for (std::size_t j = 0; j < nest.loops.size(); ++j) {
        Access& loop = nest.loops[j];
        loop.search.clear();
        loop.residual.clear();
        for (const Condition& c : loop.conditions) {
            const bool outer = c.rhs.kind == Operand::Kind::Constant || c.rhs.ref.loop < j;
            (outer ? loop.search : loop.residual).push_back(c);
        }
    }
    // Negated atoms only reference tuples bound before their depth.
    for (NegationCheck& check : nest.negations) {
        check.access.search = check.access.conditions;
        check.access.residual.clear();
    }
    nest.rewritten = true;
    return nest;
}

std::map<std::string, SearchSet> collect_searches(std::span<const LoopNest> nests) {
    std::map<std::string, SearchSet> out;
    auto add = [&](const Access& a) {
        const Search s = a.search_attributes();
        if (!s.empty()) out[a.relation].insert(s);
    };
    for (const LoopNest& nest : nests) {
        if (!nest.rewritten) throw std::logic_error("collect_searches requires rewritten loop nests");
        for (const Access& loop : nest.loops) add(loop);
        for (const NegationCheck& check : nest.negations) add(check.access);
    }
    return out;
}

IndexPlan optimize_indexes(const std::map<std::string, SearchSet>& searches) {
    IndexPlan plan;
    for (const auto& [relation, q] : searches) plan.emplace(relation, min_index(q));
    return plan;
}

IndexPlan naive_indexes(const std::map<std::string, SearchSet>& searches) {
    IndexPlan plan;
    for (const auto& [relation, q] : searches) plan.emplace(relation, naive_index(q));
    return plan;
}

}  // namespace autoindex
