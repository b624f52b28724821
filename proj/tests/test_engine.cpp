#include <gtest/gtest.h>

#include <set>

#include "autoindex/engine.h"
#include "autoindex/error.h"
#include "autoindex/runner.h"

using namespace autoindex;

namespace {

constexpr AttrId x = 0, y = 1, z = 2;

const char* const kMotivating = R"(
.decl A(x, y, z)
.decl B(x, y, z)
.input A
.output B
B(r, p, q) :- A(r, p, q), A(q, _, _), A(p, q, _), A(p, _, q), A(q, p, r).
)";

Condition cond(AttrId attr, std::size_t loop, AttrId of) { return {attr, Operand::of_attribute(loop, of)}; }

template <typename E>
E expect_error(const std::string& text) {
    try {
        parse_program(text);
    } catch (const E& e) {
        return e;
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return E("", 0, 0);
}

// Every combination of input tuples, filtered by the rule's meaning.
std::set<std::vector<std::string>> motivating_oracle(const std::vector<std::vector<std::string>>& a) {
    std::set<std::vector<std::string>> out;
    std::set<std::vector<std::string>> rel(a.begin(), a.end());
    for (const auto& t : rel) {
        const std::string &r = t[0], &p = t[1], &q = t[2];
        bool q_any = false, pq_ = false, p_q = false;
        for (const auto& u : rel) {
            q_any = q_any || u[0] == q;
            pq_ = pq_ || (u[0] == p && u[1] == q);
            p_q = p_q || (u[0] == p && u[2] == q);
        }
        if (q_any && pq_ && p_q && rel.count({q, p, r})) out.insert({r, p, q});
    }
    return out;
}

}  // namespace

TEST(Parser, DeclarationsDirectivesAndRules) {
    const Program p = parse_program(R"(
        // comment
        .decl Edge(src:number, dst:symbol)  # trailing comment
        .decl Reach(a, b)
        .input Edge "edges.tsv"
        .output Reach
        /* block
           comment */
        Reach(a, b) :- Edge(a, c), Edge(c, b), !Edge(b, "start").
        Reach("s", 42).
    )");
    ASSERT_EQ(p.relations.size(), 2u);
    EXPECT_EQ(p.relations[0].schema.names(), (std::vector<std::string>{"src", "dst"}));
    EXPECT_EQ(p.inputs[0].path, "edges.tsv");
    EXPECT_EQ(p.outputs[0].path, "Reach.tsv");
    ASSERT_EQ(p.rules.size(), 2u);
    EXPECT_EQ(p.rules[0].body.size(), 3u);
    EXPECT_TRUE(p.rules[0].body[2].negated);
    EXPECT_EQ(p.rules[0].body[2].atom.args[1], (Term{Term::Kind::Constant, "start"}));
    EXPECT_EQ(p.rules[0].body[0].atom.args[0], (Term{Term::Kind::Variable, "a"}));
    EXPECT_TRUE(p.rules[1].body.empty());
    EXPECT_EQ(p.rules[1].head.args[1], (Term{Term::Kind::Constant, "42"}));
}

TEST(Parser, PlanIsOneBasedOverPositiveAtoms) {
    const Program p = parse_program(R"(
        .decl A(x, y)
        .decl B(x)
        B(a) :- A(a, b), !A(b, a), A(b, c).
        .plan 0:(2,1), 1:(1,2)
    )");
    EXPECT_EQ(p.rules[0].plan, (std::vector<std::size_t>{1, 0}));
    const ParseError e = expect_error<ParseError>(".decl A(x)\n.decl B(x)\nB(a) :- A(a), A(a).\n.plan (1)\n");
    EXPECT_EQ(e.line(), 4u);
}

TEST(Parser, ErrorsCarryPositions) {
    ParseError e = expect_error<ParseError>(".decl A(x, y)\n.decl B(x)\nB(x) :- A(x y).\n");
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 13u);

    e = expect_error<ParseError>(".decl A(x)\nB(x) :- A(x).\n");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 1u);

    e = expect_error<ParseError>(".decl A(x)\n.decl B(x)\nB(x) :- A(x, x).\n");
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 9u);

    e = expect_error<ParseError>(".decl A(x, x)\n");
    EXPECT_EQ(e.column(), 12u);

    e = expect_error<ParseError>(".decl A(x)\n.output C\n");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 9u);

    expect_error<ParseError>(".decl A(x)\n.decl A(y)\n");
    expect_error<ParseError>(".decl A()\n");
    expect_error<ParseError>(".frobnicate A\n");
    expect_error<ParseError>(".decl A(x)\n.decl B(x)\nB(x) :- A(x)\n");
}

TEST(Parser, RangeRestriction) {
    EXPECT_THROW(parse_program(".decl A(x)\n.decl B(x)\nB(y) :- A(x).\n"), UnsafeRuleError);
    EXPECT_THROW(parse_program(".decl A(x)\n.decl B(x)\nB(_) :- A(x).\n"), UnsafeRuleError);
    EXPECT_THROW(parse_program(".decl A(x)\n.decl B(x)\nB(x) :- A(x), !A(y).\n"), UnsafeRuleError);
    EXPECT_THROW(parse_program(".decl A(x)\n.decl B(x)\nB(x) :- !A(x).\n"), UnsafeRuleError);
    EXPECT_NO_THROW(parse_program(".decl A(x)\n.decl B(x)\nB(x) :- A(x), !A(_).\n"));
    try {
        parse_program(".decl A(x)\n.decl B(x)\n\nB(y) :- A(x).\n");
    } catch (const UnsafeRuleError& e) {
        EXPECT_EQ(std::string(e.what()).rfind("4:", 0), 0u) << e.what();
    }
}

TEST(Parser, RejectsRecursion) {
    EXPECT_THROW(parse_program(".decl A(x)\nA(x) :- A(x).\n"), RecursionError);
    EXPECT_THROW(parse_program(".decl A(x)\n.decl B(x)\nA(x) :- B(x).\nB(x) :- A(x).\n"), RecursionError);
    EXPECT_THROW(parse_program(".decl A(x)\n.decl B(x)\nA(x) :- B(x), !A(x).\n"), RecursionError);
}

TEST(Parser, EvaluationOrderRespectsDependencies) {
    const Program p = parse_program(R"(
        .decl E(x)
        .decl C(x)
        .decl B(x)
        .decl A(x)
        A(x) :- B(x).
        B(x) :- C(x).
        C(x) :- E(x).
        A(x) :- E(x).
    )");
    const std::vector<std::size_t> order = evaluation_order(p);
    EXPECT_EQ(order, (std::vector<std::size_t>{2, 1, 0, 3}));
}

TEST(Translate, MotivatingLoopConditions) {
    const Program p = parse_program(kMotivating);
    SymbolTable symbols;
    const LoopNest nest = rewrite_searches(translate(p.rules[0], p, symbols));
    ASSERT_EQ(nest.loops.size(), 5u);
    EXPECT_TRUE(nest.loops[0].search.empty());
    EXPECT_EQ(nest.loops[1].search, (std::vector<Condition>{cond(x, 0, z)}));
    EXPECT_EQ(nest.loops[2].search, (std::vector<Condition>{cond(x, 0, y), cond(y, 0, z)}));
    EXPECT_EQ(nest.loops[3].search, (std::vector<Condition>{cond(x, 0, y), cond(z, 0, z)}));
    EXPECT_EQ(nest.loops[4].search, (std::vector<Condition>{cond(x, 0, z), cond(y, 0, y), cond(z, 0, x)}));
    for (const Access& a : nest.loops) EXPECT_TRUE(a.residual.empty());
    EXPECT_EQ(nest.projection, (std::vector<Operand>{Operand::of_attribute(0, x), Operand::of_attribute(0, y),
                                                      Operand::of_attribute(0, z)}));

    const auto searches = collect_searches(std::span<const LoopNest>(&nest, 1));
    EXPECT_EQ(searches.at("A"), (SearchSet{{x}, {x, y}, {x, z}, {x, y, z}}));
}

TEST(Translate, RepeatedVariableInOneAtomIsResidual) {
    const Program p = parse_program(".decl R(a, b, c)\n.decl D(a)\nD(a) :- R(a, a, \"k\"), R(b, a, b).\n");
    SymbolTable symbols;
    const LoopNest nest = rewrite_searches(translate(p.rules[0], p, symbols));
    EXPECT_EQ(nest.loops[0].search, (std::vector<Condition>{{z, Operand::of_constant(symbols.intern("k"))}}));
    EXPECT_EQ(nest.loops[0].residual, (std::vector<Condition>{cond(y, 0, x)}));
    EXPECT_EQ(nest.loops[1].search, (std::vector<Condition>{cond(y, 0, x)}));
    EXPECT_EQ(nest.loops[1].residual, (std::vector<Condition>{cond(z, 1, x)}));
}

TEST(Translate, NegationRunsOnceItsVariablesAreBound) {
    const Program p = parse_program(R"(
        .decl A(x, y)
        .decl N(x)
        .decl B(x)
        B(a) :- A(a, b), A(b, c), !N(a), !N(c), !N(_).
    )");
    SymbolTable symbols;
    const LoopNest nest = translate(p.rules[0], p, symbols);
    ASSERT_EQ(nest.negations.size(), 3u);
    EXPECT_EQ(nest.negations[0].depth, 1u);
    EXPECT_EQ(nest.negations[1].depth, 2u);
    EXPECT_EQ(nest.negations[2].depth, 0u);
}

TEST(Translate, PlanReordersLoops) {
    const Program p = parse_program(".decl E(a, b)\n.decl D(a, b)\nD(a, c) :- E(a, b), E(b, c).\n.plan 0:(2,1)\n");
    SymbolTable symbols;
    const LoopNest nest = rewrite_searches(translate(p.rules[0], p, symbols));
    EXPECT_TRUE(nest.loops[0].search.empty());
    EXPECT_EQ(nest.loops[1].search, (std::vector<Condition>{cond(y, 0, x)}));
    EXPECT_EQ(nest.projection, (std::vector<Operand>{Operand::of_attribute(1, x), Operand::of_attribute(0, y)}));
}

TEST(Compile, MotivatingRangeRecipes) {
    const Program p = parse_program(kMotivating);
    SymbolTable symbols;
    const CompiledProgram c = compile_program(p, IndexMode::Auto, symbols);
    ASSERT_EQ(c.joins.size(), 1u);
    const CompiledJoin& j = c.joins[0];
    EXPECT_EQ(j.loops[0].kind, AccessKind::FullScan);
    for (std::size_t i = 1; i < 5; ++i) EXPECT_EQ(j.loops[i].kind, AccessKind::Range);
    EXPECT_EQ(j.loops[1].order, LexOrder({x, y, z}));
    EXPECT_EQ(j.loops[3].order, LexOrder({x, z}));
    using K = BoundSlot::Kind;
    EXPECT_EQ(j.loops[3].recipe, (std::vector<BoundSlot>{{K::Attribute, 0, {0, y}}, {K::Pad, 0, {}},
                                                          {K::Attribute, 0, {0, z}}}));

    const CompiledProgram scan = compile_program(p, IndexMode::Scan, symbols);
    EXPECT_TRUE(scan.plan.empty());
    EXPECT_EQ(scan.joins[0].loops[2].kind, AccessKind::LinearScan);
    const CompiledProgram naive = compile_program(p, IndexMode::Naive, symbols);
    EXPECT_EQ(naive.plan.at("A").index_set.size(), 4u);
}

TEST(Compile, RejectsPlansThatDoNotCover) {
    const Program p = parse_program(kMotivating);
    SymbolTable symbols;
    LoopNest nest = rewrite_searches(translate(p.rules[0], p, symbols));
    IndexPlan plan = optimize_indexes(collect_searches(std::span<const LoopNest>(&nest, 1)));
    plan.at("A").assignment.at(Search{x, z}) = LexOrder({x, y, z});
    EXPECT_THROW(compile(nest, &plan, p), std::logic_error);
    EXPECT_THROW(compile(translate(p.rules[0], p, symbols), &plan, p), std::logic_error);
}

TEST(Evaluate, MotivatingRuleMatchesOracleInEveryMode) {
    const Program p = parse_program(kMotivating);
    std::vector<std::vector<std::string>> a;
    std::string facts;
    for (int i = 0; i < 60; ++i) {
        std::vector<std::string> t{std::to_string(i % 4), std::to_string((i * 7) % 5), std::to_string((i * 3) % 4)};
        facts += t[0] + "\t" + t[1] + "\t" + t[2] + "\n";
        a.push_back(t);
    }
    const auto expected = motivating_oracle(a);
    ASSERT_FALSE(expected.empty());
    std::string expected_text;
    for (IndexMode mode : {IndexMode::Auto, IndexMode::Naive, IndexMode::Scan}) {
        const RunResult r = run_in_memory(p, mode, {{"A", facts}});
        std::set<std::vector<std::string>> got;
        std::istringstream lines(r.outputs.at("B"));
        std::string line;
        while (std::getline(lines, line)) {
            std::vector<std::string> t;
            std::istringstream fields(line);
            std::string f;
            while (std::getline(fields, f, '\t')) t.push_back(f);
            got.insert(t);
        }
        EXPECT_EQ(got, expected) << to_string(mode);
        if (expected_text.empty()) expected_text = r.outputs.at("B");
        EXPECT_EQ(r.outputs.at("B"), expected_text);
    }
}

TEST(Evaluate, SelfMatchingTupleAndEmptyInput) {
    const Program p = parse_program(kMotivating);
    for (IndexMode mode : {IndexMode::Auto, IndexMode::Scan}) {
        const RunResult one = run_in_memory(p, mode, {{"A", "1\t1\t1\n"}});
        EXPECT_EQ(one.outputs.at("B"), "1\t1\t1\n");
        EXPECT_EQ(one.report.modes.begin()->second.tuples_derived, 1u);
        const RunResult none = run_in_memory(p, mode, {{"A", ""}});
        EXPECT_EQ(none.outputs.at("B"), "");
        EXPECT_EQ(none.report.modes.begin()->second.tuples_derived, 0u);
    }
}

TEST(Evaluate, NegationStrataAndFacts) {
    const Program p = parse_program(R"(
        .decl Edge(a, b)
        .decl Node(a)
        .decl Sink(a)
        .decl Self(a)
        .input Edge
        .output Sink
        .output Self
        Node("lonely").
        Node(a) :- Edge(a, _).
        Node(b) :- Edge(_, b).
        Sink(a) :- Node(a), !Edge(a, _).
        Self(a) :- Edge(a, a).
    )");
    for (unsigned threads : {1u, 4u}) {
        const RunResult r = run_in_memory(p, IndexMode::Auto, {{"Edge", "p\tq\nq\tr\nr\tr\n"}}, threads);
        EXPECT_EQ(r.outputs.at("Sink"), "lonely\n");
        EXPECT_EQ(r.outputs.at("Self"), "r\n");
    }
}

TEST(Evaluate, ThreadedRunsAreIdentical) {
    const Program p = parse_program(kMotivating);
    std::string facts;
    for (int i = 0; i < 400; ++i) {
        facts += std::to_string(i % 7) + "\t" + std::to_string((i * 5) % 6) + "\t" + std::to_string((i * 3) % 7) + "\n";
    }
    const RunResult one = run_in_memory(p, IndexMode::Auto, {{"A", facts}}, 1);
    const RunResult many = run_in_memory(p, IndexMode::Auto, {{"A", facts}}, 8);
    EXPECT_EQ(one.outputs, many.outputs);
    EXPECT_EQ(one.report.modes.at("auto").tuples_derived, many.report.modes.at("auto").tuples_derived);
}

TEST(IndexModeNames, RoundTrip) {
    for (IndexMode m : {IndexMode::Auto, IndexMode::Naive, IndexMode::Scan}) EXPECT_EQ(parse_index_mode(to_string(m)), m);
    EXPECT_FALSE(parse_index_mode("fast").has_value());
}
