#pragma once

// Non-recursive Datalog evaluation by nested loop joins.
//
// Pipeline per rule:
//   parse_program      text -> Program
//   translate          Rule -> LoopNest (loops in declared or .plan order,
//                      each loop carrying equality conditions φ)
//   rewrite_searches   φ = φ' ∧ φ'' (primitive search + residual)
//   optimize_indexes   per relation: searches -> minimal index set
//   compile            primitive searches -> range searches with bound recipes
//   execute            run the loop nest, insert projected tuples

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autoindex/core.h"
#include "autoindex/mosp.h"
#include "autoindex/storage.h"

namespace autoindex {

struct SourceLoc {
    std::size_t line = 0;
    std::size_t column = 0;

    friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

struct Term {
    enum class Kind { Variable, Wildcard, Constant };

    Kind kind = Kind::Wildcard;
    /// Variable name or constant spelling (quotes removed).
    std::string text;

    friend bool operator==(const Term&, const Term&) = default;
};

struct Atom {
    std::string relation;
    std::vector<Term> args;
    SourceLoc loc;
};

struct Literal {
    Atom atom;
    bool negated = false;
};

struct Rule {
    Atom head;
    std::vector<Literal> body;
    /// Explicit join order as 0-based positions among the positive body
    /// literals; empty means declared order.
    std::vector<std::size_t> plan;
    SourceLoc loc;
};

struct RelationDecl {
    std::string name;
    Schema schema;
    SourceLoc loc;
};

struct IoDirective {
    std::string relation;
    std::string path;
    SourceLoc loc;
};

struct Program {
    std::vector<RelationDecl> relations;
    std::vector<IoDirective> inputs;
    std::vector<IoDirective> outputs;
    std::vector<Rule> rules;

    const RelationDecl* find(std::string_view name) const;
};

/// Parses and validates a program. Throws ParseError (syntax, undeclared
/// relation, arity), UnsafeRuleError (range restriction) or RecursionError.
Program parse_program(std::string_view text);

/// Rule indices in an order where every rule runs after all rules defining
/// relations it reads. Throws RecursionError on a dependency cycle.
std::vector<std::size_t> evaluation_order(const Program& program);

/// t_loop(attr).
struct TupleAttr {
    std::size_t loop = 0;
    AttrId attr = 0;

    friend bool operator==(const TupleAttr&, const TupleAttr&) = default;
};

/// Right-hand side of an equality: a constant or an element of a loop tuple.
struct Operand {
    enum class Kind { Constant, Attribute };

    Kind kind = Kind::Constant;
    Value constant = 0;
    TupleAttr ref;

    static Operand of_constant(Value v) { return {Kind::Constant, v, {}}; }
    static Operand of_attribute(std::size_t loop, AttrId attr) { return {Kind::Attribute, 0, {loop, attr}}; }

    friend bool operator==(const Operand&, const Operand&) = default;
};

/// t_j(attr) = rhs, where j is the loop that owns the condition.
struct Condition {
    AttrId attr = 0;
    Operand rhs;

    friend bool operator==(const Condition&, const Condition&) = default;
};

/// One relation access: a loop over a positive atom or an emptiness test
/// for a negated one.
struct Access {
    std::string relation;
    /// φ as produced by translate.
    std::vector<Condition> conditions;
    /// φ' after rewrite: conditions on constants or outer loops.
    std::vector<Condition> search;
    /// φ'' after rewrite: conditions that need the current tuple itself.
    std::vector<Condition> residual;

    Search search_attributes() const;
};

struct NegationCheck {
    Access access;
    /// Number of enclosing loops; the check runs once all of them are bound.
    std::size_t depth = 0;
};

struct LoopNest {
    std::vector<Access> loops;
    std::vector<NegationCheck> negations;
    std::string head;
    std::vector<Operand> projection;
    bool rewritten = false;
};

LoopNest translate(const Rule& rule, const Program& program, SymbolTable& symbols);

/// Splits each loop's conditions into search and residual parts.
LoopNest rewrite_searches(LoopNest nest);

/// Nonempty searches per relation over all nests (positive and negated).
std::map<std::string, SearchSet> collect_searches(std::span<const LoopNest> nests);

/// Relation name -> selected indexes and per-search assignment.
using IndexPlan = std::map<std::string, MospSolution>;

IndexPlan optimize_indexes(const std::map<std::string, SearchSet>& searches);
IndexPlan naive_indexes(const std::map<std::string, SearchSet>& searches);

/// One position of a bound tuple: padded, a constant, or an outer element.
struct BoundSlot {
    enum class Kind { Pad, Constant, Attribute };

    Kind kind = Kind::Pad;
    Value constant = 0;
    TupleAttr ref;

    friend bool operator==(const BoundSlot&, const BoundSlot&) = default;
};

enum class AccessKind {
    FullScan,    ///< no search predicate: iterate the primary order
    Range,       ///< range search on an assigned index
    LinearScan,  ///< primitive search answered by a linear scan
};

struct CompiledAccess {
    std::string relation;
    AccessKind kind = AccessKind::FullScan;
    LexOrder order;
    /// Indexed by tuple position; Pad becomes ⊥ in a and ⊤ in b.
    std::vector<BoundSlot> recipe;
    std::vector<Condition> search;
    std::vector<Condition> residual;
};

struct CompiledCheck {
    CompiledAccess access;
    std::size_t depth = 0;
};

struct CompiledJoin {
    std::vector<CompiledAccess> loops;
    std::vector<CompiledCheck> negations;
    std::string head;
    std::vector<Operand> projection;
};

/// Turns searches into range searches on the plan's assigned indexes, or
/// into linear scans when `plan` is null. Throws std::logic_error if a
/// search has no assignment or its index does not cover it.
CompiledJoin compile(const LoopNest& nest, const IndexPlan* plan, const Program& program);

/// Named relations plus the symbol table their values are drawn from.
class Database {
public:
    SymbolTable& symbols() { return symbols_; }
    const SymbolTable& symbols() const { return symbols_; }

    Relation& add_relation(const std::string& name, Schema schema);
    Relation& relation(std::string_view name);
    const Relation& relation(std::string_view name) const;
    bool has_relation(std::string_view name) const;
    std::vector<std::string> relation_names() const;

private:
    std::map<std::string, Relation, std::less<>> relations_;
    SymbolTable symbols_;
};

/// Runs the join and adds every projected tuple not yet present in the head
/// relation. With threads > 1 the outermost loop is split across workers and
/// insertion happens afterwards in iteration order. Returns the number of
/// new tuples. Throws MissingRelation.
std::size_t execute(const CompiledJoin& join, Database& db, unsigned threads = 1);

enum class IndexMode { Auto, Naive, Scan };

std::string_view to_string(IndexMode mode);
std::optional<IndexMode> parse_index_mode(std::string_view text);

/// A program lowered for one index mode; joins follow evaluation order.
struct CompiledProgram {
    IndexMode mode = IndexMode::Auto;
    std::vector<LoopNest> nests;
    std::map<std::string, SearchSet> searches;
    IndexPlan plan;
    std::vector<CompiledJoin> joins;
};

CompiledProgram compile_program(const Program& program, IndexMode mode, SymbolTable& symbols);

/// Creates every declared relation with the indexes the plan selects.
void prepare_database(const Program& program, const CompiledProgram& compiled, Database& db);

/// Executes all joins in order; returns the number of derived tuples.
std::size_t evaluate(const CompiledProgram& compiled, Database& db, unsigned threads = 1);

}  // namespace autoindex
