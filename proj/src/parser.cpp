#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "autoindex/engine.h"
#include "autoindex/error.h"

namespace autoindex {

const RelationDecl* Program::find(std::string_view name) const {
    auto it = std::find_if(relations.begin(), relations.end(), [&](const RelationDecl& d) { return d.name == name; });
    return it == relations.end() ? nullptr : &*it;
}

namespace {

struct Token {
    enum class Kind { Ident, Number, String, Directive, Punct, End };

    Kind kind = Kind::End;
    std::string text;
    SourceLoc loc;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space();
        Token tok;
        tok.loc = {line_, col_};
        if (pos_ >= src_.size()) return tok;
        const char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            tok.kind = Token::Kind::Ident;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                tok.text += advance();
            }
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            tok.kind = Token::Kind::Number;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) tok.text += advance();
        } else if (c == '"') {
            tok.kind = Token::Kind::String;
            advance();
            while (true) {
                if (pos_ >= src_.size() || src_[pos_] == '\n') throw ParseError("unterminated string", tok.loc.line, tok.loc.column);
                char ch = advance();
                if (ch == '"') break;
                if (ch == '\\' && pos_ < src_.size()) ch = advance();
                tok.text += ch;
            }
        } else if (c == '.' && pos_ + 1 < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_ + 1]))) {
            tok.kind = Token::Kind::Directive;
            advance();
            while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) tok.text += advance();
        } else if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
            tok.kind = Token::Kind::Punct;
            tok.text = ":-";
            advance();
            advance();
        } else if (std::string_view("(),.!:").find(c) != std::string_view::npos) {
            tok.kind = Token::Kind::Punct;
            tok.text = std::string(1, advance());
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
        }
        return tok;
    }

private:
    char advance() {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (src_.substr(pos_, 2) == "//" || c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (src_.substr(pos_, 2) == "/*") {
                const SourceLoc start{line_, col_};
                advance();
                advance();
                while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance();
                if (pos_ >= src_.size()) throw ParseError("unterminated comment", start.line, start.column);
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { tok_ = lexer_.next(); }

    Program parse() {
        Program p;
        while (tok_.kind != Token::Kind::End) {
            if (tok_.kind == Token::Kind::Directive) {
                directive(p);
            } else {
                p.rules.push_back(rule());
            }
        }
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_.loc.line, tok_.loc.column); }

    bool is_punct(std::string_view p) const { return tok_.kind == Token::Kind::Punct && tok_.text == p; }

    void expect_punct(std::string_view p) {
        if (!is_punct(p)) fail("expected '" + std::string(p) + "'" + found());
        tok_ = lexer_.next();
    }

    std::string found() const {
        if (tok_.kind == Token::Kind::End) return ", found end of input";
        return ", found '" + tok_.text + "'";
    }

    std::string ident(const char* what) {
        if (tok_.kind != Token::Kind::Ident) fail(std::string("expected ") + what + found());
        std::string s = tok_.text;
        tok_ = lexer_.next();
        return s;
    }

    void directive(Program& p) {
        const Token dir = tok_;
        tok_ = lexer_.next();
        if (dir.text == "decl") {
            RelationDecl d;
            d.loc = tok_.loc;
            d.name = ident("relation name");
            expect_punct("(");
            std::vector<std::string> attrs;
            if (!is_punct(")")) {
                while (true) {
                    const SourceLoc at = tok_.loc;
                    attrs.push_back(ident("attribute name"));
                    if (is_punct(":")) {  // optional type annotation, ignored
                        tok_ = lexer_.next();
                        ident("type name");
                    }
                    if (std::count(attrs.begin(), attrs.end(), attrs.back()) > 1) {
                        throw ParseError("duplicate attribute '" + attrs.back() + "'", at.line, at.column);
                    }
                    if (!is_punct(",")) break;
                    tok_ = lexer_.next();
                }
            }
            expect_punct(")");
            if (attrs.empty()) throw ParseError("relation '" + d.name + "' needs at least one attribute", d.loc.line, d.loc.column);
            if (attrs.size() > kMaxAttributes) throw ParseError("relation '" + d.name + "' has too many attributes", d.loc.line, d.loc.column);
            if (p.find(d.name) != nullptr) throw ParseError("relation '" + d.name + "' declared twice", d.loc.line, d.loc.column);
            d.schema = Schema(std::move(attrs));
            p.relations.push_back(std::move(d));
        } else if (dir.text == "input" || dir.text == "output") {
            IoDirective io;
            io.loc = tok_.loc;
            io.relation = ident("relation name");
            if (tok_.kind == Token::Kind::String) {
                io.path = tok_.text;
                tok_ = lexer_.next();
            } else {
                io.path = io.relation + ".tsv";
            }
            (dir.text == "input" ? p.inputs : p.outputs).push_back(std::move(io));
        } else if (dir.text == "plan") {
            if (p.rules.empty()) throw ParseError(".plan must follow a rule", dir.loc.line, dir.loc.column);
            plan(p.rules.back());
        } else {
            throw ParseError("unknown directive '." + dir.text + "'", dir.loc.line, dir.loc.column);
        }
    }

    // .plan [0:](i1, i2, ...) with 1-based positions among positive literals;
    // further versioned orders after a comma are accepted and ignored.
    void plan(Rule& r) {
        bool first = true;
        while (true) {
            if (tok_.kind == Token::Kind::Number) {
                tok_ = lexer_.next();
                expect_punct(":");
            }
            const SourceLoc at = tok_.loc;
            expect_punct("(");
            std::vector<std::size_t> order;
            while (!is_punct(")")) {
                if (tok_.kind != Token::Kind::Number) fail("expected atom position" + found());
                order.push_back(std::stoul(tok_.text));
                tok_ = lexer_.next();
                if (is_punct(",")) tok_ = lexer_.next();
            }
            expect_punct(")");
            if (first) {
                const auto positives = static_cast<std::size_t>(
                    std::count_if(r.body.begin(), r.body.end(), [](const Literal& l) { return !l.negated; }));
                std::vector<std::size_t> sorted = order;
                std::sort(sorted.begin(), sorted.end());
                bool permutation = sorted.size() == positives;
                for (std::size_t i = 0; permutation && i < sorted.size(); ++i) permutation = sorted[i] == i + 1;
                if (!permutation) {
                    throw ParseError("plan must be a permutation of 1.." + std::to_string(positives), at.line, at.column);
                }
                for (auto& i : order) --i;
                r.plan = std::move(order);
                first = false;
            }
            if (!is_punct(",")) break;
            tok_ = lexer_.next();
        }
    }

    Term term() {
        Term t;
        if (tok_.kind == Token::Kind::Number || tok_.kind == Token::Kind::String) {
            t.kind = Term::Kind::Constant;
            t.text = tok_.text;
        } else if (tok_.kind == Token::Kind::Ident && tok_.text == "_") {
            t.kind = Term::Kind::Wildcard;
        } else if (tok_.kind == Token::Kind::Ident && std::islower(static_cast<unsigned char>(tok_.text[0]))) {
            t.kind = Term::Kind::Variable;
            t.text = tok_.text;
        } else {
            fail("expected variable, '_' or constant" + found());
        }
        tok_ = lexer_.next();
        return t;
    }

    Atom atom() {
        Atom a;
        a.loc = tok_.loc;
        a.relation = ident("relation name");
        expect_punct("(");
        if (!is_punct(")")) {
            while (true) {
                a.args.push_back(term());
                if (!is_punct(",")) break;
                tok_ = lexer_.next();
            }
        }
        expect_punct(")");
        return a;
    }

    Rule rule() {
        Rule r;
        r.loc = tok_.loc;
        r.head = atom();
        if (is_punct(":-")) {
            tok_ = lexer_.next();
            while (true) {
                Literal lit;
                if (is_punct("!")) {
                    lit.negated = true;
                    tok_ = lexer_.next();
                }
                lit.atom = atom();
                r.body.push_back(std::move(lit));
                if (!is_punct(",")) break;
                tok_ = lexer_.next();
            }
        }
        expect_punct(".");
        return r;
    }

    Lexer lexer_;
    Token tok_;
};

void check_atom(const Program& p, const Atom& a) {
    const RelationDecl* d = p.find(a.relation);
    if (d == nullptr) throw ParseError("undeclared relation '" + a.relation + "'", a.loc.line, a.loc.column);
    if (d->schema.size() != a.args.size()) {
        throw ParseError("relation '" + a.relation + "' has arity " + std::to_string(d->schema.size()) + ", used with " +
                             std::to_string(a.args.size()) + " arguments",
                         a.loc.line, a.loc.column);
    }
}

std::string where(const SourceLoc& loc) { return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": "; }

void check_rule(const Program& p, const Rule& r) {
    check_atom(p, r.head);
    std::set<std::string> bound;
    for (const Literal& lit : r.body) {
        check_atom(p, lit.atom);
        if (lit.negated) continue;
        for (const Term& t : lit.atom.args) {
            if (t.kind == Term::Kind::Variable) bound.insert(t.text);
        }
    }
    for (const Term& t : r.head.args) {
        if (t.kind == Term::Kind::Wildcard) throw UnsafeRuleError(where(r.head.loc) + "wildcard in rule head");
        if (t.kind == Term::Kind::Variable && !bound.count(t.text)) {
            throw UnsafeRuleError(where(r.head.loc) + "head variable '" + t.text + "' is not bound by a positive body atom");
        }
    }
    for (const Literal& lit : r.body) {
        if (!lit.negated) continue;
        for (const Term& t : lit.atom.args) {
            if (t.kind == Term::Kind::Variable && !bound.count(t.text)) {
                throw UnsafeRuleError(where(lit.atom.loc) + "variable '" + t.text +
                                      "' of a negated atom is not bound by a positive body atom");
            }
        }
    }
}

}  // namespace

std::vector<std::size_t> evaluation_order(const Program& program) {
    // Relations in declaration order; an edge body -> head for each rule.
    std::map<std::string, std::size_t, std::less<>> id;
    for (const auto& d : program.relations) id.emplace(d.name, id.size());
    const std::size_t n = id.size();
    std::vector<std::set<std::size_t>> succ(n);
    std::vector<std::size_t> indegree(n, 0);
    for (const Rule& r : program.rules) {
        const std::size_t h = id.at(r.head.relation);
        for (const Literal& lit : r.body) {
            const std::size_t b = id.at(lit.atom.relation);
            if (b == h) throw RecursionError(where(r.loc) + "relation '" + r.head.relation + "' depends on itself; recursion is not supported");
            if (succ[b].insert(h).second) ++indegree[h];
        }
    }
    std::vector<std::size_t> topo;
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.insert(i);
    }
    while (!ready.empty()) {
        const std::size_t v = *ready.begin();
        ready.erase(ready.begin());
        topo.push_back(v);
        for (std::size_t w : succ[v]) {
            if (--indegree[w] == 0) ready.insert(w);
        }
    }
    if (topo.size() != n) {
        for (std::size_t i = 0; i < n; ++i) {
            if (indegree[i] != 0) {
                throw RecursionError("relation '" + program.relations[i].name +
                                     "' is part of a dependency cycle; recursion is not supported");
            }
        }
    }
    std::vector<std::size_t> order;
    for (std::size_t rel : topo) {
        for (std::size_t i = 0; i < program.rules.size(); ++i) {
            if (id.at(program.rules[i].head.relation) == rel) order.push_back(i);
        }
    }
    return order;
}

Program parse_program(std::string_view text) {
    Program p = Parser(text).parse();
    for (const auto& io : p.inputs) {
        if (p.find(io.relation) == nullptr) {
            throw ParseError("undeclared relation '" + io.relation + "' in .input", io.loc.line, io.loc.column);
        }
    }
    for (const auto& io : p.outputs) {
        if (p.find(io.relation) == nullptr) {
            throw ParseError("undeclared relation '" + io.relation + "' in .output", io.loc.line, io.loc.column);
        }
    }
    for (const Rule& r : p.rules) check_rule(p, r);
    evaluation_order(p);
    return p;
}

}  // namespace autoindex
