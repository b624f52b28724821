#include "autoindex/runner.h"

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include "autoindex/error.h"

namespace autoindex {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

using Loader = std::function<std::size_t(const IoDirective&, Relation&, SymbolTable&)>;

struct Execution {
    CompiledProgram compiled;
    Database db;
    ModeStats stats;
    std::uint64_t loaded = 0;
    double compile_ms = 0;
};

Execution execute_mode(const Program& program, IndexMode mode, const Loader& load, unsigned threads) {
    Execution ex;
    auto t0 = Clock::now();
    ex.compiled = compile_program(program, mode, ex.db.symbols());
    prepare_database(program, ex.compiled, ex.db);
    ex.compile_ms = ms_since(t0);

    t0 = Clock::now();
    for (const IoDirective& in : program.inputs) {
        ex.loaded += load(in, ex.db.relation(in.relation), ex.db.symbols());
    }
    ex.stats.load_ms = ms_since(t0);

    t0 = Clock::now();
    ex.stats.tuples_derived = evaluate(ex.compiled, ex.db, threads);
    ex.stats.eval_ms = ms_since(t0);

    for (const auto& [name, sol] : ex.compiled.plan) ex.stats.index_count += sol.index_set.size();
    for (const RelationDecl& d : program.relations) {
        ex.stats.index_inserts += ex.db.relation(d.name).total_index_inserts();
    }
    return ex;
}

void fill_relation_stats(RunReport& report, const Execution& ex) {
    const std::string mode(to_string(ex.compiled.mode));
    for (RelationReport& r : report.relations) {
        const Relation& rel = ex.db.relation(r.name);
        r.tuples = rel.size();
        r.index_inserts[mode] = rel.total_index_inserts();
    }
    report.modes[mode] = ex.stats;
}

std::map<std::string, std::string> render_outputs(const Program& program, const Database& db) {
    std::map<std::string, std::string> out;
    for (const IoDirective& o : program.outputs) {
        out[o.relation] = format_facts(db.relation(o.relation), db.symbols());
    }
    return out;
}

Loader file_loader(const fs::path& dir) {
    return [dir](const IoDirective& in, Relation& rel, SymbolTable& symbols) {
        return load_facts(dir / in.path, rel, symbols);
    };
}

}  // namespace

Program load_program(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open program '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_program(text.str());
}

RunReport select_report(const Program& program) {
    SymbolTable symbols;
    const auto t0 = Clock::now();
    const CompiledProgram automatic = compile_program(program, IndexMode::Auto, symbols);
    const double select_ms = ms_since(t0);
    const CompiledProgram naive = compile_program(program, IndexMode::Naive, symbols);

    RunReport report;
    report.command = "select";
    report.phase_ms["select"] = select_ms;
    for (const RelationDecl& d : program.relations) {
        RelationReport r;
        r.name = d.name;
        if (auto it = automatic.searches.find(d.name); it != automatic.searches.end()) {
            for (Search s : it->second) r.searches.push_back(to_string(s, &d.schema));
        }
        if (auto it = automatic.plan.find(d.name); it != automatic.plan.end()) {
            for (const Chain& c : it->second.chain_cover) r.chains.push_back(to_string(c, &d.schema));
            for (const LexOrder& o : it->second.index_set) r.indexes.push_back(to_string(o, &d.schema));
        }
        if (auto it = naive.plan.find(d.name); it != naive.plan.end()) {
            r.naive_index_count = it->second.index_set.size();
        }
        report.relations.push_back(std::move(r));
    }
    return report;
}

RunResult run_program(const Program& program, const fs::path& program_dir, const RunOptions& options) {
    RunResult result;
    result.report = select_report(program);
    result.report.command = "run";

    const Execution ex = execute_mode(program, options.mode, file_loader(options.facts_dir.value_or(program_dir)),
                                      options.threads);
    fill_relation_stats(result.report, ex);
    result.report.tuples_loaded = ex.loaded;
    result.report.phase_ms["compile"] = ex.compile_ms;
    result.outputs = render_outputs(program, ex.db);

    if (options.write_outputs) {
        const auto t0 = Clock::now();
        const fs::path out_dir = options.output_dir.value_or(program_dir);
        if (!out_dir.empty()) fs::create_directories(out_dir);
        for (const IoDirective& o : program.outputs) {
            write_facts(out_dir / o.path, ex.db.relation(o.relation), ex.db.symbols());
        }
        result.report.phase_ms["write"] = ms_since(t0);
    }
    return result;
}

RunResult run_in_memory(const Program& program, IndexMode mode, const FactText& facts, unsigned threads) {
    const Loader loader = [&facts](const IoDirective& in, Relation& rel, SymbolTable& symbols) -> std::size_t {
        auto it = facts.find(in.relation);
        if (it == facts.end()) return 0;
        std::istringstream stream(it->second);
        return load_facts(stream, in.relation, rel, symbols);
    };
    const Execution ex = execute_mode(program, mode, loader, threads);
    RunResult result;
    result.report.command = "run";
    for (const RelationDecl& d : program.relations) {
        RelationReport r;
        r.name = d.name;
        result.report.relations.push_back(std::move(r));
    }
    fill_relation_stats(result.report, ex);
    result.report.tuples_loaded = ex.loaded;
    result.outputs = render_outputs(program, ex.db);
    return result;
}

RunReport bench_program(const Program& program, const fs::path& program_dir, const BenchOptions& options) {
    RunReport report = select_report(program);
    report.command = "bench";
    const Loader loader = file_loader(options.facts_dir.value_or(program_dir));
    for (IndexMode mode : {IndexMode::Auto, IndexMode::Naive, IndexMode::Scan}) {
        for (std::size_t i = 0; i < options.warmup; ++i) execute_mode(program, mode, loader, options.threads);
        std::optional<Execution> best;
        for (std::size_t i = 0; i < std::max<std::size_t>(options.repeats, 1); ++i) {
            Execution ex = execute_mode(program, mode, loader, options.threads);
            if (!best) {
                best.emplace(std::move(ex));
                continue;
            }
            best->stats.load_ms = std::min(best->stats.load_ms, ex.stats.load_ms);
            best->stats.eval_ms = std::min(best->stats.eval_ms, ex.stats.eval_ms);
        }
        fill_relation_stats(report, *best);
        report.tuples_loaded = best->loaded;
    }
    return report;
}

}  // namespace autoindex
