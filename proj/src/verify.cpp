#include "autoindex/verify.h"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

#include "autoindex/matching.h"
#include "autoindex/mosp.h"
#include "autoindex/storage.h"

namespace autoindex {

namespace {

using Clock = std::chrono::steady_clock;

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string describe(const SearchSet& q) {
    std::string out = "q = {";
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (i > 0) out += ", ";
        out += to_string(q[i]);
    }
    return out + "}";
}

class SuiteRun {
public:
    explicit SuiteRun(std::string name) : start_(Clock::now()) { result_.name = std::move(name); }

    void record(bool ok, const std::string& detail) {
        ++result_.trials;
        if (ok) return;
        if (result_.failures++ == 0) result_.first_failure = "trial " + std::to_string(result_.trials) + ": " + detail;
    }

    SuiteResult finish() {
        result_.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
        return result_;
    }

private:
    SuiteResult result_;
    Clock::time_point start_;
};

std::size_t cap_count(std::size_t attributes, std::size_t limit) {
    const std::size_t available = (std::size_t{1} << attributes) - 1;
    return std::min(available, limit);
}

}  // namespace

SearchSet random_search_set(std::mt19937_64& rng, std::size_t attributes, std::size_t count) {
    count = cap_count(attributes, count);
    SearchSet q;
    const std::uint64_t full = (std::uint64_t{1} << attributes) - 1;
    std::uniform_int_distribution<std::uint64_t> pick(1, full);
    while (q.size() < count) q.insert(Search(pick(rng)));
    return q;
}

SuiteResult verify_dilworth(const VerifyOptions& options) {
    std::mt19937_64 rng(options.seed);
    SuiteRun run("dilworth");
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        const std::size_t attrs = uniform(rng, 1, 6);
        const SearchSet q = random_search_set(rng, attrs, uniform(rng, 0, cap_count(attrs, options.max_searches)));
        const BipartiteGraph g = build_subset_graph(q);
        Matching m = max_matching(g);
        if (options.corrupt_matching && m.size() > 0) m.remove_left(m.pairs().front().first);
        const ChainCover cover = chains_from_matching(q, m);
        const std::size_t antichain = max_antichain_bruteforce(q);
        std::ostringstream detail;
        detail << describe(q) << ": " << cover.size() << " chains, widest antichain " << antichain;
        run.record(is_partition(q, cover) && cover.size() == antichain && cover.size() == q.size() - m.size(),
                   detail.str());
    }
    return run.finish();
}

SuiteResult verify_mosp(const VerifyOptions& options) {
    std::mt19937_64 rng(options.seed + 1);
    SuiteRun run("mosp");
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        const std::size_t attrs = uniform(rng, 1, 4);
        const SearchSet q = random_search_set(rng, attrs, uniform(rng, 1, cap_count(attrs, 8)));
        const MospSolution sol = min_index(q);
        const std::size_t optimum = brute_force_min_cover_size(q);
        bool assigned = sol.assignment.size() == q.size();
        for (const auto& [s, order] : sol.assignment) {
            assigned = assigned && sol.index_set.contains(order) && prefix_set(order, s.size()) == s;
        }
        std::ostringstream detail;
        detail << describe(q) << ": " << sol.index_set.size() << " indexes, optimum " << optimum;
        run.record(l_cover(q, sol.index_set) && assigned && sol.index_set.size() == optimum, detail.str());
    }
    return run.finish();
}

SuiteResult verify_range_cover(const VerifyOptions& options) {
    std::mt19937_64 rng(options.seed + 2);
    SuiteRun run("range_cover");
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        const std::size_t arity = uniform(rng, 1, 5);
        const std::size_t domain = uniform(rng, 2, 8);
        Relation rel("R", Schema::anonymous(arity));

        // Index order: the searched attributes in random order, then an
        // optional random extension.
        std::vector<AttrId> attrs(arity);
        std::iota(attrs.begin(), attrs.end(), AttrId{0});
        std::shuffle(attrs.begin(), attrs.end(), rng);
        const std::size_t searched = uniform(rng, 1, arity);
        const std::size_t width = uniform(rng, searched, arity);
        const LexOrder order(std::vector<AttrId>(attrs.begin(), attrs.begin() + static_cast<std::ptrdiff_t>(width)));
        const bool index_first = chance(rng, 0.5);
        if (index_first) rel.add_index(order);

        const std::size_t n = uniform(rng, 0, options.max_tuples);
        Tuple t(arity);
        for (std::size_t i = 0; i < n; ++i) {
            for (Value& v : t) v = uniform(rng, 0, domain - 1);
            rel.insert(t);
        }
        if (!index_first) rel.add_index(order);

        std::vector<Equality> pred;
        for (std::size_t i = 0; i < searched; ++i) pred.push_back({attrs[i], uniform(rng, 0, domain)});
        std::shuffle(pred.begin(), pred.end(), rng);

        const auto [lo, hi] = make_bounds(pred, order, arity);
        std::vector<Tuple> ranged;
        bool sorted = true;
        for (TupleRef r : rel.range_search(order, lo, hi)) {
            if (!ranged.empty() && lex_compare(order, ranged.back(), r) > 0) sorted = false;
            ranged.emplace_back(r.begin(), r.end());
        }
        std::vector<Tuple> scanned = rel.primitive_search_scan(pred);
        std::sort(scanned.begin(), scanned.end());
        std::vector<Tuple> ranged_sorted = ranged;
        std::sort(ranged_sorted.begin(), ranged_sorted.end());

        std::ostringstream detail;
        detail << "arity " << arity << ", n " << rel.size() << ", order " << to_string(order) << ": range returned "
               << ranged.size() << ", scan returned " << scanned.size();
        run.record(sorted && ranged_sorted == scanned && rel.mirror_consistent(), detail.str());
    }
    return run.finish();
}

RandomProgram random_program(std::mt19937_64& rng, std::size_t max_facts) {
    static const char* const kAttrNames[] = {"a", "b", "c"};
    struct Rel {
        std::string name;
        std::size_t arity;
    };
    const std::size_t domain = uniform(rng, 3, 8);
    auto constant = [&] { return "c" + std::to_string(uniform(rng, 0, domain - 1)); };

    std::vector<Rel> inputs;
    for (std::size_t i = 0, k = uniform(rng, 1, 3); i < k; ++i) inputs.push_back({"E" + std::to_string(i), uniform(rng, 1, 3)});
    std::vector<Rel> derived;
    for (std::size_t i = 0, k = uniform(rng, 1, 2); i < k; ++i) derived.push_back({"R" + std::to_string(i), uniform(rng, 1, 3)});

    std::ostringstream text;
    RandomProgram out;
    auto declare = [&](const Rel& r) {
        text << ".decl " << r.name << "(";
        for (std::size_t i = 0; i < r.arity; ++i) text << (i ? ", " : "") << kAttrNames[i] << ":symbol";
        text << ")\n";
    };
    for (const Rel& r : inputs) {
        declare(r);
        text << ".input " << r.name << "\n";
        std::string facts;
        for (std::size_t i = 0, n = uniform(rng, 0, max_facts); i < n; ++i) {
            for (std::size_t a = 0; a < r.arity; ++a) facts += (a ? "\t" : "") + constant();
            facts += "\n";
        }
        out.facts[r.name] = std::move(facts);
    }
    for (const Rel& r : derived) {
        declare(r);
        text << ".output " << r.name << "\n";
    }

    std::vector<Rel> readable = inputs;
    for (const Rel& head : derived) {
        for (std::size_t rule = 0, rules = uniform(rng, 1, 2); rule < rules; ++rule) {
            std::vector<std::string> bound;
            std::size_t fresh = 0;
            std::ostringstream body;
            const std::size_t positives = uniform(rng, 1, 3);
            for (std::size_t p = 0; p < positives; ++p) {
                const Rel& r = readable[uniform(rng, 0, readable.size() - 1)];
                std::vector<std::string> newly;
                body << (p ? ", " : "") << r.name << "(";
                for (std::size_t a = 0; a < r.arity; ++a) {
                    const double x = std::uniform_real_distribution<double>(0, 1)(rng);
                    std::string arg;
                    if (x < 0.45 && !bound.empty()) {
                        arg = bound[uniform(rng, 0, bound.size() - 1)];
                    } else if (x < 0.8) {
                        arg = "v" + std::to_string(fresh++);
                        newly.push_back(arg);
                    } else if (x < 0.9) {
                        arg = "_";
                    } else {
                        arg = "\"" + constant() + "\"";
                    }
                    body << (a ? ", " : "") << arg;
                }
                body << ")";
                bound.insert(bound.end(), newly.begin(), newly.end());
            }
            if (chance(rng, 0.35)) {
                const Rel& r = readable[uniform(rng, 0, readable.size() - 1)];
                body << ", !" << r.name << "(";
                for (std::size_t a = 0; a < r.arity; ++a) {
                    const double x = std::uniform_real_distribution<double>(0, 1)(rng);
                    std::string arg;
                    if (x < 0.65 && !bound.empty()) {
                        arg = bound[uniform(rng, 0, bound.size() - 1)];
                    } else if (x < 0.9) {
                        arg = "_";
                    } else {
                        arg = "\"" + constant() + "\"";
                    }
                    body << (a ? ", " : "") << arg;
                }
                body << ")";
            }
            text << head.name << "(";
            for (std::size_t a = 0; a < head.arity; ++a) {
                text << (a ? ", " : "")
                     << (bound.empty() ? "\"" + constant() + "\"" : bound[uniform(rng, 0, bound.size() - 1)]);
            }
            text << ") :- " << body.str() << ".\n";
            if (positives > 1 && chance(rng, 0.3)) {
                std::vector<std::size_t> perm(positives);
                std::iota(perm.begin(), perm.end(), std::size_t{1});
                std::shuffle(perm.begin(), perm.end(), rng);
                text << ".plan 0:(";
                for (std::size_t i = 0; i < perm.size(); ++i) text << (i ? "," : "") << perm[i];
                text << ")\n";
            }
        }
        readable.push_back(head);
    }
    out.text = text.str();
    return out;
}

SuiteResult verify_end_to_end(const VerifyOptions& options) {
    std::mt19937_64 rng(options.seed + 3);
    SuiteRun run("end_to_end");
    const std::size_t max_facts = std::clamp<std::size_t>(options.max_tuples / 10, 1, 200);
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        const RandomProgram rp = random_program(rng, max_facts);
        const Program program = parse_program(rp.text);
        const RunResult scan = run_in_memory(program, IndexMode::Scan, rp.facts);
        const RunResult automatic = run_in_memory(program, IndexMode::Auto, rp.facts);
        const RunResult naive = run_in_memory(program, IndexMode::Naive, rp.facts);
        const RunResult threaded = run_in_memory(program, IndexMode::Auto, rp.facts, 3);
        const bool ok = automatic.outputs == scan.outputs && naive.outputs == scan.outputs &&
                        threaded.outputs == scan.outputs &&
                        automatic.report.modes.at("auto").index_inserts <= naive.report.modes.at("naive").index_inserts;
        run.record(ok, "outputs differ for program\n" + rp.text);
    }
    return run.finish();
}

std::vector<SuiteResult> run_verification(const VerifyOptions& options) {
    return {verify_dilworth(options), verify_mosp(options), verify_range_cover(options), verify_end_to_end(options)};
}

}  // namespace autoindex
