#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "autoindex/error.h"
#include "autoindex/runner.h"
#include "autoindex/verify.h"

namespace fs = std::filesystem;
using namespace autoindex;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kRuntime = 3, kVerification = 4 };

void print(const RunReport& report, const std::string& format) {
    if (format == "json") {
        std::cout << to_json(report).dump(2) << "\n";
    } else {
        std::cout << render_text(report);
    }
}

std::optional<fs::path> optional_path(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return fs::path(s);
}

int print_verification(const std::vector<SuiteResult>& results, const std::string& format) {
    bool ok = true;
    nlohmann::json j = nlohmann::json::array();
    for (const SuiteResult& r : results) {
        ok = ok && r.passed();
        j.push_back({{"suite", r.name},
                     {"trials", r.trials},
                     {"failures", r.failures},
                     {"first_failure", r.first_failure},
                     {"elapsed_ms", r.elapsed_ms}});
        if (format != "json") {
            std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.trials << " trials, " << r.failures
                      << " failures (" << static_cast<long long>(r.elapsed_ms) << " ms)\n";
            if (!r.passed()) std::cout << "  " << r.first_failure << "\n";
        }
    }
    if (format == "json") std::cout << j.dump(2) << "\n";
    return ok ? kOk : kVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Automatic index selection for non-recursive Datalog"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "text";
    std::string program_path;
    std::string mode_name = "auto";
    std::string facts_dir;
    std::string output_dir;
    unsigned threads = 1;
    VerifyOptions verify;
    BenchOptions bench;

    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));

    CLI::App* select = app.add_subcommand("select", "Report searches, chains and selected indexes");
    select->add_option("program", program_path, "Datalog program")->required();

    CLI::App* run = app.add_subcommand("run", "Evaluate a program and write its outputs");
    run->add_option("program", program_path, "Datalog program")->required();
    run->add_option("--mode", mode_name, "Index mode")->check(CLI::IsMember({"auto", "naive", "scan"}));
    run->add_option("--facts-dir", facts_dir, "Directory of input fact files");
    run->add_option("--output-dir", output_dir, "Directory for output relations");
    run->add_option("--threads", threads, "Worker threads for join evaluation")->check(CLI::Range(1u, 256u));

    CLI::App* ver = app.add_subcommand("verify", "Run randomized property suites");
    ver->add_option("--seed", verify.seed, "Random seed");
    ver->add_option("--trials", verify.trials, "Trials per suite")->check(CLI::PositiveNumber);
    ver->add_option("--max-searches", verify.max_searches, "Largest search set in the chain-cover suite")
        ->check(CLI::Range(std::size_t{0}, std::size_t{20}));
    ver->add_option("--max-tuples", verify.max_tuples, "Largest relation in the range-search suite");
    ver->add_flag("--corrupt-matching", verify.corrupt_matching, "Drop one matched pair (negative control)");

    CLI::App* ben = app.add_subcommand("bench", "Run all index modes and tabulate ratios");
    ben->add_option("program", program_path, "Datalog program")->required();
    ben->add_option("--facts-dir", facts_dir, "Directory of input fact files");
    ben->add_option("--threads", bench.threads, "Worker threads for join evaluation")->check(CLI::Range(1u, 256u));
    ben->add_option("--warmup", bench.warmup, "Discarded runs per mode");
    ben->add_option("--repeats", bench.repeats, "Timed runs per mode")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*ver) return print_verification(run_verification(verify), format);

        const fs::path path(program_path);
        const Program program = load_program(path);
        const fs::path dir = path.parent_path();
        if (*select) {
            print(select_report(program), format);
        } else if (*run) {
            RunOptions options;
            options.mode = *parse_index_mode(mode_name);
            options.threads = threads;
            options.facts_dir = optional_path(facts_dir);
            options.output_dir = optional_path(output_dir);
            print(run_program(program, dir, options).report, format);
        } else if (*ben) {
            bench.facts_dir = optional_path(facts_dir);
            print(bench_program(program, dir, bench), format);
        }
        return kOk;
    } catch (const ParseError& e) {
        std::cerr << program_path << ":" << e.what() << "\n";
        return kParse;
    } catch (const UnsafeRuleError& e) {
        std::cerr << program_path << ":" << e.what() << "\n";
        return kParse;
    } catch (const RecursionError& e) {
        std::cerr << program_path << ": " << e.what() << "\n";
        return kParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
}
