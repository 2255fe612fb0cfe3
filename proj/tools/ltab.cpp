#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ltab/analysis.hpp"
#include "ltab/bench.hpp"
#include "ltab/engine.hpp"
#include "ltab/errors.hpp"
#include "ltab/generate.hpp"
#include "ltab/oracle.hpp"

namespace {

enum Exit : int { kOk = 0, kNoSolutions = 1, kError = 2, kBudget = 3, kDivergence = 4 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool on_off(const std::string& v) { return v == "on"; }

struct RunArgs {
    std::string file;
    std::string query;
    std::string strategy = "lazy";
    std::string semi_naive = "on";
    std::string early_promotion;
    bool dedup = false;
    std::uint64_t limit = 0;
    bool stats = false;
    std::string stats_format = "kv";
    bool dump_table = false;
    bool oracle = false;
    bool empty_ok = false;
    std::uint64_t step_budget = 100'000'000;
};

int cmd_run(const RunArgs& a) {
    std::string text = read_file(a.file);
    if (a.oracle) {
        auto answers = ltab::oracle_solve(text, a.query);
        for (const auto& s : answers) std::cout << s << '\n';
        return answers.empty() && !a.empty_ok ? kNoSolutions : kOk;
    }

    ltab::EngineOptions opt;
    opt.strategy = a.strategy == "eager" ? ltab::Strategy::Eager : ltab::Strategy::Lazy;
    opt.semi_naive = on_off(a.semi_naive);
    // Without an explicit choice, early promotion follows semi-naive.
    opt.early_promotion = a.early_promotion.empty() ? opt.semi_naive : on_off(a.early_promotion);
    opt.dedup_solutions = a.dedup;
    if (a.limit) opt.limit = a.limit;
    opt.step_budget = a.step_budget;
    opt.validate();

    ltab::AnnotatedProgram program = ltab::load_program(text);
    ltab::Run run = ltab::solve(program, std::string_view(a.query), opt);
    std::uint64_t count = 0;
    int code = kOk;
    try {
        while (auto s = run.next()) {
            std::cout << s->text << '\n';
            ++count;
        }
    } catch (const ltab::ResourceError& ex) {
        std::cout.flush();
        std::cerr << "ltab: " << ex.what() << '\n';
        code = kBudget;
    }
    if (a.stats) {
        ltab::RunStats st = run.stats();
        std::cout << "--- stats\n" << (a.stats_format == "json" ? st.to_json() + "\n" : st.to_kv());
    }
    if (a.dump_table) std::cout << "--- table\n" << run.table().dump();
    if (code != kOk) return code;
    return count == 0 && !a.empty_ok ? kNoSolutions : kOk;
}

struct BenchArgs {
    std::string suite;
    std::vector<int> sizes{50};
    std::uint64_t seed = 1;
    std::string graph = "chain";
    int edges_per_node = 2;
    int instances = 1;
    unsigned jobs = 1;
    int oracle_max_nodes = 64;
    std::string out;
    std::string format = "text";
    std::uint64_t step_budget = 100'000'000;
};

int cmd_bench(const BenchArgs& a) {
    ltab::BenchSpec spec;
    spec.suite = a.suite;
    spec.sizes = a.sizes;
    spec.seed = a.seed;
    spec.graph = ltab::parse_graph_kind(a.graph);
    spec.edges_per_node = a.edges_per_node;
    spec.instances = a.instances;
    spec.jobs = a.jobs;
    spec.oracle_max_nodes = a.oracle_max_nodes;
    spec.base.step_budget = a.step_budget;
    ltab::BenchReport report = ltab::run_bench(spec);
    std::cout << (a.format == "json" ? report.to_json() : report.to_text());
    if (!a.out.empty()) {
        std::ofstream f(a.out);
        if (!f) throw std::runtime_error("cannot write '" + a.out + "'");
        f << report.to_json();
    }
    return report.ok() ? kOk : kDivergence;
}

struct GenArgs {
    std::string kind;
    int n = 0;
    int m = 0;
    std::uint64_t seed = 1;
    std::string relation = "e";
};

int cmd_gen(const GenArgs& a) {
    if (a.kind == "chain") {
        std::cout << ltab::edge_facts(ltab::chain_edges(a.n), a.relation);
    } else if (a.kind == "cycle") {
        std::cout << ltab::edge_facts(ltab::cycle_edges(a.n), a.relation);
    } else if (a.kind == "random-graph") {
        std::cout << ltab::edge_facts(ltab::random_edges(a.n, a.m, a.seed), a.relation);
    } else {
        std::cout << ltab::ab_string_facts(a.n);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ltab: linear tabling interpreter"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Evaluate a query against a program file");
    run_cmd->add_option("file", run.file, "Program file")->required();
    run_cmd->add_option("-q,--query", run.query, "Query, e.g. \"p(a,Y)\"")->required();
    run_cmd->add_option("--strategy", run.strategy, "Default strategy")->check(CLI::IsMember({"lazy", "eager"}));
    run_cmd->add_option("--semi-naive", run.semi_naive)->check(CLI::IsMember({"on", "off"}));
    run_cmd->add_option("--early-promotion", run.early_promotion, "Defaults to the semi-naive setting")
        ->check(CLI::IsMember({"on", "off"}));
    run_cmd->add_flag("--dedup", run.dedup, "Print each distinct solution once");
    run_cmd->add_option("--limit", run.limit, "Stop after N solutions");
    run_cmd->add_flag("--stats", run.stats, "Print counters after the solutions");
    run_cmd->add_option("--stats-format", run.stats_format)->check(CLI::IsMember({"kv", "json"}));
    run_cmd->add_flag("--dump-table", run.dump_table, "Print the subgoal table");
    run_cmd->add_flag("--oracle", run.oracle, "Print the bottom-up reference answers instead");
    run_cmd->add_flag("--empty-ok", run.empty_ok, "Exit 0 when there are no solutions");
    run_cmd->add_option("--step-budget", run.step_budget)->check(CLI::PositiveNumber);

    std::string analyze_file;
    auto* analyze_cmd = app.add_subcommand("analyze", "Print levels and rule annotations");
    analyze_cmd->add_option("file", analyze_file)->required();

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite over the configuration matrix");
    bench_cmd->add_option("--suite", bench.suite)->required()->check(CLI::IsMember(ltab::bench_suites()));
    bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated sizes")->delimiter(',');
    bench_cmd->add_option("--seed", bench.seed);
    bench_cmd->add_option("--graph", bench.graph)->check(CLI::IsMember({"chain", "cycle", "random"}));
    bench_cmd->add_option("--edges-per-node", bench.edges_per_node)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--instances", bench.instances)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--jobs", bench.jobs)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--oracle-max-nodes", bench.oracle_max_nodes);
    bench_cmd->add_option("--out", bench.out, "Write the JSON report here");
    bench_cmd->add_option("--format", bench.format)->check(CLI::IsMember({"text", "json"}));
    bench_cmd->add_option("--step-budget", bench.step_budget)->check(CLI::PositiveNumber);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Print generated facts");
    gen_cmd->add_option("kind", gen.kind)->required()->check(
        CLI::IsMember({"chain", "cycle", "random-graph", "ab-string"}));
    gen_cmd->add_option("--n", gen.n)->required();
    gen_cmd->add_option("--m", gen.m);
    gen_cmd->add_option("--seed", gen.seed);
    gen_cmd->add_option("--relation", gen.relation);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kError;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*analyze_cmd) {
            std::cout << ltab::analysis_report(ltab::load_program(read_file(analyze_file)));
            return kOk;
        }
        if (*bench_cmd) return cmd_bench(bench);
        if (*gen_cmd) return cmd_gen(gen);
    } catch (const ltab::SyntaxError& e) {
        std::cerr << "ltab: syntax error at " << e.what() << '\n';
    } catch (const ltab::ResourceError& e) {
        std::cerr << "ltab: " << e.what() << '\n';
        return kBudget;
    } catch (const std::exception& e) {
        std::cerr << "ltab: " << e.what() << '\n';
    }
    return kError;
}
