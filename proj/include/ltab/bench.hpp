#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ltab/engine.hpp"
#include "ltab/generate.hpp"

namespace ltab {

struct BenchConfig {
    std::string label;      // requested combination, e.g. lazy/semi=off/ep=on
    EngineOptions options;  // after normalization
};

/// Strategy x semi-naive x early-promotion. Early promotion is switched off
/// whenever semi-naive is off, since the options forbid that combination.
std::vector<BenchConfig> config_matrix(const EngineOptions& base = {});

/// Everything one configuration produced for one program/query.
struct ConfigOutcome {
    std::string config;
    EngineOptions options;
    RunStats stats;
    std::map<std::string, std::vector<std::string>> entries;  // key -> sorted answers
    std::set<std::string> solutions;                          // distinct
    std::size_t solution_events = 0;                          // including duplicates
    double wall_ms = 0.0;
    std::string error;  // non-empty when the run threw
};

ConfigOutcome run_config(const AnnotatedProgram& program, const Query& query, const BenchConfig& config);

struct Differential {
    std::vector<ConfigOutcome> outcomes;
    bool oracle_applied = false;
    std::string oracle_note;
    std::vector<std::string> divergences;  // empty means all agree
    /// Per-entry round counters equal across semi-naive on/off within each strategy.
    bool rounds_invariant = true;
    std::vector<std::string> round_mismatches;
};

/// Runs every configuration, compares per-entry answer sets and distinct
/// solutions, and checks them against the oracle when it applies.
Differential differential(std::string_view program_text, std::string_view query_text, bool use_oracle,
                          const EngineOptions& base = {});

struct BenchRow {
    std::string suite;
    std::string instance;
    std::string config;
    int size = 0;
    double wall_ms = 0.0;
    std::uint64_t subgoals = 0;
    std::uint64_t max_its = 0;
    double ave_its = 0.0;
    std::uint64_t answers_produced = 0;
    std::uint64_t answers_consumed = 0;
    std::uint64_t clause_resolutions = 0;
    std::size_t solutions = 0;
};

struct BenchRatio {
    std::string suite;
    std::string config;
    int size_from = 0;
    int size_to = 0;
    double consumed_ratio = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<BenchRatio> ratios;
    std::vector<std::string> divergences;
    std::vector<std::string> notes;

    bool ok() const { return divergences.empty(); }
    std::string to_text() const;
    std::string to_json() const;
};

struct BenchSpec {
    std::string suite;  // tcl tcr tcn sg regex-warren regex-warren-nontabled worked-examples
    std::vector<int> sizes{50};
    std::uint64_t seed = 1;
    GraphKind graph = GraphKind::Chain;
    int edges_per_node = 2;  // random graphs: m = edges_per_node * n (capped)
    int instances = 1;
    unsigned jobs = 1;
    int oracle_max_nodes = 64;
    EngineOptions base;
};

/// Throws std::invalid_argument for an unknown suite.
BenchReport run_bench(const BenchSpec& spec);

const std::vector<std::string>& bench_suites();

/// Fixed small programs used by the worked-examples suite.
struct NamedProgram {
    std::string name;
    std::string program;
    std::string query;
};
const std::vector<NamedProgram>& worked_examples();

}  // namespace ltab
