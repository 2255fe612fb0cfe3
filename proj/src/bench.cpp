#include "ltab/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ltab/errors.hpp"
#include "ltab/oracle.hpp"
#include "ltab/render.hpp"

namespace ltab {

std::vector<BenchConfig> config_matrix(const EngineOptions& base) {
    std::vector<BenchConfig> out;
    for (Strategy s : {Strategy::Lazy, Strategy::Eager}) {
        for (bool semi : {true, false}) {
            for (bool ep : {true, false}) {
                BenchConfig c;
                c.label = std::string(to_string(s)) + "/semi=" + (semi ? "on" : "off") + "/ep=" + (ep ? "on" : "off");
                c.options = base;
                c.options.strategy = s;
                c.options.semi_naive = semi;
                c.options.early_promotion = semi && ep;
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

ConfigOutcome run_config(const AnnotatedProgram& program, const Query& query, const BenchConfig& config) {
    ConfigOutcome out;
    out.config = config.label;
    out.options = config.options;
    auto t0 = std::chrono::steady_clock::now();
    try {
        Run run(program, query, config.options);
        while (auto s = run.next()) {
            out.solutions.insert(s->text);
            ++out.solution_events;
        }
        out.stats = run.stats();
        for (const auto& e : run.table().entries()) {
            std::vector<std::string> answers;
            answers.reserve(e.answers.size());
            for (const auto& a : e.answers) answers.push_back(render(a.term()));
            std::sort(answers.begin(), answers.end());
            out.entries.emplace(render(e.key.term()), std::move(answers));
        }
    } catch (const std::exception& ex) {
        out.error = ex.what();
    }
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s + "}";
}

void compare_outcomes(const ConfigOutcome& ref, const ConfigOutcome& other, std::vector<std::string>& out) {
    if (ref.entries.size() != other.entries.size())
        out.push_back(other.config + ": " + std::to_string(other.entries.size()) + " subgoals vs " +
                      std::to_string(ref.entries.size()) + " in " + ref.config);
    for (const auto& [key, answers] : ref.entries) {
        auto it = other.entries.find(key);
        if (it == other.entries.end()) {
            out.push_back(other.config + ": no entry for " + key);
        } else if (it->second != answers) {
            out.push_back(other.config + ": entry " + key + " has " + join(it->second) + ", " + ref.config +
                          " has " + join(answers));
        }
    }
    if (ref.solutions != other.solutions)
        out.push_back(other.config + ": " + std::to_string(other.solutions.size()) + " distinct solutions vs " +
                      std::to_string(ref.solutions.size()) + " in " + ref.config);
}

}  // namespace

Differential differential(std::string_view program_text, std::string_view query_text, bool use_oracle,
                          const EngineOptions& base) {
    Differential d;
    AnnotatedProgram program = load_program(program_text);
    Query query = parse_query(query_text);
    for (const auto& c : config_matrix(base)) d.outcomes.push_back(run_config(program, query, c));

    for (const auto& o : d.outcomes)
        if (!o.error.empty()) d.divergences.push_back(o.config + ": " + o.error);
    if (!d.divergences.empty()) return d;

    const ConfigOutcome& ref = d.outcomes.front();
    for (std::size_t i = 1; i < d.outcomes.size(); ++i) compare_outcomes(ref, d.outcomes[i], d.divergences);

    for (const auto& on : d.outcomes) {
        if (!on.options.semi_naive) continue;
        for (const auto& off : d.outcomes) {
            if (off.options.semi_naive || off.options.strategy != on.options.strategy) continue;
            if (on.stats.round_counters != off.stats.round_counters) {
                d.rounds_invariant = false;
                d.round_mismatches.push_back(on.config + " vs " + off.config);
            }
        }
    }

    if (!use_oracle) return d;
    try {
        OracleModel model = oracle_model(program_text);
        d.oracle_applied = true;
        std::vector<std::string> expected = oracle_solve(model, query);
        std::vector<std::string> got(ref.solutions.begin(), ref.solutions.end());
        if (got != expected) d.divergences.push_back("oracle: solutions " + join(expected) + ", engine " + join(got));
        for (const auto& [key, answers] : ref.entries) {
            std::vector<std::string> want = oracle_entry_answers(model, parse_term(key));
            if (want != answers)
                d.divergences.push_back("oracle: entry " + key + " expects " + join(want) + ", engine " +
                                        join(answers));
        }
    } catch (const OracleInapplicable& ex) {
        d.oracle_note = ex.what();
    }
    return d;
}

const std::vector<std::string>& bench_suites() {
    static const std::vector<std::string> suites{"tcl", "tcr", "tcn", "sg",
                                                 "regex-warren", "regex-warren-nontabled", "worked-examples"};
    return suites;
}

const std::vector<NamedProgram>& worked_examples() {
    static const std::vector<NamedProgram> programs{
        {"left-recursion",
         ":- table p/2.\n"
         "p(X,Y) :- p(X,Z), e(Z,Y).\n"
         "p(X,Y) :- e(X,Y).\n"
         "e(a,b).\n"
         "e(b,c).\n",
         "p(a,Y)"},
        {"pair-stream",
         ":- table p/1.\n"
         "p(1).\n"
         "p(2).\n",
         "p(X),p(Y)"},
        {"late-answer",
         ":- table p/2, q/2.\n"
         "p(X,Y) :- p(X,Z), q(Z,Y).\n"
         "p(b,c) :- p(X,Y).\n"
         "p(a,b).\n"
         "q(c,d) :- p(X,Y), t(X,Y).\n"
         "t(a,b).\n",
         "p(X,Y)"},
        {"late-answer-reordered",
         ":- table p/2, q/2.\n"
         "p(a,b).\n"
         "p(b,c) :- p(X,Y).\n"
         "p(X,Y) :- p(X,Z), q(Z,Y).\n"
         "q(c,d) :- p(X,Y), t(X,Y).\n"
         "t(a,b).\n",
         "p(X,Y)"},
    };
    return programs;
}

namespace {

struct Task {
    std::string instance;
    int size = 0;
    std::string program;
    std::string query;
    bool use_oracle = false;
};

struct TaskResult {
    Differential diff;
};

std::vector<Task> make_tasks(const BenchSpec& spec) {
    std::vector<Task> tasks;
    const std::string& s = spec.suite;
    if (s == "tcl" || s == "tcr" || s == "tcn" || s == "sg") {
        Shape shape = parse_shape(s);
        for (int n : spec.sizes) {
            long long max_edges = static_cast<long long>(n) * (n - 1);
            int m = static_cast<int>(std::min<long long>(static_cast<long long>(spec.edges_per_node) * n, max_edges));
            for (int i = 0; i < spec.instances; ++i) {
                Instance inst = random_instance(spec.seed + static_cast<std::uint64_t>(i), shape, spec.graph, n, m);
                tasks.push_back({inst.label, n, inst.program, inst.query, n <= spec.oracle_max_nodes});
            }
        }
    } else if (s == "regex-warren" || s == "regex-warren-nontabled") {
        bool via_q = s == "regex-warren-nontabled";
        for (int n : spec.sizes)
            tasks.push_back({s + "(" + std::to_string(n) + ")", n, regex_program(n, via_q), regex_query(n), true});
    } else if (s == "worked-examples") {
        for (const auto& p : worked_examples()) tasks.push_back({p.name, 0, p.program, p.query, true});
    } else {
        throw std::invalid_argument("unknown suite '" + s + "'");
    }
    return tasks;
}

}  // namespace

BenchReport run_bench(const BenchSpec& spec) {
    std::vector<Task> tasks = make_tasks(spec);
    std::vector<TaskResult> results(tasks.size());

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                results[i].diff = differential(tasks[i].program, tasks[i].query, tasks[i].use_oracle, spec.base);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    BenchReport report;
    std::map<std::pair<std::string, int>, std::uint64_t> consumed;  // (config, size) -> total
    std::vector<std::string> config_order;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const Task& t = tasks[i];
        const Differential& d = results[i].diff;
        for (const auto& o : d.outcomes) {
            BenchRow row;
            row.suite = spec.suite;
            row.instance = t.instance;
            row.config = o.config;
            row.size = t.size;
            row.wall_ms = o.wall_ms;
            row.subgoals = o.stats.subgoal_count();
            row.max_its = o.stats.max_its();
            row.ave_its = o.stats.ave_its();
            row.answers_produced = o.stats.answers_produced;
            row.answers_consumed = o.stats.answers_consumed;
            row.clause_resolutions = o.stats.clause_resolutions;
            row.solutions = o.solutions.size();
            report.rows.push_back(row);
            if (i == 0) config_order.push_back(o.config);
            consumed[{o.config, t.size}] += o.stats.answers_consumed;
        }
        for (const auto& msg : d.divergences) report.divergences.push_back(t.instance + ": " + msg);
        if (!d.rounds_invariant)
            for (const auto& msg : d.round_mismatches)
                report.notes.push_back(t.instance + ": round counters differ, " + msg);
        if (t.use_oracle && !d.oracle_applied && !d.oracle_note.empty())
            report.notes.push_back(t.instance + ": oracle skipped, " + d.oracle_note);
    }

    if (spec.suite != "worked-examples") {
        for (std::size_t k = 1; k < spec.sizes.size(); ++k) {
            int from = spec.sizes[k - 1], to = spec.sizes[k];
            for (const auto& c : config_order) {
                std::uint64_t a = consumed[{c, from}], b = consumed[{c, to}];
                report.ratios.push_back({spec.suite, c, from, to, a ? static_cast<double>(b) / a : 0.0});
            }
        }
    }
    return report;
}

std::string BenchReport::to_text() const {
    std::ostringstream os;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-28s %-22s %6s %10s %8s %7s %8s %10s %10s %10s %9s\n", "instance", "config",
                  "size", "wall_ms", "subgoals", "max_its", "ave_its", "produced", "consumed", "resolved",
                  "solutions");
    os << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-28s %-22s %6d %10.3f %8llu %7llu %8.2f %10llu %10llu %10llu %9zu\n",
                      r.instance.c_str(), r.config.c_str(), r.size, r.wall_ms,
                      static_cast<unsigned long long>(r.subgoals), static_cast<unsigned long long>(r.max_its),
                      r.ave_its, static_cast<unsigned long long>(r.answers_produced),
                      static_cast<unsigned long long>(r.answers_consumed),
                      static_cast<unsigned long long>(r.clause_resolutions), r.solutions);
        os << buf;
    }
    for (const auto& r : ratios) {
        std::snprintf(buf, sizeof buf, "ratio %s %s %d->%d answers_consumed=%.3f\n", r.suite.c_str(),
                      r.config.c_str(), r.size_from, r.size_to, r.consumed_ratio);
        os << buf;
    }
    for (const auto& n : notes) os << "note: " << n << '\n';
    for (const auto& d : divergences) os << "DIVERGENCE " << d << '\n';
    os << (ok() ? "status=ok\n" : "status=DIVERGENCE\n");
    return os.str();
}

std::string BenchReport::to_json() const {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        j["rows"].push_back({{"suite", r.suite},
                             {"instance", r.instance},
                             {"config", r.config},
                             {"size", r.size},
                             {"wall_ms", r.wall_ms},
                             {"subgoal_count", r.subgoals},
                             {"max_its", r.max_its},
                             {"ave_its", r.ave_its},
                             {"answers_produced", r.answers_produced},
                             {"answers_consumed", r.answers_consumed},
                             {"clause_resolutions", r.clause_resolutions},
                             {"solutions", r.solutions}});
    }
    j["ratios"] = nlohmann::ordered_json::array();
    for (const auto& r : ratios)
        j["ratios"].push_back({{"suite", r.suite},
                               {"config", r.config},
                               {"size_from", r.size_from},
                               {"size_to", r.size_to},
                               {"answers_consumed_ratio", r.consumed_ratio}});
    j["notes"] = notes;
    j["divergences"] = divergences;
    j["status"] = ok() ? "ok" : "DIVERGENCE";
    return j.dump(2) + "\n";
}

}  // namespace ltab
