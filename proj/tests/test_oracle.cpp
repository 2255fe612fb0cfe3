#include <gtest/gtest.h>

#include <json.hpp>

#include <algorithm>

#include "ltab/bench.hpp"
#include "ltab/errors.hpp"
#include "ltab/generate.hpp"
#include "ltab/oracle.hpp"
#include "support.hpp"

using namespace ltab;

namespace {

using Strings = std::vector<std::string>;

std::set<std::pair<int, int>> pairs_of(const Strings& solutions) {
    std::set<std::pair<int, int>> out;
    for (const auto& s : solutions) {
        Term t = parse_term(s);
        out.insert({static_cast<int>(t.arg(0).int_value()), static_cast<int>(t.arg(1).int_value())});
    }
    return out;
}

}  // namespace

TEST(Oracle, Examples) {
    EXPECT_EQ(oracle_solve(fixtures::kLeftRecursion, "p(a,Y)"), (Strings{"p(a,b)", "p(a,c)"}));
    EXPECT_EQ(oracle_solve(fixtures::kLateAnswer, "p(X,Y)"), (Strings{"p(a,b)", "p(b,c)", "p(b,d)"}));
    EXPECT_TRUE(oracle_solve(shape_rules(Shape::Tcl), "tcl(X,Y)").empty());
    EXPECT_EQ(oracle_solve(fixtures::kPairs, "p(X),p(Y)"),
              (Strings{"p(1), p(1)", "p(1), p(2)", "p(2), p(1)", "p(2), p(2)"}));
}

TEST(Oracle, IterationBound) {
    OracleModel m = oracle_model(shape_rules(Shape::Tcl) + edge_facts(chain_edges(12), "edge"));
    EXPECT_GT(m.iterations, 0u);
    EXPECT_LE(m.iterations, m.herbrand_bound);
    EXPECT_EQ(m.facts.facts({intern("tcl"), 2}).size(), 66u);
}

TEST(Oracle, Inapplicable) {
    EXPECT_THROW(oracle_model("p(X,X).\n"), OracleInapplicable);
    EXPECT_THROW(oracle_model("p(X) :- q(Y).\nq(1).\n"), OracleInapplicable);
    EXPECT_THROW(oracle_model("p(f(X)) :- q(X).\nq(1).\n"), OracleInapplicable);
    EXPECT_NO_THROW(oracle_model("p(f(X)) :- q(f(X)).\nq(f(1)).\n"));
    EXPECT_THROW(oracle_model(regex_program(4, false)), OracleInapplicable);
}

TEST(Oracle, EntryAnswers) {
    OracleModel m = oracle_model(fixtures::kLeftRecursion);
    EXPECT_EQ(oracle_entry_answers(m, parse_term("p(a,X)")), (Strings{"p(a,b)", "p(a,c)"}));
    EXPECT_EQ(oracle_entry_answers(m, parse_term("p(X,c)")), (Strings{"p(a,c)", "p(b,c)"}));
    EXPECT_EQ(oracle_entry_answers(m, parse_term("p(X,X)")), Strings{});
}

TEST(Oracle, ChainClosureCount) {
    Instance inst = random_instance(1, Shape::Tcl, GraphKind::Chain, 4, 0);
    EXPECT_NE(inst.program.find("edge(1,2).\nedge(2,3).\nedge(3,4).\n"), std::string::npos);
    EXPECT_EQ(oracle_solve(inst.program, "tcl(X,Y)").size(), 6u);
}

TEST(Oracle, MatchesMatrixClosureOnRandomGraphs) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto edges = random_edges(10, 25, seed);
        auto expected = fixtures::closure_by_matrix(10, edges);
        for (Shape s : {Shape::Tcl, Shape::Tcr, Shape::Tcn}) {
            std::string name(to_string(s));
            auto got = pairs_of(oracle_solve(shape_rules(s) + edge_facts(edges, "edge"), name + "(X,Y)"));
            EXPECT_EQ(got, expected) << name << " seed " << seed;
        }
    }
}

TEST(Generators, Deterministic) {
    EXPECT_EQ(random_instance(7, Shape::Sg, GraphKind::Cycle, 3, 0).program,
              random_instance(7, Shape::Sg, GraphKind::Cycle, 3, 0).program);
    EXPECT_EQ(random_edges(10, 25, 9), random_edges(10, 25, 9));
    EXPECT_NE(random_edges(10, 25, 9), random_edges(10, 25, 10));
    Instance a = random_instance(3, Shape::Tcn, GraphKind::Random, 12, 30);
    Instance b = random_instance(3, Shape::Tcn, GraphKind::Random, 12, 30);
    EXPECT_EQ(a.program, b.program);
    EXPECT_EQ(a.query, b.query);
    EXPECT_EQ(a.query, "tcn(X,Y)");
    EXPECT_EQ(random_instance(4, Shape::Tcn, GraphKind::Random, 12, 30).query, "tcn(1,Y)");
}

TEST(Generators, Shapes) {
    auto edges = random_edges(10, 25, 4);
    EXPECT_EQ(edges.size(), 25u);
    std::set<Edge> distinct(edges.begin(), edges.end());
    EXPECT_EQ(distinct.size(), 25u);
    for (auto [a, b] : edges) {
        EXPECT_NE(a, b);
        EXPECT_GE(a, 1);
        EXPECT_LE(b, 10);
    }
    EXPECT_EQ(cycle_edges(3), (std::vector<Edge>{{1, 2}, {2, 3}, {3, 1}}));
    EXPECT_EQ(edge_facts(chain_edges(3), "e"), "e(1,2).\ne(2,3).\n");
    EXPECT_EQ(ab_string_facts(4), "c(0,a,1).\nc(1,b,2).\nc(2,a,3).\nc(3,b,4).\n");
    EXPECT_THROW(random_edges(3, 7, 1), std::invalid_argument);
    EXPECT_THROW(chain_edges(1), std::invalid_argument);
    EXPECT_THROW(parse_shape("tcx"), std::invalid_argument);
    EXPECT_EQ(parse_graph_kind("cycle"), GraphKind::Cycle);
}

TEST(Differential, WorkedExamplesAgree) {
    for (const auto& ex : worked_examples()) {
        Differential d = differential(ex.program, ex.query, true);
        EXPECT_TRUE(d.divergences.empty()) << ex.name << ": " << (d.divergences.empty() ? "" : d.divergences[0]);
        EXPECT_TRUE(d.oracle_applied) << ex.name << ": " << d.oracle_note;
        EXPECT_TRUE(d.rounds_invariant) << ex.name;
        EXPECT_EQ(d.outcomes.size(), 8u);
    }
}

TEST(Differential, RandomProgramsAgree) {
    EngineOptions base;
    base.step_budget = 50000;
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 250; ++seed) {
        auto rp = fixtures::random_program(seed);
        Differential d = differential(rp.text, rp.query, true, base);
        bool budget = std::any_of(d.outcomes.begin(), d.outcomes.end(),
                                  [](const ConfigOutcome& o) { return !o.error.empty(); });
        if (budget) {
            for (const auto& o : d.outcomes)
                EXPECT_TRUE(o.error.empty() || o.error.find("budget") != std::string::npos) << seed << ": " << o.error;
            continue;
        }
        ++checked;
        EXPECT_TRUE(d.divergences.empty()) << "seed " << seed << "\n"
                                           << rp.text << "?- " << rp.query << "\n"
                                           << (d.divergences.empty() ? "" : d.divergences[0]);
        EXPECT_TRUE(d.oracle_applied) << "seed " << seed << ": " << d.oracle_note;
    }
    EXPECT_GT(checked, 150);
}

TEST(Differential, OracleSkipIsReported) {
    Differential d = differential(regex_program(6, false), regex_query(6), true);
    EXPECT_FALSE(d.oracle_applied);
    EXPECT_FALSE(d.oracle_note.empty());
    EXPECT_TRUE(d.divergences.empty());
}

TEST(Bench, ChainReport) {
    BenchSpec spec;
    spec.suite = "tcl";
    spec.sizes = {50};
    BenchReport r = run_bench(spec);
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.rows.size(), 8u);
    for (const auto& row : r.rows) {
        EXPECT_EQ(row.solutions, 1225u) << row.config;
        EXPECT_EQ(row.max_its, 2u) << row.config;
        EXPECT_EQ(row.subgoals, 1u);
    }
    EXPECT_NE(r.to_text().find("status=ok"), std::string::npos);
    auto j = nlohmann::json::parse(r.to_json());
    EXPECT_EQ(j["rows"].size(), 8u);
    EXPECT_EQ(j["status"], "ok");
}

TEST(Bench, RatiosAndParallelDeterminism) {
    BenchSpec spec;
    spec.suite = "tcr";
    spec.sizes = {10, 20};
    spec.graph = GraphKind::Random;
    spec.instances = 3;
    BenchReport serial = run_bench(spec);
    spec.jobs = 4;
    BenchReport parallel = run_bench(spec);
    ASSERT_TRUE(serial.ok());
    ASSERT_EQ(serial.rows.size(), parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        EXPECT_EQ(serial.rows[i].instance, parallel.rows[i].instance);
        EXPECT_EQ(serial.rows[i].answers_consumed, parallel.rows[i].answers_consumed);
    }
    EXPECT_EQ(serial.ratios.size(), 8u);
    BenchSpec bad;
    bad.suite = "nope";
    EXPECT_THROW(run_bench(bad), std::invalid_argument);
}
