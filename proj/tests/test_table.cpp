#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "ltab/errors.hpp"
#include "ltab/render.hpp"
#include "ltab/table.hpp"

using namespace ltab;

namespace {

Term T(std::string_view text) { return parse_term(text); }

std::vector<std::string> drain(AnswerCursor c, const SubgoalEntry& e) {
    std::vector<std::string> out;
    while (auto pos = c.next()) out.push_back(render(e.answers[*pos].term()));
    return out;
}

}  // namespace

TEST(SubgoalTable, RegisterVariants) {
    SubgoalTable t;
    auto [e1, fresh1] = t.register_subgoal(T("p(a,Y)"));
    auto [e2, fresh2] = t.register_subgoal(T("p(a,Z)"));
    auto [e3, fresh3] = t.register_subgoal(T("p(b,Y)"));
    EXPECT_TRUE(fresh1);
    EXPECT_FALSE(fresh2);
    EXPECT_EQ(e1, e2);
    EXPECT_TRUE(fresh3);
    EXPECT_NE(e1, e3);
    EXPECT_EQ(t.size(), 2u);
    EXPECT_EQ(t.incomplete_count(), 2u);
    EXPECT_EQ(t.find(canonicalize(T("p(b,W)"))), e3);
}

TEST(SubgoalTable, InsertAnswers) {
    SubgoalTable t;
    SubgoalEntry& e = *t.register_subgoal(T("p(a,Y)")).first;
    EXPECT_TRUE(t.insert_answer(e, T("p(a,b)")));
    EXPECT_FALSE(t.insert_answer(e, T("p(a,b)")));
    EXPECT_TRUE(t.insert_answer(e, T("p(a,c)")));
    EXPECT_EQ(render(e.answers[0].term()), "p(a,b)");
    EXPECT_EQ(render(e.answers[1].term()), "p(a,c)");
    EXPECT_TRUE(e.revised);

    SubgoalEntry& g = *t.register_subgoal(T("q(X,Y)")).first;
    EXPECT_TRUE(t.insert_answer(g, T("q(X,X)")));
    EXPECT_FALSE(t.insert_answer(g, T("q(Y,Y)")));
    EXPECT_EQ(g.answers.size(), 1u);
}

TEST(SubgoalTable, PromoteRegions) {
    SubgoalTable t;
    SubgoalEntry& e = *t.register_subgoal(T("p(X)")).first;
    t.promote_regions(e);
    EXPECT_EQ(e.markers.last_old, 0u);
    EXPECT_EQ(e.markers.last_prev, 0u);

    t.insert_answer(e, T("p(1)"));
    t.promote_regions(e);  // old={}, prev={1}, cur={}
    t.insert_answer(e, T("p(2)"));
    EXPECT_EQ(e.old_count(), 0u);
    EXPECT_EQ(e.previous_count(), 1u);
    EXPECT_EQ(e.current_count(), 1u);
    t.promote_regions(e);
    EXPECT_EQ(e.old_count(), 1u);
    EXPECT_EQ(e.previous_count(), 1u);
    EXPECT_EQ(e.current_count(), 0u);

    t.insert_answer(e, T("p(3)"));
    EXPECT_EQ(drain(t.cursor(e, CursorMode::FromNew), e), (std::vector<std::string>{"p(2)", "p(3)"}));
    EXPECT_EQ(drain(t.cursor(e, CursorMode::FromFirst), e), (std::vector<std::string>{"p(1)", "p(2)", "p(3)"}));
}

TEST(SubgoalTable, EarlyPromoteOncePerRound) {
    SubgoalTable t;
    SubgoalEntry& e = *t.register_subgoal(T("p(X,Y)")).first;
    t.insert_answer(e, T("p(a,b)"));
    t.insert_answer(e, T("p(b,c)"));
    t.early_promote(e);
    EXPECT_TRUE(e.promoted_this_round);
    EXPECT_EQ(e.previous_count(), 2u);
    t.insert_answer(e, T("p(c,d)"));
    t.early_promote(e);  // no-op in the same round
    EXPECT_EQ(e.previous_count(), 2u);
    EXPECT_EQ(e.current_count(), 1u);

    t.promote_regions(e);
    EXPECT_FALSE(e.promoted_this_round);
    EXPECT_EQ(e.old_count(), 2u);
    EXPECT_EQ(drain(t.cursor(e, CursorMode::FromNew), e), (std::vector<std::string>{"p(c,d)"}));

    t.early_promote(e);  // empty current region
    EXPECT_EQ(e.previous_count(), 1u);
    EXPECT_EQ(e.current_count(), 0u);
}

TEST(AnswerCursor, SeesLaterAppends) {
    SubgoalTable t;
    SubgoalEntry& e = *t.register_subgoal(T("p(X)")).first;
    AnswerCursor empty = t.cursor(e, CursorMode::FromFirst);
    EXPECT_TRUE(empty.exhausted());
    EXPECT_FALSE(empty.next().has_value());

    for (const char* a : {"p(1)", "p(2)", "p(3)"}) t.insert_answer(e, T(a));
    t.promote_regions(e);
    t.promote_regions(e);  // everything old
    e.markers.last_old = 1;  // old = {p(1)} for this check
    AnswerCursor c = t.cursor(e, CursorMode::FromNew);
    EXPECT_EQ(c.start(), 1u);
    EXPECT_EQ(*c.next(), 1u);
    EXPECT_EQ(*c.next(), 2u);
    EXPECT_TRUE(c.exhausted());
    t.insert_answer(e, T("p(4)"));
    EXPECT_FALSE(c.exhausted());
    EXPECT_EQ(*c.next(), 3u);
    c.rewind();
    EXPECT_EQ(c.position(), 1u);
}

TEST(SubgoalTable, RegionPartitionUnderRandomOperations) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        SubgoalTable t;
        SubgoalEntry& e = *t.register_subgoal(T("p(X)")).first;
        std::size_t old_before = 0, prev_before = 0;
        for (int op = 0; op < 200; ++op) {
            switch (rng() % 4) {
                case 0:
                case 1: t.insert_answer(e, Term::compound("p", {Term::integer(static_cast<std::int64_t>(rng() % 60))})); break;
                case 2: t.promote_regions(e); break;
                case 3: t.early_promote(e); break;
            }
            ASSERT_LE(e.markers.last_old, e.markers.last_prev);
            ASSERT_LE(e.markers.last_prev, e.answers.size());
            ASSERT_GE(e.markers.last_old, old_before);
            ASSERT_GE(e.markers.last_prev, prev_before);
            old_before = e.markers.last_old;
            prev_before = e.markers.last_prev;

            // Regions enumerate every answer exactly once.
            std::set<std::string> seen;
            std::size_t total = 0;
            for (std::size_t i = 0; i < e.old_count(); ++i, ++total) seen.insert(render(e.answers[i].term()));
            auto fresh = drain(t.cursor(e, CursorMode::FromNew), e);
            total += fresh.size();
            seen.insert(fresh.begin(), fresh.end());
            ASSERT_EQ(total, e.answers.size());
            ASSERT_EQ(seen.size(), e.answers.size());
            ASSERT_EQ(e.old_count() + e.previous_count() + e.current_count(), e.answers.size());
        }
        t.check_invariants();
    }
}

TEST(SubgoalTable, TenThousandSubgoals) {
    auto build = [](int n) {
        SubgoalTable t;
        for (int i = 0; i < n; ++i) t.register_subgoal(Term::compound("p", {Term::integer(i), Term::variable(0)}));
        return t;
    };
    auto time_lookups = [](const SubgoalTable& t, int n) {
        std::vector<CanonicalTerm> keys;
        for (int i = 0; i < 1000; ++i)
            keys.push_back(canonicalize(Term::compound("p", {Term::integer((i * 7919) % n), Term::variable(3)})));
        auto t0 = std::chrono::steady_clock::now();
        std::size_t found = 0;
        for (int rep = 0; rep < 50; ++rep)
            for (const auto& k : keys) found += t.find(k) != nullptr;
        EXPECT_EQ(found, 50u * keys.size());
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    SubgoalTable small = build(1000);
    SubgoalTable large = build(10000);
    EXPECT_EQ(large.size(), 10000u);
    double ts = time_lookups(small, 1000), tl = time_lookups(large, 10000);
    // Ten times the entries; a linear scan would cost about ten times more.
    EXPECT_LT(tl, 4.0 * ts + 1e-3);
}

TEST(SubgoalTable, MarkCompleteCluster) {
    SubgoalTable t;
    SubgoalEntry& p = *t.register_subgoal(T("p(X)")).first;
    SubgoalEntry& q = *t.register_subgoal(T("q(X)")).first;
    q.topmost = &p;
    p.dependents.push_back(&q);
    p.looping = q.looping = true;
    q.evaluated = true;
    EXPECT_EQ(SubgoalTable::root_of(&q), &p);
    t.insert_answer(q, T("q(1)"));
    t.mark_complete(p);
    EXPECT_TRUE(p.complete);
    EXPECT_TRUE(q.complete);
    EXPECT_FALSE(q.evaluated);
    EXPECT_EQ(t.incomplete_count(), 0u);
    EXPECT_THROW(t.insert_answer(q, T("q(2)")), InternalError);
    EXPECT_EQ(q.answers.size(), 1u);

    SubgoalEntry& r = *t.register_subgoal(T("r")).first;
    t.mark_complete(r);
    EXPECT_TRUE(r.complete);
}

TEST(SubgoalTable, Dump) {
    SubgoalTable t;
    SubgoalEntry& e = *t.register_subgoal(T("p(a,Y)")).first;
    t.insert_answer(e, T("p(a,b)"));
    t.promote_regions(e);
    t.insert_answer(e, T("p(a,c)"));
    t.register_subgoal(T("q(X)"));
    t.mark_complete(e);
    EXPECT_EQ(t.dump(),
              "p(a,_G0)  state=complete answers=[p(a,b),p(a,c)] old=0 prev=1\n"
              "q(_G0)  state=incomplete answers=[] old=0 prev=0\n");
}
