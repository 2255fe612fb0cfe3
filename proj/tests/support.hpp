#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ltab/term.hpp"

namespace ltab::fixtures {

inline const char* kLeftRecursion =
    ":- table p/2.\n"
    "p(X,Y) :- p(X,Z), e(Z,Y).\n"
    "p(X,Y) :- e(X,Y).\n"
    "e(a,b).\n"
    "e(b,c).\n";

inline const char* kPairs =
    ":- table p/1.\n"
    "p(1).\n"
    "p(2).\n";

inline const char* kLateAnswer =
    ":- table p/2.\n"
    "p(X,Y) :- p(X,Z), q(Z,Y).\n"
    "p(b,c) :- p(X,Y).\n"
    "p(a,b).\n"
    ":- table q/2.\n"
    "q(c,d) :- p(X,Y), t(X,Y).\n"
    "t(a,b).\n";

inline const char* kLateAnswerReordered =
    ":- table p/2.\n"
    "p(a,b).\n"
    "p(b,c) :- p(X,Y).\n"
    "p(X,Y) :- p(X,Z), q(Z,Y).\n"
    ":- table q/2.\n"
    "q(c,d) :- p(X,Y), t(X,Y).\n"
    "t(a,b).\n";

/// Small random terms over f/2, g/1, a, b, 0..2 and variables 0..vars-1.
class TermGen {
public:
    explicit TermGen(std::uint64_t seed, VarId vars = 4) : rng_(seed), vars_(vars) {}

    Term term(int depth = 3) {
        int pick = static_cast<int>(rng_() % (depth > 0 ? 7 : 4));
        switch (pick) {
            case 0: return Term::variable(static_cast<VarId>(rng_() % vars_));
            case 1: return Term::atom(rng_() % 2 ? "a" : "b");
            case 2: return Term::integer(static_cast<std::int64_t>(rng_() % 3));
            case 3: return Term::variable(static_cast<VarId>(rng_() % vars_));
            case 4: return Term::compound("g", {term(depth - 1)});
            default: return Term::compound("f", {term(depth - 1), term(depth - 1)});
        }
    }

    /// A callable p/3 term.
    Term atom(int depth = 2) { return Term::compound("p", {term(depth), term(depth), term(depth)}); }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    VarId vars_;
};

/// Random binary Datalog program over p, q, r, s and edge facts e/2, with
/// a random mix of tabled, eager-tabled and plain predicates.
struct RandomProgram {
    std::string text;
    std::string query;
};

inline RandomProgram random_program(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const char* preds[] = {"p", "q", "r", "s"};
    const char* mids[] = {"Z", "W"};
    RandomProgram out;
    for (const char* p : preds)
        if (rng() % 3) out.text += std::string(":- table ") + p + "/2" + (rng() % 4 == 0 ? " eager" : "") + ".\n";
    int rules = 3 + static_cast<int>(rng() % 6);
    for (int r = 0; r < rules; ++r) {
        std::string head = std::string(preds[rng() % 4]) + "(X,Y)";
        int len = 1 + static_cast<int>(rng() % 3);
        std::string body, prev = "X";
        for (int i = 0; i < len; ++i) {
            std::string next = i == len - 1 ? "Y" : mids[i % 2];
            std::string p = rng() % 3 == 0 ? "e" : preds[rng() % 4];
            body += (i ? ", " : "") + p + "(" + prev + "," + next + ")";
            prev = next;
        }
        out.text += head + " :- " + body + ".\n";
    }
    int n = 2 + static_cast<int>(rng() % 5);
    auto node = [&] { return std::to_string(1 + rng() % n); };
    for (int i = 0; i < 2 * n; ++i) out.text += "e(" + node() + "," + node() + ").\n";
    for (const char* p : preds)
        if (rng() % 2) out.text += std::string(p) + "(" + node() + "," + node() + ").\n";
    out.query = std::string(preds[rng() % 4]) + (rng() % 2 ? "(X,Y)" : "(1,Y)");
    if (rng() % 3 == 0) out.query += ", " + std::string(preds[rng() % 4]) + "(Y,Z)";
    return out;
}

/// Transitive closure by repeated boolean matrix squaring over nodes 1..n.
inline std::set<std::pair<int, int>> closure_by_matrix(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<char>> r(n + 1, std::vector<char>(n + 1, 0));
    for (auto [a, b] : edges) r[a][b] = 1;
    for (int k = 1; k < 2 * n; k *= 2) {
        auto next = r;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                if (r[i][j])
                    for (int l = 1; l <= n; ++l)
                        if (r[j][l]) next[i][l] = 1;
        r = std::move(next);
    }
    std::set<std::pair<int, int>> out;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            if (r[i][j]) out.insert({i, j});
    return out;
}

}  // namespace ltab::fixtures
