#include "ltab/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <set>

#include "ltab/canonical.hpp"
#include "ltab/errors.hpp"
#include "ltab/render.hpp"

namespace ltab {

bool FactStore::add(const Term& fact) {
    Relation& r = relations_[PredicateKey::of(fact)];
    if (!r.set.insert(fact).second) return false;
    r.rows.push_back(fact);
    if (r.by_arg.size() < fact.arity()) r.by_arg.resize(fact.arity());
    for (std::size_t i = 0; i < fact.arity(); ++i) r.by_arg[i][fact.arg(i)].push_back(fact);
    ++total_;
    return true;
}

bool FactStore::contains(const Term& fact) const {
    auto it = relations_.find(PredicateKey::of(fact));
    return it != relations_.end() && it->second.set.count(fact);
}

const std::vector<Term>& FactStore::facts(const PredicateKey& k) const {
    static const std::vector<Term> none;
    auto it = relations_.find(k);
    return it == relations_.end() ? none : it->second.rows;
}

const std::vector<Term>& FactStore::lookup(const PredicateKey& k, std::size_t pos, const Term& value) const {
    static const std::vector<Term> none;
    auto it = relations_.find(k);
    if (it == relations_.end() || pos >= it->second.by_arg.size()) return none;
    auto jt = it->second.by_arg[pos].find(value);
    return jt == it->second.by_arg[pos].end() ? none : jt->second;
}

namespace {

// Substitution indexed by clause variable id; empty Term slots are unbound.
using Subst = std::vector<std::optional<Term>>;

void collect_vars(const Term& t, std::set<VarId>& out) {
    if (t.is_var()) {
        out.insert(t.var_id());
    } else {
        for (const auto& a : t.args()) collect_vars(a, out);
    }
}

bool occurs_within(const Term& needle, const Term& hay) {
    if (hay == needle) return true;
    for (const auto& a : hay.args())
        if (occurs_within(needle, a)) return true;
    return false;
}

void check_applicable(const Clause& c) {
    std::set<VarId> head_vars, body_vars;
    collect_vars(c.head, head_vars);
    for (const auto& b : c.body) collect_vars(b, body_vars);
    for (auto v : head_vars)
        if (!body_vars.count(v))
            throw OracleInapplicable("clause at line " + std::to_string(c.line) + " is not range-restricted");
    for (const auto& a : c.head.args()) {
        if (!a.is_compound() || a.ground()) continue;
        bool found = false;
        for (const auto& b : c.body) found = found || occurs_within(a, b);
        if (!found)
            throw OracleInapplicable("clause at line " + std::to_string(c.line) + " constructs a head compound");
    }
}

Term instantiate(const Term& t, const Subst& s) {
    if (t.ground()) return t;
    if (t.is_var()) return *s[t.var_id()];
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back(instantiate(a, s));
    return Term::compound(t.symbol(), std::move(args));
}

// One-way match of a clause pattern against a ground term, extending s.
bool match(const Term& pat, const Term& g, Subst& s, std::vector<VarId>& bound) {
    if (pat.is_var()) {
        auto& slot = s[pat.var_id()];
        if (slot) return *slot == g;
        slot = g;
        bound.push_back(pat.var_id());
        return true;
    }
    if (pat.ground()) return pat == g;
    if (!g.is_compound() || g.symbol() != pat.symbol() || g.arity() != pat.arity()) return false;
    for (std::size_t i = 0; i < pat.arity(); ++i)
        if (!match(pat.arg(i), g.arg(i), s, bound)) return false;
    return true;
}

void undo(Subst& s, std::vector<VarId>& bound, std::size_t to) {
    while (bound.size() > to) {
        s[bound.back()].reset();
        bound.pop_back();
    }
}

// Candidate facts for a body atom: use the first argument already fixed by s.
const std::vector<Term>& candidates(const FactStore& db, const Term& atom, const Subst& s) {
    PredicateKey k = PredicateKey::of(atom);
    for (std::size_t i = 0; i < atom.arity(); ++i) {
        const Term& a = atom.arg(i);
        if (a.ground()) return db.lookup(k, i, a);
        if (a.is_var() && s[a.var_id()]) return db.lookup(k, i, *s[a.var_id()]);
    }
    return db.facts(k);
}

void derive(const Clause& c, const FactStore& db, std::vector<Term>& out) {
    Subst s(c.var_count);
    std::vector<VarId> bound;
    std::function<void(std::size_t)> step = [&](std::size_t i) {
        if (i == c.body.size()) {
            out.push_back(instantiate(c.head, s));
            return;
        }
        const Term& atom = c.body[i];
        for (const auto& f : candidates(db, atom, s)) {
            std::size_t mark = bound.size();
            if (match(atom, f, s, bound)) step(i + 1);
            undo(s, bound, mark);
        }
    };
    step(0);
}

std::size_t saturating_pow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::size_t>::max() / base)
            return std::numeric_limits<std::size_t>::max();
        r *= base;
    }
    return r;
}

void collect_constants(const Term& t, std::set<std::string>& out) {
    if (t.is_var()) return;
    if (t.is_compound()) {
        if (t.ground()) out.insert(render(t));
        for (const auto& a : t.args()) collect_constants(a, out);
        return;
    }
    out.insert(render(t));
}

}  // namespace

OracleModel oracle_model(const std::vector<Clause>& clauses) {
    for (const auto& c : clauses) check_applicable(c);

    std::set<std::string> constants;
    std::set<std::pair<std::uint32_t, std::size_t>> preds;
    for (const auto& c : clauses) {
        for (const auto& a : c.head.args()) collect_constants(a, constants);
        preds.insert({c.head.symbol().id, c.head.arity()});
    }
    OracleModel m;
    for (const auto& [sym, arity] : preds) {
        std::size_t term = saturating_pow(constants.size(), arity);
        m.herbrand_bound = term > std::numeric_limits<std::size_t>::max() - m.herbrand_bound
                               ? std::numeric_limits<std::size_t>::max()
                               : m.herbrand_bound + term;
    }

    for (;;) {
        std::vector<Term> derived;
        for (const auto& c : clauses) derive(c, m.facts, derived);
        bool grew = false;
        for (const auto& f : derived) grew = m.facts.add(f) || grew;
        if (!grew) break;
        ++m.iterations;
        if (m.iterations > m.herbrand_bound) throw InternalError("oracle exceeded the Herbrand base bound");
    }
    return m;
}

OracleModel oracle_model(std::string_view program_text) {
    std::vector<Clause> clauses;
    for (auto& item : parse_program(program_text))
        if (auto* c = std::get_if<Clause>(&item)) clauses.push_back(std::move(*c));
    return oracle_model(clauses);
}

std::vector<std::string> oracle_solve(const OracleModel& model, const Query& query) {
    std::set<std::string> out;
    Subst s(query.var_count);
    std::vector<VarId> bound;
    std::function<void(std::size_t)> step = [&](std::size_t i) {
        if (i == query.goals.size()) {
            std::string text;
            for (std::size_t g = 0; g < query.goals.size(); ++g) {
                if (g) text += ", ";
                text += render(instantiate(query.goals[g], s));
            }
            out.insert(std::move(text));
            return;
        }
        const Term& atom = query.goals[i];
        for (const auto& f : candidates(model.facts, atom, s)) {
            std::size_t mark = bound.size();
            if (match(atom, f, s, bound)) step(i + 1);
            undo(s, bound, mark);
        }
    };
    step(0);
    return {out.begin(), out.end()};
}

std::vector<std::string> oracle_solve(std::string_view program_text, std::string_view query_text) {
    return oracle_solve(oracle_model(program_text), parse_query(query_text));
}

std::vector<std::string> oracle_entry_answers(const OracleModel& model, const Term& key) {
    std::set<std::string> out;
    for (const auto& f : model.facts.facts(PredicateKey::of(key)))
        if (subsumes(key, f)) out.insert(render(f));
    return {out.begin(), out.end()};
}

}  // namespace ltab
