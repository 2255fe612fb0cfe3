#include "ltab/canonical.hpp"

#include <unordered_map>
#include <vector>

namespace ltab {

namespace {

Term renumber(const Term& t, std::unordered_map<VarId, VarId>& seen) {
    if (t.ground()) return t;
    if (t.is_var()) {
        auto [it, inserted] = seen.try_emplace(t.var_id(), static_cast<VarId>(seen.size()));
        return Term::variable(it->second);
    }
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back(renumber(a, seen));
    return Term::compound(t.symbol(), std::move(args));
}

bool match(const Term& g, const Term& s, std::unordered_map<VarId, Term>& theta) {
    if (g.is_var()) {
        auto [it, inserted] = theta.try_emplace(g.var_id(), s);
        return inserted || it->second == s;
    }
    if (g.kind() != s.kind() || g.int_value() != s.int_value() || g.arity() != s.arity())
        return false;
    if (g.is_compound()) {
        if (g.ground()) return g == s;
        for (std::size_t i = 0; i < g.arity(); ++i)
            if (!match(g.arg(i), s.arg(i), theta)) return false;
    }
    return true;
}

}  // namespace

CanonicalTerm canonicalize(const Term& t) {
    std::unordered_map<VarId, VarId> seen;
    Term r = renumber(t, seen);
    return CanonicalTerm(std::move(r), static_cast<VarId>(seen.size()));
}

CanonicalTerm canonicalize(const Term& t, const Bindings& bindings) {
    return canonicalize(bindings.resolve(t));
}

bool is_variant(const Term& a, const Term& b) { return canonicalize(a) == canonicalize(b); }

bool subsumes(const Term& general, const Term& specific) {
    std::unordered_map<VarId, Term> theta;
    return match(general, specific, theta);
}

}  // namespace ltab
