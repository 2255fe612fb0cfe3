#pragma once

#include <cstddef>

#include "ltab/bindings.hpp"
#include "ltab/term.hpp"

namespace ltab {

/// A term whose variables are numbered 0,1,2,... in first-occurrence order.
/// Two terms are variants exactly when their canonical forms are equal, so
/// this is the key type for subgoal and answer tables.
class CanonicalTerm {
public:
    const Term& term() const { return term_; }
    VarId var_count() const { return var_count_; }
    std::size_t hash() const { return hash_; }

    friend bool operator==(const CanonicalTerm& a, const CanonicalTerm& b) {
        return a.hash_ == b.hash_ && a.term_ == b.term_;
    }

private:
    friend CanonicalTerm canonicalize(const Term& t);
    CanonicalTerm(Term t, VarId n) : term_(std::move(t)), var_count_(n), hash_(term_.hash()) {}

    Term term_;
    VarId var_count_ = 0;
    std::size_t hash_ = 0;
};

struct CanonicalHash {
    std::size_t operator()(const CanonicalTerm& t) const { return t.hash(); }
};

CanonicalTerm canonicalize(const Term& t);
/// Applies the bindings first, then canonicalizes.
CanonicalTerm canonicalize(const Term& t, const Bindings& bindings);

/// Terms must not share variables.
bool is_variant(const Term& a, const Term& b);

/// One-way matching: true iff some substitution of `general`'s variables
/// makes it identical to `specific`. Variables of `specific` act as
/// constants. The terms must not share variables.
bool subsumes(const Term& general, const Term& specific);

}  // namespace ltab
