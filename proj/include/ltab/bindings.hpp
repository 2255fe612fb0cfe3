#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ltab/term.hpp"

namespace ltab {

/// Substitution over variable ids with an undo trail.
///
/// Variables are allocated in blocks (`fresh_block`) and bound at most once
/// between rollbacks. A `Mark` captures both the trail height and the
/// allocation top; `undo_to` unbinds everything bound after the mark and
/// releases variables allocated after it.
class Bindings {
public:
    struct Mark {
        std::size_t trail = 0;
        VarId top = 0;
    };

    /// Reserves `n` fresh variable ids and returns the first one.
    VarId fresh_block(VarId n);
    VarId fresh() { return fresh_block(1); }
    VarId top() const { return top_; }

    bool is_bound(VarId v) const { return v < values_.size() && values_[v].has_value(); }
    const Term& value(VarId v) const { return *values_[v]; }

    /// Binds an unbound variable. Binding an already-bound variable is a
    /// logic error and throws InternalError.
    void bind(VarId v, Term t);

    Mark mark() const { return Mark{trail_.size(), top_}; }
    void undo_to(Mark m);

    /// Follows variable bindings until reaching a non-variable or an
    /// unbound variable.
    Term deref(Term t) const;

    /// Applies the substitution throughout t. Throws InternalError on a
    /// cyclic binding.
    Term resolve(const Term& t) const;

    /// When enabled, every bind() checks whether the bound variable occurs
    /// in its value and counts violations. Used for auditing only; the
    /// binding is still made.
    void set_occurs_audit(bool on) { audit_ = on; }
    std::uint64_t cyclic_bindings() const { return cyclic_; }

    std::size_t trail_size() const { return trail_.size(); }

    /// Bound state equality (same variables bound to identical terms).
    friend bool operator==(const Bindings& a, const Bindings& b);

private:
    bool occurs(VarId v, const Term& t) const;

    std::vector<std::optional<Term>> values_;
    std::vector<VarId> trail_;
    VarId top_ = 0;
    bool audit_ = false;
    std::uint64_t cyclic_ = 0;
};

/// Most general unification without occurs-check. On failure the bindings
/// are rolled back to their state at entry.
bool unify(const Term& a, const Term& b, Bindings& bindings);

}  // namespace ltab
