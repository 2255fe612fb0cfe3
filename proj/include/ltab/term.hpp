#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ltab {

/// Interned atom / functor name.
struct Symbol {
    std::uint32_t id = 0;
    friend bool operator==(Symbol, Symbol) = default;
    friend auto operator<=>(Symbol, Symbol) = default;
};

/// Process-wide symbol interner. Thread-safe.
Symbol intern(std::string_view name);
const std::string& symbol_name(Symbol s);

using VarId = std::uint32_t;

enum class TermKind : std::uint8_t { Variable, Atom, Integer, Compound };

/// Immutable logic term. Compound arguments are shared between copies, so
/// copying a Term is cheap.
class Term {
public:
    Term() = default;  // the atom with symbol id 0 ("[]"); placeholder only

    static Term variable(VarId id);
    static Term atom(Symbol name);
    static Term atom(std::string_view name) { return atom(intern(name)); }
    static Term integer(std::int64_t value);
    static Term compound(Symbol functor, std::vector<Term> args);
    static Term compound(std::string_view functor, std::vector<Term> args) {
        return compound(intern(functor), std::move(args));
    }

    TermKind kind() const { return kind_; }
    bool is_var() const { return kind_ == TermKind::Variable; }
    bool is_atom() const { return kind_ == TermKind::Atom; }
    bool is_integer() const { return kind_ == TermKind::Integer; }
    bool is_compound() const { return kind_ == TermKind::Compound; }
    /// Atom or compound: something that can name a predicate.
    bool is_callable() const { return is_atom() || is_compound(); }
    /// True when the term contains no variables.
    bool ground() const { return ground_; }

    VarId var_id() const { return static_cast<VarId>(value_); }
    std::int64_t int_value() const { return value_; }
    /// Atom name or compound functor.
    Symbol symbol() const { return Symbol{static_cast<std::uint32_t>(value_)}; }
    std::size_t arity() const { return args_ ? args_->size() : 0; }
    std::span<const Term> args() const {
        if (!args_) return {};
        return {args_->data(), args_->size()};
    }
    const Term& arg(std::size_t i) const { return (*args_)[i]; }

    /// Structural identity (variables compared by id).
    friend bool operator==(const Term& a, const Term& b);
    std::size_t hash() const;

private:
    TermKind kind_ = TermKind::Atom;
    bool ground_ = true;
    std::int64_t value_ = 0;
    std::shared_ptr<const std::vector<Term>> args_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Largest variable id occurring in t plus one (0 for ground terms).
VarId var_span(const Term& t);

/// Adds `offset` to every variable id in t. Ground subterms are shared.
Term offset_vars(const Term& t, VarId offset);

}  // namespace ltab
