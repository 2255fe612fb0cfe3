#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ltab/term.hpp"

namespace ltab {

struct PredicateKey {
    Symbol name;
    std::uint32_t arity = 0;

    static PredicateKey of(const Term& callable) {
        return PredicateKey{callable.symbol(), static_cast<std::uint32_t>(callable.arity())};
    }
    std::string str() const { return symbol_name(name) + "/" + std::to_string(arity); }

    friend bool operator==(const PredicateKey&, const PredicateKey&) = default;
};

struct PredicateKeyHash {
    std::size_t operator()(const PredicateKey& k) const {
        return (static_cast<std::size_t>(k.name.id) << 8) ^ k.arity;
    }
};

enum class Strategy : std::uint8_t { Lazy, Eager };

std::string_view to_string(Strategy s);

/// `H.` or `H :- B1, ..., Bn.` Variables are numbered 0..var_count-1 in
/// first-occurrence order; they are renamed apart when the clause is used.
struct Clause {
    Term head;
    std::vector<Term> body;
    VarId var_count = 0;
    std::vector<std::string> var_names;  // index = variable id; "_" for anonymous
    std::size_t line = 0;

    bool is_fact() const { return body.empty(); }
};

/// `:- table name/arity [eager|lazy].`
struct TableDeclaration {
    PredicateKey key;
    std::optional<Strategy> strategy;
    std::size_t line = 0;
};

using ProgramItem = std::variant<Clause, TableDeclaration>;

/// Parses program text. Declarations and clauses are returned in source
/// order without any transformation. Throws SyntaxError.
std::vector<ProgramItem> parse_program(std::string_view text);

/// A parsed query: conjunction of goals sharing one variable scope.
struct Query {
    std::vector<Term> goals;
    VarId var_count = 0;
    std::vector<std::string> var_names;
};

/// Parses `G1, ..., Gn` with an optional trailing period.
Query parse_query(std::string_view text);

/// Parses a single term (optional trailing period). Variable ids start at 0.
Term parse_term(std::string_view text, std::vector<std::string>* var_names = nullptr);

std::string render_clause(const Clause& c);

}  // namespace ltab
