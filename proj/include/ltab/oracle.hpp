#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ltab/program.hpp"

namespace ltab {

/// Ground facts per predicate, duplicate-free, in derivation order.
class FactStore {
public:
    bool add(const Term& fact);
    bool contains(const Term& fact) const;
    const std::vector<Term>& facts(const PredicateKey& k) const;
    std::size_t size() const { return total_; }

    /// Facts of `k` whose argument `pos` equals `value`.
    const std::vector<Term>& lookup(const PredicateKey& k, std::size_t pos, const Term& value) const;

private:
    struct Relation {
        std::vector<Term> rows;
        std::unordered_set<Term, TermHash> set;
        std::vector<std::unordered_map<Term, std::vector<Term>, TermHash>> by_arg;
    };
    std::unordered_map<PredicateKey, Relation, PredicateKeyHash> relations_;
    std::size_t total_ = 0;
};

struct OracleModel {
    FactStore facts;
    std::size_t iterations = 0;      // rounds that added facts
    std::size_t herbrand_bound = 0;  // saturating
};

/// Least model by naive (Jacobi) iteration over every predicate. Throws
/// OracleInapplicable for programs that are not range-restricted or that
/// build head compounds absent from their bodies.
OracleModel oracle_model(const std::vector<Clause>& clauses);
OracleModel oracle_model(std::string_view program_text);

/// Instantiated query conjunctions (rendered, `, `-separated), sorted.
std::vector<std::string> oracle_solve(const OracleModel& model, const Query& query);
std::vector<std::string> oracle_solve(std::string_view program_text, std::string_view query_text);

/// Model facts of key's predicate that are instances of key, rendered and sorted.
std::vector<std::string> oracle_entry_answers(const OracleModel& model, const Term& key);

}  // namespace ltab
