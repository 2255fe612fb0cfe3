#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ltab/program.hpp"

namespace ltab {

/// Directed graph over predicates; edge p -> q when q occurs in the body
/// of some clause for p. Node order is first appearance.
struct CallGraph {
    std::vector<PredicateKey> nodes;
    std::unordered_map<PredicateKey, std::size_t, PredicateKeyHash> index;
    std::vector<std::vector<std::size_t>> edges;

    std::size_t add_node(const PredicateKey& k);
    std::optional<std::size_t> find(const PredicateKey& k) const;
};

/// `extra` adds isolated nodes (e.g. declared predicates without clauses).
CallGraph build_call_graph(const std::vector<Clause>& clauses,
                           const std::vector<PredicateKey>& extra = {});

/// Strongly connected components in reverse topological order (every edge
/// leaving a component points to one listed earlier).
std::vector<std::vector<std::size_t>> strongly_connected_components(const CallGraph& g);

class LevelMap {
public:
    std::uint32_t level(const PredicateKey& k) const;
    std::uint32_t scc(const PredicateKey& k) const;
    bool contains(const PredicateKey& k) const { return levels_.count(k) != 0; }

    void set(const PredicateKey& k, std::uint32_t level, std::uint32_t scc) {
        levels_[k] = level;
        sccs_[k] = scc;
    }

private:
    std::unordered_map<PredicateKey, std::uint32_t, PredicateKeyHash> levels_;
    std::unordered_map<PredicateKey, std::uint32_t, PredicateKeyHash> sccs_;
};

/// Level of a component = length of the longest path from it to a sink of
/// the condensation.
LevelMap level_mapping(const CallGraph& g);

enum class CallKind : std::uint8_t { TabledLastDepending, Tabled, NonTabled };

std::string_view to_string(CallKind k);

struct AnnotatedRule {
    Clause clause;
    std::size_t index = 0;  // global, source order
    bool tabled_head = false;
    std::optional<std::size_t> last_depending_index;
    bool base_rule = false;
    std::vector<CallKind> body_call_kinds;
};

struct PredicateInfo {
    PredicateKey key;
    bool tabled = false;
    std::optional<Strategy> strategy;  // unset: engine default
    std::vector<std::size_t> rules;    // indices into AnnotatedProgram::rules()
};

/// Principal symbol of a first argument, used for clause selection.
struct FirstArgKey {
    std::uint8_t kind = 0;
    std::int64_t value = 0;
    std::size_t arity = 0;
    friend bool operator==(const FirstArgKey&, const FirstArgKey&) = default;
};

struct FirstArgKeyHash {
    std::size_t operator()(const FirstArgKey& k) const {
        return std::hash<std::int64_t>{}(k.value) * 31 + k.kind * 7 + k.arity;
    }
};

/// Returns nullopt for an unbound variable.
std::optional<FirstArgKey> first_arg_key(const Term& t);

class AnnotatedProgram {
public:
    const std::vector<AnnotatedRule>& rules() const { return rules_; }
    const std::vector<PredicateKey>& predicates() const { return order_; }
    const LevelMap& levels() const { return levels_; }

    /// nullptr when the predicate has neither clauses nor a declaration.
    const PredicateInfo* find(const PredicateKey& k) const;
    bool is_tabled(const PredicateKey& k) const;

    /// Rule indices (ascending) that can match a call whose first argument
    /// has the given principal symbol. nullopt selects every rule.
    const std::vector<std::size_t>& candidates(const PredicateKey& k,
                                               const std::optional<FirstArgKey>& first) const;

private:
    friend AnnotatedProgram annotate(const std::vector<Clause>&, const std::vector<TableDeclaration>&,
                                     const LevelMap&);

    struct ClauseIndex {
        std::unordered_map<FirstArgKey, std::vector<std::size_t>, FirstArgKeyHash> by_key;
        std::vector<std::size_t> var_first;
    };

    void build_indexes();

    std::vector<AnnotatedRule> rules_;
    std::vector<PredicateKey> order_;
    std::unordered_map<PredicateKey, PredicateInfo, PredicateKeyHash> info_;
    std::unordered_map<PredicateKey, ClauseIndex, PredicateKeyHash> index_;
    LevelMap levels_;
};

/// Duplicate declarations are idempotent; a later explicit strategy wins.
AnnotatedProgram annotate(const std::vector<Clause>& clauses,
                          const std::vector<TableDeclaration>& declarations, const LevelMap& levels);

/// parse_program + call graph + level mapping + annotate.
AnnotatedProgram load_program(std::string_view text);

/// `name/arity level=N` per predicate, then `rule#k last_depending=i|none base=bool`.
std::string analysis_report(const AnnotatedProgram& program);

}  // namespace ltab
