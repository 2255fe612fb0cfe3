#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ltab {

enum class Shape : std::uint8_t { Tcl, Tcr, Tcn, Sg };
enum class GraphKind : std::uint8_t { Chain, Cycle, Random };

std::string_view to_string(Shape s);
std::string_view to_string(GraphKind g);
/// Throw std::invalid_argument on unknown names.
Shape parse_shape(std::string_view name);
GraphKind parse_graph_kind(std::string_view name);

using Edge = std::pair<int, int>;

/// Nodes are 1..n.
std::vector<Edge> chain_edges(int n);
std::vector<Edge> cycle_edges(int n);
/// m distinct non-loop edges, at least one, drawn from seed.
std::vector<Edge> random_edges(int n, int m, std::uint64_t seed);

std::string edge_facts(const std::vector<Edge>& edges, std::string_view relation);

/// c(0,a,1). c(1,b,2). ... for a string of length n.
std::string ab_string_facts(int n);

/// The regular-expression recognizer over ab_string_facts(n). With
/// `via_nontabled_q` the recursive calls go through a non-tabled q/2.
std::string regex_program(int n, bool via_nontabled_q);
std::string regex_query(int n);

/// Rules for one of the four graph programs (edge relation `edge`).
std::string shape_rules(Shape s);

struct Instance {
    std::string program;
    std::string query;
    std::string label;
};

/// Deterministic in (seed, shape, graph, n, m). Queries are open for odd
/// seeds and bind the first argument to node 1 for even seeds.
Instance random_instance(std::uint64_t seed, Shape shape, GraphKind graph, int n, int m);

}  // namespace ltab
