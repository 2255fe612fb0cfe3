#include "ltab/generate.hpp"

#include <random>
#include <set>
#include <stdexcept>

namespace ltab {

std::string_view to_string(Shape s) {
    switch (s) {
        case Shape::Tcl: return "tcl";
        case Shape::Tcr: return "tcr";
        case Shape::Tcn: return "tcn";
        case Shape::Sg: return "sg";
    }
    return "?";
}

std::string_view to_string(GraphKind g) {
    switch (g) {
        case GraphKind::Chain: return "chain";
        case GraphKind::Cycle: return "cycle";
        case GraphKind::Random: return "random";
    }
    return "?";
}

Shape parse_shape(std::string_view name) {
    for (auto s : {Shape::Tcl, Shape::Tcr, Shape::Tcn, Shape::Sg})
        if (to_string(s) == name) return s;
    throw std::invalid_argument("unknown shape '" + std::string(name) + "'");
}

GraphKind parse_graph_kind(std::string_view name) {
    for (auto g : {GraphKind::Chain, GraphKind::Cycle, GraphKind::Random})
        if (to_string(g) == name) return g;
    throw std::invalid_argument("unknown graph kind '" + std::string(name) + "'");
}

std::vector<Edge> chain_edges(int n) {
    if (n < 2) throw std::invalid_argument("chain needs at least 2 nodes");
    std::vector<Edge> out;
    for (int i = 1; i < n; ++i) out.emplace_back(i, i + 1);
    return out;
}

std::vector<Edge> cycle_edges(int n) {
    if (n < 1) throw std::invalid_argument("cycle needs at least 1 node");
    std::vector<Edge> out;
    for (int i = 1; i < n; ++i) out.emplace_back(i, i + 1);
    out.emplace_back(n, 1);
    return out;
}

std::vector<Edge> random_edges(int n, int m, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random graph needs at least 2 nodes");
    if (m < 1) throw std::invalid_argument("random graph needs at least 1 edge");
    long long max_edges = static_cast<long long>(n) * (n - 1);
    if (m > max_edges) throw std::invalid_argument("too many edges for node count");
    std::mt19937_64 rng(seed);
    std::set<Edge> seen;
    std::vector<Edge> out;
    while (static_cast<int>(out.size()) < m) {
        int a = static_cast<int>(rng() % static_cast<std::uint64_t>(n)) + 1;
        int b = static_cast<int>(rng() % static_cast<std::uint64_t>(n)) + 1;
        if (a == b || !seen.insert({a, b}).second) continue;
        out.emplace_back(a, b);
    }
    return out;
}

std::string edge_facts(const std::vector<Edge>& edges, std::string_view relation) {
    std::string out;
    for (const auto& [a, b] : edges) {
        out += relation;
        out += '(' + std::to_string(a) + ',' + std::to_string(b) + ").\n";
    }
    return out;
}

std::string ab_string_facts(int n) {
    if (n < 0) throw std::invalid_argument("string length must be non-negative");
    std::string out;
    for (int i = 0; i < n; ++i)
        out += "c(" + std::to_string(i) + (i % 2 ? ",b," : ",a,") + std::to_string(i + 1) + ").\n";
    return out;
}

std::string regex_program(int n, bool via_nontabled_q) {
    std::string rules = via_nontabled_q ? ":- table p/2.\n"
                                          "p(X,Y) :- q(X,Z), c(Z,a,Y).\n"
                                          "p(X,Y) :- q(X,Z), c(Z,b,Y).\n"
                                          "p(X,X).\n"
                                          "q(X,Y) :- p(X,Y).\n"
                                        : ":- table p/2.\n"
                                          "p(X,Y) :- p(X,Z), c(Z,a,Y).\n"
                                          "p(X,Y) :- p(X,Z), c(Z,b,Y).\n"
                                          "p(X,X).\n";
    return rules + ab_string_facts(n);
}

std::string regex_query(int n) { return "p(0," + std::to_string(n) + ")"; }

std::string shape_rules(Shape s) {
    switch (s) {
        case Shape::Tcl:
            return ":- table tcl/2.\n"
                   "tcl(X,Y) :- edge(X,Y).\n"
                   "tcl(X,Y) :- tcl(X,Z), edge(Z,Y).\n";
        case Shape::Tcr:
            return ":- table tcr/2.\n"
                   "tcr(X,Y) :- edge(X,Y).\n"
                   "tcr(X,Y) :- edge(X,Z), tcr(Z,Y).\n";
        case Shape::Tcn:
            return ":- table tcn/2.\n"
                   "tcn(X,Y) :- edge(X,Y).\n"
                   "tcn(X,Y) :- tcn(X,Z), tcn(Z,Y).\n";
        case Shape::Sg:
            return ":- table sg/2.\n"
                   "sg(X,X) :- node(X).\n"
                   "sg(X,Y) :- edge(X,XX), sg(XX,YY), edge(Y,YY).\n";
    }
    return {};
}

Instance random_instance(std::uint64_t seed, Shape shape, GraphKind graph, int n, int m) {
    std::vector<Edge> edges;
    switch (graph) {
        case GraphKind::Chain: edges = chain_edges(n); break;
        case GraphKind::Cycle: edges = cycle_edges(n); break;
        case GraphKind::Random: edges = random_edges(n, m, seed); break;
    }
    Instance inst;
    inst.program = shape_rules(shape) + edge_facts(edges, "edge");
    if (shape == Shape::Sg)
        for (int i = 1; i <= n; ++i) inst.program += "node(" + std::to_string(i) + ").\n";
    std::string name(to_string(shape));
    inst.query = name + (seed % 2 ? "(X,Y)" : "(1,Y)");
    inst.label = name + "/" + std::string(to_string(graph)) + "(" + std::to_string(n) +
                 (graph == GraphKind::Random ? "," + std::to_string(m) : "") + ")/seed=" + std::to_string(seed);
    return inst;
}

}  // namespace ltab
