#include "ltab/analysis.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "ltab/errors.hpp"

namespace ltab {

std::size_t CallGraph::add_node(const PredicateKey& k) {
    auto [it, inserted] = index.try_emplace(k, nodes.size());
    if (inserted) {
        nodes.push_back(k);
        edges.emplace_back();
    }
    return it->second;
}

std::optional<std::size_t> CallGraph::find(const PredicateKey& k) const {
    auto it = index.find(k);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

CallGraph build_call_graph(const std::vector<Clause>& clauses, const std::vector<PredicateKey>& extra) {
    CallGraph g;
    for (const auto& c : clauses) {
        std::size_t from = g.add_node(PredicateKey::of(c.head));
        for (const auto& b : c.body) {
            std::size_t to = g.add_node(PredicateKey::of(b));
            auto& out = g.edges[from];
            if (std::find(out.begin(), out.end(), to) == out.end()) out.push_back(to);
        }
    }
    for (const auto& k : extra) g.add_node(k);
    return g;
}

// Iterative Tarjan.
std::vector<std::vector<std::size_t>> strongly_connected_components(const CallGraph& g) {
    constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
    const std::size_t n = g.nodes.size();
    std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    std::size_t counter = 0;

    struct Visit {
        std::size_t node;
        std::size_t next_edge;
    };
    std::vector<Visit> work;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        work.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!work.empty()) {
            Visit& v = work.back();
            const auto& succ = g.edges[v.node];
            if (v.next_edge < succ.size()) {
                std::size_t w = succ[v.next_edge++];
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    work.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v.node] = std::min(low[v.node], index[w]);
                }
                continue;
            }
            std::size_t node = v.node;
            work.pop_back();
            if (!work.empty()) low[work.back().node] = std::min(low[work.back().node], low[node]);
            if (low[node] == index[node]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != node);
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
        }
    }
    return out;
}

std::uint32_t LevelMap::level(const PredicateKey& k) const {
    auto it = levels_.find(k);
    return it == levels_.end() ? 0 : it->second;
}

std::uint32_t LevelMap::scc(const PredicateKey& k) const {
    auto it = sccs_.find(k);
    if (it == sccs_.end()) throw InternalError("no component for " + k.str());
    return it->second;
}

LevelMap level_mapping(const CallGraph& g) {
    auto sccs = strongly_connected_components(g);
    std::vector<std::uint32_t> comp_of(g.nodes.size());
    for (std::uint32_t c = 0; c < sccs.size(); ++c)
        for (auto v : sccs[c]) comp_of[v] = c;
    std::vector<std::uint32_t> level(sccs.size(), 0);
    // Reverse topological order means successors are already final.
    for (std::uint32_t c = 0; c < sccs.size(); ++c) {
        for (auto v : sccs[c])
            for (auto w : g.edges[v])
                if (comp_of[w] != c) level[c] = std::max(level[c], level[comp_of[w]] + 1);
    }
    LevelMap m;
    for (std::size_t v = 0; v < g.nodes.size(); ++v) m.set(g.nodes[v], level[comp_of[v]], comp_of[v]);
    return m;
}

std::string_view to_string(CallKind k) {
    switch (k) {
        case CallKind::TabledLastDepending: return "tabled-last-depending";
        case CallKind::Tabled: return "tabled";
        case CallKind::NonTabled: return "nontabled";
    }
    return "?";
}

std::optional<FirstArgKey> first_arg_key(const Term& t) {
    switch (t.kind()) {
        case TermKind::Variable: return std::nullopt;
        case TermKind::Atom: return FirstArgKey{1, t.symbol().id, 0};
        case TermKind::Integer: return FirstArgKey{2, t.int_value(), 0};
        case TermKind::Compound: return FirstArgKey{3, t.symbol().id, t.arity()};
    }
    return std::nullopt;
}

const PredicateInfo* AnnotatedProgram::find(const PredicateKey& k) const {
    auto it = info_.find(k);
    return it == info_.end() ? nullptr : &it->second;
}

bool AnnotatedProgram::is_tabled(const PredicateKey& k) const {
    auto* p = find(k);
    return p && p->tabled;
}

const std::vector<std::size_t>& AnnotatedProgram::candidates(const PredicateKey& k,
                                                             const std::optional<FirstArgKey>& first) const {
    static const std::vector<std::size_t> none;
    auto pi = info_.find(k);
    if (pi == info_.end()) return none;
    if (!first || k.arity == 0) return pi->second.rules;
    const auto& ix = index_.at(k);
    auto it = ix.by_key.find(*first);
    return it == ix.by_key.end() ? ix.var_first : it->second;
}

void AnnotatedProgram::build_indexes() {
    for (const auto& [key, info] : info_) {
        if (key.arity == 0) continue;
        ClauseIndex ix;
        std::vector<FirstArgKey> keys;
        for (auto r : info.rules) {
            auto fk = first_arg_key(rules_[r].clause.head.arg(0));
            if (!fk) {
                ix.var_first.push_back(r);
            } else if (!ix.by_key.count(*fk)) {
                ix.by_key.emplace(*fk, std::vector<std::size_t>{});
                keys.push_back(*fk);
            }
        }
        // Each bucket keeps source order and includes the variable-headed rules.
        for (const auto& fk : keys) {
            auto& bucket = ix.by_key[fk];
            for (auto r : info.rules) {
                auto h = first_arg_key(rules_[r].clause.head.arg(0));
                if (!h || *h == fk) bucket.push_back(r);
            }
        }
        index_.emplace(key, std::move(ix));
    }
}

AnnotatedProgram annotate(const std::vector<Clause>& clauses,
                          const std::vector<TableDeclaration>& declarations, const LevelMap& levels) {
    AnnotatedProgram p;
    p.levels_ = levels;
    auto touch = [&](const PredicateKey& k) -> PredicateInfo& {
        auto [it, inserted] = p.info_.try_emplace(k);
        if (inserted) it->second.key = k;
        return it->second;
    };
    auto note_order = [&](const PredicateKey& k) {
        if (std::find(p.order_.begin(), p.order_.end(), k) == p.order_.end()) p.order_.push_back(k);
    };
    for (const auto& c : clauses) {
        note_order(PredicateKey::of(c.head));
        for (const auto& b : c.body) note_order(PredicateKey::of(b));
    }
    for (const auto& d : declarations) {
        note_order(d.key);
        auto& info = touch(d.key);
        info.tabled = true;
        if (d.strategy) info.strategy = d.strategy;
    }
    auto tabled = [&](const PredicateKey& k) {
        auto it = p.info_.find(k);
        return it != p.info_.end() && it->second.tabled;
    };

    for (std::size_t i = 0; i < clauses.size(); ++i) {
        const Clause& c = clauses[i];
        PredicateKey head = PredicateKey::of(c.head);
        AnnotatedRule r;
        r.clause = c;
        r.index = i;
        r.tabled_head = tabled(head);
        r.body_call_kinds.reserve(c.body.size());
        for (const auto& b : c.body)
            r.body_call_kinds.push_back(tabled(PredicateKey::of(b)) ? CallKind::Tabled : CallKind::NonTabled);
        if (r.tabled_head) {
            std::uint32_t hl = levels.level(head);
            for (std::size_t k = c.body.size(); k-- > 0;) {
                if (levels.level(PredicateKey::of(c.body[k])) == hl) {
                    r.last_depending_index = k;
                    break;
                }
            }
            r.base_rule = !r.last_depending_index.has_value();
            if (r.last_depending_index && r.body_call_kinds[*r.last_depending_index] == CallKind::Tabled)
                r.body_call_kinds[*r.last_depending_index] = CallKind::TabledLastDepending;
        }
        touch(head).rules.push_back(i);
        p.rules_.push_back(std::move(r));
    }
    p.build_indexes();
    return p;
}

AnnotatedProgram load_program(std::string_view text) {
    std::vector<Clause> clauses;
    std::vector<TableDeclaration> decls;
    for (auto& item : parse_program(text)) {
        if (auto* c = std::get_if<Clause>(&item))
            clauses.push_back(std::move(*c));
        else
            decls.push_back(std::get<TableDeclaration>(item));
    }
    std::vector<PredicateKey> declared;
    for (const auto& d : decls) declared.push_back(d.key);
    CallGraph g = build_call_graph(clauses, declared);
    return annotate(clauses, decls, level_mapping(g));
}

std::string analysis_report(const AnnotatedProgram& program) {
    std::ostringstream out;
    for (const auto& k : program.predicates()) out << k.str() << " level=" << program.levels().level(k) << '\n';
    for (const auto& r : program.rules()) {
        out << "rule#" << r.index << " last_depending=";
        if (r.last_depending_index)
            out << *r.last_depending_index;
        else
            out << "none";
        out << " base=" << (r.base_rule ? "true" : "false") << '\n';
    }
    return out.str();
}

}  // namespace ltab
