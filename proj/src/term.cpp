#include "ltab/term.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace ltab {

namespace {

class SymbolTable {
public:
    SymbolTable() { intern("[]"); }

    Symbol intern(std::string_view name) {
        {
            std::shared_lock lock(mutex_);
            if (auto it = ids_.find(name); it != ids_.end()) return Symbol{it->second};
        }
        std::unique_lock lock(mutex_);
        if (auto it = ids_.find(name); it != ids_.end()) return Symbol{it->second};
        auto id = static_cast<std::uint32_t>(names_.size());
        names_.emplace_back(name);
        ids_.emplace(names_.back(), id);
        return Symbol{id};
    }

    const std::string& name(Symbol s) {
        std::shared_lock lock(mutex_);
        return names_.at(s.id);
    }

private:
    std::shared_mutex mutex_;
    std::deque<std::string> names_;  // stable addresses; keys below view into it
    std::unordered_map<std::string_view, std::uint32_t> ids_;
};

SymbolTable& symbols() {
    static SymbolTable table;
    return table;
}

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Symbol intern(std::string_view name) { return symbols().intern(name); }
const std::string& symbol_name(Symbol s) { return symbols().name(s); }

Term Term::variable(VarId id) {
    Term t;
    t.kind_ = TermKind::Variable;
    t.ground_ = false;
    t.value_ = id;
    return t;
}

Term Term::atom(Symbol name) {
    Term t;
    t.kind_ = TermKind::Atom;
    t.value_ = name.id;
    return t;
}

Term Term::integer(std::int64_t value) {
    Term t;
    t.kind_ = TermKind::Integer;
    t.value_ = value;
    return t;
}

Term Term::compound(Symbol functor, std::vector<Term> args) {
    if (args.empty()) return atom(functor);
    Term t;
    t.kind_ = TermKind::Compound;
    t.value_ = functor.id;
    bool ground = true;
    for (const auto& a : args) ground = ground && a.ground();
    t.ground_ = ground;
    t.args_ = std::make_shared<const std::vector<Term>>(std::move(args));
    return t;
}

bool operator==(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_ || a.value_ != b.value_) return false;
    if (a.kind_ != TermKind::Compound) return true;
    if (a.args_ == b.args_) return true;
    if (a.args_->size() != b.args_->size()) return false;
    for (std::size_t i = 0; i < a.args_->size(); ++i)
        if (!((*a.args_)[i] == (*b.args_)[i])) return false;
    return true;
}

std::size_t Term::hash() const {
    std::size_t h = mix(static_cast<std::size_t>(kind_), std::hash<std::int64_t>{}(value_));
    if (kind_ == TermKind::Compound)
        for (const auto& a : *args_) h = mix(h, a.hash());
    return h;
}

VarId var_span(const Term& t) {
    if (t.ground()) return 0;
    if (t.is_var()) return t.var_id() + 1;
    VarId m = 0;
    for (const auto& a : t.args()) m = std::max(m, var_span(a));
    return m;
}

Term offset_vars(const Term& t, VarId offset) {
    if (t.ground() || offset == 0) return t;
    if (t.is_var()) return Term::variable(t.var_id() + offset);
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back(offset_vars(a, offset));
    return Term::compound(t.symbol(), std::move(args));
}

}  // namespace ltab
