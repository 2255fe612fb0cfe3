#include "ltab/bindings.hpp"

#include <algorithm>
#include <utility>

#include "ltab/errors.hpp"

namespace ltab {

namespace {
constexpr std::size_t kMaxOccursVisits = 1u << 16;
}

VarId Bindings::fresh_block(VarId n) {
    VarId base = top_;
    top_ += n;
    if (values_.size() < top_) values_.resize(top_);
    return base;
}

void Bindings::bind(VarId v, Term t) {
    if (v >= values_.size()) {
        values_.resize(v + 1);
        top_ = std::max<VarId>(top_, v + 1);
    }
    if (values_[v].has_value()) throw InternalError("variable bound twice without rollback");
    if (audit_ && occurs(v, t)) ++cyclic_;
    values_[v] = std::move(t);
    trail_.push_back(v);
}

void Bindings::undo_to(Mark m) {
    while (trail_.size() > m.trail) {
        VarId v = trail_.back();
        trail_.pop_back();
        if (v < values_.size()) values_[v].reset();
    }
    if (m.top < top_) {
        top_ = m.top;
        values_.resize(top_);
    }
}

Term Bindings::deref(Term t) const {
    while (t.is_var() && is_bound(t.var_id())) t = value(t.var_id());
    return t;
}

Term Bindings::resolve(const Term& t) const {
    struct Walker {
        const Bindings& b;
        std::vector<VarId> path;  // bound variables being expanded
        Term operator()(const Term& in) {
            if (in.ground()) return in;
            if (in.is_var()) {
                VarId v = in.var_id();
                if (!b.is_bound(v)) return in;
                if (std::find(path.begin(), path.end(), v) != path.end())
                    throw InternalError("cyclic term (occurs-check is off)");
                path.push_back(v);
                Term r = (*this)(b.value(v));
                path.pop_back();
                return r;
            }
            std::vector<Term> args;
            args.reserve(in.arity());
            bool changed = false;
            for (const auto& a : in.args()) {
                args.push_back((*this)(a));
                changed = changed || !(args.back() == a);
            }
            if (!changed) return in;
            return Term::compound(in.symbol(), std::move(args));
        }
    };
    return Walker{*this, {}}(t);
}

bool Bindings::occurs(VarId v, const Term& t) const {
    std::vector<Term> stack{t};
    std::size_t visited = 0;
    while (!stack.empty()) {
        Term cur = deref(stack.back());
        stack.pop_back();
        if (++visited > kMaxOccursVisits) return true;
        if (cur.ground()) continue;
        if (cur.is_var()) {
            if (cur.var_id() == v) return true;
            continue;
        }
        for (const auto& a : cur.args()) stack.push_back(a);
    }
    return false;
}

bool operator==(const Bindings& a, const Bindings& b) {
    std::size_t n = std::max(a.values_.size(), b.values_.size());
    for (std::size_t i = 0; i < n; ++i) {
        bool ab = i < a.values_.size() && a.values_[i].has_value();
        bool bb = i < b.values_.size() && b.values_[i].has_value();
        if (ab != bb) return false;
        if (ab && !(*a.values_[i] == *b.values_[i])) return false;
    }
    return true;
}

bool unify(const Term& a, const Term& b, Bindings& bindings) {
    auto start = bindings.mark();
    std::vector<std::pair<Term, Term>> work{{a, b}};
    while (!work.empty()) {
        auto [x, y] = std::move(work.back());
        work.pop_back();
        x = bindings.deref(x);
        y = bindings.deref(y);
        if (x.is_var() && y.is_var() && x.var_id() == y.var_id()) continue;
        if (x.is_var()) {
            // Bind the younger variable to the older one to keep chains short.
            if (y.is_var() && y.var_id() > x.var_id())
                bindings.bind(y.var_id(), x);
            else
                bindings.bind(x.var_id(), y);
            continue;
        }
        if (y.is_var()) {
            bindings.bind(y.var_id(), x);
            continue;
        }
        if (x.kind() != y.kind() || x.int_value() != y.int_value() || x.arity() != y.arity()) {
            bindings.undo_to(Bindings::Mark{start.trail, bindings.top()});
            return false;
        }
        if (x.is_compound()) {
            if (x.ground() && y.ground()) {
                if (x == y) continue;
                bindings.undo_to(Bindings::Mark{start.trail, bindings.top()});
                return false;
            }
            for (std::size_t i = x.arity(); i-- > 0;) work.emplace_back(x.arg(i), y.arg(i));
        }
    }
    return true;
}

}  // namespace ltab
