#include "ltab/engine.hpp"

#include <unordered_set>

#include "ltab/errors.hpp"
#include "ltab/render.hpp"

namespace ltab {

void EngineOptions::validate() const {
    if (early_promotion && !semi_naive)
        throw OptionsError("early promotion requires semi-naive optimization");
    if (step_budget == 0) throw OptionsError("step budget must be positive");
}

std::string EngineOptions::label() const {
    std::string s(to_string(strategy));
    s += semi_naive ? "/semi" : "/nosemi";
    s += early_promotion ? "/ep" : "/noep";
    return s;
}

namespace {

/// One clause body instantiation. Tabled pioneer bodies carry their entry.
struct Activation {
    std::shared_ptr<Activation> parent;
    const AnnotatedRule* rule = nullptr;
    SubgoalEntry* tabled_entry = nullptr;
    Activation* owner = nullptr;  // nearest activation with a tabled_entry, possibly this
    bool consumed_new = false;

    ~Activation() {
        auto p = std::move(parent);
        while (p && p.use_count() == 1) {
            auto up = std::move(p->parent);
            p = std::move(up);
        }
    }
};
using ActPtr = std::shared_ptr<Activation>;

struct TabledFrame;

enum class GoalKind : std::uint8_t { Call, Memo };

struct Goal {
    GoalKind kind = GoalKind::Call;
    Term term;
    ActPtr act;
    std::size_t body_index = 0;
    std::shared_ptr<TabledFrame> frame;
    std::shared_ptr<const Goal> next;

    Goal(GoalKind k, Term t, ActPtr a, std::size_t i, std::shared_ptr<TabledFrame> f, std::shared_ptr<const Goal> n)
        : kind(k), term(std::move(t)), act(std::move(a)), body_index(i), frame(std::move(f)), next(std::move(n)) {}

    // Unlinks long continuations without recursing.
    ~Goal() {
        auto n = std::move(next);
        while (n && n.use_count() == 1) {
            auto tail = std::move(const_cast<Goal&>(*n).next);
            n = std::move(tail);
        }
    }
};
using GoalPtr = std::shared_ptr<const Goal>;

constexpr std::size_t kNoBodyIndex = static_cast<std::size_t>(-1);

enum class Phase : std::uint8_t { AnswersFirst, Clauses, Completion, Answers, Done };

struct TabledFrame {
    SubgoalEntry* entry = nullptr;
    Term call;
    GoalPtr cont;
    ActPtr caller;
    Strategy strategy = Strategy::Lazy;
    bool pioneer = false;
    Phase phase = Phase::Answers;
    AnswerCursor cursor;
    const std::vector<std::size_t>* candidates = nullptr;
    std::size_t next_rule = 0;
    bool skip_base = false;
};

struct ChoicePoint {
    enum class Kind : std::uint8_t { Clauses, Tabled } kind = Kind::Clauses;
    Bindings::Mark mark;
    std::size_t flag_mark = 0;
    Term goal;
    ActPtr act;
    GoalPtr cont;
    const std::vector<std::size_t>* candidates = nullptr;
    std::size_t next = 0;
    std::shared_ptr<TabledFrame> frame;
};

}  // namespace

struct Run::Impl {
    const AnnotatedProgram& prog;
    Query query;
    EngineOptions opts;
    Bindings b;
    SubgoalTable table;
    RunStats counters;
    std::vector<ChoicePoint> cps;
    std::vector<ActPtr> flag_trail;
    std::vector<SubgoalEntry*> active;
    GoalPtr goals;
    bool started = false;
    bool done = false;
    bool all_lazy = true;
    std::uint64_t emitted = 0;
    std::uint64_t audit_hops = 0;  // ancestor walks, charged to the step budget
    std::unordered_set<std::string> seen;

    Impl(const AnnotatedProgram& p, Query q, EngineOptions o) : prog(p), query(std::move(q)), opts(o) {
        opts.validate();
        b.set_occurs_audit(opts.check_invariants);
        all_lazy = opts.strategy == Strategy::Lazy;
        for (const auto& k : prog.predicates())
            if (auto* info = prog.find(k); info && info->tabled && info->strategy == Strategy::Eager)
                all_lazy = false;
        VarId base = b.fresh_block(query.var_count);
        auto root = std::make_shared<Activation>();
        for (std::size_t i = query.goals.size(); i-- > 0;)
            goals = std::make_shared<const Goal>(GoalKind::Call, offset_vars(query.goals[i], base), root,
                                                 kNoBodyIndex, nullptr, goals);
    }

    void tick() {
        if (++counters.steps + audit_hops > opts.step_budget)
            throw ResourceError("step budget of " + std::to_string(opts.step_budget) +
                                " exhausted (possible nontermination)");
    }

    // ---- driver ----

    std::optional<Solution> next() {
        if (done) return std::nullopt;
        if (opts.limit && emitted >= *opts.limit) return stop(false);
        if (!started) {
            started = true;
        } else if (!backtrack()) {
            return stop(true);
        }
        for (;;) {
            if (!goals) {
                Solution s = solution();
                if (opts.dedup_solutions && !seen.insert(s.text).second) {
                    if (!backtrack()) return stop(true);
                    continue;
                }
                ++emitted;
                ++counters.solutions;
                return s;
            }
            tick();
            GoalPtr g = goals;
            goals = g->next;
            bool ok = g->kind == GoalKind::Call ? call(*g) : memo(*g);
            if (!ok && !backtrack()) return stop(true);
        }
    }

    std::optional<Solution> stop(bool exhausted) {
        done = true;
        if (exhausted && opts.check_invariants) {
            table.check_invariants();
            if (table.incomplete_count() != 0 || !active.empty())
                throw InternalError("search exhausted with incomplete tabled subgoals");
        }
        return std::nullopt;
    }

    Solution solution() {
        if (opts.check_invariants && all_lazy && (table.incomplete_count() != 0 || !active.empty()))
            throw InternalError("lazy solution emitted while a looping subgoal is incomplete");
        Renderer r(b);
        Solution s;
        for (std::size_t i = 0; i < query.goals.size(); ++i) {
            if (i) s.text += ", ";
            r.append(s.text, query.goals[i]);
        }
        for (std::size_t v = 0; v < query.var_names.size(); ++v) {
            const auto& name = query.var_names[v];
            if (name.empty() || name[0] == '_') continue;
            s.bindings.emplace_back(name, r(Term::variable(static_cast<VarId>(v))));
        }
        return s;
    }

    bool backtrack() {
        while (!cps.empty()) {
            tick();
            std::size_t idx = cps.size() - 1;
            b.undo_to(cps[idx].mark);
            undo_flags(cps[idx].flag_mark);
            bool ok = cps[idx].kind == ChoicePoint::Kind::Clauses ? resume_clauses(idx) : resume_tabled(idx);
            if (ok) return true;
        }
        return false;
    }

    void undo_flags(std::size_t mark) {
        while (flag_trail.size() > mark) {
            flag_trail.back()->consumed_new = false;
            flag_trail.pop_back();
        }
    }

    // ---- resolution ----

    bool apply_clause(const AnnotatedRule& rule, const Term& call, const ActPtr& caller, const GoalPtr& cont,
                      const std::shared_ptr<TabledFrame>& frame) {
        ++counters.clause_resolutions;
        const Clause& c = rule.clause;
        VarId off = b.fresh_block(c.var_count);
        if (!unify(offset_vars(c.head, off), call, b)) return false;
        GoalPtr tail = frame ? std::make_shared<const Goal>(GoalKind::Memo, frame->call, nullptr, kNoBodyIndex, frame,
                                                            nullptr)
                             : cont;
        if (!c.body.empty()) {
            auto act = std::make_shared<Activation>();
            act->parent = caller;
            act->rule = &rule;
            if (frame) {
                act->tabled_entry = frame->entry;
                act->owner = act.get();
            } else {
                act->owner = caller ? caller->owner : nullptr;
            }
            for (std::size_t i = c.body.size(); i-- > 0;)
                tail = std::make_shared<const Goal>(GoalKind::Call, offset_vars(c.body[i], off), act, i, nullptr,
                                                    std::move(tail));
        }
        goals = std::move(tail);
        return true;
    }

    const std::vector<std::size_t>& candidates_for(const Term& call, const PredicateKey& k) const {
        std::optional<FirstArgKey> fk;
        if (k.arity > 0) fk = first_arg_key(b.deref(call.arg(0)));
        return prog.candidates(k, fk);
    }

    bool call(const Goal& g) {
        const Term& t = g.term;
        PredicateKey k = PredicateKey::of(t);
        const PredicateInfo* info = prog.find(k);
        if (!info) {
            ++counters.undefined_calls;
            return false;
        }
        if (info->tabled) return table_start(g, *info);
        const auto& cands = candidates_for(t, k);
        if (cands.empty()) return false;
        ChoicePoint cp;
        cp.kind = ChoicePoint::Kind::Clauses;
        cp.mark = b.mark();
        cp.flag_mark = flag_trail.size();
        cp.goal = t;
        cp.act = g.act;
        cp.cont = g.next;
        cp.candidates = &cands;
        cps.push_back(std::move(cp));
        return resume_clauses(cps.size() - 1);
    }

    bool resume_clauses(std::size_t idx) {
        const auto& cands = *cps[idx].candidates;
        for (std::size_t i = cps[idx].next; i < cands.size(); ++i) {
            ChoicePoint& cp = cps[idx];
            const AnnotatedRule& rule = prog.rules()[cands[i]];
            if (apply_clause(rule, cp.goal, cp.act, cp.cont, nullptr)) {
                cp.next = i + 1;
                if (cp.next == cands.size()) cps.pop_back();
                return true;
            }
            b.undo_to(cp.mark);
        }
        cps.pop_back();
        return false;
    }

    // ---- tabling ----

    std::uint32_t level(const SubgoalEntry& e) const { return prog.levels().level(e.predicate); }

    /// Parent-side conditions shared by the semi-naive cursor choice and
    /// base-rule skipping.
    bool reevaluation_safe(const SubgoalEntry* p) const {
        if (!opts.semi_naive || !p || p->tainted) return false;
        const SubgoalEntry* t = SubgoalTable::root_of(p);
        if (t->round_counter == 0) return false;
        if (!(p->prev_eval == EvalStamp{t, t->round_counter - 1})) return false;
        return level(*p) == level(*t);
    }

    CursorMode choose_mode(const Goal& g) const {
        const Activation* a = g.act.get();
        if (!opts.semi_naive || !a || !a->rule || !a->tabled_entry) return CursorMode::FromFirst;
        const auto& kinds = a->rule->body_call_kinds;
        if (g.body_index >= kinds.size() || kinds[g.body_index] != CallKind::TabledLastDepending)
            return CursorMode::FromFirst;
        if (a->consumed_new) return CursorMode::FromFirst;
        return reevaluation_safe(a->tabled_entry) ? CursorMode::FromNew : CursorMode::FromFirst;
    }

    void push_active(SubgoalEntry* e) {
        e->active_slot = static_cast<std::ptrdiff_t>(active.size());
        active.push_back(e);
    }

    void pop_active(SubgoalEntry* e) {
        if (active.empty() || active.back() != e) throw InternalError("active pioneer stack out of order");
        e->active_slot = -1;
        active.pop_back();
    }

    void begin_evaluation(TabledFrame& f) {
        SubgoalEntry* e = f.entry;
        ++e->round_counter;
        SubgoalEntry* t = SubgoalTable::root_of(e);
        if (t == e) e->round_start_seq = table.insert_seq();
        e->prev_eval = e->last_eval;
        e->last_eval = EvalStamp{t, t->round_counter};
        f.candidates = &candidates_for(f.call, e->predicate);
        f.next_rule = 0;
        f.skip_base = reevaluation_safe(e);
    }

    /// Lowest active slot whose pioneer is not an ancestor of g. Such a
    /// pioneer returned an answer that g's continuation is still running.
    std::size_t lowest_returned_slot(const Goal& g, const SubgoalEntry* e) {
        std::vector<char> ancestor(active.size(), 0);
        if (e->active_slot >= 0) ancestor[static_cast<std::size_t>(e->active_slot)] = 1;
        for (const Activation* a = g.act.get(); a; a = a->parent.get()) {
            ++audit_hops;
            if (a->tabled_entry && a->tabled_entry->active_slot >= 0)
                ancestor[static_cast<std::size_t>(a->tabled_entry->active_slot)] = 1;
        }
        for (std::size_t i = 0; i < active.size(); ++i)
            if (!ancestor[i]) return i;
        return active.size();
    }

    void join_cluster(const Goal& g, SubgoalEntry* e) {
        SubgoalEntry* r = SubgoalTable::root_of(e);
        if (!r->pioneer_active()) throw InternalError("cluster root of " + render(e->key.term()) + " is not active");
        auto pos = static_cast<std::size_t>(r->active_slot);
        if (!all_lazy) pos = std::min(pos, lowest_returned_slot(g, e));
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = pos; i < active.size(); ++i) {
                auto s = SubgoalTable::root_of(active[i])->active_slot;
                if (s < 0) throw InternalError("cluster root is not active");
                if (static_cast<std::size_t>(s) < pos) {
                    pos = static_cast<std::size_t>(s);
                    changed = true;
                }
            }
        }
        SubgoalEntry* top = active[pos];
        std::vector<SubgoalEntry*> roots;
        auto note_root = [&](SubgoalEntry* x) {
            SubgoalEntry* rx = SubgoalTable::root_of(x);
            for (auto* y : roots)
                if (y == rx) return;
            roots.push_back(rx);
        };
        note_root(e);
        for (std::size_t i = pos; i < active.size(); ++i) note_root(active[i]);
        for (auto* x : roots) {
            if (x == top) continue;
            x->topmost = top;
            top->dependents.push_back(x);
            top->dependents.insert(top->dependents.end(), x->dependents.begin(), x->dependents.end());
            x->dependents.clear();
        }
        if (top->topmost) {
            top->topmost = nullptr;
            std::erase(top->dependents, top);
        }
        e->looping = true;
        for (std::size_t i = pos; i < active.size(); ++i) active[i]->looping = true;
    }

    bool pioneer_is_ancestor(const Goal& g, const SubgoalEntry* e) {
        for (const Activation* a = g.act.get(); a; a = a->parent.get()) {
            if (a->tabled_entry == e) return true;
            ++audit_hops;
        }
        return false;
    }

    bool table_start(const Goal& g, const PredicateInfo& info) {
        auto [e, fresh] = table.register_subgoal(canonicalize(g.term, b));
        (void)fresh;
        auto f = std::make_shared<TabledFrame>();
        f->entry = e;
        f->call = g.term;
        f->cont = g.next;
        f->caller = g.act;
        f->strategy = info.strategy.value_or(opts.strategy);
        CursorMode mode = choose_mode(g);
        if (e->complete) {
            f->phase = Phase::Answers;
        } else if (e->pioneer_active()) {
            if (opts.check_invariants && all_lazy && !pioneer_is_ancestor(g, e))
                throw InternalError("lazy follower " + render(e->key.term()) + " has no ancestor pioneer");
            join_cluster(g, e);
            f->phase = Phase::Answers;
        } else if (e->evaluated) {
            join_cluster(g, e);
            f->phase = Phase::Answers;
        } else {
            f->pioneer = true;
            push_active(e);
            if (SubgoalTable::root_of(e) != e) join_cluster(g, e);
            begin_evaluation(*f);
            f->phase = f->strategy == Strategy::Eager ? Phase::AnswersFirst : Phase::Clauses;
        }
        f->cursor = AnswerCursor(*e, mode);
        ChoicePoint cp;
        cp.kind = ChoicePoint::Kind::Tabled;
        cp.mark = b.mark();
        cp.flag_mark = flag_trail.size();
        cp.frame = std::move(f);
        cps.push_back(std::move(cp));
        return resume_tabled(cps.size() - 1);
    }

    // A flagged activation already has its whole path up to the owner
    // flagged, so the walk can stop there.
    void set_consumed_new(ActPtr a, const Activation* owner) {
        if (!owner) return;
        for (; a && !a->consumed_new; a = a->parent) {
            a->consumed_new = true;
            flag_trail.push_back(a);
            if (a.get() == owner) break;
        }
    }

    void note_consumption(const ActPtr& caller, SubgoalEntry& e, bool is_new) {
        const Activation* owner = caller ? caller->owner : nullptr;
        if (is_new) set_consumed_new(caller, owner);
        if (!e.complete && owner && level(e) < level(*owner->tabled_entry)) owner->tabled_entry->tainted = true;
    }

    bool consume(TabledFrame& f, std::size_t pos, const Bindings::Mark& mark) {
        SubgoalEntry& e = *f.entry;
        const CanonicalTerm& a = e.answers[pos];
        Term t = a.var_count() ? offset_vars(a.term(), b.fresh_block(a.var_count())) : a.term();
        if (!unify(f.call, t, b)) {
            b.undo_to(mark);
            return false;
        }
        ++counters.answers_consumed;
        note_consumption(f.caller, e, !e.complete && pos >= e.markers.last_old);
        goals = f.cont;
        return true;
    }

    void check_completion(TabledFrame& f) {
        SubgoalEntry* e = f.entry;
        pop_active(e);
        const bool lazy = f.strategy == Strategy::Lazy;
        if (!e->looping) {
            table.mark_complete(*e);
            f.phase = lazy ? Phase::Answers : Phase::Done;
            return;
        }
        if (e->topmost) {
            e->evaluated = true;
            f.phase = lazy ? Phase::Answers : Phase::Done;
            return;
        }
        bool revised = e->last_insert_seq > e->round_start_seq;
        for (auto* d : e->dependents) revised = revised || d->last_insert_seq > e->round_start_seq;
        if (!revised) {
            table.mark_complete(*e);
            f.phase = lazy ? Phase::Answers : Phase::Done;
            return;
        }
        table.promote_regions(*e);
        e->revised = false;
        for (auto* d : e->dependents) {
            table.promote_regions(*d);
            d->evaluated = false;
            d->revised = false;
        }
        push_active(e);
        begin_evaluation(f);
        if (lazy) {
            f.phase = Phase::Clauses;
        } else {
            f.cursor.rewind();
            f.phase = Phase::AnswersFirst;
        }
    }

    bool resume_tabled(std::size_t idx) {
        std::shared_ptr<TabledFrame> fp = cps[idx].frame;
        TabledFrame& f = *fp;
        const Bindings::Mark mark = cps[idx].mark;
        for (;;) {
            switch (f.phase) {
                case Phase::AnswersFirst:
                case Phase::Answers: {
                    if (auto pos = f.cursor.next()) {
                        if (consume(f, *pos, mark)) return true;
                        continue;
                    }
                    // The eager pioneer's own answers-first pass never promotes.
                    if (opts.early_promotion && !f.entry->complete && f.phase == Phase::Answers)
                        table.early_promote(*f.entry);
                    if (f.phase == Phase::AnswersFirst) {
                        f.phase = Phase::Clauses;
                        continue;
                    }
                    f.phase = Phase::Done;
                    continue;
                }
                case Phase::Clauses: {
                    const auto& cands = *f.candidates;
                    while (f.next_rule < cands.size()) {
                        const AnnotatedRule& rule = prog.rules()[cands[f.next_rule++]];
                        if (f.skip_base && rule.base_rule) continue;
                        if (apply_clause(rule, f.call, f.caller, f.cont, fp)) return true;
                        b.undo_to(mark);
                    }
                    f.phase = Phase::Completion;
                    continue;
                }
                case Phase::Completion:
                    check_completion(f);
                    continue;
                case Phase::Done:
                    cps.pop_back();
                    return false;
            }
        }
    }

    bool memo(const Goal& g) {
        TabledFrame& f = *g.frame;
        SubgoalEntry& e = *f.entry;
        bool inserted = table.insert_answer(e, canonicalize(f.call, b));
        if (inserted) ++counters.answers_produced;
        if (f.strategy == Strategy::Lazy || !inserted) return false;
        ++counters.answers_consumed;
        note_consumption(f.caller, e, true);
        goals = f.cont;
        return true;
    }

    RunStats stats() const {
        RunStats s = counters;
        s.cyclic_bindings = b.cyclic_bindings();
        s.round_counters.clear();
        for (const auto& e : table.entries()) s.round_counters.push_back({render(e.key.term()), e.round_counter});
        return s;
    }
};

Run::Run(const AnnotatedProgram& program, const Query& query, EngineOptions options)
    : impl_(std::make_unique<Impl>(program, query, options)) {}
Run::~Run() = default;
Run::Run(Run&&) noexcept = default;
Run& Run::operator=(Run&&) noexcept = default;

std::optional<Solution> Run::next() { return impl_->next(); }

std::vector<Solution> Run::all() {
    std::vector<Solution> out;
    while (auto s = next()) out.push_back(std::move(*s));
    return out;
}

bool Run::finished() const { return impl_->done; }
RunStats Run::stats() const { return impl_->stats(); }
const SubgoalTable& Run::table() const { return impl_->table; }

Run solve(const AnnotatedProgram& program, const Query& query, EngineOptions options) {
    return Run(program, query, options);
}

Run solve(const AnnotatedProgram& program, std::string_view query, EngineOptions options) {
    return Run(program, parse_query(query), options);
}

}  // namespace ltab
