#include "ltab/table.hpp"

#include <unordered_set>

#include "ltab/errors.hpp"
#include "ltab/render.hpp"

namespace ltab {

bool AnswerList::insert(CanonicalTerm answer) {
    auto [it, inserted] = index_.try_emplace(answer, items_.size());
    if (!inserted) return false;
    items_.push_back(std::move(answer));
    return true;
}

AnswerCursor::AnswerCursor(const SubgoalEntry& entry, CursorMode mode)
    : entry_(&entry), mode_(mode), start_(mode == CursorMode::FromNew ? entry.markers.last_old : 0), pos_(start_) {}

std::optional<std::size_t> AnswerCursor::next() {
    if (exhausted()) return std::nullopt;
    return pos_++;
}

std::pair<SubgoalEntry*, bool> SubgoalTable::register_subgoal(const CanonicalTerm& key) {
    if (auto it = index_.find(key); it != index_.end()) return {it->second, false};
    SubgoalEntry& e = entries_.emplace_back(key, entries_.size());
    index_.emplace(key, &e);
    ++incomplete_;
    return {&e, true};
}

SubgoalEntry* SubgoalTable::find(const CanonicalTerm& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : it->second;
}

bool SubgoalTable::insert_answer(SubgoalEntry& e, CanonicalTerm answer) {
    if (e.complete) throw InternalError("answer inserted into complete entry " + render(e.key.term()));
    if (!e.answers.insert(std::move(answer))) return false;
    e.revised = true;
    e.last_insert_seq = ++seq_;
    return true;
}

void SubgoalTable::promote_regions(SubgoalEntry& e) {
    e.markers.last_old = e.markers.last_prev;
    e.markers.last_prev = e.answers.size();
    e.promoted_this_round = false;
}

void SubgoalTable::early_promote(SubgoalEntry& e) {
    if (e.promoted_this_round) return;
    e.markers.last_prev = e.answers.size();
    e.promoted_this_round = true;
}

void SubgoalTable::mark_complete(SubgoalEntry& top) {
    auto finish = [this](SubgoalEntry& e) {
        if (e.complete) return;
        e.complete = true;
        e.evaluated = false;
        --incomplete_;
    };
    finish(top);
    for (auto* d : top.dependents) finish(*d);
}

SubgoalEntry* SubgoalTable::root_of(SubgoalEntry* e) {
    SubgoalEntry* r = e;
    while (r->topmost) r = r->topmost;
    while (e->topmost && e->topmost != r) {
        SubgoalEntry* next = e->topmost;
        e->topmost = r;
        e = next;
    }
    return r;
}

const SubgoalEntry* SubgoalTable::root_of(const SubgoalEntry* e) {
    while (e->topmost) e = e->topmost;
    return e;
}

void SubgoalTable::check_invariants() const {
    for (const auto& e : entries_) {
        const auto& m = e.markers;
        if (!(m.last_old <= m.last_prev && m.last_prev <= e.answers.size()))
            throw InternalError("region markers out of order for " + render(e.key.term()));
        std::unordered_set<CanonicalTerm, CanonicalHash> seen;
        for (const auto& a : e.answers)
            if (!seen.insert(a).second)
                throw InternalError("variant duplicate answer in " + render(e.key.term()));
    }
}

std::string SubgoalTable::dump() const {
    std::string out;
    for (const auto& e : entries_) {
        out += render(e.key.term());
        out += "  state=";
        out += e.complete ? "complete" : "incomplete";
        out += " answers=[";
        bool first = true;
        for (const auto& a : e.answers) {
            if (!first) out += ',';
            first = false;
            out += render(a.term());
        }
        out += "] old=" + std::to_string(e.old_count()) + " prev=" + std::to_string(e.previous_count()) + '\n';
    }
    return out;
}

}  // namespace ltab
