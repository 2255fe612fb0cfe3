#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltab/canonical.hpp"
#include "ltab/program.hpp"

namespace ltab {

/// Append-only answer sequence with variant-based duplicate detection.
class AnswerList {
public:
    /// False (and no change) when a variant is already stored.
    bool insert(CanonicalTerm answer);
    bool contains(const CanonicalTerm& answer) const { return index_.count(answer) != 0; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const CanonicalTerm& operator[](std::size_t i) const { return items_[i]; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

private:
    std::vector<CanonicalTerm> items_;
    std::unordered_map<CanonicalTerm, std::size_t, CanonicalHash> index_;
};

/// Region boundaries as answer counts: old = [0, last_old),
/// previous = [last_old, last_prev), current = [last_prev, size).
struct RegionMarkers {
    std::size_t last_old = 0;
    std::size_t last_prev = 0;
};

struct SubgoalEntry;

/// (root entry, root round) at the time an entry was resolved by rules.
struct EvalStamp {
    const SubgoalEntry* root = nullptr;
    std::uint64_t round = 0;
    friend bool operator==(const EvalStamp&, const EvalStamp&) = default;
};

struct SubgoalEntry {
    CanonicalTerm key;
    PredicateKey predicate;
    std::size_t id = 0;  // registration order

    AnswerList answers;
    RegionMarkers markers;

    bool complete = false;
    bool evaluated = false;
    bool looping = false;
    bool revised = false;
    bool promoted_this_round = false;

    SubgoalEntry* topmost = nullptr;          // union-find parent; nullptr on a root
    std::vector<SubgoalEntry*> dependents;    // kept on cluster roots only
    std::uint64_t round_counter = 0;

    // Live pioneer bookkeeping; the slot indexes the engine's active stack.
    std::ptrdiff_t active_slot = -1;
    bool pioneer_active() const { return active_slot >= 0; }

    std::uint64_t last_insert_seq = 0;
    std::uint64_t round_start_seq = 0;  // meaningful on roots
    EvalStamp last_eval;
    EvalStamp prev_eval;
    bool tainted = false;

    SubgoalEntry(CanonicalTerm k, std::size_t i)
        : key(std::move(k)), predicate(PredicateKey::of(key.term())), id(i) {}

    std::size_t old_count() const { return markers.last_old; }
    std::size_t previous_count() const { return markers.last_prev - markers.last_old; }
    std::size_t current_count() const { return answers.size() - markers.last_prev; }
};

enum class CursorMode : std::uint8_t { FromFirst, FromNew };

/// Sequential reader over an entry's answers. Answers appended after the
/// cursor was created are still yielded.
class AnswerCursor {
public:
    AnswerCursor() = default;
    AnswerCursor(const SubgoalEntry& entry, CursorMode mode);

    /// Position of the next answer, or nullopt when exhausted.
    std::optional<std::size_t> next();
    bool exhausted() const { return !entry_ || pos_ >= entry_->answers.size(); }
    void rewind() { pos_ = start_; }

    CursorMode mode() const { return mode_; }
    std::size_t start() const { return start_; }
    std::size_t position() const { return pos_; }

private:
    const SubgoalEntry* entry_ = nullptr;
    CursorMode mode_ = CursorMode::FromFirst;
    std::size_t start_ = 0;
    std::size_t pos_ = 0;
};

/// The subgoal table: one entry per variant class of tabled calls.
class SubgoalTable {
public:
    std::pair<SubgoalEntry*, bool> register_subgoal(const CanonicalTerm& key);
    std::pair<SubgoalEntry*, bool> register_subgoal(const Term& call) {
        return register_subgoal(canonicalize(call));
    }
    SubgoalEntry* find(const CanonicalTerm& key) const;

    /// Throws InternalError on a complete entry.
    bool insert_answer(SubgoalEntry& e, CanonicalTerm answer);
    bool insert_answer(SubgoalEntry& e, const Term& answer) { return insert_answer(e, canonicalize(answer)); }

    void promote_regions(SubgoalEntry& e);
    /// No-op when already promoted this round.
    void early_promote(SubgoalEntry& e);

    /// Completes the root and every dependent.
    void mark_complete(SubgoalEntry& top);

    static SubgoalEntry* root_of(SubgoalEntry* e);
    static const SubgoalEntry* root_of(const SubgoalEntry* e);

    AnswerCursor cursor(const SubgoalEntry& e, CursorMode mode) const { return AnswerCursor(e, mode); }

    std::size_t size() const { return entries_.size(); }
    std::size_t incomplete_count() const { return incomplete_; }
    std::uint64_t insert_seq() const { return seq_; }
    const std::deque<SubgoalEntry>& entries() const { return entries_; }
    std::deque<SubgoalEntry>& entries() { return entries_; }

    /// Region partition and duplicate-freedom over the whole store.
    /// Throws InternalError on violation.
    void check_invariants() const;

    /// One line per entry in registration order.
    std::string dump() const;

private:
    std::deque<SubgoalEntry> entries_;
    std::unordered_map<CanonicalTerm, SubgoalEntry*, CanonicalHash> index_;
    std::size_t incomplete_ = 0;
    std::uint64_t seq_ = 0;
};

}  // namespace ltab
