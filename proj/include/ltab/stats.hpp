#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ltab {

struct EntryRounds {
    std::string key;  // rendered canonical subgoal
    std::uint64_t rounds = 0;
    friend bool operator==(const EntryRounds&, const EntryRounds&) = default;
};

/// Counters gathered during one run. `round_counters` lists every tabled
/// entry in registration order.
struct RunStats {
    std::vector<EntryRounds> round_counters;
    std::uint64_t answers_produced = 0;
    std::uint64_t answers_consumed = 0;
    std::uint64_t clause_resolutions = 0;
    std::uint64_t undefined_calls = 0;
    std::uint64_t steps = 0;
    std::uint64_t cyclic_bindings = 0;  // occurs-check violations seen (audit only)
    std::uint64_t solutions = 0;

    std::uint64_t subgoal_count() const { return round_counters.size(); }
    std::uint64_t max_its() const;
    double ave_its() const;

    /// Flat `key=value` lines; per-entry counters as `round_counter[<key>]=N`.
    std::string to_kv() const;
    static RunStats from_kv(std::string_view text);

    std::string to_json() const;
    static RunStats from_json(std::string_view text);

    friend bool operator==(const RunStats&, const RunStats&) = default;
};

}  // namespace ltab
