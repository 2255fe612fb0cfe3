#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ltab/analysis.hpp"
#include "ltab/stats.hpp"
#include "ltab/table.hpp"

namespace ltab {

struct EngineOptions {
    Strategy strategy = Strategy::Lazy;  // per-predicate declarations override
    bool semi_naive = true;
    bool early_promotion = true;
    bool dedup_solutions = false;
    std::optional<std::uint64_t> limit;
    std::uint64_t step_budget = 100'000'000;
    bool check_invariants = true;

    /// Throws OptionsError.
    void validate() const;
    std::string label() const;
};

struct Solution {
    std::string text;                                          // instantiated query
    std::vector<std::pair<std::string, std::string>> bindings;  // named query variables
};

/// One query evaluation. Solutions are produced on demand by next().
/// The program must outlive the run.
class Run {
public:
    Run(const AnnotatedProgram& program, const Query& query, EngineOptions options);
    ~Run();
    Run(Run&&) noexcept;
    Run& operator=(Run&&) noexcept;

    /// Next solution, or nullopt once the search space (or the limit) is
    /// exhausted. Throws ResourceError when the step budget runs out.
    std::optional<Solution> next();

    /// Drains the stream.
    std::vector<Solution> all();

    bool finished() const;
    /// Stats so far; final once finished().
    RunStats stats() const;
    const SubgoalTable& table() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Run solve(const AnnotatedProgram& program, const Query& query, EngineOptions options);

/// Convenience: parse the query text first.
Run solve(const AnnotatedProgram& program, std::string_view query, EngineOptions options);

}  // namespace ltab
