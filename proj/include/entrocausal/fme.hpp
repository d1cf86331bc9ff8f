#pragma once

#include "entrocausal/inequality_system.hpp"

#include <chrono>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace entrocausal {

struct EliminationBudget {
    std::size_t max_rows = 2'000'000;
    std::chrono::milliseconds wall_clock{0};  // zero: no limit
    bool lp_redundancy = true;                // false: syntactic filters only
    unsigned threads = 1;
};

struct EliminationStats {
    std::size_t substitutions = 0;
    std::size_t eliminations = 0;
    std::size_t peak_rows = 0;
    std::size_t combinations_skipped = 0;  // ancestry bound
    std::size_t lp_removed = 0;
};

// Raised when a budget runs out. The carried system lists the rows found so
// far that only involve kept columns: every one of them is valid for the
// projection, but the list may miss facets.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, InequalitySystem partial)
        : std::runtime_error(what), partial_(std::move(partial))
    {
    }
    const InequalitySystem& partial() const { return partial_; }
    static constexpr bool sound_only = true;

private:
    InequalitySystem partial_;
};

// Projects the solution set onto the kept columns (given by index, any order;
// output columns follow the input order).
InequalitySystem eliminate(const InequalitySystem& system, const std::vector<std::size_t>& keep,
                           const EliminationBudget& budget = {}, EliminationStats* stats = nullptr);

InequalitySystem eliminate(const InequalitySystem& system, const std::vector<std::string>& keep,
                           const EliminationBudget& budget = {}, EliminationStats* stats = nullptr);

// Drops inequality rows implied by the remaining rows (exact LP). Equalities
// are kept. The result is canonicalized.
InequalitySystem remove_redundant(const InequalitySystem& system, unsigned threads = 1,
                                  std::size_t* removed = nullptr);

// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace entrocausal
