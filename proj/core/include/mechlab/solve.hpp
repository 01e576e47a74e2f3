#pragma once

#include <cstdint>
#include <utility>

#include "mechlab/clustered.hpp"
#include "mechlab/cost_matrix.hpp"

namespace mechlab {

/// Explicit enumeration limits; enumeration never truncates silently.
struct EnumerationBudget {
  std::uint64_t max_states = 100000000;  // n^m cap for full brute force
};

/// Exact optimal makespan over all n^m allocations, with the witness chosen
/// as the lexicographically smallest assignment vector among minimizers.
/// Throws BudgetError when n^m exceeds the budget.
std::pair<Rational, Allocation> optimal_makespan(const CostMatrix& matrix,
                                                 const EnumerationBudget& budget = {});

/// Exact optimum over allocations that never touch a Theta entry (each
/// cluster task goes to player 0 or its own player, dummy d_i stays on player
/// i). Searches the candidate makespan values realizable as s-player loads;
/// the per-cluster subproblem (minimize the t-load shipped to player 0
/// subject to a cap on the cluster player's load) is solved by subset
/// enumeration. Equals optimal_makespan on the expanded matrix whenever the
/// non-Theta ranges dominate, i.e. on every instance within the documented
/// value ranges.
std::pair<Rational, Allocation> optimal_makespan_clustered(const ClusteredInstance& ci,
                                                           const EnumerationBudget& budget = {});

/// Exact makespan(alloc) / Opt. Throws DegenerateInstanceError when Opt == 0.
Rational approx_ratio(const CostMatrix& matrix, const Allocation& alloc,
                      const EnumerationBudget& budget = {});

/// Ratio against the clustered solver's optimum (for instances too large to
/// brute force).
Rational approx_ratio_clustered(const ClusteredInstance& ci, const Allocation& alloc,
                                const EnumerationBudget& budget = {});

}  // namespace mechlab
