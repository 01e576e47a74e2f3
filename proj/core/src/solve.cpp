#include "mechlab/solve.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mechlab/errors.hpp"

namespace mechlab {

namespace {

struct BruteForceState {
  const CostMatrix& matrix;
  std::vector<Rational> loads;
  std::vector<int> current;
  std::optional<Rational> best;
  std::vector<int> best_assignment;

  explicit BruteForceState(const CostMatrix& m)
      : matrix(m), loads(m.machines(), Rational(0)), current(m.tasks(), 0) {}

  // Lexicographic DFS over assignment vectors. The first allocation attaining
  // the final optimum is the lexicographically smallest one, because updates
  // are strict and subtrees are pruned only when they cannot improve.
  void dfs(int task, const Rational& partial_max) {
    if (best && partial_max >= *best) return;
    if (task == matrix.tasks()) {
      best = partial_max;
      best_assignment = current;
      return;
    }
    for (int i = 0; i < matrix.machines(); ++i) {
      loads[i] += matrix.at(i, task);
      current[task] = i;
      dfs(task + 1, std::max(partial_max, loads[i]));
      loads[i] -= matrix.at(i, task);
    }
  }
};

}  // namespace

std::pair<Rational, Allocation> optimal_makespan(const CostMatrix& matrix,
                                                 const EnumerationBudget& budget) {
  Integer states;
  mpz_ui_pow_ui(states.get_mpz_t(), static_cast<unsigned long>(matrix.machines()),
                static_cast<unsigned long>(matrix.tasks()));
  if (states > Integer(static_cast<unsigned long>(budget.max_states)))
    throw BudgetError("instance too large for exact enumeration: n^m = " + states.get_str() +
                      " exceeds the budget of " + std::to_string(budget.max_states) +
                      " states");
  BruteForceState state(matrix);
  state.dfs(0, Rational(0));
  return {*state.best, Allocation(matrix.machines(), state.best_assignment)};
}

namespace {

// Minimal t-load that must go to player 0 from one cluster when the cluster
// player's load (including its dummy) may not exceed `cap`. Subsets are
// scanned in increasing mask order so ties resolve to the smallest mask.
struct ClusterSplit {
  Rational t_to_zero;
  unsigned long mask;  // tasks kept by the cluster player
};

std::optional<ClusterSplit> best_cluster_split(const std::vector<TaskValue>& cluster,
                                               const Rational& dummy, const Rational& cap) {
  if (dummy > cap) return std::nullopt;
  const int k = static_cast<int>(cluster.size());
  std::optional<ClusterSplit> best;
  for (unsigned long mask = 0; mask < (1UL << k); ++mask) {
    Rational s_load = dummy;
    Rational t_load = 0;
    for (int j = 0; j < k; ++j) {
      if (mask & (1UL << j))
        s_load += cluster[j].s;
      else
        t_load += cluster[j].t;
    }
    if (s_load > cap) continue;
    if (!best || t_load < best->t_to_zero) best = ClusterSplit{t_load, mask};
  }
  return best;
}

// Player-0 load when every s-player is capped at `cap`; nullopt = infeasible.
std::optional<Rational> zero_load_at_cap(const ClusteredInstance& ci, const Rational& cap) {
  Rational total = ci.dummy(0);
  for (int c = 1; c <= ci.cluster_count(); ++c) {
    auto split = best_cluster_split(ci.cluster(c), ci.dummy(c), cap);
    if (!split) return std::nullopt;
    total += split->t_to_zero;
  }
  return total;
}

Allocation build_allocation_at_cap(const ClusteredInstance& ci, const Rational& cap) {
  std::vector<int> assignment(ci.total_tasks(), 0);
  for (int c = 1; c <= ci.cluster_count(); ++c) {
    auto split = best_cluster_split(ci.cluster(c), ci.dummy(c), cap);
    if (!split) throw ContractError("internal: infeasible cap during reconstruction");
    for (int j = 0; j <= ci.ell(); ++j)
      assignment[ci.task_column(c, j)] = (split->mask & (1UL << j)) ? c : 0;
  }
  for (int i = 0; i < ci.players(); ++i) assignment[ci.dummy_column(i)] = i;
  return Allocation(ci.players(), assignment);
}

}  // namespace

std::pair<Rational, Allocation> optimal_makespan_clustered(const ClusteredInstance& ci,
                                                           const EnumerationBudget& budget) {
  const int per_cluster = ci.ell() + 1;
  if (per_cluster >= 63 ||
      (1ULL << per_cluster) > budget.max_states)
    throw BudgetError("cluster too large for subset enumeration: 2^(ell+1) exceeds the budget of " +
                      std::to_string(budget.max_states) + " states");

  // Candidate makespans: every realizable s-player load d_i + s(S). The
  // player-0 load as a function of the cap is a non-increasing step function
  // with breakpoints exactly at these candidates, so the optimum is
  // min(v*, zero_load(pred v*)) where v* is the smallest feasible candidate
  // with zero_load(v) <= v.
  std::vector<Rational> candidates;
  for (int c = 1; c <= ci.cluster_count(); ++c) {
    const auto& cluster = ci.cluster(c);
    for (unsigned long mask = 0; mask < (1UL << per_cluster); ++mask) {
      Rational load = ci.dummy(c);
      for (int j = 0; j < per_cluster; ++j)
        if (mask & (1UL << j)) load += cluster[j].s;
      candidates.push_back(load);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Binary search the crossover zero_load(v) <= v over the sorted candidates.
  // Feasibility (all dummies fit) and the load are both monotone in v.
  long lo = 0, hi = static_cast<long>(candidates.size()) - 1;
  long crossover = -1;
  while (lo <= hi) {
    const long mid = lo + (hi - lo) / 2;
    auto load = zero_load_at_cap(ci, candidates[mid]);
    if (load && *load <= candidates[mid]) {
      crossover = mid;
      hi = mid - 1;
    } else {
      lo = mid + 1;
    }
  }
  if (crossover < 0) {
    // Largest candidate is all tasks on their s-players; player 0 then only
    // carries d_0, so the crossover exists unless d_0 dominates everything,
    // in which case the all-to-s split is optimal anyway.
    const Rational& cap = candidates.back();
    auto alloc = build_allocation_at_cap(ci, cap);
    return {makespan(expand_clustered(ci), alloc), alloc};
  }

  const Rational v_star = candidates[crossover];
  Rational best_value = v_star;
  Rational best_cap = v_star;
  if (crossover > 0) {
    auto pred_load = zero_load_at_cap(ci, candidates[crossover - 1]);
    if (pred_load && *pred_load < best_value) {
      best_value = *pred_load;
      best_cap = candidates[crossover - 1];
    }
  }
  auto alloc = build_allocation_at_cap(ci, best_cap);
  const Rational value = makespan(expand_clustered(ci), alloc);
  return {value, alloc};
}

Rational approx_ratio(const CostMatrix& matrix, const Allocation& alloc,
                      const EnumerationBudget& budget) {
  const Rational mech = makespan(matrix, alloc);
  const Rational opt = optimal_makespan(matrix, budget).first;
  if (sgn(opt) == 0)
    throw DegenerateInstanceError("approximation ratio undefined: optimal makespan is 0");
  return mech / opt;
}

Rational approx_ratio_clustered(const ClusteredInstance& ci, const Allocation& alloc,
                                const EnumerationBudget& budget) {
  const Rational mech = makespan(expand_clustered(ci), alloc);
  const Rational opt = optimal_makespan_clustered(ci, budget).first;
  if (sgn(opt) == 0)
    throw DegenerateInstanceError("approximation ratio undefined: optimal makespan is 0");
  return mech / opt;
}

}  // namespace mechlab
