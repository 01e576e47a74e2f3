#include "mechlab/clustered.hpp"

#include <utility>

#include "mechlab/errors.hpp"

namespace mechlab {

ClusteredInstance::ClusteredInstance(int n, int ell,
                                     std::vector<std::vector<TaskValue>> clusters,
                                     std::vector<Rational> dummies, Rational theta,
                                     Rational big_b, const Rational& safety_factor)
    : n_(n),
      ell_(ell),
      clusters_(std::move(clusters)),
      dummies_(std::move(dummies)),
      theta_(std::move(theta)),
      big_b_(std::move(big_b)) {
  if (n_ < 2) throw ContractError("ClusteredInstance requires n >= 2");
  if (ell_ < 0) throw ContractError("ClusteredInstance requires ell >= 0");
  if (static_cast<int>(clusters_.size()) != n_ - 1)
    throw ContractError("ClusteredInstance requires exactly n-1 clusters");
  if (static_cast<int>(dummies_.size()) != n_)
    throw ContractError("ClusteredInstance requires exactly n dummy tasks");
  if (sgn(big_b_) <= 0) throw ContractError("B must be positive");
  // Theta must dominate every plausible non-Theta load: Theta/((ell+1)B) > n,
  // enforced with a safety factor.
  if (theta_ <= safety_factor * Rational(n_) * Rational(ell_ + 1) * big_b_)
    throw ContractError("Theta too small: requires Theta/((ell+1)*B) > n * safety_factor");
  for (const auto& cluster : clusters_) {
    if (static_cast<int>(cluster.size()) != ell_ + 1)
      throw ContractError("every cluster must have exactly ell+1 tasks");
    for (const auto& tv : cluster) {
      if (sgn(tv.t) <= 0) throw ContractError("cluster task t-values must be positive");
      if (sgn(tv.s) <= 0 || tv.s >= big_b_)
        throw ContractError("cluster task s-values must lie in (0, B)");
    }
  }
  for (const auto& d : dummies_)
    if (sgn(d) < 0) throw ContractError("dummy own-values must be nonnegative");
}

ClusteredInstance ClusteredInstance::with_task(int cluster, int index, TaskValue value) const {
  if (cluster < 1 || cluster > n_ - 1) throw ContractError("cluster index out of range");
  if (index < 0 || index > ell_) throw ContractError("task index out of range");
  auto clusters = clusters_;
  clusters[cluster - 1][index] = std::move(value);
  return ClusteredInstance(n_, ell_, std::move(clusters), dummies_, theta_, big_b_);
}

ClusteredInstance ClusteredInstance::with_column(int column, TaskValue value) const {
  if (!is_cluster_column(column)) throw ContractError("column is not a cluster task");
  return with_task(cluster_of_column(column), index_in_cluster(column), std::move(value));
}

ClusteredInstance ClusteredInstance::with_dummy(int i, Rational value) const {
  if (i < 0 || i >= n_) throw ContractError("dummy index out of range");
  auto dummies = dummies_;
  dummies[i] = std::move(value);
  return ClusteredInstance(n_, ell_, clusters_, std::move(dummies), theta_, big_b_);
}

bool ClusteredInstance::operator==(const ClusteredInstance& o) const {
  if (n_ != o.n_ || ell_ != o.ell_ || theta_ != o.theta_ || big_b_ != o.big_b_) return false;
  if (dummies_ != o.dummies_) return false;
  for (std::size_t c = 0; c < clusters_.size(); ++c)
    for (std::size_t j = 0; j < clusters_[c].size(); ++j)
      if (clusters_[c][j].t != o.clusters_[c][j].t || clusters_[c][j].s != o.clusters_[c][j].s)
        return false;
  return true;
}

CostMatrix expand_clustered(const ClusteredInstance& ci) {
  const int n = ci.players();
  const int m = ci.total_tasks();
  std::vector<std::vector<Rational>> values(n, std::vector<Rational>(m, ci.theta()));
  for (int c = 1; c <= ci.cluster_count(); ++c) {
    for (int j = 0; j <= ci.ell(); ++j) {
      const int col = ci.task_column(c, j);
      values[0][col] = ci.task(c, j).t;
      values[c][col] = ci.task(c, j).s;
    }
  }
  for (int i = 0; i < n; ++i) values[i][ci.dummy_column(i)] = ci.dummy(i);
  return CostMatrix(n, m, std::move(values));
}

}  // namespace mechlab
