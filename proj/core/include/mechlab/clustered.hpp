#pragma once

#include <vector>

#include "mechlab/cost_matrix.hpp"
#include "mechlab/rational.hpp"

namespace mechlab {

/// A cluster task: cheap for player 0 (value t) and for the cluster's own
/// player (value s); every other player pays Theta.
struct TaskValue {
  Rational t;
  Rational s;
};

/// The restricted instance family: n players, n-1 clusters of ell+1 tasks
/// each (cluster i is associated with player i), plus n dummy tasks d_0 ..
/// d_{n-1}. Dummy d_i costs its own value on player i and Theta elsewhere;
/// d_0's cheap entry sits on player 0.
///
/// Columns in the expanded matrix: cluster 1 tasks, cluster 2 tasks, ...,
/// cluster n-1 tasks, then d_0 .. d_{n-1}.
class ClusteredInstance {
 public:
  ClusteredInstance(int n, int ell, std::vector<std::vector<TaskValue>> clusters,
                    std::vector<Rational> dummies, Rational theta, Rational big_b,
                    const Rational& safety_factor = Rational(1000));

  int players() const { return n_; }
  int ell() const { return ell_; }
  int tasks_per_cluster() const { return ell_ + 1; }
  int cluster_count() const { return n_ - 1; }
  int cluster_task_count() const { return (ell_ + 1) * (n_ - 1); }
  int total_tasks() const { return cluster_task_count() + n_; }

  const Rational& theta() const { return theta_; }
  const Rational& big_b() const { return big_b_; }

  /// Cluster index in [1, n-1].
  const std::vector<TaskValue>& cluster(int i) const { return clusters_[i - 1]; }
  const TaskValue& task(int cluster, int index) const { return clusters_[cluster - 1][index]; }
  const Rational& dummy(int i) const { return dummies_[i]; }

  /// Global column index of task `index` of cluster `cluster`.
  int task_column(int cluster, int index) const { return (cluster - 1) * (ell_ + 1) + index; }
  int dummy_column(int i) const { return cluster_task_count() + i; }
  bool is_cluster_column(int column) const { return column < cluster_task_count(); }
  int cluster_of_column(int column) const { return column / (ell_ + 1) + 1; }
  int index_in_cluster(int column) const { return column % (ell_ + 1); }
  bool siblings(int column_a, int column_b) const {
    return is_cluster_column(column_a) && is_cluster_column(column_b) &&
           cluster_of_column(column_a) == cluster_of_column(column_b);
  }
  const TaskValue& column_value(int column) const {
    return clusters_[cluster_of_column(column) - 1][index_in_cluster(column)];
  }

  /// Copies with one field changed; instances are immutable in place.
  ClusteredInstance with_task(int cluster, int index, TaskValue value) const;
  ClusteredInstance with_column(int column, TaskValue value) const;
  ClusteredInstance with_dummy(int i, Rational value) const;

  bool operator==(const ClusteredInstance& o) const;

 private:
  int n_;
  int ell_;
  std::vector<std::vector<TaskValue>> clusters_;
  std::vector<Rational> dummies_;
  Rational theta_;
  Rational big_b_;
};

/// Full matrix with Theta filled in, column order as documented on
/// ClusteredInstance.
CostMatrix expand_clustered(const ClusteredInstance& ci);

}  // namespace mechlab
