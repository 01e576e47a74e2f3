#pragma once

#include <cstddef>
#include <vector>

#include "mechlab/rational.hpp"

namespace mechlab {

/// Full n x m matrix of nonnegative processing times: entry (i, j) is the
/// time machine i needs for task j. Immutable after construction.
class CostMatrix {
 public:
  CostMatrix(int n, int m, std::vector<std::vector<Rational>> values);

  int machines() const { return n_; }
  int tasks() const { return m_; }

  const Rational& at(int machine, int task) const { return values_[machine][task]; }
  const std::vector<Rational>& row(int machine) const { return values_[machine]; }

  /// Copy with machine i's row replaced (the unilateral deviation used by
  /// monotonicity checks).
  CostMatrix with_row(int machine, std::vector<Rational> new_row) const;

  /// Copy with a single entry replaced.
  CostMatrix with_entry(int machine, int task, Rational value) const;

  bool operator==(const CostMatrix& o) const {
    return n_ == o.n_ && m_ == o.m_ && values_ == o.values_;
  }

 private:
  int n_;
  int m_;
  std::vector<std::vector<Rational>> values_;
};

/// Assignment of every task to exactly one machine.
class Allocation {
 public:
  Allocation(int machines, std::vector<int> assignment);

  int machines() const { return n_; }
  int tasks() const { return static_cast<int>(assignment_.size()); }
  int machine_of(int task) const { return assignment_[task]; }
  const std::vector<int>& assignment() const { return assignment_; }

  /// Indicator a_ij.
  bool assigned(int machine, int task) const { return assignment_[task] == machine; }

  std::vector<int> tasks_of(int machine) const;

  bool operator==(const Allocation& o) const {
    return n_ == o.n_ && assignment_ == o.assignment_;
  }

 private:
  int n_;
  std::vector<int> assignment_;
};

/// Exact makespan of an allocation: max over machines of their total load.
Rational makespan(const CostMatrix& matrix, const Allocation& alloc);

/// Load of a single machine under an allocation.
Rational machine_load(const CostMatrix& matrix, const Allocation& alloc, int machine);

}  // namespace mechlab
