#include "mechlab/cost_matrix.hpp"

#include <utility>

#include "mechlab/errors.hpp"

namespace mechlab {

CostMatrix::CostMatrix(int n, int m, std::vector<std::vector<Rational>> values)
    : n_(n), m_(m), values_(std::move(values)) {
  if (n_ < 2) throw ContractError("CostMatrix requires at least 2 machines");
  if (m_ < 1) throw ContractError("CostMatrix requires at least 1 task");
  if (static_cast<int>(values_.size()) != n_)
    throw ContractError("CostMatrix row count does not match machine count");
  for (const auto& row : values_) {
    if (static_cast<int>(row.size()) != m_)
      throw ContractError("CostMatrix column count does not match task count");
    for (const auto& v : row)
      if (sgn(v) < 0) throw ContractError("CostMatrix entries must be nonnegative");
  }
}

CostMatrix CostMatrix::with_row(int machine, std::vector<Rational> new_row) const {
  if (machine < 0 || machine >= n_) throw ContractError("machine index out of range");
  if (static_cast<int>(new_row.size()) != m_)
    throw ContractError("replacement row has wrong length");
  auto values = values_;
  values[machine] = std::move(new_row);
  return CostMatrix(n_, m_, std::move(values));
}

CostMatrix CostMatrix::with_entry(int machine, int task, Rational value) const {
  if (machine < 0 || machine >= n_) throw ContractError("machine index out of range");
  if (task < 0 || task >= m_) throw ContractError("task index out of range");
  auto values = values_;
  values[machine][task] = std::move(value);
  return CostMatrix(n_, m_, std::move(values));
}

Allocation::Allocation(int machines, std::vector<int> assignment)
    : n_(machines), assignment_(std::move(assignment)) {
  if (n_ < 1) throw ContractError("Allocation requires at least 1 machine");
  for (int machine : assignment_)
    if (machine < 0 || machine >= n_)
      throw ContractError("Allocation assigns a task to a machine out of range");
}

std::vector<int> Allocation::tasks_of(int machine) const {
  std::vector<int> out;
  for (int j = 0; j < tasks(); ++j)
    if (assignment_[j] == machine) out.push_back(j);
  return out;
}

Rational machine_load(const CostMatrix& matrix, const Allocation& alloc, int machine) {
  Rational load = 0;
  for (int j = 0; j < matrix.tasks(); ++j)
    if (alloc.machine_of(j) == machine) load += matrix.at(machine, j);
  return load;
}

Rational makespan(const CostMatrix& matrix, const Allocation& alloc) {
  if (alloc.tasks() != matrix.tasks() || alloc.machines() != matrix.machines())
    throw ContractError("allocation dimensions do not match matrix");
  std::vector<Rational> loads(matrix.machines(), Rational(0));
  for (int j = 0; j < matrix.tasks(); ++j)
    loads[alloc.machine_of(j)] += matrix.at(alloc.machine_of(j), j);
  Rational best = loads[0];
  for (int i = 1; i < matrix.machines(); ++i)
    if (loads[i] > best) best = loads[i];
  return best;
}

}  // namespace mechlab
