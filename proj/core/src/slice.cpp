#include "mechlab/slice.hpp"

#include <utility>

#include "mechlab/errors.hpp"

namespace mechlab::slicelab {

SliceSpec::SliceSpec(ClusteredInstance base_instance, int task_p, int task_p_prime)
    : base(std::move(base_instance)), p(task_p), p_prime(task_p_prime) {
  if (p == p_prime) throw ContractError("slice tasks must be distinct");
  if (!base.is_cluster_column(p) || !base.is_cluster_column(p_prime))
    throw ContractError("slice tasks must be cluster tasks, not dummies");
}

InducedSlice::InducedSlice(const mech::MechanismUnderTest& mech, SliceSpec spec)
    : mech_(mech), spec_(std::move(spec)) {}

mech::AllocLabel InducedSlice::allocate(const Rational& t1, const Rational& t2, const Rational& s1,
                                        const Rational& s2) const {
  const ClusteredInstance patched =
      spec_.base.with_column(spec_.p, TaskValue{t1, s1}).with_column(spec_.p_prime, TaskValue{t2, s2});
  const Allocation alloc = mech_.allocate(expand_clustered(patched));
  const bool a1 = alloc.machine_of(spec_.p) == 0;
  const bool a2 = alloc.machine_of(spec_.p_prime) == 0;
  if (a1 && a2) return mech::AllocLabel::Both;
  if (a1) return mech::AllocLabel::Task1;
  if (a2) return mech::AllocLabel::Task2;
  return mech::AllocLabel::None;
}

}  // namespace mechlab::slicelab
