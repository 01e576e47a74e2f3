#pragma once

#include <memory>

#include "mechlab/clustered.hpp"
#include "mechlab/cost_matrix.hpp"
#include "mechlab/mechanisms.hpp"

namespace mechlab::slicelab {

/// Freezing every task of a clustered instance except two designates a 2x2
/// sub-mechanism in the four values (t_1, t_2, s_1, s_2) of the free pair.
/// For siblings this is a genuine 2-player mechanism; across clusters three
/// players are involved but the t-player's view is the same.
struct SliceSpec {
  ClusteredInstance base;
  int p;        // global column of the first task (cluster task)
  int p_prime;  // global column of the second task

  SliceSpec(ClusteredInstance base_instance, int task_p, int task_p_prime);
  bool siblings() const { return base.siblings(p, p_prime); }
};

/// A 2x2 allocation rule in slice coordinates: which of the two probed tasks
/// the t-player receives.
class Slice2x2 {
 public:
  virtual ~Slice2x2() = default;
  virtual mech::AllocLabel allocate(const Rational& t1, const Rational& t2, const Rational& s1,
                                    const Rational& s2) const = 0;
};

/// A native 2x2 mechanism viewed as a slice.
class MechanismSlice : public Slice2x2 {
 public:
  explicit MechanismSlice(const mech::MechanismUnderTest& mech) : mech_(mech) {}
  mech::AllocLabel allocate(const Rational& t1, const Rational& t2, const Rational& s1,
                            const Rational& s2) const override {
    return mech::allocation_to_label(mech_.allocate(mech::pack_2x2(t1, t2, s1, s2)));
  }

 private:
  const mech::MechanismUnderTest& mech_;
};

/// The slice a full mechanism induces on a clustered instance: patches the
/// two probed columns, expands, runs the mechanism, and reads back whether
/// the probed tasks went to player 0.
class InducedSlice : public Slice2x2 {
 public:
  InducedSlice(const mech::MechanismUnderTest& mech, SliceSpec spec);
  mech::AllocLabel allocate(const Rational& t1, const Rational& t2, const Rational& s1,
                            const Rational& s2) const override;

  const SliceSpec& spec() const { return spec_; }

 private:
  const mech::MechanismUnderTest& mech_;
  SliceSpec spec_;
};

}  // namespace mechlab::slicelab
