#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mechlab/clustered.hpp"
#include "mechlab/cost_matrix.hpp"
#include "mechlab/piecewise.hpp"
#include "mechlab/rational.hpp"

namespace mechlab::mech {

/// Rational extended with +/- infinity, for the additive constants of affine
/// minimizers. Infinities are explicit values, not magnitude sentinels.
class ExtRational {
 public:
  ExtRational() : kind_(Kind::Finite), value_(0) {}
  static ExtRational finite(Rational v) { return ExtRational(Kind::Finite, std::move(v)); }
  static ExtRational pos_inf() { return ExtRational(Kind::PosInf, Rational(0)); }
  static ExtRational neg_inf() { return ExtRational(Kind::NegInf, Rational(0)); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  const Rational& value() const { return value_; }

  /// this + finite rational (infinities absorb).
  ExtRational plus(const Rational& v) const {
    return is_finite() ? finite(value_ + v) : *this;
  }

  /// Total order with -inf < finite < +inf.
  int cmp(const ExtRational& o) const;
  bool operator<(const ExtRational& o) const { return cmp(o) < 0; }

  std::string to_string() const;
  static ExtRational parse(const std::string& text);

 private:
  enum class Kind { Finite, PosInf, NegInf };
  ExtRational(Kind k, Rational v) : kind_(k), value_(std::move(v)) {}
  Kind kind_;
  Rational value_;
};

/// Which tasks the t-player receives in a 2x2 allocation.
enum class AllocLabel { Both, Task1, Task2, None };

std::string label_name(AllocLabel label);
AllocLabel parse_label(const std::string& name);

/// 2x2 allocation as a matrix allocation: machine 0 is the t-player.
Allocation label_to_allocation(AllocLabel label);
AllocLabel allocation_to_label(const Allocation& alloc);

struct AffineMinimizerConfig2x2 {
  Rational lambda_prime{1};
  Rational lambda{1};
  ExtRational pi_both;   // pi_12
  ExtRational pi_task1;  // pi_1
  ExtRational pi_task2;  // pi_2
  ExtRational pi_none;   // pi_empty

  void validate() const;
};

using BoundaryTable = PiecewiseLinear;

struct RelaxedAffineMinimizerConfig2x2 {
  AffineMinimizerConfig2x2 base;
  Rational d_s;  // tail active only while s_1+s_2 < D_s
  Rational d_t;  // ... and t_1+t_2 < D_t
  PiecewiseLinear zeta;

  RelaxedAffineMinimizerConfig2x2(AffineMinimizerConfig2x2 base_cfg, Rational ds, Rational dt,
                                  PiecewiseLinear zeta_table);
};

enum class OneDimVariant { Bundling, Task1Only, Task2Only };

/// The 2x2 allocation rules of the taxonomy. Boundary points go to the
/// t-player (ties favor the larger set for the t-player, preference order
/// {1,2} > {1} > {2} > {}).
AllocLabel affine_minimizer_2x2_label(const Rational& t1, const Rational& t2, const Rational& s1,
                                      const Rational& s2, const AffineMinimizerConfig2x2& cfg);
AllocLabel relaxed_affine_minimizer_2x2_label(const Rational& t1, const Rational& t2,
                                              const Rational& s1, const Rational& s2,
                                              const RelaxedAffineMinimizerConfig2x2& cfg);
AllocLabel task_independent_2x2_label(const Rational& t1, const Rational& t2, const Rational& s1,
                                      const Rational& s2, const BoundaryTable& psi1,
                                      const BoundaryTable& psi2);
AllocLabel one_dimensional_2x2_label(const Rational& t1, const Rational& t2, const Rational& s1,
                                     const Rational& s2, OneDimVariant variant,
                                     const BoundaryTable& boundary);
AllocLabel constant_2x2_label(AllocLabel fixed);

/// Allocation-typed wrappers over the label rules.
Allocation affine_minimizer_2x2(const Rational& t1, const Rational& t2, const Rational& s1,
                                const Rational& s2, const AffineMinimizerConfig2x2& cfg);
Allocation relaxed_affine_minimizer_2x2(const Rational& t1, const Rational& t2, const Rational& s1,
                                        const Rational& s2,
                                        const RelaxedAffineMinimizerConfig2x2& cfg);
Allocation task_independent_2x2(const Rational& t1, const Rational& t2, const Rational& s1,
                                const Rational& s2, const BoundaryTable& psi1,
                                const BoundaryTable& psi2);
Allocation one_dimensional_2x2(const Rational& t1, const Rational& t2, const Rational& s1,
                               const Rational& s2, OneDimVariant variant,
                               const BoundaryTable& boundary);
Allocation constant_2x2(const Rational& t1, const Rational& t2, const Rational& s1,
                        const Rational& s2, AllocLabel fixed);

/// Greedy per-task argmin of each column; ties to the lowest machine index.
Allocation vcg_allocate(const CostMatrix& matrix);

/// Per-task argmax; ties to the lowest index. Deliberately non-monotone
/// control used by the monotonicity test suite.
Allocation max_cost_allocate(const CostMatrix& matrix);

/// sqrt(n-1)-weighted VCG on a clustered instance: cluster task j goes to
/// player 0 iff (n-1) t_j^2 <= s_j^2 (exact squared comparison; equality to
/// player 0), dummies always to their cheap player.
Allocation weighted_vcg_allocate(const ClusteredInstance& ci, int n_param);

struct MechanismInfo {
  std::string id;
  std::string name;
  std::string tie_break;
  bool truthful_verified = false;
  std::optional<int> fixed_n;
  std::optional<int> fixed_m;
  /// Present for welfare-minimizing (VCG-family) mechanisms: player 0's
  /// weight is sqrt(d), every other player's is 1.
  std::optional<unsigned long> vcg_weight_d;
};

/// A deterministic, total allocation rule under test.
class MechanismUnderTest {
 public:
  virtual ~MechanismUnderTest() = default;
  virtual Allocation allocate(const CostMatrix& matrix) const = 0;
  virtual const MechanismInfo& info() const = 0;
};

class VcgMechanism final : public MechanismUnderTest {
 public:
  VcgMechanism();
  Allocation allocate(const CostMatrix& matrix) const override { return vcg_allocate(matrix); }
  const MechanismInfo& info() const override { return info_; }

 private:
  MechanismInfo info_;
};

class WeightedVcgMechanism final : public MechanismUnderTest {
 public:
  explicit WeightedVcgMechanism(int n);
  Allocation allocate(const CostMatrix& matrix) const override;
  const MechanismInfo& info() const override { return info_; }

 private:
  int n_;
  MechanismInfo info_;
};

class MaxCostMechanism final : public MechanismUnderTest {
 public:
  MaxCostMechanism();
  Allocation allocate(const CostMatrix& matrix) const override {
    return max_cost_allocate(matrix);
  }
  const MechanismInfo& info() const override { return info_; }

 private:
  MechanismInfo info_;
};

class AffineMinimizer2x2Mechanism final : public MechanismUnderTest {
 public:
  explicit AffineMinimizer2x2Mechanism(AffineMinimizerConfig2x2 cfg);
  Allocation allocate(const CostMatrix& matrix) const override;
  const MechanismInfo& info() const override { return info_; }
  const AffineMinimizerConfig2x2& config() const { return cfg_; }

 private:
  AffineMinimizerConfig2x2 cfg_;
  MechanismInfo info_;
};

class RelaxedAffineMinimizer2x2Mechanism final : public MechanismUnderTest {
 public:
  explicit RelaxedAffineMinimizer2x2Mechanism(RelaxedAffineMinimizerConfig2x2 cfg);
  Allocation allocate(const CostMatrix& matrix) const override;
  const MechanismInfo& info() const override { return info_; }
  const RelaxedAffineMinimizerConfig2x2& config() const { return cfg_; }

 private:
  RelaxedAffineMinimizerConfig2x2 cfg_;
  MechanismInfo info_;
};

class TaskIndependent2x2Mechanism final : public MechanismUnderTest {
 public:
  TaskIndependent2x2Mechanism(BoundaryTable psi1, BoundaryTable psi2);
  Allocation allocate(const CostMatrix& matrix) const override;
  const MechanismInfo& info() const override { return info_; }

 private:
  BoundaryTable psi1_, psi2_;
  MechanismInfo info_;
};

class OneDimensional2x2Mechanism final : public MechanismUnderTest {
 public:
  OneDimensional2x2Mechanism(OneDimVariant variant, BoundaryTable boundary);
  Allocation allocate(const CostMatrix& matrix) const override;
  const MechanismInfo& info() const override { return info_; }

 private:
  OneDimVariant variant_;
  BoundaryTable boundary_;
  MechanismInfo info_;
};

class Constant2x2Mechanism final : public MechanismUnderTest {
 public:
  explicit Constant2x2Mechanism(AllocLabel label);
  Allocation allocate(const CostMatrix& matrix) const override;
  const MechanismInfo& info() const override { return info_; }

 private:
  AllocLabel label_;
  MechanismInfo info_;
};

/// Registry addressable by string id: "vcg", "wvcg", "affmin2",
/// "relaxed-affmin2", "taskind2", "onedim2", "const2", "maxcost".
/// config_json is the instance file's "mechanism" block (may be empty for
/// defaults); n is needed by "wvcg".
std::unique_ptr<MechanismUnderTest> make_mechanism(const std::string& id,
                                                   const std::string& config_json = "",
                                                   int n = 2);
std::vector<std::string> mechanism_ids();

/// (t1, t2, s1, s2) packed as the 2x2 matrix the 2x2 mechanisms consume.
CostMatrix pack_2x2(const Rational& t1, const Rational& t2, const Rational& s1,
                    const Rational& s2);

}  // namespace mechlab::mech
