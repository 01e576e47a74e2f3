#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mechlab/constants.hpp"
#include "mechlab/rational.hpp"
#include "mechlab/slice.hpp"

namespace mechlab::slicelab {

/// Result of bisecting a task's allocation boundary. Interval: psi lies in
/// [lo, hi] with hi - lo <= tol. AlwaysT / NeverT: the probed task stays
/// with / away from the t-player across the whole window (the boundary is
/// censored by the window, or absent). NotThreshold: the allocation is not
/// threshold-like along the probed segment, a monotonicity suspect.
struct PsiEstimate {
  enum class Kind { Interval, AlwaysT, NeverT, NotThreshold };
  Kind kind = Kind::Interval;
  Rational lo;
  Rational hi;

  bool is_interval() const { return kind == Kind::Interval; }
  Rational mid() const { return (lo + hi) / 2; }
};

struct BisectOptions {
  Rational tol = make_rational(1, 1000000);
  /// Probes avoid the 0 border; nothing below this value is ever queried.
  Rational probe_min = make_rational(1, 2000000);
  /// Explicit probe ceiling; when absent, 4 * max(s_task, 1).
  std::optional<Rational> t_max;
  /// Extra monotonicity probes on each side after bisection.
  int verify_points = 4;
};

/// Bisection estimate of psi for `task` (1 or 2) with the sibling's t-value
/// and both s-values frozen.
PsiEstimate boundary_psi(const Slice2x2& slice, int task, const Rational& t_other,
                         const Rational& s1, const Rational& s2, const BisectOptions& options = {});

enum class ShapeClass { QuasiBundling, QuasiFlipping, Crossing, Undecided };

struct ShapeResult {
  ShapeClass cls = ShapeClass::Undecided;
  /// Midpoints of grid edges witnessing the R12/R_empty (bundling) or
  /// R1/R2 (flipping) adjacency.
  std::vector<std::pair<Rational, Rational>> witnesses;
  std::string note;
};

/// Samples a grid x grid window of (t1, t2) at fixed s and reconstructs the
/// region shape: two or more bundling adjacencies -> QuasiBundling, two or
/// more flipping adjacencies -> QuasiFlipping, neither -> Crossing,
/// conflicting or single adjacencies -> Undecided ("refine grid").
ShapeResult shape_classify(const Slice2x2& slice, const Rational& s1, const Rational& s2,
                           int grid = 64, const BisectOptions& options = {});

/// Least-maximum-deviation line through the interval midpoints of boundary
/// samples, reported as psi(s) = max(0, lambda*s - gamma). Samples at the
/// probe floor are clamped (excluded, truncated flag set); censored samples
/// are ignored.
struct BoundaryFit {
  Rational lambda;
  Rational gamma;
  Rational residual;
  bool truncated = false;
};

BoundaryFit fit_linear_boundary(const std::vector<std::pair<Rational, PsiEstimate>>& samples);

enum class MechanismClass {
  Constant,
  OneDimensional,
  TaskIndependent,
  RelaxedTaskIndependent,
  AffineMinimizer,
  RelaxedAffineMinimizer,
  Unknown,
};

std::string class_name(MechanismClass cls);

struct ContextFit {
  Rational t_other;
  Rational s_other;
  int task = 1;
  BoundaryFit fit;
  bool linear = false;
};

/// Everything the classifier saw, serializable for the evidence bundle.
struct ClassifyEvidence {
  int probes_used = 0;
  std::vector<std::string> realized_labels;
  int independence_failures = 0;
  bool isolated_failures_vanish = false;
  std::vector<ContextFit> fits;
  std::optional<Rational> tail_s_estimate;  // empirical D_s, evidence only
  std::vector<std::pair<Rational, Rational>> zeta_samples;
  std::vector<std::string> notes;
  std::optional<Rational> fitted_lambda;
  std::optional<Rational> lemma3_ratio_bound;  // diagnostic, see ratio_probe_from_lambda
};

struct ClassifyResult {
  MechanismClass cls = MechanismClass::Unknown;
  ClassifyEvidence evidence;
};

struct ClassifyOptions {
  int probe_budget = 10000;
  Rational tol = make_rational(1, 1000000);
  Rational probe_min = make_rational(1, 2000000);
  Rational s_max = Rational(2);
  int contexts = 6;
  int fit_samples = 6;
  std::uint64_t seed = 1;
  /// Extra s-anchors for the independence test (lets callers aim at
  /// suspected singular points of relaxed task independent mechanisms).
  std::vector<Rational> anchor_s;
  /// Optional constants profile; enables the Lemma-3-style ratio diagnostic
  /// attached to affine-minimizer evidence.
  std::optional<ConstantsProfile> consts;
};

/// Decision procedure with fixed precedence: Constant -> OneDimensional ->
/// TaskIndependent -> AffineMinimizer -> RelaxedAffineMinimizer ->
/// RelaxedTaskIndependent -> Unknown. Classes overlap (VCG is both task
/// independent and an affine minimizer), so a deterministic report requires
/// this order; Unknown is an honest first-class outcome.
ClassifyResult classify_2x2(const Slice2x2& slice, const ClassifyOptions& options = {});

std::string evidence_json(const ClassifyResult& result);

struct LipschitzResult {
  bool pass = true;
  Rational worst_ratio;  // max |psi delta| / |t delta| observed
  std::optional<std::pair<Rational, Rational>> witness;  // offending t_other pair
};

/// Checks |psi_r(t_other) - psi_r(t_other')| <= |t_other - t_other'| + 2 tol
/// over all probe pairs (the 1-Lipschitz property of boundaries of weakly
/// monotone allocations).
LipschitzResult lipschitz_probe(const Slice2x2& slice, int task, const Rational& s1,
                                const Rational& s2, const std::vector<Rational>& t_other_probes,
                                const BisectOptions& options = {});

/// The implied ratio lower bound 1 + max(lambda, 1/lambda) - delta' for a
/// fitted linear boundary; nullopt when the psi(1) > 0 premise fails.
std::optional<Rational> ratio_probe_from_lambda(const BoundaryFit& fit,
                                                const ConstantsProfile& consts);

}  // namespace mechlab::slicelab
