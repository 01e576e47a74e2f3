#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mechlab/clustered.hpp"
#include "mechlab/constants.hpp"
#include "mechlab/mechanisms.hpp"
#include "mechlab/solve.hpp"

namespace mechlab::lowerbound {

/// Per-task open intervals (t_j, t_j + theta_j), theta_j in (0, beta);
/// sampled values lie strictly inside.
struct PerturbationBox {
  std::vector<int> tasks;  // global columns
  std::vector<Rational> theta;
};

/// Values per trivial cluster of a standard instance. The default pattern is
/// one task at (delta, 1/2) and the rest at (beta, 1), which keeps the
/// stand-alone optimal cost of the cluster at delta + ell*beta <= delta'.
struct TrivialSpec {
  std::vector<TaskValue> tasks;
  static TrivialSpec default_for(const ConstantsProfile& consts);
};

/// Standard instance for a chosen set of clusters: their tasks all at
/// (beta, 1), every other cluster filled from the trivial spec, dummies at 0.
/// Each trivial cluster's stand-alone optimum is verified to be <= delta'.
ClusteredInstance make_standard_instance(int n, const ConstantsProfile& consts,
                                         const std::vector<int>& cluster_set,
                                         const TrivialSpec& trivial);
ClusteredInstance make_standard_instance(int n, const ConstantsProfile& consts,
                                         const std::vector<int>& cluster_set);

/// Stand-alone optimal cost of one cluster (no dummies), by subset
/// enumeration: min over splits of max(t-load on player 0, s-load kept).
Rational trivial_cluster_cost(const std::vector<TaskValue>& tasks);

/// Raises each task of the regular set P to t = alpha (its s-value is kept,
/// which is 1 for standard instances and 1-eps for the bad-task footnote
/// variants). P's clusters must be standard; applying twice is a no-op.
ClusteredInstance make_hat(const ClusteredInstance& instance, const std::vector<int>& tasks,
                           const ConstantsProfile& consts);

/// Deterministic samples strictly inside the box; sample 0 is the
/// near-supremum corner t_j + theta_j * (1 - 2^-20).
std::vector<ClusteredInstance> sample_box(const ClusteredInstance& hat_instance,
                                          const PerturbationBox& box, int count,
                                          std::uint64_t seed);

enum class GoodVerdict { Good, NotGood, Inconclusive };

struct GoodSetVerdict {
  std::vector<int> tasks;
  GoodVerdict verdict = GoodVerdict::Inconclusive;
  /// Good verdicts for truthful-verified mechanisms are certified by the box
  /// corner alone (monotonicity extends the corner to the whole box);
  /// otherwise the verdict is empirical.
  bool corner_certified = false;
  std::optional<PerturbationBox> witness;
  std::optional<ClusteredInstance> failing_sample;
  int sample_count = 0;
  /// Corner passed but an interior sample failed: for a truthful mechanism
  /// this is impossible, so it is cross-reported as a monotonicity suspect.
  bool wmon_suspect = false;
};

struct GoodSetOptions {
  int sample_count = 64;
  std::uint64_t seed = 1;
};

/// Does the mechanism keep every task of P on player 0 throughout the
/// default perturbation box above hat(T)(P)? Finite sampling semantics:
/// corner + (sample_count - 1) random interior points.
GoodSetVerdict is_good_set(const mech::MechanismUnderTest& mech, const ClusteredInstance& instance,
                           const std::vector<int>& tasks, const ConstantsProfile& consts,
                           const GoodSetOptions& options = {});

/// A self-contained, re-checkable lower-bound witness.
struct Certificate {
  enum class Kind { BadTask, GoodSet, DirectRatio };
  Kind kind;
  std::string mechanism_id;
  ClusteredInstance instance;  // post dummy-boost
  Allocation allocation;       // the mechanism's allocation on it
  Rational mech_makespan;
  Rational opt_makespan;
  Rational ratio;  // mech/opt, > 1
  std::string note;
};

std::string certificate_kind_name(Certificate::Kind kind);

/// Evaluates the mechanism on the instance and assembles a certificate;
/// nullopt if the ratio does not exceed 1.
std::optional<Certificate> evaluate_certificate(const mech::MechanismUnderTest& mech,
                                                const ClusteredInstance& instance,
                                                Certificate::Kind kind, const std::string& note);

/// Replays the stored allocation and re-solves Opt with the clustered
/// solver; true iff every stored field reproduces exactly.
bool recheck_certificate(const Certificate& cert);

std::string certificate_json(const Certificate& cert, const ConstantsProfile& consts,
                             std::uint64_t seed);
Certificate parse_certificate_json(const std::string& text);

/// Scans singleton sets over standard instances (s = 1 and the footnote
/// variants s = 1 - 2^-10, 1 - 2^-20); on a bad task, boosts dummy d_i to
/// alpha + (n-1) delta' and slightly lowers the bad task's s-value, then
/// certifies the exact ratio.
std::optional<Certificate> find_bad_task(const mech::MechanismUnderTest& mech, int n,
                                         const ConstantsProfile& consts, std::uint64_t seed);

struct PotentiallyGoodResult {
  bool potentially_good = false;
  bool inconclusive = false;  // empty witness intersection at finite sampling
  int checks_run = 0;
  int q_grid_checks = 0;
  std::optional<PerturbationBox> witness;
  std::vector<std::string> log;
};

/// Definition-10 style check: every P_{-i} good, and P_{-k} good under every
/// replacement of p_k by [t = delta, s = q delta / (2n)] for the full q grid.
/// The q = 0 grid point would put s on the excluded 0 border and is replaced
/// by s = delta/(4n) (logged).
PotentiallyGoodResult is_potentially_good(const mech::MechanismUnderTest& mech,
                                          const ClusteredInstance& instance,
                                          const std::vector<int>& tasks,
                                          const ConstantsProfile& consts,
                                          const GoodSetOptions& options = {});

struct GoodSetSearchResult {
  std::vector<int> tasks;
  ClusteredInstance instance;
  PerturbationBox witness;
};

struct SearchLog {
  std::vector<std::string> lines;
  int good_set_checks = 0;
};

/// Greedy induction: grow a good set one cluster at a time, falling back to
/// sibling replacements inside the newest cluster on failure.
std::optional<GoodSetSearchResult> search_good_set(const mech::MechanismUnderTest& mech, int n,
                                                   int target_k, const ConstantsProfile& consts,
                                                   int budget, std::uint64_t seed,
                                                   SearchLog* log = nullptr);

struct CertifyOutcome {
  std::optional<Certificate> certificate;
  std::string branch;  // "bad-task", "good-set", "direct", "none"
  std::vector<std::string> log;
};

/// Direct ratio search over the probe corpus: per-cluster killer sibling
/// pairs [t = n^3, s = beta] / [t = beta, s = n^3] (capped below B) for
/// bundling suspects, and fitted-boundary probe instances with the dummy
/// boost (t at lambda*s -/+ eps with d_0 or d_k raised accordingly).
CertifyOutcome direct_ratio_search(const mech::MechanismUnderTest& mech, int n,
                                   const ConstantsProfile& consts, std::uint64_t seed);

/// Trichotomy driver: bad task first, then a good set of n-1 tasks with the
/// d_0 boost, then the direct ratio search. Returns an explicit
/// no-certificate outcome rather than fabricating one.
CertifyOutcome certify_lower_bound(const mech::MechanismUnderTest& mech, int n,
                                   const ConstantsProfile& consts, std::uint64_t seed);

struct BadFractionEstimate {
  int k = 0;
  int trials = 0;
  int bad = 0;
  double estimate = 0;
  double ci_low = 0;
  double ci_high = 0;
  /// The union-bound expression evaluated at this run's ell, for context
  /// only; the paper's requirement on ell is exponentially larger.
  Rational eq2_bound;
  std::string caveat;
};

/// The mandatory disclosure attached to every bad-fraction report.
extern const char kEllGapCaveat[];

/// Monte Carlo estimate of b_k, the probability that a random regular set of
/// k tasks is not good, with a Clopper-Pearson 95% interval. The recursion
/// bound is reported alongside, never asserted.
BadFractionEstimate estimate_bad_fraction(const mech::MechanismUnderTest& mech, int n, int k,
                                          int trials, const ConstantsProfile& consts,
                                          std::uint64_t seed);

std::string bad_fraction_report(const BadFractionEstimate& est, int n,
                                const ConstantsProfile& consts);

struct SiblingCensus {
  int to_s_player = 0;
  int bound = 0;  // 2n^2
  bool within_bound = true;
};

/// Diagnostic: how many tasks of one cluster the mechanism ships to the
/// cluster player (a truthful mechanism with ratio < rho keeps this under
/// 2n^2 on perturbed standard instances).
SiblingCensus sibling_census(const mech::MechanismUnderTest& mech,
                             const ClusteredInstance& instance, int cluster);

}  // namespace mechlab::lowerbound
