#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mechlab/cost_matrix.hpp"
#include "mechlab/mechanisms.hpp"
#include "mechlab/rational.hpp"

namespace mechlab::wmon {

/// A strict failure of the weak-monotonicity inequality: for machine i under
/// a unilateral bid change, sum_j (a_ij(t') - a_ij(t)) (t'_ij - t_ij) > 0.
struct WmonViolation {
  int machine;
  CostMatrix original;
  std::vector<Rational> alt_row;
  Allocation alloc_original;
  Allocation alloc_deviated;
  Rational sum;  // strictly positive
};

/// Evaluates the weak-monotonicity sum exactly for one (machine, deviation)
/// pair; returns the violation record iff the sum is > 0.
std::optional<WmonViolation> wmon_check_pair(const mech::MechanismUnderTest& mech,
                                             const CostMatrix& matrix, int machine,
                                             const std::vector<Rational>& alt_row);

/// The exact value of the monotonicity sum for the pair (pass or not).
Rational wmon_pair_sum(const mech::MechanismUnderTest& mech, const CostMatrix& matrix, int machine,
                       const std::vector<Rational>& alt_row);

struct ScanReport {
  std::string generator;
  std::uint64_t seed = 0;
  int trials = 0;
  int violations = 0;
  int workers = 1;
  std::optional<WmonViolation> first_violation;
  /// Sound phrasing only: "no violation found in N trials" never asserts
  /// truthfulness.
  std::string summary() const;
};

/// Generator ids: "standard" cycles single-coordinate deviations, full-row
/// deviations and Lemma-2-style structured S/S' deviations over random
/// grid-valued matrices shaped for the mechanism; "single-coord" and
/// "full-row" isolate one deviation mode. "around-instance" perturbs a fixed
/// base instance (pass via base parameter).
struct ScanOptions {
  std::string generator = "standard";
  int trials = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  std::optional<CostMatrix> base;  // for "around-instance"
};

/// Deterministic given (generator, seed, workers): worker k scans its share
/// of trials with seed+k; merge is order-independent, first violation =
/// lowest (worker, trial) pair.
ScanReport wmon_scan(const mech::MechanismUnderTest& mech, const ScanOptions& options);

/// Lemma-2-style single-player deviation check: lower machine i's bids on
/// S (subset of its allocated tasks), raise them on S' (disjoint from its
/// allocation), leave the rest; the allocation restricted to S u S' must not
/// change for a truthful mechanism.
struct ToolCheckResult {
  bool pass;
  std::optional<WmonViolation> counterexample;
};
ToolCheckResult lemma_tool_check(const mech::MechanismUnderTest& mech, const CostMatrix& matrix,
                                 int machine, const std::vector<int>& keep_set,
                                 const std::vector<int>& avoid_set,
                                 const std::vector<Rational>& decrements,
                                 const std::vector<Rational>& increments);

/// Restriction-style probing: deviations confined to the complement of
/// fixedTasks (a probe touching a fixed task is a contract error); the
/// monotonicity verdict is computed identically.
struct RestrictionProbe {
  int machine;
  std::vector<Rational> alt_row;
};
std::optional<WmonViolation> restriction_check(const mech::MechanismUnderTest& mech,
                                               const CostMatrix& matrix,
                                               const std::vector<int>& fixed_tasks,
                                               const std::vector<RestrictionProbe>& probes);

}  // namespace mechlab::wmon
