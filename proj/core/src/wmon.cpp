#include "mechlab/wmon.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include "mechlab/errors.hpp"
#include "mechlab/rng.hpp"

namespace mechlab::wmon {

Rational wmon_pair_sum(const mech::MechanismUnderTest& mech, const CostMatrix& matrix, int machine,
                       const std::vector<Rational>& alt_row) {
  if (machine < 0 || machine >= matrix.machines())
    throw ContractError("wmon_check_pair: machine index out of range");
  if (static_cast<int>(alt_row.size()) != matrix.tasks())
    throw ContractError("wmon_check_pair: deviation row has wrong length");
  const Allocation before = mech.allocate(matrix);
  const Allocation after = mech.allocate(matrix.with_row(machine, alt_row));
  Rational sum = 0;
  for (int j = 0; j < matrix.tasks(); ++j) {
    const int a = before.assigned(machine, j) ? 1 : 0;
    const int a_prime = after.assigned(machine, j) ? 1 : 0;
    if (a != a_prime) sum += Rational(a_prime - a) * (alt_row[j] - matrix.at(machine, j));
  }
  return sum;
}

std::optional<WmonViolation> wmon_check_pair(const mech::MechanismUnderTest& mech,
                                             const CostMatrix& matrix, int machine,
                                             const std::vector<Rational>& alt_row) {
  const Rational sum = wmon_pair_sum(mech, matrix, machine, alt_row);
  if (sgn(sum) <= 0) return std::nullopt;
  return WmonViolation{machine,
                       matrix,
                       alt_row,
                       mech.allocate(matrix),
                       mech.allocate(matrix.with_row(machine, alt_row)),
                       sum};
}

std::string ScanReport::summary() const {
  if (violations == 0)
    return "no violation found in " + std::to_string(trials) + " trials (generator '" +
           generator + "', seed " + std::to_string(seed) + "); this refutes nothing";
  return std::to_string(violations) + " violation(s) found in " + std::to_string(trials) +
         " trials (generator '" + generator + "', seed " + std::to_string(seed) + ")";
}

namespace {

struct TrialShape {
  int n;
  int m;
};

TrialShape shape_for(const mech::MechanismInfo& info, Rng& rng) {
  TrialShape shape{};
  shape.n = info.fixed_n ? *info.fixed_n : static_cast<int>(2 + rng.below(2));
  shape.m = info.fixed_m ? *info.fixed_m : static_cast<int>(1 + rng.below(3));
  return shape;
}

Rational grid_value(Rng& rng) {
  // strictly positive grid values in (0, 4]
  return rng.grid(1, 256, 64);
}

CostMatrix random_matrix(const TrialShape& shape, Rng& rng) {
  std::vector<std::vector<Rational>> values(shape.n, std::vector<Rational>(shape.m));
  for (auto& row : values)
    for (auto& v : row) v = grid_value(rng);
  return CostMatrix(shape.n, shape.m, std::move(values));
}

// One deviation trial; mode 0 = single coordinate, 1 = full row,
// 2 = structured S/S' per the single-player deviation tool.
std::optional<WmonViolation> run_trial(const mech::MechanismUnderTest& mech,
                                       const CostMatrix& base, int mode, Rng& rng) {
  const int machine = static_cast<int>(rng.below(static_cast<std::uint64_t>(base.machines())));
  std::vector<Rational> alt = base.row(machine);
  if (mode == 0) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(base.tasks())));
    alt[j] = grid_value(rng);
  } else if (mode == 1) {
    for (auto& v : alt) v = grid_value(rng);
  } else {
    const Allocation alloc = mech.allocate(base);
    for (int j = 0; j < base.tasks(); ++j) {
      if (alloc.machine_of(j) == machine) {
        if (rng.coin()) alt[j] = alt[j] * rng.grid(1, 63, 64);  // lower a held task
      } else {
        if (rng.coin()) alt[j] = alt[j] + grid_value(rng);  // raise a foreign task
      }
    }
  }
  return wmon_check_pair(mech, base, machine, alt);
}

ScanReport scan_worker(const mech::MechanismUnderTest& mech, const ScanOptions& options,
                       std::uint64_t seed, int trials) {
  Rng rng(seed);
  ScanReport report;
  report.generator = options.generator;
  report.seed = seed;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    CostMatrix base = options.generator == "around-instance"
                          ? *options.base
                          : random_matrix(shape_for(mech.info(), rng), rng);
    int mode;
    if (options.generator == "single-coord")
      mode = 0;
    else if (options.generator == "full-row")
      mode = 1;
    else
      mode = t % 3;
    auto violation = run_trial(mech, base, mode, rng);
    if (violation) {
      ++report.violations;
      if (!report.first_violation) report.first_violation = std::move(violation);
    }
  }
  return report;
}

}  // namespace

ScanReport wmon_scan(const mech::MechanismUnderTest& mech, const ScanOptions& options) {
  if (options.trials < 1) throw ContractError("wmon_scan requires trials >= 1");
  if (options.generator != "standard" && options.generator != "single-coord" &&
      options.generator != "full-row" && options.generator != "around-instance")
    throw ConfigError("unknown wmon generator id: '" + options.generator + "'");
  if (options.generator == "around-instance" && !options.base)
    throw ConfigError("generator 'around-instance' needs a base instance");

  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    ScanReport report = scan_worker(mech, options, options.seed, options.trials);
    report.workers = 1;
    return report;
  }

  // worker k handles trials [k*chunk, ...) with seed = base seed + k
  std::vector<std::future<ScanReport>> futures;
  const int chunk = (options.trials + workers - 1) / workers;
  int assigned = 0;
  for (int k = 0; k < workers && assigned < options.trials; ++k) {
    const int count = std::min(chunk, options.trials - assigned);
    assigned += count;
    futures.push_back(std::async(std::launch::async, [&mech, &options, k, count] {
      return scan_worker(mech, options, options.seed + static_cast<std::uint64_t>(k), count);
    }));
  }
  ScanReport merged;
  merged.generator = options.generator;
  merged.seed = options.seed;
  merged.workers = workers;
  for (auto& f : futures) {
    ScanReport part = f.get();
    merged.trials += part.trials;
    merged.violations += part.violations;
    if (!merged.first_violation && part.first_violation)
      merged.first_violation = std::move(part.first_violation);
  }
  return merged;
}

ToolCheckResult lemma_tool_check(const mech::MechanismUnderTest& mech, const CostMatrix& matrix,
                                 int machine, const std::vector<int>& keep_set,
                                 const std::vector<int>& avoid_set,
                                 const std::vector<Rational>& decrements,
                                 const std::vector<Rational>& increments) {
  if (keep_set.size() != decrements.size() || avoid_set.size() != increments.size())
    throw ContractError("lemma_tool_check: deviation vectors must match their task sets");
  const Allocation before = mech.allocate(matrix);
  std::vector<Rational> alt = matrix.row(machine);
  for (std::size_t k = 0; k < keep_set.size(); ++k) {
    const int j = keep_set[k];
    if (!before.assigned(machine, j))
      throw ContractError("lemma_tool_check: S must be allocated to the probed machine");
    if (sgn(decrements[k]) <= 0) throw ContractError("lemma_tool_check: decrements must be > 0");
    alt[j] = matrix.at(machine, j) - decrements[k];
    if (sgn(alt[j]) < 0) throw ContractError("lemma_tool_check: decrement below zero");
  }
  for (std::size_t k = 0; k < avoid_set.size(); ++k) {
    const int j = avoid_set[k];
    if (before.assigned(machine, j))
      throw ContractError("lemma_tool_check: S' must be disjoint from the machine's allocation");
    if (sgn(increments[k]) <= 0) throw ContractError("lemma_tool_check: increments must be > 0");
    alt[j] = matrix.at(machine, j) + increments[k];
  }
  const Allocation after = mech.allocate(matrix.with_row(machine, alt));
  bool unchanged = true;
  for (int j : keep_set) unchanged = unchanged && after.assigned(machine, j);
  for (int j : avoid_set) unchanged = unchanged && !after.assigned(machine, j);
  if (unchanged) return {true, std::nullopt};
  // For a truthful mechanism this would witness a monotonicity breach; record
  // the pair with the exact sum (which may or may not be positive here).
  return {false,
          WmonViolation{machine, matrix, alt, before, after,
                        wmon_pair_sum(mech, matrix, machine, alt)}};
}

std::optional<WmonViolation> restriction_check(const mech::MechanismUnderTest& mech,
                                               const CostMatrix& matrix,
                                               const std::vector<int>& fixed_tasks,
                                               const std::vector<RestrictionProbe>& probes) {
  for (const auto& probe : probes) {
    for (int j : fixed_tasks)
      if (probe.alt_row[j] != matrix.at(probe.machine, j))
        throw ContractError("restriction_check: probe touches a fixed task");
    auto violation = wmon_check_pair(mech, matrix, probe.machine, probe.alt_row);
    if (violation) return violation;
  }
  return std::nullopt;
}

}  // namespace mechlab::wmon
