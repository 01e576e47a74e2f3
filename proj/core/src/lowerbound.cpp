#include "mechlab/lowerbound.hpp"

#include <nlohmann/json.hpp>

#include <boost/math/distributions/beta.hpp>

#include <algorithm>
#include <sstream>
#include <utility>

#include "mechlab/errors.hpp"
#include "mechlab/instance_io.hpp"
#include "mechlab/rng.hpp"
#include "mechlab/slicelab.hpp"

namespace mechlab::lowerbound {

using nlohmann::json;
using nlohmann::ordered_json;

TrivialSpec TrivialSpec::default_for(const ConstantsProfile& consts) {
  TrivialSpec spec;
  spec.tasks.push_back(TaskValue{consts.delta(), make_rational(1, 2)});
  for (int j = 0; j < consts.ell(); ++j)
    spec.tasks.push_back(TaskValue{consts.beta(), Rational(1)});
  return spec;
}

Rational trivial_cluster_cost(const std::vector<TaskValue>& tasks) {
  const int k = static_cast<int>(tasks.size());
  if (k >= 30) throw BudgetError("trivial_cluster_cost: cluster too large to enumerate");
  std::optional<Rational> best;
  for (unsigned long mask = 0; mask < (1UL << k); ++mask) {
    Rational t_load = 0, s_load = 0;
    for (int j = 0; j < k; ++j) {
      if (mask & (1UL << j))
        s_load += tasks[j].s;
      else
        t_load += tasks[j].t;
    }
    const Rational cost = std::max(t_load, s_load);
    if (!best || cost < *best) best = cost;
  }
  return *best;
}

ClusteredInstance make_standard_instance(int n, const ConstantsProfile& consts,
                                         const std::vector<int>& cluster_set,
                                         const TrivialSpec& trivial) {
  if (consts.n() != n) throw ContractError("constants profile built for a different n");
  for (int c : cluster_set)
    if (c < 1 || c > n - 1) throw ContractError("cluster_set entries must lie in [1, n-1]");
  if (static_cast<int>(trivial.tasks.size()) != consts.ell() + 1)
    throw ContractError("trivial spec must provide exactly ell+1 tasks");
  const Rational trivial_cost = trivial_cluster_cost(trivial.tasks);
  if (trivial_cost > consts.delta_prime())
    throw ContractError("trivial spec violates the delta' bound: stand-alone cost " +
                        to_string(trivial_cost) + " > " + to_string(consts.delta_prime()));

  std::vector<std::vector<TaskValue>> clusters;
  for (int c = 1; c <= n - 1; ++c) {
    const bool standard = std::find(cluster_set.begin(), cluster_set.end(), c) != cluster_set.end();
    if (standard) {
      clusters.emplace_back(consts.ell() + 1, TaskValue{consts.beta(), Rational(1)});
    } else {
      clusters.push_back(trivial.tasks);
    }
  }
  std::vector<Rational> dummies(n, Rational(0));
  return ClusteredInstance(n, consts.ell(), std::move(clusters), std::move(dummies),
                           consts.desk_theta(), consts.desk_big_b());
}

ClusteredInstance make_standard_instance(int n, const ConstantsProfile& consts,
                                         const std::vector<int>& cluster_set) {
  return make_standard_instance(n, consts, cluster_set, TrivialSpec::default_for(consts));
}

namespace {

// T must be standard for P: P regular, and every task of P's clusters at
// (beta, 1) -- except the members of P themselves, which may already carry
// t in {beta, alpha} and s in [1 - delta, 1] (the hat and the bad-task
// footnote variants).
void require_standard_for(const ClusteredInstance& instance, const std::vector<int>& tasks,
                          const ConstantsProfile& consts) {
  std::vector<int> clusters;
  for (int col : tasks) {
    if (!instance.is_cluster_column(col))
      throw ContractError("make_hat: P must consist of cluster tasks");
    clusters.push_back(instance.cluster_of_column(col));
  }
  std::sort(clusters.begin(), clusters.end());
  if (std::adjacent_find(clusters.begin(), clusters.end()) != clusters.end())
    throw ContractError("make_hat: P must be regular (one task per cluster)");
  for (int c : clusters) {
    for (int j = 0; j <= instance.ell(); ++j) {
      const int col = instance.task_column(c, j);
      const TaskValue& v = instance.task(c, j);
      const bool in_p = std::find(tasks.begin(), tasks.end(), col) != tasks.end();
      if (in_p) {
        const bool t_ok = v.t == consts.beta() || v.t == consts.alpha();
        const bool s_ok = v.s <= 1 && v.s >= Rational(1) - consts.delta();
        if (!t_ok || !s_ok)
          throw ContractError("make_hat: instance is not standard for P (probed task values)");
      } else if (v.t != consts.beta() || v.s != 1) {
        throw ContractError("make_hat: instance is not standard for P (cluster " +
                            std::to_string(c) + " not at (beta, 1))");
      }
    }
  }
}

}  // namespace

ClusteredInstance make_hat(const ClusteredInstance& instance, const std::vector<int>& tasks,
                           const ConstantsProfile& consts) {
  require_standard_for(instance, tasks, consts);
  ClusteredInstance out = instance;
  for (int col : tasks) {
    TaskValue v = instance.column_value(col);
    v.t = consts.alpha();
    out = out.with_column(col, v);
  }
  return out;
}

std::vector<ClusteredInstance> sample_box(const ClusteredInstance& hat_instance,
                                          const PerturbationBox& box, int count,
                                          std::uint64_t seed) {
  if (count < 1) throw ContractError("sample_box requires count >= 1");
  if (box.tasks.size() != box.theta.size())
    throw ContractError("perturbation box theta vector must match its task set");
  Rng rng(seed);
  std::vector<ClusteredInstance> samples;
  const Rational corner_frac = make_rational((1 << 20) - 1, 1 << 20);
  for (int s = 0; s < count; ++s) {
    ClusteredInstance inst = hat_instance;
    for (std::size_t k = 0; k < box.tasks.size(); ++k) {
      if (sgn(box.theta[k]) <= 0) throw ContractError("perturbation box theta must be positive");
      const Rational frac = (s == 0) ? corner_frac : rng.unit_open();
      TaskValue v = inst.column_value(box.tasks[k]);
      v.t = v.t + box.theta[k] * frac;
      inst = inst.with_column(box.tasks[k], v);
    }
    samples.push_back(std::move(inst));
  }
  return samples;
}

namespace {

bool all_on_player_zero(const mech::MechanismUnderTest& mech, const ClusteredInstance& inst,
                        const std::vector<int>& tasks) {
  const Allocation alloc = mech.allocate(expand_clustered(inst));
  for (int col : tasks)
    if (alloc.machine_of(col) != 0) return false;
  return true;
}

}  // namespace

GoodSetVerdict is_good_set(const mech::MechanismUnderTest& mech, const ClusteredInstance& instance,
                           const std::vector<int>& tasks, const ConstantsProfile& consts,
                           const GoodSetOptions& options) {
  GoodSetVerdict verdict;
  verdict.tasks = tasks;
  verdict.sample_count = options.sample_count;
  const ClusteredInstance hat = make_hat(instance, tasks, consts);
  PerturbationBox box;
  box.tasks = tasks;
  box.theta.assign(tasks.size(), consts.beta() / 2);
  const auto samples = sample_box(hat, box, options.sample_count, options.seed);

  if (!all_on_player_zero(mech, samples[0], tasks)) {
    verdict.verdict = GoodVerdict::NotGood;
    verdict.failing_sample = samples[0];
    return verdict;
  }
  for (std::size_t s = 1; s < samples.size(); ++s) {
    if (!all_on_player_zero(mech, samples[s], tasks)) {
      // The corner dominates every interior point, so a truthful mechanism
      // cannot pass the corner and fail inside: monotonicity suspect.
      verdict.verdict = GoodVerdict::Inconclusive;
      verdict.failing_sample = samples[s];
      verdict.wmon_suspect = true;
      return verdict;
    }
  }
  verdict.verdict = GoodVerdict::Good;
  verdict.corner_certified = mech.info().truthful_verified;
  verdict.witness = box;
  return verdict;
}

std::string certificate_kind_name(Certificate::Kind kind) {
  switch (kind) {
    case Certificate::Kind::BadTask: return "bad-task";
    case Certificate::Kind::GoodSet: return "good-set";
    case Certificate::Kind::DirectRatio: return "direct";
  }
  return "?";
}

std::optional<Certificate> evaluate_certificate(const mech::MechanismUnderTest& mech,
                                                const ClusteredInstance& instance,
                                                Certificate::Kind kind, const std::string& note) {
  const Allocation alloc = mech.allocate(expand_clustered(instance));
  const Rational mech_cost = makespan(expand_clustered(instance), alloc);
  const Rational opt = optimal_makespan_clustered(instance).first;
  if (sgn(opt) == 0) return std::nullopt;
  const Rational ratio = mech_cost / opt;
  if (ratio <= 1) return std::nullopt;
  return Certificate{kind, mech.info().id, instance, alloc, mech_cost, opt, ratio, note};
}

bool recheck_certificate(const Certificate& cert) {
  const CostMatrix expanded = expand_clustered(cert.instance);
  if (makespan(expanded, cert.allocation) != cert.mech_makespan) return false;
  if (optimal_makespan_clustered(cert.instance).first != cert.opt_makespan) return false;
  if (cert.ratio != cert.mech_makespan / cert.opt_makespan) return false;
  return sgn(cert.ratio - 1) > 0;
}

std::string certificate_json(const Certificate& cert, const ConstantsProfile& consts,
                             std::uint64_t seed) {
  ordered_json doc;
  doc["version"] = 1;
  doc["kind"] = certificate_kind_name(cert.kind);
  doc["mechanism"] = cert.mechanism_id;
  doc["n"] = cert.instance.players();
  doc["seed"] = seed;
  ordered_json c;
  c["n"] = consts.n();
  c["alpha"] = to_string(consts.alpha());
  c["beta"] = to_string(consts.beta());
  c["delta"] = to_string(consts.delta());
  c["deltaPrime"] = to_string(consts.delta_prime());
  c["rho"] = to_string(consts.rho());
  c["ell"] = consts.ell();
  doc["consts"] = std::move(c);
  doc["instance"] = json::parse(write_instance_json(cert.instance));
  doc["allocation"] = cert.allocation.assignment();
  doc["mech_makespan"] = to_string(cert.mech_makespan);
  doc["opt_makespan"] = to_string(cert.opt_makespan);
  doc["ratio"] = to_string(cert.ratio);
  doc["ratio_decimal"] = to_double(cert.ratio);
  doc["note"] = cert.note;
  return doc.dump(2) + "\n";
}

Certificate parse_certificate_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid certificate JSON: ") + e.what());
  }
  const std::string kind_name = doc.at("kind").get<std::string>();
  Certificate::Kind kind;
  if (kind_name == "bad-task") kind = Certificate::Kind::BadTask;
  else if (kind_name == "good-set") kind = Certificate::Kind::GoodSet;
  else if (kind_name == "direct") kind = Certificate::Kind::DirectRatio;
  else throw ConfigError("unknown certificate kind: '" + kind_name + "'");

  InstanceDocument inst = read_instance_json(doc.at("instance").dump());
  if (inst.is_matrix()) throw ConfigError("certificate instance must be clustered");
  std::vector<int> assignment = doc.at("allocation").get<std::vector<int>>();
  Certificate cert{kind,
                   doc.at("mechanism").get<std::string>(),
                   inst.clustered(),
                   Allocation(inst.clustered().players(), std::move(assignment)),
                   parse_rational(doc.at("mech_makespan").get<std::string>()),
                   parse_rational(doc.at("opt_makespan").get<std::string>()),
                   parse_rational(doc.at("ratio").get<std::string>()),
                   doc.value("note", "")};
  return cert;
}

std::optional<Certificate> find_bad_task(const mech::MechanismUnderTest& mech, int n,
                                         const ConstantsProfile& consts, std::uint64_t seed) {
  const std::vector<Rational> s_variants = {
      Rational(1), Rational(1) - make_rational(1, 1 << 10), Rational(1) - make_rational(1, 1 << 20)};
  Rng rng(seed);
  for (int cluster = 1; cluster <= n - 1; ++cluster) {
    for (const Rational& s_value : s_variants) {
      ClusteredInstance T = make_standard_instance(n, consts, {cluster});
      if (s_value != 1) T = T.with_task(cluster, 0, TaskValue{consts.beta(), s_value});
      const std::vector<int> P = {T.task_column(cluster, 0)};
      GoodSetOptions options;
      options.seed = rng.fork(static_cast<std::uint64_t>(cluster) * 8 + 1).next();
      const GoodSetVerdict verdict = is_good_set(mech, T, P, consts, options);
      if (verdict.verdict != GoodVerdict::NotGood) continue;

      // Boost: the bad task sits with the s-player; raising dummy d_i to
      // alpha + (n-1) delta' and nudging the task's s-value down adds +1 to
      // the certified ratio.
      ClusteredInstance boosted = make_hat(T, P, consts);
      const Rational boost = consts.alpha() + Rational(n - 1) * consts.delta_prime();
      boosted = boosted.with_dummy(cluster, boost);
      TaskValue v = boosted.task(cluster, 0);
      v.s = v.s - consts.beta();
      boosted = boosted.with_task(cluster, 0, v);

      auto cert = evaluate_certificate(
          mech, boosted, Certificate::Kind::BadTask,
          "bad task in cluster " + std::to_string(cluster) + " at s = " + to_string(s_value) +
              "; dummy d_i boosted to alpha + (n-1) delta'");
      if (cert) return cert;
    }
  }
  return std::nullopt;
}

PotentiallyGoodResult is_potentially_good(const mech::MechanismUnderTest& mech,
                                          const ClusteredInstance& instance,
                                          const std::vector<int>& tasks,
                                          const ConstantsProfile& consts,
                                          const GoodSetOptions& options) {
  if (tasks.size() < 2) throw ContractError("is_potentially_good requires |P| >= 2");
  PotentiallyGoodResult result;
  const int k = static_cast<int>(tasks.size());
  std::vector<std::optional<PerturbationBox>> witnesses;

  for (int i = 0; i < k; ++i) {
    std::vector<int> subset;
    for (int j = 0; j < k; ++j)
      if (j != i) subset.push_back(tasks[j]);
    const GoodSetVerdict v = is_good_set(mech, instance, subset, consts, options);
    ++result.checks_run;
    result.log.push_back("P minus task " + std::to_string(tasks[i]) + ": " +
                         (v.verdict == GoodVerdict::Good ? "good" : "not good"));
    if (v.verdict != GoodVerdict::Good) return result;
    witnesses.push_back(v.witness);
  }

  // Second bullet: P_{-k} must stay good when p_k is replaced by
  // [t = delta, s = q delta/(2n)] over the whole grid. q = 0 would sit on
  // the excluded 0 border; the minimal positive grid value substitutes.
  const int p_k = tasks.back();
  std::vector<int> p_minus_k(tasks.begin(), tasks.end() - 1);
  const long q_max = consts.q_grid_max();
  for (long q = 0; q <= q_max; ++q) {
    Rational s_q = Rational(q) * consts.delta() / Rational(2 * consts.n());
    if (q == 0) {
      s_q = consts.delta() / Rational(4 * consts.n());
      result.log.push_back("q=0 grid point replaced by s = delta/(4n) (0 is outside the domain)");
    }
    ClusteredInstance modified = instance.with_column(p_k, TaskValue{consts.delta(), s_q});
    const GoodSetVerdict v = is_good_set(mech, modified, p_minus_k, consts, options);
    ++result.checks_run;
    ++result.q_grid_checks;
    if (v.verdict != GoodVerdict::Good) {
      result.log.push_back("q-grid failure at q = " + std::to_string(q));
      return result;
    }
    if (q == 0) witnesses.push_back(v.witness);
  }

  // Witness of potential goodness: per task, the intersection of the
  // relevant interval systems. Boxes share their lower corner here, so the
  // intersection is the minimum theta; an empty intersection would be
  // reported as inconclusive.
  PerturbationBox witness;
  witness.tasks = tasks;
  for (int i = 0; i < k; ++i) {
    std::optional<Rational> theta;
    for (const auto& w : witnesses) {
      if (!w) continue;
      for (std::size_t j = 0; j < w->tasks.size(); ++j) {
        if (w->tasks[j] != tasks[i]) continue;
        if (!theta || w->theta[j] < *theta) theta = w->theta[j];
      }
    }
    if (!theta) {
      theta = consts.beta() / 2;  // task appears in no subset box (k = 1 edge)
    }
    if (sgn(*theta) <= 0) {
      result.inconclusive = true;
      result.log.push_back("empty witness intersection; verdict inconclusive");
      return result;
    }
    witness.theta.push_back(*theta);
  }
  result.potentially_good = true;
  result.witness = witness;
  return result;
}

std::optional<GoodSetSearchResult> search_good_set(const mech::MechanismUnderTest& mech, int n,
                                                   int target_k, const ConstantsProfile& consts,
                                                   int budget, std::uint64_t seed,
                                                   SearchLog* log) {
  if (target_k < 1 || target_k > n - 1)
    throw ContractError("search_good_set requires 1 <= targetK <= n-1");
  SearchLog local;
  SearchLog& out = log ? *log : local;
  Rng rng(seed);

  std::vector<int> cluster_order;
  for (int c = 1; c <= n - 1; ++c) cluster_order.push_back(c);
  // deterministic shuffle
  for (int i = static_cast<int>(cluster_order.size()) - 1; i > 0; --i)
    std::swap(cluster_order[i], cluster_order[rng.below(static_cast<std::uint64_t>(i + 1))]);

  std::vector<int> chosen_clusters;
  std::vector<std::pair<int, int>> chosen;  // (cluster, task index)
  int checks = 0;

  for (int k = 0; k < target_k; ++k) {
    bool extended = false;
    for (int c : cluster_order) {
      if (std::find(chosen_clusters.begin(), chosen_clusters.end(), c) != chosen_clusters.end())
        continue;
      // random task, then sibling replacements within the same cluster
      std::vector<int> task_order;
      for (int j = 0; j <= consts.ell(); ++j) task_order.push_back(j);
      for (int i = static_cast<int>(task_order.size()) - 1; i > 0; --i)
        std::swap(task_order[i], task_order[rng.below(static_cast<std::uint64_t>(i + 1))]);

      std::vector<int> cluster_set = chosen_clusters;
      cluster_set.push_back(c);
      const ClusteredInstance T = make_standard_instance(n, consts, cluster_set);
      for (int j : task_order) {
        if (checks >= budget) {
          out.lines.push_back("budget exhausted");
          out.good_set_checks = checks;
          return std::nullopt;
        }
        std::vector<int> candidate;
        for (const auto& [cc, jj] : chosen) candidate.push_back(T.task_column(cc, jj));
        candidate.push_back(T.task_column(c, j));
        GoodSetOptions options;
        options.seed = rng.fork(static_cast<std::uint64_t>(checks) + 17).next();
        const GoodSetVerdict v = is_good_set(mech, T, candidate, consts, options);
        ++checks;
        if (v.verdict == GoodVerdict::Good) {
          chosen_clusters.push_back(c);
          chosen.emplace_back(c, j);
          out.lines.push_back("extended with cluster " + std::to_string(c) + " task " +
                              std::to_string(j));
          extended = true;
          break;
        }
        out.lines.push_back("cluster " + std::to_string(c) + " task " + std::to_string(j) +
                            " not good; trying sibling replacement");
      }
      if (extended) break;
    }
    if (!extended) {
      out.lines.push_back("no extension found at k = " + std::to_string(k + 1) +
                          " (trichotomy: a bad task or a high-ratio branch applies)");
      out.good_set_checks = checks;
      return std::nullopt;
    }
  }

  const ClusteredInstance T = make_standard_instance(n, consts, chosen_clusters);
  std::vector<int> columns;
  for (const auto& [c, j] : chosen) columns.push_back(T.task_column(c, j));
  GoodSetOptions options;
  options.seed = rng.fork(991).next();
  const GoodSetVerdict final_check = is_good_set(mech, T, columns, consts, options);
  out.good_set_checks = checks + 1;
  if (final_check.verdict != GoodVerdict::Good) {
    out.lines.push_back("final verification failed");
    return std::nullopt;
  }
  return GoodSetSearchResult{columns, T, *final_check.witness};
}

namespace {

Rational killer_value(int n, const ConstantsProfile& consts) {
  const Rational cube = Rational(n) * Rational(n) * Rational(n);
  const Rational cap = consts.desk_big_b() / 2;
  return std::min(cube, cap);
}

void consider(std::optional<Certificate>& best, std::optional<Certificate> candidate) {
  if (!candidate) return;
  if (!best || candidate->ratio > best->ratio) best = std::move(candidate);
}

}  // namespace

CertifyOutcome direct_ratio_search(const mech::MechanismUnderTest& mech, int n,
                                   const ConstantsProfile& consts, std::uint64_t seed) {
  CertifyOutcome outcome;
  outcome.branch = "direct";
  std::optional<Certificate> best;

  // Killer sibling pairs: a bundling slice cannot realize the only cheap
  // allocation (p_k to the cluster player, its sibling to player 0).
  if (consts.ell() >= 1) {
    const Rational big = killer_value(n, consts);
    for (int cluster = 1; cluster <= n - 1; ++cluster) {
      ClusteredInstance T = make_standard_instance(n, consts, {cluster});
      T = T.with_task(cluster, 0, TaskValue{big, consts.beta()});
      T = T.with_task(cluster, 1, TaskValue{consts.beta(), big});
      consider(best, evaluate_certificate(mech, T, Certificate::Kind::DirectRatio,
                                          "killer sibling pair at cluster " +
                                              std::to_string(cluster)));
      outcome.log.push_back("killer pair probed at cluster " + std::to_string(cluster));
    }
  }

  // Fitted-boundary probes: estimate the slice boundary psi(s) of the first
  // task of each cluster, and when it fits a line, place the task just
  // inside/outside the boundary at a large s and boost the matching dummy.
  const Rational s_star = consts.desk_big_b() / 2;
  const Rational eps = make_rational(1, 8);
  for (int cluster = 1; cluster <= n - 1 && consts.ell() >= 1; ++cluster) {
    ClusteredInstance T = make_standard_instance(n, consts, {cluster});
    slicelab::SliceSpec spec(T, T.task_column(cluster, 0), T.task_column(cluster, 1));
    slicelab::InducedSlice slice(mech, spec);
    slicelab::BisectOptions bisect;
    bisect.tol = make_rational(1, 1000000);
    bisect.probe_min = consts.beta() / 2;
    bisect.t_max = Rational(16);
    std::vector<std::pair<Rational, slicelab::PsiEstimate>> samples;
    for (int k = 0; k < 5; ++k) {
      const Rational s = make_rational(1, 4) + make_rational(2, 5) * Rational(k);
      samples.emplace_back(
          s, slicelab::boundary_psi(slice, 1, consts.beta(), s, Rational(1), bisect));
    }
    slicelab::BoundaryFit fit;
    try {
      fit = slicelab::fit_linear_boundary(samples);
    } catch (const Error&) {
      outcome.log.push_back("cluster " + std::to_string(cluster) +
                            ": boundary not fittable, skipping lambda probe");
      continue;
    }
    if (fit.residual > make_rational(1, 1000) || sgn(fit.lambda) <= 0) {
      outcome.log.push_back("cluster " + std::to_string(cluster) +
                            ": boundary nonlinear in the window, skipping lambda probe");
      continue;
    }
    const Rational boundary_at_star = fit.lambda * s_star - fit.gamma;
    if (sgn(boundary_at_star) <= 0) continue;
    ClusteredInstance probe = T;
    std::string note;
    if (fit.lambda >= 1) {
      // task stays with player 0 just below the boundary; d_0 rises to s*
      probe = probe.with_task(cluster, 0, TaskValue{boundary_at_star - eps, s_star});
      probe = probe.with_dummy(0, s_star);
      note = "lambda probe (lambda >= 1), fitted lambda = " + to_string(fit.lambda);
    } else {
      // task moves to the s-player just above the boundary; d_k rises to t_p
      probe = probe.with_task(cluster, 0, TaskValue{boundary_at_star + eps, s_star});
      probe = probe.with_dummy(cluster, boundary_at_star + eps);
      note = "lambda probe (lambda < 1), fitted lambda = " + to_string(fit.lambda);
    }
    consider(best, evaluate_certificate(mech, probe, Certificate::Kind::DirectRatio, note));
    outcome.log.push_back("lambda probe at cluster " + std::to_string(cluster) +
                          ", fitted lambda " + to_string(fit.lambda));
  }

  (void)seed;
  const Rational floor = Rational(1) + make_rational(1, 1000000);
  if (best && best->ratio >= floor) {
    outcome.certificate = std::move(best);
  } else {
    outcome.branch = "none";
    outcome.log.push_back("no certificate above 1 + 1e-6 found within the probe corpus");
  }
  return outcome;
}

CertifyOutcome certify_lower_bound(const mech::MechanismUnderTest& mech, int n,
                                   const ConstantsProfile& consts, std::uint64_t seed) {
  CertifyOutcome outcome;

  // (ii) bad task
  if (auto cert = find_bad_task(mech, n, consts, seed)) {
    outcome.branch = "bad-task";
    outcome.certificate = std::move(cert);
    outcome.log.push_back("bad task found; certificate from the s-player cost plus dummy boost");
    return outcome;
  }
  outcome.log.push_back("no bad task found");

  // (iii) good set of n-1 tasks, with d_0 boosted to 1 + (n-1) delta'
  SearchLog search_log;
  const auto found = search_good_set(mech, n, n - 1, consts, /*budget=*/64 * n, seed, &search_log);
  for (const auto& line : search_log.lines) outcome.log.push_back("search: " + line);
  if (found) {
    ClusteredInstance boosted = make_hat(found->instance, found->tasks, consts);
    const Rational corner_frac = make_rational((1 << 20) - 1, 1 << 20);
    for (std::size_t k = 0; k < found->tasks.size(); ++k) {
      TaskValue v = boosted.column_value(found->tasks[k]);
      v.t = v.t + found->witness.theta[k] * corner_frac;
      boosted = boosted.with_column(found->tasks[k], v);
    }
    boosted = boosted.with_dummy(0, Rational(1) + Rational(n - 1) * consts.delta_prime());

    auto cert = evaluate_certificate(mech, boosted, Certificate::Kind::GoodSet,
                                     "good set of n-1 tasks at the witness corner; dummy d_0 "
                                     "boosted to 1 + (n-1) delta'");
    if (cert) {
      // exact check that the boost really landed on player 0
      const Rational floor_cost = Rational(n - 1) * consts.alpha() + Rational(1) +
                                  Rational(n - 1) * consts.delta_prime();
      if (cert->mech_makespan >= floor_cost) {
        outcome.branch = "good-set";
        outcome.certificate = std::move(cert);
        return outcome;
      }
      outcome.log.push_back("good-set boost check failed: mechanism moved tasks after the boost");
    }
  }

  // (i) direct ratio search
  CertifyOutcome direct = direct_ratio_search(mech, n, consts, seed);
  for (const auto& line : direct.log) outcome.log.push_back("direct: " + line);
  outcome.branch = direct.branch;
  outcome.certificate = std::move(direct.certificate);
  return outcome;
}

const char kEllGapCaveat[] =
    "caveat: the bound b_k <= (3n/delta)^(k-2) * 3n^3/ell is established only for "
    "ell > 3n^3 * (3n/delta)^(n-3) tasks per cluster; this run uses a desk-scale ell "
    "far below that requirement, so the bound is reported for context only and is "
    "not asserted.";

namespace {

Rational rational_pow(const Rational& base, long exponent) {
  if (exponent == 0) return Rational(1);
  const bool invert = exponent < 0;
  const unsigned long e = static_cast<unsigned long>(invert ? -exponent : exponent);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), e);
  Rational out(num, den);
  out.canonicalize();
  if (invert) return Rational(1) / out;
  return out;
}

}  // namespace

BadFractionEstimate estimate_bad_fraction(const mech::MechanismUnderTest& mech, int n, int k,
                                          int trials, const ConstantsProfile& consts,
                                          std::uint64_t seed) {
  if (trials < 30) throw ContractError("estimate_bad_fraction requires trials >= 30");
  if (k < 1 || k > n - 1) throw ContractError("estimate_bad_fraction requires 1 <= k <= n-1");
  Rng rng(seed);
  int bad = 0;
  for (int t = 0; t < trials; ++t) {
    // random set of k clusters, one random task from each
    std::vector<int> clusters;
    for (int c = 1; c <= n - 1; ++c) clusters.push_back(c);
    for (int i = static_cast<int>(clusters.size()) - 1; i > 0; --i)
      std::swap(clusters[i], clusters[rng.below(static_cast<std::uint64_t>(i + 1))]);
    clusters.resize(k);
    std::sort(clusters.begin(), clusters.end());
    const ClusteredInstance T = make_standard_instance(n, consts, clusters);
    std::vector<int> tasks;
    for (int c : clusters)
      tasks.push_back(T.task_column(c, static_cast<int>(rng.below(consts.ell() + 1))));
    GoodSetOptions options;
    options.sample_count = 16;
    options.seed = rng.fork(static_cast<std::uint64_t>(t) + 31).next();
    const GoodSetVerdict v = is_good_set(mech, T, tasks, consts, options);
    if (v.verdict != GoodVerdict::Good) ++bad;
  }

  BadFractionEstimate est;
  est.k = k;
  est.trials = trials;
  est.bad = bad;
  est.estimate = static_cast<double>(bad) / trials;
  const double alpha_level = 0.05;
  if (bad == 0) {
    est.ci_low = 0.0;
  } else {
    boost::math::beta_distribution<double> lo_dist(bad, trials - bad + 1);
    est.ci_low = quantile(lo_dist, alpha_level / 2);
  }
  if (bad == trials) {
    est.ci_high = 1.0;
  } else {
    boost::math::beta_distribution<double> hi_dist(bad + 1, trials - bad);
    est.ci_high = quantile(hi_dist, 1 - alpha_level / 2);
  }
  const Rational three_n_over_delta = Rational(3 * n) / consts.delta();
  est.eq2_bound = rational_pow(three_n_over_delta, k - 2) * Rational(3) * Rational(n) *
                  Rational(n) * Rational(n) / Rational(consts.ell());
  est.caveat = kEllGapCaveat;
  return est;
}

std::string bad_fraction_report(const BadFractionEstimate& est, int n,
                                const ConstantsProfile& consts) {
  std::ostringstream out;
  out << "b_" << est.k << " estimate: " << est.bad << "/" << est.trials << " = " << est.estimate
      << " (Clopper-Pearson 95% CI [" << est.ci_low << ", " << est.ci_high << "])\n";
  out << "recursion bound at this run's ell = " << consts.ell() << " (n = " << n
      << "): " << to_string(est.eq2_bound) << " ~= " << to_double(est.eq2_bound) << "\n";
  out << est.caveat << "\n";
  return out.str();
}

SiblingCensus sibling_census(const mech::MechanismUnderTest& mech,
                             const ClusteredInstance& instance, int cluster) {
  const Allocation alloc = mech.allocate(expand_clustered(instance));
  SiblingCensus census;
  census.bound = 2 * instance.players() * instance.players();
  for (int j = 0; j <= instance.ell(); ++j)
    if (alloc.machine_of(instance.task_column(cluster, j)) == cluster) ++census.to_s_player;
  census.within_bound = census.to_s_player < census.bound;
  return census;
}

}  // namespace mechlab::lowerbound
