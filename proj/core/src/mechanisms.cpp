#include "mechlab/mechanisms.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <utility>

#include "mechlab/errors.hpp"

namespace mechlab::mech {

using nlohmann::json;

int ExtRational::cmp(const ExtRational& o) const {
  if (kind_ == o.kind_ && kind_ != Kind::Finite) return 0;
  if (is_neg_inf()) return -1;
  if (o.is_neg_inf()) return 1;
  if (is_pos_inf()) return 1;
  if (o.is_pos_inf()) return -1;
  return mechlab::cmp(value_, o.value_);
}

std::string ExtRational::to_string() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  return mechlab::to_string(value_);
}

ExtRational ExtRational::parse(const std::string& text) {
  if (text == "inf" || text == "+inf") return pos_inf();
  if (text == "-inf") return neg_inf();
  return finite(parse_rational(text));
}

std::string label_name(AllocLabel label) {
  switch (label) {
    case AllocLabel::Both: return "12";
    case AllocLabel::Task1: return "1";
    case AllocLabel::Task2: return "2";
    case AllocLabel::None: return "none";
  }
  return "?";
}

AllocLabel parse_label(const std::string& name) {
  if (name == "12") return AllocLabel::Both;
  if (name == "1") return AllocLabel::Task1;
  if (name == "2") return AllocLabel::Task2;
  if (name == "none" || name == "empty") return AllocLabel::None;
  throw ConfigError("unknown allocation label: '" + name + "'");
}

Allocation label_to_allocation(AllocLabel label) {
  switch (label) {
    case AllocLabel::Both: return Allocation(2, {0, 0});
    case AllocLabel::Task1: return Allocation(2, {0, 1});
    case AllocLabel::Task2: return Allocation(2, {1, 0});
    case AllocLabel::None: return Allocation(2, {1, 1});
  }
  throw ContractError("bad label");
}

AllocLabel allocation_to_label(const Allocation& alloc) {
  if (alloc.tasks() != 2) throw ContractError("allocation is not 2x2");
  const bool a1 = alloc.machine_of(0) == 0;
  const bool a2 = alloc.machine_of(1) == 0;
  if (a1 && a2) return AllocLabel::Both;
  if (a1) return AllocLabel::Task1;
  if (a2) return AllocLabel::Task2;
  return AllocLabel::None;
}

void AffineMinimizerConfig2x2::validate() const {
  if (sgn(lambda_prime) <= 0 || sgn(lambda) <= 0)
    throw ConfigError("affine minimizer requires lambda' > 0 and lambda > 0");
}

RelaxedAffineMinimizerConfig2x2::RelaxedAffineMinimizerConfig2x2(AffineMinimizerConfig2x2 base_cfg,
                                                                 Rational ds, Rational dt,
                                                                 PiecewiseLinear zeta_table)
    : base(std::move(base_cfg)), d_s(std::move(ds)), d_t(std::move(dt)), zeta(std::move(zeta_table)) {
  base.validate();
  if (sgn(d_s) <= 0 || sgn(d_t) <= 0)
    throw ConfigError("relaxed affine minimizer requires D_s > 0 and D_t > 0");
  if (!zeta.covers_from_zero_to(d_s))
    throw ConfigError("zeta table must cover [0, D_s)");
}

AllocLabel affine_minimizer_2x2_label(const Rational& t1, const Rational& t2, const Rational& s1,
                                      const Rational& s2, const AffineMinimizerConfig2x2& cfg) {
  cfg.validate();
  const std::array<ExtRational, 4> expr = {
      cfg.pi_both.plus(cfg.lambda_prime * (t1 + t2)),
      cfg.pi_task1.plus(cfg.lambda_prime * t1 + cfg.lambda * s2),
      cfg.pi_task2.plus(cfg.lambda_prime * t2 + cfg.lambda * s1),
      cfg.pi_none.plus(cfg.lambda * (s1 + s2)),
  };
  int best = -1;
  for (int a = 0; a < 4; ++a) {
    if (expr[a].is_pos_inf()) continue;
    if (best < 0 || expr[a].cmp(expr[best]) < 0) best = a;  // ties keep earlier = larger set
  }
  if (best < 0) throw ConfigError("all four affine minimizer expressions are +inf");
  return static_cast<AllocLabel>(best);
}

AllocLabel relaxed_affine_minimizer_2x2_label(const Rational& t1, const Rational& t2,
                                              const Rational& s1, const Rational& s2,
                                              const RelaxedAffineMinimizerConfig2x2& cfg) {
  if (s1 + s2 < cfg.d_s && t1 + t2 < cfg.d_t)
    return (t1 + t2 <= cfg.zeta(s1 + s2)) ? AllocLabel::Both : AllocLabel::None;
  return affine_minimizer_2x2_label(t1, t2, s1, s2, cfg.base);
}

AllocLabel task_independent_2x2_label(const Rational& t1, const Rational& t2, const Rational& s1,
                                      const Rational& s2, const BoundaryTable& psi1,
                                      const BoundaryTable& psi2) {
  const bool a1 = t1 <= psi1(s1);
  const bool a2 = t2 <= psi2(s2);
  if (a1 && a2) return AllocLabel::Both;
  if (a1) return AllocLabel::Task1;
  if (a2) return AllocLabel::Task2;
  return AllocLabel::None;
}

AllocLabel one_dimensional_2x2_label(const Rational& t1, const Rational& t2, const Rational& s1,
                                     const Rational& s2, OneDimVariant variant,
                                     const BoundaryTable& boundary) {
  switch (variant) {
    case OneDimVariant::Bundling:
      return (t1 + t2 <= boundary(s1 + s2)) ? AllocLabel::Both : AllocLabel::None;
    case OneDimVariant::Task1Only:
      return (t1 <= boundary(s1)) ? AllocLabel::Task1 : AllocLabel::None;
    case OneDimVariant::Task2Only:
      return (t2 <= boundary(s2)) ? AllocLabel::Task2 : AllocLabel::None;
  }
  throw ContractError("bad one-dimensional variant");
}

AllocLabel constant_2x2_label(AllocLabel fixed) { return fixed; }

Allocation affine_minimizer_2x2(const Rational& t1, const Rational& t2, const Rational& s1,
                                const Rational& s2, const AffineMinimizerConfig2x2& cfg) {
  return label_to_allocation(affine_minimizer_2x2_label(t1, t2, s1, s2, cfg));
}

Allocation relaxed_affine_minimizer_2x2(const Rational& t1, const Rational& t2, const Rational& s1,
                                        const Rational& s2,
                                        const RelaxedAffineMinimizerConfig2x2& cfg) {
  return label_to_allocation(relaxed_affine_minimizer_2x2_label(t1, t2, s1, s2, cfg));
}

Allocation task_independent_2x2(const Rational& t1, const Rational& t2, const Rational& s1,
                                const Rational& s2, const BoundaryTable& psi1,
                                const BoundaryTable& psi2) {
  return label_to_allocation(task_independent_2x2_label(t1, t2, s1, s2, psi1, psi2));
}

Allocation one_dimensional_2x2(const Rational& t1, const Rational& t2, const Rational& s1,
                               const Rational& s2, OneDimVariant variant,
                               const BoundaryTable& boundary) {
  return label_to_allocation(one_dimensional_2x2_label(t1, t2, s1, s2, variant, boundary));
}

Allocation constant_2x2(const Rational&, const Rational&, const Rational&, const Rational&,
                        AllocLabel fixed) {
  return label_to_allocation(fixed);
}

Allocation vcg_allocate(const CostMatrix& matrix) {
  std::vector<int> assignment(matrix.tasks(), 0);
  for (int j = 0; j < matrix.tasks(); ++j) {
    int best = 0;
    for (int i = 1; i < matrix.machines(); ++i)
      if (matrix.at(i, j) < matrix.at(best, j)) best = i;
    assignment[j] = best;
  }
  return Allocation(matrix.machines(), assignment);
}

Allocation max_cost_allocate(const CostMatrix& matrix) {
  std::vector<int> assignment(matrix.tasks(), 0);
  for (int j = 0; j < matrix.tasks(); ++j) {
    int best = 0;
    for (int i = 1; i < matrix.machines(); ++i)
      if (matrix.at(i, j) > matrix.at(best, j)) best = i;
    assignment[j] = best;
  }
  return Allocation(matrix.machines(), assignment);
}

Allocation weighted_vcg_allocate(const ClusteredInstance& ci, int n_param) {
  if (n_param != ci.players())
    throw ContractError("weighted_vcg_allocate: n parameter must equal the instance's n");
  const unsigned long d = static_cast<unsigned long>(n_param - 1);
  std::vector<int> assignment(ci.total_tasks(), 0);
  for (int c = 1; c <= ci.cluster_count(); ++c) {
    for (int j = 0; j <= ci.ell(); ++j) {
      const auto& tv = ci.task(c, j);
      // player 0 iff sqrt(n-1) * t <= s, in squared form; equality to player 0
      assignment[ci.task_column(c, j)] = (cmp_sqrt_scaled(d, tv.t, tv.s) <= 0) ? 0 : c;
    }
  }
  for (int i = 0; i < ci.players(); ++i) assignment[ci.dummy_column(i)] = i;
  return Allocation(ci.players(), assignment);
}

VcgMechanism::VcgMechanism() {
  info_ = MechanismInfo{"vcg", "VCG (per-task greedy)", "lowest machine index",
                        /*truthful_verified=*/true, std::nullopt, std::nullopt, 1UL};
}

WeightedVcgMechanism::WeightedVcgMechanism(int n) : n_(n) {
  if (n < 2) throw ConfigError("wvcg requires n >= 2");
  info_ = MechanismInfo{"wvcg", "sqrt(n-1)-weighted VCG",
                        "player 0 wins weighted ties, then lowest index",
                        /*truthful_verified=*/true, n, std::nullopt,
                        static_cast<unsigned long>(n - 1)};
}

Allocation WeightedVcgMechanism::allocate(const CostMatrix& matrix) const {
  if (matrix.machines() != n_)
    throw ContractError("wvcg constructed for n=" + std::to_string(n_) +
                        " applied to a matrix with n=" + std::to_string(matrix.machines()));
  const unsigned long d = static_cast<unsigned long>(n_ - 1);
  std::vector<int> assignment(matrix.tasks(), 0);
  for (int j = 0; j < matrix.tasks(); ++j) {
    // player 0's score is sqrt(n-1)*t_0j, everyone else's t_ij; min wins,
    // player 0 wins ties, then lowest index among the rest.
    int best = -1;  // best non-zero player
    for (int i = 1; i < matrix.machines(); ++i)
      if (best < 0 || matrix.at(i, j) < matrix.at(best, j)) best = i;
    assignment[j] = (cmp_sqrt_scaled(d, matrix.at(0, j), matrix.at(best, j)) <= 0) ? 0 : best;
  }
  return Allocation(matrix.machines(), assignment);
}

MaxCostMechanism::MaxCostMechanism() {
  info_ = MechanismInfo{"maxcost", "per-task argmax (non-monotone control)",
                        "lowest machine index", /*truthful_verified=*/false,
                        std::nullopt, std::nullopt, std::nullopt};
}

namespace {

void require_2x2(const CostMatrix& matrix, const std::string& id) {
  if (matrix.machines() != 2 || matrix.tasks() != 2)
    throw ContractError(id + " is a 2x2 mechanism; got " + std::to_string(matrix.machines()) +
                        "x" + std::to_string(matrix.tasks()));
}

}  // namespace

CostMatrix pack_2x2(const Rational& t1, const Rational& t2, const Rational& s1,
                    const Rational& s2) {
  return CostMatrix(2, 2, {{t1, t2}, {s1, s2}});
}

AffineMinimizer2x2Mechanism::AffineMinimizer2x2Mechanism(AffineMinimizerConfig2x2 cfg)
    : cfg_(std::move(cfg)) {
  cfg_.validate();
  info_ = MechanismInfo{"affmin2", "2x2 affine minimizer", "larger set to t-player",
                        /*truthful_verified=*/true, 2, 2, std::nullopt};
}

Allocation AffineMinimizer2x2Mechanism::allocate(const CostMatrix& m) const {
  require_2x2(m, info_.id);
  return affine_minimizer_2x2(m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1), cfg_);
}

RelaxedAffineMinimizer2x2Mechanism::RelaxedAffineMinimizer2x2Mechanism(
    RelaxedAffineMinimizerConfig2x2 cfg)
    : cfg_(std::move(cfg)) {
  info_ = MechanismInfo{"relaxed-affmin2", "2x2 relaxed affine minimizer",
                        "larger set to t-player", /*truthful_verified=*/false, 2, 2,
                        std::nullopt};
}

Allocation RelaxedAffineMinimizer2x2Mechanism::allocate(const CostMatrix& m) const {
  require_2x2(m, info_.id);
  return relaxed_affine_minimizer_2x2(m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1), cfg_);
}

TaskIndependent2x2Mechanism::TaskIndependent2x2Mechanism(BoundaryTable psi1, BoundaryTable psi2)
    : psi1_(std::move(psi1)), psi2_(std::move(psi2)) {
  info_ = MechanismInfo{"taskind2", "2x2 task independent", "boundary to t-player",
                        /*truthful_verified=*/true, 2, 2, std::nullopt};
}

Allocation TaskIndependent2x2Mechanism::allocate(const CostMatrix& m) const {
  require_2x2(m, info_.id);
  return task_independent_2x2(m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1), psi1_, psi2_);
}

OneDimensional2x2Mechanism::OneDimensional2x2Mechanism(OneDimVariant variant,
                                                       BoundaryTable boundary)
    : variant_(variant), boundary_(std::move(boundary)) {
  info_ = MechanismInfo{"onedim2", "2x2 one-dimensional", "boundary to t-player",
                        /*truthful_verified=*/true, 2, 2, std::nullopt};
}

Allocation OneDimensional2x2Mechanism::allocate(const CostMatrix& m) const {
  require_2x2(m, info_.id);
  return one_dimensional_2x2(m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1), variant_, boundary_);
}

Constant2x2Mechanism::Constant2x2Mechanism(AllocLabel label) : label_(label) {
  info_ = MechanismInfo{"const2", "2x2 constant (" + label_name(label) + ")", "n/a",
                        /*truthful_verified=*/true, 2, 2, std::nullopt};
}

Allocation Constant2x2Mechanism::allocate(const CostMatrix& m) const {
  require_2x2(m, info_.id);
  return label_to_allocation(label_);
}

namespace {

PiecewiseLinear parse_table(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of [x, y] pairs");
  std::vector<PiecewiseLinear::Point> points;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2)
      throw ConfigError(std::string(what) + " entries must be [x, y] pairs");
    points.emplace_back(parse_rational(p[0].get<std::string>()),
                        parse_rational(p[1].get<std::string>()));
  }
  return PiecewiseLinear(std::move(points));
}

PiecewiseLinear identity_table() {
  return PiecewiseLinear({{Rational(0), Rational(0)}, {Rational(1 << 20), Rational(1 << 20)}});
}

ExtRational parse_pi(const json& pi, const char* key) {
  if (!pi.contains(key)) return ExtRational::finite(Rational(0));
  return ExtRational::parse(pi.at(key).get<std::string>());
}

AffineMinimizerConfig2x2 parse_affmin_config(const json& cfg) {
  AffineMinimizerConfig2x2 out;
  if (cfg.contains("lambdaPrime")) out.lambda_prime = parse_rational(cfg["lambdaPrime"].get<std::string>());
  if (cfg.contains("lambda")) out.lambda = parse_rational(cfg["lambda"].get<std::string>());
  if (cfg.contains("pi")) {
    const auto& pi = cfg["pi"];
    out.pi_both = parse_pi(pi, "12");
    out.pi_task1 = parse_pi(pi, "1");
    out.pi_task2 = parse_pi(pi, "2");
    out.pi_none = parse_pi(pi, "empty");
  }
  out.validate();
  return out;
}

json parse_config_json(const std::string& config_json) {
  if (config_json.empty()) return json::object();
  try {
    json cfg = json::parse(config_json);
    if (!cfg.is_object()) throw ConfigError("mechanism config must be a JSON object");
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid mechanism config JSON: ") + e.what());
  }
}

// Default relaxed config: concave sqrt-shaped tail on s-sum < 1, base affine
// minimizer with offsets >= lambda*D_s so the glued rule stays weakly
// monotone (single-task regions never abut the tail).
RelaxedAffineMinimizerConfig2x2 default_relaxed_config() {
  AffineMinimizerConfig2x2 base;
  base.lambda_prime = Rational(1);
  base.lambda = Rational(1);
  base.pi_both = ExtRational::finite(Rational(0));
  base.pi_task1 = ExtRational::finite(Rational(1));
  base.pi_task2 = ExtRational::finite(Rational(1));
  base.pi_none = ExtRational::finite(Rational(-1));
  // zeta ~ sqrt(x/2) sampled at a few knots
  PiecewiseLinear zeta({{Rational(0), Rational(0)},
                        {make_rational(1, 8), make_rational(1, 4)},
                        {make_rational(1, 2), make_rational(1, 2)},
                        {Rational(1), make_rational(707107, 1000000)},
                        {Rational(2), Rational(1)}});
  return RelaxedAffineMinimizerConfig2x2(std::move(base), Rational(2), Rational(2),
                                         std::move(zeta));
}

}  // namespace

std::unique_ptr<MechanismUnderTest> make_mechanism(const std::string& id,
                                                   const std::string& config_json, int n) {
  const json cfg = parse_config_json(config_json);
  if (id == "vcg") return std::make_unique<VcgMechanism>();
  if (id == "wvcg") return std::make_unique<WeightedVcgMechanism>(n);
  if (id == "maxcost") return std::make_unique<MaxCostMechanism>();
  if (id == "affmin2") return std::make_unique<AffineMinimizer2x2Mechanism>(parse_affmin_config(cfg));
  if (id == "relaxed-affmin2") {
    if (cfg.empty()) return std::make_unique<RelaxedAffineMinimizer2x2Mechanism>(default_relaxed_config());
    AffineMinimizerConfig2x2 base =
        cfg.contains("base") ? parse_affmin_config(cfg["base"]) : AffineMinimizerConfig2x2{};
    if (!cfg.contains("Ds") || !cfg.contains("Dt") || !cfg.contains("zeta"))
      throw ConfigError("relaxed-affmin2 config requires Ds, Dt and zeta");
    return std::make_unique<RelaxedAffineMinimizer2x2Mechanism>(RelaxedAffineMinimizerConfig2x2(
        std::move(base), parse_rational(cfg["Ds"].get<std::string>()),
        parse_rational(cfg["Dt"].get<std::string>()), parse_table(cfg["zeta"], "zeta")));
  }
  if (id == "taskind2") {
    BoundaryTable psi1 = cfg.contains("psi1") ? parse_table(cfg["psi1"], "psi1") : identity_table();
    BoundaryTable psi2 = cfg.contains("psi2") ? parse_table(cfg["psi2"], "psi2") : identity_table();
    return std::make_unique<TaskIndependent2x2Mechanism>(std::move(psi1), std::move(psi2));
  }
  if (id == "onedim2") {
    OneDimVariant variant = OneDimVariant::Bundling;
    if (cfg.contains("variant")) {
      const std::string v = cfg["variant"].get<std::string>();
      if (v == "bundling") variant = OneDimVariant::Bundling;
      else if (v == "task1") variant = OneDimVariant::Task1Only;
      else if (v == "task2") variant = OneDimVariant::Task2Only;
      else throw ConfigError("onedim2 variant must be bundling|task1|task2");
    }
    BoundaryTable boundary =
        cfg.contains("boundary") ? parse_table(cfg["boundary"], "boundary") : identity_table();
    return std::make_unique<OneDimensional2x2Mechanism>(variant, std::move(boundary));
  }
  if (id == "const2") {
    AllocLabel label = AllocLabel::Both;
    if (cfg.contains("label")) label = parse_label(cfg["label"].get<std::string>());
    return std::make_unique<Constant2x2Mechanism>(label);
  }
  throw ConfigError("unknown mechanism id: '" + id + "'");
}

std::vector<std::string> mechanism_ids() {
  return {"vcg", "wvcg", "affmin2", "relaxed-affmin2", "taskind2", "onedim2", "const2", "maxcost"};
}

}  // namespace mechlab::mech
