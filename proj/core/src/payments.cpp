#include "mechlab/payments.hpp"

namespace mechlab::mech {

namespace {

// w_i * t as a QuadExt: player 0 carries weight sqrt(d), all others weight 1.
QuadExt weighted(const Rational& t, int machine, unsigned long d) {
  if (machine == 0) return QuadExt(Rational(0), t, d);
  return QuadExt(t, Rational(0), d);
}

}  // namespace

std::vector<QuadExt> clarke_payments(const CostMatrix& matrix, const MechanismUnderTest& mech) {
  const auto& info = mech.info();
  if (!info.vcg_weight_d)
    throw UnsupportedMechanismError("Clarke payments require a welfare-minimizing mechanism; '" +
                                    info.id + "' is not in the VCG family");
  const unsigned long d = *info.vcg_weight_d;
  const Allocation alloc = mech.allocate(matrix);
  std::vector<QuadExt> payments;
  payments.reserve(matrix.machines());
  for (int i = 0; i < matrix.machines(); ++i) {
    // The weighted welfare decomposes per task, so the others' optimum
    // without machine i is the per-task minimum over the remaining machines.
    QuadExt others_opt = QuadExt(Rational(0), Rational(0), d);
    QuadExt others_at_alloc = QuadExt(Rational(0), Rational(0), d);
    for (int j = 0; j < matrix.tasks(); ++j) {
      QuadExt best = QuadExt(Rational(0), Rational(0), d);
      bool first = true;
      for (int k = 0; k < matrix.machines(); ++k) {
        if (k == i) continue;
        QuadExt w = weighted(matrix.at(k, j), k, d);
        if (first || w < best) {
          best = w;
          first = false;
        }
      }
      others_opt += best;
      const int holder = alloc.machine_of(j);
      if (holder != i) others_at_alloc += weighted(matrix.at(holder, j), holder, d);
    }
    QuadExt pivot = others_opt - others_at_alloc;
    payments.push_back(i == 0 && d != 1 ? pivot.div_by_sqrt() : pivot);
  }
  return payments;
}

QuadExt clarke_utility(const CostMatrix& matrix, const MechanismUnderTest& mech, int machine) {
  const auto payments = clarke_payments(matrix, mech);
  const Allocation alloc = mech.allocate(matrix);
  Rational own_cost = machine_load(matrix, alloc, machine);
  return payments[machine] - QuadExt::rational(own_cost);
}

}  // namespace mechlab::mech
