#pragma once

#include <vector>

#include "mechlab/cost_matrix.hpp"
#include "mechlab/errors.hpp"
#include "mechlab/mechanisms.hpp"
#include "mechlab/rational.hpp"

namespace mechlab::mech {

/// Clarke pivot payments for the welfare-minimizing (VCG-family) mechanisms:
/// payment_i = (others' weighted optimum without machine i) - (others'
/// weighted cost under the chosen allocation), scaled by 1/w_i so the
/// resulting utilities are exactly truthful. Plain VCG has all weights 1 and
/// the payments are rational; sqrt-weighted VCG's payments live in
/// Q[sqrt(n-1)], hence the QuadExt result type.
///
/// Throws UnsupportedMechanismError for mechanisms outside the VCG family.
std::vector<QuadExt> clarke_payments(const CostMatrix& matrix, const MechanismUnderTest& mech);

/// Utility of machine i under truthful bidding: payment_i - t_i(A_i).
QuadExt clarke_utility(const CostMatrix& matrix, const MechanismUnderTest& mech, int machine);

class UnsupportedMechanismError : public Error {
 public:
  explicit UnsupportedMechanismError(const std::string& what) : Error(what) {}
};

}  // namespace mechlab::mech
