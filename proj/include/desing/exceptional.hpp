#pragma once

#include <vector>

#include "desing/group_action.hpp"
#include "desing/tensor_fields.hpp"

// Exceptional-value enumeration for delta delta^* on the flat cone R^4/Gamma,
// and the dimension counts of homogeneous componentwise-harmonic 2-tensors
// that feed the divergence-free-gauge filter.
//
// A value gamma is exceptional when a homogeneous 1-form of pointwise norm
// ~ r^gamma lies in the kernel of delta delta^*.  Solutions have integer
// gamma and components spanned by r^{gamma-k} H_k with H_k harmonic, so the
// enumeration is exact linear algebra on polynomial coefficients.

namespace desing {

struct ExceptionalValue {
  int gamma = 0;
  int multiplicity = 0;  // dim of Gamma-invariant homogeneous solutions
};

struct ExceptionalQuery {
  double lo = -3.0, hi = 2.0;  // open window
  int k_max = 10;              // cap on harmonic content of the components
};

struct ExceptionalResult {
  std::vector<ExceptionalValue> values;
  std::vector<int> flagged_endpoints;  // integer endpoints landing on a value
};

// Brute-force enumeration over the mode catalog: for each integer degree d in
// the window, the kernel dimension of delta delta^* on Gamma-invariant
// 1-forms with components P(x)/rho^{2M}, deg P = 2M + d <= k_max-capped.
ExceptionalResult exceptional_values_vector(const GroupAction& G,
                                            const ExceptionalQuery& q);

// Independent predicted gamma-set from the three 1-form families of the cone
// catalog (growth rates a_j^{+-} - 1, b_j^{+-} -+ 1), with the Gamma-invariant
// eigenfunction existence checked by harmonic-polynomial dimension counts.
// Used as a cross-check against the matrix enumeration.
std::vector<int> catalog_exceptional_candidates(const GroupAction& G,
                                                double lo, double hi,
                                                int k_max);

struct Sym2Filters {
  bool traceless = false;
  bool divergence_free = false;
};

// Dimension of Gamma-invariant homogeneous 2-tensors of the given degree with
// componentwise-harmonic entries, after the requested filters.  Exact.
int harmonic_sym2_dimensions(const GroupAction& G, int degree,
                             const Sym2Filters& f);

}  // namespace desing
