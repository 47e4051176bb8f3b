#pragma once

#include "desing/sphere_harmonics.hpp"
#include "desing/tensor_fields.hpp"

// Harmonic extension of 2-tensor boundary data on flat annuli
// A_e(eps, 1/eps) via the explicit mode system, and the constant/decaying
// decoupling with its measured estimate constants.

namespace desing {

struct AnnulusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AnnulusProblem {
  double eps = 0.1;  // inner radius; outer radius is 1/eps
  GroupAction G;
  // componentwise boundary data sampled at quadrature nodes scaled to the
  // two radii: inner[n], outer[n] are the full 4x4 symmetric values
  std::vector<Eigen::Matrix4d> inner, outer;
  int k_max = 12;
  double eps_admissible = 0.5;  // eps_e threshold
};

// Harmonic field as explicit mode data: per (component, degree, index) the
// growth coefficients (eps r)^k Hk+ and (r/eps)^{-2-k} Hk-.
struct HarmonicModeField {
  struct Term {
    int component, k, index;
    double plus, minus;
  };
  std::vector<Term> terms;
  double eps = 0.1;
  GroupAction G;
  int k_max = 12;
  double truncation_residual = 0.0;  // boundary L^2 mass above k_max

  Eigen::Matrix4d eval(const Vec4& x) const;
  double eval_component(int component, const Vec4& x) const;
};

// Solves the Dirichlet problem componentwise through the mode system
//   Hk+ = (Hk(1/eps) - eps^{4+2k} Hk(eps)) / (1 - eps^{4+4k})
//   Hk- = (Hk(eps) - eps^{2k} Hk(1/eps)) / (1 - eps^{4+4k}).
HarmonicModeField dirichlet_extend(const AnnulusProblem& p,
                                   const QuadratureRule& quad,
                                   double tail_warn_tol = 1e-6);

// C^0_beta-type weighted sups on the annulus; eta(r) =
// max((r1/r)^beta, (r/r2)^beta).  plain = unweighted sup.
struct AnnulusNorms {
  double eta_weighted = 0.0;
  double plain = 0.0;
};

struct DecoupledSolution {
  Eigen::Matrix4d H0 = Eigen::Matrix4d::Zero();  // constant traceless part
  HarmonicModeField H_star;                      // decaying/linear harmonic part
  // norms: |H_star| in the C^0_1-type weight, |h - H0 - H_star| in C^0_beta
  AnnulusNorms hstar_norm_c01;
  AnnulusNorms remainder_norm_c0beta;
  double anchor_value = 0.0;  // |(h - H0 - H_star)(x0)|, should vanish
  double laplacian_check = 0.0;
};

// The paper's construction: H := (H0+ - c0/(1-eps^2)) +
// (H* + eps^2 c0 / ((1-eps^2) r^2)) with c0 = (h - Htilde)(x0); the
// remainder h - H0 - H_star vanishes at x0 and on S(eps), is constant on
// S(1/eps).  h is a field on the whole annulus.
DecoupledSolution decouple(const std::function<Eigen::Matrix4d(const Vec4&)>& h,
                           double eps, const GroupAction& G,
                           const QuadratureRule& quad, int k_max, double beta,
                           const Vec4& x0 = Vec4(1, 0, 0, 0));

// Evaluates h minus the harmonic extension on a radial x angular grid and
// reports the two measured constants of the decoupling estimates over a
// family of test fields.
struct DecouplingConstants {
  double c_hstar = 0.0;      // sup |H*|_{C^0_1} / |h - H0|_{C^0_beta}
  double c_remainder = 0.0;  // sup |h-H0-H*|_{C^0_beta} / |P_e h|_{r^-2 C^0_beta}
  int kernel_cases = 0;      // families with P_e h = 0 (reported absolutely)
  double kernel_remainder = 0.0;
};

struct TestFamilyField {
  // evaluator for h and for P_e h = (1/2) nabla* nabla h (componentwise)
  std::function<Eigen::Matrix4d(const Vec4&)> h;
  std::function<Eigen::Matrix4d(const Vec4&)> Peh;  // null -> kernel family
  bool in_kernel = false;
};

DecouplingConstants verify_decoupling_estimates(
    const std::vector<TestFamilyField>& family, double eps, double beta,
    const GroupAction& G, const QuadratureRule& quad, int k_max = 12);

}  // namespace desing
