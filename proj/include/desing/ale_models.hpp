#pragma once

#include <optional>

#include "desing/obstruction.hpp"
#include "desing/radial_metric.hpp"

// Concrete ALE pieces: the Eguchi-Hanson closed form with its invariants
// computed by radial quadrature, the scaling deformation o_1 = 2 Hess u - 4 g
// with its r^-4 coefficient 8 b, and the renormalized volume.

namespace desing {

struct ALEError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScalingDeformation {
  double b = 0.0;          // u = rho^2 + b/rho^2 in the O^4-gauge chart
  double b_area_chart = 0.0;  // same coefficient in the area-radius chart
  double gauge_k = 0.0;       // Hess(rho^-2) component of the metric tail
  double o4_coefficient = 0.0;   // o_1 = coeff * O^4_1 + O(r^-5)
  double renormalized_volume = 0.0;  // area-radius-chart V (<= 0)
  double sup_8b_defect = 0.0;  // sup |r^4 o1(drho,drho) - 8b| on the window
  double fit_residual = 0.0;
  RadialObstructionSamples samples;  // o_1 on the grid, for bulk integrals
};

// Solves -nabla*nabla u = 8 with u = rho^2 + o(1) on a radial Ricci-flat
// model, extracts b and the deformation o_1 = 2 Hess u - 4 g.
ScalingDeformation scaling_deformation(const RadialMetric& m,
                                       double ricci_tol = 1e-7);

struct TopologicalInvariants {
  double chi_tilde = 0.0;
  double tau_tilde = 0.0;
  double weyl_plus_integral = 0.0;   // int |W+|^2 dv
  double weyl_minus_integral = 0.0;  // int |W-|^2 dv
  double tail_estimate = 0.0;        // quadrature tail bound
};

// chi~ = (1/8pi^2) int (scal^2/24 + |W+|^2 + |W-|^2 - 2|ric0|^2) dv and
// tau~ = (1/12pi^2) int (|W+|^2 - |W-|^2) dv by radial quadrature.
TopologicalInvariants gauss_bonnet_invariants(const RadialMetric& m);

// Ricci-flatness certificate: sup of |Ric|_g over a radial sample range,
// using the analytic profile curvature.
double ricci_flat_residual(const RadialMetric& m, double x_lo, double x_hi,
                           int samples = 400);

// Extracts the r^-4 tail of g - g_e in the area-radius chart and splits it
// into t * O^4_1 + k * Hess(rho^-2); returns (t, k, residual).
struct TailDecomposition {
  double t = 0, k = 0, residual = 0;
};
TailDecomposition metric_tail_decomposition(const RadialMetric& m,
                                            double r_lo, double r_hi);

struct ALEModel {
  enum class Kind { EguchiHanson, FlatCone, TableEntry };
  Kind kind = Kind::FlatCone;
  std::string name;
  double scale = 1.0;  // EH bolt radius a
  double gamma_order = 2.0;
  // catalog data (computed or entered-with-citation)
  double chi_tilde = 0, tau_tilde = 0, b = 0;
  int deformation_count = 0;
  bool kahler = true;
  std::string provenance;
  std::optional<RadialMetric> profile;
};

ALEModel make_eguchi_hanson(double a);
ALEModel make_flat_cone_model(double gamma_order);

}  // namespace desing
