#pragma once

#include <functional>
#include <string>

#include "desing/quadratic_jet.hpp"
#include "desing/sphere_harmonics.hpp"

// Obstruction integrals lambda_i pairing the orbifold's quadratic jet
// against the r^-4 deformation basis of an ALE bubble, the gauge-transfer
// identity, the det R+ curvature test, and the orientation scan over
// SO(4)/U(2).

namespace desing {

// Degree -4 deformation leading terms O^4_i, stored exactly.
struct DeformationBasis {
  std::vector<RationalSym2> fields;
  std::vector<std::string> labels;
  bool normalized = false;  // L^2(S^3)-normalized variant
};

// The Eguchi-Hanson / SU(2) triple:
//   O^4_1 = 2 (drho^2 + rho^2 a1^2 - rho^2 a2^2 - rho^2 a3^2)/rho^4
//   O^4_2 = (rho^2 a1.a2 + rho drho.a3)/rho^4
//   O^4_3 = (rho^2 a1.a3 - rho drho.a2)/rho^4
// (signs of the mixed drho terms fixed by exact divergence-freeness).
DeformationBasis o4_basis(bool l2_normalized = false);

// Kronheimer leading asymptotics h_zeta for zeta = (z1,z2,z3) in R^{3k};
// linear in the Gram matrix of the triple.
RationalSym2 kronheimer_leading(const Eigen::MatrixXd& zeta_rows);

struct ObstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// lambda_j = -int_{S^3/Gamma} ( 3 <H2, O_j> + O_j(B_e H2, d_rho) ) dS,
// computed as |Gamma|^-1 times the S^3 integral after an invariance check.
Eigen::VectorXd lambda_integrals(const QuadraticJet& jet,
                                 const DeformationBasis& basis,
                                 const GroupAction& G,
                                 const QuadratureRule& quad);

// Divergence-free-gauge variant.  For dvg jets B_e H = d tr H / 2, so the
// boundary term uses the 1/2-weighted trace gradient; the optional bulk term
// integrates <O_o, o_i> over a sampled radial model (Eguchi-Hanson).
struct RadialObstructionSamples {
  // orbit-frame diagonal entries of o_i on a radial grid (r, f0, f1, f2, f3)
  std::vector<double> r;
  std::vector<Eigen::Vector4d> diag;
  // metric frame weights: |d rho|_g etc., and volume density A B C^2
  std::vector<double> volume_density;        // per unit of the area radius
  std::vector<Eigen::Vector4d> frame_scale;  // g(dx-frame) vs orthonormal
  double gamma_order = 2.0;                  // |Gamma| for the S^3 volume
  // the cutoff chi of the bulk integral ramps from 0 to 1 on [r_cut, 2 r_cut]
  double r_cut = 10.0;
};

Eigen::VectorXd lambda_hat_integrals(const QuadraticJet& jet_divfree,
                                     const Eigen::Matrix4d& O_o,
                                     const DeformationBasis& basis,
                                     const GroupAction& G,
                                     const QuadratureRule& quad,
                                     const RadialObstructionSamples* model);

struct GaugeTransferResult {
  Eigen::VectorXd lambda;
  Eigen::VectorXd lambda_hat;
  double discrepancy = 0.0;
  double gauge_residual = 0.0;  // exactness of delta delta* V = -delta H2
};

// Solves delta delta^* V = -delta H2 for a homogeneous cubic vector field,
// forms Hhat2 = H2 + delta^* V, and compares the two obstruction vectors.
GaugeTransferResult gauge_transfer_check(const QuadraticJet& jet,
                                         const DeformationBasis& basis,
                                         const GroupAction& G,
                                         const QuadratureRule& quad);

struct DetTestResult {
  double det_rplus = 0.0;
  double det_rminus = 0.0;
  double det_full = 0.0;
};

DetTestResult det_rplus_test(const CurvatureOperator& R);

struct ObstructionReport {
  Eigen::VectorXd lambda_at_identity;
  double min_scan_value = 0.0;     // min over orientations of max_i |lambda_i|
  Eigen::Vector3d best_direction;  // SO(4)/U(2) parameter of the minimizer
  bool reflection_used = false;
  double det_rplus = 0.0, det_rminus = 0.0;
  bool obstructed = true;
  double tolerance = 1e-6;
  int grid_points = 0;
  std::string orientation_note;
  // per-grid-point records for CSV export: (v1,v2,v3, l1,l2,l3)
  std::vector<std::array<double, 6>> scan_rows;
};

struct OrientationScanOptions {
  int grid_points = 10000;
  bool include_reflection = true;
  double tolerance = 1e-6;  // on max|lambda_i| with |H2| normalized on S^3
  bool record_rows = false;
};

// Scans lambda(phi^* H2) over the gluing orientations (Fibonacci net on the
// unit self-dual directions, plus a least-squares polish), and cross-checks
// the verdict against det R+ (det R- when reflected).
ObstructionReport orientation_scan(const QuadraticJet& jet,
                                   const DeformationBasis& basis,
                                   const GroupAction& G,
                                   const QuadratureRule& quad,
                                   const OrientationScanOptions& opt = {});

// Closed form of the section-8 space-form pairing: -+ 8 b vol(S^3/Gamma)
// (hyperbolic -, spherical +); zero iff b = 0 iff the bubble is flat.
enum class SpaceForm { Spherical, Hyperbolic };
double spaceform_obstruction(double b, SpaceForm which, const GroupAction& G);

}  // namespace desing
