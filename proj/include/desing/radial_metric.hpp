#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Cohomogeneity-one metrics g = A(x)^2 dx^2 + B^2 (rho a1)^2
// + C^2 ((rho a2)^2 + (rho a3)^2) in an arbitrary radial coordinate x, with
// analytic profiles carrying two derivatives, and the diagonal Bianchi-IX
// curvature in the orthonormal frame.

namespace desing {

struct ProfileValue {
  double f = 0, df = 0, ddf = 0;
};

using Profile = std::function<ProfileValue(double)>;

inline Profile constant_profile(double c) {
  return [c](double) { return ProfileValue{c, 0, 0}; };
}

struct RadialMetric {
  Profile A, B, C;
  double x_min = 0, x_max = 1;
  std::string name;
  double gamma_order = 1.0;  // |Gamma| of the link S^3/Gamma
  // closure data at x_min: "cone" (B,C ~ cone over S^3/Gamma), "bolt"
  // (B -> 0, C -> const), "axis" (round closure), "none"
  std::string closure = "none";
  bool truncated_end = false;  // x_max truncates an infinite (ALE) end

  // cone radius of the orbit at x (area radius (B C^2)^{1/3})
  double area_radius(double x) const;
};

// Frame curvature data at one radius.
struct FrameCurvature {
  // sectional curvatures K(e0,ei) and K(ej,ek), mixed terms R_{0i jk}
  Eigen::Vector3d sec_radial;   // A_i
  Eigen::Vector3d sec_orbital;  // B_i (K of the plane missing e_i)
  Eigen::Vector3d mixed;        // C_i
  Eigen::Vector4d ric_diag;     // Ric(e0,e0), Ric(ei,ei)
  double scal = 0;

  // orientation fixed so that Kahler Ricci-flat pieces (Eguchi-Hanson in
  // its complex orientation) have W+ = 0 and tau~ < 0
  Eigen::Matrix3d Rplus() const {
    return ((sec_radial + sec_orbital) / 2 - mixed).asDiagonal();
  }
  Eigen::Matrix3d Rminus() const {
    return ((sec_radial + sec_orbital) / 2 + mixed).asDiagonal();
  }
  Eigen::Matrix3d ric0_block() const {
    return ((sec_radial - sec_orbital) / 2).asDiagonal();
  }
  double weyl_plus_sq() const;   // ||W+||_F^2 (operator norm convention)
  double weyl_minus_sq() const;
  double riem_sq() const;        // scal^2/24 + |W+|^2 + |W-|^2 + ric0 part
  // Ricci deviation from lambda g in the orthonormal frame
  double ricci_residual(double lambda) const {
    return (ric_diag - Eigen::Vector4d::Constant(lambda)).cwiseAbs().maxCoeff();
  }
  double min_frame_sectional() const {
    return std::min(sec_radial.minCoeff(), sec_orbital.minCoeff());
  }
};

// Curvature of the diagonal metric at radius x from the analytic profiles.
FrameCurvature warped_curvature(const RadialMetric& m, double x);

// Richardson-style consistency estimate: the mixed terms recomputed through
// the second Cartan route (c_i' + c_i a_i); large mismatch flags an
// under-resolved profile.
double curvature_consistency_defect(const RadialMetric& m, double x);

// --- stock profiles ---------------------------------------------------------

// flat cone R^4/Gamma: A = 1, B = C = x
RadialMetric flat_cone(double gamma_order, double x_min = 1e-6, double x_max = 100);

// round sphere of curvature 1: A = 1, B = C = sin(x) (orbifold S^4/Gamma
// when gamma_order > 1, singular at both ends)
RadialMetric round_sphere(double gamma_order, double x_min = 1e-6,
                          double x_max = 3.141592653589793 - 1e-6);

// Eguchi-Hanson with bolt radius a, in the bolt-regular coordinate
// x = sqrt((r/a)^4 - 1): r = a (1 + x^2)^{1/4}.  Asymptotic to R^4/Z2.
RadialMetric eguchi_hanson_profile(double a, double x_max_cone_radius = 100);

// sin-warp dr^2 + (sin((1+chi) r)/(1+chi))^2 g_{S^3/Gamma} with the log
// cutoff chi supported on [0, b*eps], = 1 on [0, eps].  The 1/(1+chi)
// normalization closes the cone smoothly and realizes constant curvature
// (1+chi)^2 on the chi-constant regions (the radius-1/2 sphere inside).
RadialMetric sin_warp_metric(double eps, double bwarp, double gamma_order);

// EH cone radius r(x) and its inverse x(r)
double eh_cone_radius(double a, double x);
double eh_x_of_cone_radius(double a, double r);

}  // namespace desing
