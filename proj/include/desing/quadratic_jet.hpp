#pragma once

#include <optional>
#include <random>

#include "desing/group_action.hpp"
#include "desing/tensor_fields.hpp"

// Quadratic jets H2 (the r^2 terms of an Einstein metric in geodesic normal
// coordinates) and the algebraic curvature operator at a point.  The single
// coordinate convention of the repo:
//
//     g_ij = delta_ij - (1/3) R_{ikjl} x^k x^l + O(|x|^3),
//
// so jets and curvature convert through H2_ij = -(1/3) R_{ikjl} x^k x^l.

namespace desing {

// 6x6 curvature endomorphism of Lambda^2 in the split basis
// w^+-_a = (e^0^e^a -++ e^b^e^c)/sqrt2; Einstein inputs have ric0 = 0 and
// tr Rplus = tr Rminus = scal/4.
struct CurvatureOperator {
  Eigen::Matrix3d Rplus = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d Rminus = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d ric0 = Eigen::Matrix3d::Zero();  // mixed block
  double scal = 0.0;
  bool reversed_orientation = false;

  static CurvatureOperator round_sphere(double k = 1.0) {
    CurvatureOperator R;
    R.Rplus = Eigen::Matrix3d::Identity() * k;
    R.Rminus = Eigen::Matrix3d::Identity() * k;
    R.scal = 12.0 * k;
    return R;
  }
  static CurvatureOperator from_weyl(double lambda, const Eigen::Matrix3d& Wp,
                                     const Eigen::Matrix3d& Wm) {
    CurvatureOperator R;
    R.Rplus = Eigen::Matrix3d::Identity() * (lambda / 3.0) + Wp;
    R.Rminus = Eigen::Matrix3d::Identity() * (lambda / 3.0) + Wm;
    R.scal = 4.0 * lambda;
    return R;
  }

  Eigen::Matrix<double, 6, 6> full() const {
    Eigen::Matrix<double, 6, 6> m;
    m.block<3, 3>(0, 0) = Rplus;
    m.block<3, 3>(3, 3) = Rminus;
    m.block<3, 3>(0, 3) = ric0;
    m.block<3, 3>(3, 0) = ric0.transpose();
    return m;
  }
};

// The self-dual/anti-self-dual 2-form basis as antisymmetric 4x4 matrices,
// normalized to unit Lambda^2 norm (<w,w> = w_ij w_ij / 2 = 1).
Eigen::Matrix4d lambda2_basis(int a, bool selfdual);

// Full algebraic curvature tensor R_{ijkl} from the operator.
using Curv4 = std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4>;
Curv4 curvature_tensor(const CurvatureOperator& R);
CurvatureOperator curvature_operator_from_tensor(const Curv4& R);

struct QuadraticJet {
  // T[c][kl]: coefficient of x^k x^l in component pair c (i<=j), with
  // T[c] symmetric 4x4
  std::array<Eigen::Matrix4d, 10> T;
  double lambda = 0.0;  // Einstein constant of the ambient orbifold

  QuadraticJet() {
    for (auto& m : T) m.setZero();  // Eigen does not value-initialize
  }

  Eigen::Matrix4d component_matrix(const Vec4& x) const;  // H2(x)
  RationalSym2 as_field() const;
  QuadraticJet pullback_by(const Mat4& G) const;
  QuadraticJet operator+(const QuadraticJet& o) const;
  QuadraticJet operator*(double s) const;
  double max_abs() const;
  // sup over the unit sphere of |H2|, for tolerance normalization
  double sup_unit_sphere() const;
};

// sup-norm over the unit sphere of d_e Ric(H2) - lambda g_e, exact on the
// polynomial representation.
double linearized_ricci_check(const QuadraticJet& jet);

struct JetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// H2_ij = -(1/3) R_{ikjl} x^k x^l; strict mode rejects non-Einstein input.
QuadraticJet jet_from_curvature(const CurvatureOperator& R, double lambda,
                                bool strict = true);
CurvatureOperator curvature_from_jet(const QuadraticJet& jet);

// model jets: round sphere (lambda = 3), hyperbolic (lambda = -3), flat
QuadraticJet sphere_jet();
QuadraticJet hyperbolic_jet();
QuadraticJet flat_jet();

// Einstein-compatible random jets: random W+-, lambda, mapped through
// jet_from_curvature.  force_detplus_zero plants a kernel direction in R+.
QuadraticJet random_einstein_jet(std::mt19937& rng, bool force_detplus_zero,
                                 double lambda_choice = 0.0,
                                 bool random_lambda = true);

}  // namespace desing
