#include "desing/group_action.hpp"

#include <complex>

namespace desing {

bool group_in_su2(const GroupAction& G) {
  // C^2 = (x0 + i x1, x2 + i x3).  G c U(2) iff it commutes with the complex
  // structure J diag-block; then reduce to the complex 2x2 matrix and test
  // det_C = 1 (equivalently G preserves dz1 ^ dz2).
  Mat4 J = Mat4::Zero();
  J(0, 1) = -1; J(1, 0) = 1; J(2, 3) = -1; J(3, 2) = 1;
  for (const Mat4& g : G.elements) {
    if ((g * J - J * g).cwiseAbs().maxCoeff() > 1e-9) return false;
    using C = std::complex<double>;
    Eigen::Matrix2cd u;
    u(0, 0) = C(g(0, 0), g(1, 0));
    u(1, 0) = C(g(2, 0), g(3, 0));
    u(0, 1) = C(g(0, 2), g(1, 2));
    u(1, 1) = C(g(2, 2), g(3, 2));
    if (std::abs(u.determinant() - C(1, 0)) > 1e-9) return false;
  }
  return true;
}

double invariance_defect(const GroupAction& G,
                         const std::function<Eigen::Matrix4d(const Vec4&)>& h,
                         const std::vector<Vec4>& samples) {
  double worst = 0.0;
  for (const Mat4& g : G.elements)
    for (const Vec4& x : samples) {
      Eigen::Matrix4d lhs = g.transpose() * h(g * x) * g;
      worst = std::max(worst, (lhs - h(x)).cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace desing
