#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "desing/frames.hpp"

// Finite subgroups of O(4) acting freely on S^3, given by generator matrices.
// Covers the catalog used as orbifold singularity models: trivial, the cyclic
// SU(2) family 1/n(1,-1), the binary polyhedral groups, and the U(2) family
// 1/dn^2(1, dnm-1).

namespace desing {

struct GroupAction {
  std::vector<Mat4> generators;
  std::vector<Mat4> elements;  // full enumeration, identity first
  int order = 1;
  std::string label = "trivial";

  bool is_trivial() const { return order == 1; }
};

struct GroupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool matrices_close(const Mat4& a, const Mat4& b, double tol = 1e-9) {
  return (a - b).cwiseAbs().maxCoeff() < tol;
}

// Snap floating-point dust (cos(pi) = -1 + eps etc.) so that polynomial
// pullbacks stay exact for the exact-entry groups.
inline Mat4 snap_matrix(Mat4 g) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double& v = g(i, j);
      for (double target : {0.0, 1.0, -1.0, 0.5, -0.5})
        if (std::abs(v - target) < 1e-13) v = target;
    }
  return g;
}

// BFS closure of the generated group; throws if it exceeds max_order.
inline std::vector<Mat4> enumerate_group(const std::vector<Mat4>& gens,
                                         int max_order = 4096) {
  std::vector<Mat4> elems;
  elems.push_back(Mat4::Identity());
  std::vector<Mat4> frontier = elems;
  while (!frontier.empty()) {
    std::vector<Mat4> next;
    for (const Mat4& e : frontier)
      for (const Mat4& g : gens) {
        Mat4 p = snap_matrix(g * e);
        bool found = false;
        for (const Mat4& q : elems)
          if (matrices_close(p, q)) { found = true; break; }
        if (!found) {
          elems.push_back(p);
          next.push_back(p);
          if (int(elems.size()) > max_order)
            throw GroupError("group enumeration exceeded max order");
        }
      }
    frontier = std::move(next);
  }
  return elems;
}

}  // namespace detail

// Validates orthogonality, closure and freeness; throws GroupError with the
// fixed vector named when the action is not free on S^3.
inline GroupAction make_group_from_generators(const std::vector<Mat4>& gens,
                                              const std::string& label) {
  GroupAction G;
  G.label = label;
  G.generators.clear();
  for (const Mat4& g : gens) G.generators.push_back(detail::snap_matrix(g));
  for (const Mat4& g : G.generators) {
    if ((g.transpose() * g - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-12)
      throw GroupError("generator is not orthogonal: " + label);
  }
  G.elements = detail::enumerate_group(G.generators);
  G.order = int(G.elements.size());
  for (const Mat4& g : G.elements) {
    if (detail::matrices_close(g, Mat4::Identity())) continue;
    Eigen::EigenSolver<Mat4> es(g);
    for (int i = 0; i < 4; ++i) {
      const auto ev = es.eigenvalues()(i);
      if (std::abs(ev.real() - 1.0) < 1e-9 && std::abs(ev.imag()) < 1e-9) {
        Vec4 v = es.eigenvectors().col(i).real();
        v.normalize();
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "action not free on S^3: fixed vector (%.6f, %.6f, %.6f, %.6f)",
                      v(0), v(1), v(2), v(3));
        throw GroupError(buf);
      }
    }
  }
  return G;
}

inline GroupAction make_trivial_group() {
  GroupAction G;
  G.elements.push_back(Mat4::Identity());
  return G;
}

// Complex diagonal action 1/q (a1, a2) on C^2 = R^4: generator
// (z1, z2) -> (e^{2 pi i a1/q} z1, e^{2 pi i a2/q} z2), with C^2 realized as
// (x0 + i x1, x2 + i x3).
inline Mat4 cyclic_complex_generator(int q, int a1, int a2) {
  const double pi = 3.14159265358979323846264338327950288;
  const double t1 = 2.0 * pi * a1 / q, t2 = 2.0 * pi * a2 / q;
  Mat4 g = Mat4::Zero();
  g(0, 0) = std::cos(t1); g(0, 1) = -std::sin(t1);
  g(1, 0) = std::sin(t1); g(1, 1) = std::cos(t1);
  g(2, 2) = std::cos(t2); g(2, 3) = -std::sin(t2);
  g(3, 2) = std::sin(t2); g(3, 3) = std::cos(t2);
  return g;
}

// Z_n c SU(2): the A_{n-1} family 1/n(1, -1).  n = 2 gives {+-I}.
inline GroupAction make_cyclic_su2(int n) {
  if (n < 2) throw GroupError("cyclic-SU2 needs n >= 2");
  return make_group_from_generators({cyclic_complex_generator(n, 1, n - 1)},
                                    "cyclic-SU2(" + std::to_string(n) + ")");
}

// U(2) family 1/dn^2(1, dnm-1); free for gcd-compatible parameters.
inline GroupAction make_u2_family(int d, int n, int m) {
  if (d < 1 || n < 2) throw GroupError("U2-family needs d >= 1, n >= 2");
  if (std::gcd(n, m) != 1) throw GroupError("U2-family needs gcd(n,m)=1");
  const int q = d * n * n;
  GroupAction G = make_group_from_generators(
      {cyclic_complex_generator(q, 1, d * n * m - 1)},
      "U2(" + std::to_string(d) + "," + std::to_string(n) + "," + std::to_string(m) + ")");
  if (G.order != q) throw GroupError("U2-family closure has wrong order");
  return G;
}

// Binary polyhedral groups realized by left quaternion multiplication.
inline GroupAction make_binary_polyhedral(const std::string& which) {
  auto L = [](double w, double x, double y, double z) {
    Eigen::Vector4d q(w, x, y, z);
    q.normalize();
    return quat_right_matrix(q);
  };
  std::vector<Mat4> gens;
  std::string label = "binary-" + which;
  if (which == "dihedral") {  // 2D_2 of order 8 (quaternion group) by default
    gens = {L(0, 1, 0, 0), L(0, 0, 1, 0)};
  } else if (which == "tetrahedral") {  // order 24
    gens = {L(0, 1, 0, 0), L(0.5, 0.5, 0.5, 0.5)};
  } else if (which == "octahedral") {  // order 48
    gens = {L(0.5, 0.5, 0.5, 0.5), L(std::sqrt(0.5), std::sqrt(0.5), 0, 0)};
  } else if (which == "icosahedral") {  // order 120
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    gens = {L(0.5, 0.5, 0.5, 0.5), L(phi / 2, 1.0 / (2 * phi), 0.5, 0)};
  } else {
    throw GroupError("unknown binary polyhedral label: " + which);
  }
  return make_group_from_generators(gens, label);
}

// Binary dihedral of arbitrary index: 2D*_n of order 4n.
inline GroupAction make_binary_dihedral(int n) {
  if (n < 2) throw GroupError("binary-dihedral needs n >= 2");
  const double pi = 3.14159265358979323846264338327950288;
  Eigen::Vector4d a(std::cos(pi / n), std::sin(pi / n), 0, 0);
  Eigen::Vector4d b(0, 0, 1, 0);
  return make_group_from_generators(
      {quat_right_matrix(a), quat_right_matrix(b)},
      "binary-dihedral(" + std::to_string(n) + ")");
}

// True iff every element preserves the standard complex structure and has
// complex determinant 1, i.e. Gamma c SU(2).
bool group_in_su2(const GroupAction& G);

// Average of f over the group orbit, as the invariance defect of a sampled
// tensor: max_g |G^T h(Gx) G - h(x)|.
double invariance_defect(const GroupAction& G,
                         const std::function<Eigen::Matrix4d(const Vec4&)>& h,
                         const std::vector<Vec4>& samples);

}  // namespace desing
