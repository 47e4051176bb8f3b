#pragma once

#include <map>
#include <vector>

#include "desing/group_action.hpp"
#include "desing/poly.hpp"

// Quadrature on S^3 and Gamma-invariant spherical-harmonic decomposition.
// Harmonics are restrictions of harmonic homogeneous polynomials, so the
// group projection and the orthonormalization are plain linear algebra.

namespace desing {

struct QuadratureRule {
  std::vector<Vec4> nodes;      // on the unit S^3
  std::vector<double> weights;  // sum = 2 pi^2
  int exactness = 0;

  double integrate(const std::vector<double>& f) const {
    double s = 0;
    for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f[i];
    return s;
  }
};

// Product rule: Gauss-Legendre in the Hopf angle, uniform in the two circle
// angles; exact for polynomials up to the requested degree.
QuadratureRule build_quadrature(int degree);

// L^2(S^3)-orthonormal basis of Gamma-invariant harmonic polynomials of
// degree k; restrictions have Laplace eigenvalue k(k+2).
std::vector<Poly4> invariant_harmonic_basis(const GroupAction& G, int k,
                                            int k_cap = 16);

// Coefficients of sampled data against the invariant bases, componentwise.
// component: 0..9 indexes the symmetric pairs (i<=j) for 2-tensors, or 0 for
// scalars.
struct ModeCoefficients {
  struct Key {
    int component;
    int k;
    int index;
    bool operator<(const Key& o) const {
      if (component != o.component) return component < o.component;
      if (k != o.k) return k < o.k;
      return index < o.index;
    }
  };
  std::map<Key, double> coef;
  double l2_data = 0.0;  // quadrature L^2 norm^2 of the input

  double parseval_defect() const {
    double s = 0;
    for (auto& [k, v] : coef) s += v * v;
    return std::abs(s - l2_data);
  }
};

struct DecomposeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sym2 data sampled at quadrature nodes (10 components per node, pairs
// (0,0),(0,1),...,(3,3) with i<=j).
ModeCoefficients decompose(const std::vector<Eigen::Matrix4d>& data,
                           const QuadratureRule& quad, const GroupAction& G,
                           int k_max, double invariance_tol = 1e-8);

// Scalar variant.
ModeCoefficients decompose_scalar(const std::vector<double>& data,
                                  const QuadratureRule& quad,
                                  const GroupAction& G, int k_max);

int sym2_component_index(int i, int j);
std::pair<int, int> sym2_component_pair(int c);

}  // namespace desing
