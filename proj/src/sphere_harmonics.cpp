#include "desing/sphere_harmonics.hpp"

#include <cmath>

namespace desing {

namespace {

// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  const double pi = 3.14159265358979323846264338327950288;
  for (int i = 0; i < n; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = t;
    double p0 = 1.0, p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
    }
    double dp = n * (t * p0 - p1) / (t * t - 1.0);
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

int rank_abs(const Eigen::MatrixXd& A, double tol) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  const auto& R = qr.matrixR();
  int r = 0;
  for (int i = 0; i < std::min(A.rows(), A.cols()); ++i)
    if (std::abs(R(i, i)) > tol * scale) ++r;
  return r;
}

}  // namespace

QuadratureRule build_quadrature(int degree) {
  if (degree > 40) throw std::invalid_argument("quadrature degree capped at 40");
  if (degree < 0) degree = 0;
  // Hopf coordinates: x = (cos(th) cos(p1), cos(th) sin(p1),
  //                        sin(th) cos(p2), sin(th) sin(p2)),
  // dV = cos(th) sin(th) dth dp1 dp2.  Substituting u = cos(2 th) makes the
  // th-integral polynomial in u of degree <= degree, handled by Gauss-
  // Legendre; the circle angles need degree+1 uniform points each.
  const int nu = degree / 2 + 2;
  const int nphi = degree + 2;
  std::vector<double> xu, wu;
  gauss_legendre(nu, xu, wu);

  const double pi = 3.14159265358979323846264338327950288;
  QuadratureRule rule;
  rule.exactness = degree;
  for (int iu = 0; iu < nu; ++iu) {
    const double u = xu[iu];
    const double c2 = (1.0 + u) / 2.0;  // cos^2 th
    const double cth = std::sqrt(c2), sth = std::sqrt(1.0 - c2);
    const double wth = wu[iu] / 4.0;  // cos sin dth = -du/4
    for (int i1 = 0; i1 < nphi; ++i1) {
      const double p1 = 2.0 * pi * i1 / nphi;
      for (int i2 = 0; i2 < nphi; ++i2) {
        const double p2 = 2.0 * pi * i2 / nphi;
        rule.nodes.emplace_back(cth * std::cos(p1), cth * std::sin(p1),
                                sth * std::cos(p2), sth * std::sin(p2));
        rule.weights.push_back(wth * (2.0 * pi / nphi) * (2.0 * pi / nphi));
      }
    }
  }
  return rule;
}

std::vector<Poly4> invariant_harmonic_basis(const GroupAction& G, int k,
                                            int k_cap) {
  if (k > k_cap) throw std::invalid_argument("harmonic degree above cap");
  auto basis = harmonic_basis(k);
  const int n = int(basis.size());

  // project onto invariants: columns of averaged coefficient vectors
  auto monos = monomials_of_degree(k);
  std::map<std::uint32_t, int> index;
  for (int i = 0; i < int(monos.size()); ++i) index[Poly4::pack(monos[i])] = i;

  Eigen::MatrixXd A(int(monos.size()), n);
  for (int j = 0; j < n; ++j) {
    Poly4 avg;
    for (const Mat4& g : G.elements) avg += basis[j].compose_linear(g);
    avg = avg * (1.0 / G.order);
    Eigen::VectorXd col = Eigen::VectorXd::Zero(int(monos.size()));
    for (const auto& [key, c] : avg.terms()) col(index.at(key)) = c;
    A.col(j) = col;
  }
  const int r = rank_abs(A, 1e-9);
  if (r == 0) return {};
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = Eigen::MatrixXd(qr.householderQ()).leftCols(r);

  std::vector<Poly4> inv;
  for (int c = 0; c < r; ++c) {
    Poly4 p;
    for (int t = 0; t < int(monos.size()); ++t)
      if (std::abs(Q(t, c)) > 1e-14) p += Poly4::monomial(monos[t]) * Q(t, c);
    inv.push_back(p);
  }

  // L^2(S^3)-orthonormalize with the exact Gram matrix
  Eigen::MatrixXd Gm(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = a; b < r; ++b) Gm(a, b) = Gm(b, a) = sphere_l2_inner(inv[a], inv[b]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gm);
  Eigen::MatrixXd W = es.operatorInverseSqrt();
  std::vector<Poly4> out(r);
  for (int a = 0; a < r; ++a) {
    Poly4 p;
    for (int b = 0; b < r; ++b)
      if (std::abs(W(b, a)) > 1e-15) p += inv[b] * W(b, a);
    out[a] = p;
  }
  return out;
}

int sym2_component_index(int i, int j) {
  if (i > j) std::swap(i, j);
  static const int tab[4][4] = {{0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};
  return tab[i][j];
}

std::pair<int, int> sym2_component_pair(int c) {
  static const std::pair<int, int> tab[10] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1},
                                              {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};
  return tab[c];
}

namespace {

ModeCoefficients decompose_components(
    const std::vector<std::vector<double>>& comp, const QuadratureRule& quad,
    const GroupAction& G, int k_max) {
  ModeCoefficients out;
  const int nq = int(quad.nodes.size());
  // cache invariant bases evaluated at nodes
  for (int k = 0; k <= k_max; ++k) {
    auto basis = invariant_harmonic_basis(G, k, std::max(16, k_max));
    if (basis.empty()) continue;
    std::vector<std::vector<double>> bval(basis.size(), std::vector<double>(nq));
    for (size_t b = 0; b < basis.size(); ++b)
      for (int qi = 0; qi < nq; ++qi) bval[b][qi] = basis[b].eval(quad.nodes[qi]);
    for (int c = 0; c < int(comp.size()); ++c)
      for (size_t b = 0; b < basis.size(); ++b) {
        double s = 0;
        for (int qi = 0; qi < nq; ++qi) s += quad.weights[qi] * comp[c][qi] * bval[b][qi];
        if (std::abs(s) > 0) out.coef[{c, k, int(b)}] = s;
      }
  }
  for (int c = 0; c < int(comp.size()); ++c) {
    double s = 0;
    for (int qi = 0; qi < nq; ++qi) s += quad.weights[qi] * comp[c][qi] * comp[c][qi];
    out.l2_data += s;
  }
  // prune quadrature dust (it would otherwise masquerade as higher modes)
  const double floor_ = 1e-13 * std::max(1.0, std::sqrt(out.l2_data));
  for (auto it = out.coef.begin(); it != out.coef.end();)
    it = (std::abs(it->second) < floor_) ? out.coef.erase(it) : std::next(it);
  return out;
}

}  // namespace

ModeCoefficients decompose(const std::vector<Eigen::Matrix4d>& data,
                           const QuadratureRule& quad, const GroupAction& G,
                           int k_max, double invariance_tol) {
  if (data.size() != quad.nodes.size())
    throw DecomposeError("data must be sampled at the quadrature nodes");

  std::vector<std::vector<double>> comp(10, std::vector<double>(quad.nodes.size()));
  for (size_t n = 0; n < quad.nodes.size(); ++n)
    for (int c = 0; c < 10; ++c) {
      auto [i, j] = sym2_component_pair(c);
      comp[c][n] = data[n](i, j);
    }

  // Gamma-invariance check through the band-limited reconstruction: project
  // on the full harmonic basis, then compare h with g^T h(g.) g pointwise.
  if (!G.is_trivial()) {
    GroupAction trivial = make_trivial_group();
    std::array<Poly4, 10> rec;
    for (int k = 0; k <= k_max; ++k) {
      auto basis = invariant_harmonic_basis(trivial, k, std::max(16, k_max));
      std::vector<std::vector<double>> bval(basis.size(),
                                            std::vector<double>(quad.nodes.size()));
      for (size_t b = 0; b < basis.size(); ++b)
        for (size_t qi = 0; qi < quad.nodes.size(); ++qi)
          bval[b][qi] = basis[b].eval(quad.nodes[qi]);
      for (int c = 0; c < 10; ++c)
        for (size_t b = 0; b < basis.size(); ++b) {
          double s = 0;
          for (size_t qi = 0; qi < quad.nodes.size(); ++qi)
            s += quad.weights[qi] * comp[c][qi] * bval[b][qi];
          if (std::abs(s) > 1e-300) rec[c] += basis[b] * s;
        }
    }
    auto rec_at = [&](const Vec4& x) {
      Eigen::Matrix4d m;
      for (int c = 0; c < 10; ++c) {
        auto [i, j] = sym2_component_pair(c);
        m(i, j) = m(j, i) = rec[c].eval(x);
      }
      return m;
    };
    double worst = 0.0;
    int worst_elem = -1;
    double scale = 1e-12;
    for (size_t n = 0; n < quad.nodes.size(); n += 11)
      scale = std::max(scale, data[n].cwiseAbs().maxCoeff());
    for (int gi = 1; gi < G.order; ++gi) {
      const Mat4& g = G.elements[gi];
      for (size_t n = 0; n < quad.nodes.size(); n += 11) {
        const Vec4& x = quad.nodes[n];
        double defect =
            (g.transpose() * rec_at(g * x) * g - rec_at(x)).cwiseAbs().maxCoeff();
        if (defect > worst) { worst = defect; worst_elem = gi; }
      }
    }
    if (worst > invariance_tol * scale)
      throw DecomposeError("data not Gamma-invariant; worst group element #" +
                           std::to_string(worst_elem) + " defect " +
                           std::to_string(worst));
  }

  return decompose_components(comp, quad, G, k_max);
}

ModeCoefficients decompose_scalar(const std::vector<double>& data,
                                  const QuadratureRule& quad,
                                  const GroupAction& G, int k_max) {
  if (data.size() != quad.nodes.size())
    throw DecomposeError("data must be sampled at the quadrature nodes");
  return decompose_components({data}, quad, G, k_max);
}

}  // namespace desing
