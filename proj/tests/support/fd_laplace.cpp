#include "fd_laplace.hpp"

#include <cmath>

namespace desing_test {

namespace {
const double kHalfPi = 1.5707963267948966;
}

Eigen::Vector4d FdGrid::node(int i_s, int j, int k1, int k2) const {
  const double r = std::exp(s_lo() + h_s() * i_s);
  const double th = theta(j);
  const double p1 = 2 * M_PI * k1 / n_p, p2 = 2 * M_PI * k2 / n_p;
  return r * Eigen::Vector4d(std::cos(th) * std::cos(p1), std::cos(th) * std::sin(p1),
                             std::sin(th) * std::cos(p2), std::sin(th) * std::sin(p2));
}

std::vector<std::vector<double>> fd_dirichlet_solve(
    const FdGrid& g, const std::function<double(const Eigen::Vector4d&)>& bc) {
  const int na = g.angular_size();
  const int ni = g.n_s - 1;  // interior shells
  const double hs = g.h_s();
  const double hth = kHalfPi / g.n_th;
  const double hp = 2 * M_PI / g.n_p;

  auto aidx = [&](int j, int k1, int k2) {
    return (j * g.n_p + ((k1 % g.n_p + g.n_p) % g.n_p)) * g.n_p +
           ((k2 % g.n_p + g.n_p) % g.n_p);
  };
  auto gidx = [&](int i, int a) { return i * na + a; };

  // angular operator -Lap_S as a sparse block (same for every shell)
  // finite volume in theta with face weights w = cos sin
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(std::size_t(ni) * na * 9);

  // all rows are scaled by the angular cell measure w_j so the assembled
  // matrix is symmetric positive definite in the plain inner product
  auto cellw = [&](int j) {
    const double th = g.theta(j);
    return std::cos(th) * std::sin(th);
  };
  auto push_angular = [&](int i) {
    for (int j = 0; j < g.n_th; ++j) {
      const double th = g.theta(j);
      const double w = cellw(j);
      const double thp = th + 0.5 * hth, thm = th - 0.5 * hth;
      const double wp = (j + 1 < g.n_th) ? std::cos(thp) * std::sin(thp) : 0.0;
      const double wm = (j > 0) ? std::cos(thm) * std::sin(thm) : 0.0;
      const double c1 = w / (std::cos(th) * std::cos(th));
      const double c2 = w / (std::sin(th) * std::sin(th));
      for (int k1 = 0; k1 < g.n_p; ++k1)
        for (int k2 = 0; k2 < g.n_p; ++k2) {
          const int a = aidx(j, k1, k2);
          double diag = (wp + wm) / (hth * hth) + 2 * c1 / (hp * hp) +
                        2 * c2 / (hp * hp);
          trip.emplace_back(gidx(i, a), gidx(i, a), diag);
          if (j + 1 < g.n_th)
            trip.emplace_back(gidx(i, a), gidx(i, aidx(j + 1, k1, k2)),
                              -wp / (hth * hth));
          if (j > 0)
            trip.emplace_back(gidx(i, a), gidx(i, aidx(j - 1, k1, k2)),
                              -wm / (hth * hth));
          trip.emplace_back(gidx(i, a), gidx(i, aidx(j, k1 + 1, k2)),
                            -c1 / (hp * hp));
          trip.emplace_back(gidx(i, a), gidx(i, aidx(j, k1 - 1, k2)),
                            -c1 / (hp * hp));
          trip.emplace_back(gidx(i, a), gidx(i, aidx(j, k1, k2 + 1)),
                            -c2 / (hp * hp));
          trip.emplace_back(gidx(i, a), gidx(i, aidx(j, k1, k2 - 1)),
                            -c2 / (hp * hp));
        }
    }
  };

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(std::size_t(ni) * na);

  // boundary phi-values (phi = r f)
  std::vector<double> phi_lo(na), phi_hi(na);
  for (int j = 0; j < g.n_th; ++j)
    for (int k1 = 0; k1 < g.n_p; ++k1)
      for (int k2 = 0; k2 < g.n_p; ++k2) {
        const int a = aidx(j, k1, k2);
        Eigen::Vector4d xlo = g.node(0, j, k1, k2);
        Eigen::Vector4d xhi = g.node(g.n_s, j, k1, k2);
        phi_lo[a] = xlo.norm() * bc(xlo);
        phi_hi[a] = xhi.norm() * bc(xhi);
      }

  // (-d_ss + 1) part and boundary contributions (also w_j-scaled)
  for (int i = 0; i < ni; ++i) {
    push_angular(i);
    for (int j = 0; j < g.n_th; ++j) {
      const double w = cellw(j);
      for (int k1 = 0; k1 < g.n_p; ++k1)
        for (int k2 = 0; k2 < g.n_p; ++k2) {
          const int a = aidx(j, k1, k2);
          trip.emplace_back(gidx(i, a), gidx(i, a), w * (2.0 / (hs * hs) + 1.0));
          if (i > 0)
            trip.emplace_back(gidx(i, a), gidx(i - 1, a), -w / (hs * hs));
          else rhs(gidx(i, a)) += w * phi_lo[a] / (hs * hs);
          if (i + 1 < ni)
            trip.emplace_back(gidx(i, a), gidx(i + 1, a), -w / (hs * hs));
          else rhs(gidx(i, a)) += w * phi_hi[a] / (hs * hs);
        }
    }
  }

  Eigen::SparseMatrix<double> A(std::size_t(ni) * na, std::size_t(ni) * na);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper>
      cg;
  cg.setTolerance(1e-12);
  cg.setMaxIterations(20000);
  cg.compute(A);
  Eigen::VectorXd phi = cg.solve(rhs);

  std::vector<std::vector<double>> f(g.n_s + 1, std::vector<double>(na));
  for (int a = 0; a < na; ++a) {
    f[0][a] = phi_lo[a] / g.node(0, 0, 0, 0).norm();
    f[g.n_s][a] = phi_hi[a] / g.node(g.n_s, 0, 0, 0).norm();
  }
  for (int i = 0; i < ni; ++i) {
    const double r = std::exp(g.s_lo() + g.h_s() * (i + 1));
    for (int a = 0; a < na; ++a) f[i + 1][a] = phi(gidx(i, a)) / r;
  }
  return f;
}

double fd_relative_l2(const FdGrid& g,
                      const std::vector<std::vector<double>>& fgrid,
                      const std::function<double(const Eigen::Vector4d&)>& ref) {
  double num = 0, den = 0;
  for (int i = 0; i <= g.n_s; ++i) {
    const double r = std::exp(g.s_lo() + g.h_s() * i);
    const double wr = r * r * r * r * g.h_s() *
                      ((i == 0 || i == g.n_s) ? 0.5 : 1.0);  // r^3 dr = r^4 ds
    for (int j = 0; j < g.n_th; ++j) {
      const double th = g.theta(j);
      const double dA = std::cos(th) * std::sin(th);
      for (int k1 = 0; k1 < g.n_p; ++k1)
        for (int k2 = 0; k2 < g.n_p; ++k2) {
          const int a = (j * g.n_p + k1) * g.n_p + k2;
          const double v = fgrid[i][a];
          const double w = ref(g.node(i, j, k1, k2));
          num += wr * dA * (v - w) * (v - w);
          den += wr * dA * w * w;
        }
    }
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace desing_test
