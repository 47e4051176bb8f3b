#include "desing/exceptional.hpp"

#include <cmath>

namespace desing {

namespace {

// Rank with an absolute pivot threshold.  Eigen's rank() is relative to the
// largest pivot, which reports full rank for an all-tiny matrix (e.g. the
// zero projector of an empty invariant subspace).
int rank_abs(const Eigen::MatrixXd& A, double tol) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  const auto& R = qr.matrixR();
  int r = 0;
  const int n = std::min(A.rows(), A.cols());
  for (int i = 0; i < n; ++i)
    if (std::abs(R(i, i)) > tol * scale) ++r;
  return r;
}

// Coefficient vector of a polynomial 1-form (components of fixed degree n).
Eigen::VectorXd form_coords(const std::array<Poly4, 4>& comp, int n,
                            const std::map<std::uint32_t, int>& index) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(4 * int(index.size()));
  for (int i = 0; i < 4; ++i)
    for (const auto& [key, c] : comp[i].terms())
      v(i * int(index.size()) + index.at(key)) = c;
  return v;
}

std::map<std::uint32_t, int> monomial_index(int n) {
  std::map<std::uint32_t, int> index;
  int pos = 0;
  for (const auto& e : monomials_of_degree(n)) index[Poly4::pack(e)] = pos++;
  return index;
}

// Dimension of Gamma-invariant degree-k harmonic polynomials.
int invariant_harmonic_dim(const GroupAction& G, int k) {
  auto basis = harmonic_basis(k);
  if (G.is_trivial()) return int(basis.size());
  auto index = monomial_index(k);
  Eigen::MatrixXd A(int(index.size()), int(basis.size()));
  for (int j = 0; j < int(basis.size()); ++j) {
    Poly4 avg;
    for (const Mat4& g : G.elements) avg += basis[j].compose_linear(g);
    avg = avg * (1.0 / G.order);
    Eigen::VectorXd col = Eigen::VectorXd::Zero(int(index.size()));
    for (const auto& [key, c] : avg.terms()) col(index.at(key)) = c;
    A.col(j) = col;
  }
  return rank_abs(A, 1e-9);
}

// Dimension of Gamma-conjugation-invariant antisymmetric matrices (Killing
// fields of S^3 surviving the quotient).
int invariant_killing_dim(const GroupAction& G) {
  // basis of so(4)
  std::vector<Mat4> so4;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      Mat4 m = Mat4::Zero();
      m(a, b) = 1;
      m(b, a) = -1;
      so4.push_back(m);
    }
  Eigen::MatrixXd A(16, 6);
  for (int j = 0; j < 6; ++j) {
    Mat4 avg = Mat4::Zero();
    for (const Mat4& g : G.elements) avg += g.transpose() * so4[j] * g;
    avg /= G.order;
    A.col(j) = Eigen::Map<Eigen::VectorXd>(avg.data(), 16);
  }
  return rank_abs(A, 1e-9);
}

// Orthonormal basis (columns) of the Gamma-invariant subspace of polynomial
// 1-forms of degree n, in the monomial coordinate system.
Eigen::MatrixXd invariant_form_subspace(const GroupAction& G, int n) {
  auto index = monomial_index(n);
  const int nm = int(index.size());
  const int dim = 4 * nm;
  if (G.is_trivial()) return Eigen::MatrixXd::Identity(dim, dim);

  Eigen::MatrixXd P(dim, dim);
  int col = 0;
  for (int i = 0; i < 4; ++i)
    for (const auto& e : monomials_of_degree(n)) {
      // average pullbacks of x^e dx^i
      std::array<Poly4, 4> comp;
      for (const Mat4& g : G.elements) {
        Poly4 f = Poly4::monomial(e).compose_linear(g);
        for (int j = 0; j < 4; ++j)
          if (g(i, j) != 0) comp[j] += f * (g(i, j) / G.order);
      }
      P.col(col++) = form_coords(comp, n, index);
    }
  const int r = rank_abs(P, 1e-9);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(P);
  Eigen::MatrixXd Q = qr.householderQ();
  return Q.leftCols(r);
}

// Kernel dimension of delta delta^* on Gamma-invariant 1-forms of
// homogeneity degree d with denominator rho^{2M}, deg num = n = 2M + d.
int kernel_dim_at_degree(const GroupAction& G, int d, int k_max) {
  int n = (k_max % 2 == (std::abs(d) % 2)) ? k_max : k_max - 1;
  if (n < std::max(d, 0)) n = std::max(d, 0) + ((std::max(d, 0) - d) % 2);
  const int M = (n - d) / 2;

  Eigen::MatrixXd inv = invariant_form_subspace(G, n);
  if (inv.cols() == 0) return 0;

  auto in_index = monomial_index(n);
  auto out_index = monomial_index(n + 2);
  const int nm_in = int(in_index.size());
  const int nm_out = int(out_index.size());

  Eigen::MatrixXd B(4 * nm_out, inv.cols());
  const auto in_monos = monomials_of_degree(n);
  for (int c = 0; c < inv.cols(); ++c) {
    RationalForm w;
    for (int i = 0; i < 4; ++i) {
      Poly4 p;
      for (int t = 0; t < nm_in; ++t) {
        double coef = inv(i * nm_in + t, c);
        if (coef != 0.0) p += Poly4::monomial(in_monos[t]) * coef;
      }
      w.c[i] = RationalScalar(p, M);
    }
    RationalForm img = delta_deltastar(w);
    Eigen::VectorXd col = Eigen::VectorXd::Zero(4 * nm_out);
    for (int i = 0; i < 4; ++i) {
      // normalize all components to denominator rho^{2(M+2)}
      Poly4 num = img.c[i].num;
      for (int t = img.c[i].m; t < M + 2; ++t) num = num * Poly4::r2();
      for (const auto& [key, cc] : num.terms())
        col(i * nm_out + out_index.at(key)) = cc;
    }
    B.col(c) = col;
  }
  return int(inv.cols()) - rank_abs(B, 1e-9);
}

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

}  // namespace

ExceptionalResult exceptional_values_vector(const GroupAction& G,
                                            const ExceptionalQuery& q) {
  if (q.k_max < 3) throw std::invalid_argument("k_max must be >= 3");
  if (!(q.lo < q.hi) || !std::isfinite(q.lo) || !std::isfinite(q.hi))
    throw std::invalid_argument("window must be bounded with lo < hi");

  ExceptionalResult res;
  const int dlo = int(std::ceil(q.lo));
  const int dhi = int(std::floor(q.hi));
  for (int d = dlo; d <= dhi; ++d) {
    const bool at_lo = is_integer(q.lo) && d == int(std::round(q.lo));
    const bool at_hi = is_integer(q.hi) && d == int(std::round(q.hi));
    int mult = kernel_dim_at_degree(G, d, q.k_max);
    if (mult == 0) continue;
    if (at_lo || at_hi)
      res.flagged_endpoints.push_back(d);
    else
      res.values.push_back({d, mult});
  }
  return res;
}

std::vector<int> catalog_exceptional_candidates(const GroupAction& G,
                                                double lo, double hi,
                                                int k_max) {
  // Families on the cone (kernel of delta delta^*):
  //   1. r^{a_j^{+-}} psi, a = +-(1+j), j >= 1, psi an invariant coclosed
  //      eigenform (j = 1: Killing forms of S^3); gamma = a - 1.
  //   2a. r^b d_S phi + b r^{b-1} phi dr, b = -1 +- (1+j); gamma = b - 1.
  //   2b. 2 r^{b+2} d_S phi + b^{-+} r^{b+1} phi dr; gamma = b + 1.
  // phi runs over invariant degree-j harmonics; forms that collapse to zero
  // (constant phi in the d_S-only combinations) are skipped.
  std::vector<int> out;
  auto push = [&](int g) {
    if (g > lo && g < hi) {
      for (int v : out)
        if (v == g) return;
      out.push_back(g);
    }
  };
  // type 1: only the j = 1 (Killing) family can land in [-3, 2]; higher
  // coclosed families have |gamma| >= 2 outside the gauge window.
  if (invariant_killing_dim(G) > 0) {
    push(1);   // a_1^+ - 1
    push(-3);  // a_1^- - 1
  }
  for (int j = 0; j <= k_max; ++j) {
    const int dimj = invariant_harmonic_dim(G, j);
    if (dimj == 0) continue;
    const int bp = -1 + (1 + j), bm = -1 - (1 + j);
    if (j > 0) push(bp - 1);            // 2a with b^+ (zero form when j = 0)
    push(bm - 1);                        // 2a with b^-
    push(bp + 1);                        // 2b with b^+ (r dr at j = 0)
    if (j > 0) push(bm + 1);            // 2b with b^- (zero form when j = 0)
  }
  std::sort(out.begin(), out.end());
  return out;
}

int harmonic_sym2_dimensions(const GroupAction& G, int degree,
                             const Sym2Filters& f) {
  // homogeneous harmonic functions of degree d: H_d (d >= 0) or
  // H_k / rho^{2k+2} with k = -d-2 (d <= -2); none for d = -1.
  if (degree == -1) return 0;
  const int k = degree >= 0 ? degree : -degree - 2;
  const int M = degree >= 0 ? 0 : k + 1;
  const auto hb = harmonic_basis(k);
  const auto monos = monomials_of_degree(k);
  auto index = monomial_index(k);
  const int nm = int(index.size());

  auto coords = [&](const RationalSym2& s) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(10 * nm);
    int p = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        for (const auto& [key, c] : s.c[i][j].num.terms())
          v(p * nm + index.at(key)) = c;
        ++p;
      }
    return v;
  };
  auto field_from_coords = [&](const Eigen::VectorXd& v) {
    RationalSym2 s;
    int p = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        Poly4 pol;
        for (int t = 0; t < nm; ++t)
          if (v(p * nm + t) != 0.0) pol += Poly4::monomial(monos[t]) * v(p * nm + t);
        s.c[i][j] = RationalScalar(pol, M);
        s.c[j][i] = s.c[i][j];
        ++p;
      }
    return s;
  };

  // Gamma-invariant subspace of the (pair, harmonic) basis.  compose_linear
  // preserves degree and rho^2 is invariant, so denominators stay at M.
  std::vector<RationalSym2> fields;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      for (const Poly4& h : hb) {
        RationalSym2 s;
        s.c[i][j] = RationalScalar(h, M);
        s.c[j][i] = s.c[i][j];
        fields.push_back(s);
      }
  Eigen::MatrixXd A(10 * nm, int(fields.size()));
  for (int c = 0; c < int(fields.size()); ++c) {
    RationalSym2 avg;
    for (const Mat4& g : G.elements) avg = avg + pullback(fields[c], g);
    A.col(c) = coords(avg * (1.0 / G.order));
  }
  const int r = rank_abs(A, 1e-9);
  if (r == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = Eigen::MatrixXd(qr.householderQ()).leftCols(r);

  if (!f.traceless && !f.divergence_free) return r;

  // Stack the filter conditions as one coefficient column per invariant
  // basis element; filtered dimension = nullity of that map.
  std::vector<std::vector<double>> cols(r);
  for (int c = 0; c < r; ++c) {
    RationalSym2 s = field_from_coords(Q.col(c));
    if (f.traceless) {
      RationalScalar tr = s.trace();
      std::vector<double> v(nm, 0.0);
      for (const auto& [key, cc] : tr.num.terms()) v[index.at(key)] = cc;
      cols[c].insert(cols[c].end(), v.begin(), v.end());
    }
    if (f.divergence_free) {
      RationalForm dv = divergence_delta(s);
      const int mden = (M == 0) ? 0 : M + 1;      // structural, same for all c
      const int deg_out = (M == 0) ? std::max(k - 1, 0) : k + 1;
      std::array<Poly4, 4> nums;
      for (int i = 0; i < 4; ++i) {
        Poly4 num = dv.c[i].num;
        for (int t = dv.c[i].m; t < mden; ++t) num = num * Poly4::r2();
        nums[i] = num;
      }
      auto oidx = monomial_index(deg_out);
      std::vector<double> v(4 * oidx.size(), 0.0);
      for (int i = 0; i < 4; ++i)
        for (const auto& [key, cc] : nums[i].terms())
          v[i * oidx.size() + oidx.at(key)] = cc;
      cols[c].insert(cols[c].end(), v.begin(), v.end());
    }
  }
  const int nrows = int(cols[0].size());
  Eigen::MatrixXd C(nrows, r);
  for (int c = 0; c < r; ++c)
    C.col(c) = Eigen::Map<Eigen::VectorXd>(cols[c].data(), nrows);
  return r - rank_abs(C, 1e-9);
}

}  // namespace desing
