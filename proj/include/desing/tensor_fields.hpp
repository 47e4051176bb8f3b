#pragma once

#include <array>
#include <stdexcept>

#include "desing/frames.hpp"
#include "desing/poly.hpp"

// Tensor fields on R^4 \ {0} with components P(x) / rho^{2m}.  This class is
// closed under differentiation, so divergences, Bianchi images and linearized
// curvature come out exact (no sampling error).  Negative-degree homogeneous
// fields like the O^4_i deformation terms live here with m > 0.

namespace desing {

template <typename Scalar = double>
struct RationalScalarT {
  Poly<Scalar> num;
  int m = 0;  // denominator rho^{2m}

  RationalScalarT() = default;
  RationalScalarT(Poly<Scalar> p, int mm = 0) : num(std::move(p)), m(mm) {}

  // d/dx_i (P / rho^{2m}) = (rho^2 dP - 2m x_i P) / rho^{2m+2}
  RationalScalarT deriv(int i) const {
    if (m == 0) return {num.deriv(i), 0};
    Poly<Scalar> n = Poly<Scalar>::r2() * num.deriv(i) -
                     Scalar(2 * m) * (Poly<Scalar>::variable(i) * num);
    return {n, m + 1};
  }

  RationalScalarT& operator+=(const RationalScalarT& o) {
    if (m == o.m) {
      num += o.num;
      return *this;
    }
    int M = std::max(m, o.m);
    Poly<Scalar> a = num, b = o.num;
    for (int t = m; t < M; ++t) a = a * Poly<Scalar>::r2();
    for (int t = o.m; t < M; ++t) b = b * Poly<Scalar>::r2();
    num = a + b;
    m = M;
    return *this;
  }
  RationalScalarT operator+(const RationalScalarT& o) const {
    RationalScalarT r = *this;
    r += o;
    return r;
  }
  RationalScalarT operator-() const { return {num * Scalar(-1), m}; }
  RationalScalarT operator-(const RationalScalarT& o) const { return *this + (-o); }
  RationalScalarT operator*(Scalar s) const { return {num * s, m}; }

  Scalar eval(const Eigen::Matrix<Scalar, 4, 1>& x) const {
    Scalar r2 = x.squaredNorm();
    Scalar den = Scalar(1);
    for (int t = 0; t < m; ++t) den *= r2;
    return num.eval(x) / den;
  }

  bool is_zero(Scalar tol) const {
    return num.max_abs_coef() <= tol;
  }
  // zero test scaled to the numerator's own magnitude
  bool is_zero_rel(Scalar tol) const {
    Poly<Scalar> p = num;
    p.prune(p.max_abs_coef() * tol);
    return p.is_zero();
  }
};

using RationalScalar = RationalScalarT<double>;

// Covector field with rational components.
template <typename Scalar = double>
struct RationalFormT {
  std::array<RationalScalarT<Scalar>, 4> c;

  RationalFormT operator+(const RationalFormT& o) const {
    RationalFormT r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  RationalFormT operator-(const RationalFormT& o) const {
    RationalFormT r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }
  RationalFormT operator*(Scalar s) const {
    RationalFormT r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i] * s;
    return r;
  }
  Eigen::Matrix<Scalar, 4, 1> eval(const Eigen::Matrix<Scalar, 4, 1>& x) const {
    Eigen::Matrix<Scalar, 4, 1> v;
    for (int i = 0; i < 4; ++i) v(i) = c[i].eval(x);
    return v;
  }
  Scalar max_abs_num_coef() const {
    Scalar m = Scalar(0);
    for (const auto& ci : c) m = std::max(m, ci.num.max_abs_coef());
    return m;
  }
};

using RationalForm = RationalFormT<double>;

// Symmetric 2-tensor field with rational components.
template <typename Scalar = double>
struct RationalSym2T {
  // stored as full symmetric 4x4 of entries
  std::array<std::array<RationalScalarT<Scalar>, 4>, 4> c;

  static RationalSym2T zero() { return {}; }

  static RationalSym2T metric() {  // g_e
    RationalSym2T h;
    for (int i = 0; i < 4; ++i) h.c[i][i] = RationalScalarT<Scalar>(Poly<Scalar>(Scalar(1)), 0);
    return h;
  }

  RationalSym2T operator+(const RationalSym2T& o) const {
    RationalSym2T r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.c[i][j] = c[i][j] + o.c[i][j];
    return r;
  }
  RationalSym2T operator-(const RationalSym2T& o) const {
    RationalSym2T r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.c[i][j] = c[i][j] - o.c[i][j];
    return r;
  }
  RationalSym2T operator*(Scalar s) const {
    RationalSym2T r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.c[i][j] = c[i][j] * s;
    return r;
  }

  RationalScalarT<Scalar> trace() const {
    RationalScalarT<Scalar> t;
    for (int i = 0; i < 4; ++i) t += c[i][i];
    return t;
  }

  Eigen::Matrix<Scalar, 4, 4> eval(const Eigen::Matrix<Scalar, 4, 1>& x) const {
    Eigen::Matrix<Scalar, 4, 4> m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = c[i][j].eval(x);
    return m;
  }

  Scalar max_abs_num_coef() const {
    Scalar m = Scalar(0);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) m = std::max(m, c[i][j].num.max_abs_coef());
    return m;
  }
};

using RationalSym2 = RationalSym2T<double>;

// --- symmetric products of rational 1-forms --------------------------------

// a.b = (a(x)b + b(x)a)/2, so that drho.drho = drho^2 has (drho^2)(X,X)=drho(X)^2.
template <typename Scalar>
RationalSym2T<Scalar> sym_prod(const RationalFormT<Scalar>& a,
                               const RationalFormT<Scalar>& b) {
  RationalSym2T<Scalar> h;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      RationalScalarT<Scalar> s;
      // (a_i b_j + a_j b_i)/2 -- multiply numerators directly
      RationalScalarT<Scalar> t1{a.c[i].num * b.c[j].num, a.c[i].m + b.c[j].m};
      RationalScalarT<Scalar> t2{a.c[j].num * b.c[i].num, a.c[j].m + b.c[i].m};
      s = (t1 + t2) * Scalar(0.5);
      h.c[i][j] = s;
    }
  return h;
}

// --- flat-space differential operators (exact) -----------------------------

// (delta h)_i = -d^k h_{ki}   (geometers' divergence; B_e = delta + d tr / 2)
template <typename Scalar>
RationalFormT<Scalar> divergence_delta(const RationalSym2T<Scalar>& h) {
  RationalFormT<Scalar> w;
  for (int i = 0; i < 4; ++i) {
    RationalScalarT<Scalar> s;
    for (int k = 0; k < 4; ++k) s += h.c[k][i].deriv(k);
    w.c[i] = -s;
  }
  return w;
}

template <typename Scalar>
RationalFormT<Scalar> differential(const RationalScalarT<Scalar>& f) {
  RationalFormT<Scalar> w;
  for (int i = 0; i < 4; ++i) w.c[i] = f.deriv(i);
  return w;
}

// Bianchi operator B_e h = delta_e h + (1/2) d tr_e h.
template <typename Scalar>
RationalFormT<Scalar> bianchi_apply(const RationalSym2T<Scalar>& h) {
  return divergence_delta(h) + differential(h.trace()) * Scalar(0.5);
}

// (delta^* w)_{ij} = (d_i w_j + d_j w_i)/2 (Killing operator, adjoint of delta)
template <typename Scalar>
RationalSym2T<Scalar> killing_deltastar(const RationalFormT<Scalar>& w) {
  RationalSym2T<Scalar> h;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      h.c[i][j] = (w.c[i].deriv(j) + w.c[j].deriv(i)) * Scalar(0.5);
  return h;
}

// delta delta^* on vector fields (flat metric identifies forms and fields).
template <typename Scalar>
RationalFormT<Scalar> delta_deltastar(const RationalFormT<Scalar>& w) {
  return divergence_delta(killing_deltastar(w));
}

template <typename Scalar>
RationalScalarT<Scalar> rational_laplacian(const RationalScalarT<Scalar>& f) {
  RationalScalarT<Scalar> s;
  for (int i = 0; i < 4; ++i) s += f.deriv(i).deriv(i);
  return s;
}

// Linearized Ricci at the flat metric:
//   dRic(h)_{ij} = 1/2 ( -Lap h_{ij} - d_i d_j tr h + d_i (div h)_j + d_j (div h)_i )
// with (div h)_j = d^k h_{kj}.
template <typename Scalar>
RationalSym2T<Scalar> linearized_ricci_flat(const RationalSym2T<Scalar>& h) {
  RationalFormT<Scalar> div;
  for (int j = 0; j < 4; ++j) {
    RationalScalarT<Scalar> s;
    for (int k = 0; k < 4; ++k) s += h.c[k][j].deriv(k);
    div.c[j] = s;
  }
  RationalScalarT<Scalar> tr = h.trace();
  RationalSym2T<Scalar> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      RationalScalarT<Scalar> lap;
      for (int k = 0; k < 4; ++k) lap += h.c[i][j].deriv(k).deriv(k);
      RationalScalarT<Scalar> v =
          (-lap - tr.deriv(i).deriv(j) + div.c[j].deriv(i) + div.c[i].deriv(j)) *
          Scalar(0.5);
      out.c[i][j] = v;
    }
  return out;
}

// --- the invariant coframe as rational forms -------------------------------

// drho = x_i dx_i / rho: not rational; we use rho*drho (= x_i dx_i) and
// rho^2*alpha_i (= (J_i x)_i dx_i), which are polynomial, and track powers.

template <typename Scalar = double>
RationalFormT<Scalar> rho_drho() {
  RationalFormT<Scalar> w;
  for (int i = 0; i < 4; ++i)
    w.c[i] = RationalScalarT<Scalar>(Poly<Scalar>::variable(i), 0);
  return w;
}

// rho^2 alpha_k as a polynomial 1-form (components (J_k x)_i).
template <typename Scalar = double>
RationalFormT<Scalar> rho2_alpha(int k) {
  RationalFormT<Scalar> w;
  const Mat4& J = Jmat(k);
  for (int i = 0; i < 4; ++i) {
    Poly<Scalar> p;
    for (int j = 0; j < 4; ++j)
      if (J(i, j) != 0) p += Poly<Scalar>::variable(j) * Scalar(J(i, j));
    w.c[i] = RationalScalarT<Scalar>(p, 0);
  }
  return w;
}

// Group action on tensors: (G.h)(x) = G^T h(Gx) G (pullback by x -> Gx).
template <typename Scalar>
RationalSym2T<Scalar> pullback(const RationalSym2T<Scalar>& h,
                               const Eigen::Matrix<Scalar, 4, 4>& G) {
  // components: (G.h)_{ij}(x) = G_{ai} G_{bj} h_{ab}(Gx)
  RationalSym2T<Scalar> out;
  std::array<std::array<Poly<Scalar>, 4>, 4> comp;
  int mden = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) mden = std::max(mden, h.c[a][b].m);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Poly<Scalar> n = h.c[a][b].num;
      for (int t = h.c[a][b].m; t < mden; ++t) n = n * Poly<Scalar>::r2();
      comp[a][b] = n.compose_linear(G);  // rho^2 is G-invariant
    }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Poly<Scalar> p;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          if (G(a, i) != 0 && G(b, j) != 0) p += comp[a][b] * (G(a, i) * G(b, j));
      out.c[i][j] = RationalScalarT<Scalar>(p, mden);
    }
  return out;
}

template <typename Scalar>
RationalFormT<Scalar> pullback(const RationalFormT<Scalar>& w,
                               const Eigen::Matrix<Scalar, 4, 4>& G) {
  RationalFormT<Scalar> out;
  int mden = 0;
  for (int a = 0; a < 4; ++a) mden = std::max(mden, w.c[a].m);
  std::array<Poly<Scalar>, 4> comp;
  for (int a = 0; a < 4; ++a) {
    Poly<Scalar> n = w.c[a].num;
    for (int t = w.c[a].m; t < mden; ++t) n = n * Poly<Scalar>::r2();
    comp[a] = n.compose_linear(G);
  }
  for (int i = 0; i < 4; ++i) {
    Poly<Scalar> p;
    for (int a = 0; a < 4; ++a)
      if (G(a, i) != 0) p += comp[a] * G(a, i);
    out.c[i] = RationalScalarT<Scalar>(p, mden);
  }
  return out;
}

}  // namespace desing
