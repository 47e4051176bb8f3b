#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

// Dense-enough multivariate polynomial algebra in the four coordinates of R^4.
// Exponents are packed into a single key so monomials sort deterministically.
// All the cone-geometry operators (divergence, Bianchi, linearized Ricci,
// exceptional-value enumeration) reduce to exact manipulations of these.

namespace desing {

template <typename Scalar = double>
class Poly {
 public:
  using Expo = std::array<int, 4>;

  Poly() = default;
  explicit Poly(Scalar c) {
    if (c != Scalar(0)) coef_[pack({0, 0, 0, 0})] = c;
  }

  static Poly monomial(const Expo& e, Scalar c = Scalar(1)) {
    Poly p;
    if (c != Scalar(0)) p.coef_[pack(e)] = c;
    return p;
  }
  static Poly variable(int i) {
    Expo e{0, 0, 0, 0};
    e[i] = 1;
    return monomial(e);
  }
  // rho^2 = x0^2 + x1^2 + x2^2 + x3^2
  static Poly r2() {
    Poly p;
    for (int i = 0; i < 4; ++i) {
      Expo e{0, 0, 0, 0};
      e[i] = 2;
      p.coef_[pack(e)] = Scalar(1);
    }
    return p;
  }

  bool is_zero(Scalar tol = Scalar(0)) const {
    for (const auto& [k, c] : coef_)
      if (std::abs(c) > tol) return false;
    return true;
  }

  Poly& operator+=(const Poly& o) {
    for (const auto& [k, c] : o.coef_) add_term(k, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [k, c] : o.coef_) add_term(k, -c);
    return *this;
  }
  Poly operator+(const Poly& o) const { Poly p = *this; p += o; return p; }
  Poly operator-(const Poly& o) const { Poly p = *this; p -= o; return p; }
  Poly operator-() const { return *this * Scalar(-1); }

  Poly operator*(Scalar s) const {
    Poly p;
    if (s == Scalar(0)) return p;
    for (const auto& [k, c] : coef_) p.coef_[k] = c * s;
    return p;
  }
  friend Poly operator*(Scalar s, const Poly& p) { return p * s; }

  Poly operator*(const Poly& o) const {
    Poly p;
    for (const auto& [ka, ca] : coef_)
      for (const auto& [kb, cb] : o.coef_) {
        Expo ea = unpack(ka), eb = unpack(kb);
        Expo e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]};
        p.add_term(pack(e), ca * cb);
      }
    p.prune();
    return p;
  }

  Poly deriv(int i) const {
    Poly p;
    for (const auto& [k, c] : coef_) {
      Expo e = unpack(k);
      if (e[i] == 0) continue;
      Scalar nc = c * Scalar(e[i]);
      e[i] -= 1;
      p.add_term(pack(e), nc);
    }
    return p;
  }

  Poly laplacian() const {
    Poly p;
    for (int i = 0; i < 4; ++i) p += deriv(i).deriv(i);
    return p;
  }

  Scalar eval(const Eigen::Matrix<Scalar, 4, 1>& x) const {
    Scalar v = Scalar(0);
    for (const auto& [k, c] : coef_) {
      Expo e = unpack(k);
      Scalar m = c;
      for (int i = 0; i < 4; ++i)
        for (int n = 0; n < e[i]; ++n) m *= x(i);
      v += m;
    }
    return v;
  }

  // p(Gx) for a linear map G.
  Poly compose_linear(const Eigen::Matrix<Scalar, 4, 4>& G) const {
    std::array<Poly, 4> rows;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j)
        if (G(i, j) != Scalar(0)) rows[i] += variable(j) * G(i, j);
    }
    Poly out;
    for (const auto& [k, c] : coef_) {
      Expo e = unpack(k);
      Poly term(c);
      for (int i = 0; i < 4; ++i)
        for (int n = 0; n < e[i]; ++n) term = term * rows[i];
      out += term;
    }
    out.prune();
    return out;
  }

  int degree() const {
    int d = -1;
    for (const auto& [k, c] : coef_) {
      (void)c;
      Expo e = unpack(k);
      d = std::max(d, e[0] + e[1] + e[2] + e[3]);
    }
    return d;
  }

  bool is_homogeneous(int* deg = nullptr) const {
    int d = -2;
    for (const auto& [k, c] : coef_) {
      (void)c;
      Expo e = unpack(k);
      int m = e[0] + e[1] + e[2] + e[3];
      if (d == -2) d = m;
      else if (m != d) return false;
    }
    if (deg) *deg = d;
    return true;
  }

  void prune(Scalar tol = Scalar(0)) {
    for (auto it = coef_.begin(); it != coef_.end();) {
      if (std::abs(it->second) <= tol) it = coef_.erase(it);
      else ++it;
    }
  }

  Scalar max_abs_coef() const {
    Scalar m = Scalar(0);
    for (const auto& [k, c] : coef_) { (void)k; m = std::max(m, std::abs(c)); }
    return m;
  }

  const std::map<std::uint32_t, Scalar>& terms() const { return coef_; }

  Scalar coef(const Expo& e) const {
    auto it = coef_.find(pack(e));
    return it == coef_.end() ? Scalar(0) : it->second;
  }
  void set_coef(const Expo& e, Scalar c) {
    if (c == Scalar(0)) coef_.erase(pack(e));
    else coef_[pack(e)] = c;
  }

  static std::uint32_t pack(const Expo& e) {
    return (std::uint32_t(e[0]) << 24) | (std::uint32_t(e[1]) << 16) |
           (std::uint32_t(e[2]) << 8) | std::uint32_t(e[3]);
  }
  static Expo unpack(std::uint32_t k) {
    return Expo{int(k >> 24) & 0xff, int(k >> 16) & 0xff, int(k >> 8) & 0xff,
                int(k) & 0xff};
  }

 private:
  void add_term(std::uint32_t k, Scalar c) {
    auto [it, fresh] = coef_.try_emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (it->second == Scalar(0)) coef_.erase(it);
    }
  }

  std::map<std::uint32_t, Scalar> coef_;
};

using Poly4 = Poly<double>;

// All monomial exponents of total degree n in 4 variables.
inline std::vector<std::array<int, 4>> monomials_of_degree(int n) {
  std::vector<std::array<int, 4>> v;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n - a; ++b)
      for (int c = 0; c <= n - a - b; ++c)
        v.push_back({a, b, c, n - a - b - c});
  return v;
}

// Basis of harmonic homogeneous polynomials of degree k (dimension (k+1)^2),
// computed as the kernel of the Laplacian on degree-k coefficients.
std::vector<Poly4> harmonic_basis(int k);

// Exact integral of a monomial over the unit S^3 (zero unless all exponents
// even); returns the rational multiple of pi^2.
double sphere_monomial_integral(const std::array<int, 4>& e);

// Exact L^2(S^3) inner product of two polynomials.
double sphere_l2_inner(const Poly4& p, const Poly4& q);

}  // namespace desing
