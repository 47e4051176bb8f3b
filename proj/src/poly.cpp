#include "desing/poly.hpp"

namespace desing {

std::vector<Poly4> harmonic_basis(int k) {
  const auto monos = monomials_of_degree(k);
  const int n = int(monos.size());
  std::map<std::uint32_t, int> index;
  const auto lower = monomials_of_degree(std::max(k - 2, 0));
  for (int i = 0; i < int(lower.size()); ++i) index[Poly4::pack(lower[i])] = i;

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(k >= 2 ? int(lower.size()) : 1, n);
  for (int j = 0; j < n; ++j) {
    Poly4 lap = Poly4::monomial(monos[j]).laplacian();
    for (const auto& [key, c] : lap.terms()) L(index.at(key), j) = c;
  }
  if (k < 2) L.setZero();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(L);
  lu.setThreshold(1e-10);
  Eigen::MatrixXd K = lu.kernel();  // columns span the harmonic subspace

  std::vector<Poly4> basis;
  for (int c = 0; c < K.cols(); ++c) {
    Poly4 p;
    for (int j = 0; j < n; ++j)
      if (std::abs(K(j, c)) > 1e-13) p.set_coef(monos[j], K(j, c));
    basis.push_back(p);
  }
  return basis;
}

double sphere_monomial_integral(const std::array<int, 4>& e) {
  for (int i = 0; i < 4; ++i)
    if (e[i] % 2 != 0) return 0.0;
  // int_{S^3} prod x_i^{2b_i} = 2 pi^2 * prod (2b_i - 1)!! / prod_{m=2}^{B+1} (2m)
  // derived from Gamma-function form; B = sum b_i.
  const int b0 = e[0] / 2, b1 = e[1] / 2, b2 = e[2] / 2, b3 = e[3] / 2;
  const int B = b0 + b1 + b2 + b3;
  auto doublefact = [](int m) {
    double v = 1.0;
    for (int t = 2 * m - 1; t >= 1; t -= 2) v *= t;
    return v;
  };
  double num = doublefact(b0) * doublefact(b1) * doublefact(b2) * doublefact(b3);
  double den = 1.0;
  for (int m = 2; m <= B + 1; ++m) den *= 2.0 * m;
  const double pi = 3.14159265358979323846264338327950288;
  return 2.0 * pi * pi * num / den;
}

double sphere_l2_inner(const Poly4& p, const Poly4& q) {
  double s = 0.0;
  for (const auto& [ka, ca] : p.terms())
    for (const auto& [kb, cb] : q.terms()) {
      auto ea = Poly4::unpack(ka), eb = Poly4::unpack(kb);
      s += ca * cb *
           sphere_monomial_integral({ea[0] + eb[0], ea[1] + eb[1],
                                     ea[2] + eb[2], ea[3] + eb[3]});
    }
  return s;
}

}  // namespace desing
