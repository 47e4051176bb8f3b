#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "desing/group_action.hpp"

// Hitchin-Thorpe bookkeeping on desingularization trees, in exact rational
// arithmetic: additivity of the corrected invariants, inequality slack,
// equality-case diagnosis, and the spin/SU(2) applicability flag.

namespace desing {

// minimal exact rational on int64 (the invariants are small fractions)
struct Rational {
  std::int64_t num = 0, den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator-() const { return {-num, den}; }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rational& o) const;
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>=(const Rational& o) const { return !(*this < o); }
  Rational abs() const { return {std::abs(num), den}; }
  bool is_integer() const { return den == 1; }
  double to_double() const { return double(num) / double(den); }
  std::string str() const;
};

struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularPoint {
  std::string id;
  GroupAction group;
};

struct TopPiece {
  std::string name;
  enum class Role { OrbifoldRoot, ALENode } role = Role::ALENode;
  Rational chi_tilde{0};
  Rational tau_tilde{0};  // in the piece's own (Kahler-natural) orientation
  int gamma_infinity_order = 1;       // for ALE nodes
  std::vector<SingularPoint> points;  // for roots (and nodes with singularities)
  bool kahler = false;
  bool spin = false;
  int deformation_count = 0;
  std::string provenance;  // computed-by-quadrature | entered-with-citation

  // Einstein admissibility: 2 chi~ >= 3 |tau~|; Kahler forces equality
  void validate() const;
};

struct TreeNode {
  TopPiece piece;
  std::string parent;    // root name or another node name
  std::string point_id;  // singular point consumed at the parent
  double relative_scale = 0.1;  // t_j in (0,1)
  int orientation = +1;         // +-1: sign applied to tau~ in the gluing
};

struct DesingTree {
  TopPiece root;
  std::vector<TreeNode> nodes;
  std::vector<double> absolute_scales() const;  // T_j along parent paths
};

struct AggregateResult {
  Rational chi;
  Rational tau;
  Rational root_slack;   // 2 chi~(root) - 3 |tau~(root)|
  Rational total_slack;  // 2 chi(M) - 3 |tau(M)|
  int degrees_of_freedom = 0;
};

// chi(M) = chi~(root) + sum chi~(N_j); tau likewise with orientation signs.
// Fully-smoothed trees must give integers; group mismatches are errors.
AggregateResult aggregate(const DesingTree& tree);

enum class HTVerdict { StrictIncrease, Equality, Violation };

struct HTReport {
  HTVerdict verdict = HTVerdict::StrictIncrease;
  AggregateResult sums;
  bool all_nodes_kahler = false;
  bool orientations_aligned = false;
  bool det_obstruction_flag = false;  // "det R = 0 required at every point"
  std::vector<std::string> flagged_points;
  std::string diagnosis;
};

HTReport ht_verdict(const DesingTree& tree);

// Points of the root where det R = 0 is forced by a spin structure:
// all singular points with group inside SU(2).
std::vector<std::string> spin_applicability(const DesingTree& tree,
                                            bool manifold_spin);

}  // namespace desing
