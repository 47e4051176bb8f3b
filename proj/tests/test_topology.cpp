#include <random>

#include "doctest.h"

#include "desing/topology.hpp"

using namespace desing;

namespace {

TopPiece eh_node(const std::string& name, int orientation_sign = +1) {
  (void)orientation_sign;
  TopPiece p;
  p.name = name;
  p.role = TopPiece::Role::ALENode;
  p.chi_tilde = Rational(3, 2);
  p.tau_tilde = Rational(-1);
  p.gamma_infinity_order = 2;
  p.kahler = true;
  p.deformation_count = 3;
  p.provenance = "computed-by-quadrature";
  return p;
}

TopPiece t4_z2_root() {
  TopPiece p;
  p.name = "T4/Z2";
  p.role = TopPiece::Role::OrbifoldRoot;
  p.chi_tilde = Rational(0);
  p.tau_tilde = Rational(0);
  p.kahler = true;
  p.spin = true;
  p.deformation_count = 9;  // flat traceless torus deformations
  for (int i = 0; i < 16; ++i)
    p.points.push_back({"p" + std::to_string(i), make_cyclic_su2(2)});
  return p;
}

TopPiece s4_z2_root() {
  TopPiece p;
  p.name = "S4/Z2";
  p.role = TopPiece::Role::OrbifoldRoot;
  p.chi_tilde = Rational(1);
  p.tau_tilde = Rational(0);
  p.deformation_count = 0;
  p.points.push_back({"north", make_cyclic_su2(2)});
  p.points.push_back({"south", make_cyclic_su2(2)});
  return p;
}

DesingTree k3_tree() {
  DesingTree t;
  t.root = t4_z2_root();
  for (int i = 0; i < 16; ++i) {
    TreeNode n;
    n.piece = eh_node("EH" + std::to_string(i));
    n.parent = t.root.name;
    n.point_id = "p" + std::to_string(i);
    n.relative_scale = 0.01;
    n.orientation = +1;
    t.nodes.push_back(n);
  }
  return t;
}

}  // namespace

TEST_CASE("K3 bookkeeping: chi 24, tau -16, equality, 57 moduli") {
  DesingTree t = k3_tree();
  auto agg = aggregate(t);
  CHECK(agg.chi == Rational(24));
  CHECK(agg.tau.abs() == Rational(16));
  CHECK(agg.degrees_of_freedom == 57);

  auto rep = ht_verdict(t);
  CHECK(rep.verdict == HTVerdict::Equality);
  CHECK(rep.det_obstruction_flag);
  CHECK(rep.flagged_points.size() == 16);
  CHECK(rep.all_nodes_kahler);
  CHECK(rep.orientations_aligned);
}

TEST_CASE("S4/Z2 with two EH: equality with slack 2; opposite orientation strict") {
  DesingTree t;
  t.root = s4_z2_root();
  for (int i = 0; i < 2; ++i) {
    TreeNode n;
    n.piece = eh_node(i ? "EH-south" : "EH-north");
    n.parent = t.root.name;
    n.point_id = i ? "south" : "north";
    n.relative_scale = 0.05;
    t.nodes.push_back(n);
  }
  auto agg = aggregate(t);
  CHECK(agg.chi == Rational(4));
  CHECK(agg.tau.abs() == Rational(2));
  CHECK(agg.total_slack == Rational(2));
  CHECK(agg.root_slack == Rational(2));
  CHECK(ht_verdict(t).verdict == HTVerdict::Equality);

  t.nodes[1].orientation = -1;
  auto agg2 = aggregate(t);
  CHECK(agg2.tau == Rational(0));
  CHECK(agg2.total_slack == Rational(8));
  auto rep2 = ht_verdict(t);
  CHECK(rep2.verdict == HTVerdict::StrictIncrease);
  CHECK(!rep2.orientations_aligned);
}

TEST_CASE("empty tree, non-kahler node, and error paths") {
  DesingTree t;
  t.root = s4_z2_root();
  auto agg = aggregate(t);
  CHECK(agg.chi == Rational(1));
  CHECK(agg.tau == Rational(0));

  // hypothetical non-Kahler node (2chi~ > 3|tau~|) forces strict increase
  TreeNode n;
  n.piece = eh_node("odd");
  n.piece.kahler = false;
  n.piece.chi_tilde = Rational(2);  // slack 4 - 3 = 1 > 0
  n.parent = t.root.name;
  n.point_id = "north";
  t.nodes.push_back(n);
  CHECK(ht_verdict(t).verdict == HTVerdict::StrictIncrease);

  // reused singular point
  TreeNode dup = t.nodes[0];
  dup.piece.name = "dup";
  dup.piece.chi_tilde = Rational(3, 2);
  dup.piece.kahler = true;
  t.nodes.push_back(dup);
  CHECK_THROWS_WITH_AS(aggregate(t), doctest::Contains("more than once"),
                       TopologyError);
  t.nodes.pop_back();

  // group mismatch: attach a Z3-asymptotic node to a Z2 point
  TreeNode bad = t.nodes[0];
  bad.piece.name = "z3-node";
  bad.piece.gamma_infinity_order = 3;
  bad.point_id = "south";
  t.nodes.push_back(bad);
  CHECK_THROWS_WITH_AS(aggregate(t), doctest::Contains("mismatch"), TopologyError);
  t.nodes.pop_back();

  // admissibility: 2chi~ < 3|tau~| rejected
  TopPiece sick = eh_node("sick");
  sick.tau_tilde = Rational(-2);
  sick.kahler = false;
  CHECK_THROWS_AS(sick.validate(), TopologyError);
}

TEST_CASE("absolute scales multiply along paths") {
  DesingTree t;
  t.root = s4_z2_root();
  TreeNode a;
  a.piece = eh_node("A");
  a.piece.points.push_back({"deep", make_cyclic_su2(2)});
  a.parent = t.root.name;
  a.point_id = "north";
  a.relative_scale = 0.1;
  t.nodes.push_back(a);
  TreeNode b;
  b.piece = eh_node("B");
  b.parent = "A";
  b.point_id = "deep";
  b.relative_scale = 0.01;
  t.nodes.push_back(b);
  auto T = t.absolute_scales();
  CHECK(std::abs(T[0] - 0.1) < 1e-15);
  CHECK(std::abs(T[1] - 0.001) < 1e-15);
}

TEST_CASE("monotonicity: adding admissible nodes never decreases the slack") {
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    DesingTree t;
    t.root = s4_z2_root();
    Rational prev = ht_verdict(t).sums.total_slack;
    const char* pts[2] = {"north", "south"};
    int npts = pick(rng) % 2 + 1;
    for (int i = 0; i < npts; ++i) {
      TreeNode n;
      n.piece = eh_node("N" + std::to_string(i));
      if (pick(rng) == 0) {  // occasionally a strictly admissible piece
        n.piece.chi_tilde = Rational(5, 2);
        n.piece.kahler = false;
      }
      n.orientation = pick(rng) % 2 ? +1 : -1;
      n.parent = t.root.name;
      n.point_id = pts[i];
      t.nodes.push_back(n);
      Rational cur = aggregate(t).total_slack;
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("spin applicability flags exactly the SU(2) points") {
  DesingTree t;
  t.root = s4_z2_root();
  t.root.points.push_back({"u2pt", make_u2_family(1, 3, 2)});  // 1/9(1,5)
  auto flagged = spin_applicability(t, true);
  REQUIRE(flagged.size() == 2);
  CHECK(flagged[0] == "north");
  CHECK(flagged[1] == "south");
  CHECK(spin_applicability(t, false).empty());
}
