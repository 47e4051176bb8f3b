#include "desing/cli_runner.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <set>

#include "json.hpp"

#include "desing/annulus.hpp"
#include "desing/gluing.hpp"
#include "desing/io.hpp"
#include "desing/picard.hpp"
#include "desing/topology.hpp"

namespace desing {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

GroupAction parse_group(const json& j) {
  require_keys(j, {"label", "n", "d", "m"}, "group");
  const std::string label = j.at("label");
  if (label == "trivial") return make_trivial_group();
  if (label == "cyclic-SU2") return make_cyclic_su2(j.at("n"));
  if (label == "U2") return make_u2_family(j.at("d"), j.at("n"), j.at("m"));
  if (label == "binary-dihedral") return make_binary_dihedral(j.at("n"));
  if (label == "binary-tetrahedral") return make_binary_polyhedral("tetrahedral");
  if (label == "binary-octahedral") return make_binary_polyhedral("octahedral");
  if (label == "binary-icosahedral") return make_binary_polyhedral("icosahedral");
  throw ConfigError("unknown group label '" + label + "'");
}

Eigen::Matrix3d parse_mat3(const json& j) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) m(i, k) = j.at(i).at(k).get<double>();
  return m;
}

QuadraticJet parse_jet(const json& j, std::mt19937& rng) {
  require_keys(j, {"kind", "lambda", "wplus", "wminus", "plant_det_zero"},
               "jet");
  const std::string kind = j.at("kind");
  if (kind == "sphere") return sphere_jet();
  if (kind == "hyperbolic") return hyperbolic_jet();
  if (kind == "flat") return flat_jet();
  if (kind == "weyl") {
    const double lambda = j.at("lambda");
    Eigen::Matrix3d Wp = parse_mat3(j.at("wplus"));
    Eigen::Matrix3d Wm = parse_mat3(j.at("wminus"));
    return jet_from_curvature(CurvatureOperator::from_weyl(lambda, Wp, Wm),
                              lambda);
  }
  if (kind == "random")
    return random_einstein_jet(rng, j.value("plant_det_zero", false));
  throw ConfigError("unknown jet kind '" + kind + "'");
}

Rational parse_rational(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  return Rational(j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>());
}

// the named model catalog; computed invariants override conflicting entries
// with a hard error
TopPiece catalog_piece(const std::string& name) {
  TopPiece p;
  if (name == "eguchi-hanson") {
    ALEModel m = make_eguchi_hanson(1.0);
    p.name = name;
    p.role = TopPiece::Role::ALENode;
    p.chi_tilde = Rational(3, 2);
    p.tau_tilde = Rational(-1);
    p.gamma_infinity_order = 2;
    p.kahler = true;
    p.spin = true;
    p.deformation_count = 3;
    p.provenance = "computed-by-quadrature";
    auto inv = gauss_bonnet_invariants(*m.profile);
    if (std::abs(inv.chi_tilde - 1.5) > 1e-5 ||
        std::abs(inv.tau_tilde + 1.0) > 1e-5)
      throw ConfigError(
          "catalog conflict: quadrature invariants of eguchi-hanson disagree "
          "with the stored entry");
    return p;
  }
  if (name == "T4/Z2") {
    p.name = name;
    p.role = TopPiece::Role::OrbifoldRoot;
    p.chi_tilde = Rational(0);
    p.tau_tilde = Rational(0);
    p.kahler = true;
    p.spin = true;
    p.deformation_count = 9;
    p.provenance = "flat: curvature integrals vanish identically";
    for (int i = 0; i < 16; ++i)
      p.points.push_back({"p" + std::to_string(i), make_cyclic_su2(2)});
    return p;
  }
  if (name == "S4/Z2") {
    p.name = name;
    p.role = TopPiece::Role::OrbifoldRoot;
    p.chi_tilde = Rational(1);
    p.tau_tilde = Rational(0);
    p.deformation_count = 0;
    p.provenance = "computed-by-quadrature (constant-curvature profile)";
    p.points.push_back({"north", make_cyclic_su2(2)});
    p.points.push_back({"south", make_cyclic_su2(2)});
    return p;
  }
  throw ConfigError("unknown catalog piece '" + name + "'");
}

TopPiece parse_piece(const json& j) {
  if (j.is_string()) return catalog_piece(j.get<std::string>());
  require_keys(j,
               {"name", "role", "chi_tilde", "tau_tilde", "gamma_infinity_order",
                "kahler", "spin", "deformation_count", "points", "provenance"},
               "piece");
  TopPiece p;
  p.name = j.at("name");
  p.role = j.value("role", std::string("ale-node")) == "orbifold-root"
               ? TopPiece::Role::OrbifoldRoot
               : TopPiece::Role::ALENode;
  p.chi_tilde = parse_rational(j.at("chi_tilde"));
  p.tau_tilde = parse_rational(j.at("tau_tilde"));
  p.gamma_infinity_order = j.value("gamma_infinity_order", 1);
  p.kahler = j.value("kahler", false);
  p.spin = j.value("spin", false);
  p.deformation_count = j.value("deformation_count", 0);
  p.provenance = j.value("provenance", std::string("entered-with-citation"));
  if (j.count("points"))
    for (const auto& pt : j.at("points"))
      p.points.push_back({pt.at("id"), parse_group(pt.at("group"))});
  return p;
}

json load_config(const RunOptions& opt, std::string* raw, std::string* hash) {
  *raw = read_file(opt.config_path);
  *hash = fnv1a_hex(*raw);
  return json::parse(*raw);
}

std::vector<std::pair<std::string, std::string>> base_manifest(
    const std::string& hash, const RunOptions& opt, std::uint64_t seed) {
  return {{"config_hash", hash},
          {"tool_version", kToolVersion},
          {"seed", std::to_string(seed)},
          {"threads", std::to_string(opt.threads)}};
}

}  // namespace

int run_obstruction(const RunOptions& opt) {
  std::string raw, hash;
  json cfg = load_config(opt, &raw, &hash);
  require_keys(cfg,
               {"command", "group", "jet", "basis", "grid_points", "reflection",
                "tolerance", "quadrature_degree", "seed"},
               "obstruction config");
  std::uint64_t seed = opt.seed_overridden ? opt.seed : cfg.value("seed", 0ull);
  std::mt19937 rng(static_cast<unsigned>(seed));

  GroupAction G = parse_group(cfg.at("group"));
  QuadraticJet jet = parse_jet(cfg.at("jet"), rng);
  const std::string basis_name = cfg.value("basis", std::string("eguchi-hanson"));
  if (basis_name != "eguchi-hanson")
    throw ConfigError("only the eguchi-hanson O^4 basis is cataloged");
  auto quad = build_quadrature(cfg.value("quadrature_degree", 14));
  DeformationBasis B = o4_basis(true);

  OrientationScanOptions sopt;
  sopt.grid_points = cfg.value("grid_points", 10000);
  sopt.include_reflection = cfg.value("reflection", true);
  sopt.tolerance = cfg.value("tolerance", 1e-6);
  sopt.record_rows = true;

  ObstructionReport rep = orientation_scan(jet, B, G, quad, sopt);

  std::filesystem::create_directories(opt.out_dir);
  CsvWriter grid;
  grid.header_comment = "config_hash=" + hash;
  grid.columns = {"v1", "v2", "v3", "lambda1", "lambda2", "lambda3"};
  for (auto& r : rep.scan_rows)
    grid.rows.push_back({r[0], r[1], r[2], r[3], r[4], r[5]});
  grid.write(opt.out_dir / "orientation_grid.csv");

  json rj;
  rj["lambda_at_identity"] = {rep.lambda_at_identity(0), rep.lambda_at_identity(1),
                              rep.lambda_at_identity(2)};
  rj["min_scan_value"] = rep.min_scan_value;
  rj["best_direction"] = {rep.best_direction(0), rep.best_direction(1),
                          rep.best_direction(2)};
  rj["reflection_used"] = rep.reflection_used;
  rj["det_rplus"] = rep.det_rplus;
  rj["det_rminus"] = rep.det_rminus;
  rj["verdict"] = rep.obstructed ? "obstructed" : "unobstructed-at-tolerance";
  rj["tolerance"] = rep.tolerance;
  rj["orientation_note"] = rep.orientation_note;
  rj["config_hash"] = hash;
  std::ofstream(opt.out_dir / "obstruction_report.json") << rj.dump(2) << "\n";

  auto mf = base_manifest(hash, opt, seed);
  mf.push_back({"verdict", rep.obstructed ? "obstructed" : "unobstructed"});
  write_manifest(opt.out_dir / "manifest.txt", mf);
  std::cout << (rep.obstructed ? "obstructed" : "unobstructed-at-tolerance")
            << "  min|lambda| = " << rep.min_scan_value
            << "  det R+ = " << rep.det_rplus << "  det R- = " << rep.det_rminus
            << "\n";
  return rep.obstructed ? 1 : 0;
}

int run_hitchin_thorpe(const RunOptions& opt) {
  std::string raw, hash;
  json cfg = load_config(opt, &raw, &hash);
  require_keys(cfg, {"command", "tree", "spin", "seed"}, "hitchin-thorpe config");
  const json& jt = cfg.at("tree");
  require_keys(jt, {"root", "nodes"}, "tree");

  DesingTree tree;
  tree.root = parse_piece(jt.at("root"));
  for (const auto& jn : jt.at("nodes")) {
    require_keys(jn, {"name", "piece", "parent", "point", "scale", "orientation"},
                 "tree node");
    TreeNode n;
    n.piece = jn.count("piece") ? parse_piece(jn.at("piece"))
                                : catalog_piece(jn.at("name"));
    if (jn.count("name")) n.piece.name = jn.at("name");
    n.parent = jn.at("parent");
    n.point_id = jn.at("point");
    n.relative_scale = jn.value("scale", 0.01);
    n.orientation = jn.value("orientation", 1);
    tree.nodes.push_back(n);
  }

  HTReport rep = ht_verdict(tree);
  auto spin_pts = spin_applicability(tree, cfg.value("spin", false));

  std::filesystem::create_directories(opt.out_dir);
  CsvWriter w;
  w.header_comment = "config_hash=" + hash;
  w.columns = {"piece", "chi_tilde", "tau_tilde", "orientation", "kahler"};
  w.string_rows.push_back({tree.root.name, tree.root.chi_tilde.str(),
                           tree.root.tau_tilde.str(), "+", tree.root.kahler ? "1" : "0"});
  for (auto& n : tree.nodes)
    w.string_rows.push_back({n.piece.name, n.piece.chi_tilde.str(),
                             n.piece.tau_tilde.str(),
                             n.orientation >= 0 ? "+" : "-",
                             n.piece.kahler ? "1" : "0"});
  w.write(opt.out_dir / "pieces.csv");

  auto mf = base_manifest(hash, opt, 0);
  mf.push_back({"chi", rep.sums.chi.str()});
  mf.push_back({"tau", rep.sums.tau.str()});
  mf.push_back({"root_slack", rep.sums.root_slack.str()});
  mf.push_back({"total_slack", rep.sums.total_slack.str()});
  mf.push_back({"degrees_of_freedom", std::to_string(rep.sums.degrees_of_freedom)});
  mf.push_back({"verdict", rep.verdict == HTVerdict::Equality ? "equality"
                                                              : "strict-increase"});
  mf.push_back({"det_obstruction_required", rep.det_obstruction_flag ? "1" : "0"});
  {
    std::string pts;
    for (auto& s : rep.flagged_points) pts += (pts.empty() ? "" : ";") + s;
    mf.push_back({"flagged_points", pts});
    std::string sp;
    for (auto& s : spin_pts) sp += (sp.empty() ? "" : ";") + s;
    mf.push_back({"spin_su2_points", sp});
  }
  write_manifest(opt.out_dir / "manifest.txt", mf);

  std::cout << "chi = " << rep.sums.chi.str() << "  tau = " << rep.sums.tau.str()
            << "  slack " << rep.sums.root_slack.str() << " -> "
            << rep.sums.total_slack.str() << "  ["
            << (rep.verdict == HTVerdict::Equality ? "equality" : "strict-increase")
            << "]\n"
            << rep.diagnosis << "\n";
  if (rep.det_obstruction_flag)
    std::cout << "det R = 0 required at: ";
  for (auto& s : rep.flagged_points) std::cout << s << " ";
  if (rep.det_obstruction_flag) std::cout << "\n";
  std::cout << "degrees of freedom: " << rep.sums.degrees_of_freedom << "\n";
  return 0;
}

namespace {

int study_annulus(const json& cfg, const RunOptions& opt, const std::string& hash,
                  std::uint64_t seed) {
  GroupAction G = cfg.count("group") ? parse_group(cfg.at("group"))
                                     : make_cyclic_su2(2);
  const double eps = cfg.value("eps", 0.2);
  const int k_max = cfg.value("k_max", 6);
  auto quad = build_quadrature(cfg.value("quadrature_degree", 12));

  // band-limited random boundary data from the seed
  std::mt19937 rng(static_cast<unsigned>(seed));
  std::normal_distribution<double> N(0, 1);
  AnnulusProblem p;
  p.eps = eps;
  p.G = G;
  p.k_max = k_max;
  p.inner.assign(quad.nodes.size(), Eigen::Matrix4d::Zero());
  p.outer.assign(quad.nodes.size(), Eigen::Matrix4d::Zero());
  for (int k = 0; k <= std::min(k_max, 4); ++k) {
    auto basis = invariant_harmonic_basis(G, k);
    for (auto& phi : basis) {
      const double amp = std::pow(0.3, k);
      double ci[10], co[10];
      for (int c = 0; c < 10; ++c) {
        ci[c] = amp * N(rng);
        co[c] = amp * N(rng);
      }
      for (size_t n = 0; n < quad.nodes.size(); ++n) {
        const double v = phi.eval(quad.nodes[n]);
        for (int c = 0; c < 10; ++c) {
          auto [i, j] = sym2_component_pair(c);
          p.inner[n](i, j) += ci[c] * v;
          p.outer[n](i, j) += co[c] * v;
          if (i != j) {
            p.inner[n](j, i) = p.inner[n](i, j);
            p.outer[n](j, i) = p.outer[n](i, j);
          }
        }
      }
    }
  }
  HarmonicModeField f = dirichlet_extend(p, quad);

  std::filesystem::create_directories(opt.out_dir);
  CsvWriter w;
  w.header_comment = "config_hash=" + hash;
  w.columns = {"component", "k", "index", "coef_plus", "coef_minus"};
  for (auto& t : f.terms)
    w.rows.push_back({double(t.component), double(t.k), double(t.index), t.plus,
                      t.minus});
  w.write(opt.out_dir / "annulus_modes.csv");
  auto mf = base_manifest(hash, opt, seed);
  mf.push_back({"eps", std::to_string(eps)});
  mf.push_back({"truncation_residual", std::to_string(f.truncation_residual)});
  write_manifest(opt.out_dir / "manifest.txt", mf);
  return 0;
}

int study_residual_scaling(const json& cfg, const RunOptions& opt,
                           const std::string& hash, std::uint64_t seed) {
  std::vector<double> ts = cfg.value("t_list", std::vector<double>{1e-2, 1e-3, 1e-4, 1e-5});
  const double beta = cfg.value("beta", 0.5);
  const int shells = cfg.value("shells", 512);
  RadialMetric orb = round_sphere(2.0);
  ALEModel eh = make_eguchi_hanson(1.0);
  auto res = residual_scaling_study(orb, eh, ts, beta, 3.0, shells);

  std::filesystem::create_directories(opt.out_dir);
  CsvWriter w;
  w.header_comment = "config_hash=" + hash + "\nfitted_exponent=" +
                     std::to_string(res.fitted_exponent);
  w.columns = {"t", "beta", "norm", "error_bar"};
  for (auto& r : res.rows) w.rows.push_back({r.t, beta, r.norm, r.error_bar});
  w.write(opt.out_dir / "residual_scaling.csv");
  auto mf = base_manifest(hash, opt, seed);
  mf.push_back({"fitted_exponent", std::to_string(res.fitted_exponent)});
  mf.push_back({"bound", std::to_string((2 - beta) / 4)});
  mf.push_back({"grid_drift", std::to_string(res.grid_drift)});
  mf.push_back({"grid_converged", res.grid_drift < 0.01 ? "1" : "0"});
  mf.push_back({"pass", res.pass ? "1" : "0"});
  write_manifest(opt.out_dir / "manifest.txt", mf);
  std::cout << "fitted exponent " << res.fitted_exponent << " vs bound "
            << (2 - beta) / 4 << (res.pass ? "  PASS" : "  FAIL") << "\n";
  return res.pass ? 0 : 2;
}

int study_pinching(const json& cfg, const RunOptions& opt,
                   const std::string& hash, std::uint64_t seed) {
  std::vector<double> ts =
      cfg.value("t_list", std::vector<double>{1e-3, 1e-5, 1e-7, 1e-9, 1e-12});
  std::vector<double> ps = cfg.value("p_list", std::vector<double>{1, 2, 4});
  auto out = pinching_study(ts, ps, 1.0, cfg.value("shells", 1024));

  std::filesystem::create_directories(opt.out_dir);
  CsvWriter w;
  w.header_comment = "config_hash=" + hash;
  w.columns = {"t", "p", "lp_norm", "sup_norm"};
  for (auto& r : out.rows)
    for (auto& [p, v] : r.lp) w.rows.push_back({r.t, p, v, r.sup});
  w.write(opt.out_dir / "pinching.csv");
  auto mf = base_manifest(hash, opt, seed);
  mf.push_back({"lp_monotone", out.lp_monotone ? "1" : "0"});
  mf.push_back({"sup_band_lo", std::to_string(out.sup_min)});
  mf.push_back({"sup_band_hi", std::to_string(out.sup_max)});
  write_manifest(opt.out_dir / "manifest.txt", mf);
  return 0;
}

int study_sin_warp(const json& cfg, const RunOptions& opt,
                   const std::string& hash, std::uint64_t seed) {
  const double eps = cfg.value("eps", 1e-5);
  const double b = cfg.value("b", std::exp(10.0));
  auto rep = sin_warp_report(eps, b, cfg.value("gamma_order", 2.0));
  std::filesystem::create_directories(opt.out_dir);
  CsvWriter w;
  w.header_comment = "config_hash=" + hash;
  w.columns = {"min_sectional", "max_sectional", "inner_sectional",
               "outer_sectional", "measured_C"};
  w.rows.push_back({rep.min_sectional, rep.max_sectional, rep.inner_sectional,
                    rep.outer_sectional, rep.measured_C});
  w.write(opt.out_dir / "sin_warp.csv");
  auto mf = base_manifest(hash, opt, seed);
  mf.push_back({"min_sectional", std::to_string(rep.min_sectional)});
  mf.push_back({"lower_bound_1_minus_C_over_logb",
                std::to_string(1.0 - rep.measured_C / std::log(b))});
  write_manifest(opt.out_dir / "manifest.txt", mf);
  return 0;
}

int study_picard(const json& cfg, const RunOptions& opt, const std::string& hash,
                 std::uint64_t seed) {
  const std::string bench = cfg.value("benchmark", std::string("quadratic"));
  std::filesystem::create_directories(opt.out_dir);
  PicardCertificate cert;
  if (bench == "quadratic") {
    FixedPointProblem p;
    p.dim = 1;
    p.c = 1.0;
    p.q = 1.0;
    p.r0 = std::numeric_limits<double>::infinity();
    const double a = cfg.value("a", 0.1);
    p.phi = [a](const Eigen::VectorXd& x) {
      Eigen::VectorXd f(1);
      f(0) = a + x(0) + x(0) * x(0);
      return f;
    };
    p.inverse_at_zero = [](const Eigen::VectorXd& f) { return f; };
    cert = picard_solve(p, 5, static_cast<unsigned>(seed) + 1);
  } else {
    throw ConfigError("unknown picard benchmark '" + bench + "'");
  }
  CsvWriter w;
  w.header_comment = "config_hash=" + hash;
  w.columns = {"admissible", "radius", "phi0_norm", "phi0_bound", "residual",
               "iterations", "uniqueness_spread"};
  w.rows.push_back({cert.admissible ? 1.0 : 0.0, cert.radius, cert.phi0_norm,
                    cert.phi0_bound, cert.residual, double(cert.iterations),
                    cert.uniqueness_spread});
  w.write(opt.out_dir / "picard.csv");
  auto mf = base_manifest(hash, opt, seed);
  mf.push_back({"admissible", cert.admissible ? "1" : "0"});
  if (!cert.admissible) mf.push_back({"refusal", cert.refusal});
  write_manifest(opt.out_dir / "manifest.txt", mf);
  if (!cert.admissible) {
    std::cout << "refusal: " << cert.refusal << "\n";
    return 1;
  }
  std::cout << "solution " << cert.solution(0) << " in certified radius "
            << cert.radius << " after " << cert.iterations << " iterations\n";
  return 0;
}

}  // namespace

int run_study(const RunOptions& opt) {
  std::string raw, hash;
  json cfg = load_config(opt, &raw, &hash);
  require_keys(cfg,
               {"command", "study", "seed", "group", "eps", "k_max",
                "quadrature_degree", "t_list", "p_list", "beta", "shells", "b",
                "gamma_order", "benchmark", "a"},
               "study config");
  std::uint64_t seed = opt.seed_overridden ? opt.seed : cfg.value("seed", 0ull);
  const std::string which = cfg.at("study");
  if (which == "annulus") return study_annulus(cfg, opt, hash, seed);
  if (which == "residual-scaling")
    return study_residual_scaling(cfg, opt, hash, seed);
  if (which == "pinching") return study_pinching(cfg, opt, hash, seed);
  if (which == "sin-warp") return study_sin_warp(cfg, opt, hash, seed);
  if (which == "picard") return study_picard(cfg, opt, hash, seed);
  throw ConfigError("unknown study '" + which + "'");
}

int run_command(const std::string& command, const RunOptions& opt) {
  try {
    if (command == "obstruction") return run_obstruction(opt);
    if (command == "hitchin-thorpe") return run_hitchin_thorpe(opt);
    if (command == "study") return run_study(opt);
    std::cerr << "unknown command '" << command << "'\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace desing
