#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "desing/cli_runner.hpp"
#include "desing/io.hpp"

using namespace desing;
namespace fs = std::filesystem;

namespace {

fs::path write_tmp(const std::string& name, const std::string& body) {
  fs::path dir = fs::temp_directory_path() / "desing_cli_test";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) { return read_file(p); }

}  // namespace

TEST_CASE("same config and seed give byte-identical outputs") {
  fs::path cfg = write_tmp("annulus.json", R"({
    "command": "study", "study": "annulus",
    "eps": 0.2, "k_max": 4, "quadrature_degree": 10, "seed": 9
  })");
  RunOptions opt;
  opt.config_path = cfg;
  opt.out_dir = fs::temp_directory_path() / "desing_cli_test" / "outA";
  REQUIRE(run_command("study", opt) == 0);
  std::string a = slurp(opt.out_dir / "annulus_modes.csv");
  opt.out_dir = fs::temp_directory_path() / "desing_cli_test" / "outB";
  REQUIRE(run_command("study", opt) == 0);
  std::string b = slurp(opt.out_dir / "annulus_modes.csv");
  CHECK(a == b);
  CHECK(a.rfind("# config_hash=", 0) == 0);  // hash header line
}

TEST_CASE("obstruction exit codes: sphere 1, flat 0, malformed 2") {
  RunOptions opt;
  opt.out_dir = fs::temp_directory_path() / "desing_cli_test" / "obs";

  opt.config_path = write_tmp("sphere.json", R"({
    "command": "obstruction", "group": {"label": "cyclic-SU2", "n": 2},
    "jet": {"kind": "sphere"}, "basis": "eguchi-hanson",
    "grid_points": 300, "reflection": false, "tolerance": 1e-6,
    "quadrature_degree": 10, "seed": 1
  })");
  CHECK(run_command("obstruction", opt) == 1);

  opt.config_path = write_tmp("flat.json", R"({
    "command": "obstruction", "group": {"label": "cyclic-SU2", "n": 2},
    "jet": {"kind": "flat"}, "basis": "eguchi-hanson",
    "grid_points": 300, "reflection": false, "tolerance": 1e-6,
    "quadrature_degree": 10, "seed": 1
  })");
  CHECK(run_command("obstruction", opt) == 0);

  opt.config_path = write_tmp("bad.json", R"({
    "command": "obstruction", "group": {"label": "cyclic-SU2", "n": 2},
    "jet": {"kind": "sphere"}, "unknown_key": 3
  })");
  CHECK(run_command("obstruction", opt) == 2);
}

TEST_CASE("hitchin-thorpe: K3 equality, reused point rejected") {
  RunOptions opt;
  opt.out_dir = fs::temp_directory_path() / "desing_cli_test" / "ht";

  std::string nodes;
  for (int i = 0; i < 16; ++i) {
    if (i) nodes += ",";
    nodes += R"({"name":"EH)" + std::to_string(i) +
             R"(","piece":"eguchi-hanson","parent":"T4/Z2","point":"p)" +
             std::to_string(i) + R"(","scale":0.01,"orientation":1})";
  }
  opt.config_path = write_tmp("k3.json",
                              R"({"command":"hitchin-thorpe","spin":true,
    "tree":{"root":"T4/Z2","nodes":[)" + nodes + "]}}");
  CHECK(run_command("hitchin-thorpe", opt) == 0);
  std::string mf = slurp(opt.out_dir / "manifest.txt");
  CHECK(mf.find("chi=24") != std::string::npos);
  CHECK(mf.find("verdict=equality") != std::string::npos);
  CHECK(mf.find("degrees_of_freedom=57") != std::string::npos);

  // reuse a point: exit 2
  opt.config_path = write_tmp("dup.json", R"({"command":"hitchin-thorpe",
    "tree":{"root":"S4/Z2","nodes":[
      {"name":"A","piece":"eguchi-hanson","parent":"S4/Z2","point":"north","scale":0.05,"orientation":1},
      {"name":"B","piece":"eguchi-hanson","parent":"S4/Z2","point":"north","scale":0.05,"orientation":1}
    ]}})");
  CHECK(run_command("hitchin-thorpe", opt) == 2);
}

TEST_CASE("picard refusal returns 1 with a structured record") {
  RunOptions opt;
  opt.out_dir = fs::temp_directory_path() / "desing_cli_test" / "pic";
  opt.config_path = write_tmp("refuse.json", R"({
    "command": "study", "study": "picard", "benchmark": "quadratic",
    "a": 0.4, "seed": 1
  })");
  CHECK(run_command("study", opt) == 1);
  std::string mf = slurp(opt.out_dir / "manifest.txt");
  CHECK(mf.find("admissible=0") != std::string::npos);
  CHECK(mf.find("refusal=") != std::string::npos);
}
