#include "desing/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace desing {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

void CsvWriter::write(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  std::istringstream hs(header_comment);
  std::string line;
  while (std::getline(hs, line)) os << "# " << line << "\n";
  for (size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  char buf[32];
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.12e", r[i]);
      os << buf << (i + 1 < r.size() ? "," : "\n");
    }
  }
  for (const auto& r : string_rows) {
    for (size_t i = 0; i < r.size(); ++i)
      os << r[i] << (i + 1 < r.size() ? "," : "\n");
  }
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  for (const auto& [k, v] : kv) os << k << "=" << v << "\n";
}

void write_mode_coefficients(const std::filesystem::path& path,
                             const ModeCoefficients& mc,
                             const std::string& config_hash) {
  CsvWriter w;
  w.header_comment = "config_hash=" + config_hash;
  w.columns = {"component", "k", "index", "value"};
  for (const auto& [key, v] : mc.coef)
    w.rows.push_back({double(key.component), double(key.k), double(key.index), v});
  w.write(path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace desing
