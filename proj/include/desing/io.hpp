#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "desing/sphere_harmonics.hpp"

// CSV/manifest plumbing shared by the command-line front end: deterministic
// formatting, FNV config hashes, catalog access.

namespace desing {

inline constexpr const char* kToolVersion = "desing 0.1.0";

// FNV-1a 64-bit of the raw config bytes; hex string
std::string fnv1a_hex(const std::string& bytes);

struct CsvWriter {
  std::string header_comment;  // written as "# key=value" lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<std::string>> string_rows;  // alternative payload

  void write(const std::filesystem::path& path) const;
};

void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& kv);

// ModeCoefficients export: columns component, k, index, value
void write_mode_coefficients(const std::filesystem::path& path,
                             const ModeCoefficients& mc,
                             const std::string& config_hash);

std::string read_file(const std::filesystem::path& path);

}  // namespace desing
