#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "clapim/base.hpp"

namespace clapim::testutil {

inline Sequence random_seq(std::mt19937_64& rng, std::size_t k) {
  std::vector<Base> bases;
  bases.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    bases.push_back(static_cast<Base>(rng() & 3));
  }
  return Sequence(std::move(bases));
}

/// Decodes an integer into the i-th k-length sequence (base-4 digits), for
/// exhaustive sweeps.
inline Sequence nth_seq(std::uint64_t n, std::size_t k) {
  std::vector<Base> bases(k);
  for (std::size_t i = 0; i < k; ++i) {
    bases[i] = static_cast<Base>((n >> (2 * i)) & 3);
  }
  return Sequence(std::move(bases));
}

/// Unique scratch directory under the system temp dir, removed on
/// destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path = std::filesystem::temp_directory_path() /
           ("clapim_test_" + std::to_string(rng()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

inline std::string slurp(const std::filesystem::path& p) {
  std::string out;
  std::ifstream in(p, std::ios::binary);
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    out.append(buf, static_cast<std::size_t>(in.gcount()));
  }
  return out;
}

}  // namespace clapim::testutil
