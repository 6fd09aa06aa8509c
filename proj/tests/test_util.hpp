#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "eegdn/random.hpp"

namespace eegdn::testing {

inline std::vector<double> random_vector(std::size_t n, Rng& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * standard_normal(rng);
  return v;
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("eegdn_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace eegdn::testing
