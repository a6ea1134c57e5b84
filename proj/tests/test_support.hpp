#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "deg/material.hpp"
#include "deg/membrane.hpp"

namespace deg::test {

/// The material used throughout the tests: soft acrylic film with a cubic
/// stress polynomial, two relaxation terms and an area-expansion limit of 36.
inline MaterialParams reference_material() {
  MaterialParams mat;
  mat.yeoh0 = {1.8e4, -150.0, 2.0};
  mat.prony = {{0.5, 0.8}, {0.25, 8.0}};
  mat.rel_permittivity = 4.7;
  mat.density = 960.0;
  mat.bulk_resistivity = 3e14;
  mat.max_area_expansion = 36.0;
  return mat;
}

/// 2.5 mm x 2.5 mm x 1 mm film; mass left at the film mass.
inline MembraneGeometry reference_geometry() {
  MembraneGeometry geom;
  geom.x10 = 2.5e-3;
  geom.x20 = 2.5e-3;
  geom.x30 = 1.0e-3;
  geom.mass = 960.0 * geom.x10 * geom.x20 * geom.x30;
  return geom;
}

/// Deterministic standard-normal stream (Box-Muller over 53-bit uniforms) so
/// noisy-fit expectations hold on every platform and library version.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925287 * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  double uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Fresh directory under the system temp root, unique per call.
inline std::filesystem::path fresh_out_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("deg_tests_" + tag + "_" + std::to_string(::getpid()) +
                    "_" + std::to_string(counter.fetch_add(1)));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace deg::test
