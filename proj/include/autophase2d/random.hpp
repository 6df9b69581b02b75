#ifndef AUTOPHASE2D_RANDOM_HPP
#define AUTOPHASE2D_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

#include "autophase2d/core.hpp"

namespace autophase2d {

// std::normal_distribution is implementation-defined, so the Box-Muller
// transform is spelled out here to keep seeded draws identical everywhere.
class GaussianSource {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+box-muller";

  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // 53-bit uniforms in (0, 1] and [0, 1).
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  Matrix2D matrix(std::size_t n) {
    std::vector<double> v(n * n);
    for (double& e : v) e = next();
    return Matrix2D(n, std::move(v));
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace autophase2d

#endif  // AUTOPHASE2D_RANDOM_HPP
