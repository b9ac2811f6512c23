#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>

namespace ptgne {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Smallest singular value of a dense matrix (0 for an empty matrix).
double sigma_min(const Mat& m);
double sigma_max(const Mat& m);

/// Seeded xoshiro256** generator (splitmix64 seeding). The std::
/// distributions are implementation-defined, so all draws go through the
/// helpers below to stay reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer on [0, n).
  std::uint64_t index(std::uint64_t n);
  /// Standard normal (Box-Muller, no cached second draw).
  double normal();

 private:
  std::uint64_t next();
  std::uint64_t state_[4];
};

}  // namespace ptgne
