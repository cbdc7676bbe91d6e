#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "suotbary/bures.hpp"
#include "suotbary/random.hpp"
#include "suotbary/spd.hpp"

namespace suotbary::testing {

inline SymMatrix random_sym(int d, double scale, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = scale * rng.normal();
  }
  return SymMatrix(Eigen::MatrixXd(0.5 * (a + a.transpose())));
}

inline SpdMatrix random_spd(int d, std::uint64_t seed, double sigma = 0.5) { return sample_spd(d, sigma, seed); }

inline SpdMatrix diag(std::initializer_list<double> v) {
  return SpdMatrix::diagonal(std::span<const double>(v.begin(), v.size()));
}

inline SpdMatrix scalar(double s) { return diag({s}); }

inline double rel_fro(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace suotbary::testing
