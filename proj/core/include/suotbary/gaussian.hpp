#pragma once

#include <Eigen/Dense>

#include "suotbary/spd.hpp"

namespace suotbary {

/// Scaled Gaussian measure mass·N(mean, cov).
struct GaussianMeasure {
  double mass = 1.0;
  Eigen::VectorXd mean;
  SpdMatrix cov;

  GaussianMeasure(double mass, Eigen::VectorXd mean, SpdMatrix cov);

  /// Unit-mass, zero-mean measure.
  static GaussianMeasure centered(SpdMatrix cov);

  int dim() const { return cov.dim(); }
};

/// Squared 2-Wasserstein distance between the normalized measures. Masses
/// other than one are ignored, with a warning on stderr.
double w2_squared(const GaussianMeasure& g1, const GaussianMeasure& g2);
double w2_squared(const SpdMatrix& s1, const SpdMatrix& s2);

/// Generalized KL divergence m1·KL(ḡ1‖ḡ2) + m1·log(m1/m2) − m1 + m2.
double kl_divergence(const GaussianMeasure& g1, const GaussianMeasure& g2);

/// KL(N(0,s1) ‖ N(0,s2)).
double kl_divergence(const SpdMatrix& s1, const SpdMatrix& s2);

/// Linear map T with T·src·T = dst.
SymMatrix transport_map(const SpdMatrix& src, const SpdMatrix& dst);

}  // namespace suotbary
