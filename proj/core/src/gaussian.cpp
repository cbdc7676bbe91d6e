#include "suotbary/gaussian.hpp"

#include <cmath>
#include <iostream>

namespace suotbary {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) throw Error(ErrorCode::kInvalidInput, std::string(what) + ": dimension mismatch");
}

}  // namespace

GaussianMeasure::GaussianMeasure(double m, Eigen::VectorXd a, SpdMatrix s)
    : mass(m), mean(std::move(a)), cov(std::move(s)) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorCode::kInvalidInput, "measure mass must be positive and finite");
  }
  if (mean.size() != cov.dim()) throw Error(ErrorCode::kInvalidInput, "mean/covariance dimension mismatch");
  if (!mean.allFinite()) throw Error(ErrorCode::kInvalidInput, "mean has non-finite entries");
}

GaussianMeasure GaussianMeasure::centered(SpdMatrix cov) {
  const int d = cov.dim();
  return GaussianMeasure(1.0, Eigen::VectorXd::Zero(d), std::move(cov));
}

double w2_squared(const SpdMatrix& s1, const SpdMatrix& s2) {
  require_same_dim(s1.dim(), s2.dim(), "w2_squared");
  const SpdMatrix root = sqrt_spd(s1);
  const SpdMatrix cross = sqrt_spd(congruence(s2, root.mat()));
  // Round-off can push an exact zero slightly negative.
  return std::max(0.0, trace(s1.mat()) + trace(s2.mat()) - 2.0 * trace(cross.mat()));
}

double w2_squared(const GaussianMeasure& g1, const GaussianMeasure& g2) {
  require_same_dim(g1.dim(), g2.dim(), "w2_squared");
  if (g1.mass != 1.0 || g2.mass != 1.0) {
    std::cerr << "warning: w2_squared ignores measure masses (" << g1.mass << ", " << g2.mass << ")\n";
  }
  return (g1.mean - g2.mean).squaredNorm() + w2_squared(g1.cov, g2.cov);
}

double kl_divergence(const SpdMatrix& s1, const SpdMatrix& s2) {
  require_same_dim(s1.dim(), s2.dim(), "kl_divergence");
  const SpdMatrix s2inv = inv_spd(s2);
  const double d = s1.dim();
  const double value = 0.5 * (trace(s2inv.mat() * s1.mat()) - d + logdet(s2) - logdet(s1));
  return std::max(0.0, value);
}

double kl_divergence(const GaussianMeasure& g1, const GaussianMeasure& g2) {
  require_same_dim(g1.dim(), g2.dim(), "kl_divergence");
  const Eigen::VectorXd diff = g1.mean - g2.mean;
  const double quad = diff.dot(inv_spd(g2.cov).mat() * diff);
  const double normalized = kl_divergence(g1.cov, g2.cov) + 0.5 * quad;
  const double m1 = g1.mass;
  const double m2 = g2.mass;
  const double mass_kl = m1 * std::log(m1 / m2) - m1 + m2;
  return m1 * normalized + mass_kl;
}

SymMatrix transport_map(const SpdMatrix& src, const SpdMatrix& dst) {
  require_same_dim(src.dim(), dst.dim(), "transport_map");
  const SpdMatrix root = sqrt_spd(src);
  const SpdMatrix root_inv = inv_sqrt_spd(src);
  const SpdMatrix middle = sqrt_spd(congruence(dst, root.mat()));
  return SymMatrix(root_inv.mat() * middle.mat() * root_inv.mat());
}

}  // namespace suotbary
