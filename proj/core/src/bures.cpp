#include "suotbary/bures.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "suotbary/gaussian.hpp"
#include "suotbary/random.hpp"

namespace suotbary {

SpdMatrix exp_map(const SpdMatrix& base, const SymMatrix& dir) {
  if (base.dim() != dir.dim()) throw Error(ErrorCode::kInvalidInput, "exp_map: dimension mismatch");
  const Eigen::MatrixXd step = Eigen::MatrixXd::Identity(base.dim(), base.dim()) + dir.mat();
  const double lo = min_eigenvalue(SymMatrix(step));
  if (!(lo > kEigenvalueFloor)) {
    std::ostringstream os;
    os << "Id + X has smallest eigenvalue " << lo;
    throw Error(ErrorCode::kRetractionOutOfCone, os.str());
  }
  return SpdMatrix(Eigen::MatrixXd(step * base.mat() * step));
}

SpdMatrix exp_map(const TangentVector& v) { return exp_map(v.base, v.dir); }

TangentVector log_map(const SpdMatrix& src, const SpdMatrix& dst) {
  const SymMatrix t = transport_map(src, dst);
  return {src, SymMatrix(t.mat() - Eigen::MatrixXd::Identity(src.dim(), src.dim()))};
}

double tangent_inner(const SpdMatrix& base, const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != base.dim() || b.dim() != base.dim()) {
    throw Error(ErrorCode::kInvalidInput, "tangent_inner: dimension mismatch");
  }
  return (a.mat() * base.mat() * b.mat()).trace();
}

double tangent_norm(const SpdMatrix& base, const SymMatrix& a) {
  return std::sqrt(std::max(0.0, tangent_inner(base, a, a)));
}

SpdMatrix geodesic(const SpdMatrix& src, const SpdMatrix& dst, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::kInvalidInput, "geodesic: t must lie in [0, 1]");
  if (t == 0.0) return src;
  if (t == 1.0) return dst;
  const TangentVector v = log_map(src, dst);
  return exp_map(src, SymMatrix(t * v.dir.mat()));
}

SpdMatrix sample_spd(int d, double sigma, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::kInvalidInput, "sample_spd: d must be at least 1");
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidInput, "sample_spd: sigma must be nonnegative");
  Xoshiro256 rng(seed);
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = sigma * rng.normal();
  }
  return expm_sym(SymMatrix(a));
}

SpdMatrix sample_diagonal_spd(int d, double sigma, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::kInvalidInput, "sample_diagonal_spd: d must be at least 1");
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidInput, "sample_diagonal_spd: sigma must be nonnegative");
  Xoshiro256 rng(seed);
  std::vector<double> diag(static_cast<std::size_t>(d));
  for (auto& v : diag) v = std::exp(sigma * rng.normal());
  return SpdMatrix::diagonal(diag);
}

}  // namespace suotbary
