#include "suotbary/spd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace suotbary {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kRetractionOutOfCone: return "RetractionOutOfCone";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kDeltaTooLarge: return "DeltaTooLarge";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kBoxViolation: return "BoxViolation";
    case ErrorCode::kInconsistent: return "Inconsistent";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

void require_square_finite(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << "expected a nonempty square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::kInvalidInput, os.str());
  }
  if (!m.allFinite()) throw Error(ErrorCode::kInvalidInput, "matrix has non-finite entries");
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  require_square_finite(m);
  m_ = symmetrized(m);
}

SymMatrix SymMatrix::zero(int d) { return SymMatrix(Eigen::MatrixXd::Zero(d, d)); }
SymMatrix SymMatrix::identity(int d) { return SymMatrix(Eigen::MatrixXd::Identity(d, d)); }

SpdMatrix::SpdMatrix(const Eigen::MatrixXd& m) : SpdMatrix(SymMatrix(m)) {}

SpdMatrix::SpdMatrix(const SymMatrix& m) : sym_(m) {
  const double lo = min_eigenvalue(sym_);
  if (!(lo > kEigenvalueFloor)) {
    std::ostringstream os;
    os << "smallest eigenvalue " << lo << " is not above the floor " << kEigenvalueFloor;
    throw Error(ErrorCode::kNotPositiveDefinite, os.str());
  }
}

SpdMatrix SpdMatrix::identity(int d) { return SpdMatrix(Eigen::MatrixXd::Identity(d, d)); }

SpdMatrix SpdMatrix::diagonal(std::span<const double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return SpdMatrix(Eigen::MatrixXd(v.asDiagonal()));
}

EigDecomp eig(const SymMatrix& m) {
  const Eigen::Index d = m.mat().rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNonFinite, "symmetric eigensolver did not converge");
  }
  EigDecomp out{Eigen::VectorXd(d), Eigen::MatrixXd(d, d)};
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < d; ++k) {
    out.values(k) = solver.eigenvalues()(d - 1 - k);
    Eigen::VectorXd v = solver.eigenvectors().col(d - 1 - k);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (std::abs(v(i)) > 1e-14) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    out.vectors.col(k) = v;
  }
  return out;
}

SymMatrix apply_spectral(const SymMatrix& m, const std::function<double(double)>& f) {
  const EigDecomp e = eig(m);
  Eigen::VectorXd fv = e.values.unaryExpr(f);
  if (!fv.allFinite()) throw Error(ErrorCode::kNonFinite, "matrix function produced non-finite values");
  return SymMatrix(e.vectors * fv.asDiagonal() * e.vectors.transpose());
}

namespace {

SpdMatrix spd_function(const SpdMatrix& m, const std::function<double(double)>& f) {
  const EigDecomp e = eig(m.sym());
  if (!(e.values.minCoeff() > kEigenvalueFloor)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "eigenvalue below floor");
  }
  Eigen::VectorXd fv = e.values.unaryExpr(f);
  return SpdMatrix(Eigen::MatrixXd(e.vectors * fv.asDiagonal() * e.vectors.transpose()));
}

}  // namespace

SpdMatrix sqrt_spd(const SpdMatrix& m) {
  return spd_function(m, [](double x) { return std::sqrt(x); });
}

SpdMatrix inv_spd(const SpdMatrix& m) {
  return spd_function(m, [](double x) { return 1.0 / x; });
}

SpdMatrix inv_sqrt_spd(const SpdMatrix& m) {
  return spd_function(m, [](double x) { return 1.0 / std::sqrt(x); });
}

double logdet(const SpdMatrix& m) {
  const EigDecomp e = eig(m.sym());
  if (!(e.values.minCoeff() > kEigenvalueFloor)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "eigenvalue below floor");
  }
  return e.values.array().log().sum();
}

double trace(const Eigen::MatrixXd& m) { return m.trace(); }

double frobenius(const Eigen::MatrixXd& m) { return m.norm(); }

double min_eigenvalue(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double max_eigenvalue(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

SpdMatrix expm_sym(const SymMatrix& m) {
  return SpdMatrix(apply_spectral(m, [](double x) { return std::exp(x); }));
}

SymMatrix lyapunov_solve(const SpdMatrix& b, const SymMatrix& a) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kInvalidInput, "lyapunov_solve: dimension mismatch");
  const EigDecomp e = eig(b.sym());
  if (!(e.values.minCoeff() > kEigenvalueFloor)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "lyapunov_solve: b not positive definite");
  }
  Eigen::MatrixXd at = e.vectors.transpose() * a.mat() * e.vectors;
  for (Eigen::Index i = 0; i < at.rows(); ++i) {
    for (Eigen::Index j = 0; j < at.cols(); ++j) at(i, j) /= e.values(i) + e.values(j);
  }
  return SymMatrix(e.vectors * at * e.vectors.transpose());
}

SpdMatrix congruence(const SpdMatrix& m, const Eigen::MatrixXd& s) {
  return SpdMatrix(Eigen::MatrixXd(s * m.mat() * s.transpose()));
}

Eigen::MatrixXd sqrt_of_product(const SpdMatrix& a, const SpdMatrix& b) {
  const SpdMatrix ah = sqrt_spd(a);
  const SpdMatrix inner = sqrt_spd(congruence(b, ah.mat()));
  return ah.mat() * inner.mat() * inv_sqrt_spd(a).mat();
}

SpdMatrix clamp_to_box(const SpdMatrix& m, double rho) {
  if (!(rho > 1.0)) throw Error(ErrorCode::kInvalidInput, "box parameter rho must exceed 1");
  if (in_box(m, rho)) return m;
  const double lo = 1.0 / rho;
  return SpdMatrix(apply_spectral(m.sym(), [lo, rho](double x) { return std::clamp(x, lo, rho); }));
}

bool in_box(const SpdMatrix& m, double rho) {
  constexpr double kTol = 1e-12;
  const EigDecomp e = eig(m.sym());
  return e.values.minCoeff() >= 1.0 / rho - kTol && e.values.maxCoeff() <= rho + kTol;
}

double box_radius(const SpdMatrix& m) {
  const EigDecomp e = eig(m.sym());
  return std::max({1.0, e.values.maxCoeff(), 1.0 / e.values.minCoeff()});
}

double relative_frobenius_error(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& expected) {
  return (actual - expected).norm() / std::max(expected.norm(), 1e-12);
}

}  // namespace suotbary
