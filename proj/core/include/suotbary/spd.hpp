#pragma once

#include <functional>
#include <span>

#include <Eigen/Dense>

#include "suotbary/error.hpp"

namespace suotbary {

/// Eigenvalues at or below this value are treated as a loss of positive
/// definiteness. No silent regularization happens anywhere in the library.
inline constexpr double kEigenvalueFloor = 1e-12;

/// Dense symmetric matrix. The constructor symmetrizes its input, so
/// entries (i,j) and (j,i) are bitwise equal.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix zero(int d);
  static SymMatrix identity(int d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

/// Symmetric positive-definite matrix, validated against kEigenvalueFloor
/// at construction.
class SpdMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(const Eigen::MatrixXd& m);
  explicit SpdMatrix(const SymMatrix& m);

  static SpdMatrix identity(int d);
  static SpdMatrix diagonal(std::span<const double> values);

  int dim() const { return sym_.dim(); }
  const Eigen::MatrixXd& mat() const { return sym_.mat(); }
  const SymMatrix& sym() const { return sym_; }
  double operator()(int i, int j) const { return sym_(i, j); }

 private:
  SymMatrix sym_;
};

struct EigDecomp {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // orthonormal columns
};

// Spectral decomposition with eigenvalues sorted descending. Each
// eigenvector is signed so that its first nonzero component is positive.
EigDecomp eig(const SymMatrix& m);

/// Applies a scalar function to the spectrum: U diag(f(λ)) Uᵀ, symmetrized.
SymMatrix apply_spectral(const SymMatrix& m, const std::function<double(double)>& f);

SpdMatrix sqrt_spd(const SpdMatrix& m);
SpdMatrix inv_spd(const SpdMatrix& m);
SpdMatrix inv_sqrt_spd(const SpdMatrix& m);
double logdet(const SpdMatrix& m);
double trace(const Eigen::MatrixXd& m);
double frobenius(const Eigen::MatrixXd& m);
double min_eigenvalue(const SymMatrix& m);
double max_eigenvalue(const SymMatrix& m);

SpdMatrix expm_sym(const SymMatrix& m);

/// Solves X·b + b·X = a in the eigenbasis of b.
SymMatrix lyapunov_solve(const SpdMatrix& b, const SymMatrix& a);

/// s·m·sᵀ, which stays SPD whenever s is nonsingular.
SpdMatrix congruence(const SpdMatrix& m, const Eigen::MatrixXd& s);

/// [a·b]^{1/2} via the similarity a^{1/2}[a^{1/2} b a^{1/2}]^{1/2} a^{-1/2}.
/// The result is generally not symmetric.
Eigen::MatrixXd sqrt_of_product(const SpdMatrix& a, const SpdMatrix& b);

SpdMatrix clamp_to_box(const SpdMatrix& m, double rho);
bool in_box(const SpdMatrix& m, double rho);

/// Smallest ρ ≥ 1 with m inside the box [1/ρ, ρ].
double box_radius(const SpdMatrix& m);

double relative_frobenius_error(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& expected);

}  // namespace suotbary
