#include "suotbary/suot.hpp"

#include <cmath>
#include <sstream>

namespace suotbary {

namespace {

void require_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::kInvalidInput, "tau must be positive and finite");
}

void require_same_dim(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kInvalidInput, "covariance dimension mismatch");
}

// Eigen-data of C = Σβ^{-1/2} Σ_{α,τ} Σβ^{-1/2}, shared by the plan, the cost
// and the gradient.
struct Whitened {
  SpdMatrix b_inv_half;
  EigDecomp c;
};

Whitened whiten(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double scale) {
  const int d = sigma_a.dim();
  const SpdMatrix relaxed(Eigen::MatrixXd(Eigen::MatrixXd::Identity(d, d) + scale * inv_spd(sigma_a).mat()));
  SpdMatrix b_inv_half = inv_sqrt_spd(sigma_b);
  EigDecomp c = eig(congruence(relaxed, b_inv_half.mat()).sym());
  return {std::move(b_inv_half), std::move(c)};
}

Eigen::MatrixXd from_spectrum(const EigDecomp& e, const Eigen::VectorXd& values) {
  return e.vectors * values.asDiagonal() * e.vectors.transpose();
}

}  // namespace

double scalar_subproblem_root(double u, double tau) {
  if (!(u > 0.0) || !(tau > 0.0)) throw Error(ErrorCode::kInvalidInput, "scalar subproblem needs u > 0 and tau > 0");
  return (1.0 + std::sqrt(1.0 + 2.0 * u * tau)) / (2.0 * u);
}

SpdMatrix sigma_alpha_tau(const SpdMatrix& sigma_a, double tau) {
  require_tau(tau);
  const int d = sigma_a.dim();
  return SpdMatrix(Eigen::MatrixXd(Eigen::MatrixXd::Identity(d, d) + 0.5 * tau * inv_spd(sigma_a).mat()));
}

SpdMatrix relaxed_covariance(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double tau) {
  require_tau(tau);
  require_same_dim(sigma_a, sigma_b);
  const Whitened w = whiten(sigma_a, sigma_b, 0.5 * tau);
  // Σ̃² = (τ/2)C⁻¹ + ½C⁻²(Id + (Id + 2τC)^{1/2}) shares C's eigenvectors.
  Eigen::VectorXd s(w.c.values.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double v = scalar_subproblem_root(w.c.values(i), tau);
    s(i) = v * v;
  }
  const Eigen::MatrixXd& bih = w.b_inv_half.mat();
  return SpdMatrix(Eigen::MatrixXd(bih * from_spectrum(w.c, s) * bih));
}

SuotPlan solve_suot(const GaussianMeasure& alpha, const GaussianMeasure& beta, double tau) {
  require_tau(tau);
  require_same_dim(alpha.cov, beta.cov);
  const int d = alpha.dim();
  const SpdMatrix& sa = alpha.cov;
  const SpdMatrix& sb = beta.cov;

  const Whitened w = whiten(sa, sb, 0.5 * tau);
  Eigen::VectorXd v(d);       // eigenvalues of Σ̃ = [C⁻¹Σγ]^{1/2}
  Eigen::VectorXd gamma(d);   // eigenvalues of Σγ = C Σ̃²
  for (int i = 0; i < d; ++i) {
    const double c = w.c.values(i);
    v(i) = scalar_subproblem_root(c, tau);
    gamma(i) = c * v(i) * v(i);
  }
  const Eigen::MatrixXd& bih = w.b_inv_half.mat();
  SpdMatrix sigma_x(Eigen::MatrixXd(bih * from_spectrum(w.c, v.array().square().matrix()) * bih));

  const SpdMatrix relaxed = sigma_alpha_tau(sa, tau);
  const Eigen::MatrixXd relaxed_inv = inv_spd(relaxed).mat();
  const Eigen::VectorXd shift = beta.mean - alpha.mean;
  Eigen::VectorXd a_x = relaxed_inv * shift + alpha.mean;

  // Υ = tr(Σγ) + tr(Σβ) − 2 tr(Σ̃) − (τ/2) log det(Σγ C⁻¹ Σβ⁻¹ Σα⁻¹)
  //     + (a−b)ᵀ M (a−b) − τd/2.
  const double s2 = gamma.sum() + trace(sb.mat()) - 2.0 * v.sum();
  const double s3 = -0.5 * tau * (2.0 * v.array().log().sum() - logdet(sb) - logdet(sa));
  const double s5 = shift.dot(mean_weight_matrix(sa, tau).mat() * shift) - 0.5 * tau * d;
  const double upsilon = s2 + s3 + s5;
  if (!std::isfinite(upsilon)) throw Error(ErrorCode::kNonFinite, "solve_suot: Upsilon is not finite");

  SuotPlan plan{std::move(a_x), sigma_x, Eigen::MatrixXd::Zero(d, d), 0.0, upsilon, 0.0, false};

  // Singular values of Σβ^{1/2}Σx^{1/2} are the square roots of the
  // eigenvalues of Σx^{1/2} Σβ Σx^{1/2}; eig() returns them descending.
  const EigDecomp cross = eig(congruence(sb, sqrt_spd(sigma_x).mat()).sym());
  for (int i = 0; i < d; ++i) plan.k_xb(i, i) = std::sqrt(std::max(0.0, cross.values(i)));

  const double ratio = upsilon / tau;
  double decay = 0.0;
  if (ratio > kUpsilonSaturation) {
    plan.saturated = true;
  } else {
    decay = std::exp(-ratio);
  }
  plan.m_pi = alpha.mass * decay;
  plan.cost = tau * alpha.mass * (1.0 - decay);

  const bool centered_unit = alpha.mass == 1.0 && beta.mass == 1.0 && alpha.mean.isZero(0.0) && beta.mean.isZero(0.0);
  if (centered_unit) {
    const double direct = w2_squared(sigma_x, sb) + tau * kl_divergence(sigma_x, sa);
    if (std::abs(direct - upsilon) > 1e-8 * std::max(1.0, std::abs(upsilon))) {
      std::ostringstream os;
      os << "closed-form Upsilon " << upsilon << " disagrees with W2^2 + tau*KL = " << direct;
      throw Error(ErrorCode::kInconsistent, os.str());
    }
  }
  return plan;
}

Eigen::MatrixXd ambient_cross_covariance(const SpdMatrix& sigma_x, const SpdMatrix& sigma_b) {
  return sigma_x.mat() * transport_map(sigma_x, sigma_b).mat();
}

double suot_cost_centered(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double tau) {
  const SpdMatrix sigma_x = relaxed_covariance(sigma_a, sigma_b, tau);
  return w2_squared(sigma_x, sigma_b) + tau * kl_divergence(sigma_x, sigma_a);
}

EntropicSuotSolution solve_entropic_suot(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double tau,
                                         double delta) {
  require_tau(tau);
  require_same_dim(sigma_a, sigma_b);
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw Error(ErrorCode::kInvalidInput, "delta must be nonnegative");
  const int d = sigma_a.dim();

  const Whitened w = whiten(sigma_a, sigma_b, 0.5 * (tau + delta));
  // Σx = Σβ^{-1/2}[(τ/2)D⁻¹ + ½D⁻²(Id + (Id + (2τ+3δ)D)^{1/2})]Σβ^{-1/2}.
  Eigen::VectorXd s(d);
  for (int i = 0; i < d; ++i) {
    const double c = w.c.values(i);
    s(i) = 0.5 * tau / c + 0.5 / (c * c) * (1.0 + std::sqrt(1.0 + (2.0 * tau + 3.0 * delta) * c));
  }
  const Eigen::MatrixXd& bih = w.b_inv_half.mat();
  SpdMatrix sigma_x(Eigen::MatrixXd(bih * from_spectrum(w.c, s) * bih));

  const Eigen::MatrixXd product = sqrt_spd(sigma_b).mat() * sqrt_spd(sigma_x).mat();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(product);
  const double smallest = svd.singularValues().minCoeff();
  if (smallest < 0.25 * delta) {
    std::ostringstream os;
    os << "smallest singular value " << smallest << " of Sigma_b^{1/2} Sigma_x^{1/2} is below delta/4 = "
       << 0.25 * delta;
    throw Error(ErrorCode::kDeltaTooLarge, os.str());
  }
  Eigen::MatrixXd k = product.transpose() - 0.25 * delta * Eigen::MatrixXd::Identity(d, d);
  return {std::move(sigma_x), std::move(k)};
}

SymMatrix suot_gradient(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double tau) {
  require_tau(tau);
  require_same_dim(sigma_a, sigma_b);
  const int d = sigma_a.dim();
  const Whitened w = whiten(sigma_a, sigma_b, 0.5 * tau);
  Eigen::VectorXd r(d);
  for (int i = 0; i < d; ++i) {
    const double c = w.c.values(i);
    r(i) = std::sqrt(1.0 / (c * c) + 2.0 * tau / c);
  }
  const Eigen::MatrixXd& bih = w.b_inv_half.mat();
  const Eigen::MatrixXd relaxed_inv = inv_spd(sigma_alpha_tau(sigma_a, tau)).mat();
  return SymMatrix(2.0 * Eigen::MatrixXd::Identity(d, d) - relaxed_inv - bih * from_spectrum(w.c, r) * bih);
}

SymMatrix suot_gradient_transport_form(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double tau) {
  const SpdMatrix sigma_x = relaxed_covariance(sigma_a, sigma_b, tau);
  const int d = sigma_a.dim();
  return SymMatrix(2.0 * (Eigen::MatrixXd::Identity(d, d) - transport_map(sigma_b, sigma_x).mat()));
}

SymMatrix mean_weight_matrix(const SpdMatrix& sigma_a, double tau) {
  const int d = sigma_a.dim();
  const Eigen::MatrixXd r = inv_spd(sigma_alpha_tau(sigma_a, tau)).mat();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  return SymMatrix(r * r - 2.0 * r + id + 0.5 * tau * r * inv_spd(sigma_a).mat() * r);
}

}  // namespace suotbary
