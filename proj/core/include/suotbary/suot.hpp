#pragma once

#include <Eigen/Dense>

#include "suotbary/gaussian.hpp"
#include "suotbary/spd.hpp"

namespace suotbary {

/// Optimal semi-unbalanced plan between α (KL-relaxed marginal) and β (hard
/// marginal). The plan is m_pi times a Gaussian with mean (a_x, b) and
/// covariance [[sigma_x, K], [Kᵀ, Σβ]].
struct SuotPlan {
  Eigen::VectorXd a_x;
  SpdMatrix sigma_x;
  /// Diagonal of singular values of Σβ^{1/2} Σx^{1/2}, descending. This is the
  /// cross covariance expressed in the singular basis; use
  /// ambient_cross_covariance() for the block in the original coordinates.
  Eigen::MatrixXd k_xb;
  double m_pi = 0.0;
  /// Per-unit-mass optimal value W2²(π̄x, β̄) + τ·KL(π̄x‖ᾱ).
  double upsilon = 0.0;
  /// τ·m_α·(1 − exp(−Υ/τ)).
  double cost = 0.0;
  /// Set when Υ/τ exceeded kUpsilonSaturation and exp(−Υ/τ) was taken as 0.
  bool saturated = false;
};

inline constexpr double kUpsilonSaturation = 700.0;

struct SuotParams {
  double tau = 1.0;
  double delta = 0.0;
};

/// Minimizer v* = (1 + √(1 + 2uτ)) / (2u) of u v² − 2v − τ log v over v > 0;
/// applied per eigenvalue of the whitened problem.
double scalar_subproblem_root(double u, double tau);

/// Σ_{α,τ} = Id + (τ/2) Σα⁻¹.
SpdMatrix sigma_alpha_tau(const SpdMatrix& sigma_a, double tau);

/// Covariance of the relaxed marginal: the unique minimizer over Σx of
/// W2²(Σx, Σβ) + τ·KL(Σx‖Σα).
SpdMatrix relaxed_covariance(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double tau);

/// Closed-form plan, mass and cost. For centered unit-mass inputs the closed
/// form of Υ is checked against W2² + τ·KL at the returned Σx; a mismatch
/// beyond 1e-8 (relative) raises kInconsistent.
SuotPlan solve_suot(const GaussianMeasure& alpha, const GaussianMeasure& beta, double tau);

/// Cross covariance of the optimal coupling in ambient coordinates,
/// Σx·T_{Σx→Σβ}.
Eigen::MatrixXd ambient_cross_covariance(const SpdMatrix& sigma_x, const SpdMatrix& sigma_b);

/// W2²(Σx, Σβ) + τ·KL(Σx‖Σα) at the relaxed marginal; the SUOT objective
/// restricted to normalized Gaussian plans between centered measures.
double suot_cost_centered(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double tau);

struct EntropicSuotSolution {
  SpdMatrix sigma_x;
  Eigen::MatrixXd k_xb;
};

/// Closed form with the extra δ·KL(π‖α⊗β) term. Raises kDeltaTooLarge when
/// a singular value of Σβ^{1/2} Σx^{1/2} falls below δ/4.
EntropicSuotSolution solve_entropic_suot(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double tau,
                                         double delta);

/// Riemannian (Bures–Wasserstein) gradient of Σβ ↦ suot_cost_centered(Σα, Σβ, τ):
///
///   G = 2 Id − Σ_{α,τ}⁻¹ − Σβ^{-1/2} (C⁻² + 2τ C⁻¹)^{1/2} Σβ^{-1/2},
///   C = Σβ^{-1/2} Σ_{α,τ} Σβ^{-1/2}.
///
/// It satisfies d/dt cost(Exp_Σβ(tX))|₀ = tr(G Σβ X) for every symmetric X.
SymMatrix suot_gradient(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double tau);

/// Same gradient computed from the relaxed marginal, 2(Id − T_{Σβ→Σx}).
SymMatrix suot_gradient_transport_form(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double tau);

/// Weight of the mean term: Υ depends on the means through (a−b)ᵀ M (a−b).
SymMatrix mean_weight_matrix(const SpdMatrix& sigma_a, double tau);

}  // namespace suotbary
