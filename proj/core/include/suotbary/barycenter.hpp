#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "suotbary/spd.hpp"

namespace suotbary {

/// Weighted SUOT barycenter problem over centered Gaussians, parameterized
/// by their covariances.
struct BarycenterProblem {
  std::vector<SpdMatrix> covs;
  std::vector<double> weights;
  double tau = 1.0;

  static BarycenterProblem uniform(std::vector<SpdMatrix> covs, double tau);

  /// Throws kInvalidInput unless n ≥ 1, dimensions agree, weights are
  /// nonnegative and sum to one within 1e-12, and τ > 0.
  void validate() const;
  int dim() const { return covs.empty() ? 0 : covs.front().dim(); }
  std::size_t size() const { return covs.size(); }
};

enum class BoxPolicy { kAssert, kWarn, kClamp };
enum class RunMode { kDeterministic, kStochastic };
enum class RunStatus { kConverged, kMaxIters, kStepRejected };

std::string_view to_string(BoxPolicy p);
std::string_view to_string(RunStatus s);
BoxPolicy box_policy_from_string(std::string_view s);

struct IterationRecord {
  int iter = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  bool in_box = true;
  double elapsed_ms = 0.0;
};

struct OptimConfig {
  double eta = 0.1;
  int max_iters = 500;
  /// Stop once |L_{k-1} − L_k| ≤ tol.
  double tol = 1e-8;
  std::optional<double> rho;
  BoxPolicy box_policy = BoxPolicy::kWarn;
  RunMode mode = RunMode::kDeterministic;
  /// Stop on ‖G‖_Σ ≤ tol instead of the loss difference.
  bool stop_on_grad_norm = false;
  /// Heavy-ball coefficient, used by numeric_gd_baseline only.
  double momentum = 0.0;
  /// Central-difference step for numeric_gd_baseline.
  double fd_step = 1e-6;
  /// Called after every recorded iteration; used for streaming traces.
  std::function<void(const IterationRecord&)> on_iteration;
};

struct RunTrace {
  std::vector<IterationRecord> records;
  RunStatus status = RunStatus::kMaxIters;
  /// Step size in effect at the end of the run (halved after a cone exit).
  double eta = 0.0;
  /// Number of iterates that left the box [1/ρ, ρ].
  int box_violations = 0;
};

struct RunResult {
  SpdMatrix sigma;
  RunTrace trace;
};

/// L(Σβ) = Σ_i w_i · suot_cost_centered(Σ_i, Σβ, τ), summed in index order.
double objective(const BarycenterProblem& problem, const SpdMatrix& sigma_b);

/// Σ_i w_i · suot_gradient(Σ_i, Σβ, τ).
SymMatrix objective_gradient(const BarycenterProblem& problem, const SpdMatrix& sigma_b);

/// Riemannian gradient descent: Σ ← (Id − ηG) Σ (Id − ηG).
RunResult exact_geodesic_gd(const BarycenterProblem& problem, const OptimConfig& config, const SpdMatrix& init);

/// Alternates closed-form relaxed marginals Σ_{x_i} with one Wasserstein
/// barycenter fixed-point step S = (1−η)Id + η Σ_i w_i T_{Σβ→Σ_{x_i}},
/// Σβ ← S Σβ S. With η = 1 this is the plain hybrid iteration.
RunResult hybrid_gd(const BarycenterProblem& problem, const OptimConfig& config, const SpdMatrix& init);

/// One pass over a seeded permutation, one step per measure with step size
/// η/(k+1) at the k-th visited measure.
RunResult exact_sgd(const BarycenterProblem& problem, const OptimConfig& config, const SpdMatrix& init,
                    std::uint64_t seed);
RunResult hybrid_sgd(const BarycenterProblem& problem, const OptimConfig& config, const SpdMatrix& init,
                     std::uint64_t seed);

/// b = (Σ w_i M_i)⁻¹ Σ w_i M_i a_i with M_i = mean_weight_matrix(Σ_i, τ).
/// An empty weight list means uniform weights.
Eigen::VectorXd mean_barycenter(const std::vector<Eigen::VectorXd>& means, const std::vector<SpdMatrix>& covs,
                                double tau, const std::vector<double>& weights = {});

/// Classical Wasserstein barycenter by the fixed-point iteration
/// Σ ← S Σ S, S = Σ_i w_i T_{Σ→Σ_i}; stops when ‖S − Id‖_F ≤ config.tol.
SpdMatrix wasserstein_barycenter(const std::vector<SpdMatrix>& covs, const std::vector<double>& weights,
                                 const OptimConfig& config);

/// Euclidean gradient of the objective by central differences over the
/// symmetric basis.
SymMatrix numeric_euclidean_gradient(const BarycenterProblem& problem, const SpdMatrix& sigma_b, double h);

/// Baseline descent that feeds 2(∇L Σ + (∇L Σ)ᵀ), with ∇L from finite
/// differences, into the exponential map, optionally with heavy-ball momentum.
RunResult numeric_gd_baseline(const BarycenterProblem& problem, const OptimConfig& config, const SpdMatrix& init);

/// Linear-rate contraction factor 1 − 8τ²η(1−η/2) / (ρ(ρ² + 2τρ)^{3/2}) for
/// iterates confined to the box [1/ρ, ρ].
double exact_rate_factor(double tau, double eta, double rho);

}  // namespace suotbary
