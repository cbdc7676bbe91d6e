#include "suotbary/barycenter.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "suotbary/bures.hpp"
#include "suotbary/gaussian.hpp"
#include "suotbary/random.hpp"
#include "suotbary/suot.hpp"

namespace suotbary {

std::string_view to_string(BoxPolicy p) {
  switch (p) {
    case BoxPolicy::kAssert: return "assert";
    case BoxPolicy::kWarn: return "warn";
    case BoxPolicy::kClamp: return "clamp";
  }
  return "warn";
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kConverged: return "Converged";
    case RunStatus::kMaxIters: return "MaxIters";
    case RunStatus::kStepRejected: return "StepRejected";
  }
  return "MaxIters";
}

BoxPolicy box_policy_from_string(std::string_view s) {
  if (s == "assert") return BoxPolicy::kAssert;
  if (s == "warn") return BoxPolicy::kWarn;
  if (s == "clamp") return BoxPolicy::kClamp;
  throw Error(ErrorCode::kInvalidInput, "unknown box policy '" + std::string(s) + "'");
}

BarycenterProblem BarycenterProblem::uniform(std::vector<SpdMatrix> covs, double tau) {
  const std::size_t n = covs.size();
  BarycenterProblem p{std::move(covs), std::vector<double>(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n)), tau};
  return p;
}

void BarycenterProblem::validate() const {
  if (covs.empty()) throw Error(ErrorCode::kInvalidInput, "barycenter problem needs at least one measure");
  if (weights.size() != covs.size()) throw Error(ErrorCode::kInvalidInput, "one weight per measure required");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::kInvalidInput, "tau must be positive");
  const int d = covs.front().dim();
  for (const auto& c : covs) {
    if (c.dim() != d) throw Error(ErrorCode::kInvalidInput, "measures have different dimensions");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::kInvalidInput, "weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::kInvalidInput, "weights must sum to one");
}

double objective(const BarycenterProblem& problem, const SpdMatrix& sigma_b) {
  double total = 0.0;
  for (std::size_t i = 0; i < problem.covs.size(); ++i) {
    if (problem.weights[i] == 0.0) continue;
    total += problem.weights[i] * suot_cost_centered(problem.covs[i], sigma_b, problem.tau);
  }
  return total;
}

SymMatrix objective_gradient(const BarycenterProblem& problem, const SpdMatrix& sigma_b) {
  const int d = sigma_b.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < problem.covs.size(); ++i) {
    if (problem.weights[i] == 0.0) continue;
    g += problem.weights[i] * suot_gradient(problem.covs[i], sigma_b, problem.tau).mat();
  }
  return SymMatrix(g);
}

double exact_rate_factor(double tau, double eta, double rho) {
  const double denom = rho * std::pow(rho * rho + 2.0 * tau * rho, 1.5);
  return 1.0 - 8.0 * tau * tau * eta * (1.0 - 0.5 * eta) / denom;
}

namespace {

using Clock = std::chrono::steady_clock;

void require_init(const BarycenterProblem& problem, const SpdMatrix& init) {
  problem.validate();
  if (init.dim() != problem.dim()) throw Error(ErrorCode::kInvalidInput, "initial point has the wrong dimension");
}

// Shared bookkeeping for all descent loops: box policy, timing, records.
class RunRecorder {
 public:
  RunRecorder(const OptimConfig& config, RunTrace& trace) : config_(config), trace_(trace), start_(Clock::now()) {
    if (config_.box_policy == BoxPolicy::kAssert && !config_.rho) {
      throw Error(ErrorCode::kInvalidInput, "box policy 'assert' requires rho");
    }
    if (config_.rho && !(*config_.rho > 1.0)) throw Error(ErrorCode::kInvalidInput, "rho must exceed 1");
  }

  // Applies the box policy to a fresh iterate; returns whether it lies in the box.
  bool admit(SpdMatrix& sigma) {
    if (!config_.rho) return true;
    if (in_box(sigma, *config_.rho)) return true;
    ++trace_.box_violations;
    switch (config_.box_policy) {
      case BoxPolicy::kAssert: {
        std::ostringstream os;
        os << "iterate left the box with radius " << box_radius(sigma) << " > rho = " << *config_.rho;
        throw Error(ErrorCode::kBoxViolation, os.str());
      }
      case BoxPolicy::kClamp:
        sigma = clamp_to_box(sigma, *config_.rho);
        return true;
      case BoxPolicy::kWarn:
        break;
    }
    return false;
  }

  void record(int iter, double loss, double grad_norm, bool inside) {
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    IterationRecord rec{iter, loss, grad_norm, inside, ms};
    trace_.records.push_back(rec);
    if (config_.on_iteration) config_.on_iteration(rec);
  }

  bool stop(double previous_loss, double loss, double grad_norm) const {
    if (config_.stop_on_grad_norm) return grad_norm <= config_.tol;
    return std::abs(previous_loss - loss) <= config_.tol;
  }

 private:
  const OptimConfig& config_;
  RunTrace& trace_;
  Clock::time_point start_;
};

// Id − η·G, with one permitted halving of η when it leaves the SPD cone.
// Returns nullopt once the halving has been spent.
std::optional<Eigen::MatrixXd> descent_factor(const SymMatrix& grad, double& eta, bool& halved) {
  const int d = grad.dim();
  for (;;) {
    Eigen::MatrixXd step = Eigen::MatrixXd::Identity(d, d) - eta * grad.mat();
    if (min_eigenvalue(SymMatrix(step)) > kEigenvalueFloor) return step;
    if (halved) return std::nullopt;
    eta *= 0.5;
    halved = true;
  }
}

SpdMatrix advance(const SpdMatrix& sigma, const Eigen::MatrixXd& factor) {
  return SpdMatrix(Eigen::MatrixXd(factor * sigma.mat() * factor.transpose()));
}

// Σ_i w_i T_{Σβ→Σ_{x_i}}; the objective gradient equals 2(Id − S).
Eigen::MatrixXd averaged_relaxed_map(const BarycenterProblem& problem, const SpdMatrix& sigma_b) {
  const int d = sigma_b.dim();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < problem.covs.size(); ++i) {
    if (problem.weights[i] == 0.0) continue;
    const SpdMatrix sigma_x = relaxed_covariance(problem.covs[i], sigma_b, problem.tau);
    s += problem.weights[i] * transport_map(sigma_b, sigma_x).mat();
  }
  return s;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Xoshiro256 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  return order;
}

}  // namespace

RunResult exact_geodesic_gd(const BarycenterProblem& problem, const OptimConfig& config, const SpdMatrix& init) {
  require_init(problem, init);
  if (!(config.eta > 0.0 && config.eta < 2.0)) {
    throw Error(ErrorCode::kInvalidInput, "exact method needs a step size in (0, 2)");
  }
  RunResult out{init, {}};
  RunRecorder rec(config, out.trace);
  bool inside = rec.admit(out.sigma);

  double loss = objective(problem, out.sigma);
  SymMatrix grad = objective_gradient(problem, out.sigma);
  rec.record(0, loss, tangent_norm(out.sigma, grad), inside);

  double eta = config.eta;
  bool halved = false;
  out.trace.status = RunStatus::kMaxIters;
  for (int k = 1; k <= config.max_iters; ++k) {
    const auto factor = descent_factor(grad, eta, halved);
    if (!factor) {
      out.trace.status = RunStatus::kStepRejected;
      break;
    }
    out.sigma = advance(out.sigma, *factor);
    inside = rec.admit(out.sigma);
    const double previous = loss;
    loss = objective(problem, out.sigma);
    grad = objective_gradient(problem, out.sigma);
    const double gnorm = tangent_norm(out.sigma, grad);
    rec.record(k, loss, gnorm, inside);
    if (rec.stop(previous, loss, gnorm)) {
      out.trace.status = RunStatus::kConverged;
      break;
    }
  }
  out.trace.eta = eta;
  return out;
}

RunResult hybrid_gd(const BarycenterProblem& problem, const OptimConfig& config, const SpdMatrix& init) {
  require_init(problem, init);
  if (!(config.eta > 0.0)) throw Error(ErrorCode::kInvalidInput, "hybrid method needs a positive step size");
  const int d = problem.dim();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);

  RunResult out{init, {}};
  RunRecorder rec(config, out.trace);
  bool inside = rec.admit(out.sigma);

  double loss = objective(problem, out.sigma);
  Eigen::MatrixXd s = averaged_relaxed_map(problem, out.sigma);
  rec.record(0, loss, tangent_norm(out.sigma, SymMatrix(2.0 * (id - s))), inside);

  double eta = config.eta;
  bool halved = false;
  out.trace.status = RunStatus::kMaxIters;
  for (int k = 1; k <= config.max_iters; ++k) {
    // (1−η)Id + ηS = Id − (η/2)·G with G = 2(Id − S).
    double half_eta = 0.5 * eta;
    const auto factor = descent_factor(SymMatrix(2.0 * (id - s)), half_eta, halved);
    eta = 2.0 * half_eta;
    if (!factor) {
      out.trace.status = RunStatus::kStepRejected;
      break;
    }
    out.sigma = advance(out.sigma, *factor);
    inside = rec.admit(out.sigma);
    const double previous = loss;
    loss = objective(problem, out.sigma);
    s = averaged_relaxed_map(problem, out.sigma);
    const double gnorm = tangent_norm(out.sigma, SymMatrix(2.0 * (id - s)));
    rec.record(k, loss, gnorm, inside);
    if (rec.stop(previous, loss, gnorm)) {
      out.trace.status = RunStatus::kConverged;
      break;
    }
  }
  out.trace.eta = eta;
  return out;
}

namespace {

enum class StochasticKind { kExact, kHybrid };

RunResult stochastic_pass(const BarycenterProblem& problem, const OptimConfig& config, const SpdMatrix& init,
                          std::uint64_t seed, StochasticKind kind) {
  require_init(problem, init);
  if (!(config.eta > 0.0)) throw Error(ErrorCode::kInvalidInput, "stochastic run needs a positive step size");
  const int d = problem.dim();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  const double n = static_cast<double>(problem.size());

  RunResult out{init, {}};
  RunRecorder rec(config, out.trace);
  bool inside = rec.admit(out.sigma);
  rec.record(0, objective(problem, out.sigma), tangent_norm(out.sigma, objective_gradient(problem, out.sigma)),
             inside);

  double scale = 1.0;  // 0.5 after the single permitted halving
  bool halved = false;
  out.trace.status = RunStatus::kMaxIters;
  const auto order = seeded_permutation(problem.size(), seed);
  int k = 0;
  for (std::size_t i : order) {
    const double step = scale * config.eta * n * problem.weights[i] / static_cast<double>(k + 1);
    SymMatrix direction = SymMatrix::zero(d);
    double eta = step;
    if (kind == StochasticKind::kExact) {
      direction = suot_gradient(problem.covs[i], out.sigma, problem.tau);
    } else {
      const SpdMatrix sigma_x = relaxed_covariance(problem.covs[i], out.sigma, problem.tau);
      direction = SymMatrix(2.0 * (id - transport_map(out.sigma, sigma_x).mat()));
      eta = 0.5 * step;
    }
    const bool was_halved = halved;
    const auto factor = descent_factor(direction, eta, halved);
    if (!factor) {
      out.trace.status = RunStatus::kStepRejected;
      break;
    }
    if (halved && !was_halved) scale = 0.5;
    out.sigma = advance(out.sigma, *factor);
    inside = rec.admit(out.sigma);
    ++k;
    rec.record(k, objective(problem, out.sigma), tangent_norm(out.sigma, objective_gradient(problem, out.sigma)),
               inside);
  }
  out.trace.eta = scale * config.eta;
  return out;
}

}  // namespace

RunResult exact_sgd(const BarycenterProblem& problem, const OptimConfig& config, const SpdMatrix& init,
                    std::uint64_t seed) {
  return stochastic_pass(problem, config, init, seed, StochasticKind::kExact);
}

RunResult hybrid_sgd(const BarycenterProblem& problem, const OptimConfig& config, const SpdMatrix& init,
                     std::uint64_t seed) {
  return stochastic_pass(problem, config, init, seed, StochasticKind::kHybrid);
}

Eigen::VectorXd mean_barycenter(const std::vector<Eigen::VectorXd>& means, const std::vector<SpdMatrix>& covs,
                                double tau, const std::vector<double>& weights) {
  if (means.empty() || means.size() != covs.size()) {
    throw Error(ErrorCode::kInvalidInput, "mean_barycenter: need one mean per covariance");
  }
  if (!weights.empty() && weights.size() != covs.size()) {
    throw Error(ErrorCode::kInvalidInput, "mean_barycenter: need one weight per measure");
  }
  const int d = covs.front().dim();
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < covs.size(); ++i) {
    if (covs[i].dim() != d || means[i].size() != d) {
      throw Error(ErrorCode::kInvalidInput, "mean_barycenter: dimension mismatch");
    }
    const double w = weights.empty() ? 1.0 / static_cast<double>(covs.size()) : weights[i];
    const Eigen::MatrixXd m = w * mean_weight_matrix(covs[i], tau).mat();
    lhs += m;
    rhs += m * means[i];
  }
  const SymMatrix system(lhs);
  const double lo = min_eigenvalue(system);
  if (!(lo > kEigenvalueFloor)) {
    std::ostringstream os;
    os << "mean_barycenter: weighted weight matrix has smallest eigenvalue " << lo;
    throw Error(ErrorCode::kSingularSystem, os.str());
  }
  return system.mat().ldlt().solve(rhs);
}

SpdMatrix wasserstein_barycenter(const std::vector<SpdMatrix>& covs, const std::vector<double>& weights,
                                 const OptimConfig& config) {
  if (covs.empty()) throw Error(ErrorCode::kInvalidInput, "wasserstein_barycenter: no measures");
  const int d = covs.front().dim();
  const std::size_t n = covs.size();
  std::vector<double> w = weights.empty() ? std::vector<double>(n, 1.0 / static_cast<double>(n)) : weights;
  if (w.size() != n) throw Error(ErrorCode::kInvalidInput, "wasserstein_barycenter: one weight per measure");

  Eigen::MatrixXd start = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < n; ++i) start += w[i] * covs[i].mat();
  SpdMatrix sigma(start);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  for (int k = 0; k < config.max_iters; ++k) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < n; ++i) s += w[i] * transport_map(sigma, covs[i]).mat();
    sigma = advance(sigma, s);
    if ((s - id).norm() <= config.tol) break;
  }
  return sigma;
}

SymMatrix numeric_euclidean_gradient(const BarycenterProblem& problem, const SpdMatrix& sigma_b, double h) {
  const int d = sigma_b.dim();
  Eigen::MatrixXd grad(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(d, d);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      const double up = objective(problem, SpdMatrix(Eigen::MatrixXd(sigma_b.mat() + h * e)));
      const double down = objective(problem, SpdMatrix(Eigen::MatrixXd(sigma_b.mat() - h * e)));
      const double derivative = (up - down) / (2.0 * h);
      // An off-diagonal perturbation moves two entries at once.
      grad(i, j) = grad(j, i) = i == j ? derivative : 0.5 * derivative;
    }
  }
  return SymMatrix(grad);
}

RunResult numeric_gd_baseline(const BarycenterProblem& problem, const OptimConfig& config, const SpdMatrix& init) {
  require_init(problem, init);
  if (!(config.eta > 0.0)) throw Error(ErrorCode::kInvalidInput, "baseline needs a positive step size");
  const int d = problem.dim();
  RunResult out{init, {}};
  RunRecorder rec(config, out.trace);
  bool inside = rec.admit(out.sigma);

  auto riemannian = [&](const SpdMatrix& sigma) {
    const Eigen::MatrixXd gs = numeric_euclidean_gradient(problem, sigma, config.fd_step).mat() * sigma.mat();
    return SymMatrix(2.0 * (gs + gs.transpose()));
  };

  double loss = objective(problem, out.sigma);
  SymMatrix grad = riemannian(out.sigma);
  rec.record(0, loss, tangent_norm(out.sigma, grad), inside);

  Eigen::MatrixXd velocity = Eigen::MatrixXd::Zero(d, d);
  double eta = config.eta;
  bool halved = false;
  out.trace.status = RunStatus::kMaxIters;
  for (int k = 1; k <= config.max_iters; ++k) {
    velocity = config.momentum * velocity + grad.mat();
    const auto factor = descent_factor(SymMatrix(velocity), eta, halved);
    if (!factor) {
      out.trace.status = RunStatus::kStepRejected;
      break;
    }
    out.sigma = advance(out.sigma, *factor);
    inside = rec.admit(out.sigma);
    const double previous = loss;
    loss = objective(problem, out.sigma);
    grad = riemannian(out.sigma);
    const double gnorm = tangent_norm(out.sigma, grad);
    rec.record(k, loss, gnorm, inside);
    if (rec.stop(previous, loss, gnorm)) {
      out.trace.status = RunStatus::kConverged;
      break;
    }
  }
  out.trace.eta = eta;
  return out;
}

}  // namespace suotbary
