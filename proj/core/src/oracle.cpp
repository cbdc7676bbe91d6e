#include "suotbary/oracle.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "suotbary/bures.hpp"
#include "suotbary/error.hpp"
#include "suotbary/gaussian.hpp"

namespace suotbary {

OracleReport make_report(std::string instance, double closed_form, double oracle, double tolerance) {
  OracleReport r;
  r.instance = std::move(instance);
  r.closed_form = closed_form;
  r.oracle = oracle;
  r.abs_error = std::abs(closed_form - oracle);
  r.rel_error = r.abs_error / std::max(std::abs(oracle), 1e-12);
  r.tolerance = tolerance;
  r.pass = std::isfinite(r.rel_error) && r.rel_error <= tolerance;
  return r;
}

std::string reports_to_json(const std::vector<OracleReport>& reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) {
    out.push_back({{"instance", r.instance},
                   {"closed_form", r.closed_form},
                   {"oracle", r.oracle},
                   {"abs_error", r.abs_error},
                   {"rel_error", r.rel_error},
                   {"tolerance", r.tolerance},
                   {"pass", r.pass}});
  }
  return out.dump(2);
}

namespace {

constexpr double kStationarityTol = 1e-6;
constexpr double kFdStep = 1e-6;
constexpr int kMaxBfgsIters = 3000;

class CholeskyObjective {
 public:
  CholeskyObjective(const SpdMatrix& sa, const SpdMatrix& sb, double tau) : sa_(sa), sb_(sb), tau_(tau) {}

  int dim() const { return sa_.dim(); }
  int params() const { return dim() * (dim() + 1) / 2; }

  Eigen::MatrixXd factor(const Eigen::VectorXd& theta) const {
    const int d = dim();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
    int k = 0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j <= i; ++j) l(i, j) = i == j ? std::exp(theta(k++)) : theta(k++);
    }
    return l;
  }

  Eigen::VectorXd encode(const SpdMatrix& s) const {
    const Eigen::MatrixXd l = s.mat().llt().matrixL();
    Eigen::VectorXd theta(params());
    int k = 0;
    for (int i = 0; i < dim(); ++i) {
      for (int j = 0; j <= i; ++j) theta(k++) = i == j ? std::log(l(i, i)) : l(i, j);
    }
    return theta;
  }

  SpdMatrix point(const Eigen::VectorXd& theta) const {
    const Eigen::MatrixXd l = factor(theta);
    return SpdMatrix(Eigen::MatrixXd(l * l.transpose()));
  }

  double operator()(const Eigen::VectorXd& theta) const {
    if (!theta.allFinite()) return std::numeric_limits<double>::infinity();
    try {
      const SpdMatrix x = point(theta);
      return w2_squared(x, sb_) + tau_ * kl_divergence(x, sa_);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const {
    Eigen::VectorXd g(theta.size());
    Eigen::VectorXd probe = theta;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      probe(i) = theta(i) + kFdStep;
      const double up = (*this)(probe);
      probe(i) = theta(i) - kFdStep;
      const double down = (*this)(probe);
      probe(i) = theta(i);
      g(i) = (up - down) / (2.0 * kFdStep);
    }
    return g;
  }

 private:
  const SpdMatrix& sa_;
  const SpdMatrix& sb_;
  double tau_;
};

struct LocalMin {
  Eigen::VectorXd theta;
  double value;
  double grad_norm;
};

LocalMin bfgs(const CholeskyObjective& f, Eigen::VectorXd theta) {
  const Eigen::Index p = theta.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(p, p);
  double value = f(theta);
  Eigen::VectorXd g = f.gradient(theta);
  for (int it = 0; it < kMaxBfgsIters && g.norm() > 0.1 * kStationarityTol; ++it) {
    Eigen::VectorXd dir = -h * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      h.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
    }
    double step = 1.0;
    Eigen::VectorXd next;
    double next_value = value;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      next = theta + step * dir;
      next_value = f(next);
      if (next_value <= value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (h.isIdentity()) break;
      h.setIdentity();
      continue;
    }
    const Eigen::VectorXd next_g = f.gradient(next);
    const Eigen::VectorXd s = next - theta;
    const Eigen::VectorXd y = next_g - g;
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm()) {
      const double r = 1.0 / sy;
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(p, p);
      h = (id - r * s * y.transpose()) * h * (id - r * y * s.transpose()) + r * s * s.transpose();
    }
    theta = next;
    value = next_value;
    g = next_g;
  }
  return {theta, value, g.norm()};
}

}  // namespace

BruteForceResult brute_force_suot(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double tau, int restarts,
                                  std::uint64_t seed) {
  const int d = sigma_a.dim();
  if (d != sigma_b.dim()) throw Error(ErrorCode::kInvalidInput, "brute_force_suot: dimension mismatch");
  if (d > 4) throw Error(ErrorCode::kInvalidInput, "brute_force_suot supports d <= 4");
  if (!(tau > 0.0)) throw Error(ErrorCode::kInvalidInput, "brute_force_suot: tau must be positive");
  if (restarts < 1) throw Error(ErrorCode::kInvalidInput, "brute_force_suot: need at least one restart");

  const CholeskyObjective f(sigma_a, sigma_b, tau);
  const SpdMatrix roots[2] = {sqrt_spd(sigma_b), sqrt_spd(sigma_a)};

  BruteForceResult best;
  bool found = false;
  double best_grad = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    const SpdMatrix jitter = sample_spd(d, 0.3, seed + static_cast<std::uint64_t>(r));
    const SpdMatrix start = congruence(jitter, roots[r % 2].mat());
    const LocalMin local = bfgs(f, f.encode(start));
    best_grad = std::min(best_grad, local.grad_norm);
    if (local.grad_norm > kStationarityTol) continue;
    if (!found || local.value < best.value) {
      best = {f.point(local.theta), local.value, r};
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kNonConvergence,
                "brute_force_suot: no restart reached stationarity (best gradient norm " +
                    std::to_string(best_grad) + ")");
  }
  return best;
}

double fd_directional_derivative(const std::function<double(const SpdMatrix&)>& f, const SpdMatrix& base,
                                 const SymMatrix& dir, double h) {
  const Eigen::MatrixXd step = h * dir.mat();
  const double up = f(exp_map(base, SymMatrix(step)));
  const double down = f(exp_map(base, SymMatrix(Eigen::MatrixXd(-step))));
  return (up - down) / (2.0 * h);
}

ScalarMin golden_section_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw Error(ErrorCode::kInvalidInput, "golden_section_min: need lo < hi");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = f(c);
  double fe = f(e);
  while (b - a > tol) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = f(e);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace suotbary
