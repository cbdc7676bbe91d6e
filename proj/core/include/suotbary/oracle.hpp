#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "suotbary/spd.hpp"

namespace suotbary {

struct OracleReport {
  std::string instance;
  double closed_form = 0.0;
  double oracle = 0.0;
  double abs_error = 0.0;
  /// |closed_form − oracle| / max(|oracle|, 1e-12)
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

OracleReport make_report(std::string instance, double closed_form, double oracle, double tolerance);
std::string reports_to_json(const std::vector<OracleReport>& reports);

struct BruteForceResult {
  SpdMatrix sigma_x;
  double value = 0.0;
  /// Restart that produced the best point.
  int restart = 0;
};

/// Minimizes Σx ↦ w2²(Σx, Σβ) + τ·KL(Σx‖Σα) directly with BFGS on a
/// Cholesky factor (log-diagonal), gradients by central differences. Starts
/// alternate between random congruences of Σβ and Σα. Throws NonConvergence
/// if no restart reaches ‖FD grad‖ ≤ 1e-6. Requires d ≤ 4.
BruteForceResult brute_force_suot(const SpdMatrix& sigma_a, const SpdMatrix& sigma_b, double tau, int restarts = 8,
                                  std::uint64_t seed = 0);

/// (f(Exp_base(h·dir)) − f(Exp_base(−h·dir))) / 2h
double fd_directional_derivative(const std::function<double(const SpdMatrix&)>& f, const SpdMatrix& base,
                                 const SymMatrix& dir, double h);

struct ScalarMin {
  double argmin = 0.0;
  double value = 0.0;
};

/// Golden-section search for a unimodal f on [lo, hi].
ScalarMin golden_section_min(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace suotbary
