#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "suotbary/barycenter.hpp"
#include "suotbary/gaussian.hpp"
#include "suotbary/oracle.hpp"
#include "suotbary/spd.hpp"

namespace suotbary::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitBadConfig = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "SUOTBARY_OUT_DIR";

/// Raised for malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eleven-point τ grid used by the ablation.
std::vector<double> default_tau_grid();

enum class Preset {
  /// n covariances from sample_spd (or the diagonal sampler).
  kRandom,
  /// The fixed 2-D pair of anisotropic Gaussians used for the robustness demo.
  kTwoGaussian,
};

struct Contamination {
  double weight = 0.2;
  int member = 0;
  /// Outlier covariance; defaults to outlier_scale·Id.
  std::optional<SymMatrix> outlier;
  double outlier_scale = 25.0;

  SpdMatrix outlier_cov(int d) const;
};

struct ExperimentConfig {
  int d = 5;
  int n = 20;
  double sigma = 0.5;
  bool diagonal = false;
  Preset preset = Preset::kRandom;
  double tau = 1.0;
  std::vector<double> tau_grid = default_tau_grid();
  /// Compare runs over these τ values; empty means {tau}.
  std::vector<double> compare_taus;
  std::vector<double> exact_etas = {0.1, 0.2, 0.5};
  std::vector<double> hybrid_etas = {1.0};
  OptimConfig optim;
  std::optional<std::uint64_t> seed;
  std::optional<Contamination> contamination;
  std::filesystem::path output_dir;
  /// Defaults to <output_dir>/clean.
  std::filesystem::path corpus_dir;
  int grid_points = 81;
  int gradcheck_instances = 30;
  int gradcheck_directions = 5;
  double gradcheck_tolerance = 1e-5;

  std::filesystem::path corpus() const;
  void validate() const;
};

/// Parses a JSON config; unknown keys raise ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Reads the config file (if any), overlays the keys of overrides_json and
/// parses the result. The output directory falls back to default_output_dir().
ExperimentConfig resolve_config(const std::optional<std::filesystem::path>& config_file,
                                std::string_view overrides_json);

/// $SUOTBARY_OUT_DIR if set, otherwise ./suotbary-out.
std::filesystem::path default_output_dir();

struct Corpus {
  std::vector<GaussianMeasure> clean;
  std::vector<GaussianMeasure> contaminated;
};

Corpus generate_corpus(const ExperimentConfig& config);
/// Reads measure_*.json from dir in lexicographic order.
std::vector<GaussianMeasure> load_corpus(const std::filesystem::path& dir);
std::vector<SpdMatrix> covariances(const std::vector<GaussianMeasure>& measures);

/// Runs the hybrid iteration (η = 1) until ‖G‖_Σ ≤ tol; used whenever a
/// SUOT barycenter is needed as a fixed reference rather than as a trace.
RunResult solve_suot_barycenter(const BarycenterProblem& problem, const SpdMatrix& init, double tol = 1e-10,
                                int max_iters = 50000);

struct CompareRow {
  double tau = 0.0;
  double w2_wasserstein = 0.0;  // w2²(B_W, B_clean)
  double w2_suot = 0.0;         // w2²(B_S, B_clean)
  double ratio = 0.0;
  SpdMatrix suot_barycenter;
};

struct CompareResult {
  SpdMatrix clean_barycenter;
  SpdMatrix wasserstein_barycenter;
  std::vector<CompareRow> rows;
};

CompareResult compare_barycenters(const std::vector<SpdMatrix>& clean, const std::vector<SpdMatrix>& contaminated,
                                  const std::vector<double>& taus);

struct AblationRow {
  double tau = 0.0;
  double w2 = 0.0;  // W2 distance, not squared
  double loss = 0.0;
};

std::vector<AblationRow> ablate_tau(const std::vector<SpdMatrix>& covs, const std::vector<double>& taus);

std::vector<OracleReport> gradient_check(std::uint64_t seed, int instances, int directions, double tolerance);

/// Writes x,y,density rows on a grid_points × grid_points lattice over
/// [-half_width, half_width]². The density is the mixture Σ w_k N(0, Σ_k).
void write_contour_csv(const std::filesystem::path& path, const std::vector<std::pair<double, SpdMatrix>>& mixture,
                       double half_width, int grid_points);

int cmd_gen(const ExperimentConfig& config);
int cmd_barycenter(const ExperimentConfig& config);
int cmd_compare(const ExperimentConfig& config);
int cmd_ablate_tau(const ExperimentConfig& config);
int cmd_gradcheck(const ExperimentConfig& config);
int cmd_suot(const std::filesystem::path& alpha, const std::filesystem::path& beta, double tau,
             const std::filesystem::path& output);

}  // namespace suotbary::harness
