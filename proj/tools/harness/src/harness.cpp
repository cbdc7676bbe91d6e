#include "suotbary/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "suotbary/bures.hpp"
#include "suotbary/error.hpp"
#include "suotbary/io.hpp"
#include "suotbary/random.hpp"
#include "suotbary/suot.hpp"

namespace suotbary::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> default_tau_grid() { return {0.005, 0.01, 0.02, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 50.0, 100.0}; }

SpdMatrix Contamination::outlier_cov(int d) const {
  if (outlier) {
    if (outlier->dim() != d) throw ConfigError("contamination outlier has the wrong dimension");
    return SpdMatrix(*outlier);
  }
  return SpdMatrix(Eigen::MatrixXd(outlier_scale * Eigen::MatrixXd::Identity(d, d)));
}

fs::path ExperimentConfig::corpus() const { return corpus_dir.empty() ? output_dir / "clean" : corpus_dir; }

void ExperimentConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
  };
  if (d < 1) throw ConfigError("d must be positive");
  if (n < 1) throw ConfigError("n must be positive");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be nonnegative");
  positive(tau, "tau");
  for (double t : tau_grid) positive(t, "tau_grid entries");
  for (double t : compare_taus) positive(t, "compare_taus entries");
  for (double e : exact_etas) {
    if (!(e > 0.0 && e < 2.0)) throw ConfigError("exact_etas entries must lie in (0, 2)");
  }
  for (double e : hybrid_etas) positive(e, "hybrid_etas entries");
  positive(optim.eta, "eta");
  positive(optim.tol, "tol");
  if (optim.max_iters < 1) throw ConfigError("max_iters must be positive");
  if (optim.rho && !(*optim.rho > 1.0)) throw ConfigError("rho must exceed 1");
  if (optim.box_policy == BoxPolicy::kAssert && !optim.rho) throw ConfigError("box_policy 'assert' needs rho");
  if (grid_points < 2) throw ConfigError("grid_points must be at least 2");
  if (gradcheck_instances < 1 || gradcheck_directions < 1) throw ConfigError("gradcheck counts must be positive");
  positive(gradcheck_tolerance, "gradcheck_tolerance");
  if (preset == Preset::kTwoGaussian && d != 2) throw ConfigError("preset 'two_gaussian' requires d = 2");
  if (contamination) {
    const auto& c = *contamination;
    if (!(c.weight >= 0.0 && c.weight <= 1.0)) throw ConfigError("contamination weight must lie in [0, 1]");
    const int members = preset == Preset::kTwoGaussian ? 2 : n;
    if (c.member < 0 || c.member >= members) throw ConfigError("contamination member out of range");
    positive(c.outlier_scale, "outlier_scale");
  }
}

namespace {

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

std::vector<double> get_reals(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError("config key '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return j.get<int>();
}

Contamination parse_contamination(const json& j) {
  if (!j.is_object()) throw ConfigError("'contamination' must be an object");
  Contamination c;
  for (const auto& [key, value] : j.items()) {
    if (key == "weight") {
      c.weight = get_as<double>(value, key);
    } else if (key == "member") {
      c.member = get_int(value, key);
    } else if (key == "outlier_scale") {
      c.outlier_scale = get_as<double>(value, key);
    } else if (key == "outlier") {
      try {
        c.outlier = sym_from_json(value.dump());
      } catch (const Error& e) {
        throw ConfigError(std::string("contamination outlier: ") + e.what());
      }
    } else {
      throw ConfigError("unknown contamination key '" + key + "'");
    }
  }
  return c;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "d") {
      c.d = get_int(value, key);
    } else if (key == "n") {
      c.n = get_int(value, key);
    } else if (key == "sigma") {
      c.sigma = get_as<double>(value, key);
    } else if (key == "diagonal") {
      c.diagonal = get_as<bool>(value, key);
    } else if (key == "preset") {
      const auto p = get_as<std::string>(value, key);
      if (p == "random") {
        c.preset = Preset::kRandom;
      } else if (p == "two_gaussian") {
        c.preset = Preset::kTwoGaussian;
        c.d = 2;
      } else {
        throw ConfigError("unknown preset '" + p + "'");
      }
    } else if (key == "tau") {
      c.tau = get_as<double>(value, key);
    } else if (key == "tau_grid") {
      c.tau_grid = get_reals(value, key);
    } else if (key == "compare_taus") {
      c.compare_taus = get_reals(value, key);
    } else if (key == "exact_etas") {
      c.exact_etas = get_reals(value, key);
    } else if (key == "hybrid_etas") {
      c.hybrid_etas = get_reals(value, key);
    } else if (key == "eta") {
      c.optim.eta = get_as<double>(value, key);
    } else if (key == "max_iters") {
      c.optim.max_iters = get_int(value, key);
    } else if (key == "tol") {
      c.optim.tol = get_as<double>(value, key);
    } else if (key == "rho") {
      c.optim.rho = get_as<double>(value, key);
    } else if (key == "box_policy") {
      try {
        c.optim.box_policy = box_policy_from_string(get_as<std::string>(value, key));
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "mode") {
      const auto m = get_as<std::string>(value, key);
      if (m == "deterministic") {
        c.optim.mode = RunMode::kDeterministic;
      } else if (m == "stochastic") {
        c.optim.mode = RunMode::kStochastic;
      } else {
        throw ConfigError("unknown mode '" + m + "'");
      }
    } else if (key == "stop_on_grad_norm") {
      c.optim.stop_on_grad_norm = get_as<bool>(value, key);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError("config key 'seed' must be a nonnegative integer");
      c.seed = value.get<std::uint64_t>();
    } else if (key == "contamination") {
      c.contamination = parse_contamination(value);
    } else if (key == "output_dir") {
      c.output_dir = get_as<std::string>(value, key);
    } else if (key == "corpus_dir") {
      c.corpus_dir = get_as<std::string>(value, key);
    } else if (key == "grid_points") {
      c.grid_points = get_int(value, key);
    } else if (key == "gradcheck_instances") {
      c.gradcheck_instances = get_int(value, key);
    } else if (key == "gradcheck_directions") {
      c.gradcheck_directions = get_int(value, key);
    } else if (key == "gradcheck_tolerance") {
      c.gradcheck_tolerance = get_as<double>(value, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text);
}

ExperimentConfig resolve_config(const std::optional<fs::path>& config_file, std::string_view overrides_json) {
  json merged = json::object();
  if (config_file) {
    std::string text;
    try {
      text = read_text_file(*config_file);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    try {
      merged = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError(config_file->string() + " is not valid JSON: " + e.what());
    }
    if (!merged.is_object()) throw ConfigError(config_file->string() + " must hold a JSON object");
  }
  const json overrides = json::parse(overrides_json);
  for (const auto& [key, value] : overrides.items()) merged[key] = value;
  ExperimentConfig config = parse_config(merged.dump());
  if (config.output_dir.empty()) config.output_dir = default_output_dir();
  return config;
}

fs::path default_output_dir() {
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return fs::path(env);
  return fs::path("suotbary-out");
}

namespace {

SpdMatrix rotated(double angle, double l1, double l2) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return SpdMatrix(Eigen::MatrixXd(r * Eigen::Vector2d(l1, l2).asDiagonal() * r.transpose()));
}

std::string measure_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "measure_%03zu.json", i);
  return buf;
}

// Shortest representation that parses back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string ms(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string eta_tag(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

json matrix_json(const SymMatrix& m) { return json::parse(matrix_to_json(m)); }

void require_seed(const ExperimentConfig& c) {
  if (!c.seed) throw ConfigError("a seed is required (--seed or config key 'seed')");
}

}  // namespace

Corpus generate_corpus(const ExperimentConfig& config) {
  config.validate();
  require_seed(config);
  Corpus out;
  const std::uint64_t seed = *config.seed;
  if (config.preset == Preset::kTwoGaussian) {
    out.clean.push_back(GaussianMeasure::centered(rotated(0.5, 2.0, 0.5)));
    out.clean.push_back(GaussianMeasure::centered(rotated(-0.7, 1.5, 0.4)));
  } else {
    for (int i = 0; i < config.n; ++i) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
      out.clean.push_back(GaussianMeasure::centered(config.diagonal ? sample_diagonal_spd(config.d, config.sigma, s)
                                                                    : sample_spd(config.d, config.sigma, s)));
    }
  }
  if (config.contamination) {
    const auto& c = *config.contamination;
    out.contaminated = out.clean;
    const int d = out.clean.front().dim();
    const Eigen::MatrixXd mixed =
        (1.0 - c.weight) * out.clean[static_cast<std::size_t>(c.member)].cov.mat() + c.weight * c.outlier_cov(d).mat();
    out.contaminated[static_cast<std::size_t>(c.member)] = GaussianMeasure::centered(SpdMatrix(mixed));
  }
  return out;
}

std::vector<GaussianMeasure> load_corpus(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIo, "corpus directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("measure_", 0) == 0 && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) throw Error(ErrorCode::kIo, "no measure_*.json files in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<GaussianMeasure> out;
  for (const auto& f : files) out.push_back(load_measure(f));
  return out;
}

std::vector<SpdMatrix> covariances(const std::vector<GaussianMeasure>& measures) {
  std::vector<SpdMatrix> out;
  out.reserve(measures.size());
  for (const auto& m : measures) out.push_back(m.cov);
  return out;
}

RunResult solve_suot_barycenter(const BarycenterProblem& problem, const SpdMatrix& init, double tol, int max_iters) {
  OptimConfig c;
  c.eta = 1.0;
  c.tol = tol;
  c.max_iters = max_iters;
  c.stop_on_grad_norm = true;
  return hybrid_gd(problem, c, init);
}

namespace {

OptimConfig fixed_point_config() {
  OptimConfig c;
  c.tol = 1e-13;
  c.max_iters = 10000;
  return c;
}

}  // namespace

CompareResult compare_barycenters(const std::vector<SpdMatrix>& clean, const std::vector<SpdMatrix>& contaminated,
                                  const std::vector<double>& taus) {
  if (clean.size() != contaminated.size()) throw Error(ErrorCode::kInvalidInput, "corpora differ in size");
  CompareResult out;
  out.clean_barycenter = wasserstein_barycenter(clean, {}, fixed_point_config());
  out.wasserstein_barycenter = wasserstein_barycenter(contaminated, {}, fixed_point_config());
  const double w2_w = w2_squared(out.wasserstein_barycenter, out.clean_barycenter);
  for (double tau : taus) {
    const BarycenterProblem problem = BarycenterProblem::uniform(contaminated, tau);
    const RunResult run = solve_suot_barycenter(problem, out.wasserstein_barycenter);
    CompareRow row;
    row.tau = tau;
    row.w2_wasserstein = w2_w;
    row.w2_suot = w2_squared(run.sigma, out.clean_barycenter);
    row.ratio = w2_w > 0.0 ? row.w2_suot / w2_w : 0.0;
    row.suot_barycenter = run.sigma;
    out.rows.push_back(row);
  }
  return out;
}

std::vector<AblationRow> ablate_tau(const std::vector<SpdMatrix>& covs, const std::vector<double>& taus) {
  const SpdMatrix reference = wasserstein_barycenter(covs, {}, fixed_point_config());
  std::vector<AblationRow> rows;
  for (double tau : taus) {
    const BarycenterProblem problem = BarycenterProblem::uniform(covs, tau);
    const RunResult run = solve_suot_barycenter(problem, reference);
    rows.push_back({tau, std::sqrt(w2_squared(run.sigma, reference)), run.trace.records.back().loss});
  }
  return rows;
}

std::vector<OracleReport> gradient_check(std::uint64_t seed, int instances, int directions, double tolerance) {
  Xoshiro256 rng(seed);
  std::vector<OracleReport> reports;
  for (int i = 0; i < instances; ++i) {
    const int d = 1 + static_cast<int>(rng.uniform() * 5.0);
    const double tau = std::pow(10.0, -1.0 + 2.0 * rng.uniform());
    const std::uint64_t base = seed + 1000 * static_cast<std::uint64_t>(i + 1);
    const SpdMatrix a = sample_spd(d, 0.5, base);
    const SpdMatrix b = sample_spd(d, 0.5, base + 1);
    const SymMatrix g = suot_gradient(a, b, tau);
    for (int k = 0; k < directions; ++k) {
      Eigen::MatrixXd x(d, d);
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) x(r, c) = 0.3 * rng.normal();
      }
      const SymMatrix dir(x);
      const double fd =
          fd_directional_derivative([&](const SpdMatrix& s) { return suot_cost_centered(a, s, tau); }, b, dir, 1e-5);
      std::ostringstream name;
      name << "instance " << i << " d=" << d << " tau=" << tau << " direction " << k;
      reports.push_back(make_report(name.str(), tangent_inner(b, g, dir), fd, tolerance));
    }
  }
  return reports;
}

void write_contour_csv(const fs::path& path, const std::vector<std::pair<double, SpdMatrix>>& mixture,
                       double half_width, int grid_points) {
  struct Component {
    double weight;
    Eigen::Matrix2d precision;
    double norm;
  };
  std::vector<Component> comps;
  for (const auto& [w, cov] : mixture) {
    if (cov.dim() != 2) throw Error(ErrorCode::kInvalidInput, "contours need d = 2");
    const Eigen::Matrix2d c = cov.mat();
    comps.push_back({w, c.inverse(), 1.0 / (2.0 * std::numbers::pi * std::sqrt(c.determinant()))});
  }
  std::ostringstream os;
  os << "x,y,density\n";
  const double step = 2.0 * half_width / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    for (int j = 0; j < grid_points; ++j) {
      const Eigen::Vector2d p(-half_width + step * i, -half_width + step * j);
      double density = 0.0;
      for (const auto& comp : comps) density += comp.weight * comp.norm * std::exp(-0.5 * p.dot(comp.precision * p));
      os << fmt(p(0)) << ',' << fmt(p(1)) << ',' << fmt(density) << '\n';
    }
  }
  std::string text = os.str();
  text.pop_back();
  write_text_file(path, text);
}

int cmd_gen(const ExperimentConfig& config) {
  const Corpus corpus = generate_corpus(config);
  for (std::size_t i = 0; i < corpus.clean.size(); ++i) {
    save_measure(config.output_dir / "clean" / measure_name(i), corpus.clean[i]);
  }
  for (std::size_t i = 0; i < corpus.contaminated.size(); ++i) {
    save_measure(config.output_dir / "contaminated" / measure_name(i), corpus.contaminated[i]);
  }
  std::cout << "wrote " << corpus.clean.size() << " clean";
  if (!corpus.contaminated.empty()) std::cout << " and " << corpus.contaminated.size() << " contaminated";
  std::cout << " measures under " << config.output_dir.string() << '\n';
  return kExitOk;
}

namespace {

// Appends one CSV row per iteration and flushes, so the file can be read
// while the run is in progress.
class TraceWriter {
 public:
  explicit TraceWriter(const fs::path& path) {
    fs::create_directories(path.parent_path());
    out_.open(path, std::ios::trunc);
    if (!out_) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    out_ << "iter,loss,grad_norm,in_box,ms\n" << std::flush;
  }

  void operator()(const IterationRecord& r) {
    out_ << r.iter << ',' << fmt(r.loss) << ',' << fmt(r.grad_norm) << ',' << (r.in_box ? 1 : 0) << ','
         << ms(r.elapsed_ms) << '\n'
         << std::flush;
  }

 private:
  std::ofstream out_;
};

struct RunSpec {
  std::string method;
  double eta;
};

}  // namespace

int cmd_barycenter(const ExperimentConfig& config) {
  config.validate();
  require_seed(config);
  const auto measures = load_corpus(config.corpus());
  const BarycenterProblem problem = BarycenterProblem::uniform(covariances(measures), config.tau);
  problem.validate();
  const int d = problem.dim();
  const bool stochastic = config.optim.mode == RunMode::kStochastic;

  std::vector<RunSpec> specs;
  for (double e : config.exact_etas) specs.push_back({"exact", e});
  for (double e : config.hybrid_etas) specs.push_back({"hybrid", e});

  std::vector<Eigen::VectorXd> means;
  bool centered = true;
  for (const auto& m : measures) {
    means.push_back(m.mean);
    centered = centered && m.mean.isZero(0.0);
  }
  std::optional<Eigen::VectorXd> mean;
  if (!centered) mean = mean_barycenter(means, problem.covs, problem.tau);

  int exit_code = kExitOk;
  json summary = json::array();
  for (const auto& spec : specs) {
    const std::string tag = spec.method + (stochastic ? "_sgd" : "") + "_eta" + eta_tag(spec.eta);
    TraceWriter writer(config.output_dir / "traces" / (tag + ".csv"));
    OptimConfig oc = config.optim;
    oc.eta = spec.eta;
    oc.on_iteration = [&writer](const IterationRecord& r) { writer(r); };

    json result{{"method", spec.method}, {"eta", spec.eta}, {"tau", problem.tau}, {"mode", stochastic ? "stochastic" : "deterministic"}};
    try {
      const SpdMatrix init = SpdMatrix::identity(d);
      RunResult run;
      if (spec.method == "exact") {
        run = stochastic ? exact_sgd(problem, oc, init, *config.seed) : exact_geodesic_gd(problem, oc, init);
      } else {
        run = stochastic ? hybrid_sgd(problem, oc, init, *config.seed) : hybrid_gd(problem, oc, init);
      }
      result["status"] = std::string(to_string(run.trace.status));
      result["iterations"] = run.trace.records.back().iter;
      result["final_loss"] = run.trace.records.back().loss;
      result["final_grad_norm"] = run.trace.records.back().grad_norm;
      result["box_violations"] = run.trace.box_violations;
      result["effective_eta"] = run.trace.eta;
      result["sigma"] = matrix_json(run.sigma.sym());
      if (mean) result["mean"] = std::vector<double>(mean->data(), mean->data() + mean->size());
      if (run.trace.status == RunStatus::kStepRejected) exit_code = kExitNumerical;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kIo) throw;
      result["status"] = "Error";
      result["error"] = e.what();
      exit_code = kExitNumerical;
    }
    write_text_file(config.output_dir / "results" / (tag + ".json"), result.dump(2));
    std::cout << tag << ": " << result["status"].get<std::string>();
    if (result.contains("final_loss")) std::cout << " loss=" << fmt(result["final_loss"].get<double>());
    std::cout << '\n';
    summary.push_back(result);
  }
  write_text_file(config.output_dir / "results" / "summary.json", summary.dump(2));
  return exit_code;
}

int cmd_compare(const ExperimentConfig& config) {
  config.validate();
  require_seed(config);
  const auto clean = load_corpus(config.output_dir / "clean");
  const auto contaminated = load_corpus(config.output_dir / "contaminated");
  const std::vector<double> taus = config.compare_taus.empty() ? std::vector<double>{config.tau} : config.compare_taus;
  const CompareResult r = compare_barycenters(covariances(clean), covariances(contaminated), taus);

  json report;
  report["w2_wasserstein"] = r.rows.empty() ? 0.0 : r.rows.front().w2_wasserstein;
  report["clean_barycenter"] = matrix_json(r.clean_barycenter.sym());
  report["wasserstein_barycenter"] = matrix_json(r.wasserstein_barycenter.sym());
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"tau", row.tau},
                    {"w2_wasserstein", row.w2_wasserstein},
                    {"w2_suot", row.w2_suot},
                    {"ratio", row.ratio},
                    {"suot_barycenter", matrix_json(row.suot_barycenter.sym())}});
    std::cout << "tau=" << row.tau << " w2(B_W,B_clean)=" << fmt(row.w2_wasserstein)
              << " w2(B_S,B_clean)=" << fmt(row.w2_suot) << " ratio=" << fmt(row.ratio) << '\n';
  }
  report["rows"] = rows;
  write_text_file(config.output_dir / "compare" / "report.json", report.dump(2));

  if (clean.front().dim() == 2) {
    double spread = std::max(max_eigenvalue(r.clean_barycenter.sym()), max_eigenvalue(r.wasserstein_barycenter.sym()));
    for (const auto& m : clean) spread = std::max(spread, max_eigenvalue(m.cov.sym()));
    const double half_width = 3.0 * std::sqrt(spread);
    const fs::path dir = config.output_dir / "compare" / "contours";
    const int g = config.grid_points;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      write_contour_csv(dir / ("clean_" + std::to_string(i) + ".csv"), {{1.0, clean[i].cov}}, half_width, g);
      std::vector<std::pair<double, SpdMatrix>> mixture = {{1.0, contaminated[i].cov}};
      if (config.contamination && static_cast<std::size_t>(config.contamination->member) == i) {
        const double w = config.contamination->weight;
        mixture = {{1.0 - w, clean[i].cov}, {w, config.contamination->outlier_cov(2)}};
      }
      write_contour_csv(dir / ("contaminated_" + std::to_string(i) + ".csv"), mixture, half_width, g);
    }
    write_contour_csv(dir / "barycenter_clean.csv", {{1.0, r.clean_barycenter}}, half_width, g);
    write_contour_csv(dir / "barycenter_wasserstein.csv", {{1.0, r.wasserstein_barycenter}}, half_width, g);
    for (const auto& row : r.rows) {
      write_contour_csv(dir / ("barycenter_suot_tau" + eta_tag(row.tau) + ".csv"), {{1.0, row.suot_barycenter}},
                        half_width, g);
    }
  }
  return kExitOk;
}

int cmd_ablate_tau(const ExperimentConfig& config) {
  config.validate();
  require_seed(config);
  const auto measures = load_corpus(config.corpus());
  const auto rows = ablate_tau(covariances(measures), config.tau_grid);
  std::ostringstream os;
  os << "tau,w2,loss\n";
  for (const auto& r : rows) os << fmt(r.tau) << ',' << fmt(r.w2) << ',' << fmt(r.loss) << '\n';
  std::string text = os.str();
  text.pop_back();
  write_text_file(config.output_dir / "ablation" / "tau_ablation.csv", text);
  for (const auto& r : rows) std::cout << "tau=" << r.tau << " w2=" << fmt(r.w2) << '\n';
  return kExitOk;
}

int cmd_gradcheck(const ExperimentConfig& config) {
  config.validate();
  require_seed(config);
  const auto reports =
      gradient_check(*config.seed, config.gradcheck_instances, config.gradcheck_directions, config.gradcheck_tolerance);
  write_text_file(config.output_dir / "gradcheck.json", reports_to_json(reports));
  const auto failed = std::count_if(reports.begin(), reports.end(), [](const OracleReport& r) { return !r.pass; });
  double worst = 0.0;
  for (const auto& r : reports) worst = std::max(worst, r.rel_error);
  std::cout << reports.size() - static_cast<std::size_t>(failed) << "/" << reports.size()
            << " directional derivatives within tolerance, worst relative error " << worst << '\n';
  return failed == 0 ? kExitOk : kExitNumerical;
}

int cmd_suot(const fs::path& alpha, const fs::path& beta, double tau, const fs::path& output) {
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  const GaussianMeasure a = load_measure(alpha);
  const GaussianMeasure b = load_measure(beta);
  const SuotPlan plan = solve_suot(a, b, tau);
  json j;
  j["tau"] = tau;
  j["a_x"] = std::vector<double>(plan.a_x.data(), plan.a_x.data() + plan.a_x.size());
  j["sigma_x"] = matrix_json(plan.sigma_x.sym());
  json k = json::array();
  for (Eigen::Index i = 0; i < plan.k_xb.rows(); ++i) k.push_back(plan.k_xb(i, i));
  j["k_xb_singular_values"] = k;
  j["m_pi"] = plan.m_pi;
  j["upsilon"] = plan.upsilon;
  j["cost"] = plan.cost;
  j["saturated"] = plan.saturated;
  const std::string text = j.dump(2);
  if (output.empty()) {
    std::cout << text << '\n';
  } else {
    write_text_file(output, text);
  }
  return kExitOk;
}

}  // namespace suotbary::harness
