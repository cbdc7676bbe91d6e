#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "suotbary/error.hpp"
#include "suotbary/harness.hpp"

namespace {

using namespace suotbary;
using namespace suotbary::harness;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> d;
  std::optional<int> n;
  std::optional<double> sigma;
  std::optional<double> tau;
  std::optional<double> eta;
  std::optional<int> max_iters;
  std::optional<double> tol;
  std::optional<double> rho;
  std::optional<std::string> box_policy;
  std::optional<std::string> mode;
  std::optional<std::string> out;
  std::optional<std::string> corpus;
  std::optional<std::string> preset;
  std::optional<bool> diagonal;
};

void add_experiment_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("-c,--config", f.config, "JSON experiment config");
  cmd->add_option("--seed", f.seed, "RNG seed; required here or in the config");
  cmd->add_option("--out", f.out, "Output directory (default $SUOTBARY_OUT_DIR or ./suotbary-out)");
  cmd->add_option("--d", f.d, "Dimension");
  cmd->add_option("--n", f.n, "Number of measures");
  cmd->add_option("--sigma", f.sigma, "Sampling spread");
  cmd->add_option("--tau", f.tau, "KL relaxation weight");
  cmd->add_option("--eta", f.eta, "Step size");
  cmd->add_option("--max-iters", f.max_iters, "Iteration cap");
  cmd->add_option("--tol", f.tol, "Stopping tolerance");
  cmd->add_option("--rho", f.rho, "Eigenvalue box parameter");
  cmd->add_option("--box-policy", f.box_policy, "assert | warn | clamp");
  cmd->add_option("--mode", f.mode, "deterministic | stochastic");
  cmd->add_option("--corpus", f.corpus, "Corpus directory");
  cmd->add_option("--preset", f.preset, "random | two_gaussian");
  cmd->add_option("--diagonal", f.diagonal, "Sample diagonal covariances");
}

ExperimentConfig resolve(const Flags& f) {
  nlohmann::json ov = nlohmann::json::object();
  auto set = [&ov](const char* key, const auto& value) {
    if (value) ov[key] = *value;
  };
  set("seed", f.seed);
  set("d", f.d);
  set("n", f.n);
  set("sigma", f.sigma);
  set("tau", f.tau);
  set("eta", f.eta);
  set("max_iters", f.max_iters);
  set("tol", f.tol);
  set("rho", f.rho);
  set("box_policy", f.box_policy);
  set("mode", f.mode);
  set("corpus_dir", f.corpus);
  set("preset", f.preset);
  set("diagonal", f.diagonal);
  set("output_dir", f.out);
  std::optional<std::filesystem::path> file;
  if (f.config) file = *f.config;
  return resolve_config(file, ov.dump());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust Gaussian barycenters with semi-unbalanced optimal transport"};
  app.require_subcommand(1);

  Flags flags;
  CLI::App* gen = app.add_subcommand("gen", "Sample a corpus of Gaussian measures");
  CLI::App* bary = app.add_subcommand("barycenter", "Run the barycenter optimizers on a corpus");
  CLI::App* compare = app.add_subcommand("compare", "Compare Wasserstein and SUOT barycenters under contamination");
  CLI::App* ablate = app.add_subcommand("ablate-tau", "Distance to the Wasserstein barycenter across a tau grid");
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of the closed-form gradient");
  for (CLI::App* cmd : {gen, bary, compare, ablate, gradcheck}) add_experiment_flags(cmd, flags);

  std::string alpha;
  std::string beta;
  double tau = 1.0;
  std::string plan_out;
  CLI::App* suot = app.add_subcommand("suot", "Closed-form SUOT plan between two measure files");
  suot->add_option("alpha", alpha, "Measure JSON for the relaxed side")->required();
  suot->add_option("beta", beta, "Measure JSON for the hard-constrained side")->required();
  suot->add_option("--tau", tau, "KL relaxation weight");
  suot->add_option("-o,--output", plan_out, "Write the plan here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    if (suot->parsed()) return cmd_suot(alpha, beta, tau, plan_out);
    const ExperimentConfig config = resolve(flags);
    if (gen->parsed()) return cmd_gen(config);
    if (bary->parsed()) return cmd_barycenter(config);
    if (compare->parsed()) return cmd_compare(config);
    if (ablate->parsed()) return cmd_ablate_tau(config);
    if (gradcheck->parsed()) return cmd_gradcheck(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool input_problem = e.code() == ErrorCode::kIo || e.code() == ErrorCode::kInvalidInput;
    return input_problem ? kExitBadConfig : kExitNumerical;
  }
  return kExitBadConfig;
}
