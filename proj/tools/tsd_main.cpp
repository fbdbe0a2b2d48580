#include "tsd/cli.hpp"
#include "tsd/run_config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

// Every flag is optional so that "set on the command line" is distinguishable
// from "absent": defaults < config file < flags.
struct Flags {
  std::optional<std::string> config_path;
  std::optional<std::string> input;
  std::optional<std::string> target;
  std::optional<std::string> out_dir;
  std::optional<std::string> model_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> k_sources;
  std::optional<int> max_iters;
  std::optional<double> tol;
  std::optional<std::string> scaling;
  std::optional<std::string> missing;
  std::optional<int> k_neighbors;
  std::optional<int> window_days;
  std::optional<double> bandwidth;
  std::optional<double> lambda_x, lambda_s, lambda_t;
  std::optional<double> lambda_w_l1, lambda_w_l2;
  std::optional<double> lambda_a_l1, lambda_a_l2;
  std::optional<double> lambda_d_l1, lambda_d_l2;
  std::optional<double> rho;
  std::optional<int> n_samples, n_analytes;
  std::optional<double> noise_std, smoothness, seasonal_amplitude;
  std::optional<int> folds, grid_size;
  std::optional<bool> spatially_blocked;
  std::optional<std::vector<std::string>> methods;
  std::optional<double> train_fraction;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file (flags override)");
  cmd->add_option("--input", f.input, "input CSV path");
  cmd->add_option("--target", f.target, "target analyte column name");
  cmd->add_option("--k", f.k_sources, "number of sources K");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--threads", f.threads, "worker threads (or TSD_THREADS)");
  cmd->add_option("--max-iters", f.max_iters, "solver iteration cap");
  cmd->add_option("--tol", f.tol, "relative objective-change tolerance");
  cmd->add_option("--scaling", f.scaling, "minmax | log1p_minmax | none");
  cmd->add_option("--missing", f.missing, "drop_row | impute_median");
  cmd->add_option("--k-neighbors", f.k_neighbors, "spatial kNN neighbor count");
  cmd->add_option("--window-days", f.window_days, "temporal window in days");
  cmd->add_option("--bandwidth", f.bandwidth, "spatial kernel bandwidth (meters)");
  cmd->add_option("--lambda-x", f.lambda_x, "reconstruction weight");
  cmd->add_option("--lambda-s", f.lambda_s, "spatial regularization weight");
  cmd->add_option("--lambda-t", f.lambda_t, "temporal regularization weight");
  cmd->add_option("--lambda-w-l1", f.lambda_w_l1, "W l1 weight");
  cmd->add_option("--lambda-w-l2", f.lambda_w_l2, "W l2 weight");
  cmd->add_option("--lambda-a-l1", f.lambda_a_l1, "A l1 weight");
  cmd->add_option("--lambda-a-l2", f.lambda_a_l2, "A l2 weight");
  cmd->add_option("--lambda-d-l1", f.lambda_d_l1, "D l1 weight");
  cmd->add_option("--lambda-d-l2", f.lambda_d_l2, "D l2 weight");
  cmd->add_option("--rho", f.rho, "sets all five ADMM penalties");
}

tsd::RunConfig resolve(const Flags& f) {
  tsd::RunConfig cfg;
  if (f.config_path) cfg = tsd::RunConfig::from_file(*f.config_path);

  auto take = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  take(cfg.input, f.input);
  take(cfg.target, f.target);
  take(cfg.out_dir, f.out_dir);
  take(cfg.model_dir, f.model_dir);
  take(cfg.seed, f.seed);
  take(cfg.threads, f.threads);
  take(cfg.hyperparams.k_sources, f.k_sources);
  take(cfg.hyperparams.max_iters, f.max_iters);
  take(cfg.hyperparams.tol, f.tol);
  if (f.scaling) cfg.preprocess.scaling = tsd::scaling_from_string(*f.scaling);
  if (f.missing) {
    cfg.preprocess.missing = tsd::missing_policy_from_string(*f.missing);
  }
  take(cfg.graph.k_neighbors, f.k_neighbors);
  take(cfg.graph.window_days, f.window_days);
  if (f.bandwidth) cfg.graph.bandwidth = *f.bandwidth;
  take(cfg.hyperparams.lambda_x, f.lambda_x);
  take(cfg.hyperparams.lambda_s, f.lambda_s);
  take(cfg.hyperparams.lambda_t, f.lambda_t);
  take(cfg.hyperparams.lambda_w_l1, f.lambda_w_l1);
  take(cfg.hyperparams.lambda_w_l2, f.lambda_w_l2);
  take(cfg.hyperparams.lambda_a_l1, f.lambda_a_l1);
  take(cfg.hyperparams.lambda_a_l2, f.lambda_a_l2);
  take(cfg.hyperparams.lambda_d_l1, f.lambda_d_l1);
  take(cfg.hyperparams.lambda_d_l2, f.lambda_d_l2);
  if (f.rho) {
    cfg.hyperparams.rho_w = cfg.hyperparams.rho_d1 = cfg.hyperparams.rho_d2 =
        cfg.hyperparams.rho_a1 = cfg.hyperparams.rho_a2 = *f.rho;
  }
  take(cfg.synth.n_samples, f.n_samples);
  take(cfg.synth.n_analytes, f.n_analytes);
  take(cfg.synth.noise_std, f.noise_std);
  take(cfg.synth.smoothness, f.smoothness);
  take(cfg.synth.seasonal_amplitude, f.seasonal_amplitude);
  take(cfg.cv.folds, f.folds);
  take(cfg.cv.grid_size, f.grid_size);
  take(cfg.cv.spatially_blocked, f.spatially_blocked);
  take(cfg.compare.methods, f.methods);
  take(cfg.compare.train_fraction, f.train_fraction);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tsd: joint target prediction and nonnegative source detection\n"
               "for geospatial-temporal chemistry tables"};
  app.require_subcommand(1);

  Flags flags;

  CLI::App* c_fit = app.add_subcommand(
      "fit", "fit the joint model and write factorization artifacts");
  CLI::App* c_predict = app.add_subcommand(
      "predict", "encode new samples against a fitted model and predict");
  CLI::App* c_decompose = app.add_subcommand(
      "decompose", "source decomposition without a prediction target");
  CLI::App* c_cv = app.add_subcommand(
      "cv", "cross-validated random search over the lambda grid");
  CLI::App* c_synth = app.add_subcommand(
      "synth", "generate a synthetic dataset with known ground truth");
  CLI::App* c_diagnose = app.add_subcommand(
      "diagnose", "seasonal and spatial continuity diagnostics");
  CLI::App* c_compare = app.add_subcommand(
      "compare", "RMSE comparison of tsdst and baselines on one split");

  for (CLI::App* cmd :
       {c_fit, c_predict, c_decompose, c_cv, c_synth, c_diagnose, c_compare}) {
    add_common_flags(cmd, flags);
  }
  c_predict->add_option("--model", flags.model_dir, "fitted model directory");
  c_synth->add_option("--n-samples", flags.n_samples, "sample count");
  c_synth->add_option("--n-analytes", flags.n_analytes, "analyte count");
  c_synth->add_option("--noise-std", flags.noise_std, "noise level on X and y");
  c_synth->add_option("--smoothness", flags.smoothness,
                      "spatial field length-scale");
  c_synth->add_option("--seasonal-amplitude", flags.seasonal_amplitude,
                      "seasonal modulation in [0,1]");
  c_cv->add_option("--folds", flags.folds, "cross-validation folds");
  c_cv->add_option("--grid-size", flags.grid_size, "random grid size");
  c_cv->add_flag("--spatially-blocked", flags.spatially_blocked,
                 "contiguous spatial folds instead of random folds");
  c_compare->add_option("--methods", flags.methods,
                        "subset of tsdst,lr_nmf,dksvd,ridge")
      ->delimiter(',');
  c_compare->add_option("--train-fraction", flags.train_fraction,
                        "train split fraction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return tsd::cli::kExitInputError;
  }

  try {
    tsd::RunConfig cfg = resolve(flags);
    tsd::cli::apply_thread_setting(cfg.threads);
    if (c_fit->parsed()) return tsd::cli::cmd_fit(cfg);
    if (c_predict->parsed()) return tsd::cli::cmd_predict(cfg);
    if (c_decompose->parsed()) return tsd::cli::cmd_decompose(cfg);
    if (c_cv->parsed()) return tsd::cli::cmd_cv(cfg);
    if (c_synth->parsed()) return tsd::cli::cmd_synth(cfg);
    if (c_diagnose->parsed()) return tsd::cli::cmd_diagnose(cfg);
    if (c_compare->parsed()) return tsd::cli::cmd_compare(cfg);
  } catch (const tsd::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tsd::cli::kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tsd::cli::kExitSolverError;
  }
  return tsd::cli::kExitInputError;
}
