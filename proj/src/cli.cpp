#include "tsd/cli.hpp"

#include "tsd/baselines.hpp"
#include "tsd/core.hpp"
#include "tsd/csv.hpp"
#include "tsd/graph.hpp"
#include "tsd/io.hpp"
#include "tsd/preprocess.hpp"
#include "tsd/solver.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tsd::cli {

namespace fs = std::filesystem;

namespace {

// Shared error-to-exit-code policy: bad inputs are 1, numeric trouble is 2.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolverError;
  }
}

ChemDataset load_dataset(const RunConfig& config, const std::string& target) {
  if (config.input.empty()) throw InputError("--input is required");
  csv::Table raw = csv::read_file(config.input);
  return preprocess(raw, config.preprocess, target);
}

std::pair<GraphLaplacian, GraphLaplacian> build_graphs(const ChemDataset& ds,
                                                       const GraphParams& g) {
  GraphLaplacian ls =
      spatial_laplacian(ds.latitude, ds.longitude, g.k_neighbors, g.bandwidth);
  std::string warning;
  GraphLaplacian lt =
      temporal_laplacian(ds.timestamp, g.window_days, g.period_days, &warning);
  if (!warning.empty()) std::cerr << "warning: " << warning << '\n';
  return {std::move(ls), std::move(lt)};
}

int run_fit(const RunConfig& config, bool with_target) {
  ChemDataset ds = load_dataset(config, with_target ? config.target : "");
  auto [ls, lt] = build_graphs(ds, config.graph);

  Hyperparams h = config.hyperparams;
  h.seed = config.seed;
  FitOptions options;
  options.fit_w = with_target;
  auto [model, report] = fit(ds, h, ls, lt, options);

  ModelArtifacts artifacts;
  artifacts.factorization = std::move(model);
  artifacts.hyperparams = h;
  artifacts.preprocess = ds.preprocess;
  artifacts.analyte_names = ds.analyte_names;
  artifacts.sample_ids = ds.sample_ids;
  artifacts.target_name = ds.target_name;
  artifacts.converged = report.converged;
  artifacts.iterations = report.iterations;
  artifacts.train_rmse = report.train_rmse;
  artifacts.report = report;
  write_model(config.out_dir, artifacts);

  std::cout << (with_target ? "fit" : "decompose") << ": " << ds.n_samples()
            << " samples, " << ds.n_analytes() << " analytes, K="
            << h.k_sources << '\n'
            << "  iterations=" << report.iterations
            << " converged=" << (report.converged ? "yes" : "no")
            << " train_rmse=" << format_double(report.train_rmse) << '\n'
            << "  wall_time_sec=" << format_double(report.wall_time_sec) << '\n'
            << "  artifacts in " << config.out_dir << '\n';
  for (const auto& note : report.notes) std::cerr << "note: " << note << '\n';
  return kExitOk;
}

}  // namespace

int cmd_fit(const RunConfig& config) {
  return guarded([&] {
    if (config.target.empty()) throw InputError("--target is required for fit");
    return run_fit(config, true);
  });
}

int cmd_decompose(const RunConfig& config) {
  // "No target" scenario: every numeric column is a feature and the
  // prediction head stays at zero.
  return guarded([&] { return run_fit(config, false); });
}

int cmd_predict(const RunConfig& config) {
  return guarded([&] {
    if (config.model_dir.empty()) throw InputError("--model is required");
    if (config.input.empty()) throw InputError("--input is required");
    ModelArtifacts model = load_model(config.model_dir);
    csv::Table raw = csv::read_file(config.input);
    std::vector<std::string> kept_ids;
    Matrix features = transform_like(raw, model.preprocess, model.analyte_names,
                                     model.target_name, kept_ids);
    if (features.rows() < raw.n_rows()) {
      std::cerr << "note: " << (raw.n_rows() - features.rows())
                << " row(s) dropped by the missing-value policy\n";
    }
    EncodeReport enc;
    Matrix codes = encode(features, model.factorization, model.hyperparams, &enc);
    if (!enc.converged) {
      std::cerr << "note: encode hit its sweep cap on " << enc.rows_not_converged
                << " row(s); best iterates returned\n";
    }
    Vector predictions = predict(model.factorization, codes);
    fs::create_directories(config.out_dir);
    atomic_write_file((fs::path(config.out_dir) / "predictions.csv").string(),
                      predictions_to_csv(kept_ids, predictions));
    std::cout << "predict: " << predictions.size() << " prediction(s) in "
              << config.out_dir << '\n';
    return kExitOk;
  });
}

int cmd_cv(const RunConfig& config) {
  return guarded([&] {
    if (config.target.empty()) throw InputError("--target is required for cv");
    ChemDataset ds = load_dataset(config, config.target);
    Hyperparams base = config.hyperparams;
    base.seed = config.seed;
    std::vector<Hyperparams> grid =
        random_lambda_grid(base, config.cv.grid_size, config.seed);
    CvResult result = cross_validate(ds, grid, config.cv_options());

    std::ostringstream table;
    table << "config,lambda_x,lambda_w_l1,lambda_w_l2,lambda_a_l1,lambda_a_l2,"
             "lambda_d_l1,lambda_d_l2,lambda_s,lambda_t,mean_rmse\n";
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const Hyperparams& h = grid[c];
      table << c << ',' << format_double(h.lambda_x) << ','
            << format_double(h.lambda_w_l1) << ',' << format_double(h.lambda_w_l2)
            << ',' << format_double(h.lambda_a_l1) << ','
            << format_double(h.lambda_a_l2) << ',' << format_double(h.lambda_d_l1)
            << ',' << format_double(h.lambda_d_l2) << ','
            << format_double(h.lambda_s) << ',' << format_double(h.lambda_t)
            << ',' << format_double(result.mean_rmse[c]) << '\n';
    }
    atomic_write_file((fs::path(config.out_dir) / "cv_results.csv").string(),
                      table.str());

    RunConfig best_config = config;
    best_config.hyperparams = result.best;
    atomic_write_file((fs::path(config.out_dir) / "best_config.json").string(),
                      best_config.to_json());

    for (const auto& note : result.notes) std::cerr << "note: " << note << '\n';
    std::cout << "cv: best config " << result.best_index << " mean_rmse="
              << format_double(result.mean_rmse[result.best_index]) << '\n';
    if (!std::isfinite(result.mean_rmse[result.best_index])) {
      throw SolverError("every cross-validation config diverged");
    }
    return kExitOk;
  });
}

int cmd_synth(const RunConfig& config) {
  return guarded([&] {
    SynthData data = generate(config.synth_spec());
    const auto& ds = data.dataset;
    fs::path out(config.out_dir);
    atomic_write_file((out / "data.csv").string(), dataset_to_csv(ds));

    std::vector<std::string> sources;
    for (int i = 1; i <= data.d_true.rows(); ++i) {
      sources.push_back("source_" + std::to_string(i));
    }
    atomic_write_file(
        (out / "truth_D.csv").string(),
        matrix_to_csv(data.d_true, "source_id", sources, ds.analyte_names));
    atomic_write_file(
        (out / "truth_A.csv").string(),
        matrix_to_csv(data.a_true, "sample_id", ds.sample_ids, sources));
    std::ostringstream w;
    w << "source_id,weight\n";
    for (int i = 0; i < data.w_true.size(); ++i) {
      w << sources[i] << ',' << format_double(data.w_true[i]) << '\n';
    }
    atomic_write_file((out / "truth_W.csv").string(), w.str());
    std::cout << "synth: wrote " << ds.n_samples() << " samples to "
              << (out / "data.csv").string() << '\n';
    return kExitOk;
  });
}

int cmd_diagnose(const RunConfig& config) {
  return guarded([&] {
    if (config.target.empty()) {
      throw InputError("--target is required for diagnose");
    }
    ChemDataset ds = load_dataset(config, config.target);
    ContinuityReport report = continuity_diagnostics(ds, config.seed);
    fs::path out(config.out_dir);
    atomic_write_file((out / "month_quantiles.csv").string(),
                      continuity_months_to_csv(report));
    atomic_write_file((out / "distance_bins.csv").string(),
                      continuity_bins_to_csv(report));
    std::cout << "diagnose: " << report.pair_count << " pairs binned, outputs in "
              << config.out_dir << '\n';
    return kExitOk;
  });
}

int cmd_compare(const RunConfig& config) {
  return guarded([&] {
    if (config.target.empty()) {
      throw InputError("--target is required for compare");
    }
    ChemDataset ds = load_dataset(config, config.target);
    Hyperparams h = config.hyperparams;
    h.seed = config.seed;
    std::map<std::string, Hyperparams> h_map;
    for (const auto& m : config.compare.methods) h_map[m] = h;
    std::vector<MethodResult> results =
        compare_methods(ds, config.compare.methods, h_map, config.compare_options());

    fs::path out(config.out_dir);
    atomic_write_file((out / "comparison.csv").string(),
                      comparison_to_csv(results));
    std::ostringstream summary;
    summary << "method comparison on " << ds.n_samples() << " samples (target "
            << ds.target_name << ")\n";
    bool any_failed = false;
    for (const auto& res : results) {
      summary << "  " << res.method << ": train_rmse="
              << format_double(res.train_rmse)
              << " test_rmse=" << format_double(res.test_rmse);
      if (res.failed) {
        summary << " FAILED (" << res.note << ")";
        any_failed = true;
      } else if (!res.note.empty()) {
        summary << " (" << res.note << ")";
      }
      summary << '\n';
    }
    atomic_write_file((out / "summary.txt").string(), summary.str());
    std::cout << summary.str();
    return any_failed ? kExitSolverError : kExitOk;
  });
}

void apply_thread_setting(int threads_flag) {
  int threads = threads_flag;
  if (threads <= 0) {
    if (const char* env = std::getenv("TSD_THREADS")) {
      threads = std::atoi(env);
    }
  }
  if (threads <= 0) threads = 1;
#ifdef _OPENMP
  omp_set_num_threads(threads);
#endif
  Eigen::setNbThreads(threads);
}

}  // namespace tsd::cli
