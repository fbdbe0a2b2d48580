#include "tsd/io.hpp"

#include "tsd/csv.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace tsd {

namespace fs = std::filesystem;
using nlohmann::json;

void atomic_write_file(const std::string& path, const std::string& content) {
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw InputError("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string matrix_to_csv(const Matrix& m, const std::string& row_label,
                          const std::vector<std::string>& row_names,
                          const std::vector<std::string>& col_names) {
  std::ostringstream out;
  out << csv::escape_field(row_label);
  for (const auto& c : col_names) out << ',' << csv::escape_field(c);
  out << '\n';
  for (int i = 0; i < m.rows(); ++i) {
    out << csv::escape_field(row_names[i]);
    for (int j = 0; j < m.cols(); ++j) out << ',' << format_double(m(i, j));
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> source_names(int k) {
  std::vector<std::string> names;
  names.reserve(k);
  for (int i = 1; i <= k; ++i) names.push_back("source_" + std::to_string(i));
  return names;
}

json preprocess_to_json(const PreprocessSpec& spec) {
  json j;
  j["scaling"] = to_string(spec.scaling);
  j["missing"] = to_string(spec.missing);
  json params = json::array();
  for (const auto& p : spec.scale_params) {
    params.push_back({{"offset", p.offset}, {"range", p.range}});
  }
  j["scale_params"] = params;
  j["medians"] = spec.medians;
  return j;
}

PreprocessSpec preprocess_from_json(const json& j) {
  PreprocessSpec spec;
  spec.scaling = scaling_from_string(j.at("scaling").get<std::string>());
  spec.missing = missing_policy_from_string(j.at("missing").get<std::string>());
  for (const auto& p : j.at("scale_params")) {
    spec.scale_params.push_back(
        {p.at("offset").get<double>(), p.at("range").get<double>()});
  }
  spec.medians = j.at("medians").get<std::vector<double>>();
  return spec;
}

json hyperparams_to_json(const Hyperparams& h) {
  return json{{"lambda_x", h.lambda_x},
              {"lambda_w_l1", h.lambda_w_l1},
              {"lambda_w_l2", h.lambda_w_l2},
              {"lambda_a_l1", h.lambda_a_l1},
              {"lambda_a_l2", h.lambda_a_l2},
              {"lambda_d_l1", h.lambda_d_l1},
              {"lambda_d_l2", h.lambda_d_l2},
              {"lambda_s", h.lambda_s},
              {"lambda_t", h.lambda_t},
              {"rho_w", h.rho_w},
              {"rho_d1", h.rho_d1},
              {"rho_d2", h.rho_d2},
              {"rho_a1", h.rho_a1},
              {"rho_a2", h.rho_a2},
              {"k_sources", h.k_sources},
              {"max_iters", h.max_iters},
              {"tol", h.tol},
              {"seed", h.seed}};
}

Hyperparams hyperparams_from_json(const json& j) {
  Hyperparams h;
  h.lambda_x = j.value("lambda_x", h.lambda_x);
  h.lambda_w_l1 = j.value("lambda_w_l1", h.lambda_w_l1);
  h.lambda_w_l2 = j.value("lambda_w_l2", h.lambda_w_l2);
  h.lambda_a_l1 = j.value("lambda_a_l1", h.lambda_a_l1);
  h.lambda_a_l2 = j.value("lambda_a_l2", h.lambda_a_l2);
  h.lambda_d_l1 = j.value("lambda_d_l1", h.lambda_d_l1);
  h.lambda_d_l2 = j.value("lambda_d_l2", h.lambda_d_l2);
  h.lambda_s = j.value("lambda_s", h.lambda_s);
  h.lambda_t = j.value("lambda_t", h.lambda_t);
  h.rho_w = j.value("rho_w", h.rho_w);
  h.rho_d1 = j.value("rho_d1", h.rho_d1);
  h.rho_d2 = j.value("rho_d2", h.rho_d2);
  h.rho_a1 = j.value("rho_a1", h.rho_a1);
  h.rho_a2 = j.value("rho_a2", h.rho_a2);
  h.k_sources = j.value("k_sources", h.k_sources);
  h.max_iters = j.value("max_iters", h.max_iters);
  h.tol = j.value("tol", h.tol);
  h.seed = j.value("seed", h.seed);
  return h;
}

Matrix matrix_from_csv(const csv::Table& table, int skip_cols) {
  const int n = table.n_rows();
  const int m = table.n_cols() - skip_cols;
  Matrix out(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      double v = 0.0;
      if (!parse_double(table.rows[i][j + skip_cols], v)) {
        throw InputError("non-numeric cell in row " + std::to_string(i + 2));
      }
      out(i, j) = v;
    }
  }
  return out;
}

}  // namespace

void write_model(const std::string& out_dir, const ModelArtifacts& model) {
  const Factorization& f = model.factorization;
  const int k = f.k_sources();
  auto sources = source_names(k);

  atomic_write_file(
      (fs::path(out_dir) / kDictionaryFile).string(),
      matrix_to_csv(f.D, "source_id", sources, model.analyte_names));

  atomic_write_file(
      (fs::path(out_dir) / kCoefficientsFile).string(),
      matrix_to_csv(f.A, "sample_id", model.sample_ids, sources));

  {
    std::ostringstream w;
    w << "source_id,weight\n";
    for (int i = 0; i < k; ++i) {
      w << sources[i] << ',' << format_double(f.W[i]) << '\n';
    }
    atomic_write_file((fs::path(out_dir) / kWeightsFile).string(), w.str());
  }

  {
    json meta;
    meta["target_name"] = model.target_name;
    meta["analyte_names"] = model.analyte_names;
    meta["hyperparams"] = hyperparams_to_json(model.hyperparams);
    meta["preprocess"] = preprocess_to_json(model.preprocess);
    meta["converged"] = model.converged;
    meta["iterations"] = model.iterations;
    meta["train_rmse"] = model.train_rmse;
    meta["residuals"] = {{"w", model.report.residual_w},
                         {"d_nonneg", model.report.residual_d1},
                         {"d_l1", model.report.residual_d2},
                         {"a_nonneg", model.report.residual_a1},
                         {"a_l1", model.report.residual_a2}};
    meta["notes"] = model.report.notes;
    atomic_write_file((fs::path(out_dir) / kMetadataFile).string(),
                      meta.dump(2) + "\n");
  }

  {
    std::ostringstream r;
    r << "iteration,objective\n";
    for (std::size_t i = 0; i < model.report.objective_trace.size(); ++i) {
      r << (i + 1) << ',' << format_double(model.report.objective_trace[i])
        << '\n';
    }
    atomic_write_file((fs::path(out_dir) / kReportFile).string(), r.str());
  }
}

ModelArtifacts load_model(const std::string& model_dir) {
  ModelArtifacts model;
  fs::path dir(model_dir);

  std::ifstream meta_in(dir / kMetadataFile);
  if (!meta_in) {
    throw InputError("model metadata not found at " +
                     (dir / kMetadataFile).string());
  }
  json meta = json::parse(meta_in);
  model.target_name = meta.at("target_name").get<std::string>();
  model.analyte_names = meta.at("analyte_names").get<std::vector<std::string>>();
  model.hyperparams = hyperparams_from_json(meta.at("hyperparams"));
  model.preprocess = preprocess_from_json(meta.at("preprocess"));
  model.converged = meta.value("converged", false);
  model.iterations = meta.value("iterations", 0);
  model.train_rmse = meta.value("train_rmse", 0.0);

  csv::Table d_table = csv::read_file((dir / kDictionaryFile).string());
  model.factorization.D = matrix_from_csv(d_table, 1);
  if (model.factorization.D.cols() != int(model.analyte_names.size())) {
    throw InputError("dictionary width disagrees with metadata analyte list");
  }

  csv::Table w_table = csv::read_file((dir / kWeightsFile).string());
  model.factorization.W.resize(w_table.n_rows());
  for (int i = 0; i < w_table.n_rows(); ++i) {
    double v = 0.0;
    if (!parse_double(w_table.rows[i][1], v)) {
      throw InputError("non-numeric weight in " + (dir / kWeightsFile).string());
    }
    model.factorization.W[i] = v;
  }
  if (model.factorization.W.size() != model.factorization.D.rows()) {
    throw InputError("weight count disagrees with dictionary rows");
  }

  if (fs::exists(dir / kCoefficientsFile)) {
    csv::Table a_table = csv::read_file((dir / kCoefficientsFile).string());
    model.factorization.A = matrix_from_csv(a_table, 1);
    model.sample_ids.reserve(a_table.n_rows());
    for (const auto& row : a_table.rows) model.sample_ids.push_back(row[0]);
  } else {
    model.factorization.A.resize(0, model.factorization.D.rows());
  }
  return model;
}

std::string dataset_to_csv(const ChemDataset& ds) {
  std::ostringstream out;
  out << "sample_id,latitude,longitude,date";
  for (const auto& name : ds.analyte_names) out << ',' << csv::escape_field(name);
  if (!ds.target_name.empty()) out << ',' << csv::escape_field(ds.target_name);
  out << '\n';
  for (int i = 0; i < ds.n_samples(); ++i) {
    out << csv::escape_field(ds.sample_ids[i]) << ','
        << format_double(ds.latitude[i]) << ',' << format_double(ds.longitude[i])
        << ',' << format_date(ds.timestamp[i]);
    for (int j = 0; j < ds.n_analytes(); ++j) {
      out << ',' << format_double(ds.features(i, j));
    }
    if (!ds.target_name.empty()) out << ',' << format_double(ds.target[i]);
    out << '\n';
  }
  return out.str();
}

std::string predictions_to_csv(const std::vector<std::string>& sample_ids,
                               const Vector& predictions) {
  std::ostringstream out;
  out << "sample_id,prediction\n";
  for (int i = 0; i < predictions.size(); ++i) {
    out << csv::escape_field(sample_ids[i]) << ','
        << format_double(predictions[i]) << '\n';
  }
  return out.str();
}

std::string continuity_months_to_csv(const ContinuityReport& report) {
  std::ostringstream out;
  out << "month,count,q25,q50,q75\n";
  for (const auto& row : report.months) {
    out << row.month << ',' << row.count << ',';
    if (row.count > 0) {
      out << format_double(row.q25) << ',' << format_double(row.q50) << ','
          << format_double(row.q75);
    } else {
      out << ",,";
    }
    out << '\n';
  }
  return out.str();
}

std::string continuity_bins_to_csv(const ContinuityReport& report) {
  std::ostringstream out;
  out << "bin_low_m,bin_high_m,pair_count,mean_abs_diff\n";
  for (const auto& bin : report.bins) {
    out << format_double(bin.low_m) << ',' << format_double(bin.high_m) << ','
        << bin.count << ',' << format_double(bin.mean_abs_diff) << '\n';
  }
  return out.str();
}

std::string comparison_to_csv(const std::vector<MethodResult>& results) {
  std::ostringstream out;
  out << "method,train_rmse,test_rmse,status,note\n";
  for (const auto& res : results) {
    out << csv::escape_field(res.method) << ',' << format_double(res.train_rmse)
        << ',' << format_double(res.test_rmse) << ','
        << (res.failed ? "failed" : "ok") << ',' << csv::escape_field(res.note)
        << '\n';
  }
  return out.str();
}

}  // namespace tsd
