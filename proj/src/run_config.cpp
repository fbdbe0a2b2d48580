#include "tsd/run_config.hpp"

#include <json.hpp>

#include <fstream>
#include <random>

namespace tsd {

using nlohmann::json;

namespace {

json graph_to_json(const GraphParams& g) {
  json j;
  j["k_neighbors"] = g.k_neighbors;
  j["window_days"] = g.window_days;
  j["period_days"] = g.period_days;
  if (g.bandwidth) j["bandwidth"] = *g.bandwidth;
  else j["bandwidth"] = nullptr;
  return j;
}

GraphParams graph_from_json(const json& j) {
  GraphParams g;
  g.k_neighbors = j.value("k_neighbors", g.k_neighbors);
  g.window_days = j.value("window_days", g.window_days);
  g.period_days = j.value("period_days", g.period_days);
  if (j.contains("bandwidth") && !j.at("bandwidth").is_null()) {
    g.bandwidth = j.at("bandwidth").get<double>();
  }
  return g;
}

}  // namespace

bool RunConfig::operator==(const RunConfig& other) const {
  return input == other.input && target == other.target &&
         out_dir == other.out_dir && model_dir == other.model_dir &&
         seed == other.seed && threads == other.threads &&
         preprocess.scaling == other.preprocess.scaling &&
         preprocess.missing == other.preprocess.missing &&
         hyperparams == other.hyperparams && graph == other.graph &&
         synth == other.synth && cv == other.cv && compare == other.compare;
}

std::string RunConfig::to_json() const {
  json j;
  j["input"] = input;
  j["target"] = target;
  j["out"] = out_dir;
  j["model"] = model_dir;
  j["seed"] = seed;
  j["threads"] = threads;
  j["preprocess"] = {{"scaling", tsd::to_string(preprocess.scaling)},
                     {"missing", tsd::to_string(preprocess.missing)}};
  j["hyperparams"] = {{"lambda_x", hyperparams.lambda_x},
                      {"lambda_w_l1", hyperparams.lambda_w_l1},
                      {"lambda_w_l2", hyperparams.lambda_w_l2},
                      {"lambda_a_l1", hyperparams.lambda_a_l1},
                      {"lambda_a_l2", hyperparams.lambda_a_l2},
                      {"lambda_d_l1", hyperparams.lambda_d_l1},
                      {"lambda_d_l2", hyperparams.lambda_d_l2},
                      {"lambda_s", hyperparams.lambda_s},
                      {"lambda_t", hyperparams.lambda_t},
                      {"rho_w", hyperparams.rho_w},
                      {"rho_d1", hyperparams.rho_d1},
                      {"rho_d2", hyperparams.rho_d2},
                      {"rho_a1", hyperparams.rho_a1},
                      {"rho_a2", hyperparams.rho_a2},
                      {"k_sources", hyperparams.k_sources},
                      {"max_iters", hyperparams.max_iters},
                      {"tol", hyperparams.tol},
                      {"seed", hyperparams.seed}};
  j["graph"] = graph_to_json(graph);
  j["synth"] = {{"n_samples", synth.n_samples},
                {"n_analytes", synth.n_analytes},
                {"noise_std", synth.noise_std},
                {"smoothness", synth.smoothness},
                {"seasonal_amplitude", synth.seasonal_amplitude}};
  j["cv"] = {{"folds", cv.folds},
             {"grid_size", cv.grid_size},
             {"spatially_blocked", cv.spatially_blocked}};
  j["compare"] = {{"methods", compare.methods},
                  {"train_fraction", compare.train_fraction}};
  return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config parse error: ") + e.what());
  }
  RunConfig c;
  c.input = j.value("input", c.input);
  c.target = j.value("target", c.target);
  c.out_dir = j.value("out", c.out_dir);
  c.model_dir = j.value("model", c.model_dir);
  c.seed = j.value("seed", c.seed);
  c.threads = j.value("threads", c.threads);
  if (j.contains("preprocess")) {
    const auto& p = j.at("preprocess");
    if (p.contains("scaling")) {
      c.preprocess.scaling = scaling_from_string(p.at("scaling").get<std::string>());
    }
    if (p.contains("missing")) {
      c.preprocess.missing =
          missing_policy_from_string(p.at("missing").get<std::string>());
    }
  }
  if (j.contains("hyperparams")) {
    const auto& hj = j.at("hyperparams");
    Hyperparams& h = c.hyperparams;
    h.lambda_x = hj.value("lambda_x", h.lambda_x);
    h.lambda_w_l1 = hj.value("lambda_w_l1", h.lambda_w_l1);
    h.lambda_w_l2 = hj.value("lambda_w_l2", h.lambda_w_l2);
    h.lambda_a_l1 = hj.value("lambda_a_l1", h.lambda_a_l1);
    h.lambda_a_l2 = hj.value("lambda_a_l2", h.lambda_a_l2);
    h.lambda_d_l1 = hj.value("lambda_d_l1", h.lambda_d_l1);
    h.lambda_d_l2 = hj.value("lambda_d_l2", h.lambda_d_l2);
    h.lambda_s = hj.value("lambda_s", h.lambda_s);
    h.lambda_t = hj.value("lambda_t", h.lambda_t);
    h.rho_w = hj.value("rho_w", h.rho_w);
    h.rho_d1 = hj.value("rho_d1", h.rho_d1);
    h.rho_d2 = hj.value("rho_d2", h.rho_d2);
    h.rho_a1 = hj.value("rho_a1", h.rho_a1);
    h.rho_a2 = hj.value("rho_a2", h.rho_a2);
    h.k_sources = hj.value("k_sources", h.k_sources);
    h.max_iters = hj.value("max_iters", h.max_iters);
    h.tol = hj.value("tol", h.tol);
    h.seed = hj.value("seed", h.seed);
  }
  if (j.contains("graph")) c.graph = graph_from_json(j.at("graph"));
  if (j.contains("synth")) {
    const auto& s = j.at("synth");
    c.synth.n_samples = s.value("n_samples", c.synth.n_samples);
    c.synth.n_analytes = s.value("n_analytes", c.synth.n_analytes);
    c.synth.noise_std = s.value("noise_std", c.synth.noise_std);
    c.synth.smoothness = s.value("smoothness", c.synth.smoothness);
    c.synth.seasonal_amplitude =
        s.value("seasonal_amplitude", c.synth.seasonal_amplitude);
  }
  if (j.contains("cv")) {
    const auto& v = j.at("cv");
    c.cv.folds = v.value("folds", c.cv.folds);
    c.cv.grid_size = v.value("grid_size", c.cv.grid_size);
    c.cv.spatially_blocked = v.value("spatially_blocked", c.cv.spatially_blocked);
  }
  if (j.contains("compare")) {
    const auto& v = j.at("compare");
    c.compare.methods = v.value("methods", c.compare.methods);
    c.compare.train_fraction = v.value("train_fraction", c.compare.train_fraction);
  }
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

SynthSpec RunConfig::synth_spec() const {
  SynthSpec spec;
  spec.n_samples = synth.n_samples;
  spec.n_analytes = synth.n_analytes;
  spec.k_sources = hyperparams.k_sources;
  spec.noise_std = synth.noise_std;
  spec.smoothness = synth.smoothness;
  spec.seasonal_amplitude = synth.seasonal_amplitude;
  spec.seed = seed;
  return spec;
}

CvOptions RunConfig::cv_options() const {
  CvOptions opt;
  opt.folds = cv.folds;
  opt.seed = seed;
  opt.spatially_blocked = cv.spatially_blocked;
  opt.graph = graph;
  return opt;
}

CompareOptions RunConfig::compare_options() const {
  CompareOptions opt;
  opt.train_fraction = compare.train_fraction;
  opt.seed = seed;
  opt.graph = graph;
  return opt;
}

std::vector<Hyperparams> random_lambda_grid(const Hyperparams& base,
                                            int grid_size,
                                            std::uint64_t seed) {
  if (grid_size < 1) throw InputError("grid_size must be >= 1");
  static constexpr double kLadder[] = {0.0, 1e-3, 1e-2, 1e-1, 1.0};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 4);
  std::vector<Hyperparams> grid;
  grid.reserve(grid_size);
  for (int g = 0; g < grid_size; ++g) {
    Hyperparams h = base;
    h.lambda_x = kLadder[pick(rng)];
    h.lambda_w_l1 = kLadder[pick(rng)];
    h.lambda_w_l2 = kLadder[pick(rng)];
    h.lambda_a_l1 = kLadder[pick(rng)];
    h.lambda_a_l2 = kLadder[pick(rng)];
    h.lambda_d_l1 = kLadder[pick(rng)];
    h.lambda_d_l2 = kLadder[pick(rng)];
    h.lambda_s = kLadder[pick(rng)];
    h.lambda_t = kLadder[pick(rng)];
    grid.push_back(h);
  }
  return grid;
}

}  // namespace tsd
