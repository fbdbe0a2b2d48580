#include "tsd/types.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace tsd {

namespace {

bool parse_int_field(const std::string& s, std::size_t begin, std::size_t end,
                     int& out) {
  if (begin >= end || end > s.size()) return false;
  auto res = std::from_chars(s.data() + begin, s.data() + end, out);
  return res.ec == std::errc() && res.ptr == s.data() + end;
}

}  // namespace

Date parse_date(const std::string& s) {
  int y = 0, m = 0, d = 0;
  bool ok = s.size() == 10 && s[4] == '-' && s[7] == '-' &&
            parse_int_field(s, 0, 4, y) && parse_int_field(s, 5, 7, m) &&
            parse_int_field(s, 8, 10, d);
  if (ok) {
    Date date{std::chrono::year{y}, std::chrono::month{unsigned(m)},
              std::chrono::day{unsigned(d)}};
    if (date.ok()) return date;
  }
  throw InputError("non-parseable date '" + s + "' (expected YYYY-MM-DD)");
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(d.year()),
                unsigned(d.month()), unsigned(d.day()));
  return buf;
}

int day_of_year(const Date& d) {
  auto jan1 = std::chrono::sys_days{d.year() / std::chrono::January / 1};
  int doy = int((std::chrono::sys_days{d} - jan1).count()) + 1;
  return doy > 365 ? 365 : doy;
}

int circular_day_distance(int doy_a, int doy_b, int period_days) {
  int delta = std::abs(doy_a - doy_b);
  return std::min(delta, period_days - delta);
}

std::string to_string(Scaling s) {
  switch (s) {
    case Scaling::minmax: return "minmax";
    case Scaling::log1p_minmax: return "log1p_minmax";
    case Scaling::none: return "none";
  }
  return "minmax";
}

std::string to_string(MissingPolicy p) {
  return p == MissingPolicy::drop_row ? "drop_row" : "impute_median";
}

Scaling scaling_from_string(const std::string& s) {
  if (s == "minmax") return Scaling::minmax;
  if (s == "log1p_minmax") return Scaling::log1p_minmax;
  if (s == "none") return Scaling::none;
  throw InputError("unknown scaling mode '" + s +
                   "' (expected minmax | log1p_minmax | none)");
}

MissingPolicy missing_policy_from_string(const std::string& s) {
  if (s == "drop_row") return MissingPolicy::drop_row;
  if (s == "impute_median") return MissingPolicy::impute_median;
  throw InputError("unknown missing-value policy '" + s +
                   "' (expected drop_row | impute_median)");
}

double PreprocessSpec::transform(double v, int j) const {
  if (scaling == Scaling::none) return v;
  const auto& p = scale_params.at(j);
  double t = scaling == Scaling::log1p_minmax ? std::log1p(v) : v;
  if (p.range == 0.0) return 0.0;
  return (t - p.offset) / p.range;
}

double PreprocessSpec::inverse(double v, int j) const {
  if (scaling == Scaling::none) return v;
  const auto& p = scale_params.at(j);
  double t = p.offset + v * p.range;
  return scaling == Scaling::log1p_minmax ? std::expm1(t) : t;
}

void ChemDataset::validate() const {
  const int n = n_samples();
  const int m = n_analytes();
  if (n < 2) throw InputError("dataset needs at least 2 samples, got " + std::to_string(n));
  if (m < 1) throw InputError("dataset needs at least 1 analyte");
  if (target.size() != n || latitude.size() != n || longitude.size() != n ||
      int(timestamp.size()) != n || int(sample_ids.size()) != n) {
    throw InputError("per-sample vectors disagree with feature row count");
  }
  if (int(analyte_names.size()) != m) {
    throw InputError("analyte_names length disagrees with feature column count");
  }
  if (!features.allFinite()) throw InputError("features contain non-finite entries");
  if ((features.array() < 0.0).any()) throw InputError("features contain negative entries");
  if (!target.allFinite()) throw InputError("target contains non-finite entries");
  for (const auto& name : analyte_names) {
    if (!target_name.empty() && name == target_name) {
      throw InputError("target '" + target_name + "' leaked into the feature columns");
    }
  }
}

ChemDataset ChemDataset::subset(const std::vector<int>& indices) const {
  ChemDataset out;
  const int n = static_cast<int>(indices.size());
  out.features.resize(n, features.cols());
  out.target.resize(n);
  out.latitude.resize(n);
  out.longitude.resize(n);
  out.timestamp.reserve(n);
  out.sample_ids.reserve(n);
  for (int i = 0; i < n; ++i) {
    int src = indices[i];
    out.features.row(i) = features.row(src);
    out.target[i] = target[src];
    out.latitude[i] = latitude[src];
    out.longitude[i] = longitude[src];
    out.timestamp.push_back(timestamp[src]);
    out.sample_ids.push_back(sample_ids[src]);
  }
  out.analyte_names = analyte_names;
  out.target_name = target_name;
  out.preprocess = preprocess;
  return out;
}

void Hyperparams::validate() const {
  auto check_nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InputError(std::string("hyperparameter ") + name + " must be >= 0");
    }
  };
  auto check_pos = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InputError(std::string("hyperparameter ") + name + " must be > 0");
    }
  };
  check_nonneg(lambda_x, "lambda_x");
  check_nonneg(lambda_w_l1, "lambda_w_l1");
  check_nonneg(lambda_w_l2, "lambda_w_l2");
  check_nonneg(lambda_a_l1, "lambda_a_l1");
  check_nonneg(lambda_a_l2, "lambda_a_l2");
  check_nonneg(lambda_d_l1, "lambda_d_l1");
  check_nonneg(lambda_d_l2, "lambda_d_l2");
  check_nonneg(lambda_s, "lambda_s");
  check_nonneg(lambda_t, "lambda_t");
  check_pos(rho_w, "rho_w");
  check_pos(rho_d1, "rho_d1");
  check_pos(rho_d2, "rho_d2");
  check_pos(rho_a1, "rho_a1");
  check_pos(rho_a2, "rho_a2");
  if (k_sources < 1) throw InputError("k_sources must be >= 1");
  if (max_iters < 1) throw InputError("max_iters must be >= 1");
  check_pos(tol, "tol");
}

void Factorization::validate_shapes(int n_samples, int n_analytes) const {
  const auto k = D.rows();
  if (D.cols() != n_analytes) {
    throw InputError("dictionary has " + std::to_string(D.cols()) +
                     " analytes, dataset has " + std::to_string(n_analytes));
  }
  if (A.cols() != k) {
    throw InputError("coefficient matrix has " + std::to_string(A.cols()) +
                     " sources, dictionary has " + std::to_string(k));
  }
  if (A.rows() != n_samples) {
    throw InputError("coefficient matrix has " + std::to_string(A.rows()) +
                     " rows, dataset has " + std::to_string(n_samples));
  }
  if (W.size() != k) {
    throw InputError("weight vector has " + std::to_string(W.size()) +
                     " entries, dictionary has " + std::to_string(k) + " sources");
  }
}

}  // namespace tsd
