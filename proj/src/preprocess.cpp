#include "tsd/preprocess.hpp"

#include "tsd/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace tsd {

namespace {

bool is_missing_token(const std::string& s) {
  if (s.empty()) return true;
  return s == "NA" || s == "na" || s == "NaN" || s == "nan" || s == "null" ||
         s == "NULL";
}

// Censored or otherwise non-numeric analyte cells count as missing; the
// missing-value policy decides what happens to the row.
std::optional<double> parse_cell(const std::string& s) {
  if (is_missing_token(s)) return std::nullopt;
  double v = 0.0;
  if (!parse_double(s, v) || !std::isfinite(v)) return std::nullopt;
  return v;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

}  // namespace

ChemDataset preprocess(const csv::Table& raw, const PreprocessSpec& spec,
                       const std::string& target_name) {
  std::vector<std::string> missing_cols;
  for (const char* req :
       {kSampleIdColumn, kLatitudeColumn, kLongitudeColumn, kDateColumn}) {
    if (raw.column(req) < 0) missing_cols.push_back(req);
  }
  if (!missing_cols.empty()) {
    throw InputError("input is missing required column(s): " + join(missing_cols));
  }
  const int id_col = raw.column(kSampleIdColumn);
  const int lat_col = raw.column(kLatitudeColumn);
  const int lon_col = raw.column(kLongitudeColumn);
  const int date_col = raw.column(kDateColumn);

  std::vector<int> analyte_cols;
  std::vector<std::string> analyte_names;
  int target_col = -1;
  for (int c = 0; c < raw.n_cols(); ++c) {
    if (c == id_col || c == lat_col || c == lon_col || c == date_col) continue;
    if (!target_name.empty() && raw.header[c] == target_name) {
      target_col = c;
      continue;
    }
    analyte_cols.push_back(c);
    analyte_names.push_back(raw.header[c]);
  }
  if (!target_name.empty() && target_col < 0) {
    throw InputError("target analyte '" + target_name + "' not found in input columns");
  }
  // The target is already split off, so at least one feature column must remain.
  const int m = static_cast<int>(analyte_cols.size());
  if (m < 1) {
    throw InputError(target_name.empty()
                         ? "input has no analyte columns"
                         : "input needs at least 2 analyte columns including the target");
  }

  struct ParsedRow {
    std::string id;
    double lat, lon;
    Date date;
    std::vector<std::optional<double>> analytes;
    double target;
    bool target_present;
  };
  std::vector<ParsedRow> parsed;
  parsed.reserve(raw.rows.size());
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const auto& row = raw.rows[r];
    ParsedRow p;
    p.id = row[id_col];
    auto fail = [&](const std::string& what) {
      throw InputError("row " + std::to_string(r + 2) + " (sample '" + p.id +
                       "'): " + what);
    };
    if (!parse_double(row[lat_col], p.lat)) fail("non-numeric latitude");
    if (!parse_double(row[lon_col], p.lon)) fail("non-numeric longitude");
    p.date = parse_date(row[date_col]);
    p.analytes.reserve(m);
    for (int j = 0; j < m; ++j) {
      p.analytes.push_back(parse_cell(row[analyte_cols[j]]));
    }
    p.target_present = true;
    p.target = 0.0;
    if (target_col >= 0) {
      auto t = parse_cell(row[target_col]);
      p.target_present = t.has_value();
      p.target = t.value_or(0.0);
    }
    parsed.push_back(std::move(p));
  }

  // Rows without a target value carry no label; drop them under either policy.
  std::erase_if(parsed, [](const ParsedRow& p) { return !p.target_present; });

  std::vector<double> medians;
  if (spec.missing == MissingPolicy::drop_row) {
    std::erase_if(parsed, [](const ParsedRow& p) {
      return std::any_of(p.analytes.begin(), p.analytes.end(),
                         [](const auto& v) { return !v.has_value(); });
    });
  } else {
    medians.resize(m);
    for (int j = 0; j < m; ++j) {
      std::vector<double> present;
      for (const auto& p : parsed) {
        if (p.analytes[j]) present.push_back(*p.analytes[j]);
      }
      if (present.empty()) {
        throw InputError("analyte column '" + analyte_names[j] +
                         "' has no numeric values; cannot impute");
      }
      medians[j] = median_of(std::move(present));
    }
  }
  if (parsed.empty()) {
    throw InputError("all rows were dropped by the missing-value policy");
  }

  const int n = static_cast<int>(parsed.size());
  Matrix features(n, m);
  ChemDataset ds;
  ds.target.resize(n);
  ds.latitude.resize(n);
  ds.longitude.resize(n);
  ds.timestamp.reserve(n);
  ds.sample_ids.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto& p = parsed[i];
    for (int j = 0; j < m; ++j) {
      features(i, j) = p.analytes[j] ? *p.analytes[j] : medians[j];
    }
    ds.target[i] = p.target;
    ds.latitude[i] = p.lat;
    ds.longitude[i] = p.lon;
    ds.timestamp.push_back(p.date);
    ds.sample_ids.push_back(p.id);
  }

  PreprocessSpec fitted = spec;
  fitted.medians = medians;
  fitted.scale_params.assign(m, {});
  if (fitted.scaling == Scaling::none) {
    for (int j = 0; j < m; ++j) fitted.scale_params[j] = {0.0, 1.0};
  } else {
    for (int j = 0; j < m; ++j) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (int i = 0; i < n; ++i) {
        double v = features(i, j);
        if (fitted.scaling == Scaling::log1p_minmax) {
          if (v < 0.0) {
            throw InputError("analyte '" + analyte_names[j] +
                             "' has a negative value; log1p scaling needs nonnegative data");
          }
          v = std::log1p(v);
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      fitted.scale_params[j] = {lo, hi - lo};
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        features(i, j) = fitted.transform(features(i, j), j);
      }
    }
  }

  ds.features = std::move(features);
  ds.analyte_names = std::move(analyte_names);
  ds.target_name = target_name;
  ds.preprocess = std::move(fitted);
  ds.validate();
  return ds;
}

Matrix transform_like(const csv::Table& raw, const PreprocessSpec& fitted,
                      const std::vector<std::string>& analyte_names,
                      const std::string& target_name,
                      std::vector<std::string>& kept_sample_ids) {
  if (!fitted.fitted()) {
    throw InputError("preprocessing spec carries no fitted scale parameters");
  }
  const int id_col = raw.column(kSampleIdColumn);
  if (id_col < 0) {
    throw InputError("input is missing required column(s): sample_id");
  }
  const int m = static_cast<int>(analyte_names.size());
  std::vector<int> cols(m, -1);
  std::vector<std::string> missing;
  for (int j = 0; j < m; ++j) {
    cols[j] = raw.column(analyte_names[j]);
    if (cols[j] < 0) missing.push_back(analyte_names[j]);
  }
  std::vector<std::string> extra;
  for (int c = 0; c < raw.n_cols(); ++c) {
    const std::string& name = raw.header[c];
    if (name == kSampleIdColumn || name == kLatitudeColumn ||
        name == kLongitudeColumn || name == kDateColumn || name == target_name) {
      continue;
    }
    if (std::find(analyte_names.begin(), analyte_names.end(), name) ==
        analyte_names.end()) {
      extra.push_back(name);
    }
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "analyte schema mismatch";
    if (!missing.empty()) msg += "; missing: " + join(missing);
    if (!extra.empty()) msg += "; extra: " + join(extra);
    throw InputError(msg);
  }

  std::vector<std::vector<double>> rows;
  kept_sample_ids.clear();
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const auto& row = raw.rows[r];
    std::vector<double> values(m);
    bool dropped = false;
    for (int j = 0; j < m; ++j) {
      auto v = parse_cell(row[cols[j]]);
      if (!v) {
        if (fitted.missing == MissingPolicy::impute_median &&
            !fitted.medians.empty()) {
          values[j] = fitted.medians[j];
        } else {
          dropped = true;
          break;
        }
      } else {
        values[j] = *v;
      }
    }
    if (dropped) continue;
    kept_sample_ids.push_back(row[id_col]);
    rows.push_back(std::move(values));
  }

  Matrix out(static_cast<int>(rows.size()), m);
  for (int i = 0; i < out.rows(); ++i) {
    for (int j = 0; j < m; ++j) {
      out(i, j) = fitted.transform(rows[i][j], j);
    }
  }
  return out;
}

Matrix inverse_transform(const Matrix& features, const PreprocessSpec& fitted) {
  Matrix out = features;
  for (int i = 0; i < out.rows(); ++i) {
    for (int j = 0; j < out.cols(); ++j) {
      out(i, j) = fitted.inverse(out(i, j), j);
    }
  }
  return out;
}

}  // namespace tsd
