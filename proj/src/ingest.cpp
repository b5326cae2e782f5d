#include "chaid/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "chaid/error.hpp"

namespace chaid {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_number(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void relink(RawDataset& raw) {
  for (auto& column : raw.columns) {
    column.spec = raw.schema.find(column.spec->name);
  }
}

}  // namespace

bool is_missing_cell(std::string_view cell) {
  const auto t = trim(cell);
  return t.empty() || t == "NA";
}

RawDataset::RawDataset(const RawDataset& other)
    : schema(other.schema),
      columns(other.columns),
      rows(other.rows),
      report(other.report) {
  relink(*this);
}

RawDataset& RawDataset::operator=(const RawDataset& other) {
  if (this != &other) {
    schema = other.schema;
    columns = other.columns;
    rows = other.rows;
    report = other.report;
    relink(*this);
  }
  return *this;
}

const RawColumn& RawDataset::column(const std::string& name) const {
  for (const auto& c : columns) {
    if (c.spec->name == name) return c;
  }
  throw Error("no loaded column '" + name + "'");
}

RawDataset load_dataset(const CsvTable& table, const DatasetSchema& schema) {
  schema.validate();
  if (table.header.empty()) throw Error("empty file");

  RawDataset raw;
  raw.schema = schema;

  std::vector<std::size_t> source;  // header index per used column
  for (const auto& spec : raw.schema.columns) {
    if (!spec.used()) continue;
    const auto it = std::find_if(
        table.header.begin(), table.header.end(),
        [&](const std::string& h) { return trim(h) == spec.name; });
    if (it == table.header.end()) {
      throw Error("missing required column '" + spec.name + "'");
    }
    source.push_back(static_cast<std::size_t>(it - table.header.begin()));
    RawColumn column;
    column.spec = &spec;
    raw.columns.push_back(std::move(column));
    raw.report.missing[spec.name] = 0;
  }

  auto& report = raw.report;
  report.rows_read = table.rows.size();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t row_number = r + 1;
    std::string rejection;
    std::vector<std::string> text(raw.columns.size());
    std::vector<double> numbers(raw.columns.size(), kNaN);

    for (std::size_t c = 0; c < raw.columns.size(); ++c) {
      const auto& spec = *raw.columns[c].spec;
      const auto cell = trim(row[source[c]]);
      if (is_missing_cell(cell)) {
        ++report.missing[spec.name];
        const bool keep = spec.role == Role::predictor &&
                          (spec.kind == Kind::categorical ||
                           spec.scale == Scale::floating);
        if (!keep && rejection.empty()) {
          rejection = "row " + std::to_string(row_number) +
                      ": missing value in column " + spec.name;
        }
        continue;
      }
      if (spec.kind == Kind::numeric) {
        if (!parse_number(cell, numbers[c])) {
          throw Error("row " + std::to_string(row_number) + ", column " +
                      spec.name + ": '" + cell + "' is not numeric");
        }
      } else {
        text[c] = cell;
      }
    }

    if (!rejection.empty()) {
      ++report.rows_rejected;
      if (report.rejections.size() < LoadReport::kMaxRejectionMessages) {
        report.rejections.push_back(std::move(rejection));
      }
      continue;
    }
    for (std::size_t c = 0; c < raw.columns.size(); ++c) {
      if (raw.columns[c].spec->kind == Kind::numeric) {
        raw.columns[c].numbers.push_back(numbers[c]);
      } else {
        raw.columns[c].text.push_back(std::move(text[c]));
      }
    }
    ++raw.rows;
  }
  report.rows_kept = raw.rows;
  return raw;
}

RawDataset load_dataset_text(std::string_view text, const DatasetSchema& schema) {
  return load_dataset(parse_csv(text, schema.delimiter), schema);
}

RawDataset load_dataset_file(const std::string& path,
                             const DatasetSchema& schema) {
  return load_dataset(read_csv_file(path, schema.delimiter), schema);
}

int assign_interval(double value, const BinningSpec& fitted) {
  const auto& e = fitted.edges;
  if (e.size() < 2) throw Error("binning has not been fitted");
  if (std::isnan(value)) throw Error("cannot bin a missing value");
  const int k = static_cast<int>(e.size()) - 1;
  if (value < e.front() || value > e.back()) {
    if (fitted.strategy == BinStrategy::explicit_boundaries) {
      throw Error("value " + format_number(value) +
                  " outside explicit boundaries [" + format_number(e.front()) +
                  ", " + format_number(e.back()) + "]");
    }
    return value < e.front() ? 1 : k;
  }
  // First edge e_i (i >= 1) with value <= e_i.
  const auto it = std::lower_bound(e.begin() + 1, e.end(), value);
  return static_cast<int>(it - e.begin());
}

BinnedColumn bin_numeric(std::span<const double> values, const BinningSpec& spec) {
  if (values.empty()) throw Error("cannot bin an empty column");
  for (double v : values) {
    if (std::isnan(v)) throw Error("cannot bin a missing value");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();

  BinningSpec fitted = spec;
  auto& edges = fitted.edges;
  edges.clear();
  switch (spec.strategy) {
    case BinStrategy::explicit_boundaries:
      if (spec.boundaries.size() < 2 ||
          std::adjacent_find(spec.boundaries.begin(), spec.boundaries.end(),
                             std::greater_equal<>()) != spec.boundaries.end()) {
        throw Error("explicit boundaries are not strictly increasing");
      }
      edges = spec.boundaries;
      break;
    case BinStrategy::equal_frequency: {
      if (spec.bin_count < 2) throw Error("bin_count must be at least 2");
      const std::size_t n = sorted.size();
      const auto k = static_cast<std::size_t>(spec.bin_count);
      edges.push_back(lo);
      for (std::size_t j = 1; j < k; ++j) {
        const std::size_t rank = (j * n + k - 1) / k;  // ceil(j n / k)
        if (rank == 0) continue;
        const double cut = sorted[rank - 1];
        // Tied cut points collapse; a cut at the maximum leaves nothing above.
        if (cut >= hi) break;
        if (edges.size() > 1 && cut <= edges.back()) continue;
        edges.push_back(cut);
      }
      edges.push_back(hi);
      break;
    }
    case BinStrategy::equal_width: {
      if (spec.bin_count < 2) throw Error("bin_count must be at least 2");
      edges.push_back(lo);
      if (hi > lo) {
        for (int i = 1; i < spec.bin_count; ++i) {
          edges.push_back(lo + (hi - lo) * i / spec.bin_count);
        }
      }
      edges.push_back(hi);
      break;
    }
  }

  BinnedColumn out;
  out.intervals.reserve(values.size());
  for (double v : values) out.intervals.push_back(assign_interval(v, fitted));
  out.edges = std::move(edges);
  return out;
}

namespace {

std::vector<std::string> interval_labels(int k) {
  std::vector<std::string> labels;
  for (int i = 1; i <= k; ++i) labels.push_back(std::to_string(i));
  return labels;
}

struct EncodedColumn {
  std::vector<std::string> categories;
  std::vector<int> codes;
  int floating = -1;
};

EncodedColumn encode_numeric(const RawColumn& raw, ColumnSpec& realized) {
  std::vector<double> present;
  for (double v : raw.numbers) {
    if (!std::isnan(v)) present.push_back(v);
  }
  if (present.empty()) {
    throw Error("column '" + realized.name + "' has no values to bin");
  }
  const auto binned = bin_numeric(present, *realized.binning);
  realized.binning->edges = binned.edges;

  EncodedColumn out;
  out.categories = interval_labels(static_cast<int>(binned.edges.size()) - 1);
  const bool floating =
      realized.role == Role::predictor && realized.scale == Scale::floating;
  if (floating) {
    out.floating = static_cast<int>(out.categories.size());
    out.categories.push_back(kFloatingCategory);
  }
  std::size_t next = 0;
  for (double v : raw.numbers) {
    if (std::isnan(v)) {
      out.codes.push_back(floating ? out.floating : kMissing);
    } else {
      out.codes.push_back(binned.intervals[next++] - 1);
    }
  }
  realized.categories = out.categories;
  return out;
}

EncodedColumn encode_categorical(const RawColumn& raw, ColumnSpec& realized) {
  EncodedColumn out;
  const bool floating =
      realized.role == Role::predictor && realized.scale == Scale::floating;
  if (!realized.categories.empty()) {
    out.categories = realized.categories;
  } else {
    std::set<std::string> seen;
    for (const auto& v : raw.text) {
      if (!v.empty() && v != kFloatingCategory) seen.insert(v);
    }
    out.categories.assign(seen.begin(), seen.end());
  }
  if (floating) {
    const auto it = std::find(out.categories.begin(), out.categories.end(),
                              kFloatingCategory);
    if (it == out.categories.end()) {
      out.categories.push_back(kFloatingCategory);
      out.floating = static_cast<int>(out.categories.size()) - 1;
    } else {
      out.floating = static_cast<int>(it - out.categories.begin());
    }
  }
  if (out.categories.empty()) {
    throw Error("column '" + realized.name + "' has no categories");
  }
  for (const auto& v : raw.text) {
    if (v.empty()) {
      out.codes.push_back(floating ? out.floating : kMissing);
      continue;
    }
    const auto it = std::find(out.categories.begin(), out.categories.end(), v);
    if (it == out.categories.end()) {
      throw Error("value '" + v + "' is not a declared category of column '" +
                  realized.name + "'");
    }
    out.codes.push_back(static_cast<int>(it - out.categories.begin()));
  }
  realized.categories = out.categories;
  return out;
}

}  // namespace

Dataset prepare_dataset(const RawDataset& raw) {
  if (raw.rows == 0) throw Error("empty dataset");
  Dataset data;
  data.schema = raw.schema;

  for (const auto& column : raw.columns) {
    ColumnSpec& realized = *std::find_if(
        data.schema.columns.begin(), data.schema.columns.end(),
        [&](const ColumnSpec& c) { return c.name == column.spec->name; });
    auto encoded = realized.kind == Kind::numeric
                       ? encode_numeric(column, realized)
                       : encode_categorical(column, realized);
    if (realized.role == Role::target) {
      data.target.name = realized.name;
      data.target.classes = std::move(encoded.categories);
      data.target_codes = std::move(encoded.codes);
      if (std::count(data.target_codes.begin(), data.target_codes.end(),
                     kMissing) > 0) {
        throw Error("target column '" + realized.name + "' has missing values");
      }
    } else {
      PredictorSpec spec;
      spec.name = realized.name;
      spec.scale = realized.scale;
      spec.categories = std::move(encoded.categories);
      spec.floating_category = encoded.floating;
      data.predictors.push_back(std::move(spec));
      data.columns.push_back(std::move(encoded.codes));
    }
  }
  data.validate();
  return data;
}

Record encode_record(const std::map<std::string, std::string>& cells,
                     const DatasetSchema& realized) {
  Record record;
  for (const auto* spec : realized.predictors()) {
    const auto it = cells.find(spec->name);
    if (it == cells.end()) continue;
    const auto cell = trim(it->second);
    if (is_missing_cell(cell)) {
      record[spec->name] = "";
      continue;
    }
    if (spec->kind == Kind::numeric) {
      double v = 0.0;
      if (!parse_number(cell, v)) {
        throw Error("column " + spec->name + ": '" + cell + "' is not numeric");
      }
      record[spec->name] = std::to_string(assign_interval(v, *spec->binning));
    } else {
      record[spec->name] = cell;
    }
  }
  return record;
}

}  // namespace chaid
