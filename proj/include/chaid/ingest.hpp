#pragma once

// Loading delimited listing data against a schema and discretizing numeric
// columns into labelled intervals "1".."k".

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chaid/csv.hpp"
#include "chaid/dataset.hpp"
#include "chaid/schema.hpp"
#include "chaid/tree.hpp"

namespace chaid {

// Empty cells and "NA" are missing.
bool is_missing_cell(std::string_view cell);

struct LoadReport {
  std::size_t rows_read = 0;
  std::size_t rows_kept = 0;
  std::size_t rows_rejected = 0;
  std::vector<std::string> rejections;  // first kMaxRejectionMessages causes
  std::map<std::string, std::size_t> missing;  // per used column
  static constexpr std::size_t kMaxRejectionMessages = 10;
};

struct RawColumn {
  const ColumnSpec* spec = nullptr;  // points into RawDataset::schema
  std::vector<std::string> text;     // categorical cells ("" = missing)
  std::vector<double> numbers;       // numeric cells (NaN = missing)
};

struct RawDataset {
  DatasetSchema schema;
  std::vector<RawColumn> columns;  // used columns, schema order
  std::size_t rows = 0;
  LoadReport report;

  RawDataset() = default;
  RawDataset(const RawDataset& other);
  RawDataset& operator=(const RawDataset& other);
  RawDataset(RawDataset&&) noexcept = default;
  RawDataset& operator=(RawDataset&&) noexcept = default;

  const RawColumn& column(const std::string& name) const;
};

RawDataset load_dataset(const CsvTable& table, const DatasetSchema& schema);
RawDataset load_dataset_text(std::string_view text, const DatasetSchema& schema);
RawDataset load_dataset_file(const std::string& path, const DatasetSchema& schema);

struct BinnedColumn {
  std::vector<int> intervals;  // 1-based, one per input value
  std::vector<double> edges;   // realized e0..ek
};

// Fits `spec` to `values` (no NaN) and labels every value.
BinnedColumn bin_numeric(std::span<const double> values, const BinningSpec& spec);

// Interval (1-based) of `value` under fitted edges. Values outside the edges
// clamp for fitted strategies and are rejected for explicit boundaries.
int assign_interval(double value, const BinningSpec& fitted);

// Fits binning and category universes on the loaded data and encodes it.
// The returned dataset's schema is the realized schema.
Dataset prepare_dataset(const RawDataset& raw);

// Maps raw cells (column name -> text) to the category labels a tree routes
// on, using a realized schema. Columns absent from `cells` stay absent.
Record encode_record(const std::map<std::string, std::string>& cells,
                     const DatasetSchema& realized);

}  // namespace chaid
