#pragma once

#include <cstdint>
#include <istream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gdsim/feature_matrix.hpp"

namespace gdsim {

enum class ColumnKind { kCategorical, kContinuous, kIdentifier, kLabel };

const char* to_string(ColumnKind kind);
ColumnKind parse_column_kind(const std::string& name);

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::kCategorical;
};

// Raw labeled table: one schema entry per file column (label included),
// all cell values kept as text, labels split out per row.
struct LabeledDataset {
  std::vector<ColumnSchema> schema;
  std::vector<std::vector<std::string>> cells;  // n rows x schema.size() columns
  std::vector<std::string> labels;

  std::size_t n() const { return cells.size(); }
  std::size_t label_column() const;
  std::vector<std::size_t> columns_of_kind(ColumnKind kind) const;
};

// Per categorical column: lexicographically ordered distinct values with
// occurrence counts (counts sum to n).
struct CategoryDictionary {
  struct Column {
    std::string name;
    std::size_t source_column = 0;
    std::vector<std::string> values;
    std::vector<std::size_t> counts;

    // Index of value in the ordered list; throws on unseen categories.
    std::size_t code_of(const std::string& value) const;
  };
  std::vector<Column> columns;
};

// Rows reduced to dictionary codes over the categorical columns, the form the
// categorical measures consume.
struct CategoricalView {
  std::size_t n = 0;
  std::size_t num_columns = 0;
  std::vector<std::uint32_t> codes;  // n * num_columns, row-major

  std::span<const std::uint32_t> row(std::size_t i) const {
    return {codes.data() + i * num_columns, num_columns};
  }
};

struct EncodedDataset {
  FeatureMatrix matrix;
  std::vector<std::string> labels;
  std::vector<std::string> feature_names;
  std::vector<std::string> warnings;  // e.g. dropped all-zero feature columns
};

struct TableOptions {
  char delimiter = ',';
};

// Parses "name": "kind" pairs from a JSON object file.
std::vector<ColumnSchema> load_schema(const std::string& path);

// Delimiter-separated text with a header row. The schema must cover exactly
// the header columns (matched by name) and contain exactly one label column.
LabeledDataset load_table(const std::string& path, const std::vector<ColumnSchema>& schema,
                          const TableOptions& opts = {});
LabeledDataset load_table(std::istream& in, const std::vector<ColumnSchema>& schema,
                          const TableOptions& opts = {});

// Schema inference: a column is categorical iff any cell fails numeric
// parsing, continuous otherwise; the label column is picked by name.
LabeledDataset load_table_inferred(const std::string& path, const std::string& label_column,
                                   const TableOptions& opts = {});
LabeledDataset load_table_inferred(std::istream& in, const std::string& label_column,
                                   const TableOptions& opts = {});

CategoryDictionary build_dictionary(const LabeledDataset& dataset);

CategoricalView categorical_codes(const LabeledDataset& dataset, const CategoryDictionary& dict);

struct EncodeOptions {
  // Continuous columns listed here may be min-shifted (x - min) when the
  // column contains negative values; otherwise negatives are an error.
  std::set<std::string> rescale_columns;
  bool rescale_all = false;
  StorageMode storage = StorageMode::kAuto;
};

// One-hot encodes categorical columns (l categories -> l binary features,
// exactly one set per row), passes continuous columns through as raw
// weights, and skips identifier columns.
EncodedDataset encode(const LabeledDataset& dataset, const CategoryDictionary& dict,
                      const EncodeOptions& opts = {});

struct VectorFileOptions {
  char delimiter = ',';
  // Exactly one of these supplies labels: a named column (file must then have
  // a header row) or a sidecar file with one label per line.
  std::string label_column;
  std::string label_file;
  StorageMode storage = StorageMode::kAuto;
};

// Dense numeric rows of equal length, all values >= 0; all-zero rows are
// rejected as null objects.
EncodedDataset load_vectors(const std::string& path, const VectorFileOptions& opts);

}  // namespace gdsim
