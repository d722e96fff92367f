#include "gdsim/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gdsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) fields.push_back(trim(field));
  if (!line.empty() && line.back() == delim) fields.emplace_back();
  return fields;
}

bool parse_number(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

// Raw table: header + string rows, ragged rows rejected.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

RawTable read_raw(std::istream& in, char delim) {
  RawTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_line(line, delim);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size())
      throw std::runtime_error("ragged row at line " + std::to_string(lineno) + ": expected " +
                               std::to_string(t.header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw std::runtime_error("empty file: no header row");
  std::set<std::string> seen;
  for (const auto& name : t.header)
    if (!seen.insert(name).second)
      throw std::runtime_error("duplicate column name '" + name + "' in header");
  return t;
}

LabeledDataset assemble(RawTable raw, std::vector<ColumnSchema> ordered_schema) {
  std::size_t label_col = ordered_schema.size();
  for (std::size_t c = 0; c < ordered_schema.size(); ++c)
    if (ordered_schema[c].kind == ColumnKind::kLabel) {
      if (label_col != ordered_schema.size())
        throw std::runtime_error("schema declares more than one label column");
      label_col = c;
    }
  if (label_col == ordered_schema.size())
    throw std::runtime_error("schema declares no label column");

  LabeledDataset d;
  d.schema = std::move(ordered_schema);
  d.labels.reserve(raw.rows.size());
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    for (std::size_t c = 0; c < raw.rows[r].size(); ++c)
      if (raw.rows[r][c].empty())
        throw std::runtime_error("missing value at row " + std::to_string(r) + ", column '" +
                                 d.schema[c].name + "'");
    d.labels.push_back(raw.rows[r][label_col]);
  }
  d.cells = std::move(raw.rows);
  if (d.n() < 2) throw std::runtime_error("dataset needs at least 2 rows, got " +
                                          std::to_string(d.n()));
  return d;
}

}  // namespace

const char* to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kCategorical: return "categorical";
    case ColumnKind::kContinuous: return "continuous";
    case ColumnKind::kIdentifier: return "identifier";
    case ColumnKind::kLabel: return "label";
  }
  return "?";
}

ColumnKind parse_column_kind(const std::string& name) {
  if (name == "categorical") return ColumnKind::kCategorical;
  if (name == "continuous") return ColumnKind::kContinuous;
  if (name == "identifier") return ColumnKind::kIdentifier;
  if (name == "label") return ColumnKind::kLabel;
  throw std::invalid_argument("unknown column kind '" + name + "'");
}

std::size_t LabeledDataset::label_column() const {
  for (std::size_t c = 0; c < schema.size(); ++c)
    if (schema[c].kind == ColumnKind::kLabel) return c;
  throw std::logic_error("dataset has no label column");
}

std::vector<std::size_t> LabeledDataset::columns_of_kind(ColumnKind kind) const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < schema.size(); ++c)
    if (schema[c].kind == kind) out.push_back(c);
  return out;
}

std::size_t CategoryDictionary::Column::code_of(const std::string& value) const {
  const auto it = std::lower_bound(values.begin(), values.end(), value);
  if (it == values.end() || *it != value)
    throw std::invalid_argument("unseen category '" + value + "' in column '" + name + "'");
  return static_cast<std::size_t>(it - values.begin());
}

std::vector<ColumnSchema> load_schema(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("schema file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("schema file must be a JSON object of name: kind");
  std::vector<ColumnSchema> schema;
  for (const auto& [name, kind] : j.items())
    schema.push_back({name, parse_column_kind(kind.get<std::string>())});
  return schema;
}

LabeledDataset load_table(std::istream& in, const std::vector<ColumnSchema>& schema,
                          const TableOptions& opts) {
  RawTable raw = read_raw(in, opts.delimiter);
  std::map<std::string, ColumnKind> by_name;
  for (const auto& col : schema)
    if (!by_name.emplace(col.name, col.kind).second)
      throw std::runtime_error("schema lists column '" + col.name + "' twice");

  std::vector<ColumnSchema> ordered;
  ordered.reserve(raw.header.size());
  for (const auto& name : raw.header) {
    const auto it = by_name.find(name);
    if (it == by_name.end())
      throw std::runtime_error("header column '" + name + "' not present in schema");
    ordered.push_back({name, it->second});
  }
  if (by_name.size() != raw.header.size())
    for (const auto& [name, kind] : by_name)
      if (std::find(raw.header.begin(), raw.header.end(), name) == raw.header.end())
        throw std::runtime_error("schema column '" + name + "' not present in file header");
  return assemble(std::move(raw), std::move(ordered));
}

LabeledDataset load_table(const std::string& path, const std::vector<ColumnSchema>& schema,
                          const TableOptions& opts) {
  std::ifstream in = open_or_throw(path);
  return load_table(in, schema, opts);
}

LabeledDataset load_table_inferred(std::istream& in, const std::string& label_column,
                                   const TableOptions& opts) {
  RawTable raw = read_raw(in, opts.delimiter);
  std::vector<ColumnSchema> ordered;
  ordered.reserve(raw.header.size());
  bool found_label = false;
  for (std::size_t c = 0; c < raw.header.size(); ++c) {
    if (raw.header[c] == label_column) {
      ordered.push_back({raw.header[c], ColumnKind::kLabel});
      found_label = true;
      continue;
    }
    bool categorical = false;
    double unused;
    for (const auto& row : raw.rows)
      if (!parse_number(row[c], unused)) {
        categorical = true;
        break;
      }
    ordered.push_back(
        {raw.header[c], categorical ? ColumnKind::kCategorical : ColumnKind::kContinuous});
  }
  if (!found_label)
    throw std::runtime_error("label column '" + label_column + "' not found in header");
  return assemble(std::move(raw), std::move(ordered));
}

LabeledDataset load_table_inferred(const std::string& path, const std::string& label_column,
                                   const TableOptions& opts) {
  std::ifstream in = open_or_throw(path);
  return load_table_inferred(in, label_column, opts);
}

CategoryDictionary build_dictionary(const LabeledDataset& dataset) {
  CategoryDictionary dict;
  for (std::size_t c : dataset.columns_of_kind(ColumnKind::kCategorical)) {
    std::map<std::string, std::size_t> counts;  // lexicographic by construction
    for (const auto& row : dataset.cells) counts[row[c]]++;
    CategoryDictionary::Column col;
    col.name = dataset.schema[c].name;
    col.source_column = c;
    for (const auto& [value, count] : counts) {
      col.values.push_back(value);
      col.counts.push_back(count);
    }
    dict.columns.push_back(std::move(col));
  }
  return dict;
}

CategoricalView categorical_codes(const LabeledDataset& dataset, const CategoryDictionary& dict) {
  CategoricalView view;
  view.n = dataset.n();
  view.num_columns = dict.columns.size();
  view.codes.resize(view.n * view.num_columns);
  for (std::size_t i = 0; i < view.n; ++i)
    for (std::size_t c = 0; c < dict.columns.size(); ++c)
      view.codes[i * view.num_columns + c] = static_cast<std::uint32_t>(
          dict.columns[c].code_of(dataset.cells[i][dict.columns[c].source_column]));
  return view;
}

EncodedDataset encode(const LabeledDataset& dataset, const CategoryDictionary& dict,
                      const EncodeOptions& opts) {
  const std::size_t n = dataset.n();
  std::vector<std::string> names;
  std::vector<Triplet> entries;

  std::map<std::size_t, const CategoryDictionary::Column*> cat_by_column;
  for (const auto& col : dict.columns) cat_by_column[col.source_column] = &col;

  for (std::size_t c = 0; c < dataset.schema.size(); ++c) {
    const ColumnSchema& col = dataset.schema[c];
    if (col.kind == ColumnKind::kLabel || col.kind == ColumnKind::kIdentifier) continue;

    if (col.kind == ColumnKind::kCategorical) {
      const auto it = cat_by_column.find(c);
      if (it == cat_by_column.end())
        throw std::invalid_argument("dictionary is missing categorical column '" + col.name + "'");
      const CategoryDictionary::Column& cat = *it->second;
      const std::size_t base = names.size();
      for (const auto& value : cat.values) names.push_back(col.name + "=" + value);
      for (std::size_t i = 0; i < n; ++i)
        entries.push_back({i, base + cat.code_of(dataset.cells[i][c]), 1.0});
      continue;
    }

    // Continuous column: parse, optionally min-shift when negatives occur.
    const std::size_t feature = names.size();
    names.push_back(col.name);
    std::vector<double> values(n);
    double min_value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!parse_number(dataset.cells[i][c], values[i]))
        throw std::invalid_argument("non-numeric value '" + dataset.cells[i][c] +
                                    "' at row " + std::to_string(i) + ", continuous column '" +
                                    col.name + "'");
      min_value = std::min(min_value, values[i]);
    }
    if (min_value < 0.0) {
      const bool rescale = opts.rescale_all || opts.rescale_columns.count(col.name) > 0;
      if (!rescale)
        throw std::invalid_argument("negative value in continuous column '" + col.name +
                                    "' (enable min-shift rescaling to accept)");
      for (double& v : values) v -= min_value;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (values[i] != 0.0) entries.push_back({i, feature, values[i]});
  }

  if (names.empty()) throw std::invalid_argument("dataset has no feature columns to encode");

  EncodedDataset out;
  out.matrix = FeatureMatrix::build(std::move(entries), n, names.size(), opts.storage);
  out.labels = dataset.labels;
  std::vector<bool> dropped(names.size(), false);
  for (std::size_t s : out.matrix.dropped_features()) {
    dropped[s] = true;
    out.warnings.push_back("dropped all-zero feature column '" + names[s] + "'");
  }
  for (std::size_t s = 0; s < names.size(); ++s)
    if (!dropped[s]) out.feature_names.push_back(std::move(names[s]));
  return out;
}

EncodedDataset load_vectors(const std::string& path, const VectorFileOptions& opts) {
  if (opts.label_column.empty() == opts.label_file.empty())
    throw std::invalid_argument("exactly one of label column and label file must be given");

  std::ifstream in = open_or_throw(path);
  EncodedDataset out;
  std::vector<double> values;
  std::size_t m = 0, n = 0;
  std::size_t label_col = static_cast<std::size_t>(-1);

  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_line(line, opts.delimiter);

    if (!opts.label_column.empty() && !saw_header) {
      const auto it = std::find(fields.begin(), fields.end(), opts.label_column);
      if (it == fields.end())
        throw std::runtime_error("label column '" + opts.label_column + "' not found in header");
      label_col = static_cast<std::size_t>(it - fields.begin());
      m = fields.size() - 1;
      for (std::size_t c = 0; c < fields.size(); ++c)
        if (c != label_col) out.feature_names.push_back(fields[c]);
      saw_header = true;
      continue;
    }

    const std::size_t expected = m == 0 ? fields.size() : m + (label_col != static_cast<std::size_t>(-1) ? 1 : 0);
    if (m == 0) {
      m = fields.size();
      for (std::size_t c = 0; c < m; ++c) out.feature_names.push_back("f" + std::to_string(c));
    } else if (fields.size() != expected) {
      throw std::runtime_error("inconsistent row length at line " + std::to_string(lineno) +
                               ": expected " + std::to_string(expected) + " fields, got " +
                               std::to_string(fields.size()));
    }

    double row_sum = 0.0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_col) {
        out.labels.push_back(fields[c]);
        continue;
      }
      double v;
      if (!parse_number(fields[c], v))
        throw std::runtime_error("non-numeric value '" + fields[c] + "' at line " +
                                 std::to_string(lineno));
      if (v < 0.0)
        throw std::runtime_error("negative entry " + std::to_string(v) + " at line " +
                                 std::to_string(lineno));
      values.push_back(v);
      row_sum += v;
    }
    if (row_sum == 0.0)
      throw std::runtime_error("all-zero object row at line " + std::to_string(lineno) +
                               " (null objects are rejected)");
    ++n;
  }
  if (n == 0) throw std::runtime_error("empty vector file: " + path);

  if (!opts.label_file.empty()) {
    std::ifstream lf = open_or_throw(opts.label_file);
    std::string label;
    while (std::getline(lf, label)) {
      if (!label.empty() && label.back() == '\r') label.pop_back();
      if (!trim(label).empty()) out.labels.push_back(trim(label));
    }
  }
  if (out.labels.size() != n)
    throw std::runtime_error("label count " + std::to_string(out.labels.size()) +
                             " does not match object count " + std::to_string(n));

  out.matrix = FeatureMatrix::from_dense(values, n, values.size() / n, opts.storage);
  for (std::size_t s : out.matrix.dropped_features())
    out.warnings.push_back("dropped all-zero feature column '" + out.feature_names[s] + "'");
  {
    std::vector<std::string> kept;
    std::vector<bool> dropped(out.feature_names.size(), false);
    for (std::size_t s : out.matrix.dropped_features()) dropped[s] = true;
    for (std::size_t s = 0; s < out.feature_names.size(); ++s)
      if (!dropped[s]) kept.push_back(std::move(out.feature_names[s]));
    out.feature_names = std::move(kept);
  }
  return out;
}

}  // namespace gdsim
