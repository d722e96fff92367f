#include "gdsim/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gdsim/version.hpp"

namespace gdsim {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

bool is_comment(const std::string& line) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '#';
  }
  return true;  // blank lines behave like comments
}

}  // namespace

MatrixFormat parse_matrix_format(const std::string& name) {
  if (name == "auto") return MatrixFormat::kAuto;
  if (name == "triplet") return MatrixFormat::kTriplet;
  if (name == "dense") return MatrixFormat::kDense;
  throw std::invalid_argument("unknown matrix format '" + name + "'");
}

std::string format_weight(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& out, const FeatureMatrix& w, MatrixFormat format,
                  const std::vector<std::string>& feature_names) {
  const bool triplet = format != MatrixFormat::kDense;
  out << "# gdsim matrix " << kVersion << "\n";
  out << "# format: " << (triplet ? "triplet" : "dense") << "\n";
  out << "# objects: " << w.objects() << "\n";
  out << "# features: " << w.features() << "\n";
  for (std::size_t s = 0; s < feature_names.size(); ++s)
    out << "# feature " << s << ": " << feature_names[s] << "\n";
  if (triplet) {
    for (std::size_t i = 0; i < w.objects(); ++i)
      w.for_each_in_row(i, [&](std::uint32_t s, double v) {
        if (v != 0.0) out << i << " " << s << " " << format_weight(v) << "\n";
      });
  } else {
    for (std::size_t i = 0; i < w.objects(); ++i) {
      bool first = true;
      std::vector<double> row(w.features(), 0.0);
      w.for_each_in_row(i, [&](std::uint32_t s, double v) { row[s] = v; });
      for (double v : row) {
        if (!first) out << " ";
        out << format_weight(v);
        first = false;
      }
      out << "\n";
    }
  }
}

void write_matrix(const std::string& path, const FeatureMatrix& w, MatrixFormat format,
                  const std::vector<std::string>& feature_names) {
  auto out = open_out(path);
  write_matrix(out, w, format, feature_names);
}

FeatureMatrix read_matrix(std::istream& in, MatrixFormat format, StorageMode storage) {
  std::vector<std::string> data_lines;
  std::optional<std::size_t> n_header, m_header;
  bool saw_triplet_header = false;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_comment(line)) {
      if (line.find("format: triplet") != std::string::npos) saw_triplet_header = true;
      std::istringstream hs(line);
      std::string hash, key;
      if (hs >> hash >> key) {
        std::size_t value;
        if (key == "objects:" && hs >> value) n_header = value;
        if (key == "features:" && hs >> value) m_header = value;
      }
      continue;
    }
    data_lines.push_back(line);
  }
  if (data_lines.empty()) throw std::runtime_error("matrix file has no data lines");

  const bool triplet =
      format == MatrixFormat::kTriplet || (format == MatrixFormat::kAuto && saw_triplet_header);

  if (triplet) {
    std::vector<Triplet> entries;
    std::size_t max_i = 0, max_s = 0;
    for (const auto& text : data_lines) {
      std::istringstream ls(text);
      Triplet t;
      if (!(ls >> t.object >> t.feature >> t.weight))
        throw std::runtime_error("bad triplet line: " + text);
      max_i = std::max(max_i, t.object);
      max_s = std::max(max_s, t.feature);
      entries.push_back(t);
    }
    const std::size_t n = n_header.value_or(max_i + 1);
    const std::size_t m = m_header.value_or(max_s + 1);
    return FeatureMatrix::build(std::move(entries), n, m, storage);
  }

  std::vector<double> values;
  std::size_t m = 0;
  for (const auto& text : data_lines) {
    std::size_t count = 0;
    double v;
    // Dense rows accept spaces, tabs, or commas between numbers.
    std::string cleaned = text;
    for (char& c : cleaned)
      if (c == ',' || c == '\t' || c == ';') c = ' ';
    std::istringstream cs(cleaned);
    while (cs >> v) {
      values.push_back(v);
      ++count;
    }
    if (m == 0) m = count;
    if (count == 0 || count != m)
      throw std::runtime_error("inconsistent dense row: " + text);
  }
  return FeatureMatrix::from_dense(values, values.size() / m, m, storage);
}

FeatureMatrix read_matrix(const std::string& path, MatrixFormat format, StorageMode storage) {
  auto in = open_in(path);
  return read_matrix(in, format, storage);
}

void write_labels(const std::string& path, const std::vector<std::string>& labels) {
  auto out = open_out(path);
  for (const auto& label : labels) out << label << "\n";
}

std::vector<std::string> read_labels(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) labels.push_back(line);
  }
  return labels;
}

void write_provenance(std::ostream& out, const std::string& subcommand,
                      const std::string& config_echo, std::uint64_t seed) {
  out << "# gdsim " << kVersion << "\n";
  out << "# subcommand: " << subcommand << "\n";
  out << "# config: " << config_echo << "\n";
  out << "# seed: " << seed << "\n";
}

}  // namespace gdsim
