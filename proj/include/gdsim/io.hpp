#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gdsim/feature_matrix.hpp"

namespace gdsim {

enum class MatrixFormat { kAuto, kTriplet, kDense };

MatrixFormat parse_matrix_format(const std::string& name);

// Plain-text matrix files. Comment lines start with '#'; a
// "# format: triplet" header marks triplet files ("i s w" per line, 0-based),
// anything else is read as dense delimiter-separated numeric rows.
// Weights are written with enough digits to round-trip exactly.
void write_matrix(std::ostream& out, const FeatureMatrix& w, MatrixFormat format,
                  const std::vector<std::string>& feature_names = {});
void write_matrix(const std::string& path, const FeatureMatrix& w, MatrixFormat format,
                  const std::vector<std::string>& feature_names = {});

FeatureMatrix read_matrix(std::istream& in, MatrixFormat format = MatrixFormat::kAuto,
                          StorageMode storage = StorageMode::kAuto);
FeatureMatrix read_matrix(const std::string& path, MatrixFormat format = MatrixFormat::kAuto,
                          StorageMode storage = StorageMode::kAuto);

void write_labels(const std::string& path, const std::vector<std::string>& labels);
std::vector<std::string> read_labels(const std::string& path);

// Provenance header for every output: version, subcommand, config echo, and
// seed. Deliberately free of timestamps and thread counts so identical
// configurations produce byte-identical output.
void write_provenance(std::ostream& out, const std::string& subcommand,
                      const std::string& config_echo, std::uint64_t seed);

// Fixed-format float used in all text outputs (round-trips exactly).
std::string format_weight(double v);

}  // namespace gdsim
