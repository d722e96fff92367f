#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "gdsim/bench.hpp"
#include "gdsim/dataset.hpp"
#include "gdsim/diffusion.hpp"
#include "gdsim/eval.hpp"
#include "gdsim/io.hpp"
#include "gdsim/metric_audit.hpp"
#include "gdsim/parallel.hpp"
#include "gdsim/version.hpp"
#include "gdsim/walk_oracle.hpp"

namespace {

using namespace gdsim;

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// Bad flag values are usage errors (exit 2), not data errors.
template <typename Fn>
auto usage_checked(const char* flag, Fn&& fn) {
  try {
    return fn();
  } catch (const CLI::ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw CLI::ValidationError(flag, e.what());
  }
}

StorageMode parse_storage(const std::string& name) {
  if (name == "auto") return StorageMode::kAuto;
  if (name == "sparse") return StorageMode::kSparse;
  if (name == "dense") return StorageMode::kDense;
  throw CLI::ValidationError("--storage", "expected auto, sparse, or dense");
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Shared input flags: either a raw table (schema file or inferred with a
// named label column), a dense vector file, or a prebuilt matrix + labels.
struct InputOpts {
  std::string data_path;
  std::string schema_path;
  std::string vectors_path;
  std::string matrix_path;
  std::string labels_path;
  std::string label_col;
  std::string label_file;
  std::string delim = ",";
  std::string storage = "auto";
  std::string rescale;

  void attach(CLI::App* cmd, bool with_matrix) {
    cmd->add_option("--data", data_path, "delimiter-separated table with header row");
    cmd->add_option("--schema", schema_path, "JSON column-name: kind schema file");
    cmd->add_option("--vectors", vectors_path, "dense numeric vector file");
    if (with_matrix) {
      cmd->add_option("--matrix", matrix_path, "matrix file (triplet or dense)");
      cmd->add_option("--labels", labels_path, "label file for --matrix (one per line)");
    }
    cmd->add_option("--label-col", label_col,
                    "label column name (schema inference for --data, header column for --vectors)");
    cmd->add_option("--label-file", label_file, "sidecar label file for --vectors");
    cmd->add_option("--delim", delim, "field delimiter (default ',')");
    cmd->add_option("--storage", storage, "matrix storage: auto|sparse|dense");
    cmd->add_option("--rescale", rescale,
                    "min-shift negative continuous columns: 'all' or a column list");
  }

  char delimiter() const {
    if (delim == "\\t" || delim == "tab") return '\t';
    if (delim.size() != 1) throw CLI::ValidationError("--delim", "expected a single character");
    return delim[0];
  }

  EncodeOptions encode_options() const {
    EncodeOptions opts;
    opts.storage = parse_storage(storage);
    if (rescale == "all") {
      opts.rescale_all = true;
    } else {
      for (auto& c : split_csv(rescale)) opts.rescale_columns.insert(c);
    }
    return opts;
  }

  std::string echo() const {
    std::string s;
    const auto add = [&](const char* key, const std::string& value) {
      if (!value.empty()) s += std::string(key) + "=" + value + " ";
    };
    add("data", data_path);
    add("schema", schema_path);
    add("vectors", vectors_path);
    add("matrix", matrix_path);
    add("labels", labels_path);
    add("label-col", label_col);
    add("label-file", label_file);
    add("delim", delim);
    add("storage", storage);
    add("rescale", rescale);
    return s;
  }

  bool has_table() const { return !data_path.empty(); }

  LabeledDataset load_dataset() const {
    TableOptions topts{delimiter()};
    if (!schema_path.empty()) return load_table(data_path, load_schema(schema_path), topts);
    if (!label_col.empty()) return load_table_inferred(data_path, label_col, topts);
    throw CLI::ValidationError("--data", "needs --schema or --label-col (inference)");
  }

  EncodedDataset load_encoded() const {
    if (has_table()) {
      const LabeledDataset dataset = load_dataset();
      return encode(dataset, build_dictionary(dataset), encode_options());
    }
    if (!vectors_path.empty()) {
      VectorFileOptions vopts;
      vopts.delimiter = delimiter();
      vopts.label_column = label_col;
      vopts.label_file = label_file;
      vopts.storage = parse_storage(storage);
      return load_vectors(vectors_path, vopts);
    }
    if (!matrix_path.empty()) {
      EncodedDataset out;
      out.matrix = read_matrix(matrix_path, MatrixFormat::kAuto, parse_storage(storage));
      if (!labels_path.empty()) out.labels = read_labels(labels_path);
      return out;
    }
    throw CLI::ValidationError("input", "one of --data, --vectors, or --matrix is required");
  }
};

int run_encode(const InputOpts& input, const std::string& out_matrix,
               const std::string& out_labels, const std::string& format) {
  EncodedDataset encoded = input.load_encoded();
  write_matrix(out_matrix, encoded.matrix,
               usage_checked("--format", [&] { return parse_matrix_format(format); }),
               encoded.feature_names);
  if (!out_labels.empty()) write_labels(out_labels, encoded.labels);

  write_provenance(std::cout, "encode",
                   input.echo() + "out-matrix=" + out_matrix +
                       (out_labels.empty() ? "" : " out-labels=" + out_labels) +
                       " format=" + format,
                   0);
  for (const auto& warning : encoded.warnings) std::cout << "# warning: " << warning << "\n";
  std::cout << "objects: " << encoded.matrix.objects() << "\n";
  std::cout << "features: " << encoded.matrix.features() << "\n";
  std::cout << "nnz: " << encoded.matrix.nnz() << "\n";
  return 0;
}

int run_info(const std::string& matrix_path, const std::string& format,
             const std::string& storage) {
  const FeatureMatrix w = read_matrix(
      matrix_path, usage_checked("--format", [&] { return parse_matrix_format(format); }),
      parse_storage(storage));
  write_provenance(std::cout, "info", "matrix=" + matrix_path + " format=" + format, 0);
  const Connectivity conn = check_connectivity(w);
  std::cout << "objects: " << w.objects() << "\n";
  std::cout << "features: " << w.features() << "\n";
  std::cout << "nnz: " << w.nnz() << "\n";
  std::cout << "density: "
            << fmt(static_cast<double>(w.nnz()) /
                       (static_cast<double>(w.objects()) * static_cast<double>(w.features())),
                   "%.6g")
            << "\n";
  std::cout << "storage: " << (w.is_dense() ? "dense" : "sparse") << "\n";
  std::cout << "min-p: " << fmt(w.min_row_sum()) << "\n";
  std::cout << "max-p: " << fmt(w.max_row_sum()) << "\n";
  std::cout << "p-ratio: " << fmt(w.row_sum_ratio()) << "\n";
  std::cout << "components: " << conn.components << "\n";
  return 0;
}

int run_similar(const std::string& matrix_path, const std::string& variant_name, int k,
                std::size_t query, std::size_t top) {
  const FeatureMatrix w = read_matrix(matrix_path);
  const Variant variant{usage_checked("--variant", [&] { return parse_variant_kind(variant_name); }), k};

  SimilarityVector row;
  switch (variant.kind) {
    case VariantKind::kForward: {
      row = forward_row(DiffusionOperator(w), query, k);
      break;
    }
    case VariantKind::kReversed: {
      row = reversed_row(DiffusionOperator(w), query, k);
      break;
    }
    case VariantKind::kNormalized:
      row = normalized_row(w, query, k);
      break;
  }

  std::ostringstream config;
  config << "matrix=" << matrix_path << " variant=" << variant_name << " k=" << k
         << " query=" << query << " top=" << top;
  write_provenance(std::cout, "similar", config.str(), 0);
  const auto ranking = rank_neighbors(row.scores, Orientation::kHigherIsSimilar);
  const std::size_t shown = std::min<std::size_t>(top, ranking.size());
  for (std::size_t r = 0; r < shown; ++r)
    std::cout << ranking[r] << "\t" << fmt(row.scores[ranking[r]], "%.12g") << "\n";
  return 0;
}

int run_audit(const std::string& matrix_path, const std::string& variant_name, int k,
              std::uint64_t seed, std::size_t sample, std::size_t cap, unsigned threads) {
  const FeatureMatrix w = read_matrix(matrix_path);
  AuditOptions opts;
  opts.seed = seed;
  opts.threads = threads;
  if (cap > 0) opts.triple_cap = cap;
  if (sample > 0) opts.sample_count = sample;
  const MetricAuditReport report =
      audit(w, {usage_checked("--variant", [&] { return parse_variant_kind(variant_name); }), k}, opts);

  std::ostringstream config;
  config << "matrix=" << matrix_path << " variant=" << variant_name << " k=" << k
         << " cap=" << opts.triple_cap << " sample=" << opts.sample_count;
  write_provenance(std::cout, "audit", config.str(), seed);

  const char* mode = report.sampled ? "sampled (one-sided)" : "exhaustive";
  std::printf("variant               %s\n", report.variant.label().c_str());
  std::printf("objects               %zu\n", report.n);
  std::printf("triple scan           %s\n", mode);
  if (report.sampled) std::printf("sampled triples       %zu\n", report.sample_count);
  std::printf("symmetry defect       %s\n", fmt(report.symmetry_defect, "%.6e").c_str());
  std::printf("worst triangle        %s  at (%zu, %zu, %zu)\n",
              fmt(report.worst_triangle, "%.6e").c_str(), report.worst_triple[0],
              report.worst_triple[1], report.worst_triple[2]);
  std::printf("non-negativity        %s\n", report.nonneg_ok ? "ok" : "VIOLATED");
  std::printf("stochasticity defect  %s\n", fmt(report.stochasticity_defect, "%.6e").c_str());
  std::printf("p ratio               %s\n", fmt(report.p_ratio, "%.6g").c_str());
  std::printf("triangle guarantee    %s (order-1 guarantee needs p ratio > 2/3)\n",
              report.theorem2_applicable ? "yes" : "no");
  std::printf("connected             %s (%zu components)\n", report.connected ? "yes" : "no",
              report.components);
  std::printf("\n");
  std::printf("variant=%s\n", report.variant.label().c_str());
  std::printf("n=%zu\n", report.n);
  std::printf("symmetry_defect=%s\n", fmt(report.symmetry_defect).c_str());
  std::printf("worst_triangle=%s\n", fmt(report.worst_triangle).c_str());
  std::printf("worst_triple=%zu,%zu,%zu\n", report.worst_triple[0], report.worst_triple[1],
              report.worst_triple[2]);
  std::printf("nonneg_ok=%d\n", report.nonneg_ok ? 1 : 0);
  std::printf("stochasticity_defect=%s\n", fmt(report.stochasticity_defect).c_str());
  std::printf("p_ratio=%s\n", fmt(report.p_ratio).c_str());
  std::printf("theorem2_applicable=%d\n", report.theorem2_applicable ? 1 : 0);
  std::printf("connected=%d\n", report.connected ? 1 : 0);
  std::printf("components=%zu\n", report.components);
  std::printf("sampled=%d\n", report.sampled ? 1 : 0);
  return 0;
}

int run_oracle(const std::string& matrix_path, std::size_t start, int k, std::uint64_t walks,
               std::uint64_t seed, unsigned threads) {
  const FeatureMatrix w = read_matrix(matrix_path);
  SimulateOptions sopts;
  sopts.threads = threads;
  const WalkEstimate est = simulate(w, start, k, walks, seed, sopts);
  const SimilarityVector exact = forward_row(DiffusionOperator(w), start, k);
  const ZComparison cmp = compare(est, exact);

  std::ostringstream config;
  config << "matrix=" << matrix_path << " start=" << start << " k=" << k << " walks=" << walks;
  write_provenance(std::cout, "oracle", config.str(), seed);
  std::cout << "object\testimate\texact\tz\n";
  for (std::size_t j = 0; j < est.estimate.size(); ++j)
    std::cout << j << "\t" << fmt(est.estimate[j], "%.6f") << "\t"
              << fmt(exact.scores[j], "%.12g") << "\t" << fmt(cmp.z[j], "%.3f") << "\n";
  std::cout << "max-z: " << fmt(cmp.max_z, "%.3f") << " at object " << cmp.worst_index << "\n";
  return 0;
}

std::string out_path_for(const std::string& base, const std::string& measure, bool multi) {
  if (!multi) return base;
  const std::size_t dot = base.find_last_of('.');
  if (dot == std::string::npos || base.find('/', dot) != std::string::npos)
    return base + "." + measure;
  return base.substr(0, dot) + "." + measure + base.substr(dot);
}

int run_errcurve(const InputOpts& input, const std::string& measures_csv,
                 const std::string& variant_name, int k, std::size_t grid_points,
                 const std::string& summary_csv, const std::string& out, unsigned threads) {
  const auto measure_names = split_csv(measures_csv);
  if (measure_names.empty()) throw CLI::ValidationError("--measure", "no measures given");
  std::vector<MeasureId> ids;
  bool needs_table = false, needs_matrix = false;
  for (const auto& name : measure_names) {
    ids.push_back(usage_checked("--measure", [&] { return parse_measure(name); }));
    needs_table |= ids.back().cls == MeasureId::Class::kCategorical;
    needs_matrix |= ids.back().cls != MeasureId::Class::kCategorical;
  }

  // Load whatever the selected measures require.
  LabeledDataset dataset;
  CategoryDictionary dict;
  CategoricalView view;
  FrequencyStats stats;
  EncodedDataset encoded;
  LabelIndex labels;

  if (needs_table && !input.has_table())
    throw CLI::ValidationError("--measure",
                               "categorical measures need --data with a schema (raw table)");
  if (input.has_table()) {
    dataset = input.load_dataset();
    if (needs_table) {
      dict = build_dictionary(dataset);
      view = categorical_codes(dataset, dict);
      stats = compute_stats(dict, dataset.n());
    }
    if (needs_matrix) encoded = encode(dataset, build_dictionary(dataset), input.encode_options());
    labels = index_labels(dataset.labels);
  } else {
    encoded = input.load_encoded();
    if (encoded.labels.empty())
      throw CLI::ValidationError("--labels", "labels are required for error curves");
    labels = index_labels(encoded.labels);
  }

  const VariantKind kind =
      usage_checked("--variant", [&] { return parse_variant_kind(variant_name); });
  std::shared_ptr<const DiffusionOperator> op_plain, op_normalized;
  const auto diffusion_op = [&](VariantKind vk) {
    if (vk == VariantKind::kNormalized) {
      if (!op_normalized)
        op_normalized = std::make_shared<const DiffusionOperator>(encoded.matrix.row_normalized());
      return op_normalized;
    }
    if (!op_plain)
      op_plain = std::make_shared<const DiffusionOperator>(FeatureMatrix(encoded.matrix));
    return op_plain;
  };

  CurveOptions copts;
  copts.grid = default_grid(grid_points);
  copts.threads = threads;
  const auto summary_points = split_csv(summary_csv);

  for (const auto& id : ids) {
    ScoredMeasure measure;
    switch (id.cls) {
      case MeasureId::Class::kCategorical:
        measure = make_categorical_measure(id.categorical, view, stats);
        break;
      case MeasureId::Class::kVector:
        measure = make_vector_measure(id.vector, encoded.matrix);
        break;
      case MeasureId::Class::kDiffusion: {
        const int order = id.order > 0 ? id.order : k;
        measure = make_diffusion_measure(diffusion_op(kind), {kind, order});
        measure.name = id.name == "gd" ? "gd" + std::to_string(order) : id.name;
        break;
      }
    }
    const ErrorCurve curve = error_curve(measure, labels, copts);

    const std::string path = out_path_for(out, id.name, ids.size() > 1);
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write file: " + path);
    std::ostringstream config;
    config << input.echo() << "measure=" << id.name << " variant=" << variant_name << " k=" << k
           << " grid=" << grid_points;
    write_provenance(file, "errcurve", config.str(), 0);
    file << "# measure: " << measure.name << "\n";
    file << "# n: " << curve.n << "\n";
    file << "# classes:";
    for (const auto& [name, count] : curve.class_counts) file << " " << name << "=" << count;
    file << "\n";
    if (!summary_points.empty()) {
      file << "# summary:";
      for (const auto& fs : summary_points)
        file << " E(" << fs << ")=" << fmt(curve.at(std::stod(fs)), "%.4f");
      file << "\n";
    }
    file << "f\tE\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
      file << fmt(curve.grid[i], "%.6f") << "\t" << fmt(curve.values[i], "%.10f") << "\n";

    std::cout << measure.name << " -> " << path;
    if (!summary_points.empty()) {
      std::cout << " |";
      for (const auto& fs : summary_points)
        std::cout << " E(" << fs << ")=" << fmt(curve.at(std::stod(fs)), "%.4f");
    }
    std::cout << "\n";
  }
  return 0;
}

int run_bench(const std::string& sizes_csv, std::size_t per_row, int k, std::size_t queries,
              std::uint64_t seed) {
  BenchConfig config;
  config.sizes.clear();
  for (const auto& s : split_csv(sizes_csv)) config.sizes.push_back(std::stoull(s));
  config.per_row = per_row;
  config.order = k;
  config.queries = queries;
  config.seed = seed;
  const BenchResult result = run_query_scaling_bench(config);

  write_provenance(std::cout, "bench",
                   "sizes=" + sizes_csv + " per-row=" + std::to_string(per_row) +
                       " k=" + std::to_string(k) + " queries=" + std::to_string(queries),
                   seed);
  std::cout << "# timings below vary run to run; only the trend is meaningful\n";
  std::cout << "n\tmedian-query-seconds\n";
  for (const auto& pt : result.points)
    std::cout << pt.n << "\t" << fmt(pt.median_query_seconds, "%.6e") << "\n";
  std::cout << "exponent: " << fmt(result.exponent, "%.3f") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph diffusion similarity toolkit"};
  app.set_version_flag("--version", std::string("gdsim ") + gdsim::kVersion);
  app.fallthrough();  // global flags are accepted after the subcommand too
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (default: GDSIM_THREADS or hardware)");
  bool list_measures = false;
  app.add_flag("--list-measures", list_measures, "print the measure registry and exit");

  InputOpts enc_input;
  auto* cmd_encode = app.add_subcommand("encode", "encode a table or vector file into a matrix");
  enc_input.attach(cmd_encode, false);
  std::string out_matrix, out_labels, out_format = "triplet";
  cmd_encode->add_option("--out-matrix", out_matrix, "output matrix path")->required();
  cmd_encode->add_option("--out-labels", out_labels, "output label path");
  cmd_encode->add_option("--format", out_format, "matrix output format: triplet|dense");

  auto* cmd_info = app.add_subcommand("info", "print matrix shape and row-sum statistics");
  std::string info_matrix, info_format = "auto", info_storage = "auto";
  cmd_info->add_option("--matrix", info_matrix, "matrix file")->required();
  cmd_info->add_option("--format", info_format, "matrix format: auto|triplet|dense");
  cmd_info->add_option("--storage", info_storage, "storage override: auto|sparse|dense");

  auto* cmd_similar = app.add_subcommand("similar", "top-scoring neighbors of one query");
  std::string sim_matrix, sim_variant = "forward";
  int sim_k = 1;
  std::size_t sim_query = 0, sim_top = 10;
  cmd_similar->add_option("--matrix", sim_matrix, "matrix file")->required();
  cmd_similar->add_option("--variant", sim_variant, "forward|reversed|normalized");
  cmd_similar->add_option("--k", sim_k, "diffusion order (rounds)");
  cmd_similar->add_option("--query", sim_query, "query object index")->required();
  cmd_similar->add_option("--top", sim_top, "number of neighbors to print");

  auto* cmd_audit = app.add_subcommand("audit", "metametric property report for a variant");
  std::string audit_matrix, audit_variant = "forward";
  int audit_k = 1;
  std::uint64_t audit_seed = 1;
  std::size_t audit_sample = 0, audit_cap = 0;
  cmd_audit->add_option("--matrix", audit_matrix, "matrix file")->required();
  cmd_audit->add_option("--variant", audit_variant, "forward|reversed|normalized");
  cmd_audit->add_option("--k", audit_k, "diffusion order (rounds)");
  cmd_audit->add_option("--seed", audit_seed, "seed for sampled triple scans");
  cmd_audit->add_option("--sample", audit_sample, "triples to sample above the cap");
  cmd_audit->add_option("--cap", audit_cap, "exhaustive triple-scan cap (default 2000)");

  auto* cmd_oracle = app.add_subcommand("oracle", "Monte-Carlo walk check against exact rows");
  std::string oracle_matrix;
  std::size_t oracle_start = 0;
  int oracle_k = 1;
  std::uint64_t oracle_walks = 100000, oracle_seed = 1;
  cmd_oracle->add_option("--matrix", oracle_matrix, "matrix file")->required();
  cmd_oracle->add_option("--start", oracle_start, "start object index")->required();
  cmd_oracle->add_option("--k", oracle_k, "rounds");
  cmd_oracle->add_option("--walks", oracle_walks, "number of walks");
  cmd_oracle->add_option("--seed", oracle_seed, "master seed");

  InputOpts curve_input;
  auto* cmd_errcurve = app.add_subcommand("errcurve", "nearest-neighbor error curves E(f)");
  curve_input.attach(cmd_errcurve, true);
  std::string curve_measures, curve_variant = "reversed", curve_summary, curve_out;
  int curve_k = 1;
  std::size_t curve_grid = 100;
  cmd_errcurve->add_option("--measure", curve_measures, "comma list of measures")->required();
  cmd_errcurve->add_option("--variant", curve_variant,
                           "diffusion variant for gd measures (default reversed)");
  cmd_errcurve->add_option("--k", curve_k, "order for the plain 'gd' measure");
  cmd_errcurve->add_option("--grid", curve_grid, "number of f grid points (default 100)");
  cmd_errcurve->add_option("--summary", curve_summary, "comma list of f values to summarize");
  cmd_errcurve->add_option("--out", curve_out, "output path (per-measure suffix when several)")
      ->required();

  auto* cmd_bench = app.add_subcommand("bench", "per-query latency scaling across sizes");
  std::string bench_sizes = "10000,20000,40000";
  std::size_t bench_per_row = 8, bench_queries = 48;
  int bench_k = 1;
  std::uint64_t bench_seed = 7;
  cmd_bench->add_option("--sizes", bench_sizes, "comma list of object counts");
  cmd_bench->add_option("--per-row", bench_per_row, "nonzeros per object row");
  cmd_bench->add_option("--k", bench_k, "diffusion order");
  cmd_bench->add_option("--queries", bench_queries, "queries per size");
  cmd_bench->add_option("--seed", bench_seed, "instance seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  if (threads == 0) threads = gdsim::default_thread_count();

  try {
    if (list_measures) {
      for (const auto& name : gdsim::list_measure_names()) std::cout << name << "\n";
      return 0;
    }
    if (*cmd_encode) return run_encode(enc_input, out_matrix, out_labels, out_format);
    if (*cmd_info) return run_info(info_matrix, info_format, info_storage);
    if (*cmd_similar) return run_similar(sim_matrix, sim_variant, sim_k, sim_query, sim_top);
    if (*cmd_audit)
      return run_audit(audit_matrix, audit_variant, audit_k, audit_seed, audit_sample, audit_cap,
                       threads);
    if (*cmd_oracle)
      return run_oracle(oracle_matrix, oracle_start, oracle_k, oracle_walks, oracle_seed, threads);
    if (*cmd_errcurve)
      return run_errcurve(curve_input, curve_measures, curve_variant, curve_k, curve_grid,
                          curve_summary, curve_out, threads);
    if (*cmd_bench) return run_bench(bench_sizes, bench_per_row, bench_k, bench_queries, bench_seed);
    std::cerr << app.help();
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
