#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "egem/error.hpp"
#include "egem/gem.hpp"
#include "egem/io.hpp"
#include "egem/metrics.hpp"
#include "egem/model_selection.hpp"
#include "egem/parallel.hpp"
#include "egem/rng.hpp"
#include "egem/simdata.hpp"
#include "egem/sparse_kmedian.hpp"

namespace {

using namespace egem;

constexpr int kExitUsage = 2;
constexpr int kExitFit = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidRange:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::LabelOutOfRange:
      return kExitUsage;
    default:
      return kExitFit;
  }
}

struct GlobalOptions {
  std::string config_path;
  std::optional<unsigned> threads;
};

struct FitOptions {
  std::string input, out, labels;
  std::optional<int> k, starts, max_outer;
  std::optional<std::uint64_t> seed;
};

struct SelectOptions {
  std::string input, out;
  int k_min = 2, k_max = 5, b = 20;
  std::optional<std::uint64_t> seed;
};

struct DesignOptions {
  std::string dist = "t5", scatter = "ar", means = "sparse";
  int p = 100, n = 300, k = 3, reps = 1;
  double delta = 1.5, rho = 0.5;
  std::uint64_t seed = 1;
};

struct ClassifyOptions {
  std::string model, input, labels;
};

void add_design_flags(CLI::App* cmd, DesignOptions& d) {
  cmd->add_option("--dist", d.dist, "gaussian | t5 | laplace | slash")->capture_default_str();
  cmd->add_option("--p", d.p, "dimension")->capture_default_str();
  cmd->add_option("--n", d.n, "observations per replicate")->capture_default_str();
  cmd->add_option("--k", d.k, "number of components (1-3)")->capture_default_str();
  cmd->add_option("--delta", d.delta, "signal strength")->capture_default_str();
  cmd->add_option("--scatter", d.scatter, "ar | cs")->capture_default_str();
  cmd->add_option("--rho", d.rho, "AR correlation")->capture_default_str();
  cmd->add_option("--means", d.means, "sparse | dense")->capture_default_str();
  cmd->add_option("--reps", d.reps, "replicates")->capture_default_str();
  cmd->add_option("--seed", d.seed, "base seed")->capture_default_str();
}

SimDesign design_for(const DesignOptions& o, int rep) {
  if (o.reps < 1) fail(ErrorCode::InvalidArgument, "--reps must be at least 1");
  SimDesign d;
  d.n = o.n;
  d.p = o.p;
  d.K = o.k;
  d.delta = o.delta;
  d.radial = parse_radial(o.dist);
  if (o.scatter == "ar") {
    d.scatter = {ScatterKind::AR, o.rho};
  } else if (o.scatter == "cs") {
    d.scatter = {ScatterKind::CS, 0.0};
  } else {
    fail(ErrorCode::InvalidArgument, "--scatter must be ar or cs");
  }
  if (o.means == "sparse") {
    d.mean_kind = MeanKind::Sparse;
  } else if (o.means == "dense") {
    d.mean_kind = MeanKind::DenseBlock;
  } else {
    fail(ErrorCode::InvalidArgument, "--means must be sparse or dense");
  }
  d.seed = derive_seed(o.seed, {static_cast<std::uint64_t>(rep)});
  d.validate();
  build_means(d.mean_kind, d.p, d.K, d.delta);
  return d;
}

GemConfig base_config(const GlobalOptions& g) {
  GemConfig cfg;
  if (!g.config_path.empty()) cfg = config_from_json(read_json(g.config_path), cfg);
  cfg.threads = g.threads ? *g.threads : default_thread_count();
  return cfg;
}

int cmd_fit(const GlobalOptions& g, const FitOptions& o) {
  GemConfig cfg = base_config(g);
  if (o.k) cfg.K = *o.k;
  if (o.seed) cfg.seed = *o.seed;
  if (o.starts) cfg.starts = *o.starts;
  if (o.max_outer) cfg.max_outer = *o.max_outer;
  cfg.validate();
  const CsvTable data = read_csv(o.input);
  const FitResult result = fit(data.values, cfg);
  const Json doc = fit_to_json(result, cfg);
  if (o.out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    write_json(o.out, doc);
  }
  if (!o.labels.empty()) write_labels(o.labels, result.labels);
  return 0;
}

int cmd_classify(const ClassifyOptions& o) {
  Json doc = read_json(o.model);
  if (doc.contains("model")) doc = doc.at("model");
  const ModelState model = model_from_json(doc);
  const CsvTable data = read_csv(o.input);
  const std::vector<int> labels = classify(data.values, model);
  if (o.labels.empty()) {
    for (int l : labels) std::cout << l + 1 << '\n';
  } else {
    write_labels(o.labels, labels);
  }
  return 0;
}

int cmd_select_k(const GlobalOptions& g, const SelectOptions& o) {
  GemConfig cfg = base_config(g);
  if (o.seed) cfg.seed = *o.seed;
  if (o.k_min < 1 || o.k_max < o.k_min) fail(ErrorCode::InvalidArgument, "need 1 <= --k-min <= --k-max");
  if (o.b < 2) fail(ErrorCode::InvalidArgument, "--b must be at least 2");
  std::vector<int> Ks;
  for (int k = o.k_min; k <= o.k_max; ++k) Ks.push_back(k);
  cfg.K = o.k_max;
  cfg.validate();
  const CsvTable data = read_csv(o.input);
  const Json doc = gap_to_json(select_k(data.values, Ks, o.b, cfg));
  if (o.out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    write_json(o.out, doc);
  }
  return 0;
}

int cmd_simulate(const DesignOptions& o, const std::string& out_dir) {
  if (o.reps < 1) fail(ErrorCode::InvalidArgument, "--reps must be at least 1");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create '" + out_dir + "': " + ec.message());
  for (int r = 0; r < o.reps; ++r) {
    const SimSample s = sample_mixture(design_for(o, r));
    const std::string suffix = o.reps == 1 ? "" : "_rep" + std::to_string(r + 1);
    std::vector<std::string> header;
    for (int j = 0; j < o.p; ++j) header.push_back("x" + std::to_string(j + 1));
    write_csv(out_dir + "/X" + suffix + ".csv", s.X, header);
    write_labels(out_dir + "/truth" + suffix + ".csv", s.labels);
  }
  return 0;
}

int cmd_benchmark(const GlobalOptions& g, const DesignOptions& o, const std::string& out) {
  GemConfig cfg = base_config(g);
  cfg.K = o.k;
  cfg.validate();
  if (o.reps < 1) fail(ErrorCode::InvalidArgument, "--reps must be at least 1");
  const std::vector<std::string> methods{"gem", "kmeans", "kmedian", "sparse_kmedian", "oracle"};
  for (int r = 0; r < o.reps; ++r) design_for(o, r);

  const auto reps = static_cast<std::size_t>(o.reps);
  std::vector<std::vector<double>> acc(reps), ari_v(reps);
  parallel_for(reps, cfg.threads, [&](std::size_t r) {
    const SimDesign d = design_for(o, static_cast<int>(r));
    const SimSample s = sample_mixture(d);
    GemConfig local = cfg;
    local.threads = 1;
    local.seed = derive_seed(cfg.seed, {0xBE, r});
    std::vector<std::vector<int>> labels;
    labels.push_back(fit(s.X, local).labels);
    labels.push_back(kmeans_baseline(s.X, d.K, 10, local.seed));
    labels.push_back(kmedian_baseline(s.X, d.K, 10, local.seed));
    labels.push_back(initialize(s.X, d.K, local.init, local.seed).labels);
    labels.push_back(oracle_classify(s.X, d));
    for (const auto& l : labels) {
      acc[r].push_back(accuracy(l, s.labels, d.K));
      ari_v[r].push_back(ari(l, s.labels));
    }
  });

  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) fail(ErrorCode::Io, "cannot open '" + out + "' for writing");
  }
  std::ostream& os = out.empty() ? std::cout : file;
  os << "replicate";
  for (const auto& m : methods) os << ',' << m << "_accuracy," << m << "_ari";
  os << '\n';
  std::vector<double> sum_acc(methods.size(), 0.0), sum_ari(methods.size(), 0.0);
  char buf[64];
  for (std::size_t r = 0; r < reps; ++r) {
    os << r + 1;
    for (std::size_t m = 0; m < methods.size(); ++m) {
      std::snprintf(buf, sizeof buf, ",%.6f,%.6f", acc[r][m], ari_v[r][m]);
      os << buf;
      sum_acc[m] += acc[r][m];
      sum_ari[m] += ari_v[r][m];
    }
    os << '\n';
  }
  os << "mean";
  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f", sum_acc[m] / o.reps, sum_ari[m] / o.reps);
    os << buf;
  }
  os << '\n';
  if (!os) fail(ErrorCode::Io, "write of benchmark output failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiparametric elliptical-mixture clustering"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--config", global.config_path, "JSON configuration file; flags take precedence");
  app.add_option("--threads", global.threads, "worker threads (default: ELLIPSE_GEM_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  FitOptions fit_opts;
  auto* fit_cmd = app.add_subcommand("fit", "fit the mixture to a CSV data matrix");
  fit_cmd->add_option("--input", fit_opts.input, "n x p CSV")->required();
  fit_cmd->add_option("--k", fit_opts.k, "number of clusters");
  fit_cmd->add_option("--seed", fit_opts.seed, "random seed");
  fit_cmd->add_option("--starts", fit_opts.starts, "outer random starts");
  fit_cmd->add_option("--max-outer", fit_opts.max_outer, "outer iteration cap");
  fit_cmd->add_option("--out", fit_opts.out, "result JSON (default: stdout)");
  fit_cmd->add_option("--labels", fit_opts.labels, "labels CSV");

  ClassifyOptions cls_opts;
  auto* cls_cmd = app.add_subcommand("classify", "label new observations with a fitted model");
  cls_cmd->add_option("--model", cls_opts.model, "result or model JSON")->required();
  cls_cmd->add_option("--input", cls_opts.input, "CSV to classify")->required();
  cls_cmd->add_option("--labels", cls_opts.labels, "labels CSV (default: stdout)");

  SelectOptions sel_opts;
  auto* sel_cmd = app.add_subcommand("select-k", "choose the number of clusters by the gap one-SE rule");
  sel_cmd->add_option("--input", sel_opts.input, "n x p CSV")->required();
  sel_cmd->add_option("--k-min", sel_opts.k_min)->capture_default_str();
  sel_cmd->add_option("--k-max", sel_opts.k_max)->capture_default_str();
  sel_cmd->add_option("--b", sel_opts.b, "permutation reference samples")->capture_default_str();
  sel_cmd->add_option("--seed", sel_opts.seed, "random seed");
  sel_cmd->add_option("--out", sel_opts.out, "gap table JSON (default: stdout)");

  DesignOptions sim_opts;
  std::string sim_dir = ".";
  auto* sim_cmd = app.add_subcommand("simulate", "draw synthetic elliptical mixtures");
  add_design_flags(sim_cmd, sim_opts);
  sim_cmd->add_option("--out-dir", sim_dir, "directory for X.csv and truth.csv")->capture_default_str();

  DesignOptions bench_opts;
  bench_opts.reps = 20;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("benchmark", "compare methods over simulated replicates");
  add_design_flags(bench_cmd, bench_opts);
  bench_cmd->add_option("--out", bench_out, "per-replicate CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(global, fit_opts);
    if (*cls_cmd) return cmd_classify(cls_opts);
    if (*sel_cmd) return cmd_select_k(global, sel_opts);
    if (*sim_cmd) return cmd_simulate(sim_opts, sim_dir);
    if (*bench_cmd) return cmd_benchmark(global, bench_opts, bench_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFit;
  }
  return kExitUsage;
}
