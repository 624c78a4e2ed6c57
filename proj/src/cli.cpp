// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "divdpp/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "divdpp/bench.hpp"
#include "divdpp/csv.hpp"
#include "divdpp/errors.hpp"
#include "divdpp/greedy_map.hpp"
#include "divdpp/lensemble.hpp"
#include "divdpp/numerics.hpp"
#include "divdpp/random_source.hpp"
#include "divdpp/regularizers.hpp"
#include "divdpp/sampling.hpp"
#include "divdpp/summetrics.hpp"
#include "divdpp/toy_attention.hpp"

namespace divdpp::cli {

namespace {

// Fixed stream ids so every subsystem gets an independent deterministic
// stream out of the single --seed flag.
enum Stream : std::uint64_t {
  kStreamScene = 1,
  kStreamSample = 2,
  kStreamTrain = 3,
  kStreamBench = 4,
};

// Writes to the given file, or to stdout when the path is empty.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string join_indices(const IndexList& indices, char sep) {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(indices[i]);
  }
  return out;
}

void print_keyed(std::ostream& out, const std::string& key, double value) {
  out << key << '='
      << std::setprecision(std::numeric_limits<double>::max_digits10)
      << value << '\n';
}

void print_keyed(std::ostream& out, const std::string& key,
                 const std::string& value) {
  out << key << '=' << value << '\n';
}

std::vector<Index> parse_sizes(const std::string& text) {
  std::vector<Index> sizes;
  for (const Index v : csv::parse_index_list(text)) sizes.push_back(v);
  return sizes;
}

int cmd_lmatrix(const std::string& features_path,
                const std::vector<std::string>& attention_paths,
                const std::string& output_path) {
  const Matrix features = csv::read_matrix_file(features_path);
  std::vector<Matrix> layers;
  layers.reserve(attention_paths.size());
  for (const std::string& path : attention_paths) {
    layers.push_back(csv::read_matrix_file(path));
  }
  const Vector quality = lensemble::quality_from_attention(layers);
  const Matrix similarity = lensemble::similarity_from_features(features);
  const Matrix l = lensemble::build_l(quality, similarity);
  OutputTarget out(output_path);
  csv::write_matrix(out.stream(), l);
  return 0;
}

int cmd_sample(const std::string& l_path, int repeats, std::uint64_t seed,
               const std::string& output_path) {
  if (repeats < 1) throw ValueError("sample: --repeats must be >= 1");
  const Matrix l = csv::read_matrix_file(l_path);
  RandomSource root(seed);
  RandomSource rng = root.fork(kStreamSample);
  OutputTarget out(output_path);
  for (int r = 0; r < repeats; ++r) {
    out.stream() << csv::format_index_list(sampling::exact_sample(l, rng))
                 << '\n';
  }
  return 0;
}

int cmd_map(const std::string& l_path, Index subset_size, int threads,
            const std::string& output_path, const std::string& gains_path) {
  OutputTarget out(output_path);
  std::ofstream gains_file;
  if (!gains_path.empty()) {
    gains_file.open(gains_path);
    if (!gains_file) {
      throw Error("cannot open '" + gains_path + "' for writing");
    }
    gains_file << std::setprecision(
        std::numeric_limits<double>::max_digits10);
  }
  const auto emit = [&](const greedy::FgmResult& result) {
    out.stream() << csv::format_index_list(result.selected) << '\n';
    if (gains_file.is_open()) {
      for (std::size_t i = 0; i < result.log_gains.size(); ++i) {
        if (i) gains_file << ',';
        gains_file << result.log_gains[i];
      }
      gains_file << '\n';
    }
    if (result.early_stop) {
      std::cerr << "note: gain floor reached after "
                << result.selected.size() << " items\n";
    }
  };

  if (std::filesystem::is_directory(l_path)) {
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(l_path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        paths.push_back(entry.path());
      }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) {
      throw EmptyInputError("map: no .csv files in '" + l_path + "'");
    }
    std::vector<Matrix> batch;
    batch.reserve(paths.size());
    for (const auto& path : paths) {
      batch.push_back(csv::read_matrix_file(path.string()));
    }
    const auto items = greedy::bfgm_inference(batch, subset_size, threads);
    for (std::size_t b = 0; b < items.size(); ++b) {
      if (items[b].failed) {
        std::cerr << "error in " << paths[b].string() << ": "
                  << items[b].error << '\n';
        out.stream() << '\n';
        continue;
      }
      emit(items[b].result);
    }
    return 0;
  }

  const Matrix l = csv::read_matrix_file(l_path);
  emit(greedy::fgm_inference(l, subset_size));
  return 0;
}

int cmd_qdscore(const std::string& l_path, const std::string& subset_text,
                const std::string& output_path) {
  const Matrix l = csv::read_matrix_file(l_path);
  IndexList subset = csv::parse_index_list(subset_text);
  std::sort(subset.begin(), subset.end());
  OutputTarget out(output_path);
  print_keyed(out.stream(), "subset", join_indices(subset, ';'));
  print_keyed(out.stream(), "subset_size",
              static_cast<double>(subset.size()));
  print_keyed(out.stream(), "qd_score", lensemble::qd_score(l, subset));
  if (!subset.empty()) {
    print_keyed(out.stream(), "macro_qd_loss",
                losses::macro_qd_loss(l, subset));
  }
  return 0;
}

int cmd_reweight(Index t_total, int n_peaks, Index k, double sigma,
                 std::uint64_t seed, const std::string& output_path,
                 const std::string& curves_path) {
  RandomSource root(seed);
  RandomSource rng = root.fork(kStreamScene);
  const toy::Scene scene = toy::simulate_attention(t_total, n_peaks, rng);
  const toy::ReweightOutcome outcome =
      toy::reweight_compare(scene, k, sigma);

  OutputTarget out(output_path);
  std::ostream& os = out.stream();
  print_keyed(os, "t_total", static_cast<double>(t_total));
  print_keyed(os, "k", static_cast<double>(k));
  print_keyed(os, "peaks_original", toy::count_peaks(scene.attention));
  print_keyed(os, "points_quality",
              join_indices(outcome.quality_only.points, ';'));
  print_keyed(os, "points_dpp", join_indices(outcome.dpp.points, ';'));
  print_keyed(os, "kl_quality", outcome.quality_only.kl);
  print_keyed(os, "kl_dpp", outcome.dpp.kl);
  print_keyed(os, "peaks_quality", outcome.quality_only.peaks);
  print_keyed(os, "peaks_dpp", outcome.dpp.peaks);

  if (!curves_path.empty()) {
    std::ofstream curves(curves_path);
    if (!curves) {
      throw Error("cannot open '" + curves_path + "' for writing");
    }
    curves << "position,original,quality_only,dpp\n"
           << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Index x = 0; x < t_total; ++x) {
      curves << x << ',' << scene.attention(x) << ','
             << outcome.quality_only.reweighted(x) << ','
             << outcome.dpp.reweighted(x) << '\n';
    }
  }
  return 0;
}

int cmd_train_toy(const std::string& reg_name, double gamma, bool gamma_set,
                  int steps, double lr, double sigma, Index t_total,
                  const std::string& scene_kind, int n_peaks,
                  std::uint64_t seed, const std::string& output_path,
                  const std::string& traj_path) {
  toy::TrainConfig config;
  if (reg_name == "macro") {
    config.reg = toy::Regularizer::kMacro;
    config.gamma = losses::kMacroGamma;
  } else if (reg_name == "micro") {
    config.reg = toy::Regularizer::kMicro;
    config.gamma = losses::kMicroGamma;
  } else {
    throw ValueError("train-toy: unknown regularizer '" + reg_name +
                     "', expected macro or micro");
  }
  if (gamma_set) config.gamma = gamma;
  config.steps = steps;
  config.learning_rate = lr;
  config.sigma = sigma;

  RandomSource root(seed);
  RandomSource scene_rng = root.fork(kStreamScene);
  toy::Scene scene;
  if (scene_kind == "degenerate") {
    scene = toy::degenerate_scene(t_total, scene_rng);
  } else if (scene_kind == "peaks") {
    scene = toy::simulate_attention(t_total, n_peaks, scene_rng);
  } else {
    throw ValueError("train-toy: unknown scene '" + scene_kind +
                     "', expected degenerate or peaks");
  }

  RandomSource train_rng = root.fork(kStreamTrain);
  const std::vector<toy::TrainStep> trajectory =
      toy::train_toy(scene, config, train_rng);

  if (!traj_path.empty()) {
    std::ofstream traj(traj_path);
    if (!traj) throw Error("cannot open '" + traj_path + "' for writing");
    traj << "step,total,task,reg,entropy,qdscore\n"
         << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const toy::TrainStep& s : trajectory) {
      traj << s.step << ',' << s.total << ',' << s.task << ',' << s.reg
           << ',' << s.entropy << ',' << s.qd_score << '\n';
    }
  }

  OutputTarget out(output_path);
  std::ostream& os = out.stream();
  print_keyed(os, "regularizer", reg_name);
  print_keyed(os, "gamma", config.gamma);
  print_keyed(os, "steps", static_cast<double>(trajectory.size()));
  print_keyed(os, "initial_total", trajectory.front().total);
  print_keyed(os, "final_total", trajectory.back().total);
  print_keyed(os, "initial_entropy", trajectory.front().entropy);
  print_keyed(os, "final_entropy", trajectory.back().entropy);
  print_keyed(os, "initial_qdscore", trajectory.front().qd_score);
  print_keyed(os, "final_qdscore", trajectory.back().qd_score);
  return 0;
}

int cmd_metrics(const std::string& input_path, const std::string& output_path,
                const std::string& per_doc_path) {
  std::ifstream in(input_path);
  if (!in) throw Error("cannot open '" + input_path + "'");
  int parse_errors = 0;
  const auto records = metrics::read_jsonl(in, &parse_errors);
  metrics::CorpusReport report = metrics::corpus_report(records);
  report.parse_errors = parse_errors;

  OutputTarget out(output_path);
  std::ostream& os = out.stream();
  print_keyed(os, "js", report.js);
  print_keyed(os, "sc", report.sc);
  print_keyed(os, "novel", report.novel);
  print_keyed(os, "documents", static_cast<double>(report.documents));
  print_keyed(os, "skipped", static_cast<double>(report.skipped));
  print_keyed(os, "parse_errors", static_cast<double>(report.parse_errors));

  if (!per_doc_path.empty()) {
    std::ofstream per_doc(per_doc_path);
    if (!per_doc) {
      throw Error("cannot open '" + per_doc_path + "' for writing");
    }
    per_doc << "id,gold_js,js,sc,novel\n"
            << std::setprecision(
                   std::numeric_limits<double>::max_digits10);
    for (const metrics::DocumentScores& d : report.per_document) {
      per_doc << d.id << ',' << d.gold_js << ',' << d.js << ',' << d.sc
              << ',' << d.novel << '\n';
    }
  }
  return 0;
}

int cmd_bench(const std::string& sizes_text, int batch, int t, int repeats,
              int threads, double budget_mb, std::uint64_t seed,
              const std::string& output_path) {
  bench::BenchConfig config;
  config.sizes = parse_sizes(sizes_text);
  config.batch = batch;
  config.t = t;
  config.repeats = repeats;
  config.threads = threads;
  config.budget_mb = budget_mb;
  RandomSource root(seed);
  RandomSource rng = root.fork(kStreamBench);
  const auto records = bench::bench_speed(config, rng);
  OutputTarget out(output_path);
  out.stream() << "method,size,batch,t,wall_seconds,repeats\n"
               << bench::to_csv(records);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{
      "determinantal quality-diversity subset selection over attention "
      "distributions"};
  app.require_subcommand(1);

  // lmatrix
  auto* lmatrix = app.add_subcommand(
      "lmatrix", "Build an L-ensemble kernel from features and attention");
  std::string lm_features, lm_output;
  std::vector<std::string> lm_attention;
  lmatrix->add_option("--features", lm_features, "feature matrix CSV (T x C)")
      ->required();
  lmatrix
      ->add_option("--attention", lm_attention,
                   "attention map CSV (steps x T); repeat per layer")
      ->required();
  lmatrix->add_option("--output", lm_output, "output CSV (default stdout)");

  // sample
  auto* sample = app.add_subcommand(
      "sample", "Draw exact samples from an L-ensemble");
  std::string sm_l, sm_output;
  int sm_repeats = 1;
  std::uint64_t sm_seed = 42;
  sample->add_option("--l", sm_l, "kernel CSV")->required();
  sample->add_option("--repeats", sm_repeats, "number of draws");
  sample->add_option("--seed", sm_seed, "random seed");
  sample->add_option("--output", sm_output, "output file (default stdout)");

  // map
  auto* map = app.add_subcommand(
      "map", "Greedy MAP subset inference (file or directory batch)");
  std::string mp_l, mp_output, mp_gains;
  Index mp_t = 0;
  int mp_threads = 1;
  map->add_option("--l", mp_l, "kernel CSV, or a directory of kernel CSVs")
      ->required();
  map->add_option("--t", mp_t, "subset size")->required();
  map->add_option("--threads", mp_threads, "worker threads for batches");
  map->add_option("--output", mp_output, "subset output (default stdout)");
  map->add_option("--gains", mp_gains, "optional per-step log-gain CSV");

  // qdscore
  auto* qdscore = app.add_subcommand(
      "qdscore", "Normalized determinant score of a subset");
  std::string qd_l, qd_subset, qd_output;
  qdscore->add_option("--l", qd_l, "kernel CSV")->required();
  qdscore->add_option("--subset", qd_subset, "comma-separated indices")
      ->required();
  qdscore->add_option("--output", qd_output, "output file (default stdout)");

  // reweight
  auto* reweight = app.add_subcommand(
      "reweight", "Compare quality-only and determinant-based reweighting");
  Index rw_t = 200, rw_k = 12;
  int rw_peaks = 3;
  double rw_sigma = losses::kDefaultSigma;
  std::uint64_t rw_seed = 42;
  std::string rw_output, rw_curves;
  reweight->add_option("--t", rw_t, "scene length");
  reweight->add_option("--k", rw_k, "anchors to select");
  reweight->add_option("--n-peaks", rw_peaks, "peaks in the scene");
  reweight->add_option("--sigma", rw_sigma, "reweighting Gaussian width");
  reweight->add_option("--seed", rw_seed, "random seed");
  reweight->add_option("--output", rw_output, "report file (default stdout)");
  reweight->add_option("--curves", rw_curves, "optional curve CSV");

  // train-toy
  auto* train = app.add_subcommand(
      "train-toy", "Gradient-descent toy attention diversification");
  std::string tt_reg = "macro", tt_scene = "degenerate", tt_output,
              tt_traj;
  double tt_gamma = -1.0, tt_lr = 0.05, tt_sigma = losses::kDefaultSigma;
  int tt_steps = 500, tt_peaks = 3;
  Index tt_t = 200;
  std::uint64_t tt_seed = 42;
  train->add_option("--regularizer", tt_reg, "macro or micro");
  auto* gamma_opt = train->add_option(
      "--gamma", tt_gamma, "task-loss weight (defaults per regularizer)");
  train->add_option("--steps", tt_steps, "gradient steps");
  train->add_option("--lr", tt_lr, "learning rate");
  train->add_option("--sigma", tt_sigma, "ideal-distribution width");
  train->add_option("--t", tt_t, "scene length");
  train->add_option("--scene", tt_scene, "degenerate or peaks");
  train->add_option("--n-peaks", tt_peaks, "peaks for the peaks scene");
  train->add_option("--seed", tt_seed, "random seed");
  train->add_option("--output", tt_output, "summary file (default stdout)");
  train->add_option("--trajectory", tt_traj, "per-step CSV");

  // metrics
  auto* metrics_cmd = app.add_subcommand(
      "metrics", "Summarization metrics over a JSONL corpus");
  std::string mt_input, mt_output, mt_per_doc;
  metrics_cmd->add_option("--input", mt_input, "JSONL corpus")->required();
  metrics_cmd->add_option("--output", mt_output,
                          "report file (default stdout)");
  metrics_cmd->add_option("--per-doc", mt_per_doc,
                          "optional per-document CSV");

  // bench
  auto* bench_cmd = app.add_subcommand(
      "bench", "Wall-clock comparison of sampling and greedy inference");
  std::string bn_sizes = "64,128,256,512,1024", bn_output;
  int bn_batch = 100, bn_t = 20, bn_repeats = 5, bn_threads = 1;
  double bn_budget = 2048.0;
  std::uint64_t bn_seed = 42;
  bench_cmd->add_option("--sizes", bn_sizes, "comma-separated kernel sizes");
  bench_cmd->add_option("--batch", bn_batch, "kernels per size");
  bench_cmd->add_option("--t", bn_t, "subset size");
  bench_cmd->add_option("--repeats", bn_repeats, "timing repeats (median)");
  bench_cmd->add_option("--threads", bn_threads,
                        "adds a parallel batched run when > 1");
  bench_cmd->add_option("--budget-mb", bn_budget, "batch memory budget");
  bench_cmd->add_option("--seed", bn_seed, "random seed");
  bench_cmd->add_option("--output", bn_output, "CSV file (default stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("divdpp");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (*lmatrix) return cmd_lmatrix(lm_features, lm_attention, lm_output);
    if (*sample) return cmd_sample(sm_l, sm_repeats, sm_seed, sm_output);
    if (*map) return cmd_map(mp_l, mp_t, mp_threads, mp_output, mp_gains);
    if (*qdscore) return cmd_qdscore(qd_l, qd_subset, qd_output);
    if (*reweight) {
      return cmd_reweight(rw_t, rw_peaks, rw_k, rw_sigma, rw_seed, rw_output,
                          rw_curves);
    }
    if (*train) {
      return cmd_train_toy(tt_reg, tt_gamma, gamma_opt->count() > 0,
                           tt_steps, tt_lr, tt_sigma, tt_t, tt_scene,
                           tt_peaks, tt_seed, tt_output, tt_traj);
    }
    if (*metrics_cmd) return cmd_metrics(mt_input, mt_output, mt_per_doc);
    if (*bench_cmd) {
      return cmd_bench(bn_sizes, bn_batch, bn_t, bn_repeats, bn_threads,
                       bn_budget, bn_seed, bn_output);
    }
    return 2;  // unreachable: a subcommand is required
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, returns 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace divdpp::cli
