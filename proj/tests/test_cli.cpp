// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "divdpp/cli.hpp"
#include "divdpp/csv.hpp"
#include "divdpp/greedy_map.hpp"
#include "divdpp/lensemble.hpp"

namespace fs = std::filesystem;
using divdpp::IndexList;
using divdpp::Matrix;
using divdpp::Vector;
using divdpp::cli::run_cli;

namespace {

fs::path test_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("divdpp_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path_of(const std::string& name) {
  return (test_dir() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> read_keyed(const std::string& path) {
  std::map<std::string, std::string> out;
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (const char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"no-such-command"}) == 2);
  CHECK(run_cli({"map"}) == 2);                   // missing required flags
  CHECK(run_cli({"sample", "--bogus", "1"}) == 2);
}

TEST_CASE("help exits with code 0") {
  CHECK(run_cli({"--help"}) == 0);
  CHECK(run_cli({"map", "--help"}) == 0);
}

TEST_CASE("domain errors exit with code 1") {
  CHECK(run_cli({"sample", "--l", path_of("missing.csv")}) == 1);
  // subset size out of range
  write_file(path_of("small.csv"), "1,0\n0,1\n");
  CHECK(run_cli({"map", "--l", path_of("small.csv"), "--t", "5"}) == 1);
}

TEST_CASE("lmatrix builds the kernel from features and attention") {
  write_file(path_of("features.csv"), "1,0\n1,0\n0,1\n");
  write_file(path_of("attention.csv"), "0.2,0.3,0.5\n0.4,0.4,0.2\n");
  const std::string out = path_of("l.csv");
  CHECK(run_cli({"lmatrix", "--features", path_of("features.csv"),
                 "--attention", path_of("attention.csv"), "--output",
                 out}) == 0);
  const Matrix l = divdpp::csv::read_matrix_file(out);
  const Matrix features = divdpp::csv::read_matrix_file(
      path_of("features.csv"));
  const Matrix attention = divdpp::csv::read_matrix_file(
      path_of("attention.csv"));
  const Matrix expected = divdpp::lensemble::build_l(
      divdpp::lensemble::quality_from_attention({attention}),
      divdpp::lensemble::similarity_from_features(features));
  CHECK((l - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sample is deterministic in the seed") {
  write_file(path_of("diag.csv"), "1,0,0\n0,1,0\n0,0,1\n");
  const std::string out_a = path_of("samples_a.txt");
  const std::string out_b = path_of("samples_b.txt");
  CHECK(run_cli({"sample", "--l", path_of("diag.csv"), "--repeats", "50",
                 "--seed", "7", "--output", out_a}) == 0);
  CHECK(run_cli({"sample", "--l", path_of("diag.csv"), "--repeats", "50",
                 "--seed", "7", "--output", out_b}) == 0);
  CHECK(read_file(out_a) == read_file(out_b));
  CHECK(count_lines(read_file(out_a)) == 50);

  const std::string out_c = path_of("samples_c.txt");
  CHECK(run_cli({"sample", "--l", path_of("diag.csv"), "--repeats", "50",
                 "--seed", "8", "--output", out_c}) == 0);
  CHECK(read_file(out_a) != read_file(out_c));
}

TEST_CASE("map on a single kernel reproduces fgm_inference") {
  Matrix l(3, 3);
  l << 1.0, 0.9, 0.0,
       0.9, 1.0, 0.0,
       0.0, 0.0, 0.5;
  divdpp::csv::write_matrix_file(path_of("map_l.csv"), l);
  const std::string out = path_of("map_out.txt");
  const std::string gains = path_of("map_gains.csv");
  CHECK(run_cli({"map", "--l", path_of("map_l.csv"), "--t", "3", "--output",
                 out, "--gains", gains}) == 0);
  CHECK(read_file(out) == "0,2,1\n");
  CHECK(count_lines(read_file(gains)) == 1);
}

TEST_CASE("map on a directory processes a sorted batch") {
  const fs::path dir = test_dir() / "batch";
  fs::create_directories(dir);
  Matrix a = Matrix::Identity(4, 4);
  Matrix b = Matrix::Identity(4, 4);
  b(0, 0) = 2.0;
  divdpp::csv::write_matrix_file((dir / "a.csv").string(), a);
  divdpp::csv::write_matrix_file((dir / "b.csv").string(), b);
  const std::string out = path_of("batch_out.txt");
  CHECK(run_cli({"map", "--l", dir.string(), "--t", "2", "--output", out}) ==
        0);
  const std::string text = read_file(out);
  CHECK(count_lines(text) == 2);
  // second kernel must pick its boosted diagonal first
  CHECK(text.substr(text.find('\n') + 1, 1) == "0");
}

TEST_CASE("qdscore reports the normalized determinant score") {
  write_file(path_of("qd_l.csv"), "1,1\n1,4\n");
  const std::string out = path_of("qd_out.txt");
  CHECK(run_cli({"qdscore", "--l", path_of("qd_l.csv"), "--subset", "0,1",
                 "--output", out}) == 0);
  const auto keyed = read_keyed(out);
  CHECK(std::stod(keyed.at("qd_score")) == doctest::Approx(1.0 / 3.0));
  CHECK(std::stod(keyed.at("macro_qd_loss")) ==
        doctest::Approx(std::log(3.0)));
  CHECK(keyed.at("subset") == "0;1");
}

TEST_CASE("reweight produces a report and curves") {
  const std::string out = path_of("reweight_out.txt");
  const std::string curves = path_of("reweight_curves.csv");
  CHECK(run_cli({"reweight", "--t", "120", "--k", "8", "--seed", "5",
                 "--output", out, "--curves", curves}) == 0);
  const auto keyed = read_keyed(out);
  CHECK(keyed.count("kl_quality") == 1);
  CHECK(keyed.count("kl_dpp") == 1);
  CHECK(keyed.count("peaks_dpp") == 1);
  CHECK(std::stod(keyed.at("kl_dpp")) >= 0.0);
  const std::string curve_text = read_file(curves);
  CHECK(count_lines(curve_text) == 121);  // header + one row per position
  CHECK(curve_text.rfind("position,original,quality_only,dpp\n", 0) == 0);
}

TEST_CASE("reweight is deterministic in the seed") {
  const std::string a = path_of("rw_a.txt");
  const std::string b = path_of("rw_b.txt");
  CHECK(run_cli({"reweight", "--t", "100", "--k", "6", "--seed", "11",
                 "--output", a}) == 0);
  CHECK(run_cli({"reweight", "--t", "100", "--k", "6", "--seed", "11",
                 "--output", b}) == 0);
  CHECK(read_file(a) == read_file(b));
}

TEST_CASE("train-toy writes a trajectory") {
  const std::string out = path_of("train_out.txt");
  const std::string traj = path_of("train_traj.csv");
  CHECK(run_cli({"train-toy", "--regularizer", "micro", "--steps", "12",
                 "--t", "60", "--seed", "3", "--output", out,
                 "--trajectory", traj}) == 0);
  const auto keyed = read_keyed(out);
  CHECK(keyed.at("regularizer") == "micro");
  CHECK(std::stod(keyed.at("gamma")) == doctest::Approx(0.7));
  CHECK(std::stod(keyed.at("steps")) == doctest::Approx(12));
  const std::string traj_text = read_file(traj);
  CHECK(count_lines(traj_text) == 13);  // header + 12 steps
  CHECK(traj_text.rfind("step,total,task,reg,entropy,qdscore\n", 0) == 0);

  // macro default gamma
  CHECK(run_cli({"train-toy", "--regularizer", "macro", "--steps", "5",
                 "--t", "60", "--output", out}) == 0);
  CHECK(std::stod(read_keyed(out).at("gamma")) == doctest::Approx(0.6));

  // unknown regularizer is a domain error
  CHECK(run_cli({"train-toy", "--regularizer", "banana", "--steps", "5",
                 "--t", "60"}) == 1);
}

TEST_CASE("metrics scores a JSONL corpus") {
  const std::string corpus = path_of("corpus.jsonl");
  write_file(
      corpus,
      R"({"id": "a", "article": "The cat sat. Dogs bark.", "summary": "The cat sat.", "generated": "The cat sat."})"
      "\n"
      R"({"id": "b", "article": "Alpha beta. Gamma delta.", "summary": "Alpha beta.", "generated": "Novel words entirely."})"
      "\n"
      R"({"id": "c", "article": "Plain text.", "summary": "Plain."})"
      "\n"
      "not json at all\n");
  const std::string out = path_of("metrics_out.txt");
  const std::string per_doc = path_of("metrics_per_doc.csv");
  CHECK(run_cli({"metrics", "--input", corpus, "--output", out, "--per-doc",
                 per_doc}) == 0);
  const auto keyed = read_keyed(out);
  CHECK(std::stod(keyed.at("documents")) == doctest::Approx(2));
  CHECK(std::stod(keyed.at("skipped")) == doctest::Approx(1));
  CHECK(std::stod(keyed.at("parse_errors")) == doctest::Approx(1));
  CHECK(std::stod(keyed.at("js")) == doctest::Approx(0.5));   // (1 + 0) / 2
  CHECK(std::stod(keyed.at("novel")) == doctest::Approx(0.5));
  CHECK(count_lines(read_file(per_doc)) == 3);  // header + 2 documents
}

TEST_CASE("bench emits one CSV row per method and size") {
  const std::string out = path_of("bench_out.csv");
  CHECK(run_cli({"bench", "--sizes", "24,32", "--batch", "3", "--t", "4",
                 "--repeats", "3", "--seed", "2", "--output", out}) == 0);
  const std::string text = read_file(out);
  CHECK(count_lines(text) == 7);  // header + 2 sizes x 3 methods
  CHECK(text.rfind("method,size,batch,t,wall_seconds,repeats\n", 0) == 0);
  CHECK(text.find("classic,24,3,4,") != std::string::npos);
  CHECK(text.find("bfgm,32,3,4,") != std::string::npos);

  // the memory guard refuses oversized batches
  CHECK(run_cli({"bench", "--sizes", "1024", "--batch", "100", "--t", "4",
                 "--repeats", "3", "--budget-mb", "10"}) == 1);
}
