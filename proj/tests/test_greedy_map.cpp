// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "divdpp/errors.hpp"
#include "divdpp/greedy_map.hpp"
#include "divdpp/sampling.hpp"
#include "oracles.hpp"

using divdpp::DimensionError;
using divdpp::Index;
using divdpp::IndexList;
using divdpp::Matrix;
using divdpp::NotPsdError;
using divdpp::ValueError;
using divdpp::Vector;
namespace greedy = divdpp::greedy;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

TEST_CASE("fgm_inference hand-traced example") {
  Matrix l(3, 3);
  l << 1.0, 0.9, 0.0,
       0.9, 1.0, 0.0,
       0.0, 0.0, 0.5;
  // initial gains are the diagonal [1, 1, 0.5]; the 1-1 tie goes to index
  // 0; the update leaves gains [-, 0.19, 0.5], so index 2 is next.
  const auto result = greedy::fgm_inference(l, 3);
  CHECK(result.selected == IndexList{0, 2, 1});
  CHECK_FALSE(result.early_stop);
  REQUIRE(result.log_gains.size() == 3);
  CHECK(result.log_gains[0] == doctest::Approx(std::log(1.0)));
  CHECK(result.log_gains[1] == doctest::Approx(std::log(0.5)));
  CHECK(result.log_gains[2] == doctest::Approx(std::log(0.19)));
}

TEST_CASE("fgm_inference equals from-scratch greedy on random instances") {
  std::mt19937_64 gen(73);
  std::uniform_int_distribution<int> size_dist(2, 32);
  for (int trial = 0; trial < 100; ++trial) {
    const Index t = size_dist(gen);
    const Matrix l = oracles::random_psd(gen, t, 0.01);
    std::uniform_int_distribution<int> k_dist(
        1, static_cast<int>(std::min<Index>(t, 8)));
    const Index k = k_dist(gen);
    const auto fast = greedy::fgm_inference(l, k);
    const auto naive = oracles::naive_greedy(l, k);
    CHECK(fast.selected == naive.selected);
    CHECK(fast.early_stop == naive.early_stop);
    REQUIRE(fast.log_gains.size() == naive.log_gains.size());
    for (std::size_t i = 0; i < fast.log_gains.size(); ++i) {
      CHECK(fast.log_gains[i] ==
            doctest::Approx(naive.log_gains[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("fgm_inference gains reproduce subset determinants") {
  std::mt19937_64 gen(79);
  for (int trial = 0; trial < 40; ++trial) {
    const Matrix l = oracles::random_psd(gen, 10, 0.05);
    const auto result = greedy::fgm_inference(l, 5);
    double log_det = 0.0;
    IndexList prefix;
    for (std::size_t i = 0; i < result.selected.size(); ++i) {
      log_det += result.log_gains[i];
      prefix.push_back(result.selected[i]);
      IndexList sorted = prefix;
      std::sort(sorted.begin(), sorted.end());
      const double direct =
          std::log(oracles::det_lu(oracles::submatrix(l, sorted)));
      CHECK(log_det == doctest::Approx(direct).epsilon(1e-6));
    }
    // greedy gains never increase (submodularity)
    for (std::size_t i = 1; i < result.log_gains.size(); ++i) {
      CHECK(result.log_gains[i] <= result.log_gains[i - 1] + 1e-9);
    }
  }
}

TEST_CASE("fgm_inference early stop on rank-deficient kernels") {
  std::mt19937_64 gen(83);
  // rank-2 kernel: a a^T + b b^T
  const Matrix a = oracles::random_gaussian(gen, 6, 2);
  const Matrix l = a * a.transpose();
  const auto result = greedy::fgm_inference(l, 5);
  CHECK(result.early_stop);
  CHECK(result.selected.size() <= 2);
  CHECK(result.selected.size() >= 1);

  const auto zero = greedy::fgm_inference(Matrix::Zero(4, 4), 2);
  CHECK(zero.early_stop);
  CHECK(zero.selected.empty());

  const auto full = greedy::fgm_inference(Matrix::Identity(3, 3), 3);
  CHECK_FALSE(full.early_stop);
  CHECK(full.selected.size() == 3);
}

TEST_CASE("fgm_inference achieves at least 0.6x the exhaustive optimum") {
  std::mt19937_64 gen(89);
  std::uniform_int_distribution<int> size_dist(4, 12);
  std::uniform_int_distribution<int> k_dist(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const Index t = size_dist(gen);
    const Index k = std::min<Index>(k_dist(gen), t);
    const Matrix l = oracles::random_psd(gen, t, 0.05);
    const auto result = greedy::fgm_inference(l, k);
    REQUIRE_FALSE(result.early_stop);
    IndexList greedy_set = result.selected;
    std::sort(greedy_set.begin(), greedy_set.end());
    const double greedy_det =
        oracles::det_lu(oracles::submatrix(l, greedy_set));
    const IndexList best = oracles::enumerate_map(l, k);
    const double best_det = oracles::det_lu(oracles::submatrix(l, best));
    CHECK(greedy_det >= 0.6 * best_det);
    CHECK(greedy_det <= best_det * (1.0 + 1e-9));
  }
}

TEST_CASE("fgm_inference validation") {
  CHECK_THROWS_AS(greedy::fgm_inference(Matrix::Identity(3, 3), 0),
                  ValueError);
  CHECK_THROWS_AS(greedy::fgm_inference(Matrix::Identity(3, 3), 4),
                  ValueError);
  CHECK_THROWS_AS(greedy::fgm_inference(Matrix::Ones(2, 3), 1),
                  DimensionError);
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  CHECK_THROWS_AS(greedy::fgm_inference(neg, 1), NotPsdError);
  // indefinite but with a clean diagonal: the elimination step drives a
  // gain to -3, far past roundoff, and that certifies the input
  Matrix indef(2, 2);
  indef << 1.0, 2.0,
           2.0, 1.0;
  CHECK_THROWS_AS(greedy::fgm_inference(indef, 2), NotPsdError);
}

TEST_CASE("bfgm_inference equals per-item fgm bit for bit") {
  std::mt19937_64 gen(97);
  std::vector<Matrix> batch;
  for (int b = 0; b < 16; ++b) {
    batch.push_back(oracles::random_psd(gen, 24, 0.01));
  }
  const auto items = greedy::bfgm_inference(batch, 6);
  REQUIRE(items.size() == batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    REQUIRE_FALSE(items[b].failed);
    const auto solo = greedy::fgm_inference(batch[b], 6);
    CHECK(items[b].result.selected == solo.selected);
    CHECK(items[b].result.early_stop == solo.early_stop);
  }
}

TEST_CASE("bfgm_inference handles early-stopping items in a batch") {
  std::mt19937_64 gen(101);
  std::vector<Matrix> batch;
  batch.push_back(oracles::random_psd(gen, 12, 0.05));
  const Matrix a = oracles::random_gaussian(gen, 12, 2);
  batch.push_back(a * a.transpose());  // rank 2: stops early
  batch.push_back(Matrix::Zero(12, 12));
  const auto items = greedy::bfgm_inference(batch, 6);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    REQUIRE_FALSE(items[b].failed);
    const auto solo = greedy::fgm_inference(batch[b], 6);
    CHECK(items[b].result.selected == solo.selected);
    CHECK(items[b].result.early_stop == solo.early_stop);
    REQUIRE(items[b].result.log_gains.size() == solo.log_gains.size());
    for (std::size_t i = 0; i < solo.log_gains.size(); ++i) {
      CHECK(items[b].result.log_gains[i] ==
            doctest::Approx(solo.log_gains[i]).epsilon(1e-9));
    }
  }
  CHECK(items[1].result.early_stop);
  CHECK(items[2].result.selected.empty());
}

TEST_CASE("bfgm_inference per-item failures do not abort siblings") {
  std::mt19937_64 gen(103);
  std::vector<Matrix> batch;
  batch.push_back(oracles::random_psd(gen, 8, 0.05));
  Matrix neg_diag = oracles::random_psd(gen, 8, 0.05);
  neg_diag(4, 4) = -0.5;  // rejected at entry
  batch.push_back(neg_diag);
  // unit diagonal but every off-diagonal is 2: after the first pick all
  // remaining gains drop to -3, so this one is caught mid-elimination
  Matrix indef = Matrix::Constant(8, 8, 2.0);
  indef.diagonal().setOnes();
  batch.push_back(indef);
  batch.push_back(oracles::random_psd(gen, 8, 0.05));

  const auto items = greedy::bfgm_inference(batch, 3);
  CHECK_FALSE(items[0].failed);
  CHECK(items[1].failed);
  CHECK_FALSE(items[1].error.empty());
  CHECK(items[2].failed);
  CHECK(items[2].error.find("not PSD") != std::string::npos);
  CHECK(items[2].result.selected.empty());  // partial picks are discarded
  CHECK_FALSE(items[3].failed);
  CHECK(items[0].result.selected ==
        greedy::fgm_inference(batch[0], 3).selected);
  CHECK(items[3].result.selected ==
        greedy::fgm_inference(batch[3], 3).selected);
}

TEST_CASE("bfgm_inference batch-level validation") {
  std::mt19937_64 gen(107);
  std::vector<Matrix> ragged;
  ragged.push_back(oracles::random_psd(gen, 8, 0.05));
  ragged.push_back(oracles::random_psd(gen, 9, 0.05));
  CHECK_THROWS_AS(greedy::bfgm_inference(ragged, 3), DimensionError);

  std::vector<Matrix> ok;
  ok.push_back(oracles::random_psd(gen, 8, 0.05));
  CHECK_THROWS_AS(greedy::bfgm_inference(ok, 0), ValueError);
  CHECK_THROWS_AS(greedy::bfgm_inference(ok, 9), ValueError);
  CHECK(greedy::bfgm_inference({}, 3).empty());
}

TEST_CASE("bfgm_inference is thread-count invariant") {
  std::mt19937_64 gen(109);
  std::vector<Matrix> batch;
  for (int b = 0; b < 11; ++b) {
    batch.push_back(oracles::random_psd(gen, 16, 0.02));
  }
  const auto serial = greedy::bfgm_inference(batch, 5, 1);
  const auto parallel = greedy::bfgm_inference(batch, 5, 3);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t b = 0; b < serial.size(); ++b) {
    CHECK(serial[b].result.selected == parallel[b].result.selected);
    CHECK(serial[b].failed == parallel[b].failed);
  }
}

TEST_CASE("bfgm_inference single-item overhead stays within 2x of fgm") {
  std::mt19937_64 gen(113);
  const Matrix l = oracles::random_psd(gen, 64, 0.01);
  const std::vector<Matrix> batch{l};
  const int reps = 400;
  // warm up allocators and caches
  for (int i = 0; i < 20; ++i) {
    greedy::fgm_inference(l, 8);
    greedy::bfgm_inference(batch, 8);
  }
  double fgm_best = 1e300;
  double bfgm_best = 1e300;
  for (int round = 0; round < 5; ++round) {
    auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) greedy::fgm_inference(l, 8);
    fgm_best = std::min(fgm_best, seconds_since(start));
    start = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) greedy::bfgm_inference(batch, 8);
    bfgm_best = std::min(bfgm_best, seconds_since(start));
  }
  CHECK(bfgm_best <= 2.0 * fgm_best);
}
