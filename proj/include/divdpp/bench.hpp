// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "divdpp/random_source.hpp"
#include "divdpp/types.hpp"

namespace divdpp::bench {

struct BenchRecord {
  std::string method;   // "classic", "fgm", "bfgm", "bfgm-parallel"
  Index size = 0;       // kernel side length T
  int batch = 0;
  int t = 0;            // subset size
  double wall_seconds = 0.0;  // median over repeats
  int repeats = 0;
};

struct BenchConfig {
  std::vector<Index> sizes{64, 128, 256, 512, 1024};
  int batch = 100;
  int t = 20;
  int repeats = 5;       // median of at least 3
  int threads = 1;       // > 1 adds a "bfgm-parallel" record
  double budget_mb = 2048.0;  // refuse when batch * T^2 doubles exceed this
};

/// Domain-shaped random L-ensemble: attention-derived quality over a
/// multi-peak scene times a smooth-feature cosine similarity.
Matrix random_lensemble(Index t_total, RandomSource& rng);

/// Times classic exact sampling (looped), greedy MAP (looped) and batched
/// greedy MAP over identical batches of random kernels.  Batch generation
/// is excluded from the timing; each method's wall time is the median over
/// `repeats` full passes.  Greedy results are cross-checked between the
/// looped and batched paths.  Identical seeds produce identical subsets on
/// every run (only the timings vary).
std::vector<BenchRecord> bench_speed(const BenchConfig& config,
                                     RandomSource& rng);

/// Headerless CSV rows: method,size,batch,t,wall_seconds,repeats.
std::string to_csv(const std::vector<BenchRecord>& records);

}  // namespace divdpp::bench
