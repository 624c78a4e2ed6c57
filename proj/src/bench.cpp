// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "divdpp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "divdpp/errors.hpp"
#include "divdpp/greedy_map.hpp"
#include "divdpp/lensemble.hpp"
#include "divdpp/sampling.hpp"
#include "divdpp/toy_attention.hpp"

namespace divdpp::bench {

namespace {

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

Matrix random_lensemble(Index t_total, RandomSource& rng) {
  const int n_peaks =
      std::max(1, static_cast<int>(t_total / 64));
  const toy::Scene scene = toy::simulate_attention(t_total, n_peaks, rng);
  // Scale the attention so quality entries are O(1); with a probability
  // vector as quality the expected sample would be all but empty.
  const Vector quality =
      scene.attention * (0.5 * static_cast<double>(t_total));
  const Matrix similarity =
      lensemble::similarity_from_features(scene.features);
  return lensemble::build_l(quality, similarity);
}

std::vector<BenchRecord> bench_speed(const BenchConfig& config,
                                     RandomSource& rng) {
  if (config.sizes.empty()) throw ValueError("bench_speed: no sizes");
  if (config.batch < 1) throw ValueError("bench_speed: batch must be >= 1");
  if (config.t < 1) throw ValueError("bench_speed: t must be >= 1");
  if (config.repeats < 3) {
    throw ValueError("bench_speed: need at least 3 repeats for a median");
  }
  for (const Index size : config.sizes) {
    if (size < config.t) {
      throw ValueError("bench_speed: size " + std::to_string(size) +
                       " smaller than subset size " +
                       std::to_string(config.t));
    }
    const double mb = static_cast<double>(config.batch) *
                      static_cast<double>(size) * static_cast<double>(size) *
                      8.0 / (1024.0 * 1024.0);
    if (mb > config.budget_mb) {
      throw ValueError("bench_speed: batch of " + std::to_string(size) + "x" +
                       std::to_string(size) + " kernels needs " +
                       std::to_string(mb) + " MiB, over the " +
                       std::to_string(config.budget_mb) + " MiB budget");
    }
  }

  std::vector<BenchRecord> records;
  for (std::size_t si = 0; si < config.sizes.size(); ++si) {
    const Index size = config.sizes[si];

    // Generation is excluded from all timings.
    RandomSource gen_rng = rng.fork(1000 + si);
    std::vector<Matrix> batch;
    batch.reserve(static_cast<std::size_t>(config.batch));
    for (int b = 0; b < config.batch; ++b) {
      batch.push_back(random_lensemble(size, gen_rng));
    }

    const auto push = [&](const std::string& method, double seconds) {
      BenchRecord rec;
      rec.method = method;
      rec.size = size;
      rec.batch = config.batch;
      rec.t = config.t;
      rec.wall_seconds = seconds;
      rec.repeats = config.repeats;
      records.push_back(rec);
    };

    // Round-robin repeats: every cycle times one repeat of each method, so
    // a transient load burst perturbs all methods instead of concentrating
    // on whichever one happened to own that stretch of wall time.
    std::vector<double> classic_times, fgm_times, bfgm_times, par_times;
    std::vector<IndexList> fgm_subsets;
    std::vector<greedy::BfgmItem> bfgm_items;
    std::size_t sink = 0;
    for (int r = 0; r < config.repeats; ++r) {
      {
        // Classic exact sampling, one matrix at a time.  Re-forking the
        // same stream every repeat reproduces identical subsets.
        RandomSource draw_rng = rng.fork(2000 + si);
        Timer timer;
        for (const Matrix& l : batch) {
          sink += sampling::exact_sample(l, draw_rng).size();
        }
        classic_times.push_back(timer.seconds());
      }
      {
        // Looped fast greedy MAP.
        std::vector<IndexList> subsets;
        subsets.reserve(batch.size());
        Timer timer;
        for (const Matrix& l : batch) {
          subsets.push_back(greedy::fgm_inference(l, config.t).selected);
        }
        fgm_times.push_back(timer.seconds());
        if (r == 0) fgm_subsets = std::move(subsets);
      }
      {
        // Batched greedy MAP.
        Timer timer;
        auto items = greedy::bfgm_inference(batch, config.t, 1);
        bfgm_times.push_back(timer.seconds());
        if (r == 0) bfgm_items = std::move(items);
      }
      if (config.threads > 1) {
        Timer timer;
        auto items = greedy::bfgm_inference(batch, config.t, config.threads);
        par_times.push_back(timer.seconds());
        if (r == 0) sink += items.size();
      }
    }
    push("classic", median(classic_times));
    push("fgm", median(fgm_times));
    push("bfgm", median(bfgm_times));

    for (std::size_t b = 0; b < batch.size(); ++b) {
      if (bfgm_items[b].failed ||
          bfgm_items[b].result.selected != fgm_subsets[b]) {
        throw Error("bench_speed: looped and batched greedy disagree on "
                    "kernel " +
                    std::to_string(b) + " at size " + std::to_string(size));
      }
    }

    if (config.threads > 1) {
      push("bfgm-parallel", median(par_times));
    }
    if (sink == std::numeric_limits<std::size_t>::max()) {
      throw Error("bench_speed: unreachable");  // keep `sink` observable
    }
  }
  return records;
}

std::string to_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const BenchRecord& rec : records) {
    out << rec.method << ',' << rec.size << ',' << rec.batch << ',' << rec.t
        << ',' << rec.wall_seconds << ',' << rec.repeats << '\n';
  }
  return out.str();
}

}  // namespace divdpp::bench
