/*
 * Licensed to the Apache Software Foundation (ASF) under one
 * or more contributor license agreements.  See the NOTICE file
 * distributed with this work for additional information
 * regarding copyright ownership.  The ASF licenses this file
 * to you under the Apache License, Version 2.0 (the
 * "License"); you may not use this file except in compliance
 * with the License.  You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing,
 * software distributed under the License is distributed on an
 * "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
 * KIND, either express or implied.  See the License for the
 * specific language governing permissions and limitations
 * under the License.
 */

#include "tdigest/harness/experiments.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "tdigest/errors.h"
#include "tdigest/oracle.h"

namespace tdigest::harness {

namespace {

std::vector<double> DrawTrial(const ExperimentConfig& config, std::size_t trial) {
  Rng rng(TrialSeed(config.seed, trial));
  return GenerateSamples(config.generator, config.sample_count, rng);
}

TDigest Build(std::span<const double> values, double delta, ScaleKind scale,
              const MergePolicy& policy, bool instrumented = false) {
  DigestBuilder builder(delta, scale, policy, instrumented);
  for (double v : values) builder.Add(v);
  return builder.Finish();
}

MergePolicy PolicyFor(double delta, const MergePolicy& like) {
  MergePolicy policy = MergePolicy::Default(delta);
  policy.working_delta_factor = like.working_delta_factor;
  policy.alternate_scan = like.alternate_scan;
  return policy;
}

double RelativeError(double abs_error, double exact) {
  if (abs_error == 0.0) return 0.0;
  if (exact == 0.0) return std::numeric_limits<double>::infinity();
  return abs_error / std::abs(exact);
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (sample_count < 1) throw ConfigError("sample count must be at least 1");
  // Constructing a digest checks compression and policy.
  TDigest probe(delta, scale, policy);
}

std::vector<double> AccuracyQuantiles() {
  std::vector<double> lower = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 0.1};
  std::vector<double> qs = lower;
  qs.push_back(0.5);
  for (auto it = lower.rbegin(); it != lower.rend(); ++it) qs.push_back(1.0 - *it);
  return qs;
}

std::vector<double> SizeSweepDeltas() { return {20, 50, 100, 200, 500, 1000}; }

std::vector<double> SizeSweepQuantiles() { return {1e-5, 1e-4, 1e-3, 1e-2, 0.1, 0.5}; }

std::vector<double> ParallelQuantiles() { return {0.001, 0.01, 0.1, 0.5, 0.9, 0.99, 0.999}; }

void RequireInvariants(const TDigest& digest, bool fully_merged, const std::string& context) {
  const std::vector<std::string> problems = CheckInvariants(digest, fully_merged);
  if (problems.empty()) return;
  std::string message = context + ": digest invariant violated: " + problems.front();
  if (problems.size() > 1) message += " (+" + std::to_string(problems.size() - 1) + " more)";
  throw std::logic_error(message);
}

void ForEachTrial(std::size_t trials, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(trials, 1));
  if (workers <= 1) {
    for (std::size_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < trials; t = next++) {
        try {
          body(t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::vector<AccuracyRow> RunAccuracy(const ExperimentConfig& config,
                                     std::span<const ScaleKind> scales,
                                     std::span<const double> quantiles) {
  config.Validate();
  const std::size_t per_trial = scales.size() * quantiles.size();
  std::vector<AccuracyRow> by_trial(config.trials * per_trial);

  ForEachTrial(config.trials, [&](std::size_t trial) {
    const std::vector<double> values = DrawTrial(config, trial);
    const oracle::SampleSet exact(values);
    for (std::size_t s = 0; s < scales.size(); ++s) {
      const TDigest digest = Build(values, config.delta, scales[s], config.policy);
      RequireInvariants(digest, true, "accuracy trial " + std::to_string(trial));
      for (std::size_t j = 0; j < quantiles.size(); ++j) {
        const double truth = exact.Quantile(quantiles[j]);
        const double error = std::abs(digest.Quantile(quantiles[j]) - truth);
        by_trial[trial * per_trial + s * quantiles.size() + j] = {
            scales[s], quantiles[j], trial, error, RelativeError(error, truth)};
      }
    }
  });

  std::vector<AccuracyRow> rows;
  rows.reserve(by_trial.size());
  for (std::size_t s = 0; s < scales.size(); ++s) {
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
      for (std::size_t j = 0; j < quantiles.size(); ++j) {
        rows.push_back(by_trial[trial * per_trial + s * quantiles.size() + j]);
      }
    }
  }
  return rows;
}

std::vector<SizeRow> RunSizeSweep(const ExperimentConfig& config, std::span<const double> deltas,
                                  std::span<const double> quantiles, Encoding encoding) {
  config.Validate();
  struct Cell {
    double error = 0.0;
    std::size_t centroids = 0;
    std::size_t octets = 0;
  };
  const std::size_t per_trial = deltas.size() * quantiles.size();
  std::vector<Cell> cells(config.trials * per_trial);

  ForEachTrial(config.trials, [&](std::size_t trial) {
    const std::vector<double> values = DrawTrial(config, trial);
    const oracle::SampleSet exact(values);
    for (std::size_t d = 0; d < deltas.size(); ++d) {
      const TDigest digest =
          Build(values, deltas[d], config.scale, PolicyFor(deltas[d], config.policy));
      RequireInvariants(digest, true, "size trial " + std::to_string(trial));
      const std::size_t octets = Encode(digest, encoding).size();
      for (std::size_t j = 0; j < quantiles.size(); ++j) {
        cells[trial * per_trial + d * quantiles.size() + j] = {
            std::abs(digest.Quantile(quantiles[j]) - exact.Quantile(quantiles[j])), digest.size(),
            octets};
      }
    }
  });

  std::vector<SizeRow> rows;
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    for (std::size_t j = 0; j < quantiles.size(); ++j) {
      SizeRow row{deltas[d], quantiles[j], 0.0, 0, 0};
      for (std::size_t trial = 0; trial < config.trials; ++trial) {
        const Cell& cell = cells[trial * per_trial + d * quantiles.size() + j];
        row.mean_abs_error += cell.error / static_cast<double>(config.trials);
        row.centroid_count = std::max(row.centroid_count, cell.centroids);
        row.image_octets = std::max(row.image_octets, cell.octets);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<OverlapRow> RunOverlap(const ExperimentConfig& config) {
  config.Validate();
  MergePolicy stratified = config.policy;
  stratified.alternate_scan = true;
  MergePolicy unidirectional = config.policy;
  unidirectional.working_delta_factor = 1.0;
  unidirectional.alternate_scan = false;

  std::vector<int> offsets(2 * config.trials);
  ForEachTrial(config.trials, [&](std::size_t trial) {
    const std::vector<double> values = DrawTrial(config, trial);
    const TDigest a = Build(values, config.delta, config.scale, stratified, true);
    const TDigest b = Build(values, config.delta, config.scale, unidirectional, true);
    RequireInvariants(a, true, "overlap trial " + std::to_string(trial));
    RequireInvariants(b, true, "overlap trial " + std::to_string(trial));
    offsets[trial] = a.MeasureOverlap();
    offsets[config.trials + trial] = b.MeasureOverlap();
  });

  std::vector<OverlapRow> rows;
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    rows.push_back({"stratified", trial, offsets[trial]});
  }
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    rows.push_back({"unidirectional", trial, offsets[config.trials + trial]});
  }
  return rows;
}

std::vector<ParallelRow> RunParallel(const ExperimentConfig& config,
                                     std::span<const std::size_t> ways, double sub_delta,
                                     std::span<const double> quantiles) {
  config.Validate();
  if (sub_delta < config.delta) {
    throw ConfigError("sub-digest compression must be at least the output compression");
  }
  for (std::size_t w : ways) {
    if (w < 1 || w > config.sample_count) throw ConfigError("invalid partition count");
  }
  static constexpr const char* kStrategies[] = {"direct", "stratified", "unstratified"};
  const MergePolicy sub_policy = PolicyFor(sub_delta, config.policy);
  MergePolicy flat_policy = PolicyFor(config.delta, config.policy);
  flat_policy.working_delta_factor = 1.0;

  // errors[trial][way][strategy][q]
  const std::size_t per_way = 3 * quantiles.size();
  const std::size_t per_trial = ways.size() * per_way;
  std::vector<double> errors(config.trials * per_trial);

  ForEachTrial(config.trials, [&](std::size_t trial) {
    const std::vector<double> values = DrawTrial(config, trial);
    const oracle::SampleSet exact(values);
    std::vector<double> truth;
    for (double q : quantiles) truth.push_back(exact.Quantile(q));

    const TDigest direct = Build(values, config.delta, config.scale, config.policy);
    RequireInvariants(direct, true, "parallel trial " + std::to_string(trial));

    for (std::size_t wi = 0; wi < ways.size(); ++wi) {
      const std::size_t parts = ways[wi];
      std::vector<TDigest> stratified;
      std::vector<TDigest> flat;
      for (std::size_t p = 0; p < parts; ++p) {
        const auto begin = values.size() * p / parts;
        const auto end = values.size() * (p + 1) / parts;
        const std::span<const double> slice(values.data() + begin, end - begin);

        DigestBuilder sub(sub_delta, config.scale, sub_policy);
        for (double v : slice) sub.Add(v);
        sub.Flush();
        stratified.push_back(sub.digest());
        flat.push_back(Build(slice, config.delta, config.scale, flat_policy));
      }
      const TDigest merged = TDigest::Merge(stratified, config.delta);
      const TDigest merged_flat = TDigest::Merge(flat, config.delta);
      RequireInvariants(merged, true, "parallel trial " + std::to_string(trial));
      RequireInvariants(merged_flat, true, "parallel trial " + std::to_string(trial));

      const TDigest* digests[] = {&direct, &merged, &merged_flat};
      for (std::size_t s = 0; s < 3; ++s) {
        for (std::size_t j = 0; j < quantiles.size(); ++j) {
          errors[trial * per_trial + wi * per_way + s * quantiles.size() + j] =
              std::abs(digests[s]->Quantile(quantiles[j]) - truth[j]);
        }
      }
    }
  });

  std::vector<ParallelRow> rows;
  rows.reserve(errors.size());
  for (std::size_t wi = 0; wi < ways.size(); ++wi) {
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t trial = 0; trial < config.trials; ++trial) {
        for (std::size_t j = 0; j < quantiles.size(); ++j) {
          rows.push_back({ways[wi], kStrategies[s], quantiles[j], trial,
                          errors[trial * per_trial + wi * per_way + s * quantiles.size() + j]});
        }
      }
    }
  }
  return rows;
}

Summary Summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::string FormatDouble(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void WriteCsv(std::ostream& out, std::span<const AccuracyRow> rows) {
  out << "scale,q,trial,abs_error,rel_error\n";
  for (const AccuracyRow& r : rows) {
    out << ScaleKindName(r.scale) << ',' << FormatDouble(r.q) << ',' << r.trial << ','
        << FormatDouble(r.abs_error) << ',' << FormatDouble(r.rel_error) << '\n';
  }
}

void WriteCsv(std::ostream& out, std::span<const SizeRow> rows) {
  out << "delta,q,mean_abs_error,centroid_count,image_octets\n";
  for (const SizeRow& r : rows) {
    out << FormatDouble(r.delta) << ',' << FormatDouble(r.q) << ',' << FormatDouble(r.mean_abs_error)
        << ',' << r.centroid_count << ',' << r.image_octets << '\n';
  }
}

void WriteCsv(std::ostream& out, std::span<const OverlapRow> rows) {
  out << "policy,trial,Delta\n";
  for (const OverlapRow& r : rows) out << r.policy << ',' << r.trial << ',' << r.offset << '\n';
}

void WriteCsv(std::ostream& out, std::span<const ParallelRow> rows) {
  out << "ways,strategy,q,trial,abs_error\n";
  for (const ParallelRow& r : rows) {
    out << r.ways << ',' << r.strategy << ',' << FormatDouble(r.q) << ',' << r.trial << ','
        << FormatDouble(r.abs_error) << '\n';
  }
}

}  // namespace tdigest::harness
