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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tdigest/codec.h"
#include "tdigest/harness/generators.h"
#include "tdigest/tdigest.h"

namespace tdigest::harness {

struct ExperimentConfig {
  Generator generator = Generator::kUniform;
  std::size_t sample_count = 1'000'000;
  std::size_t trials = 20;
  double delta = 100.0;
  ScaleKind scale = ScaleKind::kK2;
  MergePolicy policy = MergePolicy::Default(100.0);
  std::uint64_t seed = 1;

  /// Throws ConfigError on zero trials or samples, or an invalid digest
  /// configuration.
  void Validate() const;
};

/// 1e-6 ... 0.5 and the mirrored upper tail.
std::vector<double> AccuracyQuantiles();

struct AccuracyRow {
  ScaleKind scale;
  double q;
  std::size_t trial;
  double abs_error;
  double rel_error;
};

/// For every trial, draws one sample, builds a digest per scale kind and
/// compares the quantile estimates with the exact mid-rank quantiles.
/// Rows are ordered by scale, trial, then q.
std::vector<AccuracyRow> RunAccuracy(const ExperimentConfig& config,
                                     std::span<const ScaleKind> scales,
                                     std::span<const double> quantiles);

struct SizeRow {
  double delta;
  double q;
  double mean_abs_error;
  std::size_t centroid_count;  // largest over trials
  std::size_t image_octets;    // largest over trials
};

std::vector<double> SizeSweepDeltas();
std::vector<double> SizeSweepQuantiles();

/// Compression sweep: the digest policy is MergePolicy::Default(delta) with
/// the working factor and scan alternation taken from config.policy.
std::vector<SizeRow> RunSizeSweep(const ExperimentConfig& config, std::span<const double> deltas,
                                  std::span<const double> quantiles, Encoding encoding);

struct OverlapRow {
  std::string policy;
  std::size_t trial;
  int offset;
};

/// Instrumented builds under two policies: "stratified" (working factor from
/// config.policy, alternating scans) and "unidirectional" (constant
/// compression, forward scans only). Both finish with Compress().
std::vector<OverlapRow> RunOverlap(const ExperimentConfig& config);

struct ParallelRow {
  std::size_t ways;
  std::string strategy;
  double q;
  std::size_t trial;
  double abs_error;
};

std::vector<double> ParallelQuantiles();

/// Strategies, all over the same sample per trial:
///   direct        one digest with config.policy, compressed at delta
///   stratified    equal partitions built at sub_delta with the stratified
///                 policy and left unconsolidated, merged once at delta
///   unstratified  partitions built at delta without stratification,
///                 compressed, merged at delta
std::vector<ParallelRow> RunParallel(const ExperimentConfig& config,
                                     std::span<const std::size_t> ways, double sub_delta,
                                     std::span<const double> quantiles);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;
};

Summary Summarize(std::span<const double> values);

/// Throws std::logic_error listing the violations if the digest breaks an
/// invariant.
void RequireInvariants(const TDigest& digest, bool fully_merged, const std::string& context);

/// Runs body(trial) for every trial, spreading trials across hardware
/// threads. The first exception thrown by any trial is rethrown.
void ForEachTrial(std::size_t trials, const std::function<void(std::size_t)>& body);

/// Decimal with 17 significant digits (round-trips any double).
std::string FormatDouble(double value);

void WriteCsv(std::ostream& out, std::span<const AccuracyRow> rows);
void WriteCsv(std::ostream& out, std::span<const SizeRow> rows);
void WriteCsv(std::ostream& out, std::span<const OverlapRow> rows);
void WriteCsv(std::ostream& out, std::span<const ParallelRow> rows);

}  // namespace tdigest::harness
