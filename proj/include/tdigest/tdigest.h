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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tdigest/scale.h"

namespace tdigest {

/// One cluster of samples, summarized by its mean and weight.
struct Centroid {
  double mean = 0.0;
  double weight = 0.0;

  friend bool operator==(const Centroid&, const Centroid&) = default;
};

/// A sample waiting to be merged into a digest.
struct WeightedValue {
  double value = 0.0;
  double weight = 1.0;
};

/// Smallest and largest raw sample ever assigned to a centroid. Only kept by
/// instrumented digests.
struct SampleRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Controls how buffered input is folded into a digest.
struct MergePolicy {
  /// Samples held by DigestBuilder before a merge pass.
  std::size_t buffer_capacity = 1000;
  /// Merge passes made while inserting run at delta * working_delta_factor;
  /// Compress() consolidates at delta itself.
  double working_delta_factor = 1.0;
  /// Flip the scan direction of the greedy pass after every pass.
  bool alternate_scan = true;

  /// 10 * ceil(delta) buffer, 3x working compression, alternating scans.
  static MergePolicy Default(double delta);

  friend bool operator==(const MergePolicy&, const MergePolicy&) = default;
};

/// A t-digest: an ordered sequence of centroids whose sizes are bounded by a
/// scale function, supporting quantile, CDF and trimmed-mean estimates with
/// accuracy that improves towards the tails.
///
/// The centroid sequence is always sorted by mean and the total weight is the
/// exact sum of the inserted weights. After Compress() the digest is fully
/// merged at delta(): every multi-sample centroid spans at most one unit of k
/// and no two neighbours could be combined.
///
/// A digest has a single writer. Const member functions do not mutate and may
/// run concurrently on a digest that is not being modified.
class TDigest {
 public:
  static constexpr double kMinDelta = 10.0;

  /// Throws ConfigError if delta < kMinDelta, the buffer capacity is zero or
  /// the working factor is below 1.
  explicit TDigest(double delta, ScaleKind scale = ScaleKind::kK2);
  TDigest(double delta, ScaleKind scale, MergePolicy policy, bool instrumented = false);

  /// Rebuilds a digest from stored parts (used by the codec). Means must be
  /// non-decreasing and weights positive.
  static TDigest FromCentroids(double delta, ScaleKind scale, std::vector<Centroid> centroids,
                               double total_weight, double min, double max);

  double delta() const { return delta_; }
  double working_delta() const { return delta_ * policy_.working_delta_factor; }
  ScaleKind scale() const { return scale_; }
  const MergePolicy& policy() const { return policy_; }

  std::span<const Centroid> centroids() const { return centroids_; }
  std::size_t size() const { return centroids_.size(); }
  bool empty() const { return centroids_.empty(); }
  double total_weight() const { return total_weight_; }
  /// +infinity / -infinity while the digest is empty.
  double min() const { return min_; }
  double max() const { return max_; }

  bool instrumented() const { return instrumented_; }
  std::span<const SampleRange> sample_ranges() const { return ranges_; }

  /// Sorts the buffer together with the existing centroids and makes one
  /// greedy pass at working_delta(). Throws InvalidInputError (leaving the
  /// digest untouched) on non-finite values or non-positive weights.
  void MergeBuffer(std::span<const WeightedValue> buffer);

  /// Clustering insertion: the sample joins the nearest centroid that can
  /// absorb it without exceeding the size bound (heaviest one on ties), or
  /// starts a new centroid. When the centroid count exceeds
  /// growth_limit * delta() a merge pass at working_delta() runs.
  void AddPoint(double value, double weight, int growth_limit);

  /// Final consolidation pass at delta().
  void Compress();

  /// Combines digests with the same scale kind into one digest fully merged
  /// at out_delta, which must not exceed any input's compression. The scan
  /// direction follows the first input.
  static TDigest Merge(std::span<const TDigest> digests, double out_delta);
  static TDigest Merge(std::span<const TDigest* const> digests, double out_delta);

  /// Estimated value at quantile q. Quantile(0) and Quantile(1) are the exact
  /// extremes.
  double Quantile(double q) const;

  /// Estimated fraction of the weight below x, counting half of any weight
  /// located exactly at x.
  double Cdf(double x) const;

  /// Mean of the weight between quantiles q_lo and q_hi. Clusters entirely
  /// inside the range contribute mean * weight; clusters straddling a bound
  /// contribute the overlapping fraction of their weight at their mean.
  double TrimmedMean(double q_lo, double q_hi) const;

  /// Smallest offset d such that every sample in centroid i is >= every
  /// sample in centroid j whenever i > j + d. Zero means strongly ordered.
  int MeasureOverlap() const;

 private:
  enum class Direction { kForward, kReverse };

  struct Item {
    double mean;
    double weight;
    SampleRange range;
  };

  void ValidateConfig() const;
  std::vector<Item> TakeItems();
  void RunMergePass(std::vector<Item>& sorted, double pass_delta);
  void AdvanceDirection();

  double delta_;
  ScaleKind scale_;
  MergePolicy policy_;
  bool instrumented_ = false;
  Direction next_direction_ = Direction::kForward;

  std::vector<Centroid> centroids_;
  std::vector<SampleRange> ranges_;
  double total_weight_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

/// Buffered front end: collects samples and folds them into the digest with
/// MergeBuffer whenever policy().buffer_capacity samples are pending.
class DigestBuilder {
 public:
  explicit DigestBuilder(double delta, ScaleKind scale = ScaleKind::kK2);
  DigestBuilder(double delta, ScaleKind scale, MergePolicy policy, bool instrumented = false);

  /// Throws InvalidInputError on a non-finite value or non-positive weight.
  void Add(double value, double weight = 1.0);
  void Flush();

  /// Flushes and compresses; the builder is left empty.
  TDigest Finish();

  /// Digest state as of the last flush.
  const TDigest& digest() const { return digest_; }
  std::size_t pending() const { return buffer_.size(); }

 private:
  TDigest digest_;
  std::vector<WeightedValue> buffer_;
};

/// Checks the structural invariants of a digest and returns a description
/// of each violation. With fully_merged set, also checks the per-centroid
/// size bound (tolerance 1e-9) and that adjacent pairs could not be merged.
std::vector<std::string> CheckInvariants(const TDigest& digest, bool fully_merged);

/// K-size of every centroid, computed from prefix weights at delta().
std::vector<double> CentroidKSizes(const TDigest& digest);

}  // namespace tdigest
