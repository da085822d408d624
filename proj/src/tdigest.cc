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

#include "tdigest/tdigest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "tdigest/errors.h"

namespace tdigest {

namespace {

double Clamp01(double q) { return std::clamp(q, 0.0, 1.0); }

void ValidateSample(double value, double weight) {
  if (!std::isfinite(value)) {
    throw InvalidInputError("sample value must be finite");
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw InvalidInputError("sample weight must be positive and finite");
  }
}

}  // namespace

MergePolicy MergePolicy::Default(double delta) {
  MergePolicy policy;
  policy.buffer_capacity = 10 * static_cast<std::size_t>(std::ceil(std::max(delta, 1.0)));
  policy.working_delta_factor = 3.0;
  policy.alternate_scan = true;
  return policy;
}

TDigest::TDigest(double delta, ScaleKind scale)
    : TDigest(delta, scale, MergePolicy::Default(delta)) {}

TDigest::TDigest(double delta, ScaleKind scale, MergePolicy policy, bool instrumented)
    : delta_(delta), scale_(scale), policy_(policy), instrumented_(instrumented) {
  ValidateConfig();
}

void TDigest::ValidateConfig() const {
  if (!(delta_ >= kMinDelta) || !std::isfinite(delta_)) {
    throw ConfigError("compression must be at least " + std::to_string(kMinDelta) + ", got " +
                      std::to_string(delta_));
  }
  if (policy_.buffer_capacity == 0) {
    throw ConfigError("buffer capacity must be at least 1");
  }
  if (!(policy_.working_delta_factor >= 1.0) || !std::isfinite(policy_.working_delta_factor)) {
    throw ConfigError("working compression factor must be >= 1");
  }
}

TDigest TDigest::FromCentroids(double delta, ScaleKind scale, std::vector<Centroid> centroids,
                               double total_weight, double min, double max) {
  TDigest digest(delta, scale);
  for (std::size_t i = 0; i < centroids.size(); ++i) {
    ValidateSample(centroids[i].mean, centroids[i].weight);
    if (i > 0 && centroids[i].mean < centroids[i - 1].mean) {
      throw InvalidInputError("centroid means must be non-decreasing");
    }
  }
  if (!centroids.empty() && !(min <= max)) {
    throw InvalidInputError("min exceeds max");
  }
  digest.centroids_ = std::move(centroids);
  digest.total_weight_ = total_weight;
  if (!digest.centroids_.empty()) {
    digest.min_ = min;
    digest.max_ = max;
  }
  return digest;
}

std::vector<TDigest::Item> TDigest::TakeItems() {
  std::vector<Item> items;
  items.reserve(centroids_.size());
  for (std::size_t i = 0; i < centroids_.size(); ++i) {
    const Centroid& c = centroids_[i];
    items.push_back({c.mean, c.weight, instrumented_ ? ranges_[i] : SampleRange{c.mean, c.mean}});
  }
  return items;
}

void TDigest::AdvanceDirection() {
  if (policy_.alternate_scan) {
    next_direction_ =
        next_direction_ == Direction::kForward ? Direction::kReverse : Direction::kForward;
  }
}

namespace {

template <typename ItemT>
void Absorb(ItemT& cluster, const ItemT& x) {
  cluster.weight += x.weight;
  cluster.mean += (x.mean - cluster.mean) * (x.weight / cluster.weight);
  cluster.range.lo = std::min(cluster.range.lo, x.range.lo);
  cluster.range.hi = std::max(cluster.range.hi, x.range.hi);
}

}  // namespace

// One greedy pass over items sorted by mean. The limit on the running
// quantile is recomputed only when a cluster is emitted, so the scale
// function is evaluated once per output centroid.
void TDigest::RunMergePass(std::vector<Item>& sorted, double pass_delta) {
  centroids_.clear();
  ranges_.clear();
  if (sorted.empty()) return;

  double total = 0.0;
  for (const Item& item : sorted) total += item.weight;
  const Scale scale(scale_, pass_delta, total);

  std::vector<Item> out;
  out.reserve(std::min<std::size_t>(sorted.size(), static_cast<std::size_t>(4 * pass_delta) + 8));

  if (next_direction_ == Direction::kForward) {
    double weight_so_far = 0.0;
    double q_limit = scale.Q(scale.K(0.0) + 1.0);
    Item cluster = sorted.front();
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      const Item& x = sorted[i];
      const double q = (weight_so_far + cluster.weight + x.weight) / total;
      if (q <= q_limit) {
        Absorb(cluster, x);
      } else {
        out.push_back(cluster);
        weight_so_far += cluster.weight;
        q_limit = scale.Q(scale.K(Clamp01(weight_so_far / total)) + 1.0);
        cluster = x;
      }
    }
    out.push_back(cluster);
  } else {
    // Mirror image: grow clusters leftwards from q = 1, bounding the left
    // edge by Q(K(q_right) - 1).
    double weight_right = 0.0;
    double q_limit = scale.Q(scale.K(1.0) - 1.0);
    Item cluster = sorted.back();
    for (std::size_t i = sorted.size() - 1; i-- > 0;) {
      const Item& x = sorted[i];
      const double q = (total - (weight_right + cluster.weight + x.weight)) / total;
      if (q >= q_limit) {
        Absorb(cluster, x);
      } else {
        out.push_back(cluster);
        weight_right += cluster.weight;
        q_limit = scale.Q(scale.K(Clamp01((total - weight_right) / total)) - 1.0);
        cluster = x;
      }
    }
    out.push_back(cluster);
    std::reverse(out.begin(), out.end());
  }

  centroids_.reserve(out.size());
  for (const Item& item : out) centroids_.push_back({item.mean, item.weight});
  if (instrumented_) {
    ranges_.reserve(out.size());
    for (const Item& item : out) ranges_.push_back(item.range);
  }
}

void TDigest::MergeBuffer(std::span<const WeightedValue> buffer) {
  for (const WeightedValue& v : buffer) ValidateSample(v.value, v.weight);
  if (buffer.empty() && centroids_.empty()) return;

  std::vector<Item> incoming;
  incoming.reserve(buffer.size());
  double added = 0.0;
  for (const WeightedValue& v : buffer) {
    incoming.push_back({v.value, v.weight, {v.value, v.value}});
    added += v.weight;
    min_ = std::min(min_, v.value);
    max_ = std::max(max_, v.value);
  }
  std::stable_sort(incoming.begin(), incoming.end(),
                   [](const Item& a, const Item& b) { return a.mean < b.mean; });

  std::vector<Item> existing = TakeItems();
  std::vector<Item> merged;
  merged.reserve(existing.size() + incoming.size());
  // std::merge prefers the first range on ties, so older centroids stay ahead
  // of new samples with the same value.
  std::merge(existing.begin(), existing.end(), incoming.begin(), incoming.end(),
             std::back_inserter(merged),
             [](const Item& a, const Item& b) { return a.mean < b.mean; });

  total_weight_ += added;
  RunMergePass(merged, working_delta());
  AdvanceDirection();
}

void TDigest::AddPoint(double value, double weight, int growth_limit) {
  ValidateSample(value, weight);
  if (growth_limit < 1) throw ConfigError("growth limit must be at least 1");

  auto by_mean = [](const Centroid& c, double v) { return c.mean < v; };

  if (centroids_.empty()) {
    centroids_.push_back({value, weight});
    if (instrumented_) ranges_.push_back({value, value});
    total_weight_ = weight;
    min_ = max_ = value;
    return;
  }

  const double n = total_weight_ + weight;
  const Scale scale(scale_, working_delta(), n);

  const std::size_t split = static_cast<std::size_t>(
      std::lower_bound(centroids_.begin(), centroids_.end(), value, by_mean) - centroids_.begin());
  double nearest = std::numeric_limits<double>::infinity();
  if (split < centroids_.size()) nearest = centroids_[split].mean - value;
  if (split > 0) nearest = std::min(nearest, value - centroids_[split - 1].mean);

  // Candidates are the run of equal means on either side at exactly the
  // nearest distance.
  std::size_t first = split;
  std::size_t last = split;
  if (split > 0 && value - centroids_[split - 1].mean == nearest) {
    const double m = centroids_[split - 1].mean;
    first = split - 1;
    while (first > 0 && centroids_[first - 1].mean == m) --first;
  }
  if (split < centroids_.size() && centroids_[split].mean - value == nearest) {
    const double m = centroids_[split].mean;
    last = split;
    while (last < centroids_.size() && centroids_[last].mean == m) ++last;
  }

  double weight_left = 0.0;
  for (std::size_t i = 0; i < first; ++i) weight_left += centroids_[i].weight;

  std::size_t best = centroids_.size();
  for (std::size_t i = first; i < last; ++i) {
    const Centroid& c = centroids_[i];
    const double q_left = Clamp01(weight_left / n);
    const double q_right = Clamp01((weight_left + c.weight + weight) / n);
    if (scale.KSize(q_left, q_right) <= 1.0 &&
        (best == centroids_.size() || c.weight > centroids_[best].weight)) {
      best = i;
    }
    weight_left += c.weight;
  }

  if (best < centroids_.size()) {
    Centroid& c = centroids_[best];
    c.weight += weight;
    c.mean += (value - c.mean) * (weight / c.weight);
    if (instrumented_) {
      ranges_[best].lo = std::min(ranges_[best].lo, value);
      ranges_[best].hi = std::max(ranges_[best].hi, value);
    }
    // Within a run of equal means the updated centroid moves to the end of
    // the run facing the new value.
    std::size_t i = best;
    while (i + 1 < centroids_.size() && centroids_[i + 1].mean < centroids_[i].mean) {
      std::swap(centroids_[i], centroids_[i + 1]);
      if (instrumented_) std::swap(ranges_[i], ranges_[i + 1]);
      ++i;
    }
    while (i > 0 && centroids_[i - 1].mean > centroids_[i].mean) {
      std::swap(centroids_[i], centroids_[i - 1]);
      if (instrumented_) std::swap(ranges_[i], ranges_[i - 1]);
      --i;
    }
  } else {
    auto pos = std::upper_bound(centroids_.begin(), centroids_.end(), value,
                                [](double v, const Centroid& c) { return v < c.mean; });
    const auto index = pos - centroids_.begin();
    centroids_.insert(pos, {value, weight});
    if (instrumented_) ranges_.insert(ranges_.begin() + index, {value, value});
  }
  total_weight_ = n;
  min_ = std::min(min_, value);
  max_ = std::max(max_, value);

  if (static_cast<double>(centroids_.size()) > growth_limit * delta_) {
    std::vector<Item> items = TakeItems();
    RunMergePass(items, working_delta());
    AdvanceDirection();
  }
}

void TDigest::Compress() {
  if (centroids_.empty()) return;
  std::vector<Item> items = TakeItems();
  RunMergePass(items, delta_);
  AdvanceDirection();
}

TDigest TDigest::Merge(std::span<const TDigest> digests, double out_delta) {
  std::vector<const TDigest*> pointers;
  pointers.reserve(digests.size());
  for (const TDigest& d : digests) pointers.push_back(&d);
  return Merge(std::span<const TDigest* const>(pointers), out_delta);
}

TDigest TDigest::Merge(std::span<const TDigest* const> digests, double out_delta) {
  if (digests.empty()) throw ConfigError("nothing to merge");
  const TDigest& head = *digests.front();
  bool instrumented = true;
  std::size_t count = 0;
  for (const TDigest* d : digests) {
    if (d->scale_ != head.scale_) {
      throw IncompatibleDigestsError("cannot merge digests with scale " +
                                     std::string(ScaleKindName(head.scale_)) + " and " +
                                     std::string(ScaleKindName(d->scale_)));
    }
    if (out_delta > d->delta_) {
      throw IncompatibleDigestsError("output compression " + std::to_string(out_delta) +
                                     " exceeds an input compression " +
                                     std::to_string(d->delta_));
    }
    instrumented = instrumented && d->instrumented_;
    count += d->size();
  }

  MergePolicy policy = MergePolicy::Default(out_delta);
  policy.alternate_scan = head.policy_.alternate_scan;
  TDigest result(out_delta, head.scale_, policy, instrumented);
  result.next_direction_ = head.next_direction_;

  std::vector<Item> items;
  items.reserve(count);
  for (const TDigest* d : digests) {
    for (std::size_t i = 0; i < d->size(); ++i) {
      const Centroid& c = d->centroids_[i];
      items.push_back(
          {c.mean, c.weight, d->instrumented_ ? d->ranges_[i] : SampleRange{c.mean, c.mean}});
    }
    result.total_weight_ += d->total_weight_;
    result.min_ = std::min(result.min_, d->min_);
    result.max_ = std::max(result.max_, d->max_);
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.mean < b.mean; });
  if (items.empty()) return result;
  result.RunMergePass(items, out_delta);
  result.AdvanceDirection();
  return result;
}

int TDigest::MeasureOverlap() const {
  if (!instrumented_) throw NotInstrumentedError();
  int offset = 0;
  const std::size_t m = ranges_.size();
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = m; i-- > j + 1;) {
      if (ranges_[i].lo < ranges_[j].hi) {
        offset = std::max(offset, static_cast<int>(i - j));
        break;
      }
    }
  }
  return offset;
}

DigestBuilder::DigestBuilder(double delta, ScaleKind scale)
    : DigestBuilder(delta, scale, MergePolicy::Default(delta)) {}

DigestBuilder::DigestBuilder(double delta, ScaleKind scale, MergePolicy policy, bool instrumented)
    : digest_(delta, scale, policy, instrumented) {
  buffer_.reserve(policy.buffer_capacity);
}

void DigestBuilder::Add(double value, double weight) {
  ValidateSample(value, weight);
  buffer_.push_back({value, weight});
  if (buffer_.size() >= digest_.policy().buffer_capacity) Flush();
}

void DigestBuilder::Flush() {
  if (buffer_.empty()) return;
  digest_.MergeBuffer(buffer_);
  buffer_.clear();
}

TDigest DigestBuilder::Finish() {
  Flush();
  digest_.Compress();
  TDigest fresh(digest_.delta(), digest_.scale(), digest_.policy(), digest_.instrumented());
  return std::exchange(digest_, std::move(fresh));
}

std::vector<double> CentroidKSizes(const TDigest& digest) {
  std::vector<double> sizes;
  sizes.reserve(digest.size());
  double total = 0.0;
  for (const Centroid& c : digest.centroids()) total += c.weight;
  if (digest.empty()) return sizes;
  const Scale scale(digest.scale(), digest.delta(), total);
  double left = 0.0;
  for (const Centroid& c : digest.centroids()) {
    sizes.push_back(scale.KSize(Clamp01(left / total), Clamp01((left + c.weight) / total)));
    left += c.weight;
  }
  return sizes;
}

std::vector<std::string> CheckInvariants(const TDigest& digest, bool fully_merged) {
  std::vector<std::string> problems;
  auto report = [&problems](auto&&... parts) {
    std::ostringstream out;
    out.precision(17);
    (out << ... << parts);
    problems.push_back(out.str());
  };

  const auto centroids = digest.centroids();
  double sum = 0.0;
  for (std::size_t i = 0; i < centroids.size(); ++i) {
    const Centroid& c = centroids[i];
    sum += c.weight;
    if (!(c.weight > 0.0)) report("centroid ", i, " has non-positive weight ", c.weight);
    if (i > 0 && c.mean < centroids[i - 1].mean) {
      report("centroid ", i, " mean ", c.mean, " below predecessor ", centroids[i - 1].mean);
    }
    const double slack = 1e-12 * std::max({1.0, std::abs(digest.min()), std::abs(digest.max())});
    if (c.mean < digest.min() - slack || c.mean > digest.max() + slack) {
      report("centroid ", i, " mean ", c.mean, " outside [", digest.min(), ", ", digest.max(), "]");
    }
  }
  if (std::abs(sum - digest.total_weight()) > 1e-12 * std::max(1.0, digest.total_weight())) {
    report("centroid weights sum to ", sum, " but total weight is ", digest.total_weight());
  }
  if (digest.instrumented() && digest.sample_ranges().size() != centroids.size()) {
    report("sample range count ", digest.sample_ranges().size(), " != centroid count ",
           centroids.size());
  }

  if (fully_merged && !centroids.empty()) {
    const std::vector<double> sizes = CentroidKSizes(digest);
    const Scale scale(digest.scale(), digest.delta(), sum);
    double left = 0.0;
    for (std::size_t i = 0; i < centroids.size(); ++i) {
      if (centroids[i].weight > 1.0 && sizes[i] > 1.0 + 1e-9) {
        report("centroid ", i, " (weight ", centroids[i].weight, ") has k-size ", sizes[i]);
      }
      if (i + 1 < centroids.size()) {
        const double right = left + centroids[i].weight + centroids[i + 1].weight;
        const double pair = scale.KSize(Clamp01(left / sum), Clamp01(right / sum));
        if (!(pair > 1.0)) {
          report("centroids ", i, " and ", i + 1, " could merge (combined k-size ", pair, ")");
        }
      }
      left += centroids[i].weight;
    }
  }
  return problems;
}

}  // namespace tdigest
