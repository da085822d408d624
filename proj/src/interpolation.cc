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

// Rank statistics over a digest.
//
// The digest is read as a piecewise-linear map between value and rank. Each
// centroid contributes a knot at its mean, located at the centre of its rank
// span (half its weight on either side). Consecutive knots are joined by
// straight lines, so between two singletons the model reproduces the
// mid-rank interpolation of the raw samples exactly.
//
// The first and last centroids are refined using the recorded extremes:
//   weight 1  the centroid is the extreme sample itself;
//   weight 2  two singletons, one at the extreme and one mirrored through
//             the mean (2 * mean - extreme);
//   weight >2 one sample sits at the extreme and the rest of the outer half
//             is interpolated between the extreme and the mean.
// Sentinel knots (min, 0) and (max, total) close the ends.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tdigest/errors.h"
#include "tdigest/tdigest.h"

namespace tdigest {

namespace {

struct Knot {
  double x;
  double rank;
  bool sentinel;
};

std::vector<Knot> BuildKnots(const TDigest& digest, double& total) {
  const auto centroids = digest.centroids();
  const double lo = digest.min();
  const double hi = digest.max();
  const std::size_t m = centroids.size();

  std::vector<Knot> knots;
  knots.reserve(m + 4);
  knots.push_back({lo, 0.0, true});

  double left = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Centroid& c = centroids[i];
    const bool first = i == 0;
    const bool last = i + 1 == m;
    if (first && last) {
      if (c.weight == 2.0) {
        knots.push_back({lo, 0.5, false});
        knots.push_back({hi, 1.5, false});
      } else if (c.weight > 2.0) {
        knots.push_back({lo, 0.5, false});
        knots.push_back({c.mean, c.weight / 2.0, false});
        knots.push_back({hi, c.weight - 0.5, false});
      } else {
        knots.push_back({c.mean, c.weight / 2.0, false});
      }
    } else if (first && c.weight == 2.0) {
      const double mirror = std::min(2.0 * c.mean - lo, centroids[1].mean);
      knots.push_back({lo, 0.5, false});
      knots.push_back({mirror, 1.5, false});
    } else if (first && c.weight > 2.0) {
      knots.push_back({lo, 0.5, false});
      knots.push_back({c.mean, c.weight / 2.0, false});
    } else if (last && c.weight == 2.0) {
      const double mirror = std::max(2.0 * c.mean - hi, knots.back().x);
      knots.push_back({mirror, left + 0.5, false});
      knots.push_back({hi, left + 1.5, false});
    } else if (last && c.weight > 2.0) {
      knots.push_back({c.mean, left + c.weight / 2.0, false});
      knots.push_back({hi, left + c.weight - 0.5, false});
    } else {
      knots.push_back({c.mean, left + c.weight / 2.0, false});
    }
    left += c.weight;
  }
  knots.push_back({hi, left, true});

  // Rounding in incremental means can push a mean a few ulps past an
  // extreme; keep the map monotone and inside [min, max].
  for (std::size_t k = 1; k < knots.size(); ++k) {
    knots[k].x = std::clamp(std::max(knots[k].x, knots[k - 1].x), lo, hi);
  }
  total = left;
  return knots;
}

void RequireNonEmpty(const TDigest& digest) {
  if (digest.empty()) throw EmptyDigestError();
}

}  // namespace

double TDigest::Quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("quantile must lie in [0, 1], got " + std::to_string(q));
  }
  RequireNonEmpty(*this);
  if (q == 0.0) return min_;
  if (q == 1.0) return max_;

  double total = 0.0;
  const std::vector<Knot> knots = BuildKnots(*this, total);
  const double rank = q * total;
  auto upper = std::lower_bound(knots.begin() + 1, knots.end(), rank,
                                [](const Knot& k, double r) { return k.rank < r; });
  if (upper == knots.end()) return max_;
  const Knot& a = *(upper - 1);
  const Knot& b = *upper;
  const double t = (rank - a.rank) / (b.rank - a.rank);
  return a.x + t * (b.x - a.x);
}

double TDigest::Cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf probe is NaN");
  RequireNonEmpty(*this);
  if (x < min_) return 0.0;
  if (x > max_) return 1.0;

  // Centroids whose mean is exactly x: report the middle of their combined
  // weight span.
  auto run = std::lower_bound(centroids_.begin(), centroids_.end(), x,
                              [](const Centroid& c, double v) { return c.mean < v; });
  if (run != centroids_.end() && run->mean == x) {
    double below = 0.0;
    double at = 0.0;
    double all = 0.0;
    for (auto it = centroids_.begin(); it != centroids_.end(); ++it) {
      if (it < run) below += it->weight;
      if (it->mean == x) at += it->weight;
      all += it->weight;
    }
    return (below + at / 2.0) / all;
  }

  double total = 0.0;
  const std::vector<Knot> knots = BuildKnots(*this, total);

  auto begin = std::lower_bound(knots.begin(), knots.end(), x,
                                [](const Knot& k, double v) { return k.x < v; });
  auto end = std::upper_bound(begin, knots.end(), x,
                              [](double v, const Knot& k) { return v < k.x; });

  // Weight located exactly at x: report the middle of the step.
  double step_lo = 0.0;
  double step_hi = 0.0;
  bool found = false;
  for (auto it = begin; it != end; ++it) {
    if (it->sentinel) continue;
    if (!found) step_lo = it->rank;
    step_hi = it->rank;
    found = true;
  }
  if (found) return (step_lo + step_hi) / 2.0 / total;
  if (begin != end) return begin->rank / total;

  const Knot& a = *(begin - 1);
  const Knot& b = *begin;
  const double rank = a.rank + (x - a.x) / (b.x - a.x) * (b.rank - a.rank);
  return std::clamp(rank / total, 0.0, 1.0);
}

double TDigest::TrimmedMean(double q_lo, double q_hi) const {
  if (!(q_lo >= 0.0 && q_hi <= 1.0)) {
    throw DomainError("trim bounds must lie in [0, 1]");
  }
  if (!(q_lo < q_hi)) throw DomainError("trim range is empty or inverted");
  RequireNonEmpty(*this);

  double total = 0.0;
  for (const Centroid& c : centroids_) total += c.weight;
  const double lo = q_lo * total;
  const double hi = q_hi * total;

  double left = 0.0;
  double weighted = 0.0;
  double covered = 0.0;
  for (const Centroid& c : centroids_) {
    const double right = left + c.weight;
    const double overlap = std::min(hi, right) - std::max(lo, left);
    if (overlap > 0.0) {
      weighted += overlap * c.mean;
      covered += overlap;
    }
    left = right;
    if (left >= hi) break;
  }
  return weighted / covered;
}

}  // namespace tdigest
