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
#include <span>
#include <vector>

namespace tdigest::oracle {

/// Exact rank statistics over a fully retained, sorted sample. Used as the
/// reference when measuring digest error.
///
/// Conventions (mid-rank): sorted sample i sits at quantile (i + 0.5) / n.
class SampleSet {
 public:
  /// Throws InvalidInputError on non-finite values.
  explicit SampleSet(std::vector<double> values);

  std::size_t size() const { return sorted_.size(); }
  bool empty() const { return sorted_.empty(); }
  std::span<const double> sorted() const { return sorted_; }
  double mean() const;

  /// Linear interpolation between adjacent order statistics at their
  /// mid-ranks; the minimum below rank 0.5 and the maximum above n - 0.5.
  double Quantile(double q) const;

  /// (count below x + count equal to x / 2) / n.
  double Cdf(double x) const;

  /// Each sample owns the rank interval [i, i + 1); the result is the mean of
  /// the samples weighted by how much of that interval falls inside
  /// [q_lo * n, q_hi * n].
  double TrimmedMean(double q_lo, double q_hi) const;

 private:
  std::vector<double> sorted_;
};

}  // namespace tdigest::oracle
