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

#include "tdigest/oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tdigest/errors.h"

namespace tdigest::oracle {

SampleSet::SampleSet(std::vector<double> values) : sorted_(std::move(values)) {
  for (double v : sorted_) {
    if (!std::isfinite(v)) throw InvalidInputError("sample set values must be finite");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double SampleSet::mean() const {
  if (sorted_.empty()) throw EmptyDigestError();
  long double sum = 0.0L;
  for (double v : sorted_) sum += v;
  return static_cast<double>(sum / static_cast<long double>(sorted_.size()));
}

double SampleSet::Quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("quantile must lie in [0, 1], got " + std::to_string(q));
  }
  if (sorted_.empty()) throw EmptyDigestError();
  const double n = static_cast<double>(sorted_.size());
  const double position = q * n - 0.5;
  if (position <= 0.0) return sorted_.front();
  if (position >= n - 1.0) return sorted_.back();
  const auto i = static_cast<std::size_t>(std::floor(position));
  const double t = position - static_cast<double>(i);
  return sorted_[i] + t * (sorted_[i + 1] - sorted_[i]);
}

double SampleSet::Cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf probe is NaN");
  if (sorted_.empty()) throw EmptyDigestError();
  const auto below = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  const auto above = std::upper_bound(below, sorted_.end(), x);
  const double count_below = static_cast<double>(below - sorted_.begin());
  const double count_equal = static_cast<double>(above - below);
  return (count_below + 0.5 * count_equal) / static_cast<double>(sorted_.size());
}

double SampleSet::TrimmedMean(double q_lo, double q_hi) const {
  if (!(q_lo >= 0.0 && q_hi <= 1.0 && q_lo < q_hi)) {
    throw DomainError("trim range must satisfy 0 <= lo < hi <= 1");
  }
  if (sorted_.empty()) throw EmptyDigestError();
  const double n = static_cast<double>(sorted_.size());
  const double lo = q_lo * n;
  const double hi = q_hi * n;
  long double weighted = 0.0L;
  long double covered = 0.0L;
  const auto first = static_cast<std::size_t>(std::floor(lo));
  for (std::size_t i = first; i < sorted_.size() && static_cast<double>(i) < hi; ++i) {
    const double overlap =
        std::min(hi, static_cast<double>(i + 1)) - std::max(lo, static_cast<double>(i));
    if (overlap <= 0.0) continue;
    weighted += static_cast<long double>(overlap) * sorted_[i];
    covered += overlap;
  }
  return static_cast<double>(weighted / covered);
}

}  // namespace tdigest::oracle
