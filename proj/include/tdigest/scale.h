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

#include <cstdint>
#include <optional>
#include <string_view>

namespace tdigest {

/// Scale functions map a quantile q to a notional index k. A cluster whose
/// quantile span maps to more than one unit of k is too large.
///
///   K0   k = delta q / 2
///   K1   k = delta / (2 pi) asin(2q - 1)
///   K2   k = delta / Z log(q / (1 - q)),          Z = 4 log(n / delta) + 24
///   K3   k = delta / Z' log(2q)          q <= 1/2  Z' = 4 log(n / delta) + 21
///        k = -delta / Z' log(2(1 - q))   q > 1/2
///   K2U, K3U are K2 and K3 with the factor delta / Z replaced by delta.
///
/// The K2/K3 families are infinite at q = 0 and q = 1, which forces the
/// extreme clusters to hold a single sample. Z and Z' are clamped to at
/// least 1 so that tiny digests (n well below delta) keep a finite, positive
/// slope.
enum class ScaleKind : std::uint8_t {
  kK0 = 0,
  kK1 = 1,
  kK2 = 2,
  kK3 = 3,
  kK2Unnormalized = 4,
  kK3Unnormalized = 5,
};

inline constexpr ScaleKind kAllScaleKinds[] = {
    ScaleKind::kK0, ScaleKind::kK1, ScaleKind::kK2,
    ScaleKind::kK3, ScaleKind::kK2Unnormalized, ScaleKind::kK3Unnormalized,
};

/// Short names used on the command line: k0 k1 k2 k3 k2u k3u.
std::string_view ScaleKindName(ScaleKind kind);
std::optional<ScaleKind> ParseScaleKind(std::string_view name);
std::optional<ScaleKind> ScaleKindFromByte(std::uint8_t value);

/// A scale function bound to a compression and a total weight. Construct one
/// per merge pass; evaluation is then a handful of flops plus one
/// transcendental call.
class Scale {
 public:
  /// Throws DomainError if delta is not a positive finite number, or if n is
  /// not positive for the normalized K2/K3 kinds.
  Scale(ScaleKind kind, double delta, double n);

  ScaleKind kind() const { return kind_; }
  double delta() const { return delta_; }

  /// Forward map. Throws DomainError unless 0 <= q <= 1.
  double K(double q) const;

  /// Inverse map; k outside the image of [0,1] is clamped, so the result is
  /// always a valid quantile.
  double Q(double k) const;

  /// K(q_right) - K(q_left).
  double KSize(double q_left, double q_right) const { return K(q_right) - K(q_left); }

 private:
  ScaleKind kind_;
  double delta_;
  // Multiplier in front of the kind's shape function.
  double factor_ = 1.0;
};

double ScaleForward(ScaleKind kind, double q, double delta, double n);
double ScaleInverse(ScaleKind kind, double k, double delta, double n);

/// Largest weight a cluster starting at q_left may hold in a digest of total
/// weight n: n * (Q(K(q_left) + 1) - q_left), floored at 1 because a single
/// sample can always be placed.
double MaxClusterWeight(ScaleKind kind, double q_left, double delta, double n);

}  // namespace tdigest
