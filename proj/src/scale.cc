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

#include "tdigest/scale.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tdigest/errors.h"

namespace tdigest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Normalizer(double n, double delta, double offset) {
  return std::max(1.0, 4.0 * std::log(n / delta) + offset);
}

// log(q / (1 - q)) without forming the ratio.
double Logit(double q) {
  if (q == 0.0) return -kInf;
  if (q == 1.0) return kInf;
  return std::log(q) - std::log1p(-q);
}

double Logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// log(2q) below the median, -log(2(1 - q)) above it.
double TwoSidedLog(double q) {
  if (q <= 0.5) return q == 0.0 ? -kInf : std::log(2.0 * q);
  return q == 1.0 ? kInf : -std::log(2.0 * (1.0 - q));
}

double TwoSidedExp(double u) {
  if (u <= 0.0) return 0.5 * std::exp(u);
  return 1.0 - 0.5 * std::exp(-u);
}

}  // namespace

std::string_view ScaleKindName(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::kK0:
      return "k0";
    case ScaleKind::kK1:
      return "k1";
    case ScaleKind::kK2:
      return "k2";
    case ScaleKind::kK3:
      return "k3";
    case ScaleKind::kK2Unnormalized:
      return "k2u";
    case ScaleKind::kK3Unnormalized:
      return "k3u";
  }
  return "?";
}

std::optional<ScaleKind> ParseScaleKind(std::string_view name) {
  for (ScaleKind kind : kAllScaleKinds) {
    if (ScaleKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

std::optional<ScaleKind> ScaleKindFromByte(std::uint8_t value) {
  if (value > static_cast<std::uint8_t>(ScaleKind::kK3Unnormalized)) return std::nullopt;
  return static_cast<ScaleKind>(value);
}

Scale::Scale(ScaleKind kind, double delta, double n) : kind_(kind), delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("compression must be positive and finite, got " + std::to_string(delta));
  }
  switch (kind) {
    case ScaleKind::kK0:
      factor_ = delta / 2.0;
      break;
    case ScaleKind::kK1:
      factor_ = delta / (2.0 * std::numbers::pi);
      break;
    case ScaleKind::kK2:
    case ScaleKind::kK3:
      if (!(n > 0.0)) throw DomainError("total weight must be positive for k2/k3");
      factor_ = delta / Normalizer(n, delta, kind == ScaleKind::kK2 ? 24.0 : 21.0);
      break;
    case ScaleKind::kK2Unnormalized:
    case ScaleKind::kK3Unnormalized:
      factor_ = delta;
      break;
  }
}

double Scale::K(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("quantile must lie in [0, 1], got " + std::to_string(q));
  }
  switch (kind_) {
    case ScaleKind::kK0:
      return factor_ * q;
    case ScaleKind::kK1:
      return factor_ * std::asin(2.0 * q - 1.0);
    case ScaleKind::kK2:
    case ScaleKind::kK2Unnormalized:
      return factor_ * Logit(q);
    case ScaleKind::kK3:
    case ScaleKind::kK3Unnormalized:
      return factor_ * TwoSidedLog(q);
  }
  return 0.0;
}

double Scale::Q(double k) const {
  if (std::isnan(k)) throw DomainError("scale index is NaN");
  double q = 0.0;
  switch (kind_) {
    case ScaleKind::kK0:
      q = k / factor_;
      break;
    case ScaleKind::kK1: {
      const double quarter = delta_ / 4.0;
      q = (std::sin(std::clamp(k, -quarter, quarter) / factor_) + 1.0) / 2.0;
      break;
    }
    case ScaleKind::kK2:
    case ScaleKind::kK2Unnormalized:
      q = Logistic(k / factor_);
      break;
    case ScaleKind::kK3:
    case ScaleKind::kK3Unnormalized:
      q = TwoSidedExp(k / factor_);
      break;
  }
  return std::clamp(q, 0.0, 1.0);
}

double ScaleForward(ScaleKind kind, double q, double delta, double n) {
  return Scale(kind, delta, n).K(q);
}

double ScaleInverse(ScaleKind kind, double k, double delta, double n) {
  return Scale(kind, delta, n).Q(k);
}

double MaxClusterWeight(ScaleKind kind, double q_left, double delta, double n) {
  const Scale scale(kind, delta, n);
  const double q_limit = scale.Q(scale.K(q_left) + 1.0);
  return std::max(1.0, n * (q_limit - q_left));
}

}  // namespace tdigest
