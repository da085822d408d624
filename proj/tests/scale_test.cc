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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "tdigest/errors.h"
#include "test_util.h"

namespace tdigest {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Inverse by bisection on the forward map; independent of the closed forms.
double BisectInverse(ScaleKind kind, double k, double delta, double n) {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ScaleForward(kind, mid, delta, n) < k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TEST(ScaleTest, ForwardExamples) {
  EXPECT_DOUBLE_EQ(ScaleForward(ScaleKind::kK0, 1.0, 100, 12345), 50.0);
  EXPECT_DOUBLE_EQ(ScaleForward(ScaleKind::kK1, 0.0, 100, 1), -25.0);
  EXPECT_DOUBLE_EQ(ScaleForward(ScaleKind::kK1, 0.5, 10, 1), 0.0);
  EXPECT_DOUBLE_EQ(ScaleForward(ScaleKind::kK2, 0.5, 100, 1e6), 0.0);
  EXPECT_DOUBLE_EQ(ScaleForward(ScaleKind::kK3, 0.5, 100, 1e6), 0.0);
}

TEST(ScaleTest, InverseExamples) {
  EXPECT_DOUBLE_EQ(ScaleInverse(ScaleKind::kK1, 25, 100, 1), 1.0);
  EXPECT_DOUBLE_EQ(ScaleInverse(ScaleKind::kK0, 12.5, 100, 1), 0.25);
}

TEST(ScaleTest, LogScalesAreInfiniteAtTheEnds) {
  for (ScaleKind kind : {ScaleKind::kK2, ScaleKind::kK3, ScaleKind::kK2Unnormalized,
                         ScaleKind::kK3Unnormalized}) {
    SCOPED_TRACE(std::string(ScaleKindName(kind)));
    EXPECT_EQ(ScaleForward(kind, 0.0, 100, 1e6), -kInf);
    EXPECT_EQ(ScaleForward(kind, 1.0, 100, 1e6), kInf);
    EXPECT_EQ(ScaleInverse(kind, -kInf, 100, 1e6), 0.0);
    EXPECT_EQ(ScaleInverse(kind, kInf, 100, 1e6), 1.0);
  }
}

TEST(ScaleTest, NormalizerMatchesClosedForm) {
  const double delta = 100;
  const double n = 1e6;
  const double z2 = 4 * std::log(n / delta) + 24;
  const double z3 = 4 * std::log(n / delta) + 21;
  const double q = 0.2;
  EXPECT_NEAR(ScaleForward(ScaleKind::kK2, q, delta, n), delta / z2 * std::log(q / (1 - q)),
              1e-12);
  EXPECT_NEAR(ScaleForward(ScaleKind::kK3, q, delta, n), delta / z3 * std::log(2 * q), 1e-12);
  EXPECT_NEAR(ScaleForward(ScaleKind::kK3, 1 - q, delta, n),
              -delta / z3 * std::log(2 * q), 1e-12);
  EXPECT_NEAR(ScaleForward(ScaleKind::kK2Unnormalized, q, delta, n),
              delta * std::log(q / (1 - q)), 1e-12);
}

TEST(ScaleTest, NormalizerIsClampedForTinyDigests) {
  // 4 log(0.01 / 100) + 21 is negative; the clamp keeps the map increasing.
  const double a = ScaleForward(ScaleKind::kK3, 0.2, 100, 0.01);
  const double b = ScaleForward(ScaleKind::kK3, 0.3, 100, 0.01);
  EXPECT_LT(a, b);
  EXPECT_NEAR(a, 100 * std::log(0.4), 1e-12);
}

TEST(ScaleTest, InverseMatchesBisection) {
  testing::ForEachCase(11, 400, [](harness::Rng& rng, int) {
    const ScaleKind kind = kAllScaleKinds[testing::UniformInt(rng, 0, 5)];
    const double delta = 10 + rng.Uniform() * 990;
    const double n = std::pow(10.0, 1 + rng.Uniform() * 8);
    const double q = rng.Uniform();
    const double k = ScaleForward(kind, q, delta, n);
    const double q_closed = ScaleInverse(kind, k, delta, n);
    const double q_bisect = BisectInverse(kind, k, delta, n);
    EXPECT_NEAR(q_closed, q_bisect, 1e-9) << ScaleKindName(kind) << " q=" << q;
    EXPECT_NEAR(q_closed, q, 1e-9) << ScaleKindName(kind);
  });
}

TEST(ScaleTest, ForwardIsNonDecreasing) {
  for (ScaleKind kind : kAllScaleKinds) {
    double previous = -kInf;
    for (int i = 0; i <= 1000; ++i) {
      const double k = ScaleForward(kind, i / 1000.0, 100, 1e5);
      EXPECT_GE(k, previous) << ScaleKindName(kind) << " i=" << i;
      previous = k;
    }
  }
}

TEST(ScaleTest, InverseClampsOutOfRangeIndices) {
  EXPECT_EQ(ScaleInverse(ScaleKind::kK0, -5, 100, 1), 0.0);
  EXPECT_EQ(ScaleInverse(ScaleKind::kK0, 60, 100, 1), 1.0);
  EXPECT_EQ(ScaleInverse(ScaleKind::kK1, -40, 100, 1), 0.0);
  EXPECT_EQ(ScaleInverse(ScaleKind::kK1, 40, 100, 1), 1.0);
}

TEST(ScaleTest, MaxClusterWeightExamples) {
  EXPECT_NEAR(MaxClusterWeight(ScaleKind::kK0, 0, 100, 1e6), 20000, 1e-6);
  EXPECT_EQ(MaxClusterWeight(ScaleKind::kK3, 0, 100, 1e6), 1.0);
  EXPECT_EQ(MaxClusterWeight(ScaleKind::kK2, 0, 100, 1e6), 1.0);

  // n * q where k1(q) = -24, found by root-finding on the forward map.
  const double by_bisection = 1e6 * BisectInverse(ScaleKind::kK1, -24, 100, 1e6);
  const double closed = MaxClusterWeight(ScaleKind::kK1, 0, 100, 1e6);
  EXPECT_NEAR(closed, by_bisection, 1e-6);
  EXPECT_NEAR(closed, 986.635785864219, 1e-8);
}

TEST(ScaleTest, MaxClusterWeightHasOneSampleFloor) {
  EXPECT_EQ(MaxClusterWeight(ScaleKind::kK1, 0, 1000, 10), 1.0);
}

// Cluster size ratio between two tail quantiles divided by the ratio the
// limiting shape predicts. A large compression keeps clusters small relative
// to q, where the limiting shape applies.
double TailShapeRatio(ScaleKind kind, double (*shape)(double)) {
  const double n = 1e15;
  const double delta = 1e5;
  const double a = MaxClusterWeight(kind, 1e-2, delta, n);
  const double b = MaxClusterWeight(kind, 1e-4, delta, n);
  return (a / b) / (shape(1e-2) / shape(1e-4));
}

TEST(ScaleTest, TailClusterSizesFollowTheScaleShape) {
  EXPECT_NEAR(TailShapeRatio(ScaleKind::kK1, [](double q) { return std::sqrt(q * (1 - q)); }),
              1.0, 0.02);
  EXPECT_NEAR(TailShapeRatio(ScaleKind::kK2, [](double q) { return q * (1 - q); }), 1.0, 0.02);
  EXPECT_NEAR(TailShapeRatio(ScaleKind::kK3, [](double q) { return std::min(q, 1 - q); }), 1.0,
              0.02);
}

TEST(ScaleTest, DomainErrors) {
  EXPECT_THROW(ScaleForward(ScaleKind::kK0, -0.1, 100, 1), DomainError);
  EXPECT_THROW(ScaleForward(ScaleKind::kK0, 1.1, 100, 1), DomainError);
  EXPECT_THROW(ScaleForward(ScaleKind::kK1, std::nan(""), 100, 1), DomainError);
  EXPECT_THROW(Scale(ScaleKind::kK0, 0, 1), DomainError);
  EXPECT_THROW(Scale(ScaleKind::kK0, kInf, 1), DomainError);
  EXPECT_THROW(Scale(ScaleKind::kK2, 100, 0), DomainError);
  EXPECT_THROW(ScaleInverse(ScaleKind::kK2, std::nan(""), 100, 10), DomainError);
}

TEST(ScaleTest, NamesRoundTrip) {
  for (ScaleKind kind : kAllScaleKinds) {
    EXPECT_EQ(ParseScaleKind(ScaleKindName(kind)), kind);
    EXPECT_EQ(ScaleKindFromByte(static_cast<std::uint8_t>(kind)), kind);
  }
  EXPECT_FALSE(ParseScaleKind("k9").has_value());
  EXPECT_FALSE(ScaleKindFromByte(6).has_value());
}

}  // namespace
}  // namespace tdigest
