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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tdigest/errors.h"
#include "tdigest/oracle.h"
#include "tdigest/tdigest.h"
#include "test_util.h"

namespace tdigest {
namespace {

using testing::BuildDigest;

TDigest Singletons(const std::vector<double>& values, ScaleKind kind) {
  const double delta = std::max(2.0 * static_cast<double>(values.size()), 10.0);
  return BuildDigest(values, delta, kind);
}

TEST(InterpolationTest, SingletonDigestsReproduceTheOracle) {
  testing::ForEachCase(3, 200, [](harness::Rng& rng, int) {
    const std::vector<double> values =
        testing::RandomValues(rng, testing::UniformInt(rng, 1, 500));
    const ScaleKind kind = (rng.Next() & 1) ? ScaleKind::kK0 : ScaleKind::kK1;
    const TDigest digest = Singletons(values, kind);
    ASSERT_EQ(digest.size(), values.size());
    const oracle::SampleSet exact(values);
    for (int i = 0; i <= 100; ++i) {
      const double q = i / 100.0;
      const double want = exact.Quantile(q);
      EXPECT_NEAR(digest.Quantile(q), want, 1e-12 * std::max(1.0, std::abs(want))) << "q=" << q;
    }
    for (double x : values) EXPECT_NEAR(digest.Cdf(x), exact.Cdf(x), 1e-12) << "x=" << x;
    for (double lo : {0.0, 0.1, 0.33}) {
      for (double hi : {0.5, 0.9, 1.0}) {
        const double want = exact.TrimmedMean(lo, hi);
        EXPECT_NEAR(digest.TrimmedMean(lo, hi), want, 1e-9 * std::max(1.0, std::abs(want)));
      }
    }
  });
}

TEST(InterpolationTest, QuantileAndCdfAreMonotone) {
  testing::ForEachCase(5, 60, [](harness::Rng& rng, int) {
    const std::vector<double> values =
        testing::RandomValues(rng, testing::UniformInt(rng, 1, 20000));
    const ScaleKind kind = kAllScaleKinds[testing::UniformInt(rng, 0, 5)];
    const TDigest digest = BuildDigest(values, 10 + 200 * rng.Uniform(), kind);
    double q_prev = digest.Quantile(0);
    EXPECT_EQ(q_prev, digest.min());
    for (int i = 1; i <= 1000; ++i) {
      const double v = digest.Quantile(i / 1000.0);
      ASSERT_GE(v, q_prev);
      ASSERT_LE(v, digest.max());
      q_prev = v;
    }
    double c_prev = 0;
    const double span = digest.max() - digest.min();
    for (int i = -10; i <= 1010; ++i) {
      const double x = digest.min() + span * i / 1000.0;
      const double c = digest.Cdf(x);
      ASSERT_GE(c, c_prev) << "x=" << x;
      ASSERT_LE(c, 1.0);
      c_prev = c;
    }
  });
}

TEST(InterpolationTest, CdfOutsideRange) {
  const TDigest digest = BuildDigest({3, 1, 2}, 100, ScaleKind::kK2);
  EXPECT_EQ(digest.Cdf(0.999), 0.0);
  EXPECT_EQ(digest.Cdf(3.001), 1.0);
  EXPECT_THROW(digest.Cdf(std::nan("")), DomainError);
}

TEST(InterpolationTest, SingleCentroid) {
  const TDigest one = BuildDigest({4}, 100, ScaleKind::kK1);
  EXPECT_EQ(one.Quantile(0.3), 4.0);
  EXPECT_EQ(one.Cdf(4), 0.5);

  // A single weight-2 centroid is read as two samples at the extremes.
  TDigest two = TDigest::FromCentroids(100, ScaleKind::kK0, {{2, 2}}, 2, 1, 3);
  EXPECT_EQ(two.Quantile(0.25), 1.0);
  EXPECT_EQ(two.Quantile(0.5), 2.0);
  EXPECT_EQ(two.Quantile(0.75), 3.0);
  EXPECT_EQ(two.Cdf(1), 0.25);
  EXPECT_EQ(two.Cdf(3), 0.75);

  TDigest many = TDigest::FromCentroids(100, ScaleKind::kK0, {{5, 10}}, 10, 0, 10);
  EXPECT_EQ(many.Quantile(0.05), 0.0);
  EXPECT_EQ(many.Quantile(0.5), 5.0);
  EXPECT_EQ(many.Quantile(0.95), 10.0);
}

TEST(InterpolationTest, WeightTwoEndClusterMirrorsThroughTheMean) {
  // First cluster holds two samples with mean 2 and the minimum 1, so the
  // other sample is at 3.
  TDigest digest =
      TDigest::FromCentroids(100, ScaleKind::kK0, {{2, 2}, {10, 1}}, 3, 1, 10);
  EXPECT_EQ(digest.Quantile(0.5 / 3), 1.0);
  EXPECT_EQ(digest.Quantile(1.5 / 3), 3.0);
  EXPECT_EQ(digest.Quantile(2.5 / 3), 10.0);
  EXPECT_DOUBLE_EQ(digest.Quantile(2.0 / 3), 6.5);
}

TEST(InterpolationTest, HeavyInteriorCentroidInterpolatesLinearly) {
  TDigest digest = TDigest::FromCentroids(100, ScaleKind::kK0,
                                          {{0, 1}, {10, 8}, {20, 1}}, 10, 0, 20);
  // Knots at ranks 0.5, 5 and 9.5.
  EXPECT_EQ(digest.Quantile(0.5), 10.0);
  EXPECT_DOUBLE_EQ(digest.Quantile(0.275), 5.0);
  EXPECT_DOUBLE_EQ(digest.Cdf(5), 0.275);
}

TEST(InterpolationTest, TrimmedMeanIsProRata) {
  TDigest digest = TDigest::FromCentroids(100, ScaleKind::kK0, {{1, 2}, {4, 2}}, 4, 0, 5);
  EXPECT_DOUBLE_EQ(digest.TrimmedMean(0, 1), 2.5);
  EXPECT_DOUBLE_EQ(digest.TrimmedMean(0.25, 1), (1 + 2 * 4) / 3.0);
  EXPECT_THROW(digest.TrimmedMean(0.5, 0.5), DomainError);
  EXPECT_THROW(digest.TrimmedMean(-0.1, 0.5), DomainError);
}

TEST(InterpolationTest, DuplicatesStepNearTheirMidpoint) {
  std::vector<double> values(50, 1.0);
  values.insert(values.end(), 50, 2.0);
  const TDigest digest = BuildDigest(values, 100, ScaleKind::kK2);
  // Only the cluster straddling the two values blurs the steps.
  EXPECT_NEAR(digest.Cdf(1.0), 0.25, 0.03);
  EXPECT_NEAR(digest.Cdf(2.0), 0.75, 0.03);
  EXPECT_LT(digest.Cdf(1.0), digest.Cdf(1.5));
  EXPECT_LT(digest.Cdf(1.5), digest.Cdf(2.0));

  const TDigest constant = BuildDigest(std::vector<double>(1000, 3.0), 50, ScaleKind::kK1);
  EXPECT_EQ(constant.Cdf(3.0), 0.5);
}

}  // namespace
}  // namespace tdigest
