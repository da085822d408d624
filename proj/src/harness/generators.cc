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

#include "tdigest/harness/generators.h"

#include <cmath>

namespace tdigest::harness {

namespace {

constexpr Generator kGenerators[] = {Generator::kUniform, Generator::kExponential,
                                     Generator::kAscending, Generator::kConstant,
                                     Generator::kMixture};

}  // namespace

std::string_view GeneratorName(Generator generator) {
  switch (generator) {
    case Generator::kUniform:
      return "uniform";
    case Generator::kExponential:
      return "exponential";
    case Generator::kAscending:
      return "ascending";
    case Generator::kConstant:
      return "constant";
    case Generator::kMixture:
      return "mixture";
  }
  return "?";
}

std::optional<Generator> ParseGenerator(std::string_view name) {
  for (Generator g : kGenerators) {
    if (GeneratorName(g) == name) return g;
  }
  return std::nullopt;
}

double Rng::Exponential() { return -std::log1p(-Uniform()); }

std::uint64_t TrialSeed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + trial * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> GenerateSamples(Generator generator, std::size_t n, Rng& rng) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (generator) {
      case Generator::kUniform:
        out.push_back(rng.Uniform());
        break;
      case Generator::kExponential:
        out.push_back(rng.Exponential());
        break;
      case Generator::kAscending:
        out.push_back(static_cast<double>(i));
        break;
      case Generator::kConstant:
        out.push_back(1.0);
        break;
      case Generator::kMixture:
        if (rng.Next() & 1) {
          out.push_back(static_cast<double>(rng.Next() % 10) / 10.0);
        } else {
          out.push_back(rng.Exponential());
        }
        break;
    }
  }
  return out;
}

}  // namespace tdigest::harness
