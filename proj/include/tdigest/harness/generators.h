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
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace tdigest::harness {

enum class Generator { kUniform, kExponential, kAscending, kConstant, kMixture };

std::string_view GeneratorName(Generator generator);
std::optional<Generator> ParseGenerator(std::string_view name);

/// Seeded 64-bit generator: the standard mt19937_64 engine, whose output
/// sequence is fixed by the C++ standard, with distributions built by hand so
/// results do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  /// Uniform on [0, 1): the top 53 bits of one draw scaled by 2^-53.
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  /// Unit exponential, -log(1 - u).
  double Exponential();

 private:
  std::mt19937_64 engine_;
};

/// Seed for one trial: splitmix64 applied to seed + trial.
std::uint64_t TrialSeed(std::uint64_t seed, std::uint64_t trial);

/// uniform       U[0, 1)
/// exponential   unit exponential
/// ascending     0, 1, 2, ... n - 1
/// constant      n copies of 1.0
/// mixture       half the draws from {0, 0.1, ..., 0.9}, half exponential
std::vector<double> GenerateSamples(Generator generator, std::size_t n, Rng& rng);

}  // namespace tdigest::harness
