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
#include <span>
#include <vector>

#include "tdigest/tdigest.h"

namespace tdigest {

/// Binary image of a digest.
///
/// Header (43 octets, little-endian, IEEE-754 doubles):
///
///   offset  size  field
///        0     4  magic "TDIG"
///        4     1  version (0x01)
///        5     1  encoding (0 = full, 1 = compact, 2 = full with counts)
///        6     1  scale kind (0..5, see ScaleKind)
///        7     8  compression
///       15     8  min   (+inf when empty)
///       23     8  max   (-inf when empty)
///       31     8  total weight
///       39     4  centroid count (u32)
///
/// Full payload: per centroid, mean (f64) then weight (f64).
///
/// Full with counts (tag 2): per centroid, mean (f64) then weight (u32).
/// Encode(kFull) writes this form whenever every weight is a whole number
/// below 2^32; otherwise it writes tag 0. Both decode as Encoding::kFull.
///
/// Compact payload: first mean as f64; every later mean as an f32 offset from
/// the previous decoded mean; then every weight as an unsigned base-128
/// varint. Compact requires integer weights.
enum class Encoding : std::uint8_t { kFull = 0, kCompact = 1 };

inline constexpr std::uint8_t kWireVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 43;

/// Throws FormatError(kNonIntegerWeights) when compact is requested for a
/// digest with fractional weights, and FormatError(kBadField) when a compact
/// mean offset overflows f32.
std::vector<std::uint8_t> Encode(const TDigest& digest, Encoding encoding);

/// Throws FormatError with a kind identifying the problem.
TDigest Decode(std::span<const std::uint8_t> image);

/// Encoding named in an image header, without decoding the payload.
Encoding PeekEncoding(std::span<const std::uint8_t> image);

/// True when every centroid weight is a whole number representable as u64.
bool HasIntegerWeights(const TDigest& digest);

}  // namespace tdigest
