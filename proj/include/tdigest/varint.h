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
#include <span>
#include <vector>

namespace tdigest::varint {

/// Longest encoding of a 64-bit value.
inline constexpr std::size_t kMaxLength = 10;

/// Appends value as base-128 groups, least significant first, with the high
/// bit of each octet set when more octets follow.
inline void Put(std::uint64_t value, std::vector<std::uint8_t>& out) {
  while (value >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(value | 0x80));
    value >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(value));
}

inline std::size_t Length(std::uint64_t value) {
  std::size_t n = 1;
  while (value >= 0x80) {
    value >>= 7;
    ++n;
  }
  return n;
}

enum class DecodeStatus { kOk, kTruncated, kOverflow };

struct Decoded {
  DecodeStatus status;
  std::uint64_t value;
  std::size_t length;
};

/// Reads one value from the front of in.
inline Decoded Get(std::span<const std::uint8_t> in) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i == kMaxLength) return {DecodeStatus::kOverflow, 0, i};
    const std::uint64_t group = in[i] & 0x7f;
    // The tenth octet may only carry the top bit of a 64-bit value.
    if (i == kMaxLength - 1 && group > 1) return {DecodeStatus::kOverflow, 0, i + 1};
    value |= group << (7 * i);
    if ((in[i] & 0x80) == 0) return {DecodeStatus::kOk, value, i + 1};
  }
  return {in.size() >= kMaxLength ? DecodeStatus::kOverflow : DecodeStatus::kTruncated, 0,
          in.size()};
}

}  // namespace tdigest::varint
