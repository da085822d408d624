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

#include "tdigest/codec.h"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "tdigest/errors.h"
#include "tdigest/varint.h"

namespace tdigest {

const char* FormatErrorKindName(FormatErrorKind kind) {
  switch (kind) {
    case FormatErrorKind::kBadMagic:
      return "bad magic";
    case FormatErrorKind::kUnsupportedVersion:
      return "unsupported version";
    case FormatErrorKind::kTruncated:
      return "truncated payload";
    case FormatErrorKind::kNonMonotone:
      return "non-monotone means";
    case FormatErrorKind::kBadField:
      return "invalid field";
    case FormatErrorKind::kTrailingData:
      return "trailing data";
    case FormatErrorKind::kNonIntegerWeights:
      return "non-integer weights";
  }
  return "format error";
}

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'T', 'D', 'I', 'G'};
// 2^64 as a double; integer weights must stay below it.
constexpr double kTwoTo64 = 18446744073709551616.0;
constexpr double kTwoTo32 = 4294967296.0;

enum class WireTag : std::uint8_t { kFullF64 = 0, kCompact = 1, kFullCounts = 2 };

bool FitsCounts(std::span<const Centroid> centroids) {
  for (const Centroid& c : centroids) {
    if (c.weight != std::floor(c.weight) || c.weight >= kTwoTo32) return false;
  }
  return true;
}

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  void U8(std::uint8_t v) { out_.push_back(v); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void Varint(std::uint64_t v) { varint::Put(v, out_); }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t remaining() const { return in_.size() - pos_; }

  void Need(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw FormatError(FormatErrorKind::kTruncated, std::string("while reading ") + what);
    }
  }
  std::uint8_t U8(const char* what) {
    Need(1, what);
    return in_[pos_++];
  }
  std::uint32_t U32(const char* what) {
    Need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t U64(const char* what) {
    Need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  float F32(const char* what) { return std::bit_cast<float>(U32(what)); }
  double F64(const char* what) { return std::bit_cast<double>(U64(what)); }
  std::uint64_t Varint(const char* what) {
    const varint::Decoded d = varint::Get(in_.subspan(pos_));
    switch (d.status) {
      case varint::DecodeStatus::kOk:
        pos_ += d.length;
        return d.value;
      case varint::DecodeStatus::kTruncated:
        throw FormatError(FormatErrorKind::kTruncated, std::string("while reading ") + what);
      case varint::DecodeStatus::kOverflow:
        break;
    }
    throw FormatError(FormatErrorKind::kBadField, std::string("varint overflow in ") + what);
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

struct Header {
  WireTag tag;
  ScaleKind scale;
  double delta;
  double min;
  double max;
  double total_weight;
  std::uint32_t count;
};

Header ReadHeader(Reader& reader) {
  std::array<std::uint8_t, 4> magic{};
  for (auto& b : magic) b = reader.U8("magic");
  if (magic != kMagic) throw FormatError(FormatErrorKind::kBadMagic, "");

  const std::uint8_t version = reader.U8("version");
  if (version != kWireVersion) {
    throw FormatError(FormatErrorKind::kUnsupportedVersion, "version " + std::to_string(version));
  }

  Header h{};
  const std::uint8_t encoding = reader.U8("encoding");
  if (encoding > static_cast<std::uint8_t>(WireTag::kFullCounts)) {
    throw FormatError(FormatErrorKind::kBadField, "encoding tag " + std::to_string(encoding));
  }
  h.tag = static_cast<WireTag>(encoding);
  const std::uint8_t scale = reader.U8("scale kind");
  const auto kind = ScaleKindFromByte(scale);
  if (!kind) throw FormatError(FormatErrorKind::kBadField, "scale kind " + std::to_string(scale));
  h.scale = *kind;
  h.delta = reader.F64("compression");
  h.min = reader.F64("min");
  h.max = reader.F64("max");
  h.total_weight = reader.F64("total weight");
  h.count = reader.U32("centroid count");

  if (!(h.delta >= TDigest::kMinDelta) || !std::isfinite(h.delta)) {
    throw FormatError(FormatErrorKind::kBadField, "compression " + std::to_string(h.delta));
  }
  if (!(h.total_weight >= 0.0) || !std::isfinite(h.total_weight)) {
    throw FormatError(FormatErrorKind::kBadField, "total weight");
  }
  if (h.count > 0 && !(std::isfinite(h.min) && std::isfinite(h.max) && h.min <= h.max)) {
    throw FormatError(FormatErrorKind::kBadField, "min/max");
  }
  return h;
}

void CheckMean(double mean, double previous, std::size_t index) {
  if (!std::isfinite(mean)) {
    throw FormatError(FormatErrorKind::kBadField, "mean " + std::to_string(index) + " not finite");
  }
  if (index > 0 && mean < previous) {
    throw FormatError(FormatErrorKind::kNonMonotone, "at centroid " + std::to_string(index));
  }
}

}  // namespace

bool HasIntegerWeights(const TDigest& digest) {
  for (const Centroid& c : digest.centroids()) {
    if (c.weight != std::floor(c.weight) || c.weight >= kTwoTo64) return false;
  }
  return true;
}

std::vector<std::uint8_t> Encode(const TDigest& digest, Encoding encoding) {
  if (encoding == Encoding::kCompact && !HasIntegerWeights(digest)) {
    throw FormatError(FormatErrorKind::kNonIntegerWeights, "use the full encoding");
  }
  const auto centroids = digest.centroids();
  if (centroids.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError(FormatErrorKind::kBadField, "too many centroids");
  }

  WireTag tag = WireTag::kCompact;
  if (encoding == Encoding::kFull) {
    tag = FitsCounts(centroids) ? WireTag::kFullCounts : WireTag::kFullF64;
  }

  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + 16 * centroids.size());
  Writer w(out);
  for (std::uint8_t b : kMagic) w.U8(b);
  w.U8(kWireVersion);
  w.U8(static_cast<std::uint8_t>(tag));
  w.U8(static_cast<std::uint8_t>(digest.scale()));
  w.F64(digest.delta());
  w.F64(digest.min());
  w.F64(digest.max());
  w.F64(digest.total_weight());
  w.U32(static_cast<std::uint32_t>(centroids.size()));

  if (tag == WireTag::kFullF64) {
    for (const Centroid& c : centroids) {
      w.F64(c.mean);
      w.F64(c.weight);
    }
    return out;
  }
  if (tag == WireTag::kFullCounts) {
    for (const Centroid& c : centroids) {
      w.F64(c.mean);
      w.U32(static_cast<std::uint32_t>(c.weight));
    }
    return out;
  }

  if (!centroids.empty()) {
    double decoded = centroids.front().mean;
    w.F64(decoded);
    for (std::size_t i = 1; i < centroids.size(); ++i) {
      // Offsets are taken from the value the decoder will reconstruct, so
      // rounding does not accumulate along the sequence.
      const float offset = static_cast<float>(std::max(0.0, centroids[i].mean - decoded));
      if (!std::isfinite(offset)) {
        throw FormatError(FormatErrorKind::kBadField,
                          "mean offset " + std::to_string(i) + " overflows f32");
      }
      w.F32(offset);
      decoded += static_cast<double>(offset);
    }
    for (const Centroid& c : centroids) w.Varint(static_cast<std::uint64_t>(c.weight));
  }
  return out;
}

Encoding PeekEncoding(std::span<const std::uint8_t> image) {
  Reader reader(image);
  return ReadHeader(reader).tag == WireTag::kCompact ? Encoding::kCompact : Encoding::kFull;
}

TDigest Decode(std::span<const std::uint8_t> image) {
  Reader reader(image);
  const Header h = ReadHeader(reader);

  std::vector<Centroid> centroids(h.count);
  if (h.tag != WireTag::kCompact) {
    const bool counts = h.tag == WireTag::kFullCounts;
    reader.Need((counts ? 12 : 16) * static_cast<std::size_t>(h.count), "centroids");
    for (std::size_t i = 0; i < h.count; ++i) {
      centroids[i].mean = reader.F64("mean");
      centroids[i].weight = counts ? static_cast<double>(reader.U32("weight")) : reader.F64("weight");
      CheckMean(centroids[i].mean, i > 0 ? centroids[i - 1].mean : 0.0, i);
    }
  } else if (h.count > 0) {
    reader.Need(8 + 4 * (static_cast<std::size_t>(h.count) - 1), "means");
    double mean = reader.F64("first mean");
    CheckMean(mean, mean, 0);
    centroids[0].mean = mean;
    for (std::size_t i = 1; i < h.count; ++i) {
      const float offset = reader.F32("mean offset");
      if (!std::isfinite(offset)) {
        throw FormatError(FormatErrorKind::kBadField, "mean offset " + std::to_string(i));
      }
      const double next = mean + static_cast<double>(offset);
      CheckMean(next, mean, i);
      centroids[i].mean = mean = next;
    }
    for (std::size_t i = 0; i < h.count; ++i) {
      centroids[i].weight = static_cast<double>(reader.Varint("weight"));
    }
  }
  if (reader.remaining() != 0) {
    throw FormatError(FormatErrorKind::kTrailingData,
                      std::to_string(reader.remaining()) + " octets after payload");
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < centroids.size(); ++i) {
    if (!(centroids[i].weight > 0.0) || !std::isfinite(centroids[i].weight)) {
      throw FormatError(FormatErrorKind::kBadField, "weight " + std::to_string(i));
    }
    sum += centroids[i].weight;
  }
  if (std::abs(sum - h.total_weight) > 1e-9 * std::max(1.0, h.total_weight)) {
    throw FormatError(FormatErrorKind::kBadField, "centroid weights do not sum to total weight");
  }

  return TDigest::FromCentroids(h.delta, h.scale, std::move(centroids), h.total_weight, h.min,
                                h.max);
}

}  // namespace tdigest
