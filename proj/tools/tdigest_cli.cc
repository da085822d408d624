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

// Command-line front end: builds, queries and merges digest files, and runs
// the accuracy, size, ordering and parallel-merge experiments as CSV.
//
// Exit status: 0 success, 1 usage error, 2 data error, 3 format error.

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "tdigest/codec.h"
#include "tdigest/errors.h"
#include "tdigest/harness/experiments.h"
#include "tdigest/tdigest.h"

namespace {

using tdigest::harness::FormatDouble;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitFormat = 3;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class FileFormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DigestFlags {
  double delta = 100.0;
  std::string scale = "k2";
  std::optional<std::size_t> buffer;
  double stratify_factor = 3.0;
  bool alternate = true;
  std::string encoding = "full";
  std::string out;
};

struct BenchFlags {
  std::string generator = "uniform";
  std::size_t n = 1'000'000;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::string out;
};

void AddDigestOptions(CLI::App* cmd, DigestFlags& flags) {
  cmd->add_option("--delta", flags.delta, "Compression parameter")->capture_default_str();
  cmd->add_option("--scale", flags.scale, "Scale function")
      ->check(CLI::IsMember({"k0", "k1", "k2", "k3", "k2u", "k3u"}))
      ->capture_default_str();
  cmd->add_option("--buffer", flags.buffer, "Buffer capacity (default 10 * ceil(delta))");
  cmd->add_option("--stratify-factor", flags.stratify_factor,
                  "Working compression multiplier used while adding samples")
      ->capture_default_str();
  cmd->add_flag("--alternate,!--no-alternate", flags.alternate,
                "Alternate the merge scan direction")
      ->capture_default_str();
}

void AddEncodingOption(CLI::App* cmd, DigestFlags& flags) {
  cmd->add_option("--encoding", flags.encoding, "Digest file encoding")
      ->check(CLI::IsMember({"full", "compact"}))
      ->capture_default_str();
}

void AddBenchOptions(CLI::App* cmd, BenchFlags& flags) {
  cmd->add_option("--generator", flags.generator, "Sample generator")
      ->check(CLI::IsMember({"uniform", "exponential", "ascending", "constant", "mixture"}))
      ->capture_default_str();
  cmd->add_option("--n", flags.n, "Samples per trial")->capture_default_str();
  cmd->add_option("--trials", flags.trials, "Number of trials")->capture_default_str();
  cmd->add_option("--seed", flags.seed, "Base seed")->capture_default_str();
  cmd->add_option("--out", flags.out, "CSV output file (default stdout)");
}

tdigest::ScaleKind ScaleFromFlag(const std::string& name) {
  const auto kind = tdigest::ParseScaleKind(name);
  if (!kind) throw UsageError("unknown scale " + name);
  return *kind;
}

tdigest::MergePolicy PolicyFromFlags(const DigestFlags& flags) {
  tdigest::MergePolicy policy = tdigest::MergePolicy::Default(flags.delta);
  if (flags.buffer) policy.buffer_capacity = *flags.buffer;
  policy.working_delta_factor = flags.stratify_factor;
  policy.alternate_scan = flags.alternate;
  return policy;
}

tdigest::Encoding EncodingFromFlag(const std::string& name) {
  return name == "compact" ? tdigest::Encoding::kCompact : tdigest::Encoding::kFull;
}

std::vector<std::uint8_t> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFile(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("cannot write " + path);
}

tdigest::TDigest LoadDigest(const std::string& path) {
  const std::vector<std::uint8_t> bytes = ReadFile(path);
  try {
    return tdigest::Decode(bytes);
  } catch (const tdigest::FormatError& e) {
    throw FileFormatError(path + ": " + e.what());
  }
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> ParseDecimal(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

std::vector<double> ReadTextValues(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view text = Trim(line);
    if (text.empty()) continue;
    const auto value = ParseDecimal(text);
    if (!value) {
      throw DataError("line " + std::to_string(line_number) + ": cannot parse '" +
                      std::string(text) + "'");
    }
    if (!std::isfinite(*value)) {
      throw DataError("line " + std::to_string(line_number) + ": value is not finite");
    }
    values.push_back(*value);
  }
  return values;
}

std::vector<double> ReadBinaryValues(std::istream& in) {
  const std::vector<char> bytes{std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>()};
  if (bytes.size() % 8 != 0) {
    throw DataError("input length " + std::to_string(bytes.size()) +
                    " is not a multiple of 8 octets");
  }
  std::vector<double> values(bytes.size() / 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[8 * i + b])) << (8 * b);
    }
    values[i] = std::bit_cast<double>(bits);
    if (!std::isfinite(values[i])) {
      throw DataError("value " + std::to_string(i + 1) + " is not finite");
    }
  }
  return values;
}

std::vector<double> ParseProbes(const std::vector<std::string>& probes) {
  std::vector<double> out;
  for (const std::string& p : probes) {
    const auto value = ParseDecimal(Trim(p));
    if (!value) throw UsageError("cannot parse probe '" + p + "'");
    out.push_back(*value);
  }
  return out;
}

class CsvSink {
 public:
  explicit CsvSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw DataError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

tdigest::harness::ExperimentConfig ConfigFromFlags(const DigestFlags& digest,
                                                   const BenchFlags& bench) {
  tdigest::harness::ExperimentConfig config;
  const auto generator = tdigest::harness::ParseGenerator(bench.generator);
  if (!generator) throw UsageError("unknown generator " + bench.generator);
  config.generator = *generator;
  config.sample_count = bench.n;
  config.trials = bench.trials;
  config.seed = bench.seed;
  config.delta = digest.delta;
  config.scale = ScaleFromFlag(digest.scale);
  config.policy = PolicyFromFlags(digest);
  config.Validate();
  return config;
}

// Prints mean and standard deviation of `value` for every distinct key, in
// first-seen order, to stderr.
template <typename Row, typename KeyFn, typename ValueFn>
void PrintSummary(const std::vector<Row>& rows, KeyFn key, ValueFn value) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> groups;
  for (const Row& row : rows) {
    const std::string k = key(row);
    auto [it, inserted] = groups.try_emplace(k);
    if (inserted) order.push_back(k);
    it->second.push_back(value(row));
  }
  for (const std::string& k : order) {
    const auto s = tdigest::harness::Summarize(groups[k]);
    std::cerr << k << " mean=" << FormatDouble(s.mean) << " sd=" << FormatDouble(s.stddev) << '\n';
  }
}

int RunMain(int argc, char** argv) {
  CLI::App app{"t-digest builder, query tool and experiment harness"};
  app.require_subcommand(1);

  DigestFlags build_flags;
  std::string build_format = "text";
  std::string build_input;
  CLI::App* build = app.add_subcommand("build", "Build a digest file from samples");
  AddDigestOptions(build, build_flags);
  AddEncodingOption(build, build_flags);
  build->add_option("--format", build_format, "Input format")
      ->check(CLI::IsMember({"text", "f64le"}))
      ->capture_default_str();
  build->add_option("--out", build_flags.out, "Digest file to write")->required();
  build->add_option("input", build_input, "Input file (default stdin)");

  std::string query_file;
  std::vector<std::string> query_probes;
  CLI::App* quantile = app.add_subcommand("quantile", "Estimate quantiles");
  CLI::App* cdf = app.add_subcommand("cdf", "Estimate CDF values");
  CLI::App* tmean = app.add_subcommand("tmean", "Estimate a trimmed mean between two quantiles");
  for (CLI::App* cmd : {quantile, cdf, tmean}) {
    cmd->add_option("digest", query_file, "Digest file")->required();
    cmd->add_option("probes", query_probes, "Probe values")->required();
  }

  DigestFlags merge_flags;
  std::optional<double> merge_delta;
  std::vector<std::string> merge_inputs;
  CLI::App* merge = app.add_subcommand("merge", "Merge digest files");
  merge->add_option("--delta", merge_delta, "Output compression (default smallest input)");
  AddEncodingOption(merge, merge_flags);
  merge->add_option("--out", merge_flags.out, "Digest file to write")->required();
  merge->add_option("inputs", merge_inputs, "Digest files")->required();

  DigestFlags bench_digest;
  BenchFlags bench;
  CLI::App* bench_accuracy =
      app.add_subcommand("bench-accuracy", "Quantile error per scale function");
  CLI::App* bench_size = app.add_subcommand("bench-size", "Error and size across compressions");
  CLI::App* bench_overlap =
      app.add_subcommand("bench-overlap", "Cluster ordering under two merge policies");
  CLI::App* bench_parallel =
      app.add_subcommand("bench-parallel", "Direct build against partitioned merges");
  for (CLI::App* cmd : {bench_accuracy, bench_size, bench_overlap, bench_parallel}) {
    AddDigestOptions(cmd, bench_digest);
    AddBenchOptions(cmd, bench);
  }
  AddEncodingOption(bench_size, bench_digest);
  std::vector<std::size_t> ways = {5, 20, 100};
  double sub_delta = 200.0;
  bench_parallel->add_option("--ways", ways, "Partition counts")->delimiter(',');
  bench_parallel->add_option("--sub-delta", sub_delta, "Sub-digest compression")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*build) {
    const tdigest::TDigest probe(build_flags.delta, ScaleFromFlag(build_flags.scale),
                                 PolicyFromFlags(build_flags));
    std::vector<double> values;
    std::ifstream file;
    std::istream* in = &std::cin;
    if (!build_input.empty() && build_input != "-") {
      file.open(build_input, std::ios::binary);
      if (!file) throw DataError("cannot open " + build_input);
      in = &file;
    }
    values = build_format == "f64le" ? ReadBinaryValues(*in) : ReadTextValues(*in);

    tdigest::DigestBuilder builder(build_flags.delta, probe.scale(), probe.policy());
    for (double v : values) builder.Add(v);
    const tdigest::TDigest digest = builder.Finish();
    WriteFile(build_flags.out, tdigest::Encode(digest, EncodingFromFlag(build_flags.encoding)));
    std::cout << "centroids " << digest.size() << '\n'
              << "total_weight " << FormatDouble(digest.total_weight()) << '\n'
              << "min " << FormatDouble(digest.min()) << '\n'
              << "max " << FormatDouble(digest.max()) << '\n';
    return 0;
  }

  if (*quantile || *cdf || *tmean) {
    const std::vector<double> probes = ParseProbes(query_probes);
    const tdigest::TDigest digest = LoadDigest(query_file);
    if (*tmean) {
      if (probes.size() != 2) throw UsageError("tmean takes exactly two quantiles");
      std::cout << FormatDouble(digest.TrimmedMean(probes[0], probes[1])) << '\n';
      return 0;
    }
    for (double p : probes) {
      std::cout << FormatDouble(*quantile ? digest.Quantile(p) : digest.Cdf(p)) << '\n';
    }
    return 0;
  }

  if (*merge) {
    std::vector<tdigest::TDigest> inputs;
    for (const std::string& path : merge_inputs) inputs.push_back(LoadDigest(path));
    double out_delta = inputs.front().delta();
    for (const auto& d : inputs) out_delta = std::min(out_delta, d.delta());
    if (merge_delta) out_delta = *merge_delta;
    const tdigest::TDigest merged = tdigest::TDigest::Merge(inputs, out_delta);
    WriteFile(merge_flags.out, tdigest::Encode(merged, EncodingFromFlag(merge_flags.encoding)));
    std::cout << "centroids " << merged.size() << '\n'
              << "total_weight " << FormatDouble(merged.total_weight()) << '\n';
    return 0;
  }

  const tdigest::harness::ExperimentConfig config = ConfigFromFlags(bench_digest, bench);
  CsvSink sink(bench.out);

  if (*bench_accuracy) {
    std::vector<tdigest::ScaleKind> scales = {tdigest::ScaleKind::kK0, tdigest::ScaleKind::kK1,
                                              tdigest::ScaleKind::kK2, tdigest::ScaleKind::kK3};
    if (bench_accuracy->count("--scale") > 0) scales = {config.scale};
    const auto qs = tdigest::harness::AccuracyQuantiles();
    const auto rows = tdigest::harness::RunAccuracy(config, scales, qs);
    tdigest::harness::WriteCsv(sink.stream(), std::span(rows));
    PrintSummary(
        rows,
        [](const auto& r) {
          return std::string(tdigest::ScaleKindName(r.scale)) + " q=" + FormatDouble(r.q);
        },
        [](const auto& r) { return r.abs_error; });
  } else if (*bench_size) {
    const auto deltas = tdigest::harness::SizeSweepDeltas();
    const auto qs = tdigest::harness::SizeSweepQuantiles();
    const auto rows = tdigest::harness::RunSizeSweep(config, deltas, qs,
                                                     EncodingFromFlag(bench_digest.encoding));
    tdigest::harness::WriteCsv(sink.stream(), std::span(rows));
  } else if (*bench_overlap) {
    const auto rows = tdigest::harness::RunOverlap(config);
    tdigest::harness::WriteCsv(sink.stream(), std::span(rows));
    PrintSummary(
        rows, [](const auto& r) { return r.policy; },
        [](const auto& r) { return static_cast<double>(r.offset); });
  } else if (*bench_parallel) {
    const auto qs = tdigest::harness::ParallelQuantiles();
    const auto rows = tdigest::harness::RunParallel(config, ways, sub_delta, qs);
    tdigest::harness::WriteCsv(sink.stream(), std::span(rows));
    PrintSummary(
        rows,
        [](const auto& r) {
          return std::to_string(r.ways) + " " + r.strategy + " q=" + FormatDouble(r.q);
        },
        [](const auto& r) { return r.abs_error; });
  }
  sink.stream().flush();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return RunMain(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tdigest::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FileFormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const tdigest::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
}
