#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patternrank/container.hpp"
#include "patternrank/core_model.hpp"

namespace patternrank::bench {

enum class Mode { kDeflate, kV1, kV2, kV1Huffman, kV2Huffman };

inline constexpr Mode kAllModes[] = {Mode::kDeflate, Mode::kV1, Mode::kV2, Mode::kV1Huffman,
                                     Mode::kV2Huffman};

// "deflate", "v1", "v2", "v1h", "v2h".
std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);
// Comma-separated list; throws Error(kUsage) on an unknown name.
std::vector<Mode> parse_modes(std::string_view list);
constexpr bool needs_predefined(Mode m) { return m == Mode::kV2 || m == Mode::kV2Huffman; }

// DEFLATE baseline: zlib's gzip wrapper at its default level.
Bytes gzip_compress(ByteView data);
Bytes gzip_decompress(ByteView data);

// Tag openers ("<package"), closers ("</package>") and attribute names
// ("android:name=") used by the synthetic corpus.
std::vector<std::string> vocabulary();

// Deterministic XML documents resembling app backup payloads, each exactly
// `target_size` bytes. Throws Error(kUsage) if target_size < 1024.
std::vector<Bytes> synth_corpus(std::uint64_t seed, std::size_t file_count,
                                std::size_t target_size);

struct BenchInput {
  std::string name;
  Bytes data;
};

struct BenchRow {
  std::string input;
  Mode mode = Mode::kV1;
  std::uint64_t original_size = 0;
  std::uint64_t compressed_size = 0;
  std::optional<double> ratio;  // absent for empty inputs
  std::uint64_t compress_time_ns = 0;
  std::uint64_t decompress_time_ns = 0;
  bool round_trip_ok = false;
  std::uint64_t output_fnv1a64 = 0;  // digest of the compressed bytes
};

struct BenchReport {
  EngineConfig config;
  std::optional<std::uint64_t> predefined_hash;
  std::size_t predefined_entries = 0;
  std::size_t workers = 1;
  std::size_t timing_runs = 3;
  std::string environment;
  std::vector<BenchRow> rows;
};

struct BenchOptions {
  std::size_t timing_runs = 3;  // median of this many, after one warm-up
};

// Every (input, mode) pair is compressed, decompressed and compared. A
// mismatch throws Error(kRoundTrip) naming the pair; v2 modes without a
// predefined dictionary throw Error(kUsage).
BenchReport run_bench(std::span<const BenchInput> inputs, std::span<const Mode> modes,
                      const EngineConfig& cfg, const PredefinedDictionary* predefined,
                      const BenchOptions& options = {});

std::string to_json(const BenchReport& report);
std::string to_csv(const BenchReport& report);

}  // namespace patternrank::bench
