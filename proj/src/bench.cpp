#include "patternrank/bench.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "patternrank/codecs.hpp"

namespace patternrank::bench {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kDeflate: return "deflate";
    case Mode::kV1: return "v1";
    case Mode::kV2: return "v2";
    case Mode::kV1Huffman: return "v1h";
    case Mode::kV2Huffman: return "v2h";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (const Mode m : kAllModes) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<Mode> parse_modes(std::string_view list) {
  std::vector<Mode> modes;
  while (!list.empty()) {
    const std::size_t comma = list.find(',');
    const std::string_view name = list.substr(0, comma);
    const auto mode = parse_mode(name);
    if (!mode) throw Error(ErrorCode::kUsage, "unknown bench mode '" + std::string(name) + "'");
    if (std::find(modes.begin(), modes.end(), *mode) == modes.end()) modes.push_back(*mode);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (modes.empty()) throw Error(ErrorCode::kUsage, "empty mode list");
  return modes;
}

Bytes gzip_compress(ByteView data) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) !=
      Z_OK) {
    throw Error(ErrorCode::kInternal, "deflateInit2 failed");
  }
  Bytes out(deflateBound(&zs, data.size()), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorCode::kInternal, "deflate did not finish");
  return out;
}

Bytes gzip_decompress(ByteView data) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 16) != Z_OK) throw Error(ErrorCode::kInternal, "inflateInit2 failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  Bytes out;
  std::array<char, 1 << 16> chunk;
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(chunk.data());
    zs.avail_out = static_cast<uInt>(chunk.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kCorrupt, "gzip stream is damaged");
    }
    out.append(chunk.data(), chunk.size() - zs.avail_out);
  }
  inflateEnd(&zs);
  return out;
}

namespace {

constexpr std::array<std::string_view, 20> kTags = {
    "package",     "application", "activity", "service",        "receiver",
    "provider",    "uses-permission", "meta-data", "intent-filter", "action",
    "category",    "data",        "string",   "int",            "boolean",
    "long",        "map",         "set",      "item",           "preference"};

constexpr std::array<std::string_view, 15> kAttributes = {
    "android:name=",        "android:value=",   "android:label=",     "android:icon=",
    "android:exported=",    "android:enabled=", "android:permission=", "android:versionCode=",
    "android:versionName=", "name=",            "value=",             "package=",
    "android:theme=",       "android:process=", "android:authorities="};

constexpr std::array<std::string_view, 24> kWords = {
    "app",    "example", "settings", "sync",   "media",  "camera", "contacts", "backup",
    "google", "android", "provider", "widget", "notes",  "music",  "photos",   "maps",
    "mail",   "clock",   "weather",  "launcher", "gallery", "calendar", "browser", "keyboard"};

// Only raw mt19937_64 output is used; its sequence is fixed by the standard,
// unlike the <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

class XmlSynth {
 public:
  explicit XmlSynth(std::uint64_t seed) : rng_(seed) {
    for (std::size_t i = 0; i < 160; ++i) values_.push_back(make_value());
    double total = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      total += 1.0 / static_cast<double>(i + 1);
      cumulative_.push_back(total);
    }
    for (double& c : cumulative_) c /= total;
  }

  Bytes document(std::size_t target_size) {
    const std::string_view header = "<?xml version='1.0' encoding='utf-8' standalone='yes' ?>\n";
    const std::string_view footer = "</map>\n";
    Bytes out(header);
    out += "<map>\n";
    for (int misses = 0; misses < 16;) {
      Bytes element;
      emit_element(element, 1);
      if (out.size() + element.size() + footer.size() > target_size) {
        ++misses;
        continue;
      }
      out += element;
    }
    out.append(target_size - out.size() - footer.size(), '\n');
    out += footer;
    return out;
  }

 private:
  std::string_view word() { return kWords[rng_.below(kWords.size())]; }

  Bytes make_value() {
    switch (rng_.below(5)) {
      case 0: return "com." + Bytes(word()) + "." + Bytes(word());
      case 1: return rng_.chance(0.5) ? "true" : "false";
      case 2: return std::to_string(rng_.below(10000));
      case 3:
        return "com." + Bytes(word()) + "." + Bytes(word()) + ".Main" +
               std::to_string(rng_.below(50)) + "Activity";
      default: return "@string/" + Bytes(word()) + "_" + Bytes(word());
    }
  }

  const Bytes& zipf_value() {
    const double u = rng_.unit();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return values_[std::min<std::size_t>(it - cumulative_.begin(), values_.size() - 1)];
  }

  void emit_element(Bytes& out, int depth) {
    // Earlier tags are favoured so some dominate, as in real manifests.
    const std::size_t tag_index = std::min(rng_.below(kTags.size()), rng_.below(kTags.size()));
    const std::string_view tag = kTags[tag_index];
    out.append(static_cast<std::size_t>(depth) * 4, ' ');
    out += '<';
    out += tag;
    const std::uint64_t attributes = 1 + rng_.below(3);
    for (std::uint64_t a = 0; a < attributes; ++a) {
      out += ' ';
      out += kAttributes[std::min(rng_.below(kAttributes.size()), rng_.below(kAttributes.size()))];
      out += '"';
      if (rng_.chance(0.15)) {
        out += std::to_string(1600000000000ULL + rng_.below(100000000000ULL));
      } else {
        out += zipf_value();
      }
      out += '"';
    }
    if (depth < 4 && rng_.chance(0.45)) {
      out += ">\n";
      const std::uint64_t children = 1 + rng_.below(4);
      for (std::uint64_t c = 0; c < children; ++c) emit_element(out, depth + 1);
      out.append(static_cast<std::size_t>(depth) * 4, ' ');
      out += "</";
      out += tag;
      out += ">\n";
    } else if (rng_.chance(0.3)) {
      out += '>';
      out += zipf_value();
      out += "</";
      out += tag;
      out += ">\n";
    } else {
      out += " />\n";
    }
  }

  Rng rng_;
  std::vector<Bytes> values_;
  std::vector<double> cumulative_;
};

std::uint64_t median(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

template <typename F>
std::uint64_t time_ns(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  const auto stop = std::chrono::steady_clock::now();
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
}

std::string environment_notes() {
  std::ostringstream os;
  os << "compiler=" << __VERSION__ << "; zlib=" << zlibVersion()
     << "; hardware_threads=" << std::thread::hardware_concurrency();
  return os.str();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::vector<std::string> vocabulary() {
  std::vector<std::string> words;
  for (const std::string_view tag : kTags) {
    words.push_back("<" + std::string(tag));
    words.push_back("</" + std::string(tag) + ">");
  }
  for (const std::string_view attribute : kAttributes) words.emplace_back(attribute);
  return words;
}

std::vector<Bytes> synth_corpus(std::uint64_t seed, std::size_t file_count,
                                std::size_t target_size) {
  if (target_size < 1024) throw Error(ErrorCode::kUsage, "synthetic files must be at least 1 KiB");
  std::vector<Bytes> files;
  for (std::size_t i = 0; i < file_count; ++i) {
    // Per-file streams so file i does not depend on how many came before.
    XmlSynth synth(seed * 0x9E3779B97F4A7C15ULL + i);
    files.push_back(synth.document(target_size));
  }
  return files;
}

BenchReport run_bench(std::span<const BenchInput> inputs, std::span<const Mode> modes,
                      const EngineConfig& cfg, const PredefinedDictionary* predefined,
                      const BenchOptions& options) {
  cfg.validate();
  for (const Mode m : modes) {
    if (needs_predefined(m) && predefined == nullptr) {
      throw Error(ErrorCode::kUsage,
                  "mode " + std::string(to_string(m)) + " requires a pre-defined dictionary");
    }
  }
  BenchReport report;
  report.config = cfg;
  report.timing_runs = std::max<std::size_t>(options.timing_runs, 1);
  report.environment = environment_notes();
  if (predefined != nullptr) {
    report.predefined_hash = predefined->content_hash();
    report.predefined_entries = predefined->dictionary.size();
  }

  for (const BenchInput& input : inputs) {
    for (const Mode mode : modes) {
      const auto run_compress = [&]() -> Bytes {
        switch (mode) {
          case Mode::kDeflate: return gzip_compress(input.data);
          case Mode::kV1: return compress(Algorithm::kV1, input.data, cfg);
          case Mode::kV2: return compress(Algorithm::kV2, input.data, cfg, predefined);
          case Mode::kV1Huffman: return compress(Algorithm::kV1Huffman, input.data, cfg);
          case Mode::kV2Huffman:
            return compress(Algorithm::kV2Huffman, input.data, cfg, predefined);
        }
        return {};
      };
      const auto run_decompress = [mode](ByteView packed) -> Bytes {
        return mode == Mode::kDeflate ? gzip_decompress(packed) : decompress(packed);
      };

      Bytes packed = run_compress();  // warm-up
      Bytes restored = run_decompress(packed);
      std::vector<std::uint64_t> compress_times;
      std::vector<std::uint64_t> decompress_times;
      for (std::size_t r = 0; r < report.timing_runs; ++r) {
        compress_times.push_back(time_ns([&] { packed = run_compress(); }));
        decompress_times.push_back(time_ns([&] { restored = run_decompress(packed); }));
      }

      BenchRow row;
      row.input = input.name;
      row.mode = mode;
      row.original_size = input.data.size();
      row.compressed_size = packed.size();
      if (row.original_size > 0) {
        row.ratio = static_cast<double>(row.compressed_size) / static_cast<double>(row.original_size);
      }
      row.compress_time_ns = median(compress_times);
      row.decompress_time_ns = median(decompress_times);
      row.round_trip_ok = restored == input.data;
      row.output_fnv1a64 = fnv1a64(packed);
      if (!row.round_trip_ok) {
        throw Error(ErrorCode::kRoundTrip, "round trip failed for input '" + input.name +
                                               "' in mode " + std::string(to_string(mode)));
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string to_json(const BenchReport& report) {
  nlohmann::ordered_json doc;
  doc["config"] = {{"min_len", report.config.min_len},
                   {"max_len", report.config.max_len},
                   {"top_k", report.config.top_k}};
  doc["predefined"] = report.predefined_hash
                          ? nlohmann::ordered_json{{"entries", report.predefined_entries},
                                                   {"content_hash", hex64(*report.predefined_hash)}}
                          : nlohmann::ordered_json(nullptr);
  doc["environment"] = {{"notes", report.environment},
                        {"workers", report.workers},
                        {"timing_runs", report.timing_runs}};
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const BenchRow& row : report.rows) {
    rows.push_back({{"input", row.input},
                    {"mode", to_string(row.mode)},
                    {"original_size", row.original_size},
                    {"compressed_size", row.compressed_size},
                    {"ratio", row.ratio ? nlohmann::ordered_json(*row.ratio)
                                        : nlohmann::ordered_json(nullptr)},
                    {"compress_time_ns", row.compress_time_ns},
                    {"decompress_time_ns", row.decompress_time_ns},
                    {"round_trip_ok", row.round_trip_ok},
                    {"output_fnv1a64", hex64(row.output_fnv1a64)}});
  }
  return doc.dump(2) + "\n";
}

std::string to_csv(const BenchReport& report) {
  std::ostringstream os;
  os << "input,mode,original_size,compressed_size,ratio,compress_time_ns,decompress_time_ns,"
        "round_trip_ok,output_fnv1a64\n";
  for (const BenchRow& row : report.rows) {
    std::string name = row.input;
    if (name.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (const char c : name) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      name = quoted + "\"";
    }
    os << name << ',' << to_string(row.mode) << ',' << row.original_size << ','
       << row.compressed_size << ',';
    if (row.ratio) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", *row.ratio);
      os << buf;
    }
    os << ',' << row.compress_time_ns << ',' << row.decompress_time_ns << ','
       << (row.round_trip_ok ? "true" : "false") << ',' << hex64(row.output_fnv1a64) << '\n';
  }
  return os.str();
}

}  // namespace patternrank::bench
