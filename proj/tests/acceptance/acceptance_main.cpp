// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failed criteria. `--digest` prints only the digest of the
// containers and dictionaries produced by criteria 1, 6 and 7 (used by
// criterion 9 to compare against an independent process).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "oracles.hpp"
#include "patternrank/bench.hpp"
#include "patternrank/codecs.hpp"
#include "patternrank/dict_builder.hpp"
#include "patternrank/huffman.hpp"
#include "patternrank/pattern_engine.hpp"

using namespace patternrank;

namespace {

// Pinned thresholds.
constexpr double kRoundTripBudgetSeconds = 120.0;
constexpr double kExtractionBudgetSeconds = 10.0;
constexpr double kHuffmanBudgetSeconds = 30.0;
constexpr double kBenchBudgetSeconds = 180.0;
constexpr std::size_t kDeskScaleBound = 6554;  // 10% of 65,536
constexpr std::size_t kRoundTripInputs = 1000;
constexpr std::size_t kMaxRoundTripLength = 64 * 1024;
constexpr std::size_t kOracleInputs = 200;
constexpr std::size_t kHuffmanDistributions = 100;
constexpr std::size_t kMutations = 500;
constexpr std::size_t kEquivalenceInputs = 100;
constexpr std::uint64_t kBenchSeed = 42;
constexpr std::size_t kBenchFiles = 8;
constexpr std::size_t kBenchFileSize = 64 * 1024;
// Pre-defined dictionary for v2 variants, trained on a corpus disjoint from
// the benchmark files.
constexpr std::uint64_t kTrainingSeed = 1000;
constexpr std::size_t kTrainingFiles = 8;

constexpr Algorithm kAlgorithms[] = {Algorithm::kV1, Algorithm::kV2, Algorithm::kV1Huffman,
                                     Algorithm::kV2Huffman};

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Running digest over emitted containers and dictionaries.
class Digest {
 public:
  void add(ByteView bytes) {
    hashes_ += std::to_string(fnv1a64(bytes));
    hashes_ += ';';
  }
  std::uint64_t value() const { return fnv1a64(hashes_); }

 private:
  Bytes hashes_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const PredefinedDictionary& training_dictionary() {
  static const PredefinedDictionary dictionary = [] {
    const auto corpus = bench::synth_corpus(kTrainingSeed, kTrainingFiles, 64 * 1024);
    const std::vector<ByteView> views(corpus.begin(), corpus.end());
    const EngineConfig cfg;
    return build_predefined(analyze_corpus(views, cfg, 2), cfg.top_k, cfg);
  }();
  return dictionary;
}

std::string ascii_text(std::mt19937_64& rng, std::size_t n) {
  static const char* const kWords[] = {"the", "backup", "of", "settings", "and", "a",
                                       "package", "contains", "data", "for", "user", "with",
                                       "application", "state", "is", "restored", "from"};
  std::string s;
  while (s.size() < n) {
    if (rng() % 10 == 0) {
      s += oracle::random_bytes(rng, 1 + rng() % 8, 26);
      for (std::size_t i = s.size() - 1; i < s.size() && s[i] < 26; --i) s[i] += 'a';
    } else {
      s += kWords[rng() % std::size(kWords)];
    }
    s += rng() % 12 == 0 ? ".\n" : " ";
  }
  s.resize(n);
  return s;
}

// Generator family chosen by index: uniform bytes, ASCII text, synthetic XML,
// all-0x1B, one repeated byte.
Bytes round_trip_input(std::size_t index, std::mt19937_64& rng) {
  const std::size_t n = rng() % (kMaxRoundTripLength + 1);
  switch (index % 5) {
    case 0: return oracle::random_bytes(rng, n);
    case 1: return ascii_text(rng, n);
    case 2: {
      Bytes xml = bench::synth_corpus(rng(), 1, std::max<std::size_t>(n, 1024))[0];
      xml.resize(n);
      return xml;
    }
    case 3: return Bytes(n, '\x1b');
    default: return Bytes(n, static_cast<char>(rng() % 256));
  }
}

Outcome criterion_round_trip(Digest& digest, bool verify_output) {
  std::mt19937_64 rng(20220820);
  const PredefinedDictionary& pd = training_dictionary();
  const auto start = std::chrono::steady_clock::now();
  std::size_t failures = 0;
  std::string first_failure;
  for (std::size_t i = 0; i < kRoundTripInputs; ++i) {
    const Bytes data = round_trip_input(i, rng);
    for (const Algorithm a : kAlgorithms) {
      const Bytes packed = compress(a, data, EngineConfig{}, &pd);
      digest.add(packed);
      if (!verify_output) continue;
      bool ok = false;
      try {
        ok = decompress(packed) == data;
      } catch (const Error& e) {
        if (first_failure.empty()) first_failure = e.what();
      }
      if (!ok) {
        ++failures;
        if (first_failure.empty()) {
          first_failure = "input " + std::to_string(i) + " " + std::string(to_string(a));
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << kRoundTripInputs << " inputs x 4 algorithms, " << failures << " failures, "
     << elapsed << " s (budget " << kRoundTripBudgetSeconds << " s)";
  if (!first_failure.empty()) os << "; first: " << first_failure;
  return {failures == 0 && elapsed < kRoundTripBudgetSeconds, os.str()};
}

struct OracleCase {
  Bytes data;
  EngineConfig cfg;
};

std::vector<OracleCase> oracle_cases() {
  std::mt19937_64 rng(77);
  std::vector<OracleCase> cases;
  for (std::size_t i = 0; i < kOracleInputs; ++i) {
    const std::size_t n = 2 + rng() % 2;
    const std::size_t m = n + rng() % (9 - n);
    const unsigned alphabet = 1 + static_cast<unsigned>(rng() % (i % 4 == 0 ? 256 : 5));
    cases.push_back({oracle::random_bytes(rng, rng() % 257, alphabet),
                     EngineConfig{n, m, 1 + rng() % 64}});
  }
  return cases;
}

Outcome criterion_extraction_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t mismatches = 0;
  for (const OracleCase& c : oracle_cases()) {
    std::map<std::string, std::uint64_t> got;
    for (const PatternStats& s : extract_patterns(c.data, c.cfg)) {
      if (s.score != s.frequency * s.pattern.size() * s.pattern.size()) ++mismatches;
      if (!got.emplace(std::string(s.pattern), s.frequency).second) ++mismatches;
    }
    if (got != oracle::extract(c.data, c.cfg.min_len, c.cfg.max_len)) ++mismatches;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << kOracleInputs << " inputs, " << mismatches << " mismatches, " << elapsed << " s";
  return {mismatches == 0 && elapsed < kExtractionBudgetSeconds, os.str()};
}

Outcome criterion_ranking_oracle() {
  std::size_t mismatches = 0;
  for (const OracleCase& c : oracle_cases()) {
    struct Row {
      std::string pattern;
      std::uint64_t frequency;
      std::uint64_t score;
    };
    std::vector<Row> rows;
    for (const auto& [p, f] : oracle::extract(c.data, c.cfg.min_len, c.cfg.max_len)) {
      if (f >= 2) rows.push_back({p, f, f * p.size() * p.size()});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.pattern.size() != b.pattern.size()) return a.pattern.size() > b.pattern.size();
      return std::lexicographical_compare(
          a.pattern.begin(), a.pattern.end(), b.pattern.begin(), b.pattern.end(),
          [](char x, char y) { return static_cast<unsigned char>(x) < static_cast<unsigned char>(y); });
    });
    if (rows.size() > c.cfg.top_k) rows.resize(c.cfg.top_k);
    std::vector<Bytes> expected;
    for (const Row& r : rows) expected.push_back(r.pattern);
    const Dictionary got = rank_and_select(extract_patterns(c.data, c.cfg), c.cfg.top_k);
    if (got.entries() != expected) ++mismatches;
  }
  std::ostringstream os;
  os << kOracleInputs << " inputs, " << mismatches << " mismatches";
  return {mismatches == 0, os.str()};
}

Outcome criterion_huffman() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(4242);
  std::size_t exhaustive = 0;
  std::size_t failures = 0;
  for (std::size_t trial = 0; trial < kHuffmanDistributions; ++trial) {
    const std::size_t symbols = trial < 40 ? 2 + rng() % 7 : 9 + rng() % 292;
    std::vector<std::uint64_t> freqs(symbols);
    const int shape = static_cast<int>(trial % 3);
    for (std::size_t s = 0; s < symbols; ++s) {
      switch (shape) {
        case 0: freqs[s] = 1 + rng() % 1000; break;
        case 1: freqs[s] = 1 + (rng() % 100000) / (s + 1); break;  // Zipf-like
        default: freqs[s] = 1 + (rng() % 4 == 0 ? rng() % 100000 : rng() % 10); break;
      }
    }
    const huffman::CodeLengthTable lengths = huffman::build_code_lengths(freqs);
    std::uint64_t cost = 0;
    std::uint64_t total = 0;
    long double kraft = 0;
    for (std::size_t s = 0; s < symbols; ++s) {
      cost += freqs[s] * lengths[s];
      total += freqs[s];
      kraft += std::ldexp(1.0L, -static_cast<int>(lengths[s]));
    }
    if (kraft != 1.0L) ++failures;
    if (symbols <= 8) {
      ++exhaustive;
      if (cost != oracle::optimal_prefix_cost(freqs)) ++failures;
    }
    const double h = oracle::entropy_bits(freqs);
    const double avg = static_cast<double>(cost) / static_cast<double>(total);
    if (!(avg >= h - 1e-9 && avg < h + 1.0)) ++failures;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << kHuffmanDistributions << " distributions (" << exhaustive << " exhaustive), "
     << failures << " failures, " << elapsed << " s";
  return {failures == 0 && elapsed < kHuffmanBudgetSeconds, os.str()};
}

Outcome criterion_corruption() {
  std::mt19937_64 rng(5005);
  const PredefinedDictionary& pd = training_dictionary();
  std::vector<std::pair<Bytes, Bytes>> samples;  // (original, container)
  const std::vector<Bytes> inputs{bench::synth_corpus(500, 1, 4096)[0], ascii_text(rng, 3000),
                                  oracle::random_bytes(rng, 700), Bytes(300, '\x1b'), ""};
  for (const Bytes& data : inputs) {
    for (const Algorithm a : kAlgorithms) samples.emplace_back(data, compress(a, data, {}, &pd));
  }
  std::map<std::string, std::size_t> by_error;
  std::size_t unchanged_output = 0;
  std::size_t silent_wrong = 0;
  std::size_t unnamed = 0;
  for (std::size_t i = 0; i < kMutations; ++i) {
    const auto& [original, container] = samples[i % samples.size()];
    Bytes mutated = container;
    mutated[rng() % mutated.size()] ^= static_cast<char>(1 + rng() % 255);
    try {
      const Bytes out = decompress(mutated);
      if (out == original) {
        ++unchanged_output;
      } else {
        ++silent_wrong;
      }
    } catch (const Error& e) {
      ++by_error[std::string(to_string(e.code()))];
    } catch (...) {
      ++unnamed;
    }
  }
  std::ostringstream os;
  os << kMutations << " mutations:";
  for (const auto& [name, count] : by_error) os << ' ' << name << '=' << count;
  os << " unchanged-output=" << unchanged_output << " silent-wrong=" << silent_wrong
     << " unnamed=" << unnamed;
  return {silent_wrong == 0 && unnamed == 0, os.str()};
}

Outcome criterion_desk_scale(Digest& digest) {
  Bytes data;
  for (int i = 0; i < 32768; ++i) data += "ab";
  const Bytes packed = compress_v1(data);
  digest.add(packed);
  const bool round_trip = decompress(packed) == data;
  std::ostringstream os;
  os << "\"ab\"x32768 -> " << packed.size() << " bytes (bound < " << kDeskScaleBound << ")";
  return {packed.size() < kDeskScaleBound && round_trip, os.str()};
}

Outcome criterion_bench(Digest& digest, bool run_report) {
  const auto start = std::chrono::steady_clock::now();
  const PredefinedDictionary& pd = training_dictionary();
  digest.add(save_predefined(pd));
  const auto corpus = bench::synth_corpus(kBenchSeed, kBenchFiles, kBenchFileSize);
  for (const Bytes& file : corpus) {
    for (const Algorithm a : kAlgorithms) digest.add(compress(a, file, {}, &pd));
  }
  if (!run_report) return {true, ""};

  std::vector<bench::BenchInput> inputs;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    inputs.push_back({"synth-42-" + std::to_string(i), corpus[i]});
  }
  const std::vector<bench::Mode> modes(std::begin(bench::kAllModes), std::end(bench::kAllModes));
  const auto report = bench::run_bench(inputs, modes, EngineConfig{}, &pd);
  const auto doc = nlohmann::json::parse(bench::to_json(report));

  std::size_t problems = 0;
  std::map<std::pair<std::string, std::string>, std::uint64_t> size_of;
  double worst_ratio = 0;
  const char* const fields[] = {"input", "mode", "original_size", "compressed_size", "ratio",
                                "compress_time_ns", "decompress_time_ns", "round_trip_ok"};
  if (doc["rows"].size() != kBenchFiles * modes.size()) ++problems;
  for (const auto& row : doc["rows"]) {
    for (const char* f : fields) {
      if (!row.contains(f)) ++problems;
    }
    if (row["round_trip_ok"] != true) ++problems;
    const double ratio = row["ratio"].get<double>();
    worst_ratio = std::max(worst_ratio, ratio);
    if (!(ratio < 1.0)) ++problems;
    size_of[{row["input"].get<std::string>(), row["mode"].get<std::string>()}] =
        row["compressed_size"].get<std::uint64_t>();
  }
  std::size_t hybrid_wins = 0;
  for (const auto& input : inputs) {
    const bool v1 = size_of[{input.name, "v1h"}] < size_of[{input.name, "v1"}];
    const bool v2 = size_of[{input.name, "v2h"}] < size_of[{input.name, "v2"}];
    hybrid_wins += v1 + v2;
    if (!v1 || !v2) ++problems;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << doc["rows"].size() << " rows, worst ratio " << worst_ratio << ", hybrid smaller in "
     << hybrid_wins << "/" << 2 * inputs.size() << " pairs, " << elapsed << " s";
  return {problems == 0 && elapsed < kBenchBudgetSeconds, os.str()};
}

Outcome criterion_v2_equivalence() {
  std::mt19937_64 rng(8080);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < kEquivalenceInputs; ++i) {
    const std::size_t n = rng() % 8192;
    Bytes data;
    switch (i % 3) {
      case 0: data = ascii_text(rng, n); break;
      case 1: data = bench::synth_corpus(rng(), 1, 8192)[0].substr(0, n); break;
      default: data = oracle::random_bytes(rng, n, 1 + rng() % 8); break;
    }
    const EngineConfig cfg{2 + rng() % 3, 4 + rng() % 29, 1 + rng() % 300};
    const PredefinedDictionary empty{static_cast<std::uint8_t>(cfg.min_len),
                                     static_cast<std::uint8_t>(cfg.max_len), Dictionary{}};
    if (substitute_v1(data, cfg).tokens != substitute_v2(data, cfg, empty).tokens) ++mismatches;
  }
  std::ostringstream os;
  os << kEquivalenceInputs << " inputs, " << mismatches << " mismatches";
  return {mismatches == 0, os.str()};
}

std::uint64_t determinism_digest() {
  Digest digest;
  criterion_round_trip(digest, false);
  criterion_desk_scale(digest);
  criterion_bench(digest, false);
  return digest.value();
}

Outcome criterion_determinism(std::uint64_t first_run) {
  // The independent process runs concurrently with the in-process repeat.
  const std::string self = std::filesystem::read_symlink("/proc/self/exe").string();
  FILE* pipe = popen(("'" + self + "' --digest").c_str(), "r");
  const std::uint64_t second_run = determinism_digest();
  std::uint64_t child = 0;
  if (pipe != nullptr) {
    char buf[64] = {};
    if (std::fgets(buf, sizeof buf, pipe) != nullptr) child = std::strtoull(buf, nullptr, 16);
    pclose(pipe);
  }
  std::ostringstream os;
  os << std::hex << "digests: run1=" << first_run << " run2=" << second_run
     << " separate-process=" << child;
  return {first_run == second_run && second_run == child, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::string(argv[1]) == "--digest") {
    std::printf("%016llx\n", static_cast<unsigned long long>(determinism_digest()));
    return 0;
  }

  int failed = 0;
  const auto report = [&failed](int id, const char* name, const std::function<Outcome()>& run) {
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failed;
    std::printf("[%s] C%d %s: %s\n", outcome.pass ? "PASS" : "FAIL", id, name,
                outcome.detail.c_str());
    std::fflush(stdout);
  };

  Digest digest;
  report(1, "round-trip suite", [&] { return criterion_round_trip(digest, true); });
  report(2, "extraction oracle", criterion_extraction_oracle);
  report(3, "ranking oracle", criterion_ranking_oracle);
  report(4, "Huffman optimality", criterion_huffman);
  report(5, "corruption detection", criterion_corruption);
  report(6, "desk-scale compression bound", [&] { return criterion_desk_scale(digest); });
  report(7, "comparative study artifact", [&] { return criterion_bench(digest, true); });
  report(8, "v2 degenerate equivalence", criterion_v2_equivalence);
  report(9, "determinism", [&] { return criterion_determinism(digest.value()); });

  std::printf("%s: %d criteria failed\n", failed == 0 ? "ACCEPTED" : "REJECTED", failed);
  return failed;
}
