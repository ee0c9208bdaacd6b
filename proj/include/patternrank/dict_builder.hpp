#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "patternrank/container.hpp"
#include "patternrank/core_model.hpp"

namespace patternrank {

struct CorpusStats {
  std::map<Bytes, std::uint64_t, std::less<>> frequencies;  // summed per-file counts
  std::uint64_t files_seen = 0;
  std::uint64_t bytes_seen = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

// Per-pattern sums of extract_patterns over each file; patterns never span
// files. With min_frequency > 1, patterns whose corpus-wide total is lower
// are left out of the result (the count itself is unaffected).
CorpusStats analyze_corpus(std::span<const ByteView> files, const EngineConfig& cfg,
                           std::uint64_t min_frequency = 1);

// rank_and_select over the corpus totals, wrapped with the config bounds.
PredefinedDictionary build_predefined(const CorpusStats& stats, std::size_t k,
                                      const EngineConfig& cfg);

// Regular files under each path (recursively for directories), sorted.
std::vector<std::filesystem::path> collect_corpus_files(
    std::span<const std::filesystem::path> roots);

}  // namespace patternrank
