#include "patternrank/dict_builder.hpp"

#include <algorithm>

#include "patternrank/pattern_engine.hpp"

namespace patternrank {

CorpusStats analyze_corpus(std::span<const ByteView> files, const EngineConfig& cfg,
                           std::uint64_t min_frequency) {
  cfg.validate();
  // One extraction over the concatenation with a segment per file. Greedy
  // non-overlapping counts of occurrences confined to disjoint segments add up
  // to the per-file counts, and the corpus-wide minimum can prune early.
  Bytes joined;
  std::vector<Segment> segments;
  CorpusStats stats;
  for (const ByteView file : files) {
    segments.push_back({joined.size(), joined.size() + file.size()});
    joined += file;
    ++stats.files_seen;
    stats.bytes_seen += file.size();
  }
  for (const PatternStats& s : extract_patterns(joined, segments, cfg, min_frequency)) {
    stats.frequencies.emplace(Bytes(s.pattern), s.frequency);
  }
  return stats;
}

PredefinedDictionary build_predefined(const CorpusStats& stats, std::size_t k,
                                      const EngineConfig& cfg) {
  cfg.validate();
  std::vector<PatternStats> candidates;
  candidates.reserve(stats.frequencies.size());
  for (const auto& [pattern, frequency] : stats.frequencies) {
    if (pattern.size() < cfg.min_len || pattern.size() > cfg.max_len) continue;
    candidates.push_back({pattern, frequency, score(frequency, pattern.size())});
  }
  PredefinedDictionary out;
  out.min_len = static_cast<std::uint8_t>(cfg.min_len);
  out.max_len = static_cast<std::uint8_t>(cfg.max_len);
  out.dictionary = rank_and_select(candidates, k);
  return out;
}

std::vector<std::filesystem::path> collect_corpus_files(
    std::span<const std::filesystem::path> roots) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  try {
    for (const fs::path& root : roots) {
      if (fs::is_directory(root)) {
        for (const auto& entry : fs::recursive_directory_iterator(root)) {
          if (entry.is_regular_file()) files.push_back(entry.path());
        }
      } else if (fs::is_regular_file(root)) {
        files.push_back(root);
      } else {
        throw Error(ErrorCode::kIo, "not a regular file or directory: " + root.string());
      }
    }
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorCode::kIo, e.what());
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

}  // namespace patternrank
