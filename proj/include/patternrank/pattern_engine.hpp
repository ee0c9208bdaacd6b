#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "patternrank/core_model.hpp"

namespace patternrank {

// frequency × length².
constexpr std::uint64_t score(std::uint64_t frequency, std::uint64_t length) {
  return frequency * length * length;
}

// Half-open byte range [begin, end) of a buffer.
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Every distinct substring p of `data` with min_len <= |p| <= max_len, with
// frequency = number of leftmost non-overlapping occurrences. The returned
// views point into `data`.
std::vector<PatternStats> extract_patterns(ByteView data, const EngineConfig& cfg);

// Counting restricted to occurrences lying wholly inside one of `segments`
// (sorted, disjoint ranges of `data`); frequencies are the per-segment counts
// summed. Patterns whose frequency falls below `min_frequency` are omitted,
// which lets the search discard them early.
std::vector<PatternStats> extract_patterns(ByteView data, std::span<const Segment> segments,
                                           const EngineConfig& cfg,
                                           std::uint64_t min_frequency);

// Strict ranking order: score desc, length desc, bytes asc.
bool ranks_before(const PatternStats& a, const PatternStats& b);

// Top `k` patterns by ranking order among those occurring at least twice.
Dictionary rank_and_select(std::span<const PatternStats> stats, std::size_t k);

struct Match {
  Symbol symbol = 0;
  std::size_t length = 0;
};

// Longest-match trie over a predefined dictionary followed by a dynamic one.
class Matcher {
 public:
  Matcher() = default;
  // Throws Error(kConfig) if an entry appears in both dictionaries.
  Matcher(const Dictionary& predefined, const Dictionary& dynamic);

  std::optional<Match> longest_match(ByteView data, std::size_t pos) const;
  std::size_t size() const noexcept { return size_; }

 private:
  struct Edge {
    std::uint8_t byte;
    std::uint32_t child;
  };
  struct Node {
    std::vector<Edge> edges;  // sorted by byte
    Symbol symbol = 0;        // 0: not terminal
  };

  std::uint32_t child(std::uint32_t node, std::uint8_t byte) const;
  void insert(ByteView pattern, Symbol symbol);

  std::vector<Node> nodes_;
  std::size_t size_ = 0;
};

Matcher build_matcher(const Dictionary& predefined, const Dictionary& dynamic);

// Greedy leftmost-longest substitution.
std::vector<Token> tokenize(ByteView data, const Matcher& matcher);

// Throws Error(kCorrupt) for a code outside the combined dictionary.
Bytes detokenize(std::span<const Token> tokens, const Dictionary& predefined,
                 const Dictionary& dynamic);

}  // namespace patternrank
