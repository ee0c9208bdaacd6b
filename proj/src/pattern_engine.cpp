#include "patternrank/pattern_engine.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace patternrank {

namespace {

struct Occurrence {
  std::uint32_t pos;
  std::uint32_t end;  // end of the segment holding pos
};

// Greedy leftmost selection; `group` is sorted by position.
std::uint64_t count_non_overlapping(std::span<const Occurrence> group, std::size_t len) {
  std::uint64_t count = 0;
  std::size_t next_free = 0;
  for (const Occurrence& o : group) {
    if (o.pos >= next_free) {
      ++count;
      next_free = o.pos + len;
    }
  }
  return count;
}

void check_segments(ByteView data, std::span<const Segment> segments) {
  if (data.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kUsage, "input exceeds 4 GiB");
  }
  std::size_t previous_end = 0;
  for (const Segment& s : segments) {
    if (s.begin < previous_end || s.begin > s.end || s.end > data.size()) {
      throw Error(ErrorCode::kUsage, "segments must be sorted, disjoint and inside the input");
    }
    previous_end = s.end;
  }
}

}  // namespace

std::vector<PatternStats> extract_patterns(ByteView data, const EngineConfig& cfg) {
  const Segment whole{0, data.size()};
  return extract_patterns(data, std::span(&whole, 1), cfg, 1);
}

// Partition refinement: at length L every group holds the ascending positions
// sharing one L-byte prefix. Splitting each group by the byte at pos + L gives
// the groups for L + 1. A longer pattern occurs at a subset of its prefix's
// positions, so its non-overlapping count can never exceed the prefix's, and
// groups below `min_frequency` are dropped along with all their extensions.
std::vector<PatternStats> extract_patterns(ByteView data, std::span<const Segment> segments,
                                           const EngineConfig& cfg,
                                           std::uint64_t min_frequency) {
  cfg.validate();
  check_segments(data, segments);

  const auto* bytes = reinterpret_cast<const std::uint8_t*>(data.data());
  const bool keep_singletons = min_frequency <= 1;
  const std::uint64_t needed = std::max<std::uint64_t>(min_frequency, 1);

  std::vector<Occurrence> occurrences;
  std::vector<std::size_t> bounds;  // group i is [bounds[i], bounds[i + 1])
  {
    std::array<std::size_t, 257> starts{};
    for (const Segment& s : segments) {
      for (std::size_t p = s.begin; p < s.end; ++p) ++starts[bytes[p] + 1];
    }
    for (std::size_t b = 1; b < starts.size(); ++b) starts[b] += starts[b - 1];
    occurrences.resize(starts[256]);
    std::array<std::size_t, 256> cursor{};
    std::copy_n(starts.begin(), 256, cursor.begin());
    for (const Segment& s : segments) {
      for (std::size_t p = s.begin; p < s.end; ++p) {
        occurrences[cursor[bytes[p]]++] = {static_cast<std::uint32_t>(p),
                                           static_cast<std::uint32_t>(s.end)};
      }
    }
    for (std::size_t b = 0; b < 256; ++b) {
      if (starts[b + 1] > starts[b]) bounds.push_back(starts[b]);
    }
    bounds.push_back(occurrences.size());
  }

  std::vector<PatternStats> out;
  std::vector<Occurrence> next;
  std::vector<std::size_t> next_bounds;
  std::vector<Occurrence> scratch;

  for (std::size_t len = 1; len <= cfg.max_len && bounds.size() > 1; ++len) {
    next.clear();
    next_bounds.clear();
    for (std::size_t g = 0; g + 1 < bounds.size(); ++g) {
      const std::span<const Occurrence> group(occurrences.data() + bounds[g],
                                              bounds[g + 1] - bounds[g]);
      if (len >= cfg.min_len) {
        const std::uint64_t frequency = count_non_overlapping(group, len);
        if (frequency < needed) continue;
        out.push_back({data.substr(group.front().pos, len), frequency, score(frequency, len)});
      }
      if (group.size() == 1) {
        if (keep_singletons) {
          const Occurrence o = group.front();
          const std::size_t longest = std::min<std::size_t>(cfg.max_len, o.end - o.pos);
          for (std::size_t l = std::max(len + 1, cfg.min_len); l <= longest; ++l) {
            out.push_back({data.substr(o.pos, l), 1, score(1, l)});
          }
        }
        continue;
      }
      if (group.size() < needed || len == cfg.max_len) continue;

      scratch.clear();
      for (const Occurrence& o : group) {
        if (o.pos + len < o.end) scratch.push_back(o);
      }
      std::stable_sort(scratch.begin(), scratch.end(),
                       [bytes, len](const Occurrence& a, const Occurrence& b) {
                         return bytes[a.pos + len] < bytes[b.pos + len];
                       });
      for (std::size_t i = 0; i < scratch.size(); ++i) {
        if (i == 0 || bytes[scratch[i].pos + len] != bytes[scratch[i - 1].pos + len]) {
          next_bounds.push_back(next.size());
        }
        next.push_back(scratch[i]);
      }
    }
    next_bounds.push_back(next.size());
    occurrences.swap(next);
    bounds.swap(next_bounds);
  }
  return out;
}

bool ranks_before(const PatternStats& a, const PatternStats& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.pattern.size() != b.pattern.size()) return a.pattern.size() > b.pattern.size();
  return a.pattern < b.pattern;
}

Dictionary rank_and_select(std::span<const PatternStats> stats, std::size_t k) {
  std::vector<const PatternStats*> candidates;
  for (const PatternStats& s : stats) {
    if (s.frequency >= 2) candidates.push_back(&s);
  }
  const auto by_rank = [](const PatternStats* a, const PatternStats* b) {
    return ranks_before(*a, *b);
  };
  const std::size_t keep = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), by_rank);
  std::vector<Bytes> entries;
  entries.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) entries.emplace_back(candidates[i]->pattern);
  return Dictionary(std::move(entries));
}

Matcher::Matcher(const Dictionary& predefined, const Dictionary& dynamic) {
  size_ = symbol_space_size(predefined.size(), dynamic.size()) - kFirstCodeSymbol;
  nodes_.emplace_back();
  Symbol symbol = kFirstCodeSymbol;
  for (const Bytes& entry : predefined) insert(entry, symbol++);
  for (const Bytes& entry : dynamic) insert(entry, symbol++);
}

std::uint32_t Matcher::child(std::uint32_t node, std::uint8_t byte) const {
  const std::vector<Edge>& edges = nodes_[node].edges;
  const auto it = std::lower_bound(edges.begin(), edges.end(), byte,
                                   [](const Edge& e, std::uint8_t b) { return e.byte < b; });
  return it != edges.end() && it->byte == byte ? it->child : 0;
}

void Matcher::insert(ByteView pattern, Symbol symbol) {
  std::uint32_t node = 0;
  for (const char c : pattern) {
    const auto byte = static_cast<std::uint8_t>(c);
    std::uint32_t next = child(node, byte);
    if (next == 0) {
      next = static_cast<std::uint32_t>(nodes_.size());
      nodes_.emplace_back();
      std::vector<Edge>& edges = nodes_[node].edges;
      const auto it = std::lower_bound(edges.begin(), edges.end(), byte,
                                       [](const Edge& e, std::uint8_t b) { return e.byte < b; });
      edges.insert(it, Edge{byte, next});
    }
    node = next;
  }
  if (nodes_[node].symbol != 0) {
    throw Error(ErrorCode::kConfig, "pattern appears twice in the combined dictionary");
  }
  nodes_[node].symbol = symbol;
}

std::optional<Match> Matcher::longest_match(ByteView data, std::size_t pos) const {
  std::optional<Match> best;
  if (nodes_.empty()) return best;
  std::uint32_t node = 0;
  for (std::size_t i = pos; i < data.size(); ++i) {
    node = child(node, static_cast<std::uint8_t>(data[i]));
    if (node == 0) break;
    if (nodes_[node].symbol != 0) best = Match{nodes_[node].symbol, i - pos + 1};
  }
  return best;
}

Matcher build_matcher(const Dictionary& predefined, const Dictionary& dynamic) {
  return Matcher(predefined, dynamic);
}

std::vector<Token> tokenize(ByteView data, const Matcher& matcher) {
  std::vector<Token> tokens;
  tokens.reserve(data.size());
  std::size_t pos = 0;
  while (pos < data.size()) {
    if (const auto match = matcher.longest_match(data, pos)) {
      tokens.push_back(Token::code(match->symbol));
      pos += match->length;
    } else {
      tokens.push_back(Token::literal(static_cast<std::uint8_t>(data[pos])));
      ++pos;
    }
  }
  return tokens;
}

Bytes detokenize(std::span<const Token> tokens, const Dictionary& predefined,
                 const Dictionary& dynamic) {
  Bytes out;
  out.reserve(tokens.size());
  for (const Token t : tokens) {
    if (t.is_literal()) {
      out.push_back(static_cast<char>(t.byte()));
    } else if (t.index() < predefined.size()) {
      out += predefined[t.index()];
    } else if (t.index() - predefined.size() < dynamic.size()) {
      out += dynamic[t.index() - predefined.size()];
    } else {
      throw Error(ErrorCode::kCorrupt, "code " + std::to_string(t.symbol()) +
                                           " outside the dictionary");
    }
  }
  return out;
}

}  // namespace patternrank
