#include "patternrank/huffman.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <tuple>

namespace patternrank::huffman {

std::size_t CodeLengthTable::used_symbols() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(lengths_.begin(), lengths_.end(), [](std::uint8_t l) { return l != 0; }));
}

std::vector<std::uint64_t> count_frequencies(std::span<const Token> tokens,
                                             std::size_t alphabet_size) {
  std::vector<std::uint64_t> frequencies(alphabet_size, 0);
  for (const Token t : tokens) {
    if (t.symbol() >= alphabet_size) {
      throw Error(ErrorCode::kInternal, "token outside the Huffman alphabet");
    }
    ++frequencies[t.symbol()];
  }
  return frequencies;
}

CodeLengthTable build_code_lengths(std::span<const std::uint64_t> frequencies) {
  struct Node {
    std::uint64_t weight;
    std::uint32_t min_symbol;
    std::uint32_t parent;
  };
  std::vector<Node> nodes;
  std::vector<std::uint32_t> leaf_symbol;
  for (std::size_t s = 0; s < frequencies.size(); ++s) {
    if (frequencies[s] != 0) {
      nodes.push_back({frequencies[s], static_cast<std::uint32_t>(s), 0});
      leaf_symbol.push_back(static_cast<std::uint32_t>(s));
    }
  }
  if (nodes.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no symbol has a nonzero frequency");
  }
  std::vector<std::uint8_t> lengths(frequencies.size(), 0);
  if (nodes.size() == 1) {
    lengths[leaf_symbol.front()] = 1;
    return CodeLengthTable(std::move(lengths));
  }

  using Entry = std::tuple<std::uint64_t, std::uint32_t, std::uint32_t>;  // weight, min symbol, node
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    queue.emplace(nodes[i].weight, nodes[i].min_symbol, i);
  }
  while (queue.size() > 1) {
    const auto [wa, sa, a] = queue.top();
    queue.pop();
    const auto [wb, sb, b] = queue.top();
    queue.pop();
    const auto parent = static_cast<std::uint32_t>(nodes.size());
    nodes.push_back({wa + wb, std::min(sa, sb), 0});
    nodes[a].parent = parent;
    nodes[b].parent = parent;
    queue.emplace(wa + wb, std::min(sa, sb), parent);
  }

  // Parents are created after their children, so one reverse sweep sets depths.
  std::vector<std::uint32_t> depth(nodes.size(), 0);
  for (std::size_t i = nodes.size() - 1; i-- > 0;) depth[i] = depth[nodes[i].parent] + 1;
  for (std::size_t i = 0; i < leaf_symbol.size(); ++i) {
    if (depth[i] > kMaxCodeLength) {
      throw Error(ErrorCode::kInternal, "Huffman code length exceeds 63 bits");
    }
    lengths[leaf_symbol[i]] = static_cast<std::uint8_t>(depth[i]);
  }
  return CodeLengthTable(std::move(lengths));
}

namespace {

struct SortedSymbols {
  std::vector<std::uint32_t> symbols;  // by (length, symbol)
  std::array<std::uint64_t, kMaxCodeLength + 1> count{};
  unsigned max_length = 0;
};

SortedSymbols sort_and_check(const CodeLengthTable& table) {
  SortedSymbols sorted;
  for (std::size_t s = 0; s < table.alphabet_size(); ++s) {
    const unsigned len = table[s];
    if (len == 0) continue;
    if (len > kMaxCodeLength) throw Error(ErrorCode::kCorrupt, "code length above 63");
    ++sorted.count[len];
    sorted.max_length = std::max(sorted.max_length, len);
  }
  std::array<std::uint64_t, kMaxCodeLength + 2> offset{};
  for (unsigned len = 1; len <= kMaxCodeLength; ++len) {
    offset[len + 1] = offset[len] + sorted.count[len];
  }
  sorted.symbols.resize(offset[kMaxCodeLength + 1]);
  for (std::size_t s = 0; s < table.alphabet_size(); ++s) {
    if (table[s] != 0) sorted.symbols[offset[table[s]]++] = static_cast<std::uint32_t>(s);
  }

  if (sorted.symbols.size() == 1) {
    if (sorted.max_length != 1) {
      throw Error(ErrorCode::kCorrupt, "single-symbol code must have length 1");
    }
    return sorted;
  }
  if (sorted.symbols.empty()) return sorted;

  // Kraft sum scaled by 2^63 must be exactly 2^63.
  constexpr std::uint64_t kOne = std::uint64_t{1} << 63;
  std::uint64_t kraft = 0;
  for (unsigned len = 1; len <= sorted.max_length; ++len) {
    const std::uint64_t unit = std::uint64_t{1} << (63 - len);
    if (sorted.count[len] > (kOne - kraft) / unit) {
      throw Error(ErrorCode::kCorrupt, "code lengths oversubscribe the code space");
    }
    kraft += sorted.count[len] * unit;
  }
  if (kraft != kOne) {
    throw Error(ErrorCode::kCorrupt, "code lengths leave the code space incomplete");
  }
  return sorted;
}

}  // namespace

Codebook canonicalize(const CodeLengthTable& lengths) {
  const SortedSymbols sorted = sort_and_check(lengths);
  Codebook book;
  book.codes.resize(lengths.alphabet_size());
  std::uint64_t code = 0;
  unsigned previous = 0;
  for (const std::uint32_t symbol : sorted.symbols) {
    const unsigned len = lengths[symbol];
    if (previous != 0) code = (code + 1) << (len - previous);
    previous = len;
    book.codes[symbol] = Code{code, static_cast<std::uint8_t>(len)};
  }
  return book;
}

BitBuffer encode(std::span<const Token> tokens, const Codebook& codebook) {
  BitBuffer out;
  std::uint8_t current = 0;
  unsigned filled = 0;
  for (const Token t : tokens) {
    if (t.symbol() >= codebook.codes.size() || codebook.codes[t.symbol()].length == 0) {
      throw Error(ErrorCode::kInternal, "symbol " + std::to_string(t.symbol()) + " has no code");
    }
    const Code code = codebook.codes[t.symbol()];
    for (unsigned i = code.length; i-- > 0;) {
      current = static_cast<std::uint8_t>((current << 1) | ((code.bits >> i) & 1U));
      if (++filled == 8) {
        out.bytes.push_back(current);
        current = 0;
        filled = 0;
      }
    }
    out.bit_count += code.length;
  }
  if (filled != 0) out.bytes.push_back(static_cast<std::uint8_t>(current << (8 - filled)));
  return out;
}

std::vector<Token> decode(const BitBuffer& bits, const CodeLengthTable& lengths,
                          std::uint64_t token_count) {
  const std::uint64_t available = std::min<std::uint64_t>(bits.bit_count, bits.bytes.size() * 8);
  if (token_count > available) {
    throw Error(ErrorCode::kCorrupt, "bitstream too short for the token count");
  }
  std::vector<Token> tokens;
  if (token_count == 0) {
    if (!bits.bytes.empty()) throw Error(ErrorCode::kCorrupt, "trailing bitstream bytes");
    return tokens;
  }
  const SortedSymbols sorted = sort_and_check(lengths);
  if (sorted.symbols.empty()) throw Error(ErrorCode::kCorrupt, "empty code-length table");

  std::array<std::uint64_t, kMaxCodeLength + 1> first_code{};
  std::array<std::uint64_t, kMaxCodeLength + 1> first_index{};
  {
    std::uint64_t code = 0;
    std::uint64_t index = 0;
    for (unsigned len = 1; len <= sorted.max_length; ++len) {
      first_code[len] = code;
      first_index[len] = index;
      code = (code + sorted.count[len]) << 1;
      index += sorted.count[len];
    }
  }

  tokens.reserve(token_count);
  std::uint64_t position = 0;
  const auto next_bit = [&]() -> unsigned {
    if (position >= available) throw Error(ErrorCode::kCorrupt, "bitstream exhausted");
    const unsigned bit = (bits.bytes[position >> 3] >> (7 - (position & 7))) & 1U;
    ++position;
    return bit;
  };
  while (tokens.size() < token_count) {
    std::uint64_t code = 0;
    for (unsigned len = 1;; ++len) {
      if (len > sorted.max_length) throw Error(ErrorCode::kCorrupt, "invalid code prefix");
      code = (code << 1) | next_bit();
      if (code >= first_code[len] && code - first_code[len] < sorted.count[len]) {
        tokens.push_back(Token::from_symbol(sorted.symbols[first_index[len] + code - first_code[len]]));
        break;
      }
    }
  }

  if ((position + 7) / 8 != bits.bytes.size()) {
    throw Error(ErrorCode::kCorrupt, "trailing bitstream bytes");
  }
  for (; position < bits.bytes.size() * 8; ++position) {
    if ((bits.bytes[position >> 3] >> (7 - (position & 7))) & 1U) {
      throw Error(ErrorCode::kCorrupt, "nonzero padding bits");
    }
  }
  return tokens;
}

}  // namespace patternrank::huffman
