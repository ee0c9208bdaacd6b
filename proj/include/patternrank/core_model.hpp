#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patternrank/errors.hpp"

namespace patternrank {

// Byte sequences are carried in std::string; comparisons through
// std::char_traits<char> are unsigned (memcmp), which is the byte order used
// for ranking tie-breaks.
using Bytes = std::string;
using ByteView = std::string_view;

using Symbol = std::uint32_t;

inline constexpr Symbol kFirstCodeSymbol = 256;
inline constexpr std::size_t kMaxPatternSymbols = 65280;
inline constexpr std::size_t kMaxPatternLength = 255;
inline constexpr std::size_t kMinPatternLength = 2;

struct EngineConfig {
  std::size_t min_len = 3;
  std::size_t max_len = 32;
  std::size_t top_k = 256;

  bool valid() const noexcept;
  // Throws Error(kConfig) naming the violated bound.
  void validate() const;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

// One element of the post-substitution stream: a literal byte (symbol
// 0..255) or a pattern code (symbol >= 256).
class Token {
 public:
  constexpr Token() = default;

  static constexpr Token literal(std::uint8_t byte) { return Token(byte); }
  static constexpr Token code(Symbol symbol) { return Token(symbol); }
  static constexpr Token from_symbol(Symbol symbol) { return Token(symbol); }
  static constexpr Token code_at(std::size_t index) {
    return Token(kFirstCodeSymbol + static_cast<Symbol>(index));
  }

  constexpr bool is_literal() const { return symbol_ < kFirstCodeSymbol; }
  constexpr bool is_code() const { return symbol_ >= kFirstCodeSymbol; }
  constexpr Symbol symbol() const { return symbol_; }
  constexpr std::uint8_t byte() const { return static_cast<std::uint8_t>(symbol_); }
  // Position in the combined dictionary (predefined entries first).
  constexpr std::size_t index() const { return symbol_ - kFirstCodeSymbol; }

  friend constexpr bool operator==(Token, Token) = default;

 private:
  explicit constexpr Token(Symbol symbol) : symbol_(symbol) {}

  Symbol symbol_ = 0;
};

// A candidate pattern. `pattern` views the buffer it was extracted from and
// is valid only as long as that buffer.
struct PatternStats {
  ByteView pattern;
  std::uint64_t frequency = 0;
  std::uint64_t score = 0;

  friend bool operator==(const PatternStats&, const PatternStats&) = default;
};

// Ordered, duplicate-free list of patterns. Entry i owns symbol id
// 256 + offset + i where offset is the size of any preceding dictionary.
class Dictionary {
 public:
  Dictionary() = default;
  // Throws Error(kConfig) on duplicates or entries outside [2, 255] bytes.
  explicit Dictionary(std::vector<Bytes> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Bytes& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Bytes>& entries() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  bool contains(ByteView pattern) const;

  friend bool operator==(const Dictionary&, const Dictionary&) = default;

 private:
  std::vector<Bytes> entries_;
};

// 256 + predefined_count + dynamic_count; throws Error(kConfig) when the
// pattern symbols do not fit the 16-bit id space.
std::size_t symbol_space_size(std::size_t predefined_count, std::size_t dynamic_count);

bool validate_tokens(std::span<const Token> tokens, std::size_t dict_size);

}  // namespace patternrank
