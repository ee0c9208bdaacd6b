#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "patternrank/core_model.hpp"

namespace patternrank::huffman {

inline constexpr unsigned kMaxCodeLength = 63;

// Code bit-length per symbol id; 0 marks an unused symbol.
class CodeLengthTable {
 public:
  CodeLengthTable() = default;
  explicit CodeLengthTable(std::vector<std::uint8_t> lengths) : lengths_(std::move(lengths)) {}

  std::size_t alphabet_size() const noexcept { return lengths_.size(); }
  std::uint8_t operator[](std::size_t symbol) const { return lengths_[symbol]; }
  std::span<const std::uint8_t> lengths() const noexcept { return lengths_; }
  std::size_t used_symbols() const noexcept;

  friend bool operator==(const CodeLengthTable&, const CodeLengthTable&) = default;

 private:
  std::vector<std::uint8_t> lengths_;
};

struct Code {
  std::uint64_t bits = 0;
  std::uint8_t length = 0;  // 0: symbol has no code

  friend bool operator==(const Code&, const Code&) = default;
};

struct Codebook {
  std::vector<Code> codes;  // indexed by symbol id
};

// MSB-first bit string; bytes beyond bit_count are zero.
struct BitBuffer {
  std::vector<std::uint8_t> bytes;
  std::uint64_t bit_count = 0;

  friend bool operator==(const BitBuffer&, const BitBuffer&) = default;
};

std::vector<std::uint64_t> count_frequencies(std::span<const Token> tokens,
                                             std::size_t alphabet_size);

// Optimal code lengths. Ties in the merge queue break on (weight, lowest
// contained symbol). A lone used symbol gets length 1.
// Throws Error(kEmptyInput) if every frequency is zero.
CodeLengthTable build_code_lengths(std::span<const std::uint64_t> frequencies);

// Canonical codes in (length, symbol) order. Requires a complete code
// (Kraft sum exactly 1) except for the single-symbol table; anything else
// throws Error(kCorrupt).
Codebook canonicalize(const CodeLengthTable& lengths);

BitBuffer encode(std::span<const Token> tokens, const Codebook& codebook);

// Decodes exactly `token_count` symbols. Bits left after the last symbol must
// be zero padding inside the final byte; otherwise, or on exhaustion or an
// unassigned prefix, throws Error(kCorrupt).
std::vector<Token> decode(const BitBuffer& bits, const CodeLengthTable& lengths,
                          std::uint64_t token_count);

}  // namespace patternrank::huffman
