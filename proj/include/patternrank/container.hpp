#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "patternrank/core_model.hpp"
#include "patternrank/huffman.hpp"

namespace patternrank {

enum class Algorithm : std::uint8_t {
  kV1 = 0x01,
  kV2 = 0x02,
  kV1Huffman = 0x03,
  kV2Huffman = 0x04,
};

constexpr bool uses_predefined(Algorithm a) {
  return a == Algorithm::kV2 || a == Algorithm::kV2Huffman;
}
constexpr bool uses_huffman(Algorithm a) {
  return a == Algorithm::kV1Huffman || a == Algorithm::kV2Huffman;
}

// "v1", "v2", "v1h", "v2h".
std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

inline constexpr std::string_view kContainerMagic = "PRK1";
inline constexpr std::string_view kDictionaryMagic = "PRD1";
inline constexpr std::uint8_t kEscapeByte = 0x1B;

// CRC-32/IEEE (reflected 0xEDB88320, init and final xor 0xFFFFFFFF).
std::uint32_t crc32(ByteView data);
// 64-bit FNV-1a.
std::uint64_t fnv1a64(ByteView data);

// Literal b != 0x1B -> b; literal 0x1B -> 1B 00; code index i -> 1B LEB128(i + 1).
Bytes escape_encode(std::span<const Token> tokens);
std::vector<Token> escape_decode(ByteView bytes, std::size_t dict_size);

// u16 LE count, then per entry a length byte and the pattern bytes.
Bytes serialize_dictionary(const Dictionary& dictionary);

// Corpus-derived dictionary plus the length bounds it was built with.
struct PredefinedDictionary {
  std::uint8_t min_len = 3;
  std::uint8_t max_len = 32;
  Dictionary dictionary;

  // FNV-1a over serialize_dictionary(dictionary).
  std::uint64_t content_hash() const;

  friend bool operator==(const PredefinedDictionary&, const PredefinedDictionary&) = default;
};

// `.prd` file: "PRD1", min_len, max_len, serialized dictionary, u64 LE hash.
Bytes save_predefined(const PredefinedDictionary& predefined);
PredefinedDictionary load_predefined(ByteView file);

struct ContainerHeader {
  Algorithm algorithm = Algorithm::kV1;
  std::uint8_t flags = 0;
  std::uint64_t original_length = 0;
  std::uint32_t original_crc32 = 0;

  friend bool operator==(const ContainerHeader&, const ContainerHeader&) = default;
};

inline constexpr std::size_t kHeaderSize = 18;

struct HuffmanPayload {
  std::uint64_t token_count = 0;
  huffman::CodeLengthTable lengths;  // alphabet_size == lengths.alphabet_size()
  huffman::BitBuffer bits;

  friend bool operator==(const HuffmanPayload&, const HuffmanPayload&) = default;
};

using EscapedPayload = Bytes;

struct Container {
  ContainerHeader header;
  std::optional<PredefinedDictionary> predefined;  // present iff v2-family
  Dictionary dynamic;
  std::variant<EscapedPayload, HuffmanPayload> payload;

  friend bool operator==(const Container&, const Container&) = default;
};

// Throws Error(kUsage) when the algorithm byte disagrees with the presence of
// a predefined dictionary or with the payload kind.
Bytes write_container(const Container& container);

// Validates magic, algorithm, reserved flags, dictionary structure, the
// inlined dictionary hash and the Huffman section sizes. Does not decode the
// payload.
Container read_container(ByteView bytes);

}  // namespace patternrank
