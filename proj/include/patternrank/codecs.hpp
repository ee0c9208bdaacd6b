#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "patternrank/container.hpp"
#include "patternrank/core_model.hpp"

namespace patternrank {

// The PatternRank phase shared by every variant: dictionaries plus the token
// stream they produce over the input.
struct Substitution {
  Dictionary predefined;
  Dictionary dynamic;
  std::vector<Token> tokens;
};

// extract -> rank_and_select(top_k) -> tokenize.
Substitution substitute_v1(ByteView data, const EngineConfig& cfg);

// Pre-defined pass first; dynamic patterns are mined from the literal runs it
// leaves, then the original data is re-tokenized against both dictionaries.
// Throws Error(kUsage) if the dictionary's length bounds fall outside cfg.
Substitution substitute_v2(ByteView data, const EngineConfig& cfg,
                           const PredefinedDictionary& predefined);

Bytes compress_v1(ByteView data, const EngineConfig& cfg = {});
Bytes compress_v2(ByteView data, const EngineConfig& cfg, const PredefinedDictionary& predefined);
// Huffman over the v1 token stream, or the v2 stream when `predefined` is set.
Bytes compress_hybrid(ByteView data, const EngineConfig& cfg,
                      const PredefinedDictionary* predefined = nullptr);

// Dispatch by algorithm; v2-family variants require `predefined`.
Bytes compress(Algorithm algorithm, ByteView data, const EngineConfig& cfg,
               const PredefinedDictionary* predefined = nullptr);

// Self-describing; verifies the stored length and CRC-32 of the output.
Bytes decompress(ByteView container);

struct VerifyReport {
  Algorithm algorithm = Algorithm::kV1;
  std::uint64_t original_length = 0;
  std::uint32_t original_crc32 = 0;
  std::size_t predefined_entries = 0;
  std::size_t dynamic_entries = 0;
  std::optional<std::uint64_t> predefined_hash;
  bool crc_ok = false;
};

// Full decompression with the output discarded. Errors propagate as from
// decompress, so crc_ok is true in any returned report.
VerifyReport verify(ByteView container);

}  // namespace patternrank
