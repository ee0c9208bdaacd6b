#include "patternrank/codecs.hpp"

#include <algorithm>
#include <unordered_set>

#include "patternrank/huffman.hpp"
#include "patternrank/pattern_engine.hpp"

namespace patternrank {

namespace {

constexpr std::uint64_t kSelectableFrequency = 2;

Container make_container(Algorithm algorithm, ByteView data,
                         const PredefinedDictionary* predefined, Substitution&& sub) {
  Container c;
  c.header.algorithm = algorithm;
  c.header.original_length = data.size();
  c.header.original_crc32 = crc32(data);
  if (predefined != nullptr) c.predefined = *predefined;
  c.dynamic = std::move(sub.dynamic);
  if (!uses_huffman(algorithm)) {
    c.payload = escape_encode(sub.tokens);
    return c;
  }
  HuffmanPayload huff;
  huff.token_count = sub.tokens.size();
  const std::size_t alphabet = symbol_space_size(sub.predefined.size(), c.dynamic.size());
  if (sub.tokens.empty()) {
    huff.lengths = huffman::CodeLengthTable(std::vector<std::uint8_t>(alphabet, 0));
  } else {
    huff.lengths = huffman::build_code_lengths(huffman::count_frequencies(sub.tokens, alphabet));
    huff.bits = huffman::encode(sub.tokens, huffman::canonicalize(huff.lengths));
  }
  c.payload = std::move(huff);
  return c;
}

}  // namespace

Substitution substitute_v1(ByteView data, const EngineConfig& cfg) {
  cfg.validate();
  const Segment whole{0, data.size()};
  const auto stats = extract_patterns(data, std::span(&whole, 1), cfg, kSelectableFrequency);
  Substitution sub;
  sub.dynamic = rank_and_select(stats, cfg.top_k);
  sub.tokens = tokenize(data, Matcher(sub.predefined, sub.dynamic));
  return sub;
}

Substitution substitute_v2(ByteView data, const EngineConfig& cfg,
                           const PredefinedDictionary& predefined) {
  cfg.validate();
  if (predefined.min_len < cfg.min_len || predefined.max_len > cfg.max_len ||
      predefined.min_len > predefined.max_len) {
    throw Error(ErrorCode::kUsage,
                "pre-defined dictionary bounds [" + std::to_string(predefined.min_len) + ", " +
                    std::to_string(predefined.max_len) + "] fall outside the configured [" +
                    std::to_string(cfg.min_len) + ", " + std::to_string(cfg.max_len) + "]");
  }
  Substitution sub;
  sub.predefined = predefined.dictionary;

  // Residual literal runs of the pre-defined pass.
  std::vector<Segment> residual;
  {
    const std::vector<Token> stage1 = tokenize(data, Matcher(sub.predefined, Dictionary{}));
    std::size_t pos = 0;
    for (const Token t : stage1) {
      const std::size_t width = t.is_literal() ? 1 : sub.predefined[t.index()].size();
      if (t.is_literal()) {
        if (!residual.empty() && residual.back().end == pos) {
          residual.back().end += 1;
        } else {
          residual.push_back({pos, pos + 1});
        }
      }
      pos += width;
    }
  }

  const std::unordered_set<ByteView> known(sub.predefined.begin(), sub.predefined.end());
  std::vector<PatternStats> stats = extract_patterns(data, residual, cfg, kSelectableFrequency);
  std::erase_if(stats, [&known](const PatternStats& s) { return known.contains(s.pattern); });
  const std::size_t room = kMaxPatternSymbols - std::min(kMaxPatternSymbols, sub.predefined.size());
  sub.dynamic = rank_and_select(stats, std::min(cfg.top_k, room));
  sub.tokens = tokenize(data, Matcher(sub.predefined, sub.dynamic));
  return sub;
}

Bytes compress_v1(ByteView data, const EngineConfig& cfg) {
  return write_container(make_container(Algorithm::kV1, data, nullptr, substitute_v1(data, cfg)));
}

Bytes compress_v2(ByteView data, const EngineConfig& cfg, const PredefinedDictionary& predefined) {
  return write_container(
      make_container(Algorithm::kV2, data, &predefined, substitute_v2(data, cfg, predefined)));
}

Bytes compress_hybrid(ByteView data, const EngineConfig& cfg,
                      const PredefinedDictionary* predefined) {
  if (predefined != nullptr) {
    return write_container(make_container(Algorithm::kV2Huffman, data, predefined,
                                          substitute_v2(data, cfg, *predefined)));
  }
  return write_container(
      make_container(Algorithm::kV1Huffman, data, nullptr, substitute_v1(data, cfg)));
}

Bytes compress(Algorithm algorithm, ByteView data, const EngineConfig& cfg,
               const PredefinedDictionary* predefined) {
  if (uses_predefined(algorithm) && predefined == nullptr) {
    throw Error(ErrorCode::kUsage,
                std::string(to_string(algorithm)) + " requires a pre-defined dictionary");
  }
  switch (algorithm) {
    case Algorithm::kV1: return compress_v1(data, cfg);
    case Algorithm::kV2: return compress_v2(data, cfg, *predefined);
    case Algorithm::kV1Huffman: return compress_hybrid(data, cfg, nullptr);
    case Algorithm::kV2Huffman: return compress_hybrid(data, cfg, predefined);
  }
  throw Error(ErrorCode::kUnknownAlgorithm, "unknown algorithm");
}

namespace {

Bytes decode_container(const Container& c) {
  const Dictionary empty;
  const Dictionary& predefined = c.predefined ? c.predefined->dictionary : empty;
  const std::size_t dict_size = predefined.size() + c.dynamic.size();

  std::vector<Token> tokens;
  if (const auto* huff = std::get_if<HuffmanPayload>(&c.payload)) {
    tokens = huffman::decode(huff->bits, huff->lengths, huff->token_count);
  } else {
    tokens = escape_decode(std::get<EscapedPayload>(c.payload), dict_size);
  }
  if (!validate_tokens(tokens, dict_size)) {
    throw Error(ErrorCode::kCorrupt, "token outside the dictionaries");
  }
  Bytes out = detokenize(tokens, predefined, c.dynamic);
  if (out.size() != c.header.original_length) {
    throw Error(ErrorCode::kIntegrity, "decoded " + std::to_string(out.size()) +
                                           " bytes, header says " +
                                           std::to_string(c.header.original_length));
  }
  if (crc32(out) != c.header.original_crc32) {
    throw Error(ErrorCode::kIntegrity, "CRC-32 mismatch");
  }
  return out;
}

}  // namespace

Bytes decompress(ByteView container) { return decode_container(read_container(container)); }

VerifyReport verify(ByteView container) {
  const Container c = read_container(container);
  decode_container(c);
  VerifyReport report;
  report.algorithm = c.header.algorithm;
  report.original_length = c.header.original_length;
  report.original_crc32 = c.header.original_crc32;
  report.predefined_entries = c.predefined ? c.predefined->dictionary.size() : 0;
  report.dynamic_entries = c.dynamic.size();
  if (c.predefined) report.predefined_hash = c.predefined->content_hash();
  report.crc_ok = true;
  return report;
}

}  // namespace patternrank
