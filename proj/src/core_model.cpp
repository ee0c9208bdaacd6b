#include "patternrank/core_model.hpp"

#include <algorithm>
#include <unordered_set>

namespace patternrank {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kUsage: return "usage";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kUnknownAlgorithm: return "unknown-algorithm";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kHashMismatch: return "hash-mismatch";
    case ErrorCode::kCorrupt: return "corrupt";
    case ErrorCode::kIntegrity: return "integrity";
    case ErrorCode::kRoundTrip: return "round-trip";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

bool Error::is_corruption() const noexcept {
  switch (code_) {
    case ErrorCode::kBadMagic:
    case ErrorCode::kUnknownAlgorithm:
    case ErrorCode::kTruncated:
    case ErrorCode::kHashMismatch:
    case ErrorCode::kCorrupt:
    case ErrorCode::kIntegrity:
      return true;
    default:
      return false;
  }
}

bool EngineConfig::valid() const noexcept {
  return kMinPatternLength <= min_len && min_len <= max_len && max_len <= kMaxPatternLength &&
         top_k >= 1 && top_k <= kMaxPatternSymbols;
}

void EngineConfig::validate() const {
  if (min_len < kMinPatternLength) {
    throw Error(ErrorCode::kConfig, "min_len must be at least 2");
  }
  if (min_len > max_len) {
    throw Error(ErrorCode::kConfig, "min_len must not exceed max_len");
  }
  if (max_len > kMaxPatternLength) {
    throw Error(ErrorCode::kConfig, "max_len must not exceed 255");
  }
  if (top_k < 1 || top_k > kMaxPatternSymbols) {
    throw Error(ErrorCode::kConfig, "top_k must be in [1, 65280]");
  }
}

Dictionary::Dictionary(std::vector<Bytes> entries) : entries_(std::move(entries)) {
  std::unordered_set<ByteView> seen;
  seen.reserve(entries_.size());
  for (const Bytes& entry : entries_) {
    if (entry.size() < kMinPatternLength || entry.size() > kMaxPatternLength) {
      throw Error(ErrorCode::kConfig,
                  "dictionary entry length " + std::to_string(entry.size()) + " out of range");
    }
    if (!seen.insert(entry).second) {
      throw Error(ErrorCode::kConfig, "duplicate dictionary entry");
    }
  }
  if (entries_.size() > kMaxPatternSymbols) {
    throw Error(ErrorCode::kConfig, "dictionary exceeds the 16-bit symbol space");
  }
}

bool Dictionary::contains(ByteView pattern) const {
  return std::find(entries_.begin(), entries_.end(), pattern) != entries_.end();
}

std::size_t symbol_space_size(std::size_t predefined_count, std::size_t dynamic_count) {
  if (predefined_count > kMaxPatternSymbols ||
      dynamic_count > kMaxPatternSymbols - predefined_count) {
    throw Error(ErrorCode::kConfig, "pattern symbols overflow the 16-bit symbol space");
  }
  return kFirstCodeSymbol + predefined_count + dynamic_count;
}

bool validate_tokens(std::span<const Token> tokens, std::size_t dict_size) {
  return std::all_of(tokens.begin(), tokens.end(), [dict_size](Token t) {
    return t.is_literal() || t.index() < dict_size;
  });
}

}  // namespace patternrank
