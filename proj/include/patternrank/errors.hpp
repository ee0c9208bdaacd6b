#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace patternrank {

enum class ErrorCode {
  kConfig,            // EngineConfig or symbol-space bounds violated
  kUsage,             // inconsistent arguments (e.g. v2 without a dictionary)
  kIo,                // file system failure
  kEmptyInput,        // Huffman construction over an all-zero histogram
  kBadMagic,
  kUnknownAlgorithm,
  kTruncated,
  kHashMismatch,      // inlined or loaded pre-defined dictionary fails its FNV-1a check
  kCorrupt,           // malformed structure (bad varint, out-of-range code, Kraft violation, ...)
  kIntegrity,         // decoded output disagrees with stored length or CRC-32
  kRoundTrip,         // bench: decompress(compress(x)) != x
  kInternal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

  // True for every failure caused by bytes that did not come from a
  // well-behaved writer (bad magic through integrity).
  bool is_corruption() const noexcept;

 private:
  ErrorCode code_;
};

}  // namespace patternrank
