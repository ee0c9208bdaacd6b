#include "patternrank/container.hpp"

#include <array>
#include <unordered_set>

namespace patternrank {

namespace {

constexpr std::array<std::uint32_t, 256> make_crc_table() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1U) ? 0xEDB88320U ^ (c >> 1) : c >> 1;
    table[i] = c;
  }
  return table;
}

constexpr auto kCrcTable = make_crc_table();

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  ByteView take(std::size_t n, const char* what) {
    if (n > data_.size() - pos_) {
      throw Error(ErrorCode::kTruncated, std::string("input ends inside ") + what);
    }
    const ByteView out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint8_t u8(const char* what) { return static_cast<std::uint8_t>(take(1, what)[0]); }

  std::uint64_t uint_le(std::size_t width, const char* what) {
    const ByteView b = take(width, what);
    std::uint64_t v = 0;
    for (std::size_t i = width; i-- > 0;) v = (v << 8) | static_cast<std::uint8_t>(b[i]);
    return v;
  }

  ByteView rest() {
    const ByteView out = data_.substr(pos_);
    pos_ = data_.size();
    return out;
  }

  std::size_t position() const { return pos_; }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

Dictionary parse_dictionary(ByteReader& in, const char* what) {
  const auto count = static_cast<std::size_t>(in.uint_le(2, what));
  std::vector<Bytes> entries;
  entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint8_t len = in.u8(what);
    entries.emplace_back(in.take(len, what));
  }
  try {
    return Dictionary(std::move(entries));
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorrupt, std::string(what) + ": " + e.what());
  }
}

void check_echo(std::uint8_t min_len, std::uint8_t max_len, const Dictionary& dictionary) {
  if (min_len < kMinPatternLength || min_len > max_len) {
    throw Error(ErrorCode::kCorrupt, "pre-defined dictionary has invalid length bounds");
  }
  for (const Bytes& entry : dictionary) {
    if (entry.size() < min_len || entry.size() > max_len) {
      throw Error(ErrorCode::kCorrupt, "pre-defined entry outside its length bounds");
    }
  }
}

// Config echo, dictionary and hash; shared by `.prd` files and v2 containers.
void put_predefined_body(Bytes& out, const PredefinedDictionary& predefined) {
  out.push_back(static_cast<char>(predefined.min_len));
  out.push_back(static_cast<char>(predefined.max_len));
  const Bytes body = serialize_dictionary(predefined.dictionary);
  out += body;
  put_u64(out, fnv1a64(body));
}

PredefinedDictionary parse_predefined_body(ByteReader& in) {
  PredefinedDictionary predefined;
  predefined.min_len = in.u8("dictionary bounds");
  predefined.max_len = in.u8("dictionary bounds");
  const std::size_t body_begin = in.position();
  predefined.dictionary = parse_dictionary(in, "pre-defined dictionary");
  const std::size_t body_size = in.position() - body_begin;
  const std::uint64_t stored = in.uint_le(8, "dictionary hash");
  const Bytes body = serialize_dictionary(predefined.dictionary);
  if (body.size() != body_size || fnv1a64(body) != stored) {
    throw Error(ErrorCode::kHashMismatch, "pre-defined dictionary content hash mismatch");
  }
  check_echo(predefined.min_len, predefined.max_len, predefined.dictionary);
  return predefined;
}

void check_magic(ByteView data, std::string_view magic) {
  const ByteView head = data.substr(0, magic.size());
  if (head != magic.substr(0, head.size())) {
    throw Error(ErrorCode::kBadMagic, "expected magic " + std::string(magic));
  }
  if (head.size() < magic.size()) throw Error(ErrorCode::kTruncated, "input ends inside magic");
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kV1: return "v1";
    case Algorithm::kV2: return "v2";
    case Algorithm::kV1Huffman: return "v1h";
    case Algorithm::kV2Huffman: return "v2h";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (const Algorithm a :
       {Algorithm::kV1, Algorithm::kV2, Algorithm::kV1Huffman, Algorithm::kV2Huffman}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

std::uint32_t crc32(ByteView data) {
  std::uint32_t c = 0xFFFFFFFFU;
  for (const char ch : data) c = kCrcTable[(c ^ static_cast<std::uint8_t>(ch)) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFU;
}

std::uint64_t fnv1a64(ByteView data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char ch : data) {
    h ^= static_cast<std::uint8_t>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

Bytes escape_encode(std::span<const Token> tokens) {
  Bytes out;
  out.reserve(tokens.size() + tokens.size() / 8);
  for (const Token t : tokens) {
    if (t.is_literal()) {
      out.push_back(static_cast<char>(t.byte()));
      if (t.byte() == kEscapeByte) out.push_back('\0');
      continue;
    }
    out.push_back(static_cast<char>(kEscapeByte));
    std::uint64_t v = t.index() + 1;
    do {
      std::uint8_t b = v & 0x7F;
      v >>= 7;
      if (v != 0) b |= 0x80;
      out.push_back(static_cast<char>(b));
    } while (v != 0);
  }
  return out;
}

std::vector<Token> escape_decode(ByteView bytes, std::size_t dict_size) {
  std::vector<Token> tokens;
  tokens.reserve(bytes.size());
  for (std::size_t i = 0; i < bytes.size();) {
    const auto b = static_cast<std::uint8_t>(bytes[i++]);
    if (b != kEscapeByte) {
      tokens.push_back(Token::literal(b));
      continue;
    }
    std::uint64_t v = 0;
    unsigned shift = 0;
    std::size_t digits = 0;
    for (;;) {
      if (i >= bytes.size()) throw Error(ErrorCode::kCorrupt, "truncated escape sequence");
      if (shift > 14) throw Error(ErrorCode::kCorrupt, "escape varint overflow");
      const auto d = static_cast<std::uint8_t>(bytes[i++]);
      ++digits;
      v |= static_cast<std::uint64_t>(d & 0x7F) << shift;
      shift += 7;
      if ((d & 0x80) == 0) {
        if (d == 0 && digits > 1) throw Error(ErrorCode::kCorrupt, "non-minimal escape varint");
        break;
      }
    }
    if (v == 0) {
      tokens.push_back(Token::literal(kEscapeByte));
    } else if (v - 1 >= dict_size) {
      throw Error(ErrorCode::kCorrupt, "escape code index " + std::to_string(v - 1) +
                                           " outside dictionary of " + std::to_string(dict_size));
    } else {
      tokens.push_back(Token::code_at(v - 1));
    }
  }
  return tokens;
}

Bytes serialize_dictionary(const Dictionary& dictionary) {
  Bytes out;
  put_u16(out, static_cast<std::uint16_t>(dictionary.size()));
  for (const Bytes& entry : dictionary) {
    out.push_back(static_cast<char>(entry.size()));
    out += entry;
  }
  return out;
}

std::uint64_t PredefinedDictionary::content_hash() const {
  return fnv1a64(serialize_dictionary(dictionary));
}

Bytes save_predefined(const PredefinedDictionary& predefined) {
  check_echo(predefined.min_len, predefined.max_len, predefined.dictionary);
  Bytes out(kDictionaryMagic);
  put_predefined_body(out, predefined);
  return out;
}

PredefinedDictionary load_predefined(ByteView file) {
  check_magic(file, kDictionaryMagic);
  ByteReader in(file.substr(kDictionaryMagic.size()));
  PredefinedDictionary predefined = parse_predefined_body(in);
  if (!in.rest().empty()) throw Error(ErrorCode::kCorrupt, "trailing bytes after dictionary");
  return predefined;
}

Bytes write_container(const Container& c) {
  const Algorithm algo = c.header.algorithm;
  if (uses_predefined(algo) != c.predefined.has_value()) {
    throw Error(ErrorCode::kUsage, std::string("algorithm ") + std::string(to_string(algo)) +
                                       (uses_predefined(algo) ? " requires" : " forbids") +
                                       " a pre-defined dictionary");
  }
  if (uses_huffman(algo) != std::holds_alternative<HuffmanPayload>(c.payload)) {
    throw Error(ErrorCode::kUsage, "payload kind does not match the algorithm");
  }
  const std::size_t predefined_count = c.predefined ? c.predefined->dictionary.size() : 0;
  symbol_space_size(predefined_count, c.dynamic.size());

  Bytes out(kContainerMagic);
  out.push_back(static_cast<char>(algo));
  out.push_back(static_cast<char>(c.header.flags));
  put_u64(out, c.header.original_length);
  put_u32(out, c.header.original_crc32);
  if (c.predefined) put_predefined_body(out, *c.predefined);
  out += serialize_dictionary(c.dynamic);

  if (const auto* huff = std::get_if<HuffmanPayload>(&c.payload)) {
    put_u64(out, huff->token_count);
    put_u32(out, static_cast<std::uint32_t>(huff->lengths.alphabet_size()));
    for (const std::uint8_t len : huff->lengths.lengths()) out.push_back(static_cast<char>(len));
    out.append(reinterpret_cast<const char*>(huff->bits.bytes.data()), huff->bits.bytes.size());
  } else {
    out += std::get<EscapedPayload>(c.payload);
  }
  return out;
}

Container read_container(ByteView bytes) {
  check_magic(bytes, kContainerMagic);
  ByteReader in(bytes.substr(kContainerMagic.size()));
  Container c;
  const std::uint8_t algo = in.u8("header");
  if (algo < 0x01 || algo > 0x04) {
    throw Error(ErrorCode::kUnknownAlgorithm, "algorithm byte " + std::to_string(algo));
  }
  c.header.algorithm = static_cast<Algorithm>(algo);
  c.header.flags = in.u8("header");
  if (c.header.flags != 0) throw Error(ErrorCode::kCorrupt, "reserved flags are set");
  c.header.original_length = in.uint_le(8, "header");
  c.header.original_crc32 = static_cast<std::uint32_t>(in.uint_le(4, "header"));

  if (uses_predefined(c.header.algorithm)) c.predefined = parse_predefined_body(in);
  c.dynamic = parse_dictionary(in, "dynamic dictionary");

  const std::size_t predefined_count = c.predefined ? c.predefined->dictionary.size() : 0;
  std::size_t alphabet = 0;
  try {
    alphabet = symbol_space_size(predefined_count, c.dynamic.size());
  } catch (const Error&) {
    throw Error(ErrorCode::kCorrupt, "dictionaries overflow the symbol space");
  }
  if (c.predefined) {
    std::unordered_set<ByteView> seen(c.predefined->dictionary.begin(),
                                      c.predefined->dictionary.end());
    for (const Bytes& entry : c.dynamic) {
      if (seen.contains(entry)) {
        throw Error(ErrorCode::kCorrupt, "dynamic entry duplicates a pre-defined entry");
      }
    }
  }

  if (uses_huffman(c.header.algorithm)) {
    HuffmanPayload huff;
    huff.token_count = in.uint_le(8, "token count");
    const std::uint64_t stored_alphabet = in.uint_le(4, "alphabet size");
    if (stored_alphabet != alphabet) {
      throw Error(ErrorCode::kCorrupt, "alphabet size " + std::to_string(stored_alphabet) +
                                           " disagrees with dictionaries (" +
                                           std::to_string(alphabet) + ")");
    }
    const ByteView table = in.take(alphabet, "code-length table");
    huff.lengths = huffman::CodeLengthTable(std::vector<std::uint8_t>(table.begin(), table.end()));
    const ByteView stream = in.rest();
    huff.bits.bytes.assign(stream.begin(), stream.end());
    huff.bits.bit_count = stream.size() * 8;
    c.payload = std::move(huff);
  } else {
    c.payload = EscapedPayload(in.rest());
  }
  return c;
}

}  // namespace patternrank
