// prk: command-line front end for the PatternRank toolkit.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "patternrank/bench.hpp"
#include "patternrank/codecs.hpp"
#include "patternrank/container.hpp"
#include "patternrank/dict_builder.hpp"
#include "patternrank/file_io.hpp"

namespace fs = std::filesystem;
using namespace patternrank;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitCorrupt = 4;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kUsage:
    case ErrorCode::kConfig:
      return kExitUsage;
    case ErrorCode::kIo:
      return kExitIo;
    default:
      return e.is_corruption() || e.code() == ErrorCode::kRoundTrip ? kExitCorrupt : 1;
  }
}

Bytes read_input(const std::string& path) {
  if (path == "-") {
    std::cin >> std::noskipws;
    Bytes data((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
    if (std::cin.bad()) throw Error(ErrorCode::kIo, "cannot read standard input");
    return data;
  }
  return read_file(path);
}

void write_output(const std::string& path, ByteView data, bool force) {
  if (path == "-") {
    std::cout.write(data.data(), static_cast<std::streamsize>(data.size()));
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::kIo, "cannot write standard output");
    return;
  }
  if (!force && fs::exists(path)) {
    throw Error(ErrorCode::kUsage, path + " exists (use --force to overwrite)");
  }
  write_file(path, data);
}

struct EngineFlags {
  EngineConfig cfg;

  void add_to(CLI::App* app) {
    app->add_option("--min-len", cfg.min_len, "shortest pattern length in bytes")
        ->capture_default_str();
    app->add_option("--max-len", cfg.max_len, "longest pattern length in bytes")
        ->capture_default_str();
    app->add_option("--top-k", cfg.top_k, "number of patterns to keep")->capture_default_str();
  }
};

std::optional<PredefinedDictionary> load_dictionary(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_predefined(read_file(path));
}

std::string escaped(ByteView bytes) {
  std::string out = "\"";
  for (const char c : bytes) {
    const auto b = static_cast<unsigned char>(c);
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (b >= 0x20 && b < 0x7F) {
      out += c;
    } else {
      char buf[5];
      std::snprintf(buf, sizeof buf, "\\x%02x", b);
      out += buf;
    }
  }
  return out + "\"";
}

std::string hex(std::uint64_t v, int width) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%0*llx", width, static_cast<unsigned long long>(v));
  return buf;
}

void print_entries(const char* label, const Dictionary& dictionary, std::size_t limit) {
  for (std::size_t i = 0; i < std::min(limit, dictionary.size()); ++i) {
    std::cout << label << '[' << i << "]: " << escaped(dictionary[i]) << '\n';
  }
}

void inspect(const std::string& path) {
  const Bytes data = read_file(path);
  if (ByteView(data).starts_with(kDictionaryMagic)) {
    const PredefinedDictionary d = load_predefined(data);
    std::cout << "format: prd\n"
              << "min_len: " << int{d.min_len} << '\n'
              << "max_len: " << int{d.max_len} << '\n'
              << "entries: " << d.dictionary.size() << '\n'
              << "content_hash: " << hex(d.content_hash(), 16) << '\n'
              << "file_bytes: " << data.size() << '\n';
    print_entries("entry", d.dictionary, 10);
    return;
  }
  const Container c = read_container(data);
  std::cout << "format: prk\n"
            << "algorithm: " << to_string(c.header.algorithm) << '\n'
            << "algorithm_byte: " << hex(static_cast<unsigned>(c.header.algorithm), 2) << '\n'
            << "flags: " << hex(c.header.flags, 2) << '\n'
            << "original_length: " << c.header.original_length << '\n'
            << "original_crc32: " << hex(c.header.original_crc32, 8) << '\n';
  if (c.predefined) {
    std::cout << "predefined_entries: " << c.predefined->dictionary.size() << '\n'
              << "predefined_min_len: " << int{c.predefined->min_len} << '\n'
              << "predefined_max_len: " << int{c.predefined->max_len} << '\n'
              << "predefined_hash: " << hex(c.predefined->content_hash(), 16) << '\n';
  } else {
    std::cout << "predefined_entries: 0\n";
  }
  std::cout << "dynamic_entries: " << c.dynamic.size() << '\n';
  std::size_t payload = 0;
  if (const auto* huff = std::get_if<HuffmanPayload>(&c.payload)) {
    std::cout << "token_count: " << huff->token_count << '\n'
              << "alphabet_size: " << huff->lengths.alphabet_size() << '\n'
              << "used_symbols: " << huff->lengths.used_symbols() << '\n';
    payload = huff->bits.bytes.size();
  } else {
    payload = std::get<EscapedPayload>(c.payload).size();
  }
  std::cout << "payload_bytes: " << payload << '\n' << "container_bytes: " << data.size() << '\n';
  if (c.predefined) print_entries("predefined", c.predefined->dictionary, 10);
  print_entries("dynamic", c.dynamic, 10);
}

// "8x64K" -> (8, 65536).
std::pair<std::size_t, std::size_t> parse_synth(const std::string& text) {
  const std::size_t x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument("missing x");
    const std::size_t count = std::stoull(text.substr(0, x));
    std::string size_text = text.substr(x + 1);
    std::size_t multiplier = 1;
    for (const auto& [suffix, m] : {std::pair{"KiB", 1024}, {"MiB", 1 << 20}, {"K", 1024},
                                    {"M", 1 << 20}}) {
      const std::string s(suffix);
      if (size_text.size() > s.size() && size_text.ends_with(s)) {
        size_text.resize(size_text.size() - s.size());
        multiplier = static_cast<std::size_t>(m);
        break;
      }
    }
    std::size_t used = 0;
    const std::size_t size = std::stoull(size_text, &used) * multiplier;
    if (used != size_text.size()) throw std::invalid_argument("trailing characters");
    return {count, size};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kUsage, "--synth expects COUNTxSIZE, e.g. 8x64K");
  }
}

void print_bench_table(const bench::BenchReport& report) {
  std::printf("%-24s %-8s %12s %12s %8s %12s %12s\n", "input", "mode", "original", "compressed",
              "ratio", "comp_ms", "decomp_ms");
  for (const auto& row : report.rows) {
    std::printf("%-24s %-8s %12llu %12llu %8s %12.3f %12.3f\n", row.input.c_str(),
                std::string(to_string(row.mode)).c_str(),
                static_cast<unsigned long long>(row.original_size),
                static_cast<unsigned long long>(row.compressed_size),
                row.ratio ? std::to_string(*row.ratio).substr(0, 6).c_str() : "-",
                static_cast<double>(row.compress_time_ns) / 1e6,
                static_cast<double>(row.decompress_time_ns) / 1e6);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PatternRank dictionary compression toolkit"};
  app.require_subcommand(1);

  // compress
  auto* compress_cmd = app.add_subcommand("compress", "compress a file into a .prk container");
  std::string algo_name;
  std::string compress_dict;
  std::string compress_out;
  std::string compress_in;
  bool compress_force = false;
  EngineFlags compress_flags;
  compress_cmd->add_option("--algo", algo_name, "v1, v2, v1h or v2h")->required();
  compress_cmd->add_option("--dict", compress_dict, "pre-defined dictionary (.prd) for v2/v2h");
  compress_flags.add_to(compress_cmd);
  compress_cmd->add_option("-o,--output", compress_out, "output path (default IN.prk, '-' = stdout)");
  compress_cmd->add_flag("--force", compress_force, "overwrite an existing output");
  compress_cmd->add_option("IN", compress_in, "input file or '-'")->required();

  // decompress
  auto* decompress_cmd = app.add_subcommand("decompress", "restore a .prk container");
  std::string decompress_out;
  std::string decompress_in;
  bool decompress_force = false;
  decompress_cmd->add_option("-o,--output", decompress_out,
                             "output path (default IN without .prk, '-' = stdout)");
  decompress_cmd->add_flag("--force", decompress_force, "overwrite an existing output");
  decompress_cmd->add_option("IN", decompress_in, "container file or '-'")->required();

  // build-dict
  auto* build_cmd = app.add_subcommand("build-dict", "build a pre-defined dictionary from a corpus");
  std::string build_out;
  std::vector<std::string> build_paths;
  bool build_force = false;
  EngineFlags build_flags;
  build_cmd->add_option("--out", build_out, "output .prd path")->required();
  build_flags.add_to(build_cmd);
  build_cmd->add_flag("--force", build_force, "overwrite an existing output");
  build_cmd->add_option("PATH", build_paths, "corpus files or directories")->required();

  // inspect
  auto* inspect_cmd = app.add_subcommand("inspect", "describe a .prk container or .prd dictionary");
  std::string inspect_path;
  inspect_cmd->add_option("FILE", inspect_path, "file to inspect")->required();

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "compare DEFLATE and PatternRank variants");
  std::string bench_modes;
  std::string bench_dict;
  std::uint64_t bench_seed = 42;
  std::string bench_synth;
  std::string bench_report;
  std::string bench_csv;
  std::vector<std::string> bench_inputs;
  EngineFlags bench_flags;
  bench_cmd->add_option("--modes", bench_modes,
                        "comma list of deflate,v1,v2,v1h,v2h (default: all usable)");
  bench_cmd->add_option("--dict", bench_dict, "pre-defined dictionary for v2/v2h");
  bench_cmd->add_option("--seed", bench_seed, "synthetic corpus seed")->capture_default_str();
  bench_cmd->add_option("--synth", bench_synth, "synthetic corpus COUNTxSIZE, e.g. 8x64K");
  bench_cmd->add_option("--report", bench_report, "write the JSON report here");
  bench_cmd->add_option("--csv", bench_csv, "write the CSV report here");
  bench_flags.add_to(bench_cmd);
  bench_cmd->add_option("INPUT", bench_inputs, "files to benchmark");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compress_cmd->parsed()) {
      const auto algorithm = parse_algorithm(algo_name);
      if (!algorithm) throw Error(ErrorCode::kUsage, "unknown --algo '" + algo_name + "'");
      if (uses_predefined(*algorithm) && compress_dict.empty()) {
        throw Error(ErrorCode::kUsage, algo_name + " requires --dict");
      }
      if (!uses_predefined(*algorithm) && !compress_dict.empty()) {
        throw Error(ErrorCode::kUsage, "--dict only applies to v2 and v2h");
      }
      compress_flags.cfg.validate();
      const auto dictionary = load_dictionary(compress_dict);
      const Bytes input = read_input(compress_in);
      const Bytes packed = compress(*algorithm, input, compress_flags.cfg,
                                    dictionary ? &*dictionary : nullptr);
      std::string out = compress_out;
      if (out.empty()) out = compress_in == "-" ? "-" : compress_in + ".prk";
      write_output(out, packed, compress_force);
    } else if (decompress_cmd->parsed()) {
      std::string out = decompress_out;
      if (out.empty()) {
        if (decompress_in == "-") {
          out = "-";
        } else if (decompress_in.size() > 4 && decompress_in.ends_with(".prk")) {
          out = decompress_in.substr(0, decompress_in.size() - 4);
        } else {
          throw Error(ErrorCode::kUsage, "input lacks a .prk suffix; pass -o");
        }
      }
      const Bytes restored = decompress(read_input(decompress_in));
      write_output(out, restored, decompress_force);
    } else if (build_cmd->parsed()) {
      build_flags.cfg.validate();
      if (!build_force && fs::exists(build_out)) {
        throw Error(ErrorCode::kUsage, build_out + " exists (use --force to overwrite)");
      }
      const std::vector<fs::path> roots(build_paths.begin(), build_paths.end());
      std::vector<Bytes> files;
      for (const fs::path& p : collect_corpus_files(roots)) files.push_back(read_file(p));
      const std::vector<ByteView> views(files.begin(), files.end());
      const CorpusStats stats = analyze_corpus(views, build_flags.cfg, 2);
      const PredefinedDictionary d = build_predefined(stats, build_flags.cfg.top_k, build_flags.cfg);
      write_file(build_out, save_predefined(d));
      std::cerr << "build-dict: " << stats.files_seen << " files, " << stats.bytes_seen
                << " bytes, " << d.dictionary.size() << " entries -> " << build_out << '\n';
    } else if (inspect_cmd->parsed()) {
      inspect(inspect_path);
    } else if (bench_cmd->parsed()) {
      bench_flags.cfg.validate();
      const auto dictionary = load_dictionary(bench_dict);
      std::vector<bench::Mode> modes;
      if (!bench_modes.empty()) {
        modes = bench::parse_modes(bench_modes);
      } else {
        for (const bench::Mode m : bench::kAllModes) {
          if (dictionary || !bench::needs_predefined(m)) modes.push_back(m);
        }
      }
      std::vector<bench::BenchInput> inputs;
      for (const std::string& path : bench_inputs) inputs.push_back({path, read_file(path)});
      if (!bench_synth.empty() || inputs.empty()) {
        const auto [count, size] = parse_synth(bench_synth.empty() ? "8x64K" : bench_synth);
        const auto corpus = bench::synth_corpus(bench_seed, count, size);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
          inputs.push_back({"synth-" + std::to_string(bench_seed) + "-" + std::to_string(i),
                            corpus[i]});
        }
      }
      const auto report = bench::run_bench(inputs, modes, bench_flags.cfg,
                                           dictionary ? &*dictionary : nullptr);
      print_bench_table(report);
      if (!bench_report.empty()) write_file(bench_report, bench::to_json(report));
      if (!bench_csv.empty()) write_file(bench_csv, bench::to_csv(report));
    }
  } catch (const Error& e) {
    std::cerr << "prk: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "prk: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
