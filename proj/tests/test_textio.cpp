/*
 * Ingestion (lines / FASTA / FASTQ), format detection, the synthetic
 * generator, output emission with its manifest, and file verification
 * including deliberate corruption.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "engine.hpp"
#include "json.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "textio.hpp"

using namespace colbwt;
namespace fs = std::filesystem;

namespace {

struct temp_dir {
  fs::path p;
  temp_dir() {
    static std::atomic<int> n{0};
    p = fs::temp_directory_path() /
        ("colbwt_textio_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    fs::create_directories(p);
  }
  ~temp_dir() {
    std::error_code ec;
    fs::remove_all(p, ec);
  }
};

template <typename F>
error capture(F&& f) {
  try {
    f();
  } catch (const error& e) {
    return e;
  }
  FAIL("expected a colbwt::error");
  return error(errc::ok, "unreachable");
}

void write_file(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
  REQUIRE(out.good());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void flip_byte(const fs::path& p, std::uint64_t offset) {
  std::string bytes = read_file(p);
  REQUIRE(offset < bytes.size());
  bytes[offset] = static_cast<char>(bytes[offset] ^ 0xFF);
  write_file(p, bytes);
}

std::vector<std::string> decoded_all(const sequence_collection& c) {
  std::vector<std::string> out;
  for (std::uint64_t i = 0; i < c.size(); ++i) out.push_back(c.decoded(i));
  return out;
}

}  // namespace

TEST_CASE("format detection goes by extension, case-insensitively") {
  using textio::detect_format;
  using textio::input_format;
  CHECK(detect_format("reads.fa") == input_format::fasta);
  CHECK(detect_format("reads.fasta") == input_format::fasta);
  CHECK(detect_format("genome.fna") == input_format::fasta);
  CHECK(detect_format("reads.FQ") == input_format::fastq);
  CHECK(detect_format("reads.fastq") == input_format::fastq);
  CHECK(detect_format("strings.txt") == input_format::lines);
  CHECK(detect_format("strings.lines") == input_format::lines);
  auto e = capture([] { detect_format("mystery.dat"); });
  CHECK(e.code() == errc::invalid_argument);
}

TEST_CASE("line files: one string per line, verbatim") {
  temp_dir td;
  alphabet abc("ACGT");
  auto p = td.p / "in.txt";

  write_file(p, "GATTACA\nTT\r\nA\n");
  auto c = textio::ingest(abc, p, textio::input_format::autodetect);
  CHECK(decoded_all(c) == std::vector<std::string>{"GATTACA", "TT", "A"});

  // no final newline is fine
  write_file(p, "AC\nGT");
  CHECK(textio::ingest(abc, p, textio::input_format::lines).size() == 2);

  // line files are case-sensitive: lowercase is a foreign symbol here
  write_file(p, "acgt\n");
  CHECK(capture([&] { textio::ingest(abc, p, textio::input_format::lines); }).code() ==
        errc::foreign_symbol);

  write_file(p, "AC\nG T\n");
  auto e = capture([&] { textio::ingest(abc, p, textio::input_format::lines); });
  CHECK(e.code() == errc::parse);
  CHECK(e.detail_a() == 2);  // the offending line number

  write_file(p, "AC\n\nGT\n");
  CHECK(capture([&] { textio::ingest(abc, p, textio::input_format::lines); }).code() ==
        errc::empty_string);

  CHECK(capture([&] {
          textio::ingest(abc, td.p / "missing.txt", textio::input_format::lines);
        }).code() == errc::io);
}

TEST_CASE("FASTA: headers, wrapped sequence lines, uppercasing") {
  temp_dir td;
  alphabet abc("ACGT");
  auto p = td.p / "in.fa";

  write_file(p, ">r1 first read\nGAT\nTACA\n\n>r2\ngattaca\n");
  auto c = textio::ingest(abc, p, textio::input_format::autodetect);
  CHECK(decoded_all(c) == std::vector<std::string>{"GATTACA", "GATTACA"});

  write_file(p, "GAT\n>r1\nACGT\n");
  auto e = capture([&] { textio::ingest(abc, p, textio::input_format::fasta); });
  CHECK(e.code() == errc::parse);
  CHECK(e.detail_a() == 1);

  write_file(p, ">r1\n>r2\nACGT\n");
  CHECK(capture([&] { textio::ingest(abc, p, textio::input_format::fasta); }).code() ==
        errc::empty_string);
}

TEST_CASE("FASTQ: four-line records, quality length checked") {
  temp_dir td;
  alphabet abc("ACGT");
  auto p = td.p / "in.fq";

  write_file(p, "@r1\nGATT\n+\n!!!!\n@r2\nacgt\n+r2 comment\nIIII\n");
  auto c = textio::ingest(abc, p, textio::input_format::autodetect);
  CHECK(decoded_all(c) == std::vector<std::string>{"GATT", "ACGT"});

  // quality line starting with '@' is consumed positionally, not as a header
  write_file(p, "@r1\nAC\n+\n@I\n@r2\nGT\n+\nII\n");
  CHECK(textio::ingest(abc, p, textio::input_format::fastq).size() == 2);

  write_file(p, "r1\nGATT\n+\n!!!!\n");
  auto e1 = capture([&] { textio::ingest(abc, p, textio::input_format::fastq); });
  CHECK(e1.code() == errc::parse);
  CHECK(e1.detail_a() == 1);

  write_file(p, "@r1\nGATT\n+\n!!!\n");
  auto e2 = capture([&] { textio::ingest(abc, p, textio::input_format::fastq); });
  CHECK(e2.code() == errc::parse);
  CHECK(e2.detail_a() == 4);

  write_file(p, "@r1\nGATT\nplus\n!!!!\n");
  CHECK(capture([&] { textio::ingest(abc, p, textio::input_format::fastq); }).code() ==
        errc::parse);

  write_file(p, "@r1\nGATT\n");
  CHECK(capture([&] { textio::ingest(abc, p, textio::input_format::fastq); }).code() ==
        errc::parse);
}

TEST_CASE("synthetic collections are deterministic and draw from the right symbols") {
  temp_dir td;
  alphabet abc("ACGTN");
  auto p1 = td.p / "a.txt", p2 = td.p / "b.txt";

  textio::synth(p1, 42, 5, 20, 4, abc);
  textio::synth(p2, 42, 5, 20, 4, abc);
  std::string bytes = read_file(p1);
  CHECK(bytes == read_file(p2));
  CHECK(bytes.size() == 5 * 21);  // 20 symbols + newline per line

  // the generator is pinned to the raw engine stream, not a distribution
  std::mt19937_64 rng(42);
  std::string expect;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 20; ++j) expect.push_back("ACGNT"[rng() % 4]);
    expect.push_back('\n');
  }
  CHECK(bytes == expect);

  // sigma = 4 keeps the four smallest symbols A,C,G,N; T never appears
  CHECK(bytes.find('T') == std::string::npos);

  textio::synth(p2, 43, 5, 20, 4, abc);
  CHECK(read_file(p2) != bytes);

  auto c = textio::ingest(abc, p1, textio::input_format::lines);
  CHECK(c.size() == 5);
  CHECK(c.max_length() == 20);

  CHECK(capture([&] { textio::synth(p1, 1, 0, 5, 2, abc); }).code() == errc::invalid_argument);
  CHECK(capture([&] { textio::synth(p1, 1, 5, 0, 2, abc); }).code() == errc::invalid_argument);
  CHECK(capture([&] { textio::synth(p1, 1, 5, 5, 0, abc); }).code() == errc::invalid_argument);
  CHECK(capture([&] { textio::synth(p1, 1, 5, 5, 6, abc); }).code() == errc::invalid_argument);
}

TEST_CASE("output paths derive from the prefix") {
  auto p = textio::output_paths("/tmp/run/x", true);
  CHECK(p.bwt == fs::path("/tmp/run/x.bwt"));
  CHECK(p.lcp == fs::path("/tmp/run/x.lcp"));
  CHECK(p.gsa == fs::path("/tmp/run/x.gsa"));
  CHECK(p.manifest == fs::path("/tmp/run/x.json"));
  CHECK(textio::output_paths("y", false).gsa.empty());
}

TEST_CASE("emission, manifest and verification round trip") {
  temp_dir td;
  auto c = sequence_collection::validate(alphabet("ACGT"), {"GATTACA", "TT", "A"});
  engine::run_config cfg;
  cfg.tmp_dir = td.p / "tmp";
  cfg.emit_gsa = true;
  cfg.lcp_width = 2;
  auto r = engine::run(c, cfg);
  auto prefix = td.p / "out" / "run1";
  auto paths = textio::emit_outputs(c, r, prefix);

  auto truth = oracle::compute(c);
  std::string bwt_text;
  for (symbol_code s : truth.bwt) bwt_text.push_back(c.abc().decode(s));
  CHECK(read_file(paths.bwt) == bwt_text);
  CHECK(fs::file_size(paths.lcp) == truth.lcp.size() * 2);
  CHECK(fs::file_size(paths.gsa) == truth.gsa.size() * (2 + 4));

  auto manifest = nlohmann::json::parse(read_file(paths.manifest));
  CHECK(manifest["m"] == 3);
  CHECK(manifest["n"] == 13);
  CHECK(manifest["k"] == 7);
  CHECK(manifest["sigma"] == 4);
  CHECK(manifest["alphabet"] == "ACGT");
  CHECK(manifest["lcp_width"] == 2);
  CHECK(manifest["gsa"] == true);
  CHECK(manifest["pos_width"] == 2);
  CHECK(manifest["seq_width"] == 4);
  CHECK(manifest["iterations"] == 7);
  CHECK(manifest["records_written"].get<std::uint64_t>() > 13);
  CHECK(manifest["peak"]["slot_elements"] == 15);
  CHECK(manifest["peak"]["next_symbol_elements"] == 3);
  CHECK(manifest["peak"]["total_elements"].get<std::uint64_t>() <= 6 * 3 + 25 + 10);
  CHECK(manifest["peak"]["live_bytes"].get<std::uint64_t>() > 0);
  CHECK(manifest["micros_per_input_base"].get<double>() > 0);

  auto rep = textio::verify_outputs(c, prefix, true, 1000);
  CHECK(rep.matched);

  // not asking for the suffix array skips that stream entirely
  CHECK(textio::verify_outputs(c, prefix, false, 1000).matched);
}

TEST_CASE("verification pinpoints the first diverging record of each stream") {
  temp_dir td;
  auto c = sequence_collection::validate(alphabet("ACGT"), {"GATTACA", "TT", "A"});
  engine::run_config cfg;
  cfg.tmp_dir = td.p / "tmp";
  cfg.emit_gsa = true;
  cfg.lcp_width = 2;
  auto r = engine::run(c, cfg);
  auto prefix = td.p / "run";
  auto paths = textio::emit_outputs(c, r, prefix);

  SUBCASE("bwt byte flip") {
    flip_byte(paths.bwt, 7);
    auto rep = textio::verify_outputs(c, prefix, true, 1000);
    CHECK(!rep.matched);
    CHECK(rep.stream == "bwt");
    CHECK(rep.first_divergence == 7);
  }
  SUBCASE("bwt truncation") {
    fs::resize_file(paths.bwt, 12);
    auto rep = textio::verify_outputs(c, prefix, true, 1000);
    CHECK(!rep.matched);
    CHECK(rep.stream == "bwt");
    CHECK(rep.first_divergence == 12);
  }
  SUBCASE("lcp value flip") {
    flip_byte(paths.lcp, 2 * 5);
    auto rep = textio::verify_outputs(c, prefix, true, 1000);
    CHECK(!rep.matched);
    CHECK(rep.stream == "lcp");
    CHECK(rep.first_divergence == 5);
  }
  SUBCASE("gsa pair flip") {
    flip_byte(paths.gsa, 6 * 4);
    auto rep = textio::verify_outputs(c, prefix, true, 1000);
    CHECK(!rep.matched);
    CHECK(rep.stream == "gsa");
    CHECK(rep.first_divergence == 4);
  }
  SUBCASE("gsa with a dangling half pair") {
    std::string bytes = read_file(paths.gsa);
    write_file(paths.gsa, bytes + std::string(3, '\0'));
    CHECK(capture([&] { textio::verify_outputs(c, prefix, true, 1000); }).code() ==
          errc::io);
  }
  SUBCASE("extra trailing records diverge at n") {
    std::string bytes = read_file(paths.bwt);
    write_file(paths.bwt, bytes + "A");
    auto rep = textio::verify_outputs(c, prefix, true, 1000);
    CHECK(!rep.matched);
    CHECK(rep.stream == "bwt");
    CHECK(rep.first_divergence == 13);
  }
  SUBCASE("mangled manifest") {
    write_file(paths.manifest, "not json at all");
    CHECK(capture([&] { textio::verify_outputs(c, prefix, true, 1000); }).code() ==
          errc::parse);
  }
  SUBCASE("manifest missing required keys") {
    write_file(paths.manifest, "{}");
    CHECK(capture([&] { textio::verify_outputs(c, prefix, true, 1000); }).code() ==
          errc::parse);
  }
}

TEST_CASE("verification respects the size cap and the gsa expectation") {
  temp_dir td;
  auto c = sequence_collection::validate(alphabet("ACGT"), {"GATTACA", "TT", "A"});
  engine::run_config cfg;
  cfg.tmp_dir = td.p / "tmp";
  cfg.emit_gsa = false;
  auto r = engine::run(c, cfg);
  auto prefix = td.p / "run";
  textio::emit_outputs(c, r, prefix);

  auto e = capture([&] { textio::verify_outputs(c, prefix, false, 5); });
  CHECK(e.code() == errc::cap_exceeded);
  CHECK(e.detail_a() == 13);
  CHECK(e.detail_b() == 5);

  CHECK(textio::verify_outputs(c, prefix, false, 13).matched);

  // the run produced no suffix array, so expecting one is an immediate miss
  auto rep = textio::verify_outputs(c, prefix, true, 1000);
  CHECK(!rep.matched);
  CHECK(rep.stream == "gsa");
}
