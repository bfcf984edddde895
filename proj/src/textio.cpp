/*
 * FASTA / FASTQ / line-oriented ingestion, output-file emission, the
 * deterministic synthetic-collection generator and file-level verification
 * against the reference implementation.
 */
#include "textio.hpp"

#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "oracle.hpp"
#include "segio.hpp"

namespace colbwt::textio {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t io_buffer = std::size_t{1} << 20;

void chomp(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

void upcase(std::string& s) {
  for (char& c : s)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - ('a' - 'A'));
}

bool has_blank(std::string_view s) {
  for (char c : s)
    if (c == ' ' || c == '\t' || c == '\v' || c == '\f') return true;
  return false;
}

std::ifstream open_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io, "cannot open " + path.string());
  return in;
}

[[noreturn]] void parse_fail(const fs::path& path, std::uint64_t line_no,
                             const std::string& what) {
  throw error(errc::parse,
              path.string() + ":" + std::to_string(line_no) + ": " + what, line_no);
}

sequence_collection ingest_lines(const alphabet& abc, const fs::path& path) {
  auto in = open_text(path);
  collection_builder b(abc);
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (has_blank(line)) parse_fail(path, line_no, "whitespace inside string");
    b.add(line);
  }
  return b.finish();
}

sequence_collection ingest_fasta(const alphabet& abc, const fs::path& path) {
  auto in = open_text(path);
  collection_builder b(abc);
  std::string line, seq;
  std::uint64_t line_no = 0;
  bool in_record = false;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (!line.empty() && line[0] == '>') {
      if (in_record) b.add(seq);
      seq.clear();
      in_record = true;
      continue;
    }
    if (line.empty()) continue;
    if (!in_record) parse_fail(path, line_no, "sequence data before the first '>' header");
    upcase(line);
    seq += line;
  }
  if (in_record) b.add(seq);
  return b.finish();
}

sequence_collection ingest_fastq(const alphabet& abc, const fs::path& path) {
  auto in = open_text(path);
  collection_builder b(abc);
  std::string head, seq, sep, qual;
  std::uint64_t line_no = 0;
  while (std::getline(in, head)) {
    ++line_no;
    chomp(head);
    if (head.empty() || head[0] != '@')
      parse_fail(path, line_no, "record header must start with '@'");
    if (!std::getline(in, seq))
      parse_fail(path, line_no, "record truncated after header");
    ++line_no;
    chomp(seq);
    if (!std::getline(in, sep))
      parse_fail(path, line_no, "record truncated before '+' separator");
    ++line_no;
    chomp(sep);
    if (sep.empty() || sep[0] != '+')
      parse_fail(path, line_no, "separator line must start with '+'");
    if (!std::getline(in, qual))
      parse_fail(path, line_no, "record truncated before quality line");
    ++line_no;
    chomp(qual);
    if (qual.size() != seq.size())
      parse_fail(path, line_no, "quality length differs from sequence length");
    upcase(seq);
    b.add(seq);
  }
  return b.finish();
}

}  // namespace

input_format detect_format(const fs::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + ('a' - 'A'));
  if (ext == ".fa" || ext == ".fasta" || ext == ".fna") return input_format::fasta;
  if (ext == ".fq" || ext == ".fastq") return input_format::fastq;
  if (ext == ".txt" || ext == ".lines") return input_format::lines;
  throw error(errc::invalid_argument,
              "cannot infer input format from extension '" + ext + "' of " + path.string());
}

sequence_collection ingest(const alphabet& abc, const fs::path& path, input_format format) {
  if (format == input_format::autodetect) format = detect_format(path);
  switch (format) {
    case input_format::lines: return ingest_lines(abc, path);
    case input_format::fasta: return ingest_fasta(abc, path);
    case input_format::fastq: return ingest_fastq(abc, path);
    default: throw error(errc::invalid_argument, "unknown input format");
  }
}

emit_paths output_paths(const fs::path& prefix, bool with_gsa) {
  emit_paths p;
  p.bwt = prefix;
  p.bwt += ".bwt";
  p.lcp = prefix;
  p.lcp += ".lcp";
  if (with_gsa) {
    p.gsa = prefix;
    p.gsa += ".gsa";
  }
  p.manifest = prefix;
  p.manifest += ".json";
  return p;
}

emit_paths emit_outputs(const sequence_collection& c, const engine::run_result& r,
                        const fs::path& prefix) {
  auto paths = output_paths(prefix, r.with_gsa);
  if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());

  segio::generation_reader rd(r.tmp_dir, r.final_iteration, io_buffer);
  segio::buffered_writer bwt, lcp, gsa;
  bwt.open(paths.bwt, io_buffer);
  lcp.open(paths.lcp, io_buffer);
  if (r.with_gsa) gsa.open(paths.gsa, io_buffer);

  const alphabet& abc = c.abc();
  for (std::uint32_t h = 0; h <= rd.sigma(); ++h) {
    auto rs = rd.open_records(h, r.with_gsa);
    segio::seg_record rec;
    while (rs.next(rec)) {
      bwt.put_u8(static_cast<std::uint8_t>(abc.decode(rec.sym)));
      lcp.put_le(rec.lcp, rd.lcp_width());
      if (r.with_gsa) {
        gsa.put_le(rec.gsa_pos, rd.lcp_width());
        gsa.put_le(rec.gsa_seq, segio::gsa_seq_width);
      }
    }
  }
  bwt.close();
  lcp.close();
  if (r.with_gsa) gsa.close();

  nlohmann::json j;
  j["m"] = c.size();
  j["n"] = c.total_with_markers();
  j["k"] = c.max_length();
  j["sigma"] = c.sigma();
  j["alphabet"] = std::string(abc.symbols());
  j["lcp_width"] = r.lcp_width;
  j["gsa"] = r.with_gsa;
  if (r.with_gsa) {
    j["pos_width"] = r.lcp_width;
    j["seq_width"] = segio::gsa_seq_width;
  }
  j["iterations"] = r.stats.iterations;
  j["records_written"] = r.stats.records_written;
  j["wall_seconds"] = r.stats.wall_seconds;
  j["micros_per_input_base"] = r.stats.micros_per_input_base;
  j["peak"] = {
      {"slot_elements", r.stats.peak.slot_elements},
      {"next_symbol_elements", r.stats.peak.next_symbol_elements},
      {"table_elements", r.stats.peak.table_elements},
      {"tracker_cells", r.stats.peak.tracker_cells},
      {"total_elements", r.stats.peak.total_elements()},
      {"live_bytes", r.stats.peak.live_bytes},
  };
  std::ofstream mf(paths.manifest, std::ios::binary | std::ios::trunc);
  if (!mf) throw error(errc::io, "cannot write " + paths.manifest.string());
  mf << j.dump(2) << '\n';
  if (!mf.flush()) throw error(errc::io, "cannot write " + paths.manifest.string());
  return paths;
}

void synth(const fs::path& out, std::uint64_t seed, std::uint64_t m, std::uint64_t length,
           std::uint32_t sigma, const alphabet& abc) {
  if (m == 0) throw error(errc::invalid_argument, "synthetic collection needs at least one string");
  if (length == 0) throw error(errc::invalid_argument, "synthetic strings need at least one symbol");
  if (sigma < 1 || sigma > abc.sigma())
    throw error(errc::invalid_argument,
                "synthetic sigma must be between 1 and the alphabet size");
  if (out.has_parent_path()) fs::create_directories(out.parent_path());

  segio::buffered_writer w;
  w.open(out, io_buffer);
  std::mt19937_64 rng(seed);
  std::string_view syms = abc.symbols();
  for (std::uint64_t i = 0; i < m; ++i) {
    // modulo instead of a distribution: the byte stream for a seed must be
    // identical across standard libraries
    for (std::uint64_t p = 0; p < length; ++p)
      w.put_u8(static_cast<std::uint8_t>(syms[rng() % sigma]));
    w.put_u8('\n');
  }
  w.close();
}

verify_report verify_outputs(const sequence_collection& c, const fs::path& prefix,
                             bool expect_gsa, std::uint64_t cap) {
  if (c.total_with_markers() > cap)
    throw error(errc::cap_exceeded,
                "collection has " + std::to_string(c.total_with_markers()) +
                    " total symbols, above the verification cap of " + std::to_string(cap),
                c.total_with_markers(), cap);

  auto paths = output_paths(prefix, expect_gsa);

  nlohmann::json manifest;
  {
    std::ifstream mf(paths.manifest, std::ios::binary);
    if (!mf) throw error(errc::io, "cannot open " + paths.manifest.string());
    try {
      manifest = nlohmann::json::parse(mf);
    } catch (const nlohmann::json::exception& e) {
      throw error(errc::parse, paths.manifest.string() + ": " + e.what());
    }
  }
  std::uint32_t lcp_width;
  bool file_gsa;
  try {
    lcp_width = manifest.at("lcp_width").get<std::uint32_t>();
    file_gsa = manifest.at("gsa").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::parse, paths.manifest.string() + ": " + e.what());
  }
  if (expect_gsa && !file_gsa) return {false, "gsa", 0};

  auto truth = oracle::compute(c);
  const alphabet& abc = c.abc();
  const std::uint64_t n = truth.bwt.size();

  {
    segio::buffered_reader br;
    br.open(paths.bwt, io_buffer, nullptr, paths.bwt.string());
    std::uint64_t i = 0;
    std::uint8_t got;
    while (br.get_u8(got)) {
      if (i >= n || static_cast<char>(got) != abc.decode(truth.bwt[i]))
        return {false, "bwt", i};
      ++i;
    }
    if (i != n) return {false, "bwt", i};
  }
  {
    segio::buffered_reader lr;
    lr.open(paths.lcp, io_buffer, nullptr, paths.lcp.string());
    std::uint64_t i = 0, got;
    while (lr.get_le(got, lcp_width)) {
      if (i >= n || got != truth.lcp[i]) return {false, "lcp", i};
      ++i;
    }
    if (i != n) return {false, "lcp", i};
  }
  if (expect_gsa) {
    segio::buffered_reader gr;
    gr.open(paths.gsa, io_buffer, nullptr, paths.gsa.string());
    std::uint64_t i = 0, pos, seq;
    while (gr.get_le(pos, lcp_width)) {
      if (!gr.get_le(seq, segio::gsa_seq_width))
        throw error(errc::io, "truncated pair in " + paths.gsa.string());
      if (i >= n || pos != truth.gsa[i].pos || seq != truth.gsa[i].seq)
        return {false, "gsa", i};
      ++i;
    }
    if (i != n) return {false, "gsa", i};
  }
  return {true, "", 0};
}

}  // namespace colbwt::textio
