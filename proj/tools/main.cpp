/*
 * Command-line front end.  Drives everything through the shared library's
 * C interface, so the binary doubles as a usage example for that API.
 *
 * Exit codes: 0 success (and, with --verify, outputs match), 1 usage
 * errors, 2 data/I-O errors, 3 verification mismatch.
 */
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "colbwt.h"

namespace {

int exit_code_for(colbwt_status s) {
  switch (s) {
    case COLBWT_OK: return 0;
    case COLBWT_INVALID_ARGUMENT:
    case COLBWT_WIDTH_TOO_SMALL: return 1;
    case COLBWT_VERIFY_MISMATCH: return 3;
    default: return 2;
  }
}

int report(const char* phase, colbwt_status s) {
  std::fprintf(stderr, "colbwt: %s: %s: %s\n", phase, colbwt_status_name(s),
               colbwt_last_error());
  return exit_code_for(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simultaneous BWT + LCP array construction for string collections, "
      "using only sequential scans of external files"};

  std::string input, output_prefix, tmp_dir;
  std::string format = "auto";
  std::string alphabet = "ACGTN";
  std::uint32_t lcp_width = 4;
  std::uint64_t verify_cap = 1000000;
  bool emit_gsa = false, verify = false, verify_only = false, keep_tmp = false;
  std::vector<std::uint64_t> synth_vals;

  app.add_option("-i,--input", input, "input collection file")->required();
  app.add_option("-f,--format", format, "input layout (default: by extension)")
      ->check(CLI::IsMember({"auto", "lines", "fasta", "fastq"}));
  app.add_option("-o,--output-prefix", output_prefix,
                 "write <prefix>.bwt, <prefix>.lcp and <prefix>.json");
  app.add_option("-t,--tmp-dir", tmp_dir, "scratch directory (default: <prefix>.tmp)");
  app.add_option("-w,--lcp-width", lcp_width, "bytes per LCP value (default: 4)")
      ->check(CLI::IsMember({1, 2, 4}));
  app.add_flag("-g,--emit-gsa", emit_gsa, "also write the generalized suffix array");
  app.add_flag("--verify", verify, "compare the outputs against the in-memory reference");
  app.add_flag("--verify-only", verify_only,
               "check existing <prefix> output files against the reference; build nothing");
  app.add_option("--verify-cap", verify_cap,
                 "refuse --verify above this many total symbols (default: 1000000)");
  app.add_option("--synth", synth_vals,
                 "seed,m,len,sigma: first write a synthetic collection to --input")
      ->delimiter(',');
  app.add_option("-a,--alphabet", alphabet, "alphabet members (default: ACGTN)");
  app.add_flag("--keep-tmp", keep_tmp, "leave the generation files in the scratch directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // fold CLI11's assorted parse-error codes into the documented usage exit
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (verify_only) {
    if (!synth_vals.empty()) {
      std::fprintf(stderr, "colbwt: --verify-only cannot be combined with --synth\n");
      return 1;
    }
    if (output_prefix.empty()) {
      std::fprintf(stderr, "colbwt: --verify-only needs --output-prefix to locate the files\n");
      return 1;
    }
    colbwt_collection* coll = nullptr;
    colbwt_status s = colbwt_collection_from_file(alphabet.c_str(), input.c_str(),
                                                  format.c_str(), &coll);
    if (s != COLBWT_OK) return report("ingest", s);
    const char* stream = "";
    std::uint64_t at = 0;
    s = colbwt_verify(coll, output_prefix.c_str(), emit_gsa ? 1 : 0, verify_cap, &stream, &at);
    colbwt_collection_destroy(coll);
    if (s != COLBWT_OK) return report("verify", s);
    std::printf("verify: outputs match the reference implementation\n");
    return 0;
  }

  if (!synth_vals.empty()) {
    if (synth_vals.size() != 4) {
      std::fprintf(stderr, "colbwt: --synth takes exactly seed,m,len,sigma\n");
      return 1;
    }
    colbwt_status s = colbwt_synth(input.c_str(), synth_vals[0], synth_vals[1], synth_vals[2],
                                   static_cast<std::uint32_t>(synth_vals[3]), alphabet.c_str());
    if (s != COLBWT_OK) return report("synth", s);
    std::printf("synth: wrote %" PRIu64 " strings of length %" PRIu64 " to %s\n", synth_vals[1],
                synth_vals[2], input.c_str());
    if (output_prefix.empty()) return 0;
  }

  if (output_prefix.empty()) {
    std::fprintf(stderr, "colbwt: --output-prefix is required to build outputs\n");
    return 1;
  }
  if (tmp_dir.empty()) tmp_dir = output_prefix + ".tmp";

  colbwt_collection* coll = nullptr;
  colbwt_status s = colbwt_collection_from_file(alphabet.c_str(), input.c_str(),
                                                format.c_str(), &coll);
  if (s != COLBWT_OK) return report("ingest", s);

  colbwt_run_config cfg{};
  cfg.output_prefix = output_prefix.c_str();
  cfg.tmp_dir = tmp_dir.c_str();
  cfg.lcp_width = lcp_width;
  cfg.emit_gsa = emit_gsa ? 1 : 0;
  cfg.keep_tmp = keep_tmp ? 1 : 0;

  colbwt_run_stats stats{};
  s = colbwt_run(coll, &cfg, &stats);
  if (s != COLBWT_OK) {
    colbwt_collection_destroy(coll);
    return report("run", s);
  }

  std::printf("m=%" PRIu64 " n=%" PRIu64 " k=%" PRIu64 " sigma=%u\n",
              colbwt_collection_size(coll), colbwt_collection_total(coll),
              colbwt_collection_max_length(coll), colbwt_collection_sigma(coll));
  std::printf("iterations=%u records=%" PRIu64 " wall=%.3fs micros_per_input_base=%.4f "
              "peak_live_bytes=%" PRIu64 "\n",
              stats.iterations, stats.records_written, stats.wall_seconds,
              stats.micros_per_input_base, stats.peak_live_bytes);
  std::printf("wrote %s.bwt %s.lcp%s%s %s.json\n", output_prefix.c_str(), output_prefix.c_str(),
              emit_gsa ? " " : "", emit_gsa ? (output_prefix + ".gsa").c_str() : "",
              output_prefix.c_str());

  int rc = 0;
  if (verify) {
    const char* stream = "";
    std::uint64_t at = 0;
    s = colbwt_verify(coll, output_prefix.c_str(), emit_gsa ? 1 : 0, verify_cap, &stream, &at);
    if (s == COLBWT_OK) {
      std::printf("verify: outputs match the reference implementation\n");
    } else {
      rc = report("verify", s);
    }
  }
  colbwt_collection_destroy(coll);
  return rc;
}
