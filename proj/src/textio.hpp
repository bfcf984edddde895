/*
 * Text-side plumbing shared by the C API and the command line: reading
 * FASTA / FASTQ / line-per-string collections, streaming a finished run
 * into the delivered output files, the deterministic synthetic-collection
 * generator, and byte-compare verification of those files against the
 * reference implementation.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "engine.hpp"
#include "model.hpp"

namespace colbwt::textio {

enum class input_format { autodetect, lines, fasta, fastq };

// extension-based: .fa/.fasta, .fq/.fastq, .txt
input_format detect_format(const std::filesystem::path& path);

// FASTA/FASTQ records are uppercased before validation; line files are
// taken verbatim (custom alphabets may be case-sensitive).
sequence_collection ingest(const alphabet& abc, const std::filesystem::path& path,
                           input_format format);

struct emit_paths {
  std::filesystem::path bwt, lcp, gsa, manifest;
};
emit_paths output_paths(const std::filesystem::path& prefix, bool with_gsa);

// Stream the final generation into <prefix>.bwt (text, '$' for the
// marker), <prefix>.lcp (fixed-width little-endian), optional
// <prefix>.gsa ((pos, seq) pairs) and the <prefix>.json manifest.
// Leaves the generation files in place; callers clean up the tmp dir.
emit_paths emit_outputs(const sequence_collection& c, const engine::run_result& r,
                        const std::filesystem::path& prefix);

// m lines of `length` symbols drawn from the first `sigma` members of the
// alphabet; one seed, one byte stream, on every platform.
void synth(const std::filesystem::path& out, std::uint64_t seed, std::uint64_t m,
           std::uint64_t length, std::uint32_t sigma, const alphabet& abc);

struct verify_report {
  bool matched = true;
  std::string stream;  // "bwt" / "lcp" / "gsa" when !matched
  std::uint64_t first_divergence = 0;
};

// Recompute everything with the reference implementation and compare the
// delivered files record by record.  Throws cap_exceeded when the
// collection is larger than `cap` total symbols.
verify_report verify_outputs(const sequence_collection& c, const std::filesystem::path& prefix,
                             bool expect_gsa, std::uint64_t cap);

}  // namespace colbwt::textio
