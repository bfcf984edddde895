/*
 * C interface to the colbwt shared library: simultaneous external-memory
 * construction of the BWT and LCP array of a string collection.
 *
 * Every entry point returns a colbwt_status.  Handles are opaque and are
 * released with the matching _destroy call.  On failure,
 * colbwt_last_error() returns a thread-local description of the most
 * recent error on the calling thread, and colbwt_last_error_detail()
 * exposes the indices some conditions carry (string index / byte offset
 * for foreign symbols, line number for parse errors, ...).
 */
#ifndef COLBWT_H
#define COLBWT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum colbwt_status {
  COLBWT_OK = 0,
  COLBWT_INVALID_ARGUMENT,
  COLBWT_EMPTY_COLLECTION,
  COLBWT_EMPTY_STRING,
  COLBWT_FOREIGN_SYMBOL,
  COLBWT_PARSE,
  COLBWT_WIDTH_TOO_SMALL,
  COLBWT_IO,
  COLBWT_MISSING_GENERATION,
  COLBWT_INCONSISTENT_STATE,
  COLBWT_CAP_EXCEEDED,
  COLBWT_VERIFY_MISMATCH,
  COLBWT_POSITION_OUT_OF_RANGE,
  COLBWT_INTERNAL
} colbwt_status;

/* stable name for a status value, e.g. "foreign_symbol" */
const char* colbwt_status_name(colbwt_status s);

/* thread-local message for the most recent failed call; "" if none */
const char* colbwt_last_error(void);

/* which = 0 or 1; UINT64_MAX when the last error carried no such index */
uint64_t colbwt_last_error_detail(int which);

/* ---- collections ------------------------------------------------------ */

typedef struct colbwt_collection colbwt_collection;

/* alphabet: the distinct member bytes, e.g. "ACGNT".  Order on disk does
 * not matter; members are ranked by byte value.  '$' is reserved. */
colbwt_status colbwt_collection_from_strings(const char* alphabet,
                                             const char* const* strings,
                                             uint64_t count,
                                             colbwt_collection** out);

/* format: "auto", "lines", "fasta" or "fastq" */
colbwt_status colbwt_collection_from_file(const char* alphabet, const char* path,
                                          const char* format,
                                          colbwt_collection** out);

void colbwt_collection_destroy(colbwt_collection* c);

uint64_t colbwt_collection_size(const colbwt_collection* c);       /* m */
uint64_t colbwt_collection_total(const colbwt_collection* c);      /* n, markers included */
uint64_t colbwt_collection_max_length(const colbwt_collection* c); /* k */
uint32_t colbwt_collection_sigma(const colbwt_collection* c);

/* ---- construction ------------------------------------------------------ */

typedef struct colbwt_run_config {
  const char* output_prefix; /* required; writes <prefix>.bwt/.lcp/.json */
  const char* tmp_dir;       /* required; scratch for the generation files */
  uint32_t lcp_width;        /* bytes per LCP / position value: 1, 2 or 4; 0 = 4 */
  int emit_gsa;              /* nonzero: also write <prefix>.gsa */
  uint64_t io_buffer_bytes;  /* per open file; 0 = 1 MiB */
  int keep_tmp;              /* nonzero: leave the final generation files behind */
} colbwt_run_config;

typedef struct colbwt_run_stats {
  uint32_t iterations;
  uint64_t records_written;
  uint64_t peak_slot_elements;
  uint64_t peak_next_symbol_elements;
  uint64_t peak_table_elements;
  uint64_t peak_tracker_cells;
  uint64_t peak_total_elements;
  uint64_t peak_live_bytes;
  double wall_seconds;
  double micros_per_input_base;
} colbwt_run_stats;

/* Build the BWT, LCP array and optionally the GSA of the collection using
 * sequential passes over files under tmp_dir, then write the outputs.
 * stats may be NULL. */
colbwt_status colbwt_run(const colbwt_collection* c, const colbwt_run_config* cfg,
                         colbwt_run_stats* stats);

/* ---- reference implementation and verification ------------------------ */

/* In-memory ground truth.  Caller buffers are sized from
 * colbwt_collection_total(c) = n: bwt holds n text bytes ('$' for the end
 * marker), lcp n values, gsa_pos / gsa_seq n values each.  Any out
 * pointer may be NULL to skip that output. */
colbwt_status colbwt_reference(const colbwt_collection* c, char* bwt, uint64_t* lcp,
                               uint64_t* gsa_pos, uint32_t* gsa_seq);

/* Recompute with the reference implementation and compare the files under
 * output_prefix record by record.  Returns COLBWT_OK on a full match and
 * COLBWT_VERIFY_MISMATCH on the first divergence, with *stream pointing
 * at a static "bwt" / "lcp" / "gsa" and *first_divergence set (either may
 * be NULL).  Collections with more than cap total symbols are refused
 * with COLBWT_CAP_EXCEEDED. */
colbwt_status colbwt_verify(const colbwt_collection* c, const char* output_prefix,
                            int expect_gsa, uint64_t cap, const char** stream,
                            uint64_t* first_divergence);

/* ---- synthetic collections --------------------------------------------- */

/* Write m lines of `length` symbols drawn from the first sigma members of
 * the alphabet.  One seed produces one byte stream, on every platform. */
colbwt_status colbwt_synth(const char* path, uint64_t seed, uint64_t m, uint64_t length,
                           uint32_t sigma, const char* alphabet);

#ifdef __cplusplus
}
#endif

#endif /* COLBWT_H */
