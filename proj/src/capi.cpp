/*
 * The shared-library boundary: thin extern-C wrappers over the C++ core.
 * Every entry point catches, records the message and detail indices in
 * thread-local storage, and maps the exception to a status code.
 */
#include "colbwt.h"

#include <cstdint>
#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "segio.hpp"
#include "textio.hpp"

namespace {

thread_local std::string g_message;
thread_local std::uint64_t g_detail[2] = {colbwt::error::no_detail, colbwt::error::no_detail};

void clear_last_error() {
  g_message.clear();
  g_detail[0] = g_detail[1] = colbwt::error::no_detail;
}

colbwt_status map_code(colbwt::errc c) {
  switch (c) {
    case colbwt::errc::ok: return COLBWT_OK;
    case colbwt::errc::invalid_argument: return COLBWT_INVALID_ARGUMENT;
    case colbwt::errc::empty_collection: return COLBWT_EMPTY_COLLECTION;
    case colbwt::errc::empty_string: return COLBWT_EMPTY_STRING;
    case colbwt::errc::foreign_symbol: return COLBWT_FOREIGN_SYMBOL;
    case colbwt::errc::parse: return COLBWT_PARSE;
    case colbwt::errc::width_too_small: return COLBWT_WIDTH_TOO_SMALL;
    case colbwt::errc::io: return COLBWT_IO;
    case colbwt::errc::missing_generation: return COLBWT_MISSING_GENERATION;
    case colbwt::errc::inconsistent_state: return COLBWT_INCONSISTENT_STATE;
    case colbwt::errc::cap_exceeded: return COLBWT_CAP_EXCEEDED;
    case colbwt::errc::verify_mismatch: return COLBWT_VERIFY_MISMATCH;
    case colbwt::errc::position_out_of_range: return COLBWT_POSITION_OUT_OF_RANGE;
  }
  return COLBWT_INTERNAL;
}

colbwt_status fail(colbwt_status s, const std::string& msg,
                   std::uint64_t a = colbwt::error::no_detail,
                   std::uint64_t b = colbwt::error::no_detail) {
  g_message = msg;
  g_detail[0] = a;
  g_detail[1] = b;
  return s;
}

template <typename F>
colbwt_status guarded(F&& f) {
  clear_last_error();
  try {
    return f();
  } catch (const colbwt::error& e) {
    return fail(map_code(e.code()), e.what(), e.detail_a(), e.detail_b());
  } catch (const std::bad_alloc&) {
    return fail(COLBWT_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(COLBWT_INTERNAL, e.what());
  }
}

colbwt_status require(bool ok, const char* what) {
  return ok ? COLBWT_OK : fail(COLBWT_INVALID_ARGUMENT, what);
}

}  // namespace

struct colbwt_collection {
  colbwt::sequence_collection impl;
};

extern "C" {

const char* colbwt_status_name(colbwt_status s) {
  switch (s) {
    case COLBWT_OK: return "ok";
    case COLBWT_INVALID_ARGUMENT: return "invalid_argument";
    case COLBWT_EMPTY_COLLECTION: return "empty_collection";
    case COLBWT_EMPTY_STRING: return "empty_string";
    case COLBWT_FOREIGN_SYMBOL: return "foreign_symbol";
    case COLBWT_PARSE: return "parse";
    case COLBWT_WIDTH_TOO_SMALL: return "width_too_small";
    case COLBWT_IO: return "io";
    case COLBWT_MISSING_GENERATION: return "missing_generation";
    case COLBWT_INCONSISTENT_STATE: return "inconsistent_state";
    case COLBWT_CAP_EXCEEDED: return "cap_exceeded";
    case COLBWT_VERIFY_MISMATCH: return "verify_mismatch";
    case COLBWT_POSITION_OUT_OF_RANGE: return "position_out_of_range";
    case COLBWT_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* colbwt_last_error(void) { return g_message.c_str(); }

uint64_t colbwt_last_error_detail(int which) {
  if (which < 0 || which > 1) return colbwt::error::no_detail;
  return g_detail[which];
}

colbwt_status colbwt_collection_from_strings(const char* alphabet,
                                             const char* const* strings, uint64_t count,
                                             colbwt_collection** out) {
  if (auto s = require(alphabet && strings && out, "null argument")) return s;
  return guarded([&] {
    colbwt::collection_builder b{colbwt::alphabet(alphabet)};
    for (uint64_t i = 0; i < count; ++i) {
      if (!strings[i])
        return fail(COLBWT_INVALID_ARGUMENT, "null string in collection", i);
      b.add(strings[i]);
    }
    *out = new colbwt_collection{b.finish()};
    return COLBWT_OK;
  });
}

colbwt_status colbwt_collection_from_file(const char* alphabet, const char* path,
                                          const char* format, colbwt_collection** out) {
  if (auto s = require(alphabet && path && out, "null argument")) return s;
  return guarded([&] {
    colbwt::textio::input_format fmt = colbwt::textio::input_format::autodetect;
    std::string f = format ? format : "auto";
    if (f == "auto")
      fmt = colbwt::textio::input_format::autodetect;
    else if (f == "lines")
      fmt = colbwt::textio::input_format::lines;
    else if (f == "fasta")
      fmt = colbwt::textio::input_format::fasta;
    else if (f == "fastq")
      fmt = colbwt::textio::input_format::fastq;
    else
      return fail(COLBWT_INVALID_ARGUMENT, "unknown input format '" + f + "'");
    auto c = colbwt::textio::ingest(colbwt::alphabet(alphabet), path, fmt);
    *out = new colbwt_collection{std::move(c)};
    return COLBWT_OK;
  });
}

void colbwt_collection_destroy(colbwt_collection* c) { delete c; }

uint64_t colbwt_collection_size(const colbwt_collection* c) { return c ? c->impl.size() : 0; }

uint64_t colbwt_collection_total(const colbwt_collection* c) {
  return c ? c->impl.total_with_markers() : 0;
}

uint64_t colbwt_collection_max_length(const colbwt_collection* c) {
  return c ? c->impl.max_length() : 0;
}

uint32_t colbwt_collection_sigma(const colbwt_collection* c) { return c ? c->impl.sigma() : 0; }

colbwt_status colbwt_run(const colbwt_collection* c, const colbwt_run_config* cfg,
                         colbwt_run_stats* stats) {
  if (auto s = require(c && cfg, "null argument")) return s;
  if (auto s = require(cfg->output_prefix && cfg->tmp_dir,
                       "output_prefix and tmp_dir are required"))
    return s;
  return guarded([&] {
    colbwt::engine::run_config rc;
    rc.tmp_dir = cfg->tmp_dir;
    rc.lcp_width = cfg->lcp_width ? cfg->lcp_width : 4;
    rc.emit_gsa = cfg->emit_gsa != 0;
    if (cfg->io_buffer_bytes) rc.io_buffer_bytes = cfg->io_buffer_bytes;

    auto r = colbwt::engine::run(c->impl, rc);
    colbwt::textio::emit_outputs(c->impl, r, cfg->output_prefix);
    if (!cfg->keep_tmp) colbwt::segio::remove_generation(r.tmp_dir, r.final_iteration);

    if (stats) {
      stats->iterations = r.stats.iterations;
      stats->records_written = r.stats.records_written;
      stats->peak_slot_elements = r.stats.peak.slot_elements;
      stats->peak_next_symbol_elements = r.stats.peak.next_symbol_elements;
      stats->peak_table_elements = r.stats.peak.table_elements;
      stats->peak_tracker_cells = r.stats.peak.tracker_cells;
      stats->peak_total_elements = r.stats.peak.total_elements();
      stats->peak_live_bytes = r.stats.peak.live_bytes;
      stats->wall_seconds = r.stats.wall_seconds;
      stats->micros_per_input_base = r.stats.micros_per_input_base;
    }
    return COLBWT_OK;
  });
}

colbwt_status colbwt_reference(const colbwt_collection* c, char* bwt, uint64_t* lcp,
                               uint64_t* gsa_pos, uint32_t* gsa_seq) {
  if (auto s = require(c != nullptr, "null argument")) return s;
  return guarded([&] {
    auto truth = colbwt::oracle::compute(c->impl);
    const auto n = truth.bwt.size();
    const colbwt::alphabet& abc = c->impl.abc();
    for (std::size_t i = 0; i < n; ++i) {
      if (bwt) bwt[i] = abc.decode(truth.bwt[i]);
      if (lcp) lcp[i] = truth.lcp[i];
      if (gsa_pos) gsa_pos[i] = truth.gsa[i].pos;
      if (gsa_seq) gsa_seq[i] = truth.gsa[i].seq;
    }
    return COLBWT_OK;
  });
}

colbwt_status colbwt_verify(const colbwt_collection* c, const char* output_prefix,
                            int expect_gsa, uint64_t cap, const char** stream,
                            uint64_t* first_divergence) {
  if (auto s = require(c && output_prefix, "null argument")) return s;
  return guarded([&] {
    auto report = colbwt::textio::verify_outputs(c->impl, output_prefix, expect_gsa != 0, cap);
    if (report.matched) return COLBWT_OK;
    static const char* const names[] = {"bwt", "lcp", "gsa"};
    const char* name = names[0];
    if (report.stream == "lcp") name = names[1];
    if (report.stream == "gsa") name = names[2];
    if (stream) *stream = name;
    if (first_divergence) *first_divergence = report.first_divergence;
    return fail(COLBWT_VERIFY_MISMATCH,
                std::string(name) + " diverges from the reference at record " +
                    std::to_string(report.first_divergence),
                report.first_divergence);
  });
}

colbwt_status colbwt_synth(const char* path, uint64_t seed, uint64_t m, uint64_t length,
                           uint32_t sigma, const char* alphabet) {
  if (auto s = require(path && alphabet, "null argument")) return s;
  return guarded([&] {
    colbwt::textio::synth(path, seed, m, length, sigma, colbwt::alphabet(alphabet));
    return COLBWT_OK;
  });
}

}  // extern "C"
