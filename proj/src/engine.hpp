/*
 * The streaming construction.  Iteration j simulates inserting every live
 * j-suffix into the sorted order of the shorter suffixes: phase 1 scans
 * the previous generation's BWT segments once, locating each insertion
 * position by occurrence counting; the slot array is re-sorted by
 * (segment, position); phase 2 streams every segment once more, copying
 * old records and splicing the new symbols in.  The same phase-2 pass
 * maintains, per segment and symbol, the running minima of the LCP values
 * written since that symbol's last occurrence — which is exactly the
 * information needed to know next iteration's LCP values without ever
 * touching the files again.
 *
 * Working memory is the slot array (five fields per live suffix), the
 * per-sequence next-symbol array, one (sigma+1)^2 occurrence table and
 * 2(sigma+1) tracker cells.  Everything else lives in generation files;
 * at most two generations exist at any moment.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "model.hpp"
#include "segio.hpp"

namespace colbwt::engine {

inline constexpr std::uint64_t no_slot = std::numeric_limits<std::uint64_t>::max();

// One live suffix.  `pos` is 1-based inside segment `seg`.  After phase 2
// of iteration j: lcp_prev is the LCP this suffix's one-longer extension
// will be written with next iteration (C), lcp_next the LCP the record
// after that insertion will receive (S).
struct slot {
  std::uint64_t pos;
  std::uint32_t seq;
  std::uint32_t lcp_prev;
  std::uint32_t lcp_next;
  std::uint8_t seg;
  std::uint8_t retiring;  // marker inserted this iteration; slot drops afterwards
};

// Occurrence counts over the previous generation's segments as they are
// scanned: cell (v, z) counts symbol z inside segment v so far, and the
// cumulative row totals over fully finished segments answer "occurrences
// of z in all segments before the current one" in O(1).
class occurrence_table {
 public:
  explicit occurrence_table(std::uint32_t sigma)
      : sigma_(sigma), cells_((sigma + 1) * (sigma + 1), 0), cum_(sigma + 1, 0) {}

  void reset() {
    std::fill(cells_.begin(), cells_.end(), 0);
    std::fill(cum_.begin(), cum_.end(), 0);
    cur_ = 0;
  }
  void scan(symbol_code c) { ++cells_[cur_ * (sigma_ + 1) + c]; }
  void finish_segment() {
    for (std::uint32_t z = 0; z <= sigma_; ++z) cum_[z] += cells_[cur_ * (sigma_ + 1) + z];
    ++cur_;
  }
  std::uint32_t current_segment() const { return cur_; }
  std::uint64_t cumulative(symbol_code z) const { return cum_[z]; }
  std::uint64_t in_current(symbol_code z) const { return cells_[cur_ * (sigma_ + 1) + z]; }
  std::uint64_t cell(std::uint32_t v, symbol_code z) const { return cells_[v * (sigma_ + 1) + z]; }
  std::uint64_t elements() const { return cells_.size(); }

 private:
  std::uint32_t sigma_;
  std::uint32_t cur_ = 0;
  std::vector<std::uint64_t> cells_;
  std::vector<std::uint64_t> cum_;
};

// Per-segment open compare intervals, one potential LCI and LSI per
// symbol.  step() folds the record just written (final LCP value) into
// every open interval, closes what this symbol occurrence closes, and —
// for an insertion — reports the LCP its one-longer extension gets next
// iteration.
class interval_tracker {
 public:
  explicit interval_tracker(std::uint32_t sigma)
      : sigma_(sigma),
        min_lci_(sigma + 1),
        min_lsi_(sigma + 1),
        lsi_owner_(sigma + 1),
        has_prev_(sigma + 1) {}

  void begin_segment() {
    std::fill(min_lci_.begin(), min_lci_.end(), inf);
    std::fill(min_lsi_.begin(), min_lsi_.end(), inf);
    std::fill(lsi_owner_.begin(), lsi_owner_.end(), no_slot);
    std::fill(has_prev_.begin(), has_prev_.end(), 0);
  }

  struct step_result {
    std::uint64_t lci_value;    // valid when the record was an insertion
    std::uint64_t closed_slot;  // no_slot if no LSI closed here
    std::uint64_t lsi_value;    // valid when closed_slot != no_slot
  };

  step_result step(symbol_code x, std::uint64_t lcp, std::uint64_t inserted_slot) {
    // the written value extends every open interval, including (harmlessly)
    // the two about to be consumed for x itself
    for (std::uint32_t a = 0; a <= sigma_; ++a) {
      min_lci_[a] = std::min(min_lci_[a], lcp);
      min_lsi_[a] = std::min(min_lsi_[a], lcp);
    }
    step_result r{0, no_slot, 0};
    if (lsi_owner_[x] != no_slot) {
      r.closed_slot = lsi_owner_[x];
      r.lsi_value = min_lsi_[x] + 1;
      lsi_owner_[x] = no_slot;
    }
    if (inserted_slot != no_slot)
      r.lci_value = has_prev_[x] ? min_lci_[x] + 1 : 1;  // degenerate interval -> 1
    has_prev_[x] = 1;
    min_lci_[x] = inf;
    if (inserted_slot != no_slot) {
      lsi_owner_[x] = inserted_slot;
      min_lsi_[x] = inf;
    }
    return r;
  }

  // intervals still open at segment end resolve to 1
  template <class F>
  void finish_segment(F&& assign) {
    for (std::uint32_t a = 0; a <= sigma_; ++a)
      if (lsi_owner_[a] != no_slot) {
        assign(lsi_owner_[a], std::uint64_t{1});
        lsi_owner_[a] = no_slot;
      }
  }

  std::uint64_t cells() const { return 2 * (std::uint64_t{sigma_} + 1); }

 private:
  static constexpr std::uint64_t inf = std::numeric_limits<std::uint64_t>::max() / 2;
  std::uint32_t sigma_;
  std::vector<std::uint64_t> min_lci_, min_lsi_;
  std::vector<std::uint64_t> lsi_owner_;
  std::vector<std::uint8_t> has_prev_;
};

struct accounting {
  std::uint64_t m = 0;
  std::uint64_t sigma = 0;
  std::uint64_t slot_elements = 0;         // live slots x 5 fields
  std::uint64_t next_symbol_elements = 0;  // m
  std::uint64_t table_elements = 0;        // (sigma+1)^2
  std::uint64_t tracker_cells = 0;         // 2(sigma+1)
  std::uint64_t live_bytes = 0;            // measured from actual allocations

  std::uint64_t total_elements() const {
    return slot_elements + next_symbol_elements + table_elements + tracker_cells;
  }
};

struct run_stats {
  std::uint32_t iterations = 0;
  std::uint64_t records_written = 0;
  accounting peak{};
  double wall_seconds = 0;
  double micros_per_input_base = 0;
};

class engine_state;

// Snapshot handed to the per-iteration observer after generation j is
// sealed and before retirement/cleanup: generations j-1 and j are both on
// disk, slots are sorted by (seg, pos) and carry next iteration's
// lcp_prev/lcp_next.
struct iteration_view {
  std::uint32_t iteration;
  const std::filesystem::path& tmp_dir;
  std::span<const slot> slots;
  const std::vector<symbol_code>& next_symbol;  // inserted symbol, by sequence
  const accounting& memory;
};

using iteration_observer = std::function<void(const iteration_view&)>;

struct run_config {
  std::filesystem::path tmp_dir;
  std::uint32_t lcp_width = 4;
  bool emit_gsa = false;
  std::size_t io_buffer_bytes = std::size_t{1} << 20;
  segio::io_recorder* recorder = nullptr;
  iteration_observer observer;
};

class engine_state {
 public:
  engine_state(const sequence_collection& c, run_config cfg);

  std::uint32_t last_completed() const { return last_completed_; }
  std::uint32_t max_iterations() const { return k_; }
  bool done() const { return last_completed_ == k_; }

  void step();  // phase1 + sort + phase2 + observer + retire + swap

  // split out for tests; step() is the normal driver
  void phase1();
  void sort_slots();
  void phase2();

  std::span<const slot> slots() const { return slots_; }
  const std::vector<symbol_code>& next_symbol() const { return next_symbol_; }
  const occurrence_table& occurrences() const { return occ_; }
  const accounting& memory() const { return acct_; }
  const run_stats& stats() const { return stats_; }

 private:
  friend struct engine_test_access;

  void update_accounting();
  void retire_and_swap();

  // Per-file write buffer for a generation of `records` rows.  No file of the
  // generation can outgrow the generation itself, so clamp the configured
  // buffer to its total byte size — a large default stops costing anything
  // on small collections (dozens of buffer allocations per iteration).
  std::size_t scaled_buffer(std::uint64_t records) const {
    std::uint64_t unit = 1 + cfg_.lcp_width +
                         (cfg_.emit_gsa ? cfg_.lcp_width + segio::gsa_seq_width : 0);
    std::uint64_t need = std::max<std::uint64_t>(records * unit, 64);
    return static_cast<std::size_t>(
        std::min<std::uint64_t>(cfg_.io_buffer_bytes, need));
  }

  const sequence_collection& c_;
  run_config cfg_;
  std::uint32_t k_;
  std::uint32_t sigma_;
  std::uint32_t last_completed_ = 0;
  bool phase1_done_ = false;  // phases of iteration last_completed_+1
  bool phase2_done_ = false;

  std::vector<slot> slots_;
  std::vector<symbol_code> next_symbol_;
  occurrence_table occ_;
  interval_tracker tracker_;
  accounting acct_;
  run_stats stats_;
};

// test hook: lets error-path tests corrupt internal state on purpose
struct engine_test_access {
  static std::vector<slot>& slots(engine_state& s) { return s.slots_; }
  static std::vector<symbol_code>& next_symbol(engine_state& s) { return s.next_symbol_; }
};

struct run_result {
  std::filesystem::path tmp_dir;
  std::uint32_t final_iteration;
  std::uint32_t sigma;
  std::uint32_t lcp_width;
  bool with_gsa;
  run_stats stats;
};

// Full construction: iteration 0 through K.  The final generation is left
// in cfg.tmp_dir for the caller to stream out (and then remove).
run_result run(const sequence_collection& c, const run_config& cfg);

}  // namespace colbwt::engine
