#include "engine.hpp"

#include <algorithm>
#include <chrono>

namespace colbwt::engine {

engine_state::engine_state(const sequence_collection& c, run_config cfg)
    : c_(c),
      cfg_(std::move(cfg)),
      k_(static_cast<std::uint32_t>(c.max_length())),
      sigma_(c.sigma()),
      occ_(c.sigma()),
      tracker_(c.sigma()) {
  std::uint64_t m = c_.size();
  slots_.reserve(m);
  next_symbol_.reserve(m);

  // iteration 0: one record per string in input order — the symbol before
  // each marker is the string's last character; all LCP values are 0.
  // The next-iteration LCP seeds are 1: suffixes one symbol long share
  // exactly their first symbol with any same-segment neighbour.
  segio::generation_writer w(cfg_.tmp_dir, 0, sigma_, cfg_.lcp_width, k_, cfg_.emit_gsa,
                             scaled_buffer(m));
  for (std::uint64_t q = 0; q < m; ++q) {
    symbol_code last = c_.code_at(q, c_.length(q) - 1);
    w.append(0, last, 0);
    if (cfg_.emit_gsa) w.append_gsa(0, c_.length(q), static_cast<std::uint32_t>(q));
    slots_.push_back({q + 1, static_cast<std::uint32_t>(q), 1, 1, 0, 0});
    next_symbol_.push_back(last);
  }
  w.seal();
  stats_.records_written += m;
  update_accounting();
}

void engine_state::update_accounting() {
  acct_.m = c_.size();
  acct_.sigma = sigma_;
  acct_.slot_elements = slots_.size() * 5;
  acct_.next_symbol_elements = next_symbol_.size();
  acct_.table_elements = occ_.elements();
  acct_.tracker_cells = tracker_.cells();
  acct_.live_bytes = slots_.capacity() * sizeof(slot) + next_symbol_.capacity() +
                     occ_.elements() * sizeof(std::uint64_t) +
                     (sigma_ + 1) * (3 * sizeof(std::uint64_t) + 1);  // tracker vectors

  stats_.peak.m = acct_.m;
  stats_.peak.sigma = acct_.sigma;
  stats_.peak.slot_elements = std::max(stats_.peak.slot_elements, acct_.slot_elements);
  stats_.peak.next_symbol_elements =
      std::max(stats_.peak.next_symbol_elements, acct_.next_symbol_elements);
  stats_.peak.table_elements = std::max(stats_.peak.table_elements, acct_.table_elements);
  stats_.peak.tracker_cells = std::max(stats_.peak.tracker_cells, acct_.tracker_cells);
  stats_.peak.live_bytes = std::max(stats_.peak.live_bytes, acct_.live_bytes);
}

void engine_state::phase1() {
  if (done() || phase1_done_)
    throw error(errc::inconsistent_state, "phase 1 called out of order");
  std::uint32_t j = last_completed_ + 1;
  if (cfg_.recorder) cfg_.recorder->begin_epoch("iter" + std::to_string(j) + ".phase1");

  segio::generation_reader prev(cfg_.tmp_dir, last_completed_, cfg_.io_buffer_bytes,
                                cfg_.recorder);
  occ_.reset();
  segio::symbol_stream sym = prev.open_symbols(0);
  std::uint64_t scanned = 0;  // records consumed in the current segment
  symbol_code last_sym = marker_code;

  // slots are ordered by (segment, position) of the previous iteration, so
  // one forward scan serves every lookup
  for (slot& s : slots_) {
    std::uint32_t v = s.seg;
    std::uint64_t t = s.pos;
    while (occ_.current_segment() < v) {
      symbol_code x;
      while (sym.next(x)) occ_.scan(x);
      occ_.finish_segment();
      sym = prev.open_symbols(occ_.current_segment());
      scanned = 0;
    }
    if (occ_.current_segment() != v || t <= scanned || t > prev.length(v))
      throw error(errc::inconsistent_state,
                  "slot position " + std::to_string(t) + " invalid in segment " +
                      std::to_string(v) + " of generation " + std::to_string(j - 1));
    while (scanned < t) {
      if (!sym.next(last_sym))
        throw error(errc::inconsistent_state, "segment shorter than its manifest");
      occ_.scan(last_sym);
      ++scanned;
    }
    symbol_code z = next_symbol_[s.seq];  // first symbol of the j-suffix
    if (last_sym != z)
      throw error(errc::inconsistent_state,
                  "generation symbol does not match the tracked insertion");
    s.seg = static_cast<std::uint8_t>(z);
    s.pos = occ_.cumulative(z) + occ_.in_current(z);

    std::uint64_t len = c_.length(s.seq);
    if (j < len) {
      next_symbol_[s.seq] = c_.code_at(s.seq, len - j - 1);
    } else if (j == len) {
      next_symbol_[s.seq] = marker_code;  // whole string: the marker precedes it
      s.retiring = 1;
    } else {
      throw error(errc::inconsistent_state, "slot outlived its string");
    }
  }
  phase1_done_ = true;
}

void engine_state::sort_slots() {
  if (!phase1_done_ || phase2_done_)
    throw error(errc::inconsistent_state, "sort called out of order");
  std::sort(slots_.begin(), slots_.end(), [](const slot& a, const slot& b) {
    if (a.seg != b.seg) return a.seg < b.seg;
    if (a.pos != b.pos) return a.pos < b.pos;
    return a.seq < b.seq;
  });
}

void engine_state::phase2() {
  if (!phase1_done_ || phase2_done_)
    throw error(errc::inconsistent_state, "phase 2 called out of order");
  std::uint32_t j = last_completed_ + 1;
  if (cfg_.recorder) cfg_.recorder->begin_epoch("iter" + std::to_string(j) + ".phase2");

  segio::generation_reader prev(cfg_.tmp_dir, last_completed_, cfg_.io_buffer_bytes,
                                cfg_.recorder);
  std::uint64_t new_total = slots_.size();
  for (std::uint32_t h = 0; h <= sigma_; ++h) new_total += prev.length(h);
  segio::generation_writer w(cfg_.tmp_dir, j, sigma_, cfg_.lcp_width, k_, cfg_.emit_gsa,
                             scaled_buffer(new_total));

  std::size_t k = 0;  // cursor over slots, grouped by segment
  for (std::uint32_t h = 0; h <= sigma_; ++h) {
    std::size_t first = k;
    while (k < slots_.size() && slots_[k].seg == h) ++k;
    if (first == k) {  // nothing lands here: plain stream copy
      w.copy_segment(prev, h);
      stats_.records_written += prev.length(h);
      continue;
    }

    segio::record_stream in = prev.open_records(h, cfg_.emit_gsa);
    tracker_.begin_segment();
    std::uint64_t total = prev.length(h) + (k - first);
    std::size_t ins = first;
    std::uint64_t after_insert = no_slot;  // slot that wrote the previous record
    segio::seg_record rec;
    for (std::uint64_t out_pos = 1; out_pos <= total; ++out_pos) {
      if (ins < k && slots_[ins].pos == out_pos) {
        slot& s = slots_[ins];
        symbol_code beta = next_symbol_[s.seq];
        std::uint64_t lcpv = out_pos == 1 ? 0 : s.lcp_prev;
        w.append(h, beta, lcpv);
        if (cfg_.emit_gsa)
          w.append_gsa(h, c_.length(s.seq) - j, s.seq);
        interval_tracker::step_result tr = tracker_.step(beta, lcpv, ins);
        s.lcp_prev = static_cast<std::uint32_t>(tr.lci_value);
        if (tr.closed_slot != no_slot)
          slots_[tr.closed_slot].lcp_next = static_cast<std::uint32_t>(tr.lsi_value);
        after_insert = ins;
        ++ins;
      } else {
        if (!in.next(rec))
          throw error(errc::inconsistent_state,
                      "insertion position beyond segment end in segment " + std::to_string(h));
        // the record right after an insertion sits next to a new suffix now;
        // its LCP was computed a pass ahead, everything else copies through
        std::uint64_t lcpv = after_insert != no_slot ? slots_[after_insert].lcp_next : rec.lcp;
        w.append(h, rec.sym, lcpv);
        if (cfg_.emit_gsa) w.append_gsa(h, rec.gsa_pos, rec.gsa_seq);
        interval_tracker::step_result tr = tracker_.step(rec.sym, lcpv, no_slot);
        if (tr.closed_slot != no_slot)
          slots_[tr.closed_slot].lcp_next = static_cast<std::uint32_t>(tr.lsi_value);
        after_insert = no_slot;
      }
    }
    if (ins != k)
      throw error(errc::inconsistent_state,
                  "insertion positions beyond segment end in segment " + std::to_string(h));
    if (in.next(rec))
      throw error(errc::inconsistent_state,
                  "segment " + std::to_string(h) + " longer than its manifest");
    tracker_.finish_segment([this](std::uint64_t owner, std::uint64_t v) {
      slots_[owner].lcp_next = static_cast<std::uint32_t>(v);
    });
    stats_.records_written += total;
  }
  w.seal();
  phase2_done_ = true;
  update_accounting();
}

void engine_state::retire_and_swap() {
  std::erase_if(slots_, [](const slot& s) { return s.retiring != 0; });
  std::uint32_t j = last_completed_ + 1;
  segio::swap_generations(cfg_.tmp_dir, j);
  last_completed_ = j;
  phase1_done_ = phase2_done_ = false;
  update_accounting();
}

void engine_state::step() {
  phase1();
  sort_slots();
  phase2();
  if (cfg_.observer) {
    iteration_view v{last_completed_ + 1, cfg_.tmp_dir, slots_, next_symbol_, acct_};
    cfg_.observer(v);
  }
  retire_and_swap();
}

run_result run(const sequence_collection& c, const run_config& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  engine_state st(c, cfg);
  while (!st.done()) st.step();
  run_stats stats = st.stats();
  stats.iterations = st.max_iterations();
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::uint64_t bases = c.total_with_markers() - c.size();  // input characters
  stats.micros_per_input_base = stats.wall_seconds * 1e6 / static_cast<double>(bases);
  return {cfg.tmp_dir, st.max_iterations(), c.sigma(), cfg.lcp_width, cfg.emit_gsa, stats};
}

}  // namespace colbwt::engine
