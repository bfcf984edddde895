/*
 * In-memory reference implementation: builds the generalized suffix array
 * of a collection by direct suffix comparison and derives the BWT and LCP
 * array from it, plus the left/right compare-interval queries over a
 * materialized segment.  Deliberately simple and quadratic-ish — this is
 * the ground truth the streaming engine is checked against, so it shares
 * no machinery with the engine.
 *
 * Marker semantics: every string ends in its own conceptual marker; a
 * marker sorts below every alphabet symbol, and two markers compare by
 * sequence index.  The LCP of two suffixes counts matching alphabet
 * symbols only — comparison stops at either marker, so the LCP of two
 * marker rows is 0.
 */
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "model.hpp"

namespace colbwt::oracle {

struct oracle_result {
  std::vector<gsa_entry> gsa;
  std::vector<symbol_code> bwt;  // marker rows hold marker_code
  std::vector<std::uint64_t> lcp;
};

// true iff suffix a < suffix b under the marker semantics above
bool suffix_less(const sequence_collection& c, const gsa_entry& a, const gsa_entry& b);

std::vector<gsa_entry> build_gsa(const sequence_collection& c);

// bwt[i] = symbol circularly preceding suffix gsa[i] in its string: the
// previous character when pos > 0, the end marker when pos == 0.
std::vector<symbol_code> gsa_to_bwt(const sequence_collection& c,
                                    std::span<const gsa_entry> gsa);

std::vector<std::uint64_t> gsa_to_lcp(const sequence_collection& c,
                                      std::span<const gsa_entry> gsa);

oracle_result compute(const sequence_collection& c);

// Compare-interval queries against a materialized segment (1-indexed).
// lci(x, r): interval (d1, r] where d1 is the last occurrence of x before
// position r; lsi(x, r): interval (r, d2] where d2 is the next occurrence
// after r.  When the bounding occurrence does not exist the interval is
// degenerate: found = false and min holds the point value lseg[r].
struct interval_result {
  bool found;
  std::uint64_t bound;  // d1 / d2, meaningful when found
  std::uint64_t min;

  friend bool operator==(const interval_result&, const interval_result&) = default;
};

interval_result lci(std::span<const symbol_code> bseg,
                    std::span<const std::uint64_t> lseg, symbol_code x,
                    std::uint64_t r);
interval_result lsi(std::span<const symbol_code> bseg,
                    std::span<const std::uint64_t> lseg, symbol_code x,
                    std::uint64_t r);

}  // namespace colbwt::oracle
