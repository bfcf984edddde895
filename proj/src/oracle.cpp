#include "oracle.hpp"

#include <algorithm>

namespace colbwt::oracle {

bool suffix_less(const sequence_collection& c, const gsa_entry& a, const gsa_entry& b) {
  std::span<const symbol_code> wa = c.codes(a.seq);
  std::span<const symbol_code> wb = c.codes(b.seq);
  std::uint64_t pa = a.pos, pb = b.pos;
  for (;;) {
    bool ma = pa == wa.size();  // reached marker
    bool mb = pb == wb.size();
    if (ma || mb) {
      if (ma && mb) return a.seq < b.seq;  // distinct markers rank by sequence
      return ma;                           // marker sorts below every symbol
    }
    if (wa[pa] != wb[pb]) return wa[pa] < wb[pb];
    ++pa;
    ++pb;
  }
}

std::vector<gsa_entry> build_gsa(const sequence_collection& c) {
  std::vector<gsa_entry> entries;
  entries.reserve(c.total_with_markers());
  for (std::uint32_t i = 0; i < c.size(); ++i)
    for (std::uint64_t p = 0; p <= c.length(i); ++p)
      entries.push_back({p, i});
  std::sort(entries.begin(), entries.end(),
            [&c](const gsa_entry& a, const gsa_entry& b) { return suffix_less(c, a, b); });
  return entries;
}

std::vector<symbol_code> gsa_to_bwt(const sequence_collection& c,
                                    std::span<const gsa_entry> gsa) {
  std::vector<symbol_code> bwt;
  bwt.reserve(gsa.size());
  for (const gsa_entry& e : gsa)
    bwt.push_back(e.pos == 0 ? marker_code : c.code_at(e.seq, e.pos - 1));
  return bwt;
}

std::vector<std::uint64_t> gsa_to_lcp(const sequence_collection& c,
                                      std::span<const gsa_entry> gsa) {
  std::vector<std::uint64_t> lcp(gsa.size(), 0);
  for (std::size_t i = 1; i < gsa.size(); ++i) {
    std::span<const symbol_code> wa = c.codes(gsa[i - 1].seq);
    std::span<const symbol_code> wb = c.codes(gsa[i].seq);
    std::uint64_t pa = gsa[i - 1].pos, pb = gsa[i].pos, n = 0;
    while (pa + n < wa.size() && pb + n < wb.size() && wa[pa + n] == wb[pb + n]) ++n;
    lcp[i] = n;
  }
  return lcp;
}

oracle_result compute(const sequence_collection& c) {
  oracle_result r;
  r.gsa = build_gsa(c);
  r.bwt = gsa_to_bwt(c, r.gsa);
  r.lcp = gsa_to_lcp(c, r.gsa);
  return r;
}

namespace {

void check_segment(std::span<const symbol_code> bseg,
                   std::span<const std::uint64_t> lseg, std::uint64_t r) {
  if (bseg.size() != lseg.size())
    throw error(errc::invalid_argument, "segment B and L lengths differ");
  if (r < 1 || r > bseg.size())
    throw error(errc::position_out_of_range,
                "position " + std::to_string(r) + " outside segment of length " +
                    std::to_string(bseg.size()));
}

}  // namespace

interval_result lci(std::span<const symbol_code> bseg,
                    std::span<const std::uint64_t> lseg, symbol_code x,
                    std::uint64_t r) {
  check_segment(bseg, lseg, r);
  std::uint64_t d1 = 0;
  for (std::uint64_t q = r - 1; q >= 1; --q) {
    if (bseg[q - 1] == x) {
      d1 = q;
      break;
    }
  }
  if (d1 == 0) return {false, 0, lseg[r - 1]};
  std::uint64_t m = lseg[d1];  // position d1 + 1
  for (std::uint64_t q = d1 + 1; q <= r; ++q) m = std::min(m, lseg[q - 1]);
  return {true, d1, m};
}

interval_result lsi(std::span<const symbol_code> bseg,
                    std::span<const std::uint64_t> lseg, symbol_code x,
                    std::uint64_t r) {
  check_segment(bseg, lseg, r);
  std::uint64_t d2 = 0;
  for (std::uint64_t q = r + 1; q <= bseg.size(); ++q) {
    if (bseg[q - 1] == x) {
      d2 = q;
      break;
    }
  }
  if (d2 == 0) return {false, 0, lseg[r - 1]};
  std::uint64_t m = lseg[r];  // position r + 1
  for (std::uint64_t q = r + 1; q <= d2; ++q) m = std::min(m, lseg[q - 1]);
  return {true, d2, m};
}

}  // namespace colbwt::oracle
