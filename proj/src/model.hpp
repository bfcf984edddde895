/*
 * Core value types shared by the whole library: the alphabet with its
 * symbol codes, validated string collections, GSA entries, and the error
 * type every layer throws.
 *
 * Symbols are stored encoded, one byte each: code 0 is the end marker,
 * codes 1..sigma are the alphabet members in byte order.  The marker is
 * never stored inside a string; position len(i) names the marker row of
 * string i wherever a suffix position is required.
 */
#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace colbwt {

using symbol_code = std::uint8_t;  // 0 = end marker, 1..sigma = alphabet ranks

inline constexpr symbol_code marker_code = 0;
inline constexpr char marker_char = '$';  // rendering of code 0 in text output

enum class errc {
  ok = 0,
  invalid_argument,
  empty_collection,
  empty_string,
  foreign_symbol,
  parse,
  width_too_small,
  io,
  missing_generation,
  inconsistent_state,
  cap_exceeded,
  verify_mismatch,
  position_out_of_range,
};

const char* errc_name(errc c);

// One error type for the whole library; detail_a/detail_b carry the
// indices some conditions are specified with (string index and offset for
// foreign_symbol, string index for empty_string, line number for parse,
// divergence index for verify_mismatch).
class error : public std::runtime_error {
 public:
  static constexpr std::uint64_t no_detail = std::numeric_limits<std::uint64_t>::max();

  error(errc code, const std::string& msg, std::uint64_t a = no_detail,
        std::uint64_t b = no_detail)
      : std::runtime_error(msg), code_(code), detail_a_(a), detail_b_(b) {}

  errc code() const { return code_; }
  std::uint64_t detail_a() const { return detail_a_; }
  std::uint64_t detail_b() const { return detail_b_; }

 private:
  errc code_;
  std::uint64_t detail_a_;
  std::uint64_t detail_b_;
};

// Ordered alphabet of 1..255 distinct bytes.  '$' is rejected as a member
// because it renders the end marker in textual output; the marker itself
// is not a member and sorts below every member.
class alphabet {
 public:
  explicit alphabet(std::string_view symbols);

  std::uint32_t sigma() const { return static_cast<std::uint32_t>(symbols_.size()); }

  // -1 if the byte is not a member, otherwise the 1-based code.
  int lookup(char c) const { return code_of_[static_cast<unsigned char>(c)]; }

  symbol_code encode(char c) const;  // throws foreign_symbol
  char decode(symbol_code code) const;

  // members in code order (index 0 <-> code 1)
  std::string_view symbols() const { return symbols_; }

 private:
  std::string symbols_;
  std::array<std::int16_t, 256> code_of_{};
};

struct gsa_entry {
  std::uint64_t pos;  // suffix start; pos == len(seq) names the marker row
  std::uint32_t seq;

  friend bool operator==(const gsa_entry&, const gsa_entry&) = default;
};

// Validated, encoded collection.  Flat storage: string i occupies
// chars_[offsets_[i] .. offsets_[i+1]).
class sequence_collection {
 public:
  sequence_collection(alphabet abc, std::vector<symbol_code> chars,
                      std::vector<std::uint64_t> offsets);

  // Encode and validate raw strings in input order.  Throws
  // empty_collection, empty_string (string index in detail_a) or
  // foreign_symbol (string index in detail_a, offset in detail_b).
  static sequence_collection validate(const alphabet& abc,
                                      const std::vector<std::string>& strings);

  std::uint64_t size() const { return offsets_.size() - 1; }  // m
  std::uint64_t total_with_markers() const {                  // N
    return chars_.size() + size();
  }
  std::uint64_t max_length() const { return max_length_; }  // K
  std::uint32_t sigma() const { return abc_.sigma(); }
  const alphabet& abc() const { return abc_; }

  std::uint64_t length(std::uint64_t i) const {
    return offsets_[i + 1] - offsets_[i];
  }
  symbol_code code_at(std::uint64_t i, std::uint64_t pos) const {
    return chars_[offsets_[i] + pos];
  }
  std::span<const symbol_code> codes(std::uint64_t i) const {
    return {chars_.data() + offsets_[i], length(i)};
  }

  // decoded copy, for diagnostics and tests
  std::string decoded(std::uint64_t i) const;

 private:
  alphabet abc_;
  std::vector<symbol_code> chars_;
  std::vector<std::uint64_t> offsets_;  // m + 1 entries, offsets_[0] = 0
  std::uint64_t max_length_ = 0;
};

// Incremental construction so file ingestion never holds a second raw
// copy of the input.  add() validates one string; finish() checks the
// collection is non-empty.
class collection_builder {
 public:
  explicit collection_builder(alphabet abc) : abc_(std::move(abc)) { offsets_.push_back(0); }

  std::uint64_t count() const { return offsets_.size() - 1; }
  void add(std::string_view raw);
  sequence_collection finish();

 private:
  alphabet abc_;
  std::vector<symbol_code> chars_;
  std::vector<std::uint64_t> offsets_;
};

}  // namespace colbwt
