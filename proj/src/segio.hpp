/*
 * Generation files.  Iteration j leaves one file triple per segment h
 * (0 = marker segment, 1..sigma = one per alphabet symbol):
 *
 *   <dir>/gen<j>.B.<h>   raw symbol codes, one byte each
 *   <dir>/gen<j>.L.<h>   LCP values, fixed-width little-endian
 *   <dir>/gen<j>.G.<h>   (pos, seq) pairs, optional side output
 *
 * plus a sidecar <dir>/gen<j>.meta (decimal text) that makes a sealed
 * generation self-describing: sigma, widths, per-segment lengths.
 *
 * Readers are forward-only cursors — there is deliberately no random
 * access, so every consumer is forced into the sequential-scan contract.
 * An optional io_recorder observes opens and block fetches so tests can
 * prove the access pattern (strictly increasing offsets, bounded opens)
 * rather than assume it.
 */
#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "model.hpp"

namespace colbwt::segio {

// ---- access instrumentation -------------------------------------------

struct file_io_stats {
  std::uint32_t opens = 0;
  std::uint64_t bytes = 0;
  std::uint64_t backward_fetches = 0;  // fetches at an offset below the high-water mark
};

// Epochs let a test attribute accesses to a phase ("iter12.phase1", ...).
class io_recorder {
 public:
  void begin_epoch(std::string label);
  void on_open(const std::string& file);
  void on_fetch(const std::string& file, std::uint64_t offset, std::size_t len);

  struct epoch {
    std::string label;
    std::map<std::string, file_io_stats> files;
  };
  const std::vector<epoch>& epochs() const { return epochs_; }
  bool all_sequential() const;  // no backward fetch anywhere
  std::uint32_t max_opens_per_file() const;

 private:
  std::vector<epoch> epochs_;
  std::map<std::string, std::uint64_t> high_water_;  // per (current epoch, file)
};

// ---- buffered byte streams ----------------------------------------------

class buffered_writer {
 public:
  buffered_writer() = default;
  buffered_writer(const buffered_writer&) = delete;
  buffered_writer& operator=(const buffered_writer&) = delete;
  buffered_writer(buffered_writer&& o) noexcept { swap(o); }
  buffered_writer& operator=(buffered_writer&& o) noexcept { swap(o); return *this; }
  ~buffered_writer();

  void open(const std::filesystem::path& path, std::size_t buffer_bytes);
  bool is_open() const { return f_ != nullptr; }

  void put_u8(std::uint8_t b) {
    if (pos_ == buf_.size()) drain();
    buf_[pos_++] = b;
  }
  void put_le(std::uint64_t v, std::uint32_t width) {
    if (pos_ + width > buf_.size()) drain();
    for (std::uint32_t i = 0; i < width; ++i) buf_[pos_++] = static_cast<std::uint8_t>(v >> (8 * i));
  }
  void write_block(const std::uint8_t* p, std::size_t n);
  void close();  // flush; further writes are a bug
  std::uint64_t bytes_written() const { return total_ + pos_; }

 private:
  void drain();
  void swap(buffered_writer& o) noexcept;

  std::FILE* f_ = nullptr;
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
  std::uint64_t total_ = 0;
  std::string path_;
};

class buffered_reader {
 public:
  buffered_reader() = default;
  buffered_reader(const buffered_reader&) = delete;
  buffered_reader& operator=(const buffered_reader&) = delete;
  buffered_reader(buffered_reader&& o) noexcept { swap(o); }
  buffered_reader& operator=(buffered_reader&& o) noexcept { swap(o); return *this; }
  ~buffered_reader();

  void open(const std::filesystem::path& path, std::size_t buffer_bytes,
            io_recorder* rec, std::string name);

  bool get_u8(std::uint8_t& out) {
    if (pos_ == fill_ && !refill()) return false;
    out = buf_[pos_++];
    return true;
  }
  // width bytes little-endian; false cleanly at end-of-file, io error on a
  // torn value
  bool get_le(std::uint64_t& out, std::uint32_t width) {
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < width; ++i) {
      std::uint8_t b;
      if (!get_u8(b)) {
        if (i == 0) return false;
        throw error(errc::io, "truncated value in " + path_);
      }
      v |= static_cast<std::uint64_t>(b) << (8 * i);
    }
    out = v;
    return true;
  }
  // whatever is buffered right now, refilling first if necessary; empty at
  // end-of-file.  advance() consumes bytes previously returned by fetch().
  std::span<const std::uint8_t> fetch() {
    if (pos_ == fill_ && !refill()) return {};
    return {buf_.data() + pos_, fill_ - pos_};
  }
  void advance(std::size_t n) { pos_ += n; }

  void close();
  std::uint64_t bytes_consumed() const { return consumed_ - (fill_ - pos_); }

 private:
  bool refill();
  void swap(buffered_reader& o) noexcept;

  std::FILE* f_ = nullptr;
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0, fill_ = 0;
  std::uint64_t consumed_ = 0;  // bytes fetched from the file so far
  io_recorder* rec_ = nullptr;
  std::string name_;
  std::string path_;
};

// ---- generations ---------------------------------------------------------

std::filesystem::path segment_path(const std::filesystem::path& dir, std::uint32_t iteration,
                                   char kind, std::uint32_t h);
std::filesystem::path meta_path(const std::filesystem::path& dir, std::uint32_t iteration);

inline constexpr std::uint32_t gsa_seq_width = 4;

struct seg_record {
  symbol_code sym;
  std::uint64_t lcp;
  std::uint64_t gsa_pos = 0;
  std::uint32_t gsa_seq = 0;
};

class generation_reader;

class generation_writer {
 public:
  // Creates the (empty) segment files up front.  Throws width_too_small
  // unless 2^(8*lcp_width) > max_value (the largest LCP — and GSA
  // position — the run can produce).
  generation_writer(std::filesystem::path dir, std::uint32_t iteration, std::uint32_t sigma,
                    std::uint32_t lcp_width, std::uint64_t max_value, bool with_gsa,
                    std::size_t buffer_bytes);

  void append(std::uint32_t h, symbol_code sym, std::uint64_t lcp) {
    bs_[h].put_u8(sym);
    ls_[h].put_le(lcp, lcp_width_);
    ++lengths_[h];
  }
  void append_gsa(std::uint32_t h, std::uint64_t pos, std::uint32_t seq) {
    gs_[h].put_le(pos, lcp_width_);
    gs_[h].put_le(seq, gsa_seq_width);
    ++gsa_lengths_[h];
  }
  // stream-copy segment h of a sealed source generation onto the tail of
  // this writer's segment h (byte-level; no decode/encode round trip)
  void copy_segment(generation_reader& src, std::uint32_t h);

  std::uint64_t length(std::uint32_t h) const { return lengths_[h]; }
  std::uint32_t iteration() const { return iteration_; }
  void seal();  // flush everything and write the meta file

 private:
  std::filesystem::path dir_;
  std::uint32_t iteration_, sigma_, lcp_width_;
  bool with_gsa_;
  bool sealed_ = false;
  std::vector<buffered_writer> bs_, ls_, gs_;
  std::vector<std::uint64_t> lengths_, gsa_lengths_;
};

class symbol_stream {
 public:
  bool next(symbol_code& out) {
    std::uint8_t b;
    if (!b_.get_u8(b)) return false;
    out = b;
    ++consumed_;
    return true;
  }
  std::uint64_t consumed() const { return consumed_; }

 private:
  friend class generation_reader;
  buffered_reader b_;
  std::uint64_t consumed_ = 0;
};

class record_stream {
 public:
  bool next(seg_record& out) {
    std::uint8_t b;
    if (!b_.get_u8(b)) return false;
    out.sym = b;
    if (!l_.get_le(out.lcp, lcp_width_))
      throw error(errc::io, "B/L segment files out of step");
    if (with_gsa_) {
      std::uint64_t seq;
      if (!g_.get_le(out.gsa_pos, lcp_width_) || !g_.get_le(seq, gsa_seq_width))
        throw error(errc::io, "B/G segment files out of step");
      out.gsa_seq = static_cast<std::uint32_t>(seq);
    }
    ++consumed_;
    return true;
  }
  std::uint64_t consumed() const { return consumed_; }

 private:
  friend class generation_reader;
  buffered_reader b_, l_, g_;
  std::uint32_t lcp_width_ = 0;
  bool with_gsa_ = false;
  std::uint64_t consumed_ = 0;
};

class generation_reader {
 public:
  // Requires a sealed generation; throws missing_generation otherwise.
  generation_reader(std::filesystem::path dir, std::uint32_t iteration,
                    std::size_t buffer_bytes, io_recorder* rec = nullptr);

  std::uint32_t sigma() const { return sigma_; }
  std::uint32_t lcp_width() const { return lcp_width_; }
  bool has_gsa() const { return with_gsa_; }
  std::uint32_t iteration() const { return iteration_; }
  std::uint64_t length(std::uint32_t h) const { return lengths_[h]; }

  // Forward-only cursors.  Each call opens the underlying file(s) anew;
  // the engine calls each at most once per phase.
  symbol_stream open_symbols(std::uint32_t h);
  record_stream open_records(std::uint32_t h, bool want_gsa);

 private:
  friend class generation_writer;
  buffered_reader open_file(char kind, std::uint32_t h);

  std::filesystem::path dir_;
  std::uint32_t iteration_ = 0, sigma_ = 0, lcp_width_ = 0;
  bool with_gsa_ = false;
  std::size_t buffer_bytes_;
  io_recorder* rec_;
  std::vector<std::uint64_t> lengths_;
};

// Delete the files of generation `iteration` (sealed or abandoned).
void remove_generation(const std::filesystem::path& dir, std::uint32_t iteration);

// After sealing generation j, drop generation j-1; no-op at j = 0.
void swap_generations(const std::filesystem::path& dir, std::uint32_t j);

// Distinct generation indices with files in `dir`, ascending.
std::vector<std::uint32_t> generations_on_disk(const std::filesystem::path& dir);

}  // namespace colbwt::segio
