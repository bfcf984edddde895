#include "segio.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace colbwt::segio {

namespace fs = std::filesystem;

// ---- io_recorder -----------------------------------------------------------

void io_recorder::begin_epoch(std::string label) {
  epochs_.push_back({std::move(label), {}});
  high_water_.clear();
}

void io_recorder::on_open(const std::string& file) {
  if (epochs_.empty()) begin_epoch("default");
  epochs_.back().files[file].opens++;
  high_water_[file] = 0;  // a fresh open restarts at offset 0
}

void io_recorder::on_fetch(const std::string& file, std::uint64_t offset, std::size_t len) {
  if (len == 0) return;
  if (epochs_.empty()) begin_epoch("default");
  file_io_stats& st = epochs_.back().files[file];
  st.bytes += len;
  std::uint64_t& hw = high_water_[file];
  if (offset < hw) st.backward_fetches++;
  hw = std::max(hw, offset + len);
}

bool io_recorder::all_sequential() const {
  for (const epoch& e : epochs_)
    for (const auto& [_, st] : e.files)
      if (st.backward_fetches != 0) return false;
  return true;
}

std::uint32_t io_recorder::max_opens_per_file() const {
  std::uint32_t mx = 0;
  for (const epoch& e : epochs_)
    for (const auto& [_, st] : e.files) mx = std::max(mx, st.opens);
  return mx;
}

// ---- buffered streams -------------------------------------------------------

buffered_writer::~buffered_writer() {
  if (f_) {
    std::fflush(f_);
    std::fclose(f_);  // abandoned writer: best-effort close, no throwing
  }
}

void buffered_writer::swap(buffered_writer& o) noexcept {
  std::swap(f_, o.f_);
  std::swap(buf_, o.buf_);
  std::swap(pos_, o.pos_);
  std::swap(total_, o.total_);
  std::swap(path_, o.path_);
}

void buffered_writer::open(const fs::path& path, std::size_t buffer_bytes) {
  path_ = path.string();
  f_ = std::fopen(path_.c_str(), "wb");
  if (!f_) throw error(errc::io, "cannot create " + path_ + ": " + std::strerror(errno));
  std::setvbuf(f_, nullptr, _IONBF, 0);  // we do our own buffering
  buf_.resize(std::max<std::size_t>(buffer_bytes, 64));
  pos_ = 0;
  total_ = 0;
}

void buffered_writer::drain() {
  if (pos_ == 0) return;
  if (std::fwrite(buf_.data(), 1, pos_, f_) != pos_)
    throw error(errc::io, "write failed on " + path_ + ": " + std::strerror(errno));
  total_ += pos_;
  pos_ = 0;
}

void buffered_writer::write_block(const std::uint8_t* p, std::size_t n) {
  while (n > 0) {
    if (pos_ == buf_.size()) drain();
    std::size_t take = std::min(n, buf_.size() - pos_);
    std::memcpy(buf_.data() + pos_, p, take);
    pos_ += take;
    p += take;
    n -= take;
  }
}

void buffered_writer::close() {
  if (!f_) return;
  drain();
  if (std::fclose(f_) != 0) {
    f_ = nullptr;
    throw error(errc::io, "close failed on " + path_ + ": " + std::strerror(errno));
  }
  f_ = nullptr;
}

buffered_reader::~buffered_reader() {
  if (f_) std::fclose(f_);
}

void buffered_reader::swap(buffered_reader& o) noexcept {
  std::swap(f_, o.f_);
  std::swap(buf_, o.buf_);
  std::swap(pos_, o.pos_);
  std::swap(fill_, o.fill_);
  std::swap(consumed_, o.consumed_);
  std::swap(rec_, o.rec_);
  std::swap(name_, o.name_);
  std::swap(path_, o.path_);
}

void buffered_reader::open(const fs::path& path, std::size_t buffer_bytes, io_recorder* rec,
                           std::string name) {
  path_ = path.string();
  name_ = std::move(name);
  rec_ = rec;
  f_ = std::fopen(path_.c_str(), "rb");
  if (!f_) throw error(errc::io, "cannot open " + path_ + ": " + std::strerror(errno));
  std::setvbuf(f_, nullptr, _IONBF, 0);
  buf_.resize(std::max<std::size_t>(buffer_bytes, 64));
  pos_ = fill_ = 0;
  consumed_ = 0;
  if (rec_) rec_->on_open(name_);
}

bool buffered_reader::refill() {
  std::size_t got = std::fread(buf_.data(), 1, buf_.size(), f_);
  if (got == 0) {
    if (std::ferror(f_)) throw error(errc::io, "read failed on " + path_);
    return false;
  }
  if (rec_) rec_->on_fetch(name_, consumed_, got);
  consumed_ += got;
  pos_ = 0;
  fill_ = got;
  return true;
}

void buffered_reader::close() {
  if (!f_) return;
  std::fclose(f_);
  f_ = nullptr;
}

// ---- paths and meta ---------------------------------------------------------

fs::path segment_path(const fs::path& dir, std::uint32_t iteration, char kind, std::uint32_t h) {
  return dir / ("gen" + std::to_string(iteration) + "." + kind + "." + std::to_string(h));
}

fs::path meta_path(const fs::path& dir, std::uint32_t iteration) {
  return dir / ("gen" + std::to_string(iteration) + ".meta");
}

static std::string file_tag(std::uint32_t iteration, char kind, std::uint32_t h) {
  return "gen" + std::to_string(iteration) + "." + kind + "." + std::to_string(h);
}

// ---- generation_writer --------------------------------------------------------

generation_writer::generation_writer(fs::path dir, std::uint32_t iteration, std::uint32_t sigma,
                                     std::uint32_t lcp_width, std::uint64_t max_value,
                                     bool with_gsa, std::size_t buffer_bytes)
    : dir_(std::move(dir)),
      iteration_(iteration),
      sigma_(sigma),
      lcp_width_(lcp_width),
      with_gsa_(with_gsa) {
  if (lcp_width != 1 && lcp_width != 2 && lcp_width != 4)
    throw error(errc::invalid_argument, "lcp width must be 1, 2 or 4");
  // every representable value must cover max_value: need 2^(8w) > max_value
  if (lcp_width < 8 && (max_value >> (8 * lcp_width)) != 0)
    throw error(errc::width_too_small,
                "width " + std::to_string(lcp_width) + " cannot hold values up to " +
                    std::to_string(max_value));
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw error(errc::io, "cannot create directory " + dir_.string());
  bs_.resize(sigma + 1);
  ls_.resize(sigma + 1);
  if (with_gsa_) gs_.resize(sigma + 1);
  lengths_.assign(sigma + 1, 0);
  gsa_lengths_.assign(sigma + 1, 0);
  for (std::uint32_t h = 0; h <= sigma; ++h) {
    bs_[h].open(segment_path(dir_, iteration, 'B', h), buffer_bytes);
    ls_[h].open(segment_path(dir_, iteration, 'L', h), buffer_bytes);
    if (with_gsa_) gs_[h].open(segment_path(dir_, iteration, 'G', h), buffer_bytes);
  }
}

void generation_writer::copy_segment(generation_reader& src, std::uint32_t h) {
  if (src.lcp_width() != lcp_width_)
    throw error(errc::inconsistent_state, "generation width changed mid-run");
  if (with_gsa_ && !src.has_gsa())
    throw error(errc::inconsistent_state, "source generation lacks the GSA side files");
  std::uint64_t n = src.length(h);
  if (n == 0) return;
  char kinds[3] = {'B', 'L', 'G'};
  for (int k = 0; k < (with_gsa_ ? 3 : 2); ++k) {
    buffered_reader in = src.open_file(kinds[k], h);
    buffered_writer& out = k == 0 ? bs_[h] : k == 1 ? ls_[h] : gs_[h];
    for (std::span<const std::uint8_t> blk = in.fetch(); !blk.empty(); blk = in.fetch()) {
      out.write_block(blk.data(), blk.size());
      in.advance(blk.size());
    }
  }
  lengths_[h] += n;
  if (with_gsa_) gsa_lengths_[h] += n;
}

void generation_writer::seal() {
  if (sealed_) throw error(errc::inconsistent_state, "generation sealed twice");
  for (std::uint32_t h = 0; h <= sigma_; ++h) {
    if (with_gsa_ && gsa_lengths_[h] != lengths_[h])
      throw error(errc::inconsistent_state, "GSA side file out of step with segment " +
                                                std::to_string(h));
    bs_[h].close();
    ls_[h].close();
    if (with_gsa_) gs_[h].close();
  }
  std::ostringstream meta;
  meta << "iteration " << iteration_ << "\n";
  meta << "sigma " << sigma_ << "\n";
  meta << "lcp_width " << lcp_width_ << "\n";
  meta << "gsa " << (with_gsa_ ? 1 : 0) << "\n";
  if (with_gsa_) {
    meta << "pos_width " << lcp_width_ << "\n";
    meta << "seq_width " << gsa_seq_width << "\n";
  }
  for (std::uint32_t h = 0; h <= sigma_; ++h) meta << "len " << h << " " << lengths_[h] << "\n";
  fs::path mp = meta_path(dir_, iteration_);
  std::ofstream out(mp, std::ios::binary | std::ios::trunc);
  out << meta.str();
  out.flush();
  if (!out) throw error(errc::io, "cannot write " + mp.string());
  sealed_ = true;
}

// ---- generation_reader --------------------------------------------------------

generation_reader::generation_reader(fs::path dir, std::uint32_t iteration,
                                     std::size_t buffer_bytes, io_recorder* rec)
    : dir_(std::move(dir)), iteration_(iteration), buffer_bytes_(buffer_bytes), rec_(rec) {
  fs::path mp = meta_path(dir_, iteration);
  std::ifstream in(mp, std::ios::binary);
  if (!in)
    throw error(errc::missing_generation,
                "generation " + std::to_string(iteration) + " is not sealed in " + dir_.string());
  std::string key;
  bool saw_sigma = false, saw_width = false;
  std::map<std::uint32_t, std::uint64_t> lens;
  while (in >> key) {
    if (key == "iteration") {
      std::uint32_t it;
      if (!(in >> it) || it != iteration)
        throw error(errc::parse, "meta file of " + mp.string() + " names a different iteration");
    } else if (key == "sigma") {
      in >> sigma_;
      saw_sigma = true;
    } else if (key == "lcp_width") {
      in >> lcp_width_;
      saw_width = true;
    } else if (key == "gsa") {
      int g;
      in >> g;
      with_gsa_ = g != 0;
    } else if (key == "pos_width" || key == "seq_width") {
      std::uint64_t ignored;
      in >> ignored;
    } else if (key == "len") {
      std::uint32_t h;
      std::uint64_t n;
      in >> h >> n;
      lens[h] = n;
    } else {
      throw error(errc::parse, "unknown key '" + key + "' in " + mp.string());
    }
    if (!in && !in.eof()) throw error(errc::parse, "malformed meta file " + mp.string());
  }
  if (!saw_sigma || !saw_width || lens.size() != sigma_ + 1)
    throw error(errc::parse, "incomplete meta file " + mp.string());
  lengths_.assign(sigma_ + 1, 0);
  for (auto [h, n] : lens) {
    if (h > sigma_) throw error(errc::parse, "segment index out of range in " + mp.string());
    lengths_[h] = n;
  }
  // sanity: file sizes must match the declared lengths
  for (std::uint32_t h = 0; h <= sigma_; ++h) {
    std::error_code ec;
    std::uint64_t bsz = fs::file_size(segment_path(dir_, iteration_, 'B', h), ec);
    if (ec || bsz != lengths_[h])
      throw error(errc::inconsistent_state,
                  "segment file " + file_tag(iteration_, 'B', h) + " does not match its manifest");
    std::uint64_t lsz = fs::file_size(segment_path(dir_, iteration_, 'L', h), ec);
    if (ec || lsz != lengths_[h] * lcp_width_)
      throw error(errc::inconsistent_state,
                  "segment file " + file_tag(iteration_, 'L', h) + " does not match its manifest");
  }
}

buffered_reader generation_reader::open_file(char kind, std::uint32_t h) {
  // The manifest tells us exactly how many bytes the stream holds; a buffer
  // larger than that is pure allocation overhead (felt badly on collections
  // whose segments are a few KB against a multi-MB configured buffer).
  std::uint64_t unit = kind == 'B' ? 1 : kind == 'L' ? lcp_width_ : lcp_width_ + gsa_seq_width;
  std::uint64_t need = std::max<std::uint64_t>(lengths_[h] * unit, 64);
  std::size_t cap = static_cast<std::size_t>(std::min<std::uint64_t>(buffer_bytes_, need));
  buffered_reader r;
  r.open(segment_path(dir_, iteration_, kind, h), cap, rec_,
         file_tag(iteration_, kind, h));
  return r;
}

symbol_stream generation_reader::open_symbols(std::uint32_t h) {
  if (h > sigma_) throw error(errc::invalid_argument, "segment index out of range");
  symbol_stream s;
  s.b_ = open_file('B', h);
  return s;
}

record_stream generation_reader::open_records(std::uint32_t h, bool want_gsa) {
  if (h > sigma_) throw error(errc::invalid_argument, "segment index out of range");
  if (want_gsa && !with_gsa_)
    throw error(errc::missing_generation, "generation has no GSA side files");
  record_stream s;
  s.lcp_width_ = lcp_width_;
  s.with_gsa_ = want_gsa;
  s.b_ = open_file('B', h);
  s.l_ = open_file('L', h);
  if (want_gsa) s.g_ = open_file('G', h);
  return s;
}

// ---- housekeeping -------------------------------------------------------------

void remove_generation(const fs::path& dir, std::uint32_t iteration) {
  std::string prefix = "gen" + std::to_string(iteration) + ".";
  std::error_code ec;
  if (!fs::exists(dir, ec)) return;
  for (const fs::directory_entry& e : fs::directory_iterator(dir)) {
    if (e.path().filename().string().starts_with(prefix)) fs::remove(e.path(), ec);
  }
}

void swap_generations(const fs::path& dir, std::uint32_t j) {
  if (j == 0) return;
  remove_generation(dir, j - 1);
}

std::vector<std::uint32_t> generations_on_disk(const fs::path& dir) {
  std::vector<std::uint32_t> out;
  std::error_code ec;
  if (!fs::exists(dir, ec)) return out;
  for (const fs::directory_entry& e : fs::directory_iterator(dir)) {
    std::string name = e.path().filename().string();
    if (!name.starts_with("gen")) continue;
    std::size_t dot = name.find('.', 3);
    if (dot == std::string::npos || dot == 3) continue;
    std::uint32_t j = 0;
    bool num = true;
    for (std::size_t i = 3; i < dot; ++i) {
      if (name[i] < '0' || name[i] > '9') {
        num = false;
        break;
      }
      j = j * 10 + (name[i] - '0');
    }
    if (!num) continue;
    if (std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace colbwt::segio
