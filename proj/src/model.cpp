#include "model.hpp"

#include <algorithm>

namespace colbwt {

const char* errc_name(errc c) {
  switch (c) {
    case errc::ok: return "ok";
    case errc::invalid_argument: return "invalid_argument";
    case errc::empty_collection: return "empty_collection";
    case errc::empty_string: return "empty_string";
    case errc::foreign_symbol: return "foreign_symbol";
    case errc::parse: return "parse";
    case errc::width_too_small: return "width_too_small";
    case errc::io: return "io";
    case errc::missing_generation: return "missing_generation";
    case errc::inconsistent_state: return "inconsistent_state";
    case errc::cap_exceeded: return "cap_exceeded";
    case errc::verify_mismatch: return "verify_mismatch";
    case errc::position_out_of_range: return "position_out_of_range";
  }
  return "unknown";
}

alphabet::alphabet(std::string_view symbols) {
  if (symbols.empty())
    throw error(errc::invalid_argument, "alphabet must have at least one symbol");
  if (symbols.size() > 255)
    throw error(errc::invalid_argument, "alphabet larger than 255 symbols");
  code_of_.fill(-1);
  symbols_.assign(symbols);
  std::sort(symbols_.begin(), symbols_.end(),
            [](char a, char b) { return static_cast<unsigned char>(a) < static_cast<unsigned char>(b); });
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    char c = symbols_[i];
    if (c == marker_char)
      throw error(errc::invalid_argument,
                  "'$' is reserved for the end marker and cannot be an alphabet member");
    if (i > 0 && symbols_[i - 1] == c)
      throw error(errc::invalid_argument,
                  std::string("duplicate alphabet symbol '") + c + "'");
    code_of_[static_cast<unsigned char>(c)] = static_cast<std::int16_t>(i + 1);
  }
}

symbol_code alphabet::encode(char c) const {
  int code = lookup(c);
  if (code < 0)
    throw error(errc::foreign_symbol,
                std::string("symbol '") + c + "' is not in the alphabet");
  return static_cast<symbol_code>(code);
}

char alphabet::decode(symbol_code code) const {
  if (code == marker_code) return marker_char;
  if (code > sigma())
    throw error(errc::invalid_argument, "symbol code out of range");
  return symbols_[code - 1];
}

sequence_collection::sequence_collection(alphabet abc, std::vector<symbol_code> chars,
                                         std::vector<std::uint64_t> offsets)
    : abc_(std::move(abc)), chars_(std::move(chars)), offsets_(std::move(offsets)) {
  for (std::uint64_t i = 0; i + 1 < offsets_.size(); ++i)
    max_length_ = std::max(max_length_, offsets_[i + 1] - offsets_[i]);
}

sequence_collection sequence_collection::validate(const alphabet& abc,
                                                  const std::vector<std::string>& strings) {
  collection_builder b(abc);
  for (const std::string& s : strings) b.add(s);
  return b.finish();
}

std::string sequence_collection::decoded(std::uint64_t i) const {
  std::string out;
  out.reserve(length(i));
  for (symbol_code c : codes(i)) out.push_back(abc_.decode(c));
  return out;
}

void collection_builder::add(std::string_view raw) {
  std::uint64_t index = count();
  if (raw.empty())
    throw error(errc::empty_string,
                "string " + std::to_string(index) + " is empty", index);
  for (std::size_t off = 0; off < raw.size(); ++off) {
    int code = abc_.lookup(raw[off]);
    if (code < 0)
      throw error(errc::foreign_symbol,
                  "string " + std::to_string(index) + " offset " + std::to_string(off) +
                      ": symbol '" + raw[off] + "' is not in the alphabet",
                  index, off);
    chars_.push_back(static_cast<symbol_code>(code));
  }
  offsets_.push_back(chars_.size());
}

sequence_collection collection_builder::finish() {
  if (count() == 0)
    throw error(errc::empty_collection, "collection has no strings");
  return sequence_collection(std::move(abc_), std::move(chars_), std::move(offsets_));
}

}  // namespace colbwt
