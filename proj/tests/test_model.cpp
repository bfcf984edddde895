/*
 * Unit tests for the alphabet, collection validation and the error type.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "model.hpp"

using namespace colbwt;

namespace {

template <typename F>
error capture(F&& f) {
  try {
    f();
  } catch (const error& e) {
    return e;
  }
  FAIL("expected a colbwt::error");
  return error(errc::ok, "unreachable");
}

}  // namespace

TEST_CASE("alphabet ranks members by byte value regardless of input order") {
  alphabet a("TGCA");
  CHECK(a.sigma() == 4);
  CHECK(a.symbols() == "ACGT");
  CHECK(a.encode('A') == 1);
  CHECK(a.encode('C') == 2);
  CHECK(a.encode('G') == 3);
  CHECK(a.encode('T') == 4);
  CHECK(a.decode(0) == '$');
  CHECK(a.decode(4) == 'T');
  CHECK(a.lookup('Z') == -1);
}

TEST_CASE("ascii order puts N between G and T in the default genomic alphabet") {
  alphabet a("ACGTN");
  CHECK(a.symbols() == "ACGNT");
  CHECK(a.encode('N') == 4);
  CHECK(a.encode('T') == 5);
}

TEST_CASE("alphabet rejections") {
  CHECK(capture([] { alphabet a(""); (void)a; }).code() == errc::invalid_argument);
  CHECK(capture([] { alphabet a("AA"); (void)a; }).code() == errc::invalid_argument);
  CHECK(capture([] { alphabet a("AB$"); (void)a; }).code() == errc::invalid_argument);
  std::string all;
  for (int i = 0; i < 256; ++i) all.push_back(static_cast<char>(i));
  CHECK(capture([&] { alphabet a(all); (void)a; }).code() == errc::invalid_argument);

  alphabet a("AC");
  CHECK(capture([&] { a.encode('G'); }).code() == errc::foreign_symbol);
  CHECK(capture([&] { a.decode(3); }).code() == errc::invalid_argument);
}

TEST_CASE("collection accessors") {
  alphabet a("ACGT");
  auto c = sequence_collection::validate(a, {"GATTACA", "TT", "A"});
  CHECK(c.size() == 3);
  CHECK(c.total_with_markers() == 13);
  CHECK(c.max_length() == 7);
  CHECK(c.sigma() == 4);
  CHECK(c.length(1) == 2);
  CHECK(c.code_at(0, 0) == 3);            // G
  CHECK(c.code_at(0, 6) == 1);            // A
  CHECK(c.decoded(0) == "GATTACA");
  CHECK(c.decoded(2) == "A");
  CHECK(c.codes(1).size() == 2);
  CHECK(c.codes(1)[0] == 4);              // T
}

TEST_CASE("builder reports the failing string and offset") {
  alphabet a("ACGT");
  {
    auto e = capture([&] { sequence_collection::validate(a, {"AC", "AXC"}); });
    CHECK(e.code() == errc::foreign_symbol);
    CHECK(e.detail_a() == 1);
    CHECK(e.detail_b() == 1);
  }
  {
    auto e = capture([&] { sequence_collection::validate(a, {"AC", ""}); });
    CHECK(e.code() == errc::empty_string);
    CHECK(e.detail_a() == 1);
  }
  CHECK(capture([&] { sequence_collection::validate(a, {}); }).code() ==
        errc::empty_collection);
}

TEST_CASE("builder counts as it goes") {
  collection_builder b(alphabet("AB"));
  CHECK(b.count() == 0);
  b.add("AB");
  b.add("B");
  CHECK(b.count() == 2);
  auto c = b.finish();
  CHECK(c.size() == 2);
  CHECK(c.total_with_markers() == 5);
}

TEST_CASE("errc names are stable") {
  CHECK(std::string(errc_name(errc::ok)) == "ok");
  CHECK(std::string(errc_name(errc::verify_mismatch)) == "verify_mismatch");
  CHECK(std::string(errc_name(errc::width_too_small)) == "width_too_small");
  CHECK(std::string(errc_name(errc::foreign_symbol)) == "foreign_symbol");
}

TEST_CASE("errors carry their detail indices") {
  error e(errc::parse, "boom", 41, 7);
  CHECK(e.code() == errc::parse);
  CHECK(e.detail_a() == 41);
  CHECK(e.detail_b() == 7);
  CHECK(std::string(e.what()) == "boom");
  error bare(errc::io, "x");
  CHECK(bare.detail_a() == error::no_detail);
}

TEST_CASE("gsa entries compare by value") {
  CHECK(gsa_entry{3, 1} == gsa_entry{3, 1});
  CHECK(!(gsa_entry{3, 1} == gsa_entry{3, 2}));
  CHECK(!(gsa_entry{2, 1} == gsa_entry{3, 1}));
}
