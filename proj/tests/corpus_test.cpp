#include <sstream>

#include "doctest.h"
#include "radical/corpus.hpp"
#include "radical/utf8.hpp"
#include "test_util.hpp"

using namespace radical;
using radical::testing::data_path;
using radical::testing::load_table;
using radical::testing::read_file;
using radical::testing::read_lines;

namespace {

TransformConfig at_level(unsigned l) {
  TransformConfig cfg;
  cfg.decomposition.level = l;
  return cfg;
}

std::string run_corpus(const std::string& input, const DecompositionTable& t,
                       const TransformConfig& cfg, TransformReport* report,
                       unsigned threads = 1, std::size_t batch = 4096) {
  std::istringstream in(input);
  std::ostringstream out;
  const auto r = transform_corpus(in, out, t, cfg, threads, batch);
  if (report) *report = r;
  return out.str();
}

// Marker-delimited groups of a rewritten line, tokens of an untouched one.
std::size_t word_groups(const std::string& out, const std::string& in,
                        const std::string& marker) {
  const auto toks = utf8::split_whitespace(out);
  if (out == in) return toks.size();
  std::size_t markers = 0;
  for (auto t : toks)
    if (t == marker) ++markers;
  return markers + 1;
}

}  // namespace

TEST_CASE("transform_line examples") {
  const auto fixture = load_table("fixture_ids.txt");
  CHECK(transform_line("鋒利 的 劍", fixture, at_level(0)) == "鋒利 的 劍");
  CHECK(transform_line("abc 123", fixture, at_level(3)) == "abc 123");
  CHECK(transform_line("", fixture, at_level(3)) == "");

  const auto t = testing::table_from(testing::kMingTian);
  CHECK(transform_line("明 天", t, at_level(1)) == "⿰ 日 月 ‖ 天");
  auto no_idc = at_level(1);
  no_idc.decomposition.keep_idc_operators = false;
  CHECK(transform_line("明 天", t, no_idc) == "日 月 ‖ 天");
  auto marker = at_level(1);
  marker.word_boundary_marker = "<wb>";
  CHECK(transform_line("明天 abc", t, marker) == "⿰ 日 月 天 <wb> abc");
}

TEST_CASE("mixed tokens keep out-of-dictionary runs together") {
  const auto t = testing::table_from(testing::kMingTian);
  CHECK(transform_line("3D明 x", t, at_level(1)) == "3D ⿰ 日 月 ‖ x");
  CHECK(transform_line("a明b天c", t, at_level(1)) == "a ⿰ 日 月 b 天 c");
}

TEST_CASE("whitespace and CR handling") {
  const auto t = testing::table_from(testing::kMingTian);
  CHECK(transform_line("  abc   def ", t, at_level(1)) == "  abc   def ");
  CHECK(transform_line("明  天\r", t, at_level(1)) == "⿰ 日 月 ‖ 天\r");
}

TEST_CASE("report counts for one line") {
  const auto t = testing::table_from(testing::kMingTian);
  const auto cfg = at_level(1);
  LineTransformer lt(t, cfg);
  TransformReport r;
  lt.transform("明 天 ok", &r);
  CHECK(r.lines_in == 1);
  CHECK(r.lines_out == 1);
  CHECK(r.tokens_in == 3);
  CHECK(r.pieces_out == 5);
  CHECK(r.chars_decomposed == 1);
  CHECK(r.chars_passed_through == 3);
}

TEST_CASE("golden files at levels 1-3") {
  const auto t = load_table("fixture_ids.txt");
  const std::string input = read_file(data_path("corpus3.zh"));
  for (unsigned l = 1; l <= 3; ++l) {
    CAPTURE(l);
    TransformReport r;
    const auto out = run_corpus(input, t, at_level(l), &r);
    CHECK(out == read_file(data_path("corpus3.level" + std::to_string(l) + ".golden")));
    CHECK(r.lines_in == 3);
    CHECK(r.lines_out == 3);
  }
}

TEST_CASE("10-line fixture report matches the oracle count") {
  const auto t = load_table("fixture_ids.txt");
  TransformReport r;
  run_corpus(read_file(data_path("corpus10.zh")), t, at_level(3), &r);
  // Frozen from tests/oracle/generate.py.
  CHECK(r.lines_in == 10);
  CHECK(r.lines_out == 10);
  CHECK(r.tokens_in == 40);
  CHECK(r.pieces_out == 228);
  CHECK(r.chars_decomposed == 36);
  CHECK(r.chars_passed_through == 39);
  CHECK(r.pieces_out >= r.tokens_in);
}

TEST_CASE("corpus invariants on the 1000-line fixture") {
  const auto t = load_table("fixture_ids.txt");
  const auto lines = read_lines(data_path("corpus1000.zh"));
  const std::string input = read_file(data_path("corpus1000.zh"));
  for (unsigned l : {0u, 1u, 2u, 3u}) {
    CAPTURE(l);
    TransformReport r;
    const auto out = run_corpus(input, t, at_level(l), &r);
    std::vector<std::string> out_lines;
    std::istringstream os(out);
    for (std::string s; std::getline(os, s);) out_lines.push_back(s);
    REQUIRE(out_lines.size() == lines.size());
    CHECK(r.lines_in == lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      CHECK(word_groups(out_lines[i], lines[i], "‖") ==
            utf8::split_whitespace(lines[i]).size());
      bool han = false;
      for (char32_t c : utf8::decode(lines[i])) han = han || !t.is_atom(c);
      if (!han || l == 0) CHECK(out_lines[i] == lines[i]);
    }
    if (l == 0) CHECK(out == input);
    if (l == 3) {
      CHECK(out == read_file(data_path("corpus1000.level3")));
      CHECK(r.tokens_in == 6188);
      CHECK(r.pieces_out == 29923);
      CHECK(r.chars_decomposed == 4798);
      CHECK(r.chars_passed_through == 6430);
    }
  }
}

TEST_CASE("parallel transform is identical to serial") {
  const auto t = load_table("fixture_ids.txt");
  const std::string input = read_file(data_path("corpus1000.zh"));
  TransformReport serial_report;
  const auto serial = run_corpus(input, t, at_level(3), &serial_report);
  for (unsigned threads : {2u, 3u, 8u}) {
    for (std::size_t batch : {std::size_t{1}, std::size_t{7}, std::size_t{4096}}) {
      TransformReport r;
      CHECK(run_corpus(input, t, at_level(3), &r, threads, batch) == serial);
      CHECK(r == serial_report);
    }
  }
}

TEST_CASE("Latin-only corpus is byte-identical, including a missing final newline") {
  const auto t = load_table("fixture_ids.txt");
  const std::string input = "hello world\n\nfoo  bar\t baz\nno newline";
  TransformReport r;
  CHECK(run_corpus(input, t, at_level(3), &r) == input);
  CHECK(r.lines_in == 4);
  CHECK(run_corpus("", t, at_level(3), &r).empty());
  CHECK(r.lines_in == 0);
}

TEST_CASE("invalid UTF-8 reports the line") {
  const auto t = load_table("fixture_ids.txt");
  try {
    run_corpus("ok\nbad \xE6\x98\n", t, at_level(1), nullptr);
    FAIL("expected DecodeError");
  } catch (const utf8::DecodeError& e) {
    CHECK(e.offset() == 2);
  }
}

TEST_CASE("write failure surfaces as IoError") {
  const auto t = load_table("fixture_ids.txt");
  std::istringstream in("a\nb\n");
  std::ostringstream out;
  out.setstate(std::ios::badbit);
  CHECK_THROWS_AS(transform_corpus(in, out, t, at_level(1)), IoError);
}

TEST_CASE("marker validation") {
  const auto t = load_table("fixture_ids.txt");
  auto cfg = at_level(1);
  CHECK_NOTHROW(cfg.validate(t));
  for (const char* bad : {"", "a b", "⿰", "&X;", "人", "日", "\t"}) {
    cfg.word_boundary_marker = bad;
    CHECK_THROWS_AS(cfg.validate(t), std::invalid_argument);
  }
  cfg.word_boundary_marker = "<wb>";
  CHECK_NOTHROW(cfg.validate(t));
  cfg.decomposition.level = 99;
  CHECK_THROWS_AS(cfg.validate(t), std::invalid_argument);
}

TEST_CASE("report text block") {
  TransformReport r;
  r.lines_in = r.lines_out = 2;
  r.tokens_in = 3;
  CHECK(r.to_text() ==
        "lines_in: 2\nlines_out: 2\ntokens_in: 3\npieces_out: 0\n"
        "chars_decomposed: 0\nchars_passed_through: 0\n");
}
