#include <algorithm>
#include <cstdio>
#include <thread>

#include "doctest.h"
#include "radical/decomposer.hpp"
#include "radical/utf8.hpp"
#include "test_util.hpp"

using namespace radical;
using radical::testing::join;
using radical::testing::load_table;
using radical::testing::table_from;

namespace {

DecompositionConfig level(unsigned l, bool keep_idc = true) {
  DecompositionConfig cfg;
  cfg.level = l;
  cfg.keep_idc_operators = keep_idc;
  return cfg;
}

std::string pieces(const DecompositionTable& t, char32_t c, unsigned l,
                   bool keep_idc = true) {
  return join(t.decompose(c, level(l, keep_idc)));
}

std::vector<char32_t> glyphs_of(const std::string& fixture) {
  std::vector<char32_t> out;
  for (const auto& e : ids::parse_ids_file(
           testing::read_file(testing::data_path(fixture))))
    out.push_back(e.codepoint);
  return out;
}

}  // namespace

TEST_CASE("build_table") {
  SUBCASE("atom and operator entries") {
    const auto t = table_from("U+4E00\t一\t一\nU+660E\t明\t⿰日月\n");
    CHECK(t.size() == 2);
    CHECK(t.is_atom(U'一'));
    CHECK_FALSE(t.is_atom(U'明'));
    REQUIRE(t.find(U'明'));
    CHECK(t.find(U'明')->serialize() == "⿰日月");
    CHECK(t.mentions(U'日'));
    CHECK_FALSE(t.contains(U'日'));
  }
  SUBCASE("empty table: everything is an atom") {
    const auto t = DecompositionTable::build({});
    CHECK(t.size() == 0);
    CHECK(t.is_atom(U'明'));
    CHECK(pieces(t, U'明', 3) == "明");
  }
  SUBCASE("variant preference is applied") {
    const auto entries =
        ids::parse_ids_file("U+4E43\t乃\t⿻𠄌乀[GTK]\t⿻丿𠄎[J]\n");
    const auto g = DecompositionTable::build(entries);
    CHECK(g.find(U'乃')->serialize() == "⿻𠄌乀");
    const auto j = DecompositionTable::build(entries, ids::parse_tag_list("J"));
    CHECK(j.find(U'乃')->serialize() == "⿻丿𠄎");
  }
  SUBCASE("duplicate glyphs") {
    auto entries = ids::parse_ids_file("U+4E00\t一\t一\n");
    entries.push_back(entries.front());
    CHECK_THROWS_AS(DecompositionTable::build(entries), std::invalid_argument);
  }
}

TEST_CASE("is_atom") {
  const auto t = table_from(testing::kMingTian);
  CHECK(t.is_atom(U'日'));
  CHECK_FALSE(t.is_atom(U'明'));
  CHECK(t.is_atom(U'A'));
  CHECK(t.is_atom(U'，'));
}

TEST_CASE("decompose_char") {
  const auto t = table_from(testing::kMingTian);
  CHECK(pieces(t, U'明', 0) == "明");
  CHECK(pieces(t, U'明', 1) == "⿰ 日 月");
  CHECK(pieces(t, U'明', 1, false) == "日 月");
  CHECK(pieces(t, U'明', 5) == "⿰ 日 月");
  CHECK(pieces(t, U'x', 3) == "x");
}

TEST_CASE("entity references are atomic pieces") {
  const auto t = table_from("U+4E00\t一\t一\nU+4E0D\t不\t⿱一&CDP-8B5E;\n");
  CHECK(pieces(t, U'不', 1) == "⿱ 一 &CDP-8B5E;");
  CHECK(pieces(t, U'不', 4) == "⿱ 一 &CDP-8B5E;");
}

TEST_CASE("cycles terminate and treat the recurring character as an atom") {
  // 甲 -> ⿰乙丙, 乙 -> ⿱甲丁: 甲 recurs inside its own expansion.
  const auto t = table_from(
      "U+7532\t甲\t⿰乙丙\n"
      "U+4E59\t乙\t⿱甲丁\n"
      "U+5B50\t子\t⿰子一\n");
  CHECK(pieces(t, U'甲', 1) == "⿰ 乙 丙");
  CHECK(pieces(t, U'甲', 2) == "⿰ ⿱ 甲 丁 丙");
  CHECK(pieces(t, U'甲', 16) == "⿰ ⿱ 甲 丁 丙");
  CHECK(pieces(t, U'子', 3) == "⿰ 子 一");
  DecompositionConfig cfg;
  const auto fp = t.decompose_to_fixpoint(U'甲', cfg);
  CHECK(fp.converged);
  CHECK(fp.levels_used == 2);
}

TEST_CASE("劍 and 鋒 against the small fixture dictionary") {
  const auto t = load_table("sword_ids.txt");
  // Frozen from tests/oracle/generate.py (whole-sequence substitution passes).
  CHECK(pieces(t, U'劍', 1) == "⿰ 僉 刂");
  CHECK(pieces(t, U'劍', 2) == "⿰ ⿳ 亼 吅 从 刂");
  CHECK(pieces(t, U'劍', 3) == "⿰ ⿳ ⿱ 人 一 ⿰ 口 口 ⿰ 人 人 刂");
  CHECK(pieces(t, U'鋒', 1) == "⿰ 金 夆");
  CHECK(pieces(t, U'鋒', 2) == "⿰ ⿱ 人 ⿻ 王 丷 ⿱ 夂 丰");
  CHECK(pieces(t, U'鋒', 3) == "⿰ ⿱ 人 ⿻ ⿱ 一 土 丷 ⿱ 夂 ⿻ 三 丨");

  const auto l2 = t.decompose(U'劍', level(2));
  CHECK(std::count(l2.begin(), l2.end(), "从") == 1);
  const auto f2 = t.decompose(U'鋒', level(2));
  CHECK(std::count(f2.begin(), f2.end(), "王") == 1);
}

TEST_CASE("decompose_to_fixpoint") {
  DecompositionConfig cfg;
  SUBCASE("atom") {
    const auto t = table_from(testing::kMingTian);
    const auto r = t.decompose_to_fixpoint(U'日', cfg);
    CHECK(join(r.pieces) == "日");
    CHECK(r.levels_used == 0);
    CHECK(r.converged);
  }
  SUBCASE("one level") {
    const auto t = table_from(testing::kMingTian);
    const auto r = t.decompose_to_fixpoint(U'明', cfg);
    CHECK(join(r.pieces) == "⿰ 日 月");
    CHECK(r.levels_used == 1);
  }
  SUBCASE("劍 and 鋒") {
    const auto t = load_table("sword_ids.txt");
    const auto jian = t.decompose_to_fixpoint(U'劍', cfg);
    CHECK(jian.levels_used == 3);
    CHECK(jian.converged);
    const auto feng = t.decompose_to_fixpoint(U'鋒', cfg);
    CHECK(feng.levels_used == 5);
    CHECK(join(feng.pieces) ==
          "⿰ ⿱ 人 ⿻ ⿱ 一 ⿱ 十 一 丷 ⿱ 夂 ⿻ ⿱ 一 ⿱ 一 一 丨");
  }
  SUBCASE("iteration cap is reported, not fatal") {
    // A chain deeper than the cap.
    std::string text;
    const std::u32string chain = U"甲乙丙丁戊己庚辛";
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "U+%04X\t", static_cast<unsigned>(chain[i]));
      text += buf + utf8::encode(chain[i]) + "\t⿰" + utf8::encode(chain[i + 1]) + "一\n";
    }
    const auto t = table_from(text);
    DecompositionConfig small;
    small.max_fixpoint_iterations = 3;
    const auto r = t.decompose_to_fixpoint(U'甲', small);
    CHECK_FALSE(r.converged);
    CHECK(r.levels_used == 3);
    const auto full = t.decompose_to_fixpoint(U'甲', cfg);
    CHECK(full.converged);
    CHECK(full.levels_used == 7);
  }
}

TEST_CASE("config validation") {
  DecompositionConfig cfg;
  cfg.level = 17;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.level = 16;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_fixpoint_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("property: level laws over every fixture character") {
  const auto t = load_table("fixture_ids.txt");
  for (char32_t c : glyphs_of("fixture_ids.txt")) {
    for (bool keep : {true, false}) {
      CAPTURE(utf8::encode(c));
      CHECK(t.decompose(c, level(0, keep)) == PieceSequence{utf8::encode(c)});
      std::size_t previous = 1;
      for (unsigned l = 1; l <= 5; ++l) {
        const auto seq = t.decompose(c, level(l, keep));
        CHECK(seq.size() >= previous);
        previous = seq.size();
      }
      // Level composition: one more level on each level-1 piece.
      PieceSequence composed;
      for (const auto& p : t.decompose(c, level(1, keep))) {
        const auto cp = utf8::single(p);
        if (cp && !ids::is_idc(*cp))
          t.decompose_into(*cp, level(1, keep), composed);
        else
          composed.push_back(p);
      }
      CHECK(composed == t.decompose(c, level(2, keep)));

      DecompositionConfig cfg = level(0, keep);
      const auto fp = t.decompose_to_fixpoint(c, cfg);
      CHECK(fp.converged);
      CHECK(fp.levels_used <= 16);
      for (unsigned extra = 0; extra <= 2; ++extra)
        CHECK(t.decompose(c, level(fp.levels_used + extra, keep)) == fp.pieces);
    }
  }
}

TEST_CASE("decomposition is deterministic across threads") {
  const auto t = load_table("fixture_ids.txt");
  const auto glyphs = glyphs_of("fixture_ids.txt");
  auto run = [&] {
    std::vector<PieceSequence> out;
    for (char32_t c : glyphs) out.push_back(t.decompose(c, level(3)));
    return out;
  };
  const auto reference = run();
  std::vector<std::vector<PieceSequence>> results(4);
  std::vector<std::thread> pool;
  for (auto& r : results) pool.emplace_back([&r, &run] { r = run(); });
  for (auto& th : pool) th.join();
  for (const auto& r : results) CHECK(r == reference);
}
