#include "doctest.h"
#include "radical/utf8.hpp"

using namespace radical;

TEST_CASE("decode and encode agree across widths") {
  const std::string s = "aé明𠄌";
  const auto cps = utf8::decode(s);
  REQUIRE(cps.size() == 4);
  CHECK(cps[0] == U'a');
  CHECK(cps[1] == 0xE9);
  CHECK(cps[2] == 0x660E);
  CHECK(cps[3] == 0x2010C);
  CHECK(utf8::encode(cps) == s);
  CHECK(utf8::length(s) == 4);
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(utf8::decode("\xE6\x98"), utf8::DecodeError);
  CHECK_THROWS_AS(utf8::decode("\xC0\xAF"), utf8::DecodeError);      // overlong
  CHECK_THROWS_AS(utf8::decode("\xED\xA0\x80"), utf8::DecodeError);  // surrogate
  CHECK_THROWS_AS(utf8::decode("\xFF"), utf8::DecodeError);
  CHECK_THROWS_AS(utf8::decode("a\x80"), utf8::DecodeError);
}

TEST_CASE("single") {
  CHECK(utf8::single("明") == U'明');
  CHECK_FALSE(utf8::single("明月"));
  CHECK_FALSE(utf8::single(""));
  CHECK_FALSE(utf8::single("\xE6"));
}

TEST_CASE("split_whitespace drops empty fields") {
  const auto v = utf8::split_whitespace("  a\tb  c ");
  REQUIRE(v.size() == 3);
  CHECK(v[0] == "a");
  CHECK(v[2] == "c");
  CHECK(utf8::split_whitespace("   ").empty());
}
