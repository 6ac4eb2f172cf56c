#include <set>

#include "doctest.h"
#include "culturesim/action.hpp"
#include "oracles.hpp"

using namespace culturesim;

TEST_CASE("parse compact sub-action strings") {
  const auto s = parse_subaction("01-110-1");
  CHECK(s == make_subaction({0, 1, -1, 1, 0, -1}));
  CHECK(s[BodyPart::RightArm] == -1);
  CHECK(s[BodyPart::Hips] == -1);
  CHECK(parse_subaction("000000").is_neutral());
}

TEST_CASE("parse errors name the offending component") {
  try {
    parse_subaction("0");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.index() == 1);
  }
  try {
    parse_subaction("01x000");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.index() == 2);
  }
  CHECK_THROWS_AS(parse_subaction("0-0000"), ParseError);
  CHECK_THROWS_AS(parse_subaction("0000000"), ParseError);
  CHECK_THROWS_AS(parse_subaction(""), ParseError);
  CHECK_THROWS_AS(parse_subaction("*00000"), ParseError);
}

TEST_CASE("equality") {
  CHECK(subaction_equal(SubAction{}, SubAction{}));
  CHECK_FALSE(subaction_equal(make_subaction({0, 1, -1, 1, -1, 1}), make_subaction({0, 1, -1, 1, -1, -1})));
  for (const auto& x : all_subactions()) CHECK(subaction_equal(x, x));
}

TEST_CASE("all 729 sub-actions: codes, round trips and order") {
  const auto patterns = oracle::all_patterns();
  REQUIRE(patterns.size() == kSubActionCount);
  std::set<std::string> seen;
  for (std::size_t c = 0; c < kSubActionCount; ++c) {
    const auto& d = all_subactions()[c];
    CHECK(d.code() == c);
    CHECK(d == make_subaction(patterns[c]));
    CHECK(SubAction::from_code(d.code()) == d);
    const auto text = format_subaction(d);
    CHECK(parse_subaction(text) == d);
    seen.insert(text);
  }
  CHECK(seen.size() == kSubActionCount);
}

TEST_CASE("canonical order and symmetric partners") {
  CHECK(label(kCanonicalOrder[0]) == "HD");
  CHECK(label(kCanonicalOrder[1]) == "LA");
  CHECK(label(kCanonicalOrder[2]) == "RA");
  CHECK(label(kCanonicalOrder[3]) == "LL");
  CHECK(label(kCanonicalOrder[4]) == "RL");
  CHECK(label(kCanonicalOrder[5]) == "HP");
  CHECK(symmetric_partner(BodyPart::LeftArm) == BodyPart::RightArm);
  CHECK(symmetric_partner(BodyPart::RightLeg) == BodyPart::LeftLeg);
  CHECK_FALSE(symmetric_partner(BodyPart::Head).has_value());
  CHECK_FALSE(symmetric_partner(BodyPart::Hips).has_value());
}

TEST_CASE("make_subaction rejects non-trits") {
  CHECK_THROWS_AS(make_subaction({0, 0, 2, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("action chains require novel consecutive steps") {
  const auto a = parse_subaction("01-11-11");
  const auto b = parse_subaction("01-11-1-1");
  CHECK_THROWS_AS(ActionChain(std::vector<SubAction>{}), std::invalid_argument);
  CHECK_THROWS_AS(ActionChain(std::vector<SubAction>{a, a}), std::invalid_argument);
  ActionChain c(a);
  CHECK_FALSE(c.try_append(a));
  CHECK(c.size() == 1);
  CHECK(c.try_append(b));
  CHECK(c.try_append(a));
  CHECK(c.size() == 3);
  CHECK_FALSE(c.with_final(b).has_value());
  const auto replaced = c.with_final(SubAction{});
  REQUIRE(replaced.has_value());
  CHECK(replaced->back().is_neutral());
  CHECK(replaced->size() == 3);
}

TEST_CASE("chain text round trip and hashing") {
  const auto c = parse_chain("000000|01-11-11|01-11-1-1");
  CHECK(c.size() == 3);
  CHECK(format_chain(c) == "000000|01-11-11|01-11-1-1");
  CHECK(ActionChainHash{}(c) == ActionChainHash{}(parse_chain(format_chain(c))));
  CHECK_THROWS(parse_chain("000000|000000"));
}

TEST_CASE("templates") {
  const auto t = parse_template("*1-1**0");
  CHECK(format_template(t) == "*1-1**0");
  CHECK_FALSE(t.is_specified(0));
  CHECK(t[1] == 1);
  CHECK(t[2] == -1);
  CHECK_THROWS_AS(parse_template("******"), std::invalid_argument);
  CHECK_THROWS_AS(parse_template("**"), ParseError);
  CHECK_THROWS_AS(Template({3, 0, 0, 0, 0, 0}), std::invalid_argument);
}
