#include "doctest.h"

#include "g2lcc/lie.hpp"
#include "g2lcc/notation.hpp"
#include "test_support.hpp"

using namespace g2lcc;

TEST_CASE("parse_salamon builds the listed differentials") {
  SUBCASE("Iwasawa") {
    const LieAlgebra n = parse_salamon("(0,0,0,0,e14+e23,e13-e24)");
    CHECK(n.dim() == 6);
    CHECK(n.differentials()[4].approx_equal(KForm::monomial(6, {1, 4}) + KForm::monomial(6, {2, 3}), 0.0));
    CHECK(n.differentials()[5].approx_equal(KForm::monomial(6, {1, 3}) - KForm::monomial(6, {2, 4}), 0.0));
    for (int k = 0; k < 4; ++k) CHECK(n.differentials()[k].is_zero(0.0));
  }
  SUBCASE("solvable q") {
    const LieAlgebra q = parse_salamon("(e37,e47,2e17,2e27,e14+e23,e13-e24,0)");
    CHECK(q.dim() == 7);
    CHECK(q.differentials()[2].approx_equal(2.0 * KForm::monomial(7, {1, 7}), 0.0));
    CHECK(q.differentials()[6].is_zero(0.0));
  }
  SUBCASE("abelian") {
    const LieAlgebra a = parse_salamon("(0,0,0)");
    CHECK(a.dim() == 3);
    for (const auto& f : a.differentials()) CHECK(f.is_zero(0.0));
  }
  SUBCASE("out-of-order labels carry a sign") {
    const LieAlgebra s = parse_salamon("(e23,e31,e12)");
    CHECK(s.differentials()[1].approx_equal(-KForm::monomial(3, {1, 3}), 0.0));
    CHECK(format_salamon(s) == "(e23,-e13,e12)");
  }
  SUBCASE("rational and decimal coefficients, whitespace") {
    const LieAlgebra a = parse_salamon("( 0 , 1/2e12 - 0.25e13 , 0 )");
    CHECK(a.differentials()[1].component({1, 2}) == 0.5);
    CHECK(a.differentials()[1].component({1, 3}) == -0.25);
    CHECK(format_salamon(a) == "(0,1/2e12-1/4e13,0)");
  }
}

TEST_CASE("canonical text round-trips byte for byte") {
  const char* canonical[] = {
      "(0,0,0,0,e14+e23,e13-e24)",
      "(0,0,0,0,e13-e24,e14+e23)",
      "(e37,e47,-e17,-e27,e14+e23,e13-e24,0)",
      "(e37,e47,2e17,2e27,e14+e23,e13-e24,0)",
      "(e23,-e13,e12,e56,-e46,e45)",
      "(e23,-e13,e12,e56,-e46,e45,0)",
      "(0,0,0,0,e14+e23,e13-e24,0)",
      "(0,0,0,0,0,0,0)",
      "(0,0,0)",
      "(0,0,5/7e12-0.0962250448649376e13)",
  };
  for (const char* text : canonical) {
    CAPTURE(text);
    CHECK(format_salamon(parse_salamon(text)) == text);
  }
}

TEST_CASE("print then parse is the identity on random forms") {
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 6, k = 1 + trial % 3;
    KForm f(n, k);
    for (int p = 0; p < f.size(); ++p) {
      const int pick = static_cast<int>(testing::uniform(0, 4));
      if (pick == 0) f.coeff(p) = std::round(testing::uniform(-5, 5));
      else if (pick == 1) f.coeff(p) = std::round(testing::uniform(-50, 50)) / 7.0;
      else if (pick == 2) f.coeff(p) = testing::uniform(-3, 3);
    }
    const std::string text = format_form(f);
    const KForm back = parse_form(text, n, k);
    CHECK(back.approx_equal(f, 0.0));
    CHECK(format_form(back) == text);
  }
}

TEST_CASE("malformed input reports a position") {
  auto column_of = [](const char* text, int dim = 0) -> std::size_t {
    try {
      parse_salamon(text, dim);
    } catch (const ParseError& e) {
      return e.column();
    }
    return 0;
  };
  CHECK(column_of("(e12a,0)") == 5);
  CHECK(column_of("(e11,0)") == 4);    // repeated index
  CHECK(column_of("(e13,0)") == 4);    // label beyond the entry count
  CHECK(column_of("0,0)") == 1);
  CHECK(column_of("(0,0") == 5);
  CHECK(column_of("(e12 e13,0,0)") == 6);
  CHECK(column_of("(1/0e12,0)") == 4);
  CHECK(column_of("(e1,0)") == 2);     // a 1-form where a 2-form belongs
  CHECK(column_of("(0,0,0)", 4) > 0);  // entry count differs from declared
  CHECK_THROWS_AS(parse_salamon("(0,0,0)", 4), ParseError);
  CHECK_THROWS_AS(parse_form("e12+", 3), ParseError);
  CHECK_THROWS_AS(parse_form("2e3", 2), ParseError);
  CHECK_THROWS_AS(parse_form("e0", 2), ParseError);
}

TEST_CASE("form expressions") {
  const KForm gamma = parse_form("5/7e12-3/7e14+3/7e23-1/7e34-e56", 7);
  CHECK(gamma.degree() == 2);
  CHECK(gamma.component({1, 2}) == doctest::Approx(5.0 / 7.0));
  CHECK(gamma.component({5, 6}) == -1.0);
  CHECK(parse_form("0", 7, 3).degree() == 3);
  CHECK(parse_form("-e7", 7).approx_equal(-KForm::monomial(7, {7}), 0.0));
  CHECK_THROWS_AS(parse_form("e12+e3", 4), ParseError);
}

TEST_CASE("scalars") {
  CHECK(parse_scalar("-3/7") == doctest::Approx(-3.0 / 7.0));
  CHECK(parse_scalar("0.7071067811865476") == doctest::Approx(std::sqrt(0.5)));
  CHECK(parse_scalar("0") == 0.0);
  CHECK_THROWS_AS(parse_scalar("abc"), ParseError);
  CHECK_THROWS_AS(parse_scalar("1e5"), ParseError);

  FormatOptions twelve{12, 1e-12};
  CHECK(format_scalar(-1.0000000000001, twelve) == "-1");
  CHECK(format_scalar(5.0 / 7.0, twelve) == "0.714285714286");
  CHECK(format_scalar(1.5e-7, twelve).find('e') == std::string::npos);
  CHECK(format_scalar(2.5e13, twelve).find('e') == std::string::npos);
  CHECK(format_form(parse_form("-e7", 7) * 1.0000000000001, twelve) == "-e7");
}
