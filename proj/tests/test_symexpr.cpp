#include <doctest.h>

#include "metaffine/error.hpp"
#include "metaffine/symexpr.hpp"

#include <cmath>
#include <random>

using namespace maf;

namespace {

const VarTable xy{"x0", "x1", "x2"};

Expr P(const char *s) { return parse(s, xy); }

Expr random_poly(std::mt19937_64 &rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 5);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> var(0, 2);
  if (depth == 0)
    return pick(rng) < 2 ? Expr(make_rational(coef(rng), 1 + std::abs(coef(rng))))
                         : Expr::symbol("x" + std::to_string(var(rng)));
  switch (pick(rng)) {
  case 0:
  case 1: return random_poly(rng, depth - 1) + random_poly(rng, depth - 1);
  case 2:
  case 3: return random_poly(rng, depth - 1) * random_poly(rng, depth - 1);
  case 4: return pow(random_poly(rng, depth - 1), 2);
  default: return random_poly(rng, depth - 1) - random_poly(rng, depth - 1);
  }
}

Point random_point(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 7);
  Point p;
  for (const char *v : {"x0", "x1", "x2"})
    p[v] = make_rational(num(rng), den(rng));
  return p;
}

} // namespace

TEST_CASE("parse: constants, products and canonical collapse") {
  CHECK(P("0").is_zero());
  const Expr e = P("x0^2 * sin(x1)");
  CHECK(e.kind() == NodeKind::Product);
  CHECK(e == pow(Expr::symbol("x0"), 2) * sin(Expr::symbol("x1")));
  const Expr a = parse("1/2*(a+a)", VarTable{"a"});
  CHECK(a == Expr::symbol("a"));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    Point p{{"a", make_rational(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 9))}};
    CHECK(evaluate(a, p) == p["a"]);
  }
}

TEST_CASE("parse errors carry offsets and identifiers") {
  try {
    (void)P("x0 + * x1");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.offset() == 5);
  }
  try {
    (void)P("x0 + y");
    FAIL("expected an unknown identifier");
  } catch (const UnknownIdentifierError &e) {
    CHECK(e.name() == "y");
    CHECK(e.offset() == 5);
  }
  CHECK_THROWS_AS((void)P("sin(x0"), ParseError);
  CHECK_THROWS_AS((void)P(""), ParseError);
}

TEST_CASE("diff: power rule, independence, finite-difference oracle") {
  CHECK(diff(P("x0^2"), "x0") == P("2*x0"));
  CHECK(diff(P("sin(x1)"), "x0").is_zero());
  const Expr f = P("exp(2*x0)*x1");
  const Expr df = diff(f, "x0");
  CHECK(df == P("2*exp(2*x0)*x1"));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double x0 = u(rng), x1 = u(rng) + 2.0;
    const double h = 1e-6;
    const double fd = (evaluate_float(f, {{"x0", x0 + h}, {"x1", x1}}) -
                       evaluate_float(f, {{"x0", x0 - h}, {"x1", x1}})) /
                      (2 * h);
    const double an = evaluate_float(df, {{"x0", x0}, {"x1", x1}});
    CHECK(std::abs(fd - an) <= 1e-8 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("is_zero verdicts") {
  const VarTable x{"x"};
  const auto pyth = is_zero(parse("sin(x)^2 + cos(x)^2 - 1", x));
  CHECK(pyth.kind == ZeroKind::ProbablyZero);
  CHECK(pyth.samples == 32);
  const auto ne = is_zero(P("x0 - x1"));
  REQUIRE(ne.kind == ZeroKind::Nonzero);
  CHECK(ne.witness.at("x0") == 1);
  CHECK(ne.witness.at("x1") == 2);
  CHECK(ne.exact_value == Rational(-1));
  const VarTable ab{"a", "b"};
  CHECK(is_zero(parse("(a+b)^2 - a^2 - 2*a*b - b^2", ab)).kind == ZeroKind::ProvenZero);
  ZeroTestOptions few;
  few.samples = 5;
  CHECK(is_zero(parse("sin(x)^2 + cos(x)^2 - 1", x), few).samples == 5);
}

TEST_CASE("is_zero: no admissible sample point is a domain error") {
  const VarTable x{"x"};
  CHECK_THROWS_AS(is_zero(parse("sqrt(-1 - x^2) - 1", x)), DomainError);
}

TEST_CASE("property: print/parse round trip and idempotent canonical form") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 60; ++i) {
    const Expr e = random_poly(rng, 4);
    const Expr back = P(to_string(e).c_str());
    CHECK_MESSAGE(back == e, to_string(e));
    CHECK(P(to_string(back).c_str()) == back);
  }
}

TEST_CASE("property: mixed partials commute structurally") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 40; ++i) {
    Expr e = random_poly(rng, 3);
    if (i % 3 == 0)
      e = e * sin(random_poly(rng, 1)) + exp(random_poly(rng, 1));
    CHECK(diff(diff(e, "x0"), "x1") == diff(diff(e, "x1"), "x0"));
    CHECK(diff(diff(e, "x2"), "x0") == diff(diff(e, "x0"), "x2"));
  }
}

TEST_CASE("property: exact evaluation is additive and multiplicative") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const Expr a = random_poly(rng, 3), b = random_poly(rng, 3);
    const Point p = random_point(rng);
    CHECK(evaluate(a + b, p) == evaluate(a, p) + evaluate(b, p));
    CHECK(evaluate(a * b, p) == evaluate(a, p) * evaluate(b, p));
  }
}

TEST_CASE("property: expansion preserves values and decides polynomial identities") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 30; ++i) {
    const Expr a = random_poly(rng, 3), b = random_poly(rng, 3);
    const Expr lhs = pow(a + b, 2);
    const Expr rhs = a * a + Expr(2) * a * b + b * b;
    CHECK(is_zero(lhs - rhs).kind == ZeroKind::ProvenZero);
    const Point p = random_point(rng);
    CHECK(evaluate(expand(lhs), p) == evaluate(lhs, p));
  }
}

TEST_CASE("rational functions: numerator clears denominators") {
  const Expr e = P("1/(x0 + 1) + 1/(x0 - 1) - 2*x0/(x0^2 - 1)");
  CHECK(is_zero(e).kind == ZeroKind::ProvenZero);
  const Expr f = P("1/(x0 + 1) - 1/(x0 + 2)");
  CHECK(is_zero(f).kind == ZeroKind::Nonzero);
}

TEST_CASE("derive with a custom rule and shared memo") {
  DerivationMemo memo;
  const DerivationRule shift = [](const std::string &s) -> std::optional<Expr> {
    if (s == "x0")
      return Expr::symbol("x1");
    return std::nullopt;
  };
  const Expr e = P("x0^3 + x0*x2");
  CHECK(derive(e, shift, memo) == P("3*x0^2*x1 + x1*x2"));
  CHECK(derive(e, shift, memo) == derive(e, shift));
}

TEST_CASE("VarTable roles") {
  VarTable v;
  v.add("q", VarRole::JetVariable);
  CHECK(v.contains("q"));
  CHECK_THROWS_AS(v.add("q", VarRole::Parameter), MismatchError);
  CHECK_THROWS(v.add("c0", VarRole::Ghost));
}
