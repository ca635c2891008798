#include "doctest.h"
#include "padyn/models.hpp"
#include "padyn/parser.hpp"

using namespace padyn;

namespace {

Model p1(std::uint64_t p, const char* num, const char* den = "1") {
  return Model::p1(p, parse_polynomial(num, {"x"}, p), parse_polynomial(den, {"x"}, p));
}

Model affine(std::uint64_t p, std::vector<std::string> vars, std::vector<const char*> rel,
             std::vector<const char*> map) {
  std::vector<Polynomial> r, m;
  for (auto s : rel) r.push_back(parse_polynomial(s, vars, p));
  for (auto s : map) m.push_back(parse_polynomial(s, vars, p));
  return Model::affine(p, vars, r, m);
}

Model node() { return affine(3, {"x", "y"}, {"x*y - 3"}, {"y", "x"}); }

}  // namespace

TEST_CASE("resultant of binary forms") {
  using R = std::vector<Rational>;
  CHECK(abs(resultant(R{0, 0, 1}, R{1, 0, 0})) == 1);   // X^2, Z^2
  CHECK(abs(resultant(R{-1, 0, 1}, R{1, 0, 0})) == 1);  // X^2 - Z^2, Z^2
  CHECK(abs(resultant(R{0, 0, 3}, R{1, 0, 0})) == 9);   // 3X^2, Z^2
  CHECK(resultant(R{-1, 1}, R{-1, 1}) == 0);
}

TEST_CASE("check_extends") {
  auto good = check_extends(p1(3, "x^2 - 4*x + 3"), 6);
  CHECK(good.status == ExtensionStatus::GoodReductionP1);
  CHECK(good.resultant_valuation == 0);

  auto bad = check_extends(p1(3, "x + x^2 + 3*x^3"), 6);
  CHECK(bad.status == ExtensionStatus::Rejected);
  CHECK(bad.witness.find("[1:0]") != std::string::npos);

  auto swap = check_extends(node(), 5);
  CHECK(swap.status == ExtensionStatus::AffineVerified);
  CHECK(swap.mode == VerificationMode::Exact);

  // x -> x + 1 does not preserve x*y = 3
  auto off = check_extends(affine(3, {"x", "y"}, {"x*y - 3"}, {"x + 1", "y"}), 4);
  CHECK(off.status == ExtensionStatus::Rejected);
  CHECK_FALSE(off.witness.empty());
}

TEST_CASE("canonical P^1 points") {
  const ModRing r(3, 4);
  const Point a = canonical_p1(r, 2, 4);  // (2:4) = (2/4 : 1)
  CHECK(a.chart == Chart::Affine);
  CHECK(r.mul(a.coords[0], 4) == 2);
  const Point b = canonical_p1(r, 1, 3);
  CHECK(b.chart == Chart::Infinity);
  CHECK(b.coords[0] == 3);
  CHECK(canonical_p1(r, 1, b.coords[0]) == b);
  CHECK_THROWS_AS(canonical_p1(r, 3, 9), Error);
}

TEST_CASE("reduce_point") {
  const ModRing r(3, 4), f1(3, 1);
  CHECK(reduce(Point{Chart::Affine, {0}}, r, f1) == Point{Chart::Affine, {0}});
  CHECK(reduce(Point{Chart::Affine, {1, 3}}, r, f1).coords == std::vector<std::uint64_t>{1, 0});
  const Point inf_chart = canonical_p1(r, 1, 3);
  CHECK(reduce(inf_chart, r, f1) == Point{Chart::Infinity, {0}});
  CHECK(describe(reduce(inf_chart, r, f1), ModelKind::P1) == "inf");
}

TEST_CASE("special fiber counts and cotangent dimensions") {
  CHECK(enumerate_special_fiber(p1(3, "x^2")).size() == 4);
  CHECK(enumerate_special_fiber(p1(7, "x^2")).size() == 8);
  const auto n = node();
  const auto pts = enumerate_special_fiber(n);
  CHECK(pts.size() == 5);
  for (const auto& sp : pts) {
    const bool origin = sp.point.coords == std::vector<std::uint64_t>{0, 0};
    CHECK(sp.cotangent_dimension == (origin ? 2 : 1));
  }
  CHECK(cotangent_dim(n, Point{Chart::Affine, {1, 0}}) == 1);
  CHECK(cotangent_dim(p1(3, "x^2"), Point{Chart::Affine, {0}}) == 1);
  CHECK(d_prime(n) == 2);
  CHECK(d_prime(p1(5, "x^3 + 1")) == 1);
  CHECK(d_prime(affine(3, {"x", "y"}, {"y - x^2"}, {"x", "y"})) == 1);
}

TEST_CASE("no Z_3 point of the node model reduces to the node") {
  const auto n = node();
  const ModRing r(3, 5), f1(3, 1);
  const auto pts = enumerate_points(n, r);
  CHECK_FALSE(pts.empty());
  for (const auto& pt : pts) CHECK(reduce(pt, r, f1).coords != std::vector<std::uint64_t>{0, 0});
}

TEST_CASE("reduction commutes with the map") {
  const Model m = Model::p1(5, parse_polynomial("x^2 + 2", {"x"}, 5), parse_polynomial("x + 1", {"x"}, 5));
  REQUIRE(check_extends(m, 3).ok());
  const ModRing r(5, 3), f1(5, 1);
  const auto ev = m.evaluator(r), ev1 = m.evaluator(f1);
  for (const auto& pt : enumerate_points(m, r)) {
    CHECK(reduce(ev.apply(pt), r, f1) == ev1.apply(reduce(pt, r, f1)));
    CHECK(canonical_p1(r, pt.chart == Chart::Affine ? pt.coords[0] : 1, pt.chart == Chart::Affine ? 1 : pt.coords[0]) ==
          pt);
  }
}

TEST_CASE("good reduction means no common zero mod p") {
  const Model m = p1(3, "x^2 - 4*x + 3", "x^2 + 1");
  const auto ext = check_extends(m, 4);
  const ModRing f1(3, 1);
  bool common = false;
  for (std::uint64_t x = 0; x < 3; ++x) {
    const auto a = DenseModPoly::from(m.numerator(), f1).eval(f1, x);
    const auto b = DenseModPoly::from(m.denominator(), f1).eval(f1, x);
    common = common || (a == 0 && b == 0);
  }
  const bool top = f1.reduce(m.numerator().back()) == 0 && f1.reduce(m.denominator().back()) == 0;
  CHECK(ext.ok() == !(common || top));
}

TEST_CASE("model construction errors") {
  CHECK_THROWS_AS(p1(4, "x^2"), Error);
  CHECK_THROWS_AS(p1(3, "5"), Error);
  CHECK_THROWS_AS(affine(3, {"x", "y"}, {}, {"y"}), Error);
}
