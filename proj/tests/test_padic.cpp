#include <random>

#include "doctest.h"
#include "padyn/hensel.hpp"
#include "padyn/linalg.hpp"
#include "padyn/padic.hpp"
#include "padyn/parser.hpp"

using namespace padyn;

namespace {

Polynomial poly(const char* s, std::vector<std::string> vars = {"x"}, std::uint64_t p = 3) {
  return parse_polynomial(s, vars, p);
}

}  // namespace

TEST_CASE("valuation of residues") {
  CHECK(valuation(PAdicApprox(3, 5, 12)).value == 1);
  CHECK(valuation(PAdicApprox(3, 5, 0)).at_least_k());
  CHECK(valuation(PAdicApprox(2, 4, 8)).value == 3);
  CHECK(valuation(PAdicApprox(3, 5, 0)).to_string() != "");
}

TEST_CASE("invert_unit") {
  CHECK(invert_unit(PAdicApprox(3, 3, 2)).value() == 14);
  CHECK(invert_unit(PAdicApprox(5, 2, 1)).value() == 1);
  CHECK_THROWS_AS(invert_unit(PAdicApprox(3, 3, 3)), Error);
  try {
    invert_unit(PAdicApprox(3, 3, 3));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAUnit);
  }
}

TEST_CASE("mismatched rings are rejected") {
  const PAdicApprox a(3, 4, 1), b(3, 5, 1), c(5, 4, 1);
  CHECK_THROWS_AS(a + b, Error);
  CHECK_THROWS_AS(a * c, Error);
  CHECK_THROWS_AS(PAdicApprox(3, 2, 9), Error);
  CHECK_THROWS_AS(PAdicApprox(4, 2, 1), Error);
}

TEST_CASE("rational residues") {
  const auto a = PAdicApprox::from_rational(3, 4, Rational(-29, 16));
  CHECK((a * PAdicApprox::from_integer(3, 4, 16)).value() == ModRing(3, 4).reduce_signed(-29));
  CHECK_THROWS_AS(PAdicApprox::from_rational(3, 4, Rational(1, 3)), Error);
  CHECK(vp(Rational(4, 3), 3) == -1);
  CHECK_FALSE(vp(Rational(0), 3).has_value());
}

TEST_CASE("ring laws on random triples") {
  std::mt19937_64 rng(7);
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 101u}) {
    for (int k : {1, 2, 5, 8}) {
      const ModRing r(p, k);
      std::uniform_int_distribution<std::uint64_t> d(0, r.modulus() - 1);
      for (int i = 0; i < 200; ++i) {
        const PAdicApprox a(p, k, d(rng)), b(p, k, d(rng)), c(p, k, d(rng));
        CHECK(((a + b) + c) == (a + (b + c)));
        CHECK((a * (b + c)) == (a * b + a * c));
        CHECK((a - a).value() == 0);
        CHECK((a * b).value() < r.modulus());
        const auto va = valuation(a).value, vb = valuation(b).value;
        if (va && vb && *va + *vb < k) CHECK(valuation(a * b).value == *va + *vb);
      }
    }
  }
}

TEST_CASE("rational reconstruction") {
  const ModRing r(3, 8);
  for (const Rational q : {Rational(-1, 4), Rational(-7, 4), Rational(5, 4), Rational(0), Rational(17)}) {
    auto got = rational_reconstruct(r, r.reduce(q));
    REQUIRE(got);
    CHECK(*got == q);
  }
}

TEST_CASE("hensel_refine") {
  CHECK(hensel_refine(poly("x^2 - 7"), PAdicApprox(3, 4, 1)).value() == 13);
  CHECK(hensel_refine(poly("x^2 - x", {"x"}, 5), PAdicApprox(5, 4, 0)).value() == 0);
  try {
    hensel_refine(poly("x^2 - 2", {"x"}, 5), PAdicApprox(5, 4, 1));
    FAIL("expected PreconditionViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolated);
  }
}

TEST_CASE("hensel_refine is idempotent and stable under precision increase") {
  const auto f = poly("x^2 - 7");
  const auto a = hensel_refine(f, PAdicApprox(3, 4, 1));
  CHECK(hensel_refine(f, a) == a);
  const auto b = hensel_refine(f, PAdicApprox(3, 6, 1));
  CHECK(b.value() % 81 == a.value());
}

TEST_CASE("newton_refine_system") {
  const std::vector<std::string> xy{"x", "y"};
  auto sys = [&](std::initializer_list<const char*> fs) {
    std::vector<Polynomial> out;
    for (auto f : fs) out.push_back(poly(f, xy));
    return out;
  };
  auto v = newton_refine_system(sys({"x - 1", "y - 2"}), {PAdicApprox(3, 4, 1), PAdicApprox(3, 4, 2)});
  CHECK(v[0].value() == 1);
  CHECK(v[1].value() == 2);
  v = newton_refine_system(sys({"x*y - 3", "x - 1"}), {PAdicApprox(3, 4, 1), PAdicApprox(3, 4, 0)});
  CHECK(v[0].value() == 1);
  CHECK(v[1].value() == 3);
  try {
    newton_refine_system(sys({"x^2 - 3", "x - x"}), {PAdicApprox(3, 4, 0), PAdicApprox(3, 4, 0)});
    FAIL("expected SingularJacobian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularJacobian);
  }
}

TEST_CASE("linear algebra mod p") {
  const ModRing r(5, 1);
  CHECK(rank_mod_p({{1, 2}, {2, 4}}, 5) == 1);
  CHECK(nullspace_mod_p({{1, 2}}, 5).size() == 1);
  const Matrix m{{2, 1}, {1, 1}};
  CHECK(mat_mul(r, m, inverse_mod(m, r)) == identity_matrix(2));
  CHECK(matrix_order({{2}}, 5) == 4);
  CHECK(matrix_order({{0, 1}, {1, 0}}, 3) == 2);
  CHECK_THROWS_AS(matrix_order({{0}}, 3), Error);
  // (3) inside Z/27 has index 3; (9, 3) in (Z/27)^2 has log size 2 + 1
  CHECK(submodule_log_size({{3}}, ModRing(3, 3)) == 2);
  CHECK(submodule_log_size({{9, 0}, {0, 3}}, ModRing(3, 3)) == 3);
}
