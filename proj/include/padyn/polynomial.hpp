#pragma once

// Multivariate polynomials with exact rational coefficients, plus
// residue-ring evaluation and a few dense univariate helpers.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "padyn/padic.hpp"

namespace padyn {

using Monomial = std::vector<std::uint32_t>;

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> variables);

  static Polynomial constant(std::vector<std::string> variables, const Rational& c);
  static Polynomial variable(std::vector<std::string> variables, std::size_t index);

  const std::vector<std::string>& variables() const noexcept { return vars_; }
  std::size_t arity() const noexcept { return vars_.size(); }
  const std::map<Monomial, Rational>& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  int total_degree() const;  // -1 for the zero polynomial
  int degree_in(std::size_t var) const;
  Rational coefficient(const Monomial& m) const;
  void add_term(const Monomial& m, const Rational& c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial pow(unsigned e) const;
  Polynomial scaled(const Rational& c) const;

  Polynomial derivative(std::size_t var) const;
  /// Substitutes variable i by subs[i]; all subs share one variable list.
  Polynomial compose(const std::vector<Polynomial>& subs) const;

  Rational eval(std::span<const Rational> point) const;
  std::uint64_t eval_mod(const ModRing& ring, std::span<const std::uint64_t> point) const;

  /// True when every coefficient has a p-unit denominator.
  bool is_p_integral(std::uint64_t p) const;

  /// Dense coefficients, index = degree. Requires arity 1.
  std::vector<Rational> dense() const;
  static Polynomial from_dense(const std::string& var, const std::vector<Rational>& coeffs);

  std::string to_string() const;

  bool operator==(const Polynomial& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

 private:
  void check_same_vars(const Polynomial& o) const;

  std::vector<std::string> vars_;
  std::map<Monomial, Rational> terms_;
};

/// Coefficients reduced into a residue ring, for fast repeated evaluation.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  CompiledPolynomial(const Polynomial& poly, const ModRing& ring);

  std::uint64_t eval(std::span<const std::uint64_t> point) const;

 private:
  ModRing ring_{2, 1};
  std::vector<std::pair<Monomial, std::uint64_t>> terms_;
};

/// Dense univariate polynomial over Z/p^k, index = degree.
struct DenseModPoly {
  std::vector<std::uint64_t> coeffs;

  std::uint64_t eval(const ModRing& ring, std::uint64_t x) const;
  std::uint64_t eval_derivative(const ModRing& ring, std::uint64_t x) const;
  static DenseModPoly from(const std::vector<Rational>& c, const ModRing& ring);
};

namespace upoly {

using Dense = std::vector<Rational>;

void trim(Dense& a);
int degree(const Dense& a);
Dense derivative(const Dense& a);
Dense mul(const Dense& a, const Dense& b);
Dense sub(const Dense& a, const Dense& b);
/// Quotient and remainder; b must be nonzero.
std::pair<Dense, Dense> divmod(const Dense& a, const Dense& b);
Dense gcd(const Dense& a, const Dense& b);  // monic
/// Product of the distinct irreducible factors (a / gcd(a, a')).
Dense squarefree_part(const Dense& a);
Rational eval(const Dense& a, const Rational& x);
/// Composition a(b(x)).
Dense compose(const Dense& a, const Dense& b);

}  // namespace upoly

}  // namespace padyn
