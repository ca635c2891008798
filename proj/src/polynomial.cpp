#include "padyn/polynomial.hpp"

#include <algorithm>
#include <numeric>

namespace padyn {

Polynomial::Polynomial(std::vector<std::string> variables) : vars_(std::move(variables)) {}

Polynomial Polynomial::constant(std::vector<std::string> variables, const Rational& c) {
  Polynomial p(std::move(variables));
  p.add_term(Monomial(p.arity(), 0), c);
  return p;
}

Polynomial Polynomial::variable(std::vector<std::string> variables, std::size_t index) {
  Polynomial p(std::move(variables));
  Monomial m(p.arity(), 0);
  m.at(index) = 1;
  p.add_term(m, 1);
  return p;
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_)
    d = std::max(d, static_cast<int>(std::accumulate(m.begin(), m.end(), 0u)));
  return d;
}

int Polynomial::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m[var]));
  return d;
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.size() != vars_.size()) throw Error(ErrorCode::InvalidArgument, "monomial arity mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_same_vars(const Polynomial& o) const {
  if (vars_ != o.vars_) throw Error(ErrorCode::InvalidArgument, "polynomials over different variables");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  check_same_vars(o);
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const { return scaled(-1); }

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial r(vars_);
  if (c == 0) return r;
  for (const auto& [m, a] : terms_) r.terms_.emplace(m, a * c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_same_vars(o);
  Polynomial r(vars_);
  Monomial prod(vars_.size());
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) {
      for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = m1[i] + m2[i];
      r.add_term(prod, c1 * c2);
    }
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(vars_, 1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  Polynomial r(vars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    r.add_term(d, c * m[var]);
  }
  return r;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& subs) const {
  if (subs.size() != vars_.size()) throw Error(ErrorCode::InvalidArgument, "composition arity mismatch");
  if (subs.empty()) return *this;
  const auto& out_vars = subs.front().variables();
  Polynomial r(out_vars);
  // cache powers per variable
  std::vector<std::vector<Polynomial>> powers(vars_.size());
  for (const auto& [m, c] : terms_) {
    Polynomial term = constant(out_vars, c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(constant(out_vars, 1));
      while (cache.size() <= m[i]) cache.push_back(cache.back() * subs[i]);
      if (m[i] > 0) term = term * cache[m[i]];
    }
    r = r + term;
  }
  return r;
}

Rational Polynomial::eval(std::span<const Rational> point) const {
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::uint32_t e = 0; e < m[i]; ++e) t *= point[i];
    sum += t;
  }
  return sum;
}

std::uint64_t Polynomial::eval_mod(const ModRing& ring, std::span<const std::uint64_t> point) const {
  return CompiledPolynomial(*this, ring).eval(point);
}

bool Polynomial::is_p_integral(std::uint64_t p) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [p](const auto& t) { return denominator(t.second) % p != 0; });
}

std::vector<Rational> Polynomial::dense() const {
  if (vars_.size() != 1) throw Error(ErrorCode::InvalidArgument, "dense() needs a univariate polynomial");
  std::vector<Rational> out(std::max(total_degree(), 0) + 1, Rational(0));
  for (const auto& [m, c] : terms_) out[m[0]] = c;
  return out;
}

Polynomial Polynomial::from_dense(const std::string& var, const std::vector<Rational>& coeffs) {
  Polynomial p({var});
  for (std::size_t i = 0; i < coeffs.size(); ++i) p.add_term({static_cast<std::uint32_t>(i)}, coeffs[i]);
  return p;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Monomial, Rational>> order(terms_.begin(), terms_.end());
  auto deg = [](const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0u); };
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    if (deg(a.first) != deg(b.first)) return deg(a.first) > deg(b.first);
    return a.first > b.first;
  });
  std::string out;
  bool first = true;
  for (const auto& [m, c] : order) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    if (mono.empty())
      out += padyn::to_string(mag);
    else if (mag == 1)
      out += mono;
    else
      out += padyn::to_string(mag) + "*" + mono;
  }
  return out;
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& poly, const ModRing& ring) : ring_(ring) {
  for (const auto& [m, c] : poly.terms()) {
    std::uint64_t r = ring.reduce(c);
    if (r != 0) terms_.emplace_back(m, r);
  }
}

std::uint64_t CompiledPolynomial::eval(std::span<const std::uint64_t> point) const {
  std::uint64_t sum = 0;
  for (const auto& [m, c] : terms_) {
    std::uint64_t t = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) t = ring_.mul(t, ring_.pow(point[i], m[i]));
    sum = ring_.add(sum, t);
  }
  return sum;
}

std::uint64_t DenseModPoly::eval(const ModRing& ring, std::uint64_t x) const {
  std::uint64_t acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = ring.add(ring.mul(acc, x), *it);
  return acc;
}

std::uint64_t DenseModPoly::eval_derivative(const ModRing& ring, std::uint64_t x) const {
  std::uint64_t acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 1;)
    acc = ring.add(ring.mul(acc, x), ring.mul(coeffs[i], i % ring.modulus()));
  return acc;
}

DenseModPoly DenseModPoly::from(const std::vector<Rational>& c, const ModRing& ring) {
  DenseModPoly out;
  out.coeffs.reserve(c.size());
  for (const auto& a : c) out.coeffs.push_back(ring.reduce(a));
  return out;
}

namespace upoly {

void trim(Dense& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const Dense& a) {
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != 0) return static_cast<int>(i);
  return -1;
}

Dense derivative(const Dense& a) {
  Dense d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<long long>(i));
  trim(d);
  return d;
}

Dense mul(const Dense& a, const Dense& b) {
  if (a.empty() || b.empty()) return {};
  Dense r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

Dense sub(const Dense& a, const Dense& b) {
  Dense r(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

std::pair<Dense, Dense> divmod(const Dense& a, const Dense& b) {
  Dense rem = a;
  trim(rem);
  Dense bb = b;
  trim(bb);
  if (bb.empty()) throw Error(ErrorCode::InvalidArgument, "division by zero polynomial");
  const int db = degree(bb);
  Dense q(std::max<int>(degree(rem) - db + 1, 0), Rational(0));
  while (degree(rem) >= db) {
    const int dr = degree(rem);
    Rational c = rem[dr] / bb[db];
    q[dr - db] = c;
    for (int i = 0; i <= db; ++i) rem[dr - db + i] -= c * bb[i];
    trim(rem);
  }
  trim(q);
  return {q, rem};
}

Dense gcd(const Dense& a, const Dense& b) {
  Dense x = a, y = b;
  trim(x);
  trim(y);
  while (!y.empty()) {
    Dense r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  if (!x.empty()) {
    Rational lead = x.back();
    for (auto& c : x) c /= lead;
  }
  return x;
}

Dense squarefree_part(const Dense& a) {
  Dense g = gcd(a, derivative(a));
  if (degree(g) <= 0) return a;
  return divmod(a, g).first;
}

Rational eval(const Dense& a, const Rational& x) {
  Rational acc = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Dense compose(const Dense& a, const Dense& b) {
  Dense acc;
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    acc = mul(acc, b);
    if (acc.empty()) acc.push_back(Rational(0));
    acc[0] += *it;
    trim(acc);
  }
  return acc;
}

}  // namespace upoly

}  // namespace padyn
