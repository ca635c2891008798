#include "padyn/models.hpp"

#include <algorithm>

namespace padyn {

const char* to_string(ExtensionStatus s) {
  switch (s) {
    case ExtensionStatus::GoodReductionP1: return "GoodReductionP1";
    case ExtensionStatus::AffineVerified: return "AffineVerified";
    case ExtensionStatus::Rejected: return "Rejected";
  }
  return "?";
}

const char* to_string(VerificationMode m) {
  switch (m) {
    case VerificationMode::None: return "None";
    case VerificationMode::Exact: return "Exact";
    case VerificationMode::Sampled: return "Sampled";
  }
  return "?";
}

Point reduce(const Point& pt, const ModRing& from, const ModRing& to) {
  Point out = pt;
  for (auto& c : out.coords) c = from.truncate(c, to);
  return out;
}

Point canonical_p1(const ModRing& ring, std::uint64_t a, std::uint64_t b) {
  if (ring.is_unit(b)) return Point{Chart::Affine, {ring.mul(a, ring.inv(b))}};
  if (ring.is_unit(a)) return Point{Chart::Infinity, {ring.mul(b, ring.inv(a))}};
  throw Error(ErrorCode::Internal, "P^1 normalization impossible: no unit coordinate");
}

std::string describe(const Point& pt, ModelKind kind) {
  if (kind == ModelKind::P1) {
    if (pt.chart == Chart::Affine) return std::to_string(pt.coords.at(0));
    return pt.coords.at(0) == 0 ? "inf" : "[1:" + std::to_string(pt.coords[0]) + "]";
  }
  if (pt.coords.size() == 1) return std::to_string(pt.coords[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < pt.coords.size(); ++i) s += (i ? "," : "") + std::to_string(pt.coords[i]);
  return s + ")";
}

std::string describe(const ExactPoint& pt, ModelKind kind) {
  if (pt.infinity) return "inf";
  if (kind == ModelKind::P1 || pt.coords.size() == 1) return to_string(pt.coords.at(0));
  std::string s = "(";
  for (std::size_t i = 0; i < pt.coords.size(); ++i) s += (i ? "," : "") + to_string(pt.coords[i]);
  return s + ")";
}

namespace {

std::vector<Rational> padded(const Polynomial& poly, int d) {
  std::vector<Rational> c = poly.is_zero() ? std::vector<Rational>{} : poly.dense();
  c.resize(d + 1, Rational(0));
  return c;
}

DenseModPoly reversed(const DenseModPoly& a) {
  DenseModPoly r = a;
  std::reverse(r.coeffs.begin(), r.coeffs.end());
  return r;
}

}  // namespace

Model Model::p1(std::uint64_t p, const Polynomial& numerator, const Polynomial& denominator) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  if (numerator.arity() != 1 || denominator.arity() != 1 || numerator.variables() != denominator.variables())
    throw Error(ErrorCode::InvalidArgument, "P^1 maps need univariate numerator/denominator in one variable");
  if (!numerator.is_p_integral(p) || !denominator.is_p_integral(p))
    throw Error(ErrorCode::NonIntegralCoefficient, "map coefficients must be p-integral");
  if (denominator.is_zero()) throw Error(ErrorCode::InvalidArgument, "denominator is zero");
  Model m;
  m.kind_ = ModelKind::P1;
  m.p_ = p;
  m.vars_ = numerator.variables();
  m.degree_ = std::max(numerator.total_degree(), denominator.total_degree());
  if (m.degree_ < 1) throw Error(ErrorCode::InvalidArgument, "P^1 map must have degree >= 1");
  m.num_ = padded(numerator, m.degree_);
  m.den_ = padded(denominator, m.degree_);
  m.num_poly_ = numerator;
  m.den_poly_ = denominator;
  return m;
}

Model Model::affine(std::uint64_t p, std::vector<std::string> variables, std::vector<Polynomial> relations,
                    std::vector<Polynomial> map) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  if (variables.empty()) throw Error(ErrorCode::InvalidArgument, "affine model needs variables");
  if (map.size() != variables.size())
    throw Error(ErrorCode::InvalidArgument, "map must have one component per variable");
  for (const auto* list : {&relations, &map})
    for (const auto& poly : *list) {
      if (poly.variables() != variables)
        throw Error(ErrorCode::InvalidArgument, "polynomial over unexpected variables");
      if (!poly.is_p_integral(p))
        throw Error(ErrorCode::NonIntegralCoefficient, poly.to_string() + " is not p-integral");
    }
  Model m;
  m.kind_ = ModelKind::Affine;
  m.p_ = p;
  m.vars_ = std::move(variables);
  m.relations_ = std::move(relations);
  m.map_ = std::move(map);
  for (const auto& f : m.map_) m.degree_ = std::max(m.degree_, f.total_degree());
  return m;
}

int Model::expected_dim() const noexcept {
  if (kind_ == ModelKind::P1) return 1;
  return static_cast<int>(vars_.size()) - static_cast<int>(relations_.size());
}

ExactPoint Model::apply_exact(const ExactPoint& pt) const {
  if (kind_ == ModelKind::P1) {
    if (pt.infinity) {
      if (den_[degree_] != 0) return ExactPoint{false, {num_[degree_] / den_[degree_]}};
      return ExactPoint{true, {}};
    }
    const Rational a = upoly::eval(num_, pt.coords[0]);
    const Rational b = upoly::eval(den_, pt.coords[0]);
    if (b == 0) return ExactPoint{true, {}};
    return ExactPoint{false, {a / b}};
  }
  ExactPoint out;
  for (const auto& f : map_) out.coords.push_back(f.eval(pt.coords));
  return out;
}

bool Model::satisfies_relations_exact(const ExactPoint& pt) const {
  if (kind_ == ModelKind::P1) return true;
  return std::all_of(relations_.begin(), relations_.end(),
                     [&](const Polynomial& r) { return r.eval(pt.coords) == 0; });
}

Point Model::reduce_exact(const ExactPoint& pt, const ModRing& ring) const {
  if (kind_ == ModelKind::P1) {
    if (pt.infinity) return Point{Chart::Infinity, {0}};
    const Rational& x = pt.coords[0];
    if (x != 0 && *vp(x, p_) < 0) return Point{Chart::Infinity, {ring.reduce(Rational(1) / x)}};
    return Point{Chart::Affine, {ring.reduce(x)}};
  }
  Point out;
  for (const auto& c : pt.coords) out.coords.push_back(ring.reduce(c));
  return out;
}

MapEvaluator::MapEvaluator(const Model& model, const ModRing& ring) : model_(&model), ring_(ring) {
  if (model.p() != ring.p()) throw Error(ErrorCode::MismatchedRing, "ring prime differs from model prime");
  if (model.kind() == ModelKind::P1) {
    num_ = DenseModPoly::from(model.numerator(), ring);
    den_ = DenseModPoly::from(model.denominator(), ring);
    num_rev_ = reversed(num_);
    den_rev_ = reversed(den_);
    return;
  }
  const std::size_t n = model.variables().size();
  for (const auto& f : model.map()) {
    map_.emplace_back(f, ring);
    std::vector<CompiledPolynomial> row;
    for (std::size_t j = 0; j < n; ++j) row.emplace_back(f.derivative(j), ring);
    jacobian_.push_back(std::move(row));
  }
  for (const auto& r : model.relations()) relations_.emplace_back(r, ring);
}

MapEvaluator::ChartValues MapEvaluator::chart_values(Chart chart, std::uint64_t c) const {
  const DenseModPoly& a = chart == Chart::Affine ? num_ : num_rev_;
  const DenseModPoly& b = chart == Chart::Affine ? den_ : den_rev_;
  return {a.eval(ring_, c), a.eval_derivative(ring_, c), b.eval(ring_, c), b.eval_derivative(ring_, c)};
}

Point MapEvaluator::apply(const Point& pt) const {
  if (model_->kind() == ModelKind::P1) {
    const auto& c = pt.coords[0];
    const DenseModPoly& a = pt.chart == Chart::Affine ? num_ : num_rev_;
    const DenseModPoly& b = pt.chart == Chart::Affine ? den_ : den_rev_;
    return canonical_p1(ring_, a.eval(ring_, c), b.eval(ring_, c));
  }
  Point out{Chart::Affine, std::vector<std::uint64_t>(map_.size())};
  for (std::size_t i = 0; i < map_.size(); ++i) out.coords[i] = map_[i].eval(pt.coords);
  return out;
}

std::uint64_t MapEvaluator::derivative_in_charts(Chart source, std::uint64_t coord, Chart target) const {
  const auto v = chart_values(source, coord);
  if (target == Chart::Affine) {
    const std::uint64_t inv = ring_.inv(v.b);
    return ring_.mul(ring_.sub(ring_.mul(v.da, v.b), ring_.mul(v.a, v.db)), ring_.mul(inv, inv));
  }
  const std::uint64_t inv = ring_.inv(v.a);
  return ring_.mul(ring_.sub(ring_.mul(v.db, v.a), ring_.mul(v.b, v.da)), ring_.mul(inv, inv));
}

Matrix MapEvaluator::derivative(const Point& pt) const {
  if (model_->kind() == ModelKind::P1) {
    const auto v = chart_values(pt.chart, pt.coords[0]);
    const Chart target = ring_.is_unit(v.b) ? Chart::Affine : Chart::Infinity;
    return {{derivative_in_charts(pt.chart, pt.coords[0], target)}};
  }
  const std::size_t n = map_.size();
  Matrix j(n, std::vector<std::uint64_t>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) j[r][c] = jacobian_[r][c].eval(pt.coords);
  return j;
}

std::vector<std::uint64_t> MapEvaluator::relation_values(const Point& pt) const {
  std::vector<std::uint64_t> out;
  for (const auto& r : relations_) out.push_back(r.eval(pt.coords));
  return out;
}

bool MapEvaluator::satisfies_relations(const Point& pt) const {
  return std::all_of(relations_.begin(), relations_.end(),
                     [&](const CompiledPolynomial& r) { return r.eval(pt.coords) == 0; });
}

Rational resultant(const std::vector<Rational>& f, const std::vector<Rational>& g) {
  const std::size_t d = f.size() - 1;
  if (g.size() != f.size()) throw Error(ErrorCode::InvalidArgument, "forms must have equal degree");
  const std::size_t n = 2 * d;
  if (n == 0) return 1;
  // rows hold coefficients from X^d Z^0 down to X^0 Z^d
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t row = 0; row < d; ++row)
    for (std::size_t i = 0; i <= d; ++i) {
      m[row][row + i] = f[d - i];
      m[d + row][row + i] = g[d - i];
    }
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      const Rational factor = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= factor * m[c][j];
    }
  }
  return det;
}

namespace {

bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

// Division by a single polynomial in lex order; returns (quotient, remainder).
std::pair<Polynomial, Polynomial> divide_by(const Polynomial& f, const Polynomial& h) {
  Polynomial q(f.variables()), rem(f.variables()), r = f;
  const auto& [lead_m, lead_c] = *h.terms().rbegin();
  while (!r.is_zero()) {
    const auto [m, c] = *r.terms().rbegin();
    if (divides(lead_m, m)) {
      Monomial quot = m;
      for (std::size_t i = 0; i < quot.size(); ++i) quot[i] -= lead_m[i];
      Polynomial t(f.variables());
      t.add_term(quot, c / lead_c);
      q = q + t;
      r = r - t * h;
    } else {
      Polynomial t(f.variables());
      t.add_term(m, c);
      rem = rem + t;
      r = r - t;
    }
  }
  return {q, rem};
}

}  // namespace

ExtensionCheck check_extends(const Model& model, int k) {
  ExtensionCheck out;
  const std::uint64_t p = model.p();
  if (model.kind() == ModelKind::P1) {
    const Rational res = resultant(model.numerator(), model.denominator());
    out.resultant = res;
    out.resultant_valuation = vp(res, p);
    if (res == 0) {
      out.reason = "zero resultant: numerator and denominator share a factor";
      return out;
    }
    if (*out.resultant_valuation == 0) {
      out.status = ExtensionStatus::GoodReductionP1;
      return out;
    }
    out.reason = "resultant has p-adic valuation " + std::to_string(*out.resultant_valuation);
    const ModRing f(p, 1);
    const auto num = DenseModPoly::from(model.numerator(), f);
    const auto den = DenseModPoly::from(model.denominator(), f);
    for (std::uint64_t x = 0; x < p && out.witness.empty(); ++x)
      if (num.eval(f, x) == 0 && den.eval(f, x) == 0)
        out.witness = "common root [" + std::to_string(x) + ":1] mod " + std::to_string(p);
    if (out.witness.empty() && num.coeffs.back() == 0 && den.coeffs.back() == 0)
      out.witness = "common root [1:0] mod " + std::to_string(p);
    if (out.witness.empty()) out.witness = "no F_p-rational common root";
    return out;
  }

  const auto& rels = model.relations();
  if (rels.empty()) {
    out.status = ExtensionStatus::AffineVerified;
    out.mode = VerificationMode::Exact;
    return out;
  }
  if (rels.size() == 1) {
    const Polynomial composed = rels[0].compose(model.map());
    const auto [q, rem] = divide_by(composed, rels[0]);
    if (rem.is_zero() && q.is_p_integral(p)) {
      out.status = ExtensionStatus::AffineVerified;
      out.mode = VerificationMode::Exact;
      return out;
    }
  }
  // sampled: every F_p point and every point mod p^k must map back onto the model
  for (const ModRing ring : {ModRing(p, 1), ModRing(p, k)}) {
    const auto ev = model.evaluator(ring);
    for (const auto& pt : enumerate_points(model, ring)) {
      const Point image = ev.apply(pt);
      const auto values = ev.relation_values(image);
      for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] != 0) {
          out.reason = "relation " + rels[i].to_string() + " does not vanish on the image";
          out.witness = describe(pt, ModelKind::Affine) + " mod " + std::to_string(p) + "^" +
                        std::to_string(ring.k());
          return out;
        }
    }
  }
  out.status = ExtensionStatus::AffineVerified;
  out.mode = VerificationMode::Sampled;
  return out;
}

std::vector<Point> enumerate_points(const Model& model, const ModRing& ring, std::uint64_t budget) {
  const std::uint64_t p = model.p();
  std::vector<Point> out;
  if (model.kind() == ModelKind::P1) {
    const std::uint64_t m = ring.modulus();
    if (m + m / p > budget) throw Error(ErrorCode::SearchSpaceTooLarge, "P^1 point count exceeds budget");
    out.reserve(m + m / p);
    for (std::uint64_t x = 0; x < m; ++x) out.push_back(Point{Chart::Affine, {x}});
    for (std::uint64_t w = 0; w < m; w += p) out.push_back(Point{Chart::Infinity, {w}});
    return out;
  }
  const std::size_t n = model.variables().size();
  std::uint64_t fan = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (fan > budget / p) throw Error(ErrorCode::SearchSpaceTooLarge, "p^N exceeds the enumeration budget");
    fan *= p;
  }
  if (fan > kSpecialFiberBudget) throw Error(ErrorCode::SearchSpaceTooLarge, "p^N exceeds 10^7");
  std::vector<Point> level{Point{Chart::Affine, std::vector<std::uint64_t>(n, 0)}};
  std::uint64_t scale = 1;
  for (int j = 1; j <= ring.k(); ++j) {
    const ModRing r(p, j);
    std::vector<CompiledPolynomial> rels;
    for (const auto& rel : model.relations()) rels.emplace_back(rel, r);
    if (level.size() > budget / fan) throw Error(ErrorCode::SearchSpaceTooLarge, "lifting exceeds budget");
    std::vector<Point> next;
    for (const auto& base : level)
      for (std::uint64_t digit = 0; digit < fan; ++digit) {
        Point cand = base;
        std::uint64_t d = digit;
        for (std::size_t i = 0; i < n; ++i) {
          cand.coords[i] += (d % p) * scale;
          d /= p;
        }
        if (std::all_of(rels.begin(), rels.end(), [&](const auto& c) { return c.eval(cand.coords) == 0; }))
          next.push_back(std::move(cand));
      }
    level = std::move(next);
    scale *= p;
  }
  std::sort(level.begin(), level.end());
  return level;
}

int cotangent_dim(const Model& model, const Point& fiber_point) {
  if (model.kind() == ModelKind::P1) return 1;
  const ModRing f(model.p(), 1);
  const std::size_t n = model.variables().size();
  Matrix jac;
  for (const auto& rel : model.relations()) {
    std::vector<std::uint64_t> row;
    for (std::size_t j = 0; j < n; ++j) row.push_back(rel.derivative(j).eval_mod(f, fiber_point.coords));
    jac.push_back(std::move(row));
  }
  return static_cast<int>(n - (jac.empty() ? 0 : rank_mod_p(jac, model.p())));
}

SpecialFiberPoint reduce_point(const Model& model, const ModRing& ring, const Point& pt) {
  const Point q = reduce(pt, ring, ModRing(model.p(), 1));
  return {q, cotangent_dim(model, q)};
}

std::vector<SpecialFiberPoint> enumerate_special_fiber(const Model& model) {
  const ModRing f(model.p(), 1);
  std::vector<SpecialFiberPoint> out;
  for (auto& pt : enumerate_points(model, f, kSpecialFiberBudget)) {
    const int dim = cotangent_dim(model, pt);
    out.push_back({std::move(pt), dim});
  }
  return out;
}

int d_prime(const Model& model) {
  int best = 0;
  for (const auto& q : enumerate_special_fiber(model)) best = std::max(best, q.cotangent_dimension);
  return best;
}

}  // namespace padyn
