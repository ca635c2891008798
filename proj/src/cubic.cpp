#include "padyn/cubic.hpp"

#include <algorithm>

#include "padyn/bounds.hpp"

namespace padyn {

const char* to_string(MultiplierClass c) {
  switch (c) {
    case MultiplierClass::Attracting: return "Attracting";
    case MultiplierClass::Indifferent: return "Indifferent";
    case MultiplierClass::Repelling: return "Repelling";
  }
  return "?";
}

const char* to_string(BoundStatus s) {
  return s == BoundStatus::Conditional ? "Conditional" : "HypothesisNotMet";
}

MultiplierClass classify_valuation(std::optional<int> v) {
  if (!v || *v > 0) return MultiplierClass::Attracting;
  return *v == 0 ? MultiplierClass::Indifferent : MultiplierClass::Repelling;
}

MultiplierClass classify_multiplier(const Rational& lambda, std::uint64_t p) {
  return classify_valuation(vp(lambda, p));
}

std::string FixedPointRecord::location(std::uint64_t p) const {
  if (infinity) return "inf";
  if (exact) return to_string(*exact);
  const std::string ps = std::to_string(p);
  if (shell == 0) return std::to_string(digits) + " + O(" + ps + "^" + std::to_string(precision) + ")";
  return std::to_string(digits) + "/" + ps + "^" + std::to_string(shell) + " + O(" + ps + "^" +
         std::to_string(precision - shell) + ")";
}

std::string FixedPointRecord::multiplier(std::uint64_t) const {
  if (superattracting) return "superattracting";
  if (lambda) return to_string(*lambda);
  if (lambda_valuation) return "v = " + std::to_string(*lambda_valuation);
  return "0 + O(p^" + std::to_string(precision) + ")";
}

namespace {

using upoly::Dense;

std::vector<BigInt> integral_primitive(const Dense& poly) {
  BigInt l = 1;
  for (const auto& c : poly) l = boost::multiprecision::lcm(l, BigInt(denominator(c)));
  std::vector<BigInt> out;
  BigInt g = 0;
  for (const auto& c : poly) {
    out.push_back(BigInt(numerator(c)) * (l / BigInt(denominator(c))));
    g = boost::multiprecision::gcd(g, out.back());
  }
  if (g != 0)
    for (auto& c : out) c /= g;
  return out;
}

void make_primitive(std::vector<BigInt>& c) {
  BigInt g = 0;
  for (const auto& x : c) g = boost::multiprecision::gcd(g, x);
  if (g > 1)
    for (auto& x : c) x /= g;
}

// c(t0 + p*u), coefficients in u.
std::vector<BigInt> shift_scale(const std::vector<BigInt>& c, const BigInt& t0, const BigInt& p) {
  std::vector<BigInt> out(c.size(), 0);
  // Horner with polynomials in u
  for (std::size_t i = c.size(); i-- > 0;) {
    std::vector<BigInt> next(c.size(), 0);
    for (std::size_t d = 0; d < c.size(); ++d) {
      if (out[d] == 0) continue;
      next[d] += out[d] * t0;
      if (d + 1 < c.size()) next[d + 1] += out[d] * p;
    }
    next[0] += c[i];
    out = std::move(next);
  }
  return out;
}

struct Search {
  std::uint64_t p;
  int k;
  int shell;
  const Dense* exact_poly;
  RootSearch* out;

  void solve(const std::vector<BigInt>& t_poly, const BigInt& offset, int depth) {
    const ModRing ring(p, k);
    const ModRing f1(p, 1);
    BigInt scale = pow(BigInt(p), static_cast<unsigned>(depth));
    std::vector<Rational> rq(t_poly.begin(), t_poly.end());
    const auto mod_p = DenseModPoly::from(rq, f1);
    for (std::uint64_t t0 = 0; t0 < p; ++t0) {
      if (depth == 0 && shell > 0 && t0 == 0) continue;  // shell roots are units
      if (mod_p.eval(f1, t0) != 0) continue;
      const BigInt base = offset + scale * t0;
      if (mod_p.eval_derivative(f1, t0) != 0) {
        const auto modk = DenseModPoly::from(rq, ring);
        std::uint64_t t = t0;
        for (int it = 0;; ++it) {
          if (it == 64) throw Error(ErrorCode::Internal, "Newton step did not converge");
          const std::uint64_t v = modk.eval(ring, t);
          if (v == 0) break;
          t = ring.sub(t, ring.mul(v, ring.inv(modk.eval_derivative(ring, t))));
        }
        record(ring.reduce(offset + scale * BigInt(t)));
        continue;
      }
      if (depth + 1 >= k) {
        out->exhausted.push_back({shell, static_cast<std::uint64_t>(base % pow(BigInt(p), depth + 1)), depth + 1});
        continue;
      }
      auto next = shift_scale(t_poly, BigInt(t0), BigInt(p));
      make_primitive(next);
      solve(next, base, depth + 1);
    }
  }

  void record(std::uint64_t y) {
    const ModRing ring(p, k);
    FixedPointRecord r;
    r.digits = y;
    r.shell = shell;
    r.precision = k;
    if (shell > 0)
      r.valuation = -shell;
    else
      r.valuation = ring.valuation(y);
    if (auto q = rational_reconstruct(ring, y)) {
      const Rational x = *q / Rational(pow(BigInt(p), static_cast<unsigned>(shell)));
      if (upoly::eval(*exact_poly, x) == 0) {
        r.exact = x;
        r.valuation = vp(x, p);
      }
    }
    out->roots.push_back(std::move(r));
  }
};

Dense dense_of(const Polynomial& phi) {
  if (phi.arity() != 1) throw Error(ErrorCode::InvalidArgument, "expected a univariate polynomial");
  Dense d = phi.dense();
  upoly::trim(d);
  return d;
}

}  // namespace

RootSearch roots_in_window(const Dense& poly, std::uint64_t p, int floor, int k, int min_shell) {
  RootSearch out;
  Dense sq = poly;
  upoly::trim(sq);
  if (sq.empty()) throw Error(ErrorCode::InvalidArgument, "zero polynomial has every point as a root");
  if (upoly::degree(sq) < 1) return out;
  sq = upoly::squarefree_part(sq);
  const auto ints = integral_primitive(sq);
  const int deg = static_cast<int>(ints.size()) - 1;
  for (int j = min_shell; j <= floor; ++j) {
    std::vector<BigInt> h(ints.size());
    for (int i = 0; i <= deg; ++i) h[i] = ints[i] * pow(BigInt(p), static_cast<unsigned>(j * (deg - i)));
    make_primitive(h);
    Search s{p, k, j, &sq, &out};
    s.solve(h, 0, 0);
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const FixedPointRecord& a, const FixedPointRecord& b) {
    const int va = a.valuation.value_or(1 << 20), vb = b.valuation.value_or(1 << 20);
    if (va != vb) return va < vb;
    return a.digits < b.digits;
  });
  return out;
}

FixedPointSearch fixed_points_affine(const Polynomial& phi, std::uint64_t p, int floor, int k) {
  if (floor < 0) throw Error(ErrorCode::InvalidArgument, "valuation floor must be >= 0");
  const Dense a = dense_of(phi);
  const int deg = upoly::degree(a);
  if (deg < 1) throw Error(ErrorCode::InvalidArgument, "map must be nonconstant");
  FixedPointSearch out;
  Dense g = upoly::sub(a, Dense{0, 1});
  upoly::trim(g);
  if (g.empty()) {
    out.all_points_fixed = true;
    return out;
  }
  auto rs = roots_in_window(g, p, floor, k);
  out.exhausted = rs.exhausted;
  const Dense da = upoly::derivative(a);
  const ModRing ring(p, k);
  for (auto& r : rs.roots) {
    if (r.exact) {
      r.lambda = upoly::eval(da, *r.exact);
      r.lambda_valuation = vp(*r.lambda, p);
      r.cls = classify_multiplier(*r.lambda, p);
    } else {
      // p^(j(D-1)) * phi'(y / p^j) is integral
      std::uint64_t acc = 0;
      for (int i = deg; i >= 1; --i) {
        const Rational c = a[i] * i * Rational(pow(BigInt(p), static_cast<unsigned>(r.shell * (deg - i))));
        acc = ring.add(ring.mul(acc, r.digits), ring.reduce(c));
      }
      const auto v = ring.valuation(acc);
      const int shift = r.shell * (deg - 1);
      if (!v && k - shift <= 0) {
        out.exhausted.push_back({r.shell, r.digits, k});
        continue;
      }
      if (v) r.lambda_valuation = *v - shift;
      r.cls = classify_valuation(r.lambda_valuation);
    }
    out.records.push_back(r);
  }
  FixedPointRecord inf;
  inf.infinity = true;
  inf.precision = k;
  if (deg >= 2) {
    inf.superattracting = true;
    inf.cls = MultiplierClass::Attracting;
  } else {
    inf.lambda = Rational(1) / a[1];
    inf.lambda_valuation = vp(*inf.lambda, p);
    inf.cls = classify_multiplier(*inf.lambda, p);
  }
  out.records.push_back(inf);
  return out;
}

int valuation_floor(const Polynomial& phi, std::uint64_t p) {
  const Dense a = dense_of(phi);
  const int deg = upoly::degree(a);
  if (deg < 1) throw Error(ErrorCode::InvalidArgument, "map must be nonconstant");
  const int vd = *vp(a[deg], p);
  int b = 0;
  for (int i = 0; i < deg; ++i) {
    if (a[i] == 0) continue;
    const int num = vd - *vp(a[i], p), den = deg - i;
    const int c = num >= 0 ? (num + den - 1) / den : -((-num) / den);
    b = std::max(b, c);
  }
  return b + 1;
}

bool escape_check(const Polynomial& phi, std::uint64_t p, int floor) {
  const Dense a = dense_of(phi);
  std::vector<std::uint64_t> units;
  for (std::uint64_t u = 1; u < p && u <= 4; ++u) units.push_back(u);
  units.push_back(p + 1);
  units.push_back(p - 1 + p * (p - 1));
  for (int m = floor + 1; m <= floor + 3; ++m)
    for (auto u : units) {
      const Rational z = Rational(u) / Rational(pow(BigInt(p), static_cast<unsigned>(m)));
      const auto v = vp(upoly::eval(a, z), p);
      if (!v || *v >= -m) return false;
    }
  return true;
}

CubicReport cubic_report(const Polynomial& phi, std::uint64_t p, int k, std::optional<int> floor_override,
                         int shell_period_cap) {
  const Dense a = dense_of(phi);
  if (upoly::degree(a) != 3) throw Error(ErrorCode::InvalidArgument, "cubic workflow needs a degree 3 map");
  if (p == 2) throw Error(ErrorCode::UnsupportedPrime, "cubic workflow assumes p > 2");
  if (shell_period_cap < 1) throw Error(ErrorCode::InvalidArgument, "shell period cap must be >= 1");
  if (!phi.is_p_integral(p)) throw Error(ErrorCode::NonIntegralCoefficient, "map must be p-integral");

  CubicReport rep;
  rep.p = p;
  rep.k = k;
  rep.shell_period_cap = shell_period_cap;
  rep.formula_floor = valuation_floor(phi, p);
  rep.floor = rep.formula_floor;
  if (floor_override) {
    rep.floor = *floor_override;
    rep.floor_overridden = true;
  }
  for (int bumps = 0; !escape_check(phi, p, rep.floor); ++bumps) {
    if (bumps == 64) throw Error(ErrorCode::Internal, "escape check never passed");
    ++rep.floor;
  }

  rep.p1_extension = check_extends(Model::p1(p, phi, Polynomial::constant(phi.variables(), 1)), k);
  rep.fixed = fixed_points_affine(phi, p, rep.floor, k);
  for (const auto& r : rep.fixed.records)
    if (!r.infinity && r.cls == MultiplierClass::Repelling) rep.has_rational_repelling = true;
  rep.bound = bound_cubic(p, 1, BigInt(p));
  rep.reference_family = a == Dense{0, 1, 1, Rational(p)};
  rep.bound_status = !rep.has_rational_repelling || rep.reference_family ? BoundStatus::Conditional
                                                                     : BoundStatus::HypothesisNotMet;

  const Model chart = Model::affine(p, phi.variables(), {}, {phi});
  rep.integral = find_periodic_points(chart, k);
  for (const auto& c : rep.integral.certified) rep.max_period = std::max(rep.max_period, c.period);

  // points with -B <= v < 0 and exact period n
  Dense iter{0, 1};
  std::vector<Dense> sq_by_period;
  for (int n = 1; n <= shell_period_cap; ++n) {
    iter = upoly::compose(a, iter);
    Dense g = upoly::sub(iter, Dense{0, 1});
    upoly::trim(g);
    if (g.empty()) break;
    const Dense sq = upoly::squarefree_part(g);
    Dense lcm{1};
    for (int d = 1; d < n; ++d)
      if (n % d == 0) {
        const Dense& s = sq_by_period[d - 1];
        lcm = upoly::divmod(upoly::mul(lcm, s), upoly::gcd(lcm, s)).first;
      }
    sq_by_period.push_back(sq);
    const Dense primitive = upoly::divmod(sq, lcm).first;
    auto rs = roots_in_window(primitive, p, rep.floor, k, 1);
    for (auto& b : rs.exhausted) rep.fixed.exhausted.push_back(b);
    if (!rs.roots.empty()) {
      rep.shell_cycles.push_back({static_cast<std::size_t>(n), rs.roots});
      rep.max_period = std::max<std::size_t>(rep.max_period, n);
    }
  }
  rep.periods_within_bound = BigInt(rep.max_period) <= rep.bound;
  return rep;
}

}  // namespace padyn
