#include "padyn/period.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "padyn/hensel.hpp"

namespace padyn {

const char* to_string(CertificateKind c) {
  switch (c) {
    case CertificateKind::HenselQuadratic: return "HenselQuadratic";
    case CertificateKind::Contraction: return "Contraction";
    case CertificateKind::ExactRational: return "ExactRational";
  }
  return "?";
}

const char* to_string(UncertifiedReason r) {
  switch (r) {
    case UncertifiedReason::IncreasePrecision: return "IncreasePrecision";
    case UncertifiedReason::NoSeparation: return "NoSeparation";
  }
  return "?";
}

const char* to_string(DecompositionMode m) {
  return m == DecompositionMode::OrbitRingExact ? "OrbitRingExact" : "AmbientCertificate";
}

const char* to_string(VerdictStatus s) { return s == VerdictStatus::Holds ? "Holds" : "Violated"; }

namespace {

bool is_curve(const Model& m) { return m.kind() == ModelKind::P1 || m.is_affine_line(); }

struct ChartPolys {
  DenseModPoly a, b;
};

ChartPolys chart_polys(const Model& m, const ModRing& r, Chart c) {
  if (m.kind() == ModelKind::P1) {
    ChartPolys cp{DenseModPoly::from(m.numerator(), r), DenseModPoly::from(m.denominator(), r)};
    if (c == Chart::Infinity) {
      std::reverse(cp.a.coeffs.begin(), cp.a.coeffs.end());
      std::reverse(cp.b.coeffs.begin(), cp.b.coeffs.end());
    }
    return cp;
  }
  return {DenseModPoly::from(m.map().at(0).dense(), r), DenseModPoly{{1}}};
}

// Z/p^e [y] / (u), u monic of degree s.
class OrbitRing {
 public:
  using Elem = std::vector<std::uint64_t>;

  OrbitRing(const ModRing& ring, std::vector<std::uint64_t> u) : ring_(ring), u_(std::move(u)) {
    s_ = u_.size() - 1;
  }

  std::size_t degree() const { return s_; }
  const ModRing& ring() const { return ring_; }

  Elem constant(std::uint64_t c) const {
    Elem e(s_, 0);
    e[0] = c % ring_.modulus();
    return e;
  }
  Elem y() const {
    Elem e(s_, 0);
    if (s_ > 1)
      e[1] = 1;
    else
      e[0] = ring_.neg(u_[0]);  // y == -u0 when s == 1
    return e;
  }
  Elem add(const Elem& a, const Elem& b) const {
    Elem c(s_);
    for (std::size_t i = 0; i < s_; ++i) c[i] = ring_.add(a[i], b[i]);
    return c;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem c(s_);
    for (std::size_t i = 0; i < s_; ++i) c[i] = ring_.sub(a[i], b[i]);
    return c;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    std::vector<std::uint64_t> prod(2 * s_ - 1, 0);
    for (std::size_t i = 0; i < s_; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < s_; ++j) prod[i + j] = ring_.add(prod[i + j], ring_.mul(a[i], b[j]));
    }
    for (std::size_t d = prod.size(); d-- > s_;) {
      const std::uint64_t c = prod[d];
      if (c == 0) continue;
      for (std::size_t i = 0; i < s_; ++i) prod[d - s_ + i] = ring_.sub(prod[d - s_ + i], ring_.mul(c, u_[i]));
      prod[d] = 0;
    }
    prod.resize(s_);
    return prod;
  }
  bool is_unit(const Elem& e) const { return ring_.is_unit(e[0]); }
  Elem inv(const Elem& e) const {
    if (!is_unit(e)) throw Error(ErrorCode::NotAUnit, "orbit ring element is not a unit");
    Elem z = constant(ring_.inv(e[0]));
    const Elem one = constant(1), two = constant(2);
    for (int it = 0; it < 64; ++it) {
      const Elem ez = mul(e, z);
      if (ez == one) return z;
      z = mul(z, sub(two, ez));
    }
    throw Error(ErrorCode::Internal, "orbit ring inverse did not converge");
  }
  Elem eval(const DenseModPoly& poly, const Elem& x) const {
    Elem acc = constant(0);
    for (auto it = poly.coeffs.rbegin(); it != poly.coeffs.rend(); ++it) acc = add(mul(acc, x), constant(*it));
    return acc;
  }

 private:
  ModRing ring_;
  std::vector<std::uint64_t> u_;
  std::size_t s_;
};

std::optional<ExactPoint> reconstruct(const Model& model, const ModRing& ring, const Point& pt) {
  ExactPoint out;
  if (model.kind() == ModelKind::P1) {
    if (pt.chart == Chart::Infinity) {
      if (pt.coords[0] == 0) return ExactPoint{true, {}};
      auto w = rational_reconstruct(ring, pt.coords[0]);
      if (!w || *w == 0) return std::nullopt;
      return ExactPoint{false, {Rational(1) / *w}};
    }
  }
  for (auto c : pt.coords) {
    auto q = rational_reconstruct(ring, c);
    if (!q) return std::nullopt;
    out.coords.push_back(*q);
  }
  return out;
}

// Exact rational cycle through the raw points, if one reconstructs and verifies.
std::optional<std::vector<ExactPoint>> exact_cycle(const Model& model, const ModRing& ring, const RawCycle& raw) {
  std::vector<ExactPoint> pts;
  auto first = reconstruct(model, ring, raw.points[0]);
  if (!first) return std::nullopt;
  pts.push_back(*first);
  const std::size_t n = raw.length();
  for (std::size_t i = 0; i < n; ++i) {
    if (!model.satisfies_relations_exact(pts[i])) return std::nullopt;
    ExactPoint next = model.apply_exact(pts[i]);
    if (i + 1 == n) {
      if (!(next == pts[0])) return std::nullopt;
      break;
    }
    auto expected = reconstruct(model, ring, raw.points[i + 1]);
    if (!expected || !(*expected == next)) return std::nullopt;
    pts.push_back(std::move(next));
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!(model.reduce_exact(pts[i], ring) == raw.points[i])) return std::nullopt;
  return pts;
}

bool distinct_mod(const std::vector<Point>& pts, const ModRing& ring, int level) {
  const ModRing coarse(ring.p(), std::min(level, ring.k()));
  std::unordered_set<Point, PointHash> seen;
  for (const auto& pt : pts)
    if (!seen.insert(reduce(pt, ring, coarse)).second) return false;
  return true;
}

std::vector<Point> orbit_of(const MapEvaluator& ev, const Point& start, std::size_t n) {
  std::vector<Point> out{start};
  for (std::size_t i = 1; i < n; ++i) out.push_back(ev.apply(out.back()));
  return out;
}

void rotate_to_min(std::vector<Point>& pts) {
  std::rotate(pts.begin(), std::min_element(pts.begin(), pts.end()), pts.end());
}

Matrix cycle_multiplier(const Model& model, const MapEvaluator& ev, const std::vector<Point>& pts) {
  const ModRing& r = ev.ring();
  if (model.kind() == ModelKind::P1) {
    std::uint64_t lam = 1;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Chart next = pts[(i + 1) % pts.size()].chart;
      lam = r.mul(ev.derivative_in_charts(pts[i].chart, pts[i].coords[0], next), lam);
    }
    return {{lam}};
  }
  Matrix lam = identity_matrix(model.ambient_dim());
  for (const auto& pt : pts) lam = mat_mul(r, ev.derivative(pt), lam);
  return lam;
}

// Curve charts only. A cycle of length L mod p^(j-1) lifts to p points per fiber;
// the first return map on a fiber is t -> lambda*t + c over F_p, so cycles lift
// without building the graph. Points are only materialized at the last level.
std::vector<RawCycle> lift_curve_cycles(const Model& model, int k, std::uint64_t budget) {
  const std::uint64_t p = model.p();
  const ModRing f1(p, 1);
  const auto ev1 = model.evaluator(f1);
  const FunctionalGraph fiber = build_functional_graph(model);

  struct Seed {
    Point start;
    std::uint64_t length;
    std::uint64_t lambda_bar;  // multiplier of the residue cycle
    std::uint64_t residue_length;
  };
  std::vector<Seed> seeds;
  for (const auto& c : fiber.cycles) {
    std::vector<Point> pts;
    for (auto v : c) pts.push_back(fiber.nodes[v]);
    seeds.push_back({pts[0], pts.size(), cycle_multiplier(model, ev1, pts)[0][0], pts.size()});
  }
  std::uint64_t scale = 1;
  for (int j = 2; j <= k; ++j) {
    scale *= p;
    const ModRing ring(p, j);
    const auto ev = model.evaluator(ring);
    std::vector<Seed> next;
    std::uint64_t total = 0;
    for (const auto& sd : seeds) {
      Point y = sd.start;
      for (std::uint64_t i = 0; i < sd.length; ++i) y = ev.apply(y);
      if (y.chart != sd.start.chart) throw Error(ErrorCode::Internal, "cycle lift changed chart");
      const std::uint64_t diff = ring.sub(y.coords[0], sd.start.coords[0]);
      if (diff % scale != 0) throw Error(ErrorCode::Internal, "cycle does not close modulo p^(j-1)");
      const std::uint64_t c = diff / scale;
      const std::uint64_t lam = f1.pow(sd.lambda_bar, sd.length / sd.residue_length);
      std::vector<int> seen(p, 0);
      std::vector<std::uint64_t> path;
      for (std::uint64_t t0 = 0; t0 < p; ++t0) {
        if (seen[t0]) continue;
        path.clear();
        std::uint64_t t = t0;
        while (!seen[t]) {
          seen[t] = 1;
          path.push_back(t);
          t = f1.add(f1.mul(lam, t), c);
        }
        // t closes a new cycle only when it lies on the current path
        auto at = std::find(path.begin(), path.end(), t);
        if (at == path.end()) continue;
        const std::uint64_t m = static_cast<std::uint64_t>(path.end() - at);
        Point start = sd.start;
        start.coords[0] += t * scale;
        next.push_back({start, sd.length * m, sd.lambda_bar, sd.residue_length});
        total += sd.length * m;
      }
      if (total > budget) throw Error(ErrorCode::SearchSpaceTooLarge, "periodic lifting exceeds the candidate budget");
    }
    seeds = std::move(next);
  }
  const ModRing ring(p, k);
  const auto ev = model.evaluator(ring);
  std::vector<RawCycle> out;
  for (const auto& sd : seeds) {
    RawCycle rc;
    rc.points.reserve(sd.length);
    rc.points.push_back(sd.start);
    for (std::uint64_t i = 1; i < sd.length; ++i) rc.points.push_back(ev.apply(rc.points.back()));
    rotate_to_min(rc.points);
    out.push_back(std::move(rc));
  }
  std::sort(out.begin(), out.end(), [](const RawCycle& a, const RawCycle& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.points[0] < b.points[0];
  });
  return out;
}

// Multiplier recomputed with the other chart wherever a point allows both.
std::uint64_t multiplier_alt_charts(const MapEvaluator& ev, const std::vector<Point>& pts) {
  const ModRing& r = ev.ring();
  const std::size_t n = pts.size();
  auto alt = [&](const Point& pt) -> std::pair<Chart, std::uint64_t> {
    if (pt.chart == Chart::Affine && r.is_unit(pt.coords[0])) return {Chart::Infinity, r.inv(pt.coords[0])};
    return {pt.chart, pt.coords[0]};
  };
  std::uint64_t lam = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [c, x] = alt(pts[i]);
    const auto [next_chart, next_x] = alt(pts[(i + 1) % n]);
    (void)next_x;
    lam = r.mul(lam, ev.derivative_in_charts(c, x, next_chart));
  }
  return lam;
}

}  // namespace

Point iterate(const Model& model, const ModRing& ring, const Point& pt, std::uint64_t n) {
  const auto ev = model.evaluator(ring);
  Point cur = pt;
  for (std::uint64_t i = 0; i < n; ++i) cur = ev.apply(cur);
  return cur;
}

std::vector<RawCycle> enumerate_periodic(const Model& model, int k, std::uint64_t budget) {
  if (is_curve(model)) return lift_curve_cycles(model, k, budget);
  const std::uint64_t p = model.p();
  const FunctionalGraph fiber = build_functional_graph(model);
  std::vector<Point> periodic;
  for (const auto& c : fiber.cycles)
    for (auto v : c) periodic.push_back(fiber.nodes[v]);
  std::sort(periodic.begin(), periodic.end());

  FunctionalGraph g = fiber;
  std::uint64_t scale = 1;
  for (int j = 2; j <= k; ++j) {
    scale *= p;
    const ModRing ring(p, j);
    const auto ev = model.evaluator(ring);
    const std::size_t n = model.ambient_dim();
    std::uint64_t fan = 1;
    for (std::size_t i = 0; i < n; ++i) fan *= p;
    if (periodic.size() > budget / fan)
      throw Error(ErrorCode::SearchSpaceTooLarge, "periodic lifting exceeds the candidate budget");
    std::vector<Point> cand;
    cand.reserve(periodic.size() * fan);
    for (const auto& base : periodic)
      for (std::uint64_t digit = 0; digit < fan; ++digit) {
        Point c = base;
        std::uint64_t d = digit;
        for (std::size_t i = 0; i < n; ++i) {
          c.coords[i] += (d % p) * scale;
          d /= p;
        }
        if (model.kind() == ModelKind::P1 || ev.satisfies_relations(c)) cand.push_back(std::move(c));
      }
    std::sort(cand.begin(), cand.end());
    std::unordered_map<Point, std::size_t, PointHash> index;
    index.reserve(cand.size() * 2);
    for (std::size_t i = 0; i < cand.size(); ++i) index.emplace(cand[i], i);
    std::vector<std::size_t> succ(cand.size());
    for (std::size_t i = 0; i < cand.size(); ++i) {
      auto it = index.find(ev.apply(cand[i]));
      if (it == index.end()) throw Error(ErrorCode::Internal, "lift of a periodic point left the lift set");
      succ[i] = it->second;
    }
    g = build_graph(std::move(cand), std::move(succ));
    periodic.clear();
    for (const auto& c : g.cycles)
      for (auto v : c) periodic.push_back(g.nodes[v]);
    std::sort(periodic.begin(), periodic.end());
  }
  std::vector<RawCycle> out;
  for (const auto& c : g.cycles) {
    RawCycle rc;
    for (auto v : c) rc.points.push_back(g.nodes[v]);
    out.push_back(std::move(rc));
  }
  return out;
}

CertificationResult certify_cycle(const Model& model, int k, const RawCycle& raw) {
  const std::uint64_t p = model.p();
  const ModRing ring(p, k);
  const auto ev = model.evaluator(ring);
  const std::size_t n = raw.length();
  CertificationResult res;

  CertifiedCycle cert;
  cert.period = n;
  cert.multiplier = cycle_multiplier(model, ev, raw.points);
  cert.defect_valuation = k;
  const std::size_t dim = cert.multiplier.size();

  bool unit_slope = false;
  if (is_curve(model)) {
    const std::uint64_t lam = cert.multiplier[0][0];
    if (model.kind() == ModelKind::P1 && multiplier_alt_charts(ev, raw.points) != lam)
      throw Error(ErrorCode::Internal, "multiplier differs between charts");
    const auto e1 = ring.valuation(ring.sub(lam, 1));
    cert.slope_valuation = e1;
    unit_slope = e1 && *e1 == 0;
    if (unit_slope)
      cert.certificate = ring.is_unit(lam) ? CertificateKind::HenselQuadratic : CertificateKind::Contraction;
  } else {
    Matrix shifted = cert.multiplier;
    for (std::size_t i = 0; i < dim; ++i) shifted[i][i] = ring.sub(shifted[i][i], 1);
    unit_slope = rank_mod_p(shifted, p) == dim;
    cert.slope_valuation = unit_slope ? std::optional<int>(0) : std::nullopt;
    bool nil = true;
    for (const auto& row : cert.multiplier)
      for (auto x : row) nil = nil && x % p == 0;
    if (unit_slope) cert.certificate = nil ? CertificateKind::Contraction : CertificateKind::HenselQuadratic;
  }

  if (!unit_slope) {
    if (auto exact = exact_cycle(model, ring, raw)) {
      cert.certificate = CertificateKind::ExactRational;
      cert.points = raw.points;
      cert.exact = std::move(exact);
      cert.uniqueness_level = k;
      res.cycle = std::move(cert);
      return res;
    }
    const bool resolved = is_curve(model) && cert.slope_valuation && k >= 2 * *cert.slope_valuation + 1;
    if (!resolved) {
      res.reason = UncertifiedReason::IncreasePrecision;
      res.detail = cert.slope_valuation ? "v(Lambda - 1) = " + std::to_string(*cert.slope_valuation) +
                                              " needs k >= " + std::to_string(2 * *cert.slope_valuation + 1)
                                        : "Lambda - 1 unresolved at precision k";
      return res;
    }
    cert.certificate = CertificateKind::HenselQuadratic;
  }
  const int e1 = cert.slope_valuation.value_or(0);
  cert.uniqueness_level = e1 + 1;
  if (!distinct_mod(raw.points, ring, cert.uniqueness_level)) {
    res.reason = UncertifiedReason::NoSeparation;
    res.detail = "cycle points not distinct modulo p^" + std::to_string(cert.uniqueness_level);
    return res;
  }

  // refine the base point to the true periodic point
  const Point& base = raw.points[0];
  Point refined = base;
  if (is_curve(model)) {
    const Chart chart = base.chart;
    LocalFunction g = [&](const ModRing& r, std::uint64_t x) {
      const auto evr = model.evaluator(r);
      Point pt{chart, {x}};
      std::uint64_t slope = 1;
      for (std::size_t i = 0; i < n; ++i) {
        slope = r.mul(evr.derivative(pt)[0][0], slope);
        pt = evr.apply(pt);
      }
      if (pt.chart != chart) throw Error(ErrorCode::Internal, "cycle changed chart under refinement");
      return ValueAndSlope{r.sub(pt.coords[0], x), r.sub(slope, 1)};
    };
    refined.coords[0] = newton_refine(g, p, k, base.coords[0], e1);
  } else {
    std::vector<std::uint64_t> x = base.coords;
    for (int step = 0;; ++step) {
      if (step == 64) throw Error(ErrorCode::PrecisionExhausted, "ambient Newton did not converge");
      Point pt{Chart::Affine, x};
      const auto orbit = orbit_of(ev, pt, n);
      const Point image = ev.apply(orbit.back());
      std::vector<std::uint64_t> gval(dim);
      bool zero = true;
      for (std::size_t i = 0; i < dim; ++i) {
        gval[i] = ring.sub(image.coords[i], x[i]);
        zero = zero && gval[i] == 0;
      }
      if (zero) break;
      Matrix jg = cycle_multiplier(model, ev, orbit);
      for (std::size_t i = 0; i < dim; ++i) jg[i][i] = ring.sub(jg[i][i], 1);
      const Matrix inv = inverse_mod(jg, ring);
      for (std::size_t r = 0; r < dim; ++r) {
        std::uint64_t delta = 0;
        for (std::size_t c = 0; c < dim; ++c) delta = ring.add(delta, ring.mul(inv[r][c], gval[c]));
        x[r] = ring.sub(x[r], delta);
      }
    }
    refined.coords = x;
  }
  std::vector<Point> true_points{refined};
  for (Point next = ev.apply(refined); !(next == refined); next = ev.apply(next)) {
    if (true_points.size() == n) throw Error(ErrorCode::Internal, "refined point is not periodic modulo p^k");
    true_points.push_back(next);
  }
  if (true_points.size() < n) {
    // the raw cycle winds several times around a cycle of smaller period
    auto inner = certify_cycle(model, k, RawCycle{true_points});
    inner.shadow = true;
    return inner;
  }
  res.shadow = !(true_points == raw.points);
  rotate_to_min(true_points);
  cert.points = std::move(true_points);
  if (res.shadow) cert.multiplier = cycle_multiplier(model, ev, cert.points);
  res.cycle = std::move(cert);
  return res;
}

PeriodicPoints find_periodic_points(const Model& model, int k) {
  PeriodicPoints out;
  const auto raws = enumerate_periodic(model, k);
  out.raw_count = raws.size();
  std::map<std::vector<Point>, std::size_t> by_points;
  std::vector<CertifiedCycle> shadows;
  for (const auto& raw : raws) {
    auto res = certify_cycle(model, k, raw);
    if (!res.cycle) {
      out.uncertified.push_back({raw, res.reason, res.detail});
      continue;
    }
    if (res.shadow) {
      shadows.push_back(std::move(*res.cycle));
      continue;
    }
    by_points.emplace(res.cycle->points, out.certified.size());
    out.certified.push_back(std::move(*res.cycle));
  }
  for (auto& s : shadows) {
    auto it = by_points.find(s.points);
    if (it != by_points.end()) {
      ++out.certified[it->second].merged_raw;
    } else {
      by_points.emplace(s.points, out.certified.size());
      out.certified.push_back(std::move(s));
    }
  }
  std::sort(out.certified.begin(), out.certified.end(), [](const auto& a, const auto& b) {
    if (a.period != b.period) return a.period < b.period;
    return a.points < b.points;
  });
  return out;
}

std::pair<int, int> orbit_cotangent_dims(const ModRing& ring, const std::vector<std::uint64_t>& u) {
  const std::size_t s = u.size() - 1;
  if (s <= 1) return {1, 0};
  const std::uint64_t p = ring.p();
  auto dims_at = [&](int e) {
    const ModRing r(p, e);
    std::vector<std::uint64_t> ur;
    for (auto c : u) ur.push_back(c % r.modulus());
    OrbitRing a(r, ur);
    std::vector<OrbitRing::Elem> gens;
    if (e > 1) gens.push_back(a.constant(p));
    OrbitRing::Elem ypow = a.y();
    for (std::size_t j = 1; j < s; ++j) {
      gens.push_back(ypow);
      ypow = a.mul(ypow, a.y());
    }
    Matrix m1(gens.begin(), gens.end()), m2;
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i; j < gens.size(); ++j) m2.push_back(a.mul(gens[i], gens[j]));
    return submodule_log_size(m1, r) - submodule_log_size(m2, r);
  };
  return {dims_at(2), dims_at(1)};
}

PeriodDecomposition decompose(const Model& model, int k, const CertifiedCycle& cycle,
                              const FunctionalGraph& fiber_graph) {
  const std::uint64_t p = model.p();
  const ModRing ring(p, k), f1(p, 1);
  PeriodDecomposition dec;
  dec.n = cycle.period;
  const Point& base = cycle.points.at(0);
  const Point residue = reduce(base, ring, f1);
  const auto rd = residual_data(fiber_graph, residue);
  if (rd.tail_length != 0) throw Error(ErrorCode::Internal, "reduction of a periodic point is not periodic");
  dec.n0 = rd.n0;
  if (dec.n % dec.n0 != 0) throw Error(ErrorCode::Internal, "n0 does not divide n");
  dec.s = dec.n / dec.n0;
  for (std::uint64_t i = 0; i < dec.s; ++i) dec.sub_orbit.push_back(cycle.points[i * dec.n0]);

  if (dec.s == 1) {
    dec.r = 1;
    dec.t = 0;
    dec.dim_m = 1;
    dec.dim_mbar = 0;
    dec.mode = DecompositionMode::OrbitRingExact;
    dec.orbit_polynomial = {ring.neg(base.coords[0] % ring.modulus()), 1};
    return dec;
  }

  // residue orbit of the base point under fbar
  std::vector<Point> residues{residue};
  {
    std::size_t idx = fiber_graph.index_of(residue);
    for (std::uint64_t i = 0; i < dec.n0; ++i) {
      idx = fiber_graph.successor[idx];
      residues.push_back(fiber_graph.nodes[idx]);
    }
  }
  const auto ev1 = model.evaluator(f1);

  if (is_curve(model)) {
    dec.mode = DecompositionMode::OrbitRingExact;
    const std::uint64_t lift = residue.coords[0];
    // u(y) = prod (y - b_i), b_i = a_i - lift
    std::vector<std::uint64_t> u{1};
    for (const auto& pt : dec.sub_orbit) {
      const std::uint64_t b = ring.sub(pt.coords[0], lift);
      std::vector<std::uint64_t> next(u.size() + 1, 0);
      for (std::size_t i = 0; i < u.size(); ++i) {
        next[i + 1] = ring.add(next[i + 1], u[i]);
        next[i] = ring.sub(next[i], ring.mul(b, u[i]));
      }
      u = std::move(next);
    }
    for (std::size_t i = 0; i + 1 < u.size(); ++i)
      if (u[i] % p != 0) throw Error(ErrorCode::Internal, "orbit polynomial does not reduce to y^s");
    dec.orbit_polynomial = u;

    // sigma(y) = g(x) - lift computed in A, following the residue charts
    OrbitRing a(ring, u);
    OrbitRing::Elem e = a.add(a.y(), a.constant(lift));
    for (std::uint64_t i = 0; i < dec.n0; ++i) {
      const auto cp = chart_polys(model, ring, residues[i].chart);
      const auto num = a.eval(cp.a, e), den = a.eval(cp.b, e);
      e = residues[i + 1].chart == Chart::Affine ? a.mul(num, a.inv(den)) : a.mul(den, a.inv(num));
    }
    const OrbitRing::Elem sigma_y = a.sub(e, a.constant(lift));
    if (sigma_y[0] % p != 0) throw Error(ErrorCode::Internal, "sigma does not preserve the maximal ideal");
    const std::uint64_t sigma_bar = sigma_y[1] % p;
    dec.sigma_bar = {{sigma_bar}};

    // second route: derivative of gbar at the residue
    std::uint64_t deriv = 1;
    for (std::uint64_t i = 0; i < dec.n0; ++i) deriv = f1.mul(ev1.derivative(residues[i])[0][0], deriv);
    if (deriv != sigma_bar) throw Error(ErrorCode::Internal, "sigma_bar disagrees with the reduced derivative");

    dec.r = matrix_order(dec.sigma_bar, p);
    const auto [dm, dmb] = orbit_cotangent_dims(ring, u);
    dec.dim_m = dm;
    dec.dim_mbar = dmb;

    // sigma on m/m^2 with basis (y, p) or (y)
    {
      const ModRing r2(p, 2);
      std::vector<std::uint64_t> u2;
      for (auto c : u) u2.push_back(c % r2.modulus());
      OrbitRing a2(r2, u2);
      std::vector<OrbitRing::Elem> gens{a2.constant(p)};
      OrbitRing::Elem ypow = a2.y();
      for (std::size_t j = 1; j < u.size() - 1; ++j) {
        gens.push_back(ypow);
        ypow = a2.mul(ypow, a2.y());
      }
      Matrix sq;
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i; j < gens.size(); ++j) sq.push_back(a2.mul(gens[i], gens[j]));
      const int sq_size = submodule_log_size(sq, r2);
      auto in_square = [&](const OrbitRing::Elem& z) {
        Matrix m = sq;
        m.push_back(z);
        return submodule_log_size(m, r2) == sq_size;
      };
      std::vector<OrbitRing::Elem> basis{a2.y()};
      if (dec.dim_m == 2) basis.push_back(a2.constant(p));
      OrbitRing::Elem sy(sigma_y.size());
      for (std::size_t i = 0; i < sy.size(); ++i) sy[i] = sigma_y[i] % r2.modulus();
      std::vector<OrbitRing::Elem> images{sy};
      if (dec.dim_m == 2) images.push_back(a2.constant(p));
      const std::size_t d = basis.size();
      Matrix mat(d, std::vector<std::uint64_t>(d, 0));
      bool ok = true;
      for (std::size_t col = 0; col < d && ok; ++col) {
        bool found = false;
        const std::uint64_t combos = ipow_checked(p, static_cast<int>(d));
        for (std::uint64_t code = 0; code < combos && !found; ++code) {
          OrbitRing::Elem z = images[col];
          std::uint64_t c = code;
          std::vector<std::uint64_t> coeff(d);
          for (std::size_t i = 0; i < d; ++i) {
            coeff[i] = c % p;
            c /= p;
            for (std::size_t t = 0; t < z.size(); ++t) z[t] = r2.sub(z[t], r2.mul(coeff[i], basis[i][t]));
          }
          if (in_square(z)) {
            found = true;
            for (std::size_t i = 0; i < d; ++i) mat[i][col] = coeff[i];
          }
        }
        ok = found;
      }
      if (ok) {
        dec.sigma_on_m = mat;
        try {
          dec.r_on_m = matrix_order(mat, p);
        } catch (const Error&) {
          dec.r_on_m.reset();
        }
      }
    }
  } else {
    dec.mode = DecompositionMode::AmbientCertificate;
    const std::size_t n = model.ambient_dim();
    Matrix dg = identity_matrix(n);
    for (std::uint64_t i = 0; i < dec.n0; ++i) dg = mat_mul(f1, ev1.derivative(residues[i]), dg);
    Matrix rel_jac;
    for (const auto& rel : model.relations()) {
      std::vector<std::uint64_t> row;
      for (std::size_t j = 0; j < n; ++j) row.push_back(rel.derivative(j).eval_mod(f1, residue.coords));
      rel_jac.push_back(std::move(row));
    }
    const auto tangent = rel_jac.empty() ? identity_matrix(n) : nullspace_mod_p(rel_jac, p);
    const std::size_t d = tangent.size();
    // coordinates in the kernel basis are read off at each basis vector's free column
    std::vector<std::size_t> free_col(d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t pos = 0; pos < n; ++pos) {
        bool isolated = tangent[j][pos] == 1;
        for (std::size_t i = 0; i < d && isolated; ++i)
          if (i != j && tangent[i][pos] != 0) isolated = false;
        if (isolated) {
          free_col[j] = pos;
          break;
        }
      }
    Matrix sb(d, std::vector<std::uint64_t>(d, 0));
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<std::uint64_t> img(n, 0);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) img[r] = f1.add(img[r], f1.mul(dg[r][c], tangent[j][c]));
      for (std::size_t i = 0; i < d; ++i) sb[i][j] = img[free_col[i]];
    }
    dec.sigma_bar = sb;
    dec.dim_mbar = static_cast<int>(d);
    dec.dim_m = static_cast<int>(d) + 1;
    dec.r = matrix_order(sb, p);
    dec.t = -1;
    if (dec.s % dec.r == 0) {
      std::uint64_t q = dec.s / dec.r;
      int t = 0;
      while (q % p == 0) {
        q /= p;
        ++t;
      }
      if (q == 1) dec.t = t;
    }
    const BigInt cap = BigInt(dec.n0) * dec.r * pow(BigInt(p), static_cast<unsigned>(t_max(p, 1)));
    dec.ambient_divides = cap % dec.n == 0;
    return dec;
  }

  if (dec.s % dec.r != 0) throw Error(ErrorCode::NotAPPower, "r does not divide s");
  std::uint64_t q = dec.s / dec.r;
  int t = 0;
  while (q % p == 0) {
    q /= p;
    ++t;
  }
  if (q != 1) throw Error(ErrorCode::NotAPPower, "s/r = " + std::to_string(dec.s / dec.r) + " is not a power of p");
  dec.t = t;
  return dec;
}

VerdictSet verify_claims(const PeriodDecomposition& dec, const ModelStats& stats) {
  VerdictSet vs;
  vs.decomposition = dec;
  vs.inputs = BoundInputs{BigInt(stats.fiber_count), stats.p, 1, BigInt(stats.p), stats.dprime};
  auto set = [](Verdict& v, std::string id, std::string ineq, const BigInt& lhs, const BigInt& rhs) {
    v.id = std::move(id);
    v.inequality = std::move(ineq);
    v.lhs = lhs;
    v.rhs = rhs;
    v.status = lhs <= rhs ? VerdictStatus::Holds : VerdictStatus::Violated;
  };
  set(vs.c1, "C1", "n0 <= |X(F_p)|", dec.n0, stats.fiber_count);
  set(vs.c2, "C2", "r <= p^d' - 1", dec.r, pow(BigInt(stats.p), static_cast<unsigned>(stats.dprime)) - 1);
  set(vs.c3, "C3", stats.p == 2 ? "t <= v(2) = 1" : "t <= v(p) - 1 = 0", dec.t, t_max(stats.p, 1));
  if (dec.t < 0) vs.c3.status = VerdictStatus::Violated;
  BigInt bound = 0;
  try {
    bound = bound_general(vs.inputs);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateBound) throw;
  }
  set(vs.c4, "C4", "n <= bound_general(|X(F_p)|, p, 1, p, d')", dec.n, bound);
  return vs;
}

}  // namespace padyn
