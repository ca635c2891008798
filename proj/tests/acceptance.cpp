// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "padyn/bounds.hpp"
#include "padyn/cubic.hpp"
#include "padyn/error.hpp"
#include "padyn/parser.hpp"
#include "padyn/period.hpp"
#include "padyn/report.hpp"

using namespace padyn;
using nlohmann::json;

namespace {

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    std::string s;
    for (std::size_t i = 0; i < failures_.size() && i < 5; ++i) s += (i ? "; " : "") + failures_[i];
    if (failures_.size() > 5) s += "; +" + std::to_string(failures_.size() - 5) + " more";
    return s;
  }

 private:
  std::vector<std::string> failures_;
};

Model p1(std::uint64_t p, const std::string& num) {
  return Model::p1(p, parse_polynomial(num, {"x"}, p), Polynomial::constant({"x"}, 1));
}

Model line(std::uint64_t p, const std::string& f) {
  return Model::affine(p, {"x"}, {}, {parse_polynomial(f, {"x"}, p)});
}

Model node_swap() {
  const std::vector<std::string> v{"x", "y"};
  return Model::affine(3, v, {parse_polynomial("x*y - 3", v, 3)}, {parse_polynomial("y", v, 3), parse_polynomial("x", v, 3)});
}

Point aff(std::uint64_t x) { return Point{Chart::Affine, {x}}; }

std::uint64_t rat(std::uint64_t p, int k, long long n, long long d) { return ModRing(p, k).reduce(Rational(n, d)); }

const CertifiedCycle* through(const PeriodicPoints& pp, const Point& pt) {
  for (const auto& c : pp.certified)
    if (std::find(c.points.begin(), c.points.end(), pt) != c.points.end()) return &c;
  return nullptr;
}

ModelStats stats_of(const Model& m) { return ModelStats{m.p(), enumerate_special_fiber(m).size(), d_prime(m)}; }

struct Full {
  PeriodDecomposition dec;
  VerdictSet v;
};

Full analyze(const Model& m, int k, const CertifiedCycle& c) {
  Full f;
  f.dec = decompose(m, k, c, build_functional_graph(m));
  f.v = verify_claims(f.dec, stats_of(m));
  return f;
}

std::string quad(const PeriodDecomposition& d) {
  std::ostringstream s;
  s << "(" << d.n << ", " << d.n0 << ", " << d.r << ", " << d.t << ")";
  return s.str();
}

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string map_text(std::uint64_t p, const std::string& num, int k) {
  return "[model]\nkind = \"p1\"\np = " + std::to_string(p) + "\nnumerator = \"" + num + "\"\n[options]\nprecision = " +
         std::to_string(k) + "\n";
}

const std::string kCubicText =
    "[model]\nkind = \"poly-chart\"\np = 3\nvariable = \"z\"\npolynomial = \"z + z^2 + 3*z^3\"\n";

// ---------------------------------------------------------------------------

std::string criterion1(Check& c) {
  const auto t0 = Clock::now();
  const auto m = p1(3, "x^2 - 4*x + 3");
  const auto pp = find_periodic_points(m, 6);
  const auto* cyc = through(pp, aff(0));
  c.expect(cyc != nullptr, "no certified cycle through 0");
  if (!cyc) return "";
  c.expect(through(pp, aff(3)) == cyc, "3 not on the cycle of 0");
  c.expect(cyc->period == 2, "n != 2");
  const auto f = analyze(m, 6, *cyc);
  c.expect(f.dec.n == 2 && f.dec.n0 == 1 && f.dec.r == 2 && f.dec.t == 0, "decomposition " + quad(f.dec));
  c.expect(f.dec.dim_m == 2 && f.dec.dim_mbar == 1, "dims");
  c.expect(f.v.all_hold(), "verdicts");
  c.expect(f.v.c4.rhs == 8, "bound != 8");
  const double secs = seconds_since(t0);
  c.expect(secs < 1.0, "runtime " + std::to_string(secs));
  return "{0, 3}: n = 2, " + quad(f.dec) + ", dims (" + std::to_string(f.dec.dim_m) + ", " +
         std::to_string(f.dec.dim_mbar) + "), bound " + f.v.c4.rhs.str() + ", " + std::to_string(secs) + " s";
}

std::string criterion2(Check& c) {
  const auto t0 = Clock::now();
  const auto m = p1(7, "x^2");
  const auto pp = find_periodic_points(m, 6);
  std::size_t points = 0, max_n = 0;
  for (const auto& cyc : pp.certified) {
    points += cyc.period;
    max_n = std::max(max_n, cyc.period);
  }
  c.expect(points == 5, "certified points " + std::to_string(points));
  c.expect(pp.certified.size() == 4, "certified cycles " + std::to_string(pp.certified.size()));
  for (const Point& pt : {aff(0), aff(1), Point{Chart::Infinity, {0}}}) {
    const auto* cyc = through(pp, pt);
    c.expect(cyc && cyc->period == 1, "missing fixed point");
  }
  const ModRing r6(7, 6), r1(7, 1);
  bool two = false;
  for (const auto& cyc : pp.certified) {
    if (cyc.period != 2) continue;
    two = true;
    std::vector<Point> red;
    for (const auto& pt : cyc.points) red.push_back(reduce(pt, r6, r1));
    std::sort(red.begin(), red.end());
    c.expect(red == std::vector<Point>{aff(2), aff(4)}, "2-cycle residues");
    c.expect(cyc.certificate == CertificateKind::HenselQuadratic, "2-cycle certificate");
  }
  c.expect(two, "no 2-cycle");
  const BigInt bound = bound_general(BoundInputs{8, 7, 1, 7, 1});
  c.expect(bound == 48, "bound");
  c.expect(BigInt(max_n) <= bound, "period above bound");
  const double secs = seconds_since(t0);
  c.expect(secs < 5.0, "runtime " + std::to_string(secs));
  return std::to_string(points) + " points in " + std::to_string(pp.certified.size()) + " cycles, max n " +
         std::to_string(max_n) + " <= " + bound.str() + ", " + std::to_string(secs) + " s";
}

std::string criterion3(Check& c) {
  const auto m = p1(2, "-x");
  const auto pp = find_periodic_points(m, 5);
  const auto* cyc = through(pp, aff(1));
  c.expect(cyc != nullptr, "1 not certified");
  if (!cyc) return "";
  const auto f = analyze(m, 5, *cyc);
  c.expect(f.dec.n == 2 && f.dec.n0 == 1 && f.dec.r == 1 && f.dec.t == 1, "decomposition " + quad(f.dec));
  c.expect(f.v.c4.rhs == 6, "bound");
  c.expect(f.v.all_hold(), "verdicts");
  return "P = 1: " + quad(f.dec) + ", t <= 1, bound " + f.v.c4.rhs.str();
}

std::string criterion4(Check& c) {
  const auto m = p1(3, "x^2 - 29/16");
  // exact rational iteration first
  ExactPoint x{false, {Rational(-1, 4)}};
  std::vector<Rational> orbit;
  for (int i = 0; i < 3; ++i) {
    orbit.push_back(x.coords[0]);
    x = m.apply_exact(x);
  }
  c.expect(x.coords[0] == Rational(-1, 4), "not a 3-cycle over Q");
  c.expect(orbit == std::vector<Rational>{Rational(-1, 4), Rational(-7, 4), Rational(5, 4)}, "orbit");

  const int k = 8;
  const auto pp = find_periodic_points(m, k);
  const auto* cyc = through(pp, aff(rat(3, k, -1, 4)));
  c.expect(cyc != nullptr, "-1/4 not certified");
  if (!cyc) return "";
  for (auto [n, d] : {std::pair{-7LL, 4LL}, std::pair{5LL, 4LL}})
    c.expect(through(pp, aff(rat(3, k, n, d))) == cyc, "orbit point missing");
  c.expect(cyc->period == 3, "n");
  const auto f = analyze(m, k, *cyc);
  c.expect(f.dec.n == 3 && f.dec.n0 == 1 && f.dec.r == 1 && f.dec.t == 1, "decomposition " + quad(f.dec));
  c.expect(f.v.c3.status == VerdictStatus::Violated, "C3 should be Violated");
  c.expect(f.v.c1.status == VerdictStatus::Holds && f.v.c2.status == VerdictStatus::Holds &&
               f.v.c4.status == VerdictStatus::Holds,
           "C1/C2/C4");
  c.expect(f.v.c4.lhs == 3 && f.v.c4.rhs == 8, "C4 witness");

  RunOptions o;
  o.json = true;
  const auto res = run_text("verify", map_text(3, "x^2 - 29/16", k), o);
  c.expect(res.code == ExitCode::Ok, "verify exit code");
  bool record = false;
  const json doc = json::parse(res.output);
  for (const auto& d : doc["discrepancies"])
    if (d["id"] == "C3" && d.contains("computed") && d.contains("claim")) record = true;
  c.expect(record, "discrepancy record missing from JSON");
  return "{-1/4, -7/4, 5/4}: " + quad(f.dec) + ", C3 Violated (1 > 0), C4 3 <= 8, JSON record present";
}

std::string criterion5(Check& c) {
  const auto m = node_swap();
  const int k = 5;
  const auto fiber = enumerate_special_fiber(m);
  c.expect(fiber.size() == 5, "fiber count " + std::to_string(fiber.size()));
  for (const auto& sp : fiber) {
    const bool node = sp.point.coords == std::vector<std::uint64_t>{0, 0};
    c.expect(sp.cotangent_dimension == (node ? 2 : 1), "cotangent dimension");
  }
  c.expect(d_prime(m) == 2, "d'");
  const auto pp = find_periodic_points(m, k);
  const auto* cyc = through(pp, Point{Chart::Affine, {1, 3}});
  c.expect(cyc != nullptr, "(1, 3) not certified");
  if (!cyc) return "";
  const auto f = analyze(m, k, *cyc);
  c.expect(f.dec.n == 2 && f.dec.n0 == 2, "n, n0");
  c.expect(f.v.c4.rhs == 40, "bound");
  const ModRing rk(3, k), r1(3, 1);
  std::size_t at_node = 0;
  const auto pts = enumerate_points(m, rk);
  for (const auto& pt : pts)
    if (reduce(pt, rk, r1).coords == std::vector<std::uint64_t>{0, 0}) ++at_node;
  c.expect(at_node == 0, "points reducing to the node");
  c.expect(!pts.empty(), "no points mod p^k");
  return "|X(F_3)| = 5, d' = 2, bound 40, (1, 3): n = n0 = 2, " + std::to_string(pts.size()) +
         " points mod 3^5, none over the node";
}

std::string criterion6(Check& c) {
  const auto d = parse_map_description(kCubicText);
  const auto phi = chart_polynomial(d);
  const auto rep = cubic_report(phi, 3, 8);
  c.expect(!rep.p1_extension.ok(), "P1 extension should be Rejected");
  const FixedPointRecord *zero = nullptr, *third = nullptr;
  for (const auto& r : rep.fixed.records) {
    if (r.infinity || !r.exact) continue;
    if (*r.exact == 0) zero = &r;
    if (*r.exact == Rational(-1, 3)) third = &r;
  }
  c.expect(zero && zero->cls == MultiplierClass::Indifferent, "0 should be Indifferent");
  c.expect(third && third->lambda && *third->lambda == Rational(4, 3), "-1/3 with lambda 4/3");
  c.expect(rep.bound == 8, "bound");
  c.expect(rep.max_period <= 8 && rep.periods_within_bound, "period above 8");

  RunOptions o;
  o.json = true;
  const auto res = run_text("cubic", kCubicText, o);
  c.expect(res.code == ExitCode::Ok, "cubic exit code");
  bool note = false;
  const json doc = json::parse(res.output);
  for (const auto& x : doc["discrepancies"])
    if (x["id"] == "repelling-fixed-point") note = true;
  c.expect(note, "discrepancy annotation missing");
  const auto as_p1 = run_text("analyze", map_text(3, "x + x^2 + 3*x^3", 8), RunOptions{});
  c.expect(as_p1.code == ExitCode::Rejected, "p1 form should exit 2");
  return "floor B = " + std::to_string(rep.floor) + ", fixed {0 Indifferent, -1/3 lambda 4/3 Repelling}, bound " +
         rep.bound.str() + " (" + to_string(rep.bound_status) + "), max period " + std::to_string(rep.max_period);
}

std::string criterion7(Check& c) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20260101);
  std::size_t maps = 0, cycles = 0, c4_violated = 0;
  for (std::uint64_t p : {3ull, 5ull, 7ull}) {
    for (int i = 0; i < 200; ++i) {
      const int deg = 1 + static_cast<int>(rng() % 3);
      std::string f = "x^" + std::to_string(deg);
      for (int e = deg - 1; e >= 1; --e) {
        const long long a = static_cast<long long>(rng() % (2 * p * p + 1)) - static_cast<long long>(p * p);
        f += " + (" + std::to_string(a) + ")*x^" + std::to_string(e);
      }
      long long c0 = 0;
      if (rng() % 4 != 0) {
        do c0 = static_cast<long long>(rng() % (2 * p * p + 1)) - static_cast<long long>(p * p);
        while (c0 % static_cast<long long>(p) == 0);
      }
      f += " + (" + std::to_string(c0) + ")";
      const auto m = p1(p, f);
      ++maps;
      try {
        const auto g = build_functional_graph(m);
        const auto st = stats_of(m);
        const auto pp = find_periodic_points(m, 6);
        for (const auto& cyc : pp.certified) {
          ++cycles;
          const auto dec = decompose(m, 6, cyc, g);
          const auto v = verify_claims(dec, st);
          const std::string tag = "p=" + std::to_string(p) + " f=" + f + " " + quad(dec);
          std::uint64_t pt = 1;
          for (int j = 0; j < dec.t; ++j) pt *= p;
          c.expect(dec.mode == DecompositionMode::OrbitRingExact, tag + " mode");
          c.expect(dec.n % dec.n0 == 0, tag + " n0 | n");
          c.expect(dec.t >= 0 && dec.n == dec.n0 * dec.r * pt, tag + " n = n0 r p^t");
          c.expect((dec.n / dec.n0) % dec.r == 0, tag + " r | n/n0");
          c.expect(dec.n0 <= p + 1, tag + " n0 <= p+1");
          c.expect(dec.r <= p - 1, tag + " r <= p-1");
          c.expect(dec.dim_mbar <= 1 && dec.dim_m <= 2, tag + " dims");
          if (v.c4.status == VerdictStatus::Violated) {
            ++c4_violated;
            std::printf("  witness C4: %s: %s > %s\n", tag.c_str(), v.c4.lhs.str().c_str(), v.c4.rhs.str().c_str());
          }
        }
      } catch (const Error& e) {
        c.expect(false, "p=" + std::to_string(p) + " f=" + f + ": " + e.what());
      }
    }
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 60.0, "runtime " + std::to_string(secs));
  return std::to_string(maps) + " maps, " + std::to_string(cycles) + " certified cycles, C4 violations reported " +
         std::to_string(c4_violated) + ", " + std::to_string(secs) + " s";
}

// (n, n0, r, t) of every certified cycle at k, keyed by its reduction; checks k vs k + 2.
void compare_levels(Check& c, const std::string& name, const Model& m, int k,
                    const std::function<bool(const CertifiedCycle&)>& designated) {
  const auto a = find_periodic_points(m, k), b = find_periodic_points(m, k + 2);
  const auto g = build_functional_graph(m);
  const ModRing rk(m.p(), k), rk2(m.p(), k + 2);
  std::vector<const CertifiedCycle*> sa, sb;
  for (const auto& x : a.certified)
    if (designated(x)) sa.push_back(&x);
  for (const auto& x : b.certified) {
    std::vector<Point> red;
    for (const auto& pt : x.points) red.push_back(reduce(pt, rk2, rk));
    CertifiedCycle lowered = x;
    lowered.points = red;
    if (designated(lowered)) sb.push_back(&x);
  }
  c.expect(sa.size() == sb.size(), name + ": " + std::to_string(sa.size()) + " vs " + std::to_string(sb.size()));
  std::vector<bool> used(sa.size(), false);
  for (const auto* y : sb) {
    const Point red = reduce(y->points[0], rk2, rk);
    std::size_t hit = sa.size();
    for (std::size_t i = 0; i < sa.size(); ++i)
      if (std::find(sa[i]->points.begin(), sa[i]->points.end(), red) != sa[i]->points.end()) hit = i;
    if (hit == sa.size() || used[hit]) {
      c.expect(false, name + ": no partner for a cycle at k+2");
      continue;
    }
    used[hit] = true;
    const auto da = decompose(m, k, *sa[hit], g), db = decompose(m, k + 2, *y, g);
    c.expect(da.n == db.n && da.n0 == db.n0 && da.r == db.r && da.t == db.t,
             name + ": " + quad(da) + " vs " + quad(db));
  }
}

std::string criterion8(Check& c) {
  const auto all = [](const CertifiedCycle&) { return true; };
  const auto containing = [](Point pt) {
    return [pt](const CertifiedCycle& x) { return std::find(x.points.begin(), x.points.end(), pt) != x.points.end(); };
  };
  compare_levels(c, "x^2-4x+3", p1(3, "x^2 - 4*x + 3"), 6, all);
  compare_levels(c, "x^2 p=7", p1(7, "x^2"), 6, all);
  compare_levels(c, "-x p=2", p1(2, "-x"), 5, containing(aff(1)));
  compare_levels(c, "x^2-29/16", p1(3, "x^2 - 29/16"), 8, all);
  compare_levels(c, "node swap", node_swap(), 5, containing(Point{Chart::Affine, {1, 3}}));
  compare_levels(c, "cubic integral chart", line(3, "x + x^2 + 3*x^3"), 8, all);

  const auto phi = chart_polynomial(parse_map_description(kCubicText));
  const auto ra = cubic_report(phi, 3, 8), rb = cubic_report(phi, 3, 10);
  c.expect(ra.fixed.records.size() == rb.fixed.records.size(), "cubic fixed point count");
  for (std::size_t i = 0; i < std::min(ra.fixed.records.size(), rb.fixed.records.size()); ++i) {
    const auto &x = ra.fixed.records[i], &y = rb.fixed.records[i];
    c.expect(x.infinity == y.infinity && x.cls == y.cls && x.exact == y.exact && x.shell == y.shell,
             "cubic fixed point " + std::to_string(i));
  }
  c.expect(ra.shell_cycles.size() == rb.shell_cycles.size(), "cubic shell cycles");
  c.expect(ra.max_period == rb.max_period, "cubic max period");
  return "criteria 1-6 maps agree at k and k + 2 (designated cycle only for -x and the swap)";
}

std::string criterion9(Check& c) {
  std::size_t raw = 0;
  for (int j : {2, 3}) {
    std::uint64_t pj = 1;
    for (int i = 0; i < j; ++i) pj *= 3;
    const auto m = line(3, "x + " + std::to_string(pj));
    const auto pp = find_periodic_points(m, j + 2);
    c.expect(pp.certified.empty(), "j=" + std::to_string(j) + ": certified cycles present");
    c.expect(!pp.uncertified.empty(), "j=" + std::to_string(j) + ": no raw cycles");
    for (const auto& u : pp.uncertified) c.expect(u.reason == UncertifiedReason::IncreasePrecision, "reason");
    raw += pp.uncertified.size();
  }
  return "x + 9 (k = 4), x + 27 (k = 5): 0 certified, " + std::to_string(raw) + " raw cycles all IncreasePrecision";
}

}  // namespace

int main() {
  const std::pair<int, std::function<std::string(Check&)>> criteria[] = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    Check c;
    std::string detail;
    try {
      detail = fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    if (!c.ok()) ++failed;
    std::printf("criterion %d: %s  %s%s%s\n", id, c.ok() ? "PASS" : "FAIL", detail.c_str(),
                c.ok() ? "" : "  | ", c.summary().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
