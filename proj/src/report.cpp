#include "padyn/report.hpp"

#include <sstream>

#include "json.hpp"

#include "padyn/cubic.hpp"
#include "padyn/period.hpp"

namespace padyn {

using nlohmann::json;

namespace {

json jint(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

json jopt(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

json jmatrix(const Matrix& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

json extension_json(const ExtensionCheck& e) {
  json j{{"status", to_string(e.status)}, {"mode", to_string(e.mode)}, {"reason", e.reason}};
  if (!e.witness.empty()) j["witness"] = e.witness;
  if (e.resultant) j["resultant"] = to_string(*e.resultant);
  if (e.resultant) j["resultant_valuation"] = jopt(e.resultant_valuation);
  return j;
}

std::vector<std::string> describe_all(const std::vector<Point>& pts, ModelKind kind) {
  std::vector<std::string> out;
  for (const auto& pt : pts) out.push_back(describe(pt, kind));
  return out;
}

json model_json(const MapDescription& d, const Model& m, int k, const ExtensionCheck& ext) {
  json j{{"kind", to_string(d.kind)}, {"p", d.p}, {"precision", k}, {"variables", d.variables},
         {"extension", extension_json(ext)}};
  switch (d.kind) {
    case MapKind::P1:
      j["numerator"] = m.numerator_poly().to_string();
      j["denominator"] = m.denominator_poly().to_string();
      j["degree"] = m.degree();
      break;
    case MapKind::Affine: {
      json rel = json::array(), map = json::array();
      for (const auto& r : m.relations()) rel.push_back(r.to_string());
      for (const auto& f : m.map()) map.push_back(f.to_string());
      j["relations"] = rel;
      j["map"] = map;
      j["expected_dimension"] = m.expected_dim();
      break;
    }
    case MapKind::PolyChart:
      j["polynomial"] = m.map().at(0).to_string();
      break;
  }
  return j;
}

struct FiberData {
  FunctionalGraph graph;
  std::size_t count = 0;
  int dprime = 0;
  json j;
};

FiberData fiber_data(const Model& m) {
  FiberData f;
  const auto pts = enumerate_special_fiber(m);
  f.count = pts.size();
  f.dprime = d_prime(m);
  f.graph = build_functional_graph(m);
  json points = json::array();
  for (const auto& sp : pts)
    points.push_back({{"point", describe(sp.point, m.kind())}, {"cotangent_dim", sp.cotangent_dimension}});
  json cycles = json::array();
  for (const auto& c : cycle_decomposition(f.graph)) cycles.push_back(describe_all(c.points, m.kind()));
  f.j = {{"count", f.count}, {"dprime", f.dprime}, {"points", points}, {"cycles", cycles}};
  return f;
}

json bounds_json(const Model& m, const FiberData& f) {
  json j;
  const std::uint64_t p = m.p();
  BoundInputs in{BigInt(f.count), p, 1, BigInt(p), f.dprime};
  json inputs{{"count", f.count}, {"p", p}, {"e", 1}, {"q", p}, {"dprime", f.dprime}};
  try {
    j["general"] = {{"value", jint(bound_general(in))}, {"inputs", inputs}};
  } catch (const Error& e) {
    j["general"] = {{"error", e.what()}, {"inputs", inputs}};
  }
  if (m.kind() == ModelKind::P1) {
    j["qp"] = {{"value", jint(bound_general({BigInt(p + 1), p, 1, BigInt(p), 1}))}};
    if (p > 2) j["cubic"] = {{"value", jint(bound_cubic(p, 1, BigInt(p)))}};
  }
  return j;
}

json certified_json(const Model& m, const CertifiedCycle& c) {
  json j{{"period", c.period},
         {"points", describe_all(c.points, m.kind())},
         {"certificate", to_string(c.certificate)},
         {"slope_valuation", jopt(c.slope_valuation)},
         {"uniqueness_level", c.uniqueness_level},
         {"merged_raw", c.merged_raw},
         {"multiplier", jmatrix(c.multiplier)}};
  if (c.exact) {
    json ex = json::array();
    for (const auto& e : *c.exact) ex.push_back(describe(e, m.kind()));
    j["exact"] = ex;
  } else {
    j["exact"] = nullptr;
  }
  return j;
}

json uncertified_json(const Model& m, const UncertifiedCycle& u) {
  return {{"length", u.cycle.length()},
          {"first_point", describe(u.cycle.points.at(0), m.kind())},
          {"reason", to_string(u.reason)},
          {"detail", u.detail}};
}

json decomposition_json(const Model& m, const PeriodDecomposition& d) {
  json j{{"n", d.n},
         {"n0", d.n0},
         {"s", d.s},
         {"r", d.r},
         {"t", d.t},
         {"dim_m", d.dim_m},
         {"dim_mbar", d.dim_mbar},
         {"sigma_bar", jmatrix(d.sigma_bar)},
         {"mode", to_string(d.mode)},
         {"sub_orbit", describe_all(d.sub_orbit, m.kind())},
         {"orbit_polynomial", d.orbit_polynomial}};
  j["r_on_m"] = d.r_on_m ? json(*d.r_on_m) : json(nullptr);
  if (!d.sigma_on_m.empty()) j["sigma_on_m"] = jmatrix(d.sigma_on_m);
  if (d.mode == DecompositionMode::AmbientCertificate) j["ambient_divides"] = d.ambient_divides;
  return j;
}

json verdict_json(const Verdict& v) {
  return {{"id", v.id}, {"inequality", v.inequality}, {"lhs", jint(v.lhs)}, {"rhs", jint(v.rhs)},
          {"status", to_string(v.status)}};
}

std::optional<ExactPoint> parse_point(const std::string& text, const MapDescription& d) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "inf" || s == "infinity") return ExactPoint{true, {}};
  if (!s.empty() && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  ExactPoint pt;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    const Polynomial c = parse_polynomial(part, {}, d.p);
    pt.coords.push_back(c.coefficient(Monomial{}));
  }
  return pt;
}

json meta_json(const std::string& sub, const MapDescription& d, int k, const RunOptions& o) {
  json input{{"kind", to_string(d.kind)}, {"p", d.p}, {"variables", d.variables}};
  if (d.kind == MapKind::P1) {
    input["numerator"] = d.numerator;
    input["denominator"] = d.denominator;
  } else if (d.kind == MapKind::Affine) {
    input["relations"] = d.relations;
    input["map"] = d.map;
  } else {
    input["polynomial"] = d.polynomial;
  }
  json options{{"precision", k}};
  if (o.val_floor || d.val_floor) options["val_floor"] = o.val_floor ? *o.val_floor : *d.val_floor;
  if (o.point) options["point"] = *o.point;
  return {{"tool", "padyn"},
          {"version", kVersion},
          {"subcommand", sub},
          {"scope", "dynamics over Q_p (e = 1); bound formulas accept any e"},
          {"input", input},
          {"options", options}};
}

json empty_report() {
  return {{"model", json::object()},      {"special_fiber", json::object()}, {"bounds", json::object()},
          {"cycles", json::object()},     {"verdicts", json::array()},       {"discrepancies", json::array()},
          {"meta", json::object()}};
}

// ---------------------------------------------------------------- cubic

json fixed_record_json(const FixedPointRecord& r, std::uint64_t p) {
  json j{{"location", r.location(p)}, {"class", to_string(r.cls)}, {"multiplier", r.multiplier(p)}};
  j["valuation"] = r.infinity ? json("-inf") : jopt(r.valuation);
  j["multiplier_valuation"] = jopt(r.lambda_valuation);
  j["exact"] = r.infinity || r.exact.has_value();
  return j;
}

void cubic_sections(json& rep, const MapDescription& d, int k, const RunOptions& o) {
  const Polynomial phi = d.kind == MapKind::PolyChart ? chart_polynomial(d)
                                                      : parse_polynomial(d.numerator, d.variables, d.p);
  const std::optional<int> floor = o.val_floor ? o.val_floor : d.val_floor;
  const int cap = o.shell_period_cap.value_or(kDefaultShellPeriodCap);
  const CubicReport c = cubic_report(phi, d.p, k, floor, cap);
  const Model chart = Model::affine(d.p, d.variables, {}, {phi});
  const auto fiber = fiber_data(chart);

  rep["model"] = {{"kind", "poly-chart"},
                  {"p", d.p},
                  {"precision", k},
                  {"variables", d.variables},
                  {"polynomial", phi.to_string()},
                  {"p1_extension", extension_json(c.p1_extension)}};
  rep["special_fiber"] = fiber.j;

  json fixed = json::array();
  for (const auto& r : c.fixed.records) fixed.push_back(fixed_record_json(r, d.p));
  json certified = json::array(), uncertified = json::array();
  for (const auto& cc : c.integral.certified) certified.push_back(certified_json(chart, cc));
  for (const auto& u : c.integral.uncertified) uncertified.push_back(uncertified_json(chart, u));
  json shell = json::array();
  for (const auto& s : c.shell_cycles) {
    json pts = json::array();
    for (const auto& r : s.points) pts.push_back(r.location(d.p));
    shell.push_back({{"period", s.period}, {"points", pts}});
  }
  json exhausted = json::array();
  for (const auto& b : c.fixed.exhausted)
    exhausted.push_back({{"shell", b.shell}, {"residue", b.residue}, {"depth", b.depth}});
  rep["cycles"] = {{"fixed_points", fixed},
                   {"has_rational_repelling", c.has_rational_repelling},
                   {"integral", {{"certified", certified}, {"uncertified", uncertified},
                                 {"raw_count", c.integral.raw_count}}},
                   {"shell", shell},
                   {"shell_period_cap", c.shell_period_cap},
                   {"exhausted_branches", exhausted},
                   {"max_period", c.max_period}};

  rep["bounds"] = {
      {"cubic",
       {{"value", jint(c.bound)},
        {"status", to_string(c.bound_status)},
        {"note", "valid when no Q_p-rational repelling fixed point exists; only fixed points are tested, "
                 "not repelling cycles of higher period"}}},
      {"valuation_floor",
       {{"formula", c.formula_floor}, {"used", c.floor}, {"overridden", c.floor_overridden},
        {"escape_check", "v(phi(z)) < v(z) for v(z) in [-B-3, -B-1]"}}},
      {"general", bounds_json(chart, fiber)["general"]}};

  rep["verdicts"] = json::array({{{"id", "periods"},
                                  {"inequality", "n <= (q + 1) * p^(e - 1) * (q - 1)"},
                                  {"lhs", c.max_period},
                                  {"rhs", jint(c.bound)},
                                  {"status", c.periods_within_bound ? "Holds" : "Violated"}}});
  json disc = json::array();
  if (c.reference_family && c.has_rational_repelling) {
    std::string computed;
    for (const auto& r : c.fixed.records)
      if (!r.infinity && r.cls == MultiplierClass::Repelling)
        computed += (computed.empty() ? "" : "; ") + r.location(d.p) + " has multiplier " + r.multiplier(d.p) +
                    " with valuation " + std::to_string(*r.lambda_valuation);
    disc.push_back({{"id", "repelling-fixed-point"},
                    {"claim", "z + z^2 + p*z^3 admits no Q_p-rational repelling fixed point"},
                    {"computed", computed},
                    {"convention", "repelling means v(lambda) < 0"}});
  }
  if (!c.periods_within_bound)
    disc.push_back({{"id", "periods"},
                    {"claim", "every periodic point has period <= " + c.bound.str()},
                    {"computed", "observed period " + std::to_string(c.max_period)}});
  rep["discrepancies"] = disc;
}

// ---------------------------------------------------------------- text

std::string scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

std::string join(const json& arr, const char* sep = " ") {
  std::string out;
  for (const auto& x : arr) out += (out.empty() ? "" : sep) + scalar(x);
  return out;
}

std::string render_text(const json& r) {
  std::ostringstream out;
  const auto& m = r["model"];
  const auto& meta = r["meta"];
  out << "padyn " << scalar(meta["version"]) << "  " << scalar(meta["subcommand"]) << "\n";
  out << "model      " << scalar(m["kind"]) << "  p = " << scalar(m["p"]) << "  k = " << scalar(m["precision"])
      << "\n";
  for (const char* key : {"numerator", "denominator", "polynomial"})
    if (m.contains(key)) out << "  " << key << "  " << scalar(m[key]) << "\n";
  if (m.contains("map")) out << "  map          " << join(m["map"], "; ") << "\n";
  if (m.contains("relations") && !m["relations"].empty())
    out << "  relations    " << join(m["relations"], "; ") << "\n";
  for (const char* key : {"extension", "p1_extension"})
    if (m.contains(key)) {
      const auto& e = m[key];
      out << "  " << key << "  " << scalar(e["status"]) << " (" << scalar(e["mode"]) << ")";
      if (e.contains("resultant")) out << "  Res = " << scalar(e["resultant"]);
      if (e.contains("witness")) out << "  witness " << scalar(e["witness"]);
      out << "\n";
    }
  if (const auto& f = r["special_fiber"]; !f.empty()) {
    out << "special fiber  |X(F_p)| = " << scalar(f["count"]) << "  d' = " << scalar(f["dprime"]) << "\n";
    for (const auto& c : f["cycles"]) out << "  residue cycle  " << join(c) << "\n";
  }
  if (const auto& b = r["bounds"]; !b.empty()) {
    out << "bounds\n";
    for (const auto& [name, v] : b.items()) {
      if (v.contains("value"))
        out << "  " << name << "  " << scalar(v["value"]) << (v.contains("status") ? "  " + scalar(v["status"]) : "")
            << "\n";
      else if (v.contains("used"))
        out << "  " << name << "  B = " << scalar(v["used"]) << " (formula " << scalar(v["formula"]) << ")\n";
      else if (v.contains("error"))
        out << "  " << name << "  " << scalar(v["error"]) << "\n";
    }
  }
  const auto& cy = r["cycles"];
  if (cy.contains("fixed_points")) {
    out << "fixed points\n";
    for (const auto& fp : cy["fixed_points"])
      out << "  " << scalar(fp["location"]) << "  lambda = " << scalar(fp["multiplier"]) << "  "
          << scalar(fp["class"]) << "\n";
    out << "  rational repelling fixed point: " << (cy["has_rational_repelling"].get<bool>() ? "yes" : "no") << "\n";
    for (const auto& s : cy["shell"])
      out << "  shell period " << scalar(s["period"]) << ": " << join(s["points"]) << "\n";
  }
  const json* certified = cy.contains("certified") ? &cy["certified"]
                          : cy.contains("integral") ? &cy["integral"]["certified"]
                                                    : nullptr;
  if (certified) {
    out << "certified cycles  " << certified->size() << "\n";
    for (std::size_t i = 0; i < certified->size(); ++i) {
      const auto& c = (*certified)[i];
      out << "  [" << i << "] n = " << scalar(c["period"]) << "  " << scalar(c["certificate"]) << "  "
          << join(c["points"]);
      if (!c["exact"].is_null()) out << "  = " << join(c["exact"]);
      out << "\n";
      if (c.contains("decomposition")) {
        const auto& d = c["decomposition"];
        if (d.contains("error")) {
          out << "      decomposition failed: " << scalar(d["error"]) << "\n";
        } else {
          out << "      (n, n0, r, t) = (" << scalar(d["n"]) << ", " << scalar(d["n0"]) << ", " << scalar(d["r"])
              << ", " << scalar(d["t"]) << ")  dims (" << scalar(d["dim_m"]) << ", " << scalar(d["dim_mbar"])
              << ")  " << scalar(d["mode"]) << "\n";
        }
      }
    }
  }
  const json* unc = cy.contains("uncertified") ? &cy["uncertified"]
                    : cy.contains("integral") ? &cy["integral"]["uncertified"]
                                              : nullptr;
  if (unc && !unc->empty()) {
    std::map<std::string, std::size_t> by_reason;
    for (const auto& u : *unc) ++by_reason[scalar(u["reason"])];
    out << "uncertified raw cycles";
    for (const auto& [reason, n] : by_reason) out << "  " << reason << ": " << n;
    out << "\n";
  }
  if (!r["verdicts"].empty()) {
    out << "verdicts\n";
    for (const auto& v : r["verdicts"]) {
      if (v.contains("checks")) {
        out << "  cycle [" << scalar(v["cycle"]) << "] n = " << scalar(v["period"]) << "\n";
        for (const auto& c : v["checks"])
          out << "    " << scalar(c["id"]) << "  " << scalar(c["inequality"]) << "   " << scalar(c["lhs"])
              << " <= " << scalar(c["rhs"]) << "   " << scalar(c["status"]) << "\n";
      } else {
        out << "  " << scalar(v["id"]) << "  " << scalar(v["inequality"]) << "   " << scalar(v["lhs"])
            << " <= " << scalar(v["rhs"]) << "   " << scalar(v["status"]) << "\n";
      }
    }
  }
  if (!r["discrepancies"].empty()) {
    out << "discrepancies\n";
    for (const auto& d : r["discrepancies"])
      out << "  " << scalar(d["id"]) << ": claim \"" << scalar(d["claim"]) << "\"; computed " << scalar(d["computed"])
          << "\n";
  }
  return out.str();
}

RunResult finish(const json& rep, const RunOptions& o, ExitCode code = ExitCode::Ok) {
  RunResult res;
  res.code = code;
  res.output = o.json ? rep.dump(2) + "\n" : render_text(rep);
  return res;
}

}  // namespace

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::NonIntegralCoefficient:
    case ErrorCode::UnknownVariable:
    case ErrorCode::InvalidArgument:
    case ErrorCode::SearchSpaceTooLarge:
    case ErrorCode::UnsupportedPrime:
    case ErrorCode::MismatchedRing:
      return ExitCode::Usage;
    case ErrorCode::ModelRejected:
      return ExitCode::Rejected;
    default:
      return ExitCode::Precision;
  }
}

RunResult run(const std::string& sub, const MapDescription& d, const RunOptions& o) {
  static const std::vector<std::string> known{"analyze", "enumerate", "decompose", "verify", "cubic"};
  if (std::find(known.begin(), known.end(), sub) == known.end())
    return {ExitCode::Usage, "", "unknown subcommand '" + sub + "'"};
  try {
    const int k = o.precision.value_or(d.precision);
    if (k < kMinPrecision || k > 62) throw Error(ErrorCode::InvalidArgument, "precision out of range");
    json rep = empty_report();
    rep["meta"] = meta_json(sub, d, k, o);

    if (sub == "cubic") {
      if (d.kind == MapKind::Affine) throw Error(ErrorCode::InvalidArgument, "cubic needs a univariate map");
      if (d.kind == MapKind::P1 && d.denominator != "1")
        throw Error(ErrorCode::InvalidArgument, "cubic needs a polynomial map");
      cubic_sections(rep, d, k, o);
      return finish(rep, o);
    }

    const Model model = build_model(d);
    const ExtensionCheck ext = check_extends(model, k);
    rep["model"] = model_json(d, model, k, ext);
    if (!ext.ok()) {
      RunResult res = finish(rep, o, ExitCode::Rejected);
      res.error = "model rejected: " + ext.reason;
      return res;
    }
    const FiberData fiber = fiber_data(model);
    rep["special_fiber"] = fiber.j;
    rep["bounds"] = bounds_json(model, fiber);
    if (sub == "analyze") return finish(rep, o);

    const PeriodicPoints pp = find_periodic_points(model, k);
    json certified = json::array(), uncertified = json::array();
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < pp.certified.size(); ++i) {
      certified.push_back(certified_json(model, pp.certified[i]));
      chosen.push_back(i);
    }
    for (const auto& u : pp.uncertified) uncertified.push_back(uncertified_json(model, u));

    if (sub == "decompose" && o.point) {
      const auto pt = parse_point(*o.point, d);
      const ModRing ring(d.p, k);
      const Point target = model.reduce_exact(*pt, ring);
      chosen.clear();
      for (std::size_t i = 0; i < pp.certified.size(); ++i) {
        const auto& pts = pp.certified[i].points;
        if (std::find(pts.begin(), pts.end(), target) != pts.end()) chosen.push_back(i);
      }
      if (chosen.empty())
        throw Error(ErrorCode::InvalidArgument, "point " + *o.point + " is not on a certified cycle");
      json only = json::array();
      for (auto i : chosen) only.push_back(certified[i]);
      certified = only;
    }

    if (sub == "decompose" || sub == "verify") {
      json verdicts = json::array(), disc = json::array();
      const ModelStats stats{d.p, fiber.count, fiber.dprime};
      for (std::size_t j = 0; j < chosen.size(); ++j) {
        const auto& cyc = pp.certified[chosen[j]];
        json& entry = certified[j];
        PeriodDecomposition dec;
        try {
          dec = decompose(model, k, cyc, fiber.graph);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::PrecisionExhausted) throw;
          entry["decomposition"] = {{"error", e.what()}};
          disc.push_back({{"id", "decomposition"}, {"cycle", j}, {"claim", "n = n0 * r * p^t"},
                          {"computed", e.what()}});
          continue;
        }
        entry["decomposition"] = decomposition_json(model, dec);
        if (sub != "verify") continue;
        const VerdictSet vs = verify_claims(dec, stats);
        json checks = json::array();
        for (const Verdict* v : {&vs.c1, &vs.c2, &vs.c3, &vs.c4}) {
          checks.push_back(verdict_json(*v));
          if (v->status == VerdictStatus::Violated) {
            std::ostringstream w;
            w << v->id << ": " << v->lhs << " > " << v->rhs << " with (n, n0, r, t) = (" << dec.n << ", " << dec.n0
              << ", " << dec.r << ", " << dec.t << ")";
            disc.push_back({{"id", v->id},
                            {"cycle", j},
                            {"claim", v->inequality},
                            {"computed", w.str()},
                            {"points", describe_all(cyc.points, model.kind())}});
          }
        }
        verdicts.push_back({{"cycle", j}, {"period", cyc.period}, {"checks", checks}, {"all_hold", vs.all_hold()}});
      }
      rep["verdicts"] = verdicts;
      rep["discrepancies"] = disc;
    }
    rep["cycles"] = {{"certified", certified}, {"uncertified", uncertified}, {"raw_count", pp.raw_count}};
    return finish(rep, o);
  } catch (const Error& e) {
    return {exit_code_for(e.code()), "", e.what()};
  }
}

RunResult run_text(const std::string& sub, const std::string& text, const RunOptions& o) {
  try {
    return run(sub, parse_map_description(text), o);
  } catch (const Error& e) {
    return {exit_code_for(e.code()), "", e.what()};
  }
}

}  // namespace padyn
