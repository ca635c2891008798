#include "padyn/hensel.hpp"

#include "padyn/linalg.hpp"

namespace padyn {

namespace {
constexpr int kMaxNewtonSteps = 64;
}

std::uint64_t newton_refine(const LocalFunction& g, std::uint64_t p, int k, std::uint64_t a,
                            int slope_valuation) {
  const int e = slope_valuation;
  const ModRing work(p, k + e + 1);
  const ModRing target(p, k + e);
  const ModRing out(p, k);
  std::uint64_t x = a % work.modulus();
  for (int step = 0; step < kMaxNewtonSteps; ++step) {
    const auto [value, slope] = g(work, x);
    if (value % target.modulus() == 0) return x % out.modulus();
    const auto vs = work.valuation(slope);
    const auto vv = work.valuation(value);
    if (!vs || *vs != e || !vv || *vv < e)
      throw Error(ErrorCode::PrecisionExhausted, "Newton iteration lost its slope");
    const ModRing quot(p, k + 1);  // step known modulo p^(work.k - e)
    const std::uint64_t num = work.shift_down(value, e) % quot.modulus();
    const std::uint64_t den = work.shift_down(slope, e) % quot.modulus();
    const std::uint64_t delta = quot.mul(num, quot.inv(den));
    x = work.sub(x, delta);
  }
  throw Error(ErrorCode::PrecisionExhausted, "Newton iteration did not converge");
}

PAdicApprox hensel_refine(const Polynomial& f, const PAdicApprox& a) {
  if (f.arity() != 1) throw Error(ErrorCode::InvalidArgument, "hensel_refine needs a univariate polynomial");
  const ModRing ring = a.ring();
  const Polynomial df = f.derivative(0);
  const std::uint64_t x[] = {a.value()};
  const auto vf = ring.valuation(f.eval_mod(ring, x));
  const auto vd = ring.valuation(df.eval_mod(ring, x));
  if (!vd) throw Error(ErrorCode::PrecisionExhausted, "F'(a) vanishes modulo p^k");
  const int resolved_vf = vf.value_or(a.k());
  if (vf && *vf <= 2 * *vd)
    throw Error(ErrorCode::PreconditionViolated,
                "v(F(a)) = " + std::to_string(*vf) + " is not > 2*v(F'(a)) = " + std::to_string(2 * *vd));
  if (!vf && resolved_vf <= 2 * *vd)
    throw Error(ErrorCode::PrecisionExhausted, "quadratic criterion unresolved at precision k");
  LocalFunction g = [&](const ModRing& r, std::uint64_t t) {
    const std::uint64_t pt[] = {t};
    return ValueAndSlope{f.eval_mod(r, pt), df.eval_mod(r, pt)};
  };
  return PAdicApprox(a.p(), a.k(), newton_refine(g, a.p(), a.k(), a.value(), *vd));
}

std::vector<PAdicApprox> newton_refine_system(const std::vector<Polynomial>& system,
                                              const std::vector<PAdicApprox>& a) {
  const std::size_t n = system.size();
  if (n == 0 || a.size() != n) throw Error(ErrorCode::InvalidArgument, "system must be square");
  const ModRing ring = a[0].ring();
  for (const auto& c : a)
    if (!(c.ring() == ring)) throw Error(ErrorCode::MismatchedRing, "mixed rings in Newton seed");
  std::vector<CompiledPolynomial> fs;
  std::vector<std::vector<CompiledPolynomial>> jac(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (system[i].arity() != n) throw Error(ErrorCode::InvalidArgument, "system must be square");
    fs.emplace_back(system[i], ring);
    for (std::size_t j = 0; j < n; ++j) jac[i].emplace_back(system[i].derivative(j), ring);
  }
  std::vector<std::uint64_t> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i].value();

  for (std::size_t i = 0; i < n; ++i)
    if (fs[i].eval(x) % ring.p() != 0)
      throw Error(ErrorCode::PreconditionViolated, "seed is not a root modulo p");
  for (int step = 0; step < 64; ++step) {
    std::vector<std::uint64_t> fx(n);
    bool done = true;
    for (std::size_t i = 0; i < n; ++i) {
      fx[i] = fs[i].eval(x);
      done = done && fx[i] == 0;
    }
    Matrix j(n, std::vector<std::uint64_t>(n));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) j[r][c] = jac[r][c].eval(x);
    const Matrix inv = inverse_mod(j, ring);  // throws SingularJacobian
    if (done) break;
    for (std::size_t r = 0; r < n; ++r) {
      std::uint64_t delta = 0;
      for (std::size_t c = 0; c < n; ++c) delta = ring.add(delta, ring.mul(inv[r][c], fx[c]));
      x[r] = ring.sub(x[r], delta);
    }
    if (step == 63) throw Error(ErrorCode::PrecisionExhausted, "Newton iteration did not converge");
  }
  std::vector<PAdicApprox> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(ring.p(), ring.k(), x[i]);
  return out;
}

}  // namespace padyn
