#include "padyn/padic.hpp"

#include <cmath>

namespace padyn {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NonIntegralCoefficient: return "NonIntegralCoefficient";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MismatchedRing: return "MismatchedRing";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::CapExceeded: return "InternalError(CapExceeded)";
    case ErrorCode::NotAPPower: return "NotAPPower";
    case ErrorCode::DegenerateBound: return "DegenerateBound";
    case ErrorCode::UnsupportedPrime: return "UnsupportedPrime";
    case ErrorCode::ModelRejected: return "ModelRejected";
    case ErrorCode::Internal: return "InternalError";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::optional<int> vp(const BigInt& x, std::uint64_t p) {
  if (x == 0) return std::nullopt;
  BigInt y = abs(x);
  int v = 0;
  while (y % p == 0) {
    y /= p;
    ++v;
  }
  return v;
}

std::optional<int> vp(const Rational& x, std::uint64_t p) {
  if (x == 0) return std::nullopt;
  return *vp(BigInt(numerator(x)), p) - *vp(BigInt(denominator(x)), p);
}

std::uint64_t ipow_checked(std::uint64_t p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::uint64_t{1} << 62) / p)
      throw Error(ErrorCode::SearchSpaceTooLarge,
                  std::to_string(p) + "^" + std::to_string(e) + " exceeds 62 bits");
    r *= p;
  }
  return r;
}

ModRing::ModRing(std::uint64_t p, int k) : p_(p), k_(k) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "precision must be >= 1");
  mod_ = ipow_checked(p, k);
}

std::uint64_t ModRing::pow(std::uint64_t a, std::uint64_t e) const noexcept {
  std::uint64_t r = 1 % mod_;
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::optional<int> ModRing::valuation(std::uint64_t a) const noexcept {
  if (a == 0) return std::nullopt;
  int v = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

std::uint64_t ModRing::inv(std::uint64_t a) const {
  if (!is_unit(a)) throw Error(ErrorCode::NotAUnit, std::to_string(a) + " mod " + std::to_string(mod_));
  // extended Euclid on signed 128-bit values
  __int128 r0 = mod_, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    __int128 q = r0 / r1;
    __int128 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  __int128 m = mod_;
  __int128 res = s0 % m;
  if (res < 0) res += m;
  return static_cast<std::uint64_t>(res);
}

std::uint64_t ModRing::reduce(const BigInt& x) const {
  BigInt r = x % mod_;
  if (r < 0) r += mod_;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t ModRing::reduce(const Rational& x) const {
  BigInt den = denominator(x);
  if (den % p_ == 0)
    throw Error(ErrorCode::NonIntegralCoefficient, to_string(x) + " has denominator divisible by " +
                                                       std::to_string(p_));
  return mul(reduce(BigInt(numerator(x))), inv(reduce(den)));
}

std::uint64_t ModRing::reduce_signed(std::int64_t x) const {
  __int128 m = mod_;
  __int128 r = static_cast<__int128>(x) % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t ModRing::shift_down(std::uint64_t a, int e) const noexcept {
  for (int i = 0; i < e; ++i) a /= p_;
  return a;
}

std::string Valuation::to_string() const {
  return value ? std::to_string(*value) : ">=" + std::to_string(k);
}

PAdicApprox::PAdicApprox(std::uint64_t p, int k, std::uint64_t value) : p_(p), k_(k), value_(value) {
  ModRing ring(p, k);  // validates p and k
  if (value >= ring.modulus())
    throw Error(ErrorCode::InvalidArgument, "residue out of range [0, p^k)");
}

PAdicApprox PAdicApprox::from_integer(std::uint64_t p, int k, const BigInt& x) {
  return PAdicApprox(p, k, ModRing(p, k).reduce(x));
}

PAdicApprox PAdicApprox::from_rational(std::uint64_t p, int k, const Rational& x) {
  return PAdicApprox(p, k, ModRing(p, k).reduce(x));
}

void PAdicApprox::check_compatible(const PAdicApprox& o) const {
  if (p_ != o.p_ || k_ != o.k_)
    throw Error(ErrorCode::MismatchedRing, "operands live in different residue rings");
}

PAdicApprox PAdicApprox::operator+(const PAdicApprox& o) const {
  check_compatible(o);
  return PAdicApprox(p_, k_, ring().add(value_, o.value_));
}
PAdicApprox PAdicApprox::operator-(const PAdicApprox& o) const {
  check_compatible(o);
  return PAdicApprox(p_, k_, ring().sub(value_, o.value_));
}
PAdicApprox PAdicApprox::operator*(const PAdicApprox& o) const {
  check_compatible(o);
  return PAdicApprox(p_, k_, ring().mul(value_, o.value_));
}
PAdicApprox PAdicApprox::operator-() const { return PAdicApprox(p_, k_, ring().neg(value_)); }

Valuation valuation(const PAdicApprox& x) { return {x.ring().valuation(x.value()), x.k()}; }

PAdicApprox invert_unit(const PAdicApprox& x) {
  return PAdicApprox(x.p(), x.k(), x.ring().inv(x.value()));
}

std::optional<Rational> rational_reconstruct(const ModRing& ring, std::uint64_t r) {
  const std::uint64_t m = ring.modulus();
  const auto bound = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(m - 1) / 2.0L));
  // half-extended Euclid on (m, r) tracking the cofactor of r
  __int128 r0 = m, r1 = r, t0 = 0, t1 = 1;
  while (r1 > bound) {
    __int128 q = r0 / r1;
    __int128 tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t1 == 0) return std::nullopt;
  __int128 a = r1, b = t1;
  if (b < 0) {
    a = -a;
    b = -b;
  }
  if (b > bound || b % static_cast<__int128>(ring.p()) == 0) return std::nullopt;
  Rational q(BigInt(static_cast<std::int64_t>(a)), BigInt(static_cast<std::int64_t>(b)));
  if (ring.reduce(q) != r) return std::nullopt;
  return q;
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace padyn
