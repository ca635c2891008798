#pragma once

// Finite-precision model of Z_p as the residue ring Z/p^k.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "padyn/error.hpp"

namespace padyn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kDefaultPrecision = 6;
inline constexpr int kMinPrecision = 2;

bool is_prime(std::uint64_t n);

/// p-adic valuation of a nonzero integer; nullopt for zero.
std::optional<int> vp(const BigInt& x, std::uint64_t p);
/// Valuation of a nonzero rational (may be negative); nullopt for zero.
std::optional<int> vp(const Rational& x, std::uint64_t p);

/// Integral power p^e, throwing SearchSpaceTooLarge once it leaves 62 bits.
std::uint64_t ipow_checked(std::uint64_t p, int e);

/// Arithmetic context for Z/p^k. Residues are canonical values in [0, p^k).
class ModRing {
 public:
  ModRing(std::uint64_t p, int k);

  std::uint64_t p() const noexcept { return p_; }
  int k() const noexcept { return k_; }
  std::uint64_t modulus() const noexcept { return mod_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    std::uint64_t s = a + b;
    return s >= mod_ ? s - mod_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + mod_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const noexcept { return a == 0 ? 0 : mod_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % mod_);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const noexcept;

  /// Largest j <= k with p^j | a; nullopt when a == 0 (valuation >= k).
  std::optional<int> valuation(std::uint64_t a) const noexcept;
  bool is_unit(std::uint64_t a) const noexcept { return a % p_ != 0; }
  /// Throws NotAUnit.
  std::uint64_t inv(std::uint64_t a) const;

  std::uint64_t reduce(const BigInt& x) const;
  /// a/b with v_p(b) = 0; throws NonIntegralCoefficient otherwise.
  std::uint64_t reduce(const Rational& x) const;
  std::uint64_t reduce_signed(std::int64_t x) const;

  /// Reduces a residue of this ring into a coarser ring of the same prime.
  std::uint64_t truncate(std::uint64_t a, const ModRing& coarser) const noexcept {
    return a % coarser.modulus();
  }

  /// Exact division of a by p^e, the result known modulo p^(k-e).
  std::uint64_t shift_down(std::uint64_t a, int e) const noexcept;

  bool operator==(const ModRing& o) const noexcept { return p_ == o.p_ && k_ == o.k_; }

 private:
  std::uint64_t p_;
  int k_;
  std::uint64_t mod_;
};

/// Valuation result that keeps "unresolved at this precision" explicit.
struct Valuation {
  std::optional<int> value;  // nullopt == AtLeastK
  int k = 0;

  bool at_least_k() const noexcept { return !value.has_value(); }
  bool operator==(const Valuation&) const = default;
  std::string to_string() const;
};

/// An element of Z/p^k standing for a coset of Z_p.
class PAdicApprox {
 public:
  PAdicApprox(std::uint64_t p, int k, std::uint64_t value);
  static PAdicApprox from_integer(std::uint64_t p, int k, const BigInt& x);
  static PAdicApprox from_rational(std::uint64_t p, int k, const Rational& x);

  std::uint64_t p() const noexcept { return p_; }
  int k() const noexcept { return k_; }
  std::uint64_t value() const noexcept { return value_; }
  ModRing ring() const { return ModRing(p_, k_); }

  PAdicApprox operator+(const PAdicApprox& o) const;
  PAdicApprox operator-(const PAdicApprox& o) const;
  PAdicApprox operator*(const PAdicApprox& o) const;
  PAdicApprox operator-() const;

  bool operator==(const PAdicApprox&) const = default;

 private:
  void check_compatible(const PAdicApprox& o) const;

  std::uint64_t p_;
  int k_;
  std::uint64_t value_;
};

Valuation valuation(const PAdicApprox& x);
PAdicApprox invert_unit(const PAdicApprox& x);

/// Rational reconstruction: a/b with |a|, b <= floor(sqrt((p^k - 1) / 2)),
/// gcd(b, p) = 1 and a == r*b mod p^k. nullopt when no such fraction exists.
std::optional<Rational> rational_reconstruct(const ModRing& ring, std::uint64_t r);

std::string to_string(const Rational& q);

}  // namespace padyn
