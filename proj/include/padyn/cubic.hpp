#pragma once

// Fixed points of polynomial maps over Q_p in a valuation window, multiplier
// classes, and the cubic workflow for maps with bad reduction at infinity.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padyn/models.hpp"
#include "padyn/period.hpp"
#include "padyn/polynomial.hpp"

namespace padyn {

enum class MultiplierClass { Attracting, Indifferent, Repelling };
const char* to_string(MultiplierClass c);

/// v(lambda) > 0, = 0, < 0. Zero counts as attracting.
MultiplierClass classify_multiplier(const Rational& lambda, std::uint64_t p);
MultiplierClass classify_valuation(std::optional<int> v);

struct FixedPointRecord {
  bool infinity = false;
  bool superattracting = false;
  std::optional<int> valuation;       // v(x); nullopt for x = 0
  std::optional<Rational> exact;      // when reconstructed and verified
  std::uint64_t digits = 0;           // x = digits / p^shell + O(p^(precision - shell))
  int shell = 0;
  int precision = 0;
  std::optional<Rational> lambda;     // exact multiplier
  std::optional<int> lambda_valuation;
  MultiplierClass cls = MultiplierClass::Indifferent;

  std::string location(std::uint64_t p) const;
  std::string multiplier(std::uint64_t p) const;
};

struct RootBranch {
  int shell = 0;
  std::uint64_t residue = 0;  // y mod p^depth
  int depth = 0;
};

struct RootSearch {
  std::vector<FixedPointRecord> roots;  // finite roots, sorted by (valuation, digits)
  std::vector<RootBranch> exhausted;    // branches still ambiguous at depth k
};

/// Roots in Q_p of a nonzero polynomial with v(x) >= -floor, each lifted to k digits.
RootSearch roots_in_window(const std::vector<Rational>& poly, std::uint64_t p, int floor, int k,
                           int min_shell = 0);

struct FixedPointSearch {
  bool all_points_fixed = false;
  std::vector<FixedPointRecord> records;  // finite roots, then infinity
  std::vector<RootBranch> exhausted;
};

FixedPointSearch fixed_points_affine(const Polynomial& phi, std::uint64_t p, int floor, int k = 8);

/// Newton-polygon floor: below -B the leading term dominates.
int valuation_floor(const Polynomial& phi, std::uint64_t p);
/// v(phi(z)) < v(z) for z = u / p^m, m = B+1..B+3, u over small units.
bool escape_check(const Polynomial& phi, std::uint64_t p, int floor);

struct ShellCycle {
  std::size_t period = 0;
  std::vector<FixedPointRecord> points;
};

enum class BoundStatus { Conditional, HypothesisNotMet };
const char* to_string(BoundStatus s);

struct CubicReport {
  std::uint64_t p = 3;
  int k = 0;
  int floor = 0;
  int formula_floor = 0;  // before the escape check
  bool floor_overridden = false;
  ExtensionCheck p1_extension;
  FixedPointSearch fixed;
  bool has_rational_repelling = false;
  BigInt bound;
  BoundStatus bound_status = BoundStatus::Conditional;
  bool reference_family = false;  // z + z^2 + p z^3
  PeriodicPoints integral;    // v >= 0 via the A^1 chart
  std::vector<ShellCycle> shell_cycles;
  int shell_period_cap = 3;
  std::size_t max_period = 0;
  bool periods_within_bound = true;
};

inline constexpr int kDefaultShellPeriodCap = 3;

CubicReport cubic_report(const Polynomial& phi, std::uint64_t p, int k, std::optional<int> floor_override = {},
                         int shell_period_cap = kDefaultShellPeriodCap);

}  // namespace padyn
