#pragma once

// Periodic points mod p^k: enumeration, certification against true Z_p cycles,
// and the period decomposition n = n0 * r * p^t through the orbit ring.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padyn/bounds.hpp"
#include "padyn/dynamics.hpp"
#include "padyn/linalg.hpp"
#include "padyn/models.hpp"

namespace padyn {

/// An exact cycle of the finite map induced on points mod p^k.
struct RawCycle {
  std::vector<Point> points;

  std::size_t length() const noexcept { return points.size(); }
  bool operator==(const RawCycle&) const = default;
};

enum class CertificateKind { HenselQuadratic, Contraction, ExactRational };
enum class UncertifiedReason { IncreasePrecision, NoSeparation };

const char* to_string(CertificateKind c);
const char* to_string(UncertifiedReason r);

struct CertifiedCycle {
  std::vector<Point> points;  // the true cycle mod p^k, starting at its smallest point
  std::size_t period = 0;
  CertificateKind certificate = CertificateKind::HenselQuadratic;
  /// v(Lambda - 1) for curve charts (0 for the unit case); nullopt when unresolved.
  std::optional<int> slope_valuation;
  /// Radius of the uniqueness tube: the true point is unique modulo p^uniqueness_level.
  int uniqueness_level = 1;
  /// Lower bound recorded for v(F(a) - a) at certification (k when exact mod p^k).
  int defect_valuation = 0;
  Matrix multiplier;  // cycle Jacobian mod p^k
  std::optional<std::vector<ExactPoint>> exact;
  std::size_t merged_raw = 1;  // raw cycles that refine onto this one
};

struct CertificationResult {
  std::optional<CertifiedCycle> cycle;
  UncertifiedReason reason = UncertifiedReason::IncreasePrecision;
  std::string detail;
  bool shadow = false;  // certified, but the raw cycle is not the reduction of the true one
};

/// f^n(P) mod p^k.
Point iterate(const Model& model, const ModRing& ring, const Point& pt, std::uint64_t n);

/// All cycles of the map induced on points mod p^k (canonical order).
std::vector<RawCycle> enumerate_periodic(const Model& model, int k,
                                         std::uint64_t budget = kLiftingBudget);

CertificationResult certify_cycle(const Model& model, int k, const RawCycle& cycle);

struct UncertifiedCycle {
  RawCycle cycle;
  UncertifiedReason reason;
  std::string detail;
};

struct PeriodicPoints {
  std::size_t raw_count = 0;
  std::vector<CertifiedCycle> certified;  // sorted by (period, first point)
  std::vector<UncertifiedCycle> uncertified;
};

/// Enumerate, certify and merge raw cycles that refine onto the same true cycle.
PeriodicPoints find_periodic_points(const Model& model, int k);

enum class DecompositionMode { OrbitRingExact, AmbientCertificate };
const char* to_string(DecompositionMode m);

struct PeriodDecomposition {
  std::uint64_t n = 1, n0 = 1, s = 1, r = 1;
  int t = 0;  // -1 when s/r is not a p-power (ambient mode only)
  int dim_m = 1, dim_mbar = 0;
  Matrix sigma_bar;  // action on the cotangent space over F_p
  DecompositionMode mode = DecompositionMode::OrbitRingExact;
  std::optional<std::uint64_t> r_on_m;  // order of sigma on m/m^2, when computed
  Matrix sigma_on_m;
  std::vector<Point> sub_orbit;  // the g = f^n0 orbit of the base point
  std::vector<std::uint64_t> orbit_polynomial;  // u(y), y = x - lift of the residue; low to high
  bool ambient_divides = true;  // n | n0 * r * p^t_max (ambient mode)
};

/// dim_k(m/m^2) and dim_k(mbar/mbar^2) for A = Z_p[y]/(u), m = (y, p).
std::pair<int, int> orbit_cotangent_dims(const ModRing& ring, const std::vector<std::uint64_t>& u);

PeriodDecomposition decompose(const Model& model, int k, const CertifiedCycle& cycle,
                              const FunctionalGraph& fiber_graph);

struct ModelStats {
  std::uint64_t p = 2;
  std::size_t fiber_count = 0;
  int dprime = 1;
};

enum class VerdictStatus { Holds, Violated };
const char* to_string(VerdictStatus s);

struct Verdict {
  std::string id;          // C1..C4
  std::string inequality;  // e.g. "n0 <= |X(F_p)|"
  VerdictStatus status = VerdictStatus::Holds;
  BigInt lhs, rhs;
};

struct VerdictSet {
  Verdict c1, c2, c3, c4;
  PeriodDecomposition decomposition;
  BoundInputs inputs;

  bool all_hold() const {
    for (const Verdict* v : {&c1, &c2, &c3, &c4})
      if (v->status != VerdictStatus::Holds) return false;
    return true;
  }
};

VerdictSet verify_claims(const PeriodDecomposition& dec, const ModelStats& stats);

}  // namespace padyn
