#pragma once

// Models over Z_p (P^1 with a rational map, or an affine subscheme of A^N with
// a polynomial endomorphism) and their special fibers.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padyn/linalg.hpp"
#include "padyn/padic.hpp"
#include "padyn/polynomial.hpp"

namespace padyn {

enum class ModelKind { P1, Affine };
enum class Chart { Affine = 0, Infinity = 1 };

/// A point of the model modulo p^k (or mod p on the special fiber). P^1
/// points use canonical two-chart form: (x : 1), or (1 : w) with v(w) >= 1.
struct Point {
  Chart chart = Chart::Affine;
  std::vector<std::uint64_t> coords;

  auto operator<=>(const Point&) const = default;
  bool operator==(const Point&) const = default;
};

struct PointHash {
  std::size_t operator()(const Point& pt) const noexcept {
    std::size_t h = static_cast<std::size_t>(pt.chart);
    for (auto c : pt.coords) h = h * 1000003u ^ std::hash<std::uint64_t>{}(c);
    return h;
  }
};

Point reduce(const Point& pt, const ModRing& from, const ModRing& to);

/// Canonical form of a homogeneous pair (a : b) with at least one unit entry.
Point canonical_p1(const ModRing& ring, std::uint64_t a, std::uint64_t b);

/// Exact rational point (P^1 infinity or affine coordinates).
struct ExactPoint {
  bool infinity = false;
  std::vector<Rational> coords;

  bool operator==(const ExactPoint&) const = default;
};

std::string describe(const Point& pt, ModelKind kind);
std::string describe(const ExactPoint& pt, ModelKind kind);

class Model;

/// Model map compiled for one residue ring.
class MapEvaluator {
 public:
  MapEvaluator(const Model& model, const ModRing& ring);

  const ModRing& ring() const noexcept { return ring_; }
  Point apply(const Point& pt) const;
  /// Derivative (Jacobian) of the chart-local map at pt into the chart of its image.
  Matrix derivative(const Point& pt) const;
  /// P^1 only: derivative of the map read in the given source/target charts.
  std::uint64_t derivative_in_charts(Chart source, std::uint64_t coord, Chart target) const;
  bool satisfies_relations(const Point& pt) const;
  std::vector<std::uint64_t> relation_values(const Point& pt) const;

 private:
  struct ChartValues {
    std::uint64_t a, da, b, db;
  };
  ChartValues chart_values(Chart chart, std::uint64_t coord) const;

  const Model* model_;
  ModRing ring_;
  DenseModPoly num_, den_, num_rev_, den_rev_;
  std::vector<CompiledPolynomial> map_, relations_;
  std::vector<std::vector<CompiledPolynomial>> jacobian_;
};

enum class ExtensionStatus { GoodReductionP1, AffineVerified, Rejected };
enum class VerificationMode { None, Exact, Sampled };

struct ExtensionCheck {
  ExtensionStatus status = ExtensionStatus::Rejected;
  VerificationMode mode = VerificationMode::None;
  std::string reason;
  std::string witness;
  std::optional<Rational> resultant;      // P^1 only
  std::optional<int> resultant_valuation;  // P^1 only; nullopt = zero resultant

  bool ok() const noexcept { return status != ExtensionStatus::Rejected; }
};

struct SpecialFiberPoint {
  Point point;
  int cotangent_dimension = 0;

  bool operator==(const SpecialFiberPoint&) const = default;
};

inline constexpr std::uint64_t kSpecialFiberBudget = 10'000'000;
inline constexpr std::uint64_t kLiftingBudget = 20'000'000;

class Model {
 public:
  /// f = numerator / denominator, both univariate in the same variable.
  static Model p1(std::uint64_t p, const Polynomial& numerator, const Polynomial& denominator);
  static Model affine(std::uint64_t p, std::vector<std::string> variables,
                      std::vector<Polynomial> relations, std::vector<Polynomial> map);

  ModelKind kind() const noexcept { return kind_; }
  std::uint64_t p() const noexcept { return p_; }
  const std::vector<std::string>& variables() const noexcept { return vars_; }
  std::size_t ambient_dim() const noexcept { return kind_ == ModelKind::P1 ? 1 : vars_.size(); }
  int expected_dim() const noexcept;

  // P^1 data: dense coefficients padded to degree d (index = power of x).
  int degree() const noexcept { return degree_; }
  const std::vector<Rational>& numerator() const noexcept { return num_; }
  const std::vector<Rational>& denominator() const noexcept { return den_; }
  const Polynomial& numerator_poly() const noexcept { return num_poly_; }
  const Polynomial& denominator_poly() const noexcept { return den_poly_; }

  // Affine data.
  const std::vector<Polynomial>& relations() const noexcept { return relations_; }
  const std::vector<Polynomial>& map() const noexcept { return map_; }

  /// True when the affine model is the line A^1 with a polynomial map (curve chart).
  bool is_affine_line() const noexcept {
    return kind_ == ModelKind::Affine && vars_.size() == 1 && relations_.empty();
  }

  MapEvaluator evaluator(const ModRing& ring) const { return MapEvaluator(*this, ring); }

  /// Exact image; nullopt never happens for P^1 with nonzero resultant.
  ExactPoint apply_exact(const ExactPoint& pt) const;
  bool satisfies_relations_exact(const ExactPoint& pt) const;

  /// Residue of an exact point in the given ring (throws if not p-integral).
  Point reduce_exact(const ExactPoint& pt, const ModRing& ring) const;

 private:
  ModelKind kind_ = ModelKind::P1;
  std::uint64_t p_ = 2;
  std::vector<std::string> vars_;
  int degree_ = 0;
  std::vector<Rational> num_, den_;
  Polynomial num_poly_, den_poly_;
  std::vector<Polynomial> relations_, map_;
};

/// Resultant of binary forms F = sum f_i X^i Z^(d-i), G likewise (Sylvester determinant).
Rational resultant(const std::vector<Rational>& f, const std::vector<Rational>& g);

ExtensionCheck check_extends(const Model& model, int k);

/// All points of the model modulo p^k, in canonical lexicographic order.
std::vector<Point> enumerate_points(const Model& model, const ModRing& ring,
                                    std::uint64_t budget = kLiftingBudget);

SpecialFiberPoint reduce_point(const Model& model, const ModRing& ring, const Point& pt);
std::vector<SpecialFiberPoint> enumerate_special_fiber(const Model& model);
int cotangent_dim(const Model& model, const Point& fiber_point);
int d_prime(const Model& model);

const char* to_string(ExtensionStatus s);
const char* to_string(VerificationMode m);

}  // namespace padyn
