#pragma once

#include <functional>
#include <vector>

#include "padyn/padic.hpp"
#include "padyn/polynomial.hpp"

namespace padyn {

struct ValueAndSlope {
  std::uint64_t value;
  std::uint64_t slope;
};

/// Evaluates a univariate analytic function and its derivative at a residue of
/// the given ring. Must be well defined at any precision.
using LocalFunction = std::function<ValueAndSlope(const ModRing&, std::uint64_t)>;

/// Newton iteration on G starting from the representative a of a class mod p^k,
/// given that v(G'(a)) = slope_valuation and v(G(a)) > 2*slope_valuation.
/// Works internally at precision k + slope_valuation + 1 and returns the root
/// modulo p^k. Throws PrecisionExhausted if it fails to converge.
std::uint64_t newton_refine(const LocalFunction& g, std::uint64_t p, int k, std::uint64_t a,
                            int slope_valuation);

/// Lifts a to the unique root of F in its congruence class (quadratic criterion).
PAdicApprox hensel_refine(const Polynomial& f, const PAdicApprox& a);

/// Multivariate Newton lifting of a simple root mod p.
std::vector<PAdicApprox> newton_refine_system(const std::vector<Polynomial>& system,
                                              const std::vector<PAdicApprox>& a);

}  // namespace padyn
