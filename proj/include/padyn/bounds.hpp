#pragma once

// Closed-form period bounds.

#include <cstdint>

#include "padyn/padic.hpp"

namespace padyn {

struct BoundInputs {
  BigInt count;        // |special fiber(k)|
  std::uint64_t p = 2;
  int e = 1;           // ramification v(p)
  BigInt q;            // residue field size
  int dprime = 1;

  void validate() const;
};

/// count * p^(e-1) * (q^d' - 1) for p > 2; count * 2^e * (q^d' - 1) for p = 2.
BigInt bound_general(const BoundInputs& b);

/// (q + 1) * p^(e-1) * (q - 1); p must be odd.
BigInt bound_cubic(std::uint64_t p, int e, const BigInt& q);

/// Largest p-power exponent the aggregate bound allows: e - 1 (p odd), e (p = 2).
int t_max(std::uint64_t p, int e);

}  // namespace padyn
