#pragma once

// Dense linear algebra over Z/p^e (local ring; pivots chosen by minimal valuation).

#include <cstdint>
#include <vector>

#include "padyn/padic.hpp"

namespace padyn {

using Matrix = std::vector<std::vector<std::uint64_t>>;

Matrix identity_matrix(std::size_t n);
Matrix mat_mul(const ModRing& ring, const Matrix& a, const Matrix& b);
Matrix reduce_matrix(const Matrix& m, const ModRing& from, const ModRing& to);

/// Rank over F_p (entries are reduced mod p first).
std::size_t rank_mod_p(Matrix m, std::uint64_t p);

/// Basis of the right kernel over F_p.
std::vector<std::vector<std::uint64_t>> nullspace_mod_p(Matrix m, std::uint64_t p);

/// Inverse over Z/p^k; throws SingularJacobian when det is not a unit.
Matrix inverse_mod(const Matrix& m, const ModRing& ring);

/// log_p of the order of the Z/p^e-submodule spanned by the given row vectors.
int submodule_log_size(Matrix generators, const ModRing& ring);

/// Minimal e >= 1 with M^e = I over F_p. Throws Singular, or CapExceeded when
/// no such e <= p^D - 1 exists.
std::uint64_t matrix_order(const Matrix& m, std::uint64_t p);

}  // namespace padyn
