#include "padyn/linalg.hpp"

#include <utility>

namespace padyn {

Matrix identity_matrix(std::size_t n) {
  Matrix m(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Matrix mat_mul(const ModRing& ring, const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size(), inner = b.size(), cols = b.empty() ? 0 : b[0].size();
  Matrix c(n, std::vector<std::uint64_t>(cols, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < inner; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) c[i][j] = ring.add(c[i][j], ring.mul(a[i][l], b[l][j]));
    }
  return c;
}

Matrix reduce_matrix(const Matrix& m, const ModRing& from, const ModRing& to) {
  Matrix out = m;
  for (auto& row : out)
    for (auto& x : row) x = from.truncate(x, to);
  return out;
}

namespace {

// Row echelon over F_p; returns pivot columns.
std::vector<std::size_t> echelon_mod_p(Matrix& m, const ModRing& f) {
  std::vector<std::size_t> pivots;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    const std::uint64_t inv = f.inv(m[r][c]);
    for (auto& x : m[r]) x = f.mul(x, inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const std::uint64_t factor = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = f.sub(m[i][j], f.mul(factor, m[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank_mod_p(Matrix m, std::uint64_t p) {
  ModRing f(p, 1);
  for (auto& row : m)
    for (auto& x : row) x %= p;
  return echelon_mod_p(m, f).size();
}

std::vector<std::vector<std::uint64_t>> nullspace_mod_p(Matrix m, std::uint64_t p) {
  ModRing f(p, 1);
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (auto& row : m)
    for (auto& x : row) x %= p;
  auto pivots = echelon_mod_p(m, f);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<std::uint64_t>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::uint64_t> v(cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(m[r][free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

Matrix inverse_mod(const Matrix& m, const ModRing& ring) {
  const std::size_t n = m.size();
  Matrix a = m, inv = identity_matrix(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && !ring.is_unit(a[piv][c])) ++piv;
    if (piv == n) throw Error(ErrorCode::SingularJacobian, "matrix is not invertible mod p");
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const std::uint64_t u = ring.inv(a[c][c]);
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] = ring.mul(a[c][j], u);
      inv[c][j] = ring.mul(inv[c][j], u);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const std::uint64_t factor = a[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] = ring.sub(a[i][j], ring.mul(factor, a[c][j]));
        inv[i][j] = ring.sub(inv[i][j], ring.mul(factor, inv[c][j]));
      }
    }
  }
  return inv;
}

int submodule_log_size(Matrix g, const ModRing& ring) {
  // Smith-style elimination: repeatedly take an entry of minimal valuation as pivot.
  const int e = ring.k();
  int log_size = 0;
  std::size_t rows = g.size();
  const std::size_t cols = rows ? g[0].size() : 0;
  std::vector<bool> row_used(rows, false), col_used(cols, false);
  for (;;) {
    int best_v = e;
    std::size_t br = 0, bc = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_used[j] || g[i][j] == 0) continue;
        int v = *ring.valuation(g[i][j]);
        if (v < best_v) {
          best_v = v;
          br = i;
          bc = j;
        }
      }
    }
    if (best_v == e) break;
    log_size += e - best_v;
    // pivot = p^v * u; eliminate column bc from other rows
    const std::uint64_t unit_inv = ring.inv(ring.shift_down(g[br][bc], best_v));
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == br || row_used[i] || g[i][bc] == 0) continue;
      // g[i][bc] has valuation >= best_v
      const std::uint64_t q = ring.mul(ring.shift_down(g[i][bc], best_v), unit_inv);
      for (std::size_t j = 0; j < cols; ++j) g[i][j] = ring.sub(g[i][j], ring.mul(q, g[br][j]));
    }
    row_used[br] = true;
    col_used[bc] = true;
    // column operations are ambient automorphisms and keep the size
    for (std::size_t j = 0; j < cols; ++j)
      if (j != bc) {
        const std::uint64_t q = ring.mul(ring.shift_down(g[br][j], best_v), unit_inv);
        for (std::size_t i = 0; i < rows; ++i) g[i][j] = ring.sub(g[i][j], ring.mul(q, g[i][bc]));
      }
  }
  return log_size;
}

std::uint64_t matrix_order(const Matrix& m, std::uint64_t p) {
  const std::size_t d = m.size();
  if (rank_mod_p(m, p) != d) throw Error(ErrorCode::Singular, "matrix is singular over F_p");
  ModRing f(p, 1);
  Matrix reduced = m;
  for (auto& row : reduced)
    for (auto& x : row) x %= p;
  const Matrix id = identity_matrix(d);
  const std::uint64_t cap = ipow_checked(p, static_cast<int>(d)) - 1;
  Matrix power = reduced;
  for (std::uint64_t e = 1; e <= cap; ++e) {
    if (power == id) return e;
    power = mat_mul(f, power, reduced);
  }
  throw Error(ErrorCode::CapExceeded, "matrix order exceeds p^D - 1 = " + std::to_string(cap));
}

}  // namespace padyn
