#pragma once

// Matrices with polynomial entries: characteristic polynomials by the
// division-free Berkowitz recurrence, determinants by Laplace expansion,
// Sylvester resultants, and affine coordinate changes.

#include <unordered_map>
#include <vector>

#include "rees/polynomial.hpp"

namespace rees {

using PolyMatrix = std::vector<std::vector<Poly>>;

inline constexpr std::size_t kMaxCharpolyDimension = 16;

/// Coefficients c_0 = 1, c_1, ..., c_n of det(T*I - M) = sum c_j T^(n-j).
inline std::vector<Poly> charpoly(const PolyMatrix& m, const RingPtr& ring) {
  const std::size_t n = m.size();
  if (n > kMaxCharpolyDimension) {
    throw ResourceLimit("characteristic polynomial of a " + std::to_string(n) + "x" +
                        std::to_string(n) + " matrix exceeds the cap of " +
                        std::to_string(kMaxCharpolyDimension));
  }
  for (const auto& row : m) {
    if (row.size() != n) throw Error("charpoly: matrix is not square");
  }
  const Poly one = Poly::constant(ring, Scalar(1));
  std::vector<Poly> c = {one};
  for (std::size_t r = 0; r < n; ++r) {
    // Leading r x r block A, row R = m[r][0..r), column S = m[0..r)[r].
    // Toeplitz column: 1, -m[r][r], -R S, -R A S, ..., -R A^(r-1) S.
    std::vector<Poly> col;
    col.push_back(one);
    col.push_back(-m[r][r]);
    std::vector<Poly> v(r, Poly(ring));
    for (std::size_t i = 0; i < r; ++i) v[i] = m[i][r];
    for (std::size_t k = 0; k < r; ++k) {
      Poly dot(ring);
      for (std::size_t i = 0; i < r; ++i) dot += m[r][i] * v[i];
      col.push_back(-dot);
      if (k + 1 < r) {
        std::vector<Poly> w(r, Poly(ring));
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 0; j < r; ++j) w[i] += m[i][j] * v[j];
        }
        v = std::move(w);
      }
    }
    // New coefficients: lower-triangular Toeplitz (r+2) x (r+1) times c.
    std::vector<Poly> next(r + 2, Poly(ring));
    for (std::size_t i = 0; i < r + 2; ++i) {
      for (std::size_t j = 0; j <= std::min(i, r); ++j) {
        if (i - j < col.size()) next[i] += col[i - j] * c[j];
      }
    }
    c = std::move(next);
  }
  return c;
}

/// Determinant by cofactor expansion along rows, memoized on the set of
/// used columns. Independent of the Berkowitz route above.
inline Poly determinant(const PolyMatrix& m, const RingPtr& ring) {
  const std::size_t n = m.size();
  if (n == 0) return Poly::constant(ring, Scalar(1));
  if (n > 20) throw ResourceLimit("determinant dimension too large");
  std::unordered_map<std::uint32_t, Poly> memo;
  auto rec = [&](auto&& self, std::size_t row, std::uint32_t used) -> Poly {
    if (row == n) return Poly::constant(ring, Scalar(1));
    auto it = memo.find(used);
    if (it != memo.end()) return it->second;
    Poly sum(ring);
    int sign = 1;
    for (std::size_t col = 0; col < n; ++col) {
      if (used & (1u << col)) continue;
      if (!m[row][col].is_zero()) {
        Poly minor = self(self, row + 1, used | (1u << col));
        Poly t = m[row][col] * minor;
        if (sign < 0) sum -= t; else sum += t;
      }
      sign = -sign;
    }
    memo.emplace(used, sum);
    return sum;
  };
  return rec(rec, 0, 0);
}

/// Sylvester matrix of f and g with respect to variable v.
inline PolyMatrix sylvester_matrix(const Poly& f, const Poly& g, std::size_t v) {
  auto fc = coefficients_in(f, v);
  auto gc = coefficients_in(g, v);
  const std::size_t m = fc.size() - 1;
  const std::size_t l = gc.size() - 1;
  const std::size_t n = m + l;
  PolyMatrix s(n, std::vector<Poly>(n, Poly(f.ring())));
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j <= m; ++j) s[i][i + j] = fc[m - j];
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= l; ++j) s[l + i][i + j] = gc[l - j];
  }
  return s;
}

/// Res_v(f, g) via the Sylvester determinant; result is free of v.
inline Poly resultant(const Poly& f, const Poly& g, std::size_t v) {
  f.check_ring(g);
  if (f.degree_in(v) <= 0) throw Error("resultant: first argument is constant in the variable");
  if (g.is_zero()) return Poly(f.ring());
  if (g.degree_in(v) == 0) return g.pow(static_cast<unsigned long>(f.degree_in(v)));
  return determinant(sylvester_matrix(f, g, v), f.ring());
}

/// Determinant of a square matrix over the field (Gaussian elimination).
inline Scalar field_determinant(std::vector<std::vector<Scalar>> a, const Field& k) {
  const std::size_t n = a.size();
  Scalar det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && k.reduce(a[piv][col]) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = k.neg(det);
    }
    Scalar p = k.reduce(a[col][col]);
    det = k.mul(det, p);
    for (std::size_t r = col + 1; r < n; ++r) {
      Scalar factor = k.div(k.reduce(a[r][col]), p);
      if (factor == 0) continue;
      for (std::size_t c = col; c < n; ++c) {
        a[r][c] = k.sub(k.reduce(a[r][c]), k.mul(factor, k.reduce(a[col][c])));
      }
    }
  }
  return det;
}

/// f(M x + shift): each variable x_i is replaced by sum_j M[i][j] x_j + shift_i.
inline Poly linear_change(const Poly& f, const std::vector<std::vector<Scalar>>& matrix,
                          const Point& shift) {
  const RingPtr& ring = f.ring();
  const std::size_t n = ring->nvars();
  if (matrix.size() != n) throw Error("linear_change: matrix has wrong size");
  for (const auto& row : matrix) {
    if (row.size() != n) throw Error("linear_change: matrix is not square");
  }
  f.check_point(shift);
  if (field_determinant(matrix, ring->field()) == 0) {
    throw Error("linear_change: singular matrix");
  }
  std::vector<Poly> images;
  for (std::size_t i = 0; i < n; ++i) {
    Poly img = Poly::constant(ring, shift[i]);
    for (std::size_t j = 0; j < n; ++j) {
      img += Poly::variable(ring, j).scaled(matrix[i][j]);
    }
    images.push_back(std::move(img));
  }
  return compose(f, images, ring);
}

inline std::vector<std::vector<Scalar>> identity_matrix(std::size_t n) {
  std::vector<std::vector<Scalar>> m(n, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

}  // namespace rees
