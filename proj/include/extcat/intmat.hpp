#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace extcat {

using BigInt = boost::multiprecision::cpp_int;
using IntMatrix = std::vector<std::vector<BigInt>>;

// U * A * V = D with D diagonal, d_1 | d_2 | ..., d_i > 0 for i < rank.
// Only V is kept: it maps a row vector x to coordinates x V adapted to the row
// lattice of A.
struct SmithForm {
  std::vector<BigInt> diag;  // the rank nonzero invariant factors
  IntMatrix v;               // n x n unimodular
  std::size_t cols = 0;

  std::size_t rank() const { return diag.size(); }
};

inline SmithForm smith_normal_form(IntMatrix a, std::size_t cols) {
  const std::size_t rows = a.size();
  SmithForm out;
  out.cols = cols;
  out.v.assign(cols, std::vector<BigInt>(cols, 0));
  for (std::size_t i = 0; i < cols; ++i) out.v[i][i] = 1;

  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (auto& r : a) std::swap(r[x], r[y]);
    for (auto& r : out.v) std::swap(r[x], r[y]);
  };
  // column y -= q * column x
  auto col_sub = [&](std::size_t y, std::size_t x, const BigInt& q) {
    for (auto& r : a) r[y] -= q * r[x];
    for (auto& r : out.v) r[y] -= q * r[x];
  };

  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Pivot: smallest nonzero absolute value in the remaining block.
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pr == rows || abs(a[i][j]) < abs(a[pr][pc]))) {
          pr = i;
          pc = j;
        }
    if (pr == rows) break;
    std::swap(a[t], a[pr]);
    col_swap(t, pc);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        BigInt q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        BigInt q = a[t][j] / a[t][t];
        col_sub(j, t, q);
        if (a[t][j] != 0) {
          col_swap(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // Divisibility: fold in any entry the pivot does not divide.
      for (std::size_t i = t + 1; i < rows && clean; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
            clean = false;
            break;
          }
    }
    if (a[t][t] < 0) {
      for (auto& r : out.v) r[t] = -r[t];
      for (auto& r : a) r[t] = -r[t];
    }
    out.diag.push_back(a[t][t]);
    ++t;
  }
  return out;
}

inline std::vector<BigInt> row_times(const std::vector<BigInt>& x, const IntMatrix& v) {
  std::vector<BigInt> out(v.empty() ? 0 : v.front().size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += x[i] * v[i][j];
  }
  return out;
}

// Whether x lies in the row lattice whose Smith form is s.
inline bool in_row_lattice(const SmithForm& s, const std::vector<BigInt>& x) {
  std::vector<BigInt> y = row_times(x, s.v);
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (j < s.rank()) {
      if (y[j] % s.diag[j] != 0) return false;
    } else if (y[j] != 0) {
      return false;
    }
  }
  return true;
}

// Determinant by fraction-free elimination.
inline BigInt determinant(IntMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace extcat
