#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace extcat {

using Scalar = std::uint32_t;

class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p = 2) : p_(p) {
    if (!is_prime(p) || p > 65521) {
      throw std::invalid_argument("field characteristic must be a prime below 65536, got " +
                                  std::to_string(p));
    }
  }

  static bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  }

  std::uint32_t p() const { return p_; }
  Scalar add(Scalar a, Scalar b) const { return (a + b) % p_; }
  Scalar sub(Scalar a, Scalar b) const { return (a + p_ - b) % p_; }
  Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
  Scalar mul(Scalar a, Scalar b) const {
    return static_cast<Scalar>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Scalar inv(Scalar a) const {
    // Fermat: a^(p-2)
    Scalar result = 1;
    Scalar base = a % p_;
    std::uint32_t e = p_ - 2;
    while (e > 0) {
      if (e & 1U) result = mul(result, base);
      base = mul(base, base);
      e >>= 1U;
    }
    return result;
  }
  Scalar from_int(long long v) const {
    long long m = v % static_cast<long long>(p_);
    if (m < 0) m += p_;
    return static_cast<Scalar>(m);
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

// Dense row-major matrix over F_p. The field is carried by the caller.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  Scalar operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  bool is_zero() const {
    for (Scalar x : a_) {
      if (x != 0) return false;
    }
    return true;
  }

  std::vector<Scalar> row(std::size_t r) const {
    return {a_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }

  void append_row(const std::vector<Scalar>& v) {
    if (rows_ == 0 && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw std::invalid_argument("append_row: width mismatch");
    a_.insert(a_.end(), v.begin(), v.end());
    ++rows_;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> a_;
};

inline Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      Scalar x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = f.add(c(i, j), f.mul(x, b(k, j)));
    }
  return c;
}

inline Matrix add(const PrimeField& f, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("add: shape mismatch");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f.add(a(i, j), b(i, j));
  return c;
}

inline Matrix scale(const PrimeField& f, const Matrix& a, Scalar s) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f.mul(a(i, j), s);
  return c;
}

struct Echelon {
  Matrix reduced;                   // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;  // pivot column of each row
};

inline Echelon rref(const PrimeField& f, Matrix m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    Scalar inv = f.inv(m(r, c));
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Scalar factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  Matrix reduced(r, m.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) reduced(i, j) = m(i, j);
  return {std::move(reduced), std::move(pivots)};
}

inline std::size_t rank(const PrimeField& f, const Matrix& m) {
  if (m.empty()) return 0;
  return rref(f, m).pivots.size();
}

// Basis of {x : m x = 0}, one vector per row.
inline Matrix nullspace(const PrimeField& f, const Matrix& m) {
  const std::size_t n = m.cols();
  Echelon e = rref(f, m);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : e.pivots) is_pivot[c] = true;
  Matrix basis(0, n);
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Scalar> v(n, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = f.neg(e.reduced(i, free));
    basis.append_row(v);
  }
  return basis;
}

// Incrementally maintained row space with membership and coordinate queries.
class RowSpace {
 public:
  RowSpace(const PrimeField& f, std::size_t dim) : f_(f), dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }

  // Reduces v against the stored basis; returns the residue.
  std::vector<Scalar> reduce(std::vector<Scalar> v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      Scalar x = v[pivots_[i]];
      if (x == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) v[j] = f_.sub(v[j], f_.mul(x, rows_[i][j]));
    }
    return v;
  }

  bool contains(const std::vector<Scalar>& v) const {
    for (Scalar x : reduce(v))
      if (x != 0) return false;
    return true;
  }

  // Adds v if independent; returns true when the rank grew.
  bool insert(const std::vector<Scalar>& v) {
    std::vector<Scalar> r = reduce(v);
    std::size_t piv = dim_;
    for (std::size_t j = 0; j < dim_; ++j)
      if (r[j] != 0) {
        piv = j;
        break;
      }
    if (piv == dim_) return false;
    Scalar inv = f_.inv(r[piv]);
    for (Scalar& x : r) x = f_.mul(x, inv);
    for (auto& row : rows_) {
      Scalar x = row[piv];
      if (x == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) row[j] = f_.sub(row[j], f_.mul(x, r[j]));
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(piv);
    return true;
  }

 private:
  PrimeField f_;
  std::size_t dim_;
  std::vector<std::vector<Scalar>> rows_;
  std::vector<std::size_t> pivots_;
};

// Expresses vectors in terms of a fixed list of generators (not necessarily independent).
class SpanSolver {
 public:
  SpanSolver(const PrimeField& f, const std::vector<std::vector<Scalar>>& gens, std::size_t dim)
      : f_(f), dim_(dim), ngens_(gens.size()) {
    // Row-reduce [gens | I] so each reduced row records its combination.
    for (std::size_t g = 0; g < gens.size(); ++g) {
      std::vector<Scalar> v = gens[g];
      std::vector<Scalar> combo(ngens_, 0);
      combo[g] = 1;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        Scalar x = v[pivots_[i]];
        if (x == 0) continue;
        for (std::size_t j = 0; j < dim_; ++j) v[j] = f_.sub(v[j], f_.mul(x, rows_[i][j]));
        for (std::size_t j = 0; j < ngens_; ++j) combo[j] = f_.sub(combo[j], f_.mul(x, combos_[i][j]));
      }
      std::size_t piv = dim_;
      for (std::size_t j = 0; j < dim_; ++j)
        if (v[j] != 0) {
          piv = j;
          break;
        }
      if (piv == dim_) continue;
      Scalar inv = f_.inv(v[piv]);
      for (Scalar& x : v) x = f_.mul(x, inv);
      for (Scalar& x : combo) x = f_.mul(x, inv);
      rows_.push_back(std::move(v));
      combos_.push_back(std::move(combo));
      pivots_.push_back(piv);
    }
  }

  std::size_t rank() const { return rows_.size(); }

  // Coefficients c with sum c_g gens[g] = v, or nullopt if v is outside the span.
  std::optional<std::vector<Scalar>> solve(std::vector<Scalar> v) const {
    std::vector<Scalar> coeffs(ngens_, 0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      Scalar x = v[pivots_[i]];
      if (x == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) v[j] = f_.sub(v[j], f_.mul(x, rows_[i][j]));
      for (std::size_t j = 0; j < ngens_; ++j) coeffs[j] = f_.add(coeffs[j], f_.mul(x, combos_[i][j]));
    }
    for (Scalar x : v)
      if (x != 0) return std::nullopt;
    return coeffs;
  }

 private:
  PrimeField f_;
  std::size_t dim_;
  std::size_t ngens_;
  std::vector<std::vector<Scalar>> rows_;
  std::vector<std::vector<Scalar>> combos_;
  std::vector<std::size_t> pivots_;
};

}  // namespace extcat
