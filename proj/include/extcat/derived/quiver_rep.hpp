#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "extcat/derived/complex.hpp"
#include "extcat/derived/interval.hpp"
#include "extcat/fp.hpp"

namespace extcat::derived {

// Representation of 1 -> 2 -> ... -> n; maps[i] : V_{i+1} -> V_{i+2} (0-based arrows).
struct QuiverRep {
  std::vector<std::size_t> dims;
  std::vector<Matrix> maps;

  int n() const { return static_cast<int>(dims.size()); }

  void check() const {
    if (dims.empty()) return;
    if (maps.size() + 1 != dims.size()) throw std::invalid_argument("QuiverRep: need n-1 arrow maps");
    for (std::size_t i = 0; i < maps.size(); ++i)
      if (maps[i].rows() != dims[i + 1] || maps[i].cols() != dims[i])
        throw std::invalid_argument("QuiverRep: map shape does not match dims");
  }
};

using IntervalMultiset = std::map<Interval, unsigned>;

namespace detail {

// m[a,b] = r(a,b) - r(a-1,b) - r(a,b+1) + r(a-1,b+1); r is 1-based with zero boundary.
inline IntervalMultiset multiplicities_from_ranks(int n, const std::vector<std::vector<long long>>& r,
                                                  int shift) {
  auto R = [&](int a, int b) -> long long {
    if (a < 1 || b > n || a > b) return 0;
    return r[a][b];
  };
  IntervalMultiset out;
  for (int a = 1; a <= n; ++a)
    for (int b = a; b <= n; ++b) {
      long long m = R(a, b) - R(a - 1, b) - R(a, b + 1) + R(a - 1, b + 1);
      if (m < 0) throw std::logic_error("negative interval multiplicity");
      if (m > 0) out[{a, b, shift}] += static_cast<unsigned>(m);
    }
  return out;
}

}  // namespace detail

inline IntervalMultiset rep_decompose(const PrimeField& f, const QuiverRep& v) {
  v.check();
  const int n = v.n();
  std::vector<std::vector<long long>> r(n + 2, std::vector<long long>(n + 2, 0));
  for (int a = 1; a <= n; ++a) {
    Matrix comp = Matrix::identity(v.dims[a - 1]);
    r[a][a] = static_cast<long long>(v.dims[a - 1]);
    for (int b = a + 1; b <= n; ++b) {
      comp = multiply(f, v.maps[b - 2], comp);
      r[a][b] = static_cast<long long>(rank(f, comp));
    }
  }
  return detail::multiplicities_from_ranks(n, r, 0);
}

// Uses X = sum_k H^k(X)[-k]. At vertex v the space X^k_v has one coordinate per
// summand P_j with j <= v, and the arrow maps are coordinate inclusions.
inline IntervalMultiset complex_decompose(const PrimeField& f, const ProjComplex& x) {
  const int n = x.n;
  IntervalMultiset out;
  for (int k : x.degrees()) {
    const auto& t = x.term(k);
    const auto& tin = x.term(k - 1);
    const auto& tout = x.term(k + 1);
    Matrix din = x.diff(k - 1);
    Matrix dout = x.diff(k);
    // im_v: columns of d^{k-1} restricted to summands <= v; ker_v: kernel of d^k restricted.
    std::vector<Matrix> im(n + 1), ker(n + 1);
    for (int v = 1; v <= n; ++v) {
      std::vector<std::size_t> rows_v, cols_in_v, cols_out_v;
      for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] <= v) rows_v.push_back(i);
      for (std::size_t i = 0; i < tin.size(); ++i)
        if (tin[i] <= v) cols_in_v.push_back(i);
      for (std::size_t i = 0; i < tout.size(); ++i)
        if (tout[i] <= v) cols_out_v.push_back(i);
      // Vectors are expressed in the full coordinates of X^k (zero outside rows_v).
      Matrix imv(0, t.size());
      for (std::size_t c : cols_in_v) {
        std::vector<Scalar> col(t.size(), 0);
        for (std::size_t r : rows_v) col[r] = din(r, c);
        imv.append_row(col);
      }
      Matrix dv(cols_out_v.size(), rows_v.size());
      for (std::size_t i = 0; i < cols_out_v.size(); ++i)
        for (std::size_t j = 0; j < rows_v.size(); ++j) dv(i, j) = dout(cols_out_v[i], rows_v[j]);
      Matrix kerv_local = dv.rows() == 0 ? Matrix::identity(rows_v.size()) : nullspace(f, dv);
      Matrix kerv(0, t.size());
      for (std::size_t i = 0; i < kerv_local.rows(); ++i) {
        std::vector<Scalar> vec(t.size(), 0);
        for (std::size_t j = 0; j < rows_v.size(); ++j) vec[rows_v[j]] = kerv_local(i, j);
        kerv.append_row(vec);
      }
      im[v] = imv;
      ker[v] = kerv;
    }
    std::vector<std::vector<long long>> r(n + 2, std::vector<long long>(n + 2, 0));
    bool any = false;
    for (int a = 1; a <= n; ++a)
      for (int b = a; b <= n; ++b) {
        RowSpace s(f, t.size());
        for (std::size_t i = 0; i < im[b].rows(); ++i) s.insert(im[b].row(i));
        const std::size_t base = s.rank();
        for (std::size_t i = 0; i < ker[a].rows(); ++i) s.insert(ker[a].row(i));
        r[a][b] = static_cast<long long>(s.rank() - base);
        if (r[a][b]) any = true;
      }
    if (!any) continue;
    for (auto& [iv, m] : detail::multiplicities_from_ranks(n, r, -k)) out[iv] += m;
  }
  return out;
}

}  // namespace extcat::derived
