#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "extcat/derived/interval.hpp"
#include "extcat/fp.hpp"

namespace extcat::derived {

// Bounded complex of projective kA_n-modules. Hom(P_a, P_b) is k when a >= b and 0
// otherwise, so a differential is a scalar matrix whose entry (row j, col i) may be
// nonzero only when terms[k][i] >= terms[k+1][j].
struct ProjComplex {
  int n = 0;
  std::map<int, std::vector<int>> terms;  // degree -> projective vertices
  std::map<int, Matrix> diffs;            // degree k: terms[k] -> terms[k+1]

  const std::vector<int>& term(int k) const {
    static const std::vector<int> empty;
    auto it = terms.find(k);
    return it == terms.end() ? empty : it->second;
  }
  std::size_t rank_at(int k) const { return term(k).size(); }

  Matrix diff(int k) const {
    auto it = diffs.find(k);
    if (it != diffs.end()) return it->second;
    return Matrix(rank_at(k + 1), rank_at(k));
  }

  std::set<int> degrees() const {
    std::set<int> ds;
    for (const auto& [k, t] : terms)
      if (!t.empty()) ds.insert(k);
    return ds;
  }
  bool is_zero() const { return degrees().empty(); }

  void set_term(int k, std::vector<int> t) {
    if (t.empty()) {
      terms.erase(k);
    } else {
      terms[k] = std::move(t);
    }
  }
};

inline bool allowed(int src_vertex, int dst_vertex) { return src_vertex >= dst_vertex; }

// Degree-zero chain map X -> Y; comp[k] : X^k -> Y^k.
struct ChainMap {
  std::map<int, Matrix> comp;

  Matrix at(int k, const ProjComplex& src, const ProjComplex& dst) const {
    auto it = comp.find(k);
    if (it != comp.end()) return it->second;
    return Matrix(dst.rank_at(k), src.rank_at(k));
  }
};

inline std::set<int> union_degrees(const ProjComplex& x, const ProjComplex& y) {
  std::set<int> ds = x.degrees();
  for (int k : y.degrees()) ds.insert(k);
  return ds;
}

// X[s]^k = X^{k+s}, differential multiplied by (-1)^s.
inline ProjComplex shift(const PrimeField& f, const ProjComplex& x, int s) {
  ProjComplex y;
  y.n = x.n;
  for (const auto& [k, t] : x.terms) y.terms[k - s] = t;
  for (const auto& [k, d] : x.diffs) y.diffs[k - s] = (s % 2 == 0) ? d : scale(f, d, f.neg(1));
  return y;
}

inline ProjComplex stalk(int n, int vertex, int degree) {
  ProjComplex x;
  x.n = n;
  x.terms[degree] = {vertex};
  return x;
}

// Minimal projective resolution of [a,b], shifted: P_{b+1} -> P_a for b < n.
inline ProjComplex standard_complex(const PrimeField& f, const Interval& iv, int n) {
  ProjComplex x;
  x.n = n;
  const int top = -iv.shift;
  x.terms[top] = {iv.a};
  if (iv.b < n) {
    x.terms[top - 1] = {iv.b + 1};
    Matrix d(1, 1);
    d(0, 0) = (iv.shift % 2 == 0) ? 1 : f.neg(1);
    x.diffs[top - 1] = d;
  }
  return x;
}

// Block position of each summand of a direct sum, per degree.
struct SumLayout {
  std::vector<std::map<int, std::size_t>> offset;
};

inline ProjComplex direct_sum(const std::vector<ProjComplex>& parts, SumLayout* layout = nullptr, int n = 0) {
  ProjComplex s;
  s.n = parts.empty() ? n : parts.front().n;
  if (layout) layout->offset.assign(parts.size(), {});
  std::set<int> ds;
  for (const auto& p : parts)
    for (int k : p.degrees()) ds.insert(k);
  for (int k : ds) {
    std::vector<int> t;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (layout) layout->offset[i][k] = t.size();
      const auto& pt = parts[i].term(k);
      t.insert(t.end(), pt.begin(), pt.end());
    }
    s.set_term(k, std::move(t));
  }
  for (int k : ds) {
    if (!ds.count(k + 1)) continue;
    Matrix d(s.rank_at(k + 1), s.rank_at(k));
    std::size_t r0 = 0, c0 = 0;
    for (const auto& p : parts) {
      Matrix pd = p.diff(k);
      for (std::size_t i = 0; i < pd.rows(); ++i)
        for (std::size_t j = 0; j < pd.cols(); ++j) d(r0 + i, c0 + j) = pd(i, j);
      r0 += p.rank_at(k + 1);
      c0 += p.rank_at(k);
    }
    s.diffs[k] = d;
  }
  return s;
}

inline ChainMap compose(const PrimeField& f, const ChainMap& g, const ChainMap& h, const ProjComplex& x,
                        const ProjComplex& y, const ProjComplex& z) {
  // g o h with h : X -> Y and g : Y -> Z
  ChainMap out;
  for (int k : union_degrees(x, z)) {
    if (x.rank_at(k) == 0 || z.rank_at(k) == 0) continue;
    out.comp[k] = multiply(f, g.at(k, y, z), h.at(k, x, y));
  }
  return out;
}

inline ChainMap identity_map(const ProjComplex& x) {
  ChainMap id;
  for (int k : x.degrees()) id.comp[k] = Matrix::identity(x.rank_at(k));
  return id;
}

inline bool is_chain_map(const PrimeField& f, const ChainMap& m, const ProjComplex& x, const ProjComplex& y) {
  std::set<int> ds = union_degrees(x, y);
  for (int k : ds) {
    if (x.rank_at(k) == 0 || y.rank_at(k + 1) == 0) continue;
    Matrix lhs = multiply(f, y.diff(k), m.at(k, x, y));
    Matrix rhs = multiply(f, m.at(k + 1, x, y), x.diff(k));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

// Shift of a chain map, matching shift() on objects.
inline ChainMap shift_map(const ChainMap& m, int s) {
  ChainMap out;
  for (const auto& [k, c] : m.comp) out.comp[k - s] = c;
  return out;
}

// Hom(X, Y) in K^b(proj): chain maps modulo null-homotopic ones.
class HomSpace {
 public:
  HomSpace(const PrimeField& f, const ProjComplex& x, const ProjComplex& y) : f_(f), x_(x), y_(y) {
    build();
  }

  std::size_t dim() const { return reps_.size(); }
  const ProjComplex& source() const { return x_; }
  const ProjComplex& target() const { return y_; }

  ChainMap basis_map(std::size_t i) const { return to_map(reps_.at(i)); }

  ChainMap combination(const std::vector<Scalar>& coeffs) const {
    std::vector<Scalar> v(slots_.size(), 0);
    for (std::size_t i = 0; i < coeffs.size() && i < reps_.size(); ++i) {
      if (coeffs[i] == 0) continue;
      for (std::size_t s = 0; s < v.size(); ++s) v[s] = f_.add(v[s], f_.mul(coeffs[i], reps_[i][s]));
    }
    return to_map(v);
  }

  // Coordinates of the homotopy class of m in the representative basis.
  std::vector<Scalar> coords(const ChainMap& m) const {
    auto sol = solver_->solve(to_vector(m));
    if (!sol) throw std::logic_error("HomSpace::coords: not a chain map of the expected shape");
    sol->resize(reps_.size());
    return *sol;
  }

  bool is_null_homotopic(const ChainMap& m) const {
    for (Scalar c : coords(m))
      if (c != 0) return false;
    return true;
  }

 private:
  using Slot = std::tuple<int, std::size_t, std::size_t>;  // degree, row (target), col (source)

  void build() {
    std::set<int> ds = union_degrees(x_, y_);
    for (int k : ds) {
      const auto& xs = x_.term(k);
      const auto& ys = y_.term(k);
      for (std::size_t r = 0; r < ys.size(); ++r)
        for (std::size_t c = 0; c < xs.size(); ++c)
          if (allowed(xs[c], ys[r])) {
            index_[{k, r, c}] = slots_.size();
            slots_.push_back({k, r, c});
          }
    }
    const std::size_t ns = slots_.size();

    // Chain condition d_Y^k f^k - f^{k+1} d_X^k = 0, one equation per entry.
    Matrix eq(0, ns);
    for (int k : ds) {
      const std::size_t rows = y_.rank_at(k + 1);
      const std::size_t cols = x_.rank_at(k);
      if (rows == 0 || cols == 0) continue;
      Matrix dy = y_.diff(k);
      Matrix dx = x_.diff(k);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          std::vector<Scalar> e(ns, 0);
          bool nonzero = false;
          for (std::size_t j = 0; j < y_.rank_at(k); ++j) {
            auto it = index_.find({k, j, c});
            if (it != index_.end() && dy(r, j) != 0) {
              e[it->second] = f_.add(e[it->second], dy(r, j));
              nonzero = true;
            }
          }
          for (std::size_t j = 0; j < x_.rank_at(k + 1); ++j) {
            auto it = index_.find({k + 1, r, j});
            if (it != index_.end() && dx(j, c) != 0) {
              e[it->second] = f_.sub(e[it->second], dx(j, c));
              nonzero = true;
            }
          }
          if (nonzero) eq.append_row(e);
        }
    }
    Matrix cycles = eq.rows() == 0 ? Matrix::identity(ns) : nullspace(f_, eq);

    // Null-homotopic maps d_Y h + h d_X for h^k : X^k -> Y^{k-1}.
    std::vector<std::vector<Scalar>> bounds;
    for (int k : ds) {
      const auto& xs = x_.term(k);
      const auto& ys = y_.term(k - 1);
      for (std::size_t j = 0; j < ys.size(); ++j)
        for (std::size_t c = 0; c < xs.size(); ++c) {
          if (!allowed(xs[c], ys[j])) continue;
          std::vector<Scalar> v(ns, 0);
          bool nonzero = false;
          // f^k += d_Y^{k-1} h^k
          Matrix dy = y_.diff(k - 1);
          for (std::size_t r = 0; r < y_.rank_at(k); ++r) {
            if (dy(r, j) == 0) continue;
            auto it = index_.find({k, r, c});
            if (it == index_.end()) continue;
            v[it->second] = f_.add(v[it->second], dy(r, j));
            nonzero = true;
          }
          // f^{k-1} += h^k d_X^{k-1}
          Matrix dx = x_.diff(k - 1);
          for (std::size_t c2 = 0; c2 < x_.rank_at(k - 1); ++c2) {
            if (dx(c, c2) == 0) continue;
            auto it = index_.find({k - 1, j, c2});
            if (it == index_.end()) continue;
            v[it->second] = f_.add(v[it->second], dx(c, c2));
            nonzero = true;
          }
          if (nonzero) bounds.push_back(std::move(v));
        }
    }

    RowSpace span(f_, ns);
    for (const auto& b : bounds) span.insert(b);
    for (std::size_t i = 0; i < cycles.rows(); ++i) {
      auto z = cycles.row(i);
      if (span.insert(z)) reps_.push_back(z);
    }
    std::vector<std::vector<Scalar>> gens = reps_;
    gens.insert(gens.end(), bounds.begin(), bounds.end());
    solver_ = std::make_shared<SpanSolver>(f_, gens, ns);
  }

  ChainMap to_map(const std::vector<Scalar>& v) const {
    ChainMap m;
    for (int k : union_degrees(x_, y_)) {
      if (x_.rank_at(k) && y_.rank_at(k)) m.comp[k] = Matrix(y_.rank_at(k), x_.rank_at(k));
    }
    for (std::size_t s = 0; s < slots_.size(); ++s) {
      if (v[s] == 0) continue;
      auto [k, r, c] = slots_[s];
      m.comp[k](r, c) = v[s];
    }
    return m;
  }

  std::vector<Scalar> to_vector(const ChainMap& m) const {
    std::vector<Scalar> v(slots_.size(), 0);
    for (const auto& [k, mat] : m.comp) {
      for (std::size_t r = 0; r < mat.rows(); ++r)
        for (std::size_t c = 0; c < mat.cols(); ++c) {
          if (mat(r, c) == 0) continue;
          auto it = index_.find({k, r, c});
          if (it == index_.end()) throw std::logic_error("HomSpace: entry outside the allowed pattern");
          v[it->second] = mat(r, c);
        }
    }
    return v;
  }

  PrimeField f_;
  ProjComplex x_;
  ProjComplex y_;
  std::vector<Slot> slots_;
  std::map<Slot, std::size_t> index_;
  std::vector<std::vector<Scalar>> reps_;
  std::shared_ptr<SpanSolver> solver_;
};

// Cocone of delta : C -> A[1]; the middle term B^k = A^k + C^k with
// d_B = [[d_A, delta^k], [0, d_C]].
struct TriangleData {
  ProjComplex a, b, c;
  ChainMap infl;  // A -> B
  ChainMap defl;  // B -> C
  ChainMap conn;  // C -> A[1]
};

inline TriangleData cocone_of_extension(const PrimeField& f, const ProjComplex& c, const ProjComplex& a,
                                        const ChainMap& delta) {
  TriangleData t;
  t.a = a;
  t.c = c;
  t.b.n = a.n ? a.n : c.n;
  std::set<int> ds = union_degrees(a, c);
  for (int k : ds) {
    std::vector<int> terms = a.term(k);
    const auto& ct = c.term(k);
    terms.insert(terms.end(), ct.begin(), ct.end());
    t.b.set_term(k, std::move(terms));
  }
  ProjComplex a1 = shift(f, a, 1);
  for (int k : ds) {
    const std::size_t na0 = a.rank_at(k), nc0 = c.rank_at(k);
    const std::size_t na1 = a.rank_at(k + 1), nc1 = c.rank_at(k + 1);
    if (na0 + nc0 == 0 || na1 + nc1 == 0) continue;
    Matrix d(na1 + nc1, na0 + nc0);
    Matrix da = a.diff(k), dc = c.diff(k), dl = delta.at(k, c, a1);
    for (std::size_t i = 0; i < na1; ++i)
      for (std::size_t j = 0; j < na0; ++j) d(i, j) = da(i, j);
    for (std::size_t i = 0; i < na1; ++i)
      for (std::size_t j = 0; j < nc0; ++j) d(i, na0 + j) = dl(i, j);
    for (std::size_t i = 0; i < nc1; ++i)
      for (std::size_t j = 0; j < nc0; ++j) d(na1 + i, na0 + j) = dc(i, j);
    t.b.diffs[k] = d;
  }
  for (int k : ds) {
    const std::size_t na = a.rank_at(k), nc = c.rank_at(k);
    if (na) {
      Matrix in(na + nc, na);
      for (std::size_t i = 0; i < na; ++i) in(i, i) = 1;
      t.infl.comp[k] = in;
    }
    if (nc) {
      Matrix pr(nc, na + nc);
      for (std::size_t i = 0; i < nc; ++i) pr(i, na + i) = 1;
      t.defl.comp[k] = pr;
    }
  }
  t.conn = delta;
  return t;
}

// Completes a deflation g : B -> C to a triangle cocone(g) -> B -> C.
// cocone(g)^k = B^k + C^{k-1}, d = [[d_B, 0], [-g, -d_C]].
inline TriangleData triangle_of_deflation(const PrimeField& f, const ProjComplex& b, const ProjComplex& c,
                                          const ChainMap& g) {
  TriangleData t;
  t.b = b;
  t.c = c;
  t.defl = g;
  t.a.n = b.n ? b.n : c.n;
  std::set<int> ds = b.degrees();
  for (int k : c.degrees()) ds.insert(k + 1);
  for (int k : ds) {
    std::vector<int> terms = b.term(k);
    const auto& ct = c.term(k - 1);
    terms.insert(terms.end(), ct.begin(), ct.end());
    t.a.set_term(k, std::move(terms));
  }
  for (int k : ds) {
    const std::size_t nb0 = b.rank_at(k), nc0 = c.rank_at(k - 1);
    const std::size_t nb1 = b.rank_at(k + 1), nc1 = c.rank_at(k);
    if (nb0 + nc0 == 0 || nb1 + nc1 == 0) continue;
    Matrix d(nb1 + nc1, nb0 + nc0);
    Matrix db = b.diff(k), dc = c.diff(k - 1), gk = g.at(k, b, c);
    for (std::size_t i = 0; i < nb1; ++i)
      for (std::size_t j = 0; j < nb0; ++j) d(i, j) = db(i, j);
    for (std::size_t i = 0; i < nc1; ++i)
      for (std::size_t j = 0; j < nb0; ++j) d(nb1 + i, j) = f.neg(gk(i, j));
    for (std::size_t i = 0; i < nc1; ++i)
      for (std::size_t j = 0; j < nc0; ++j) d(nb1 + i, nb0 + j) = f.neg(dc(i, j));
    t.a.diffs[k] = d;
  }
  for (int k : ds) {
    const std::size_t nb = b.rank_at(k), nc = c.rank_at(k - 1);
    if (nb) {
      Matrix pr(nb, nb + nc);
      for (std::size_t i = 0; i < nb; ++i) pr(i, i) = 1;
      t.infl.comp[k] = pr;
    }
  }
  // conn : C -> cocone(g)[1], c |-> (0, c)
  for (int k : c.degrees()) {
    const std::size_t nb = b.rank_at(k + 1), nc = c.rank_at(k);
    Matrix in(nb + nc, nc);
    for (std::size_t i = 0; i < nc; ++i) in(nb + i, i) = 1;
    t.conn.comp[k] = in;
  }
  return t;
}

}  // namespace extcat::derived
