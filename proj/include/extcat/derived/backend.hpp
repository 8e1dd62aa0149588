#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "extcat/derived/complex.hpp"
#include "extcat/derived/interval.hpp"
#include "extcat/derived/quiver_rep.hpp"
#include "extcat/error.hpp"
#include "extcat/model.hpp"
#include "extcat/opposite.hpp"

namespace extcat::derived {

struct DerivedRealization : Realization {
  TriangleData t;
};

inline constexpr std::size_t kDefaultExtensionCap = 64;

class DerivedBackend : public Backend, public std::enable_shared_from_this<DerivedBackend> {
 public:
  DerivedBackend(int n, std::vector<Interval> window, unsigned p, bool exact, std::string label,
                 std::size_t cap = kDefaultExtensionCap)
      : n_(n), window_(std::move(window)), f_(p), exact_(exact), label_(std::move(label)), cap_(cap) {
    if (n_ < 1) throw std::invalid_argument("n must be at least 1");
    for (std::size_t i = 0; i < window_.size(); ++i) {
      const auto& iv = window_[i];
      if (iv.a < 1 || iv.b > n_ || iv.a > iv.b) throw std::invalid_argument("interval outside 1..n");
      if (!index_.emplace(iv, static_cast<IndecIndex>(i)).second)
        throw std::invalid_argument("duplicate interval in window");
      std_.push_back(standard_complex(f_, iv, n_));
      std_shift1_.push_back(shift(f_, std_.back(), 1));
    }
    const std::size_t m = window_.size();
    hom_.assign(m * m, 0);
    ext_spaces_.assign(m * m, nullptr);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        hom_[i * m + j] = static_cast<unsigned>(HomSpace(f_, std_[i], std_[j]).dim());
        auto e = std::make_shared<HomSpace>(f_, std_[i], std_shift1_[j]);
        if (e->dim() > 0) ext_spaces_[i * m + j] = e;
      }
  }

  int n() const { return n_; }
  const std::vector<Interval>& window() const { return window_; }
  const PrimeField& field() const { return f_; }
  const std::string& label() const { return label_; }
  const Interval& interval(IndecIndex i) const { return window_.at(i); }

  std::optional<IndecIndex> find(const Interval& iv) const {
    auto it = index_.find(iv);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const ProjComplex& standard(IndecIndex i) const { return std_.at(i); }

  ProjComplex complex_of(const Obj& x, SumLayout* layout = nullptr) const {
    std::vector<ProjComplex> parts;
    for (IndecIndex i : x.summands()) parts.push_back(std_.at(i));
    ProjComplex s = direct_sum(parts, layout, n_);
    s.n = n_;
    return s;
  }

  Obj obj_of(const IntervalMultiset& ms, const std::string& context = "") const {
    Obj out;
    for (const auto& [iv, m] : ms) {
      auto i = find(iv);
      if (!i)
        throw WindowOverflow("object " + interval_name(iv, n_) + " leaves window " + label_ +
                             (context.empty() ? "" : " (" + context + ")"));
      out.add(*i, m);
    }
    return out;
  }

  Obj decompose(const ProjComplex& x, const std::string& context = "") const {
    return obj_of(complex_decompose(f_, x), context);
  }

  // Backend contract

  std::size_t size() const override { return window_.size(); }
  std::string name(IndecIndex i) const override { return interval_name(window_.at(i), n_); }
  unsigned hom_dim(IndecIndex x, IndecIndex y) const override { return hom_[x * size() + y]; }
  unsigned ext_dim(IndecIndex c, IndecIndex a) const override {
    const auto& e = ext_spaces_[c * size() + a];
    return e ? static_cast<unsigned>(e->dim()) : 0;
  }
  bool exact_mode() const override { return exact_; }
  unsigned field_characteristic() const override { return f_.p(); }

  std::vector<Extriangle> middle_terms(const Obj& c, const Obj& a) const override {
    std::vector<Extriangle> out;
    out.push_back(split_extriangle(c, a));
    if (c.is_zero() || a.is_zero()) return out;

    // Orbit reduction: Aut(A) x Aut(C) acts on E(C, A); only the first
    // min(mult, rank bound) copies of each summand can be involved.
    Obj a_red, c_red;
    a.for_each([&](IndecIndex i, unsigned mi) {
      unsigned v = 0;
      c.for_each([&](IndecIndex j, unsigned mj) { v += mj * ext_dim(j, i); });
      a_red.add(i, std::min(mi, v));
    });
    c.for_each([&](IndecIndex j, unsigned mj) {
      unsigned w = 0;
      a_red.for_each([&](IndecIndex i, unsigned mi) { w += mi * ext_dim(j, i); });
      c_red.add(j, std::min(mj, w));
    });
    if (a_red.is_zero() || c_red.is_zero()) return out;

    SumLayout la, lc;
    ProjComplex acx = complex_of(a, &la);
    ProjComplex ccx = complex_of(c, &lc);
    std::vector<IndecIndex> as = a.summands(), cs = c.summands();

    // Generators: basis extensions between involved copies, embedded blockwise.
    std::vector<ChainMap> gens;
    std::vector<unsigned> seen_a(size(), 0);
    for (std::size_t ai = 0; ai < as.size(); ++ai) {
      IndecIndex i = as[ai];
      if (seen_a[i]++ >= a_red.mult(i)) continue;
      std::vector<unsigned> seen_c(size(), 0);
      for (std::size_t ci = 0; ci < cs.size(); ++ci) {
        IndecIndex j = cs[ci];
        if (seen_c[j]++ >= c_red.mult(j)) continue;
        const auto& space = ext_spaces_[j * size() + i];
        if (!space) continue;
        for (std::size_t b = 0; b < space->dim(); ++b)
          gens.push_back(embed(space->basis_map(b), std_[j], std_shift1_[i], lc.offset[ci], la.offset[ai], ccx,
                               acx, 1));
      }
    }
    // One representative per scalar line: a unit multiple of an extension has an isomorphic middle term.
    const std::size_t d = gens.size();
    std::size_t count = 1, reps = 1;
    for (std::size_t k = 0; k < d; ++k) {
      count *= f_.p();
      reps = (count - 1) / (f_.p() - 1) + 1;
      if (reps > cap_)
        throw EnumerationCapExceeded("extension space of dimension " + std::to_string(d) + " over F_" +
                                     std::to_string(f_.p()) + " needs more representatives than the enumeration cap of " +
                                     std::to_string(cap_));
    }
    std::map<Obj, Extriangle> found;
    std::vector<Scalar> coeffs(d, 0);
    for (std::size_t idx = 1; idx < count; ++idx) {
      // coeffs = base-p digits of idx, most significant first
      std::size_t v = idx;
      for (std::size_t k = d; k-- > 0;) {
        coeffs[k] = static_cast<Scalar>(v % f_.p());
        v /= f_.p();
      }
      if (*std::find_if(coeffs.begin(), coeffs.end(), [](Scalar x) { return x != 0; }) != 1) continue;
      ChainMap delta = zero_map(ccx, shift(f_, acx, 1));
      for (std::size_t g = 0; g < d; ++g)
        if (coeffs[g]) accumulate(delta, gens[g], coeffs[g]);
      auto real = std::make_shared<DerivedRealization>();
      real->t = cocone_of_extension(f_, ccx, acx, delta);
      Obj b = decompose(real->t.b, "middle term of an extension");
      if (found.count(b)) continue;
      Extriangle xi;
      xi.a_end = a;
      xi.mid = b;
      xi.c_end = c;
      xi.ext_id = "d:";
      for (std::size_t k = 0; k < d; ++k) xi.ext_id += (k ? "," : "") + std::to_string(coeffs[k]);
      xi.realization = real;
      found.emplace(b, std::move(xi));
    }
    for (auto& [b, xi] : found) {
      if (b == out.front().mid) continue;
      out.push_back(std::move(xi));
    }
    std::sort(out.begin(), out.end(), [](const Extriangle& x, const Extriangle& y) { return x.mid < y.mid; });
    return out;
  }

  Extriangle universal_extension(const Obj& c, IndecIndex a) const override {
    unsigned l = 0;
    c.for_each([&](IndecIndex j, unsigned m) { l += m * ext_dim(j, a); });
    if (l == 0) throw NoExtension("E(C, " + name(a) + ") = 0");
    Obj al = Obj::indec(a, l);
    SumLayout la, lc;
    ProjComplex acx = complex_of(al, &la);
    ProjComplex ccx = complex_of(c, &lc);
    ChainMap delta = zero_map(ccx, shift(f_, acx, 1));
    std::vector<IndecIndex> cs = c.summands();
    std::size_t r = 0;
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
      const auto& space = ext_spaces_[cs[ci] * size() + a];
      if (!space) continue;
      for (std::size_t b = 0; b < space->dim(); ++b, ++r)
        accumulate(delta, embed(space->basis_map(b), std_[cs[ci]], std_shift1_[a], lc.offset[ci], la.offset[r],
                                ccx, acx, 1),
                   1);
    }
    auto real = std::make_shared<DerivedRealization>();
    real->t = cocone_of_extension(f_, ccx, acx, delta);

    // The classes pi_r[1] o delta must span E(C, A).
    HomSpace e(f_, ccx, std_shift1_[a]);
    RowSpace span(f_, e.dim());
    for (std::size_t k = 0; k < l; ++k) {
      ChainMap pr = projection(acx, la, k, std_[a]);
      span.insert(e.coords(compose(f_, shift_map(pr, 1), delta, ccx, shift(f_, acx, 1), std_shift1_[a])));
    }
    if (span.rank() != e.dim()) throw ConsistencyError("universal extension is not surjective on E(C, A)");
    if (ext_dim(a, a) == 0 && HomSpace(f_, real->t.b, std_shift1_[a]).dim() != 0)
      throw ConsistencyError("E(A, A) = 0 but E(B, A) != 0 for a universal extension");

    Extriangle xi;
    xi.a_end = al;
    xi.mid = decompose(real->t.b, "universal extension");
    xi.c_end = c;
    xi.ext_id = "universal";
    xi.realization = real;
    return xi;
  }

  Extriangle trivial_deflation(const Obj& x) const override {
    auto real = std::make_shared<DerivedRealization>();
    real->t.a.n = n_;
    real->t.b = complex_of(x);
    real->t.c = real->t.b;
    real->t.defl = identity_map(real->t.b);
    Extriangle xi;
    xi.mid = x;
    xi.c_end = x;
    xi.realization = real;
    return xi;
  }

  Extriangle splice_universal(const Extriangle& xi, IndecIndex a) const override {
    const TriangleData& t = data(xi);
    HomSpace e(f_, t.b, std_shift1_[a]);
    const std::size_t l = e.dim();
    if (l == 0) throw NoExtension("E(X, " + name(a) + ") = 0");
    SumLayout la;
    ProjComplex acx = complex_of(Obj::indec(a, static_cast<unsigned>(l)), &la);
    ProjComplex acx1 = shift(f_, acx, 1);
    ChainMap delta = zero_map(t.b, acx1);
    std::map<int, std::size_t> whole;
    for (int k : t.b.degrees()) whole[k] = 0;
    for (std::size_t r = 0; r < l; ++r)
      accumulate(delta, embed(e.basis_map(r), t.b, std_shift1_[a], whole, la.offset[r], t.b, acx, 1), 1);
    TriangleData ext = cocone_of_extension(f_, t.b, acx, delta);
    ChainMap g = compose(f_, t.defl, ext.defl, ext.b, t.b, t.c);
    auto real = std::make_shared<DerivedRealization>();
    real->t = triangle_of_deflation(f_, ext.b, t.c, g);
    Extriangle out;
    out.a_end = decompose(real->t.a, "kernel of a spliced deflation");
    out.mid = decompose(ext.b, "spliced universal extension");
    out.c_end = xi.c_end;
    out.ext_id = "spliced";
    out.realization = real;
    return out;
  }

  unsigned left_exact_defect(const Obj& q, const Extriangle& xi) const override {
    const TriangleData& t = data(xi);
    ProjComplex qc = complex_of(q);
    HomSpace h1(f_, qc, t.a), h2(f_, qc, t.b);
    RowSpace img(f_, h2.dim());
    for (std::size_t i = 0; i < h1.dim(); ++i)
      img.insert(h2.coords(compose(f_, t.infl, h1.basis_map(i), qc, t.a, t.b)));
    return static_cast<unsigned>(h1.dim() - img.rank());
  }

  unsigned deflation_defect(const Obj& tobj, const Extriangle& xi) const override {
    const TriangleData& t = data(xi);
    ProjComplex tc = complex_of(tobj);
    HomSpace h1(f_, t.c, tc), h2(f_, t.b, tc);
    RowSpace img(f_, h2.dim());
    for (std::size_t i = 0; i < h1.dim(); ++i)
      img.insert(h2.coords(compose(f_, h1.basis_map(i), t.defl, t.b, t.c, tc)));
    return static_cast<unsigned>(h1.dim() - img.rank());
  }

  std::optional<unsigned> connecting_rank(const Obj& q, const Extriangle& xi) const override {
    const TriangleData& t = data(xi);
    ProjComplex qc = complex_of(q);
    ProjComplex a1 = shift(f_, t.a, 1);
    HomSpace h1(f_, qc, t.c), h2(f_, qc, a1);
    RowSpace img(f_, h2.dim());
    for (std::size_t i = 0; i < h1.dim(); ++i)
      img.insert(h2.coords(compose(f_, t.conn, h1.basis_map(i), qc, t.c, a1)));
    return static_cast<unsigned>(img.rank());
  }

  MinimalReduction right_minimal_reduce(const Obj& q, IndecIndex target, const Extriangle& xi) const override {
    const TriangleData& t = data(xi);
    if (!(xi.c_end == Obj::indec(target))) throw std::invalid_argument("right_minimal_reduce: target mismatch");
    if (!(xi.mid == q)) throw std::invalid_argument("right_minimal_reduce: Q is not the middle term");
    Obj keep, stripped;
    std::vector<std::pair<IndecIndex, ChainMap>> selected;
    bool error = false;
    q.for_each([&](IndecIndex i, unsigned mult) {
      const ProjComplex& xc = std_[i];
      HomSpace h1(f_, xc, t.b), h2(f_, t.b, xc), end(f_, xc, xc), h3(f_, xc, t.c);
      // Pairing into End(X) = k, and the kernel of postcomposition with q.
      Matrix pairing(h1.dim(), h2.dim());
      for (std::size_t r = 0; r < h1.dim(); ++r)
        for (std::size_t s = 0; s < h2.dim(); ++s)
          pairing(r, s) = end.coords(compose(f_, h2.basis_map(s), h1.basis_map(r), xc, t.b, xc)).at(0);
      Matrix gmat(h1.dim(), h3.dim());
      for (std::size_t r = 0; r < h1.dim(); ++r) {
        auto v = h3.coords(compose(f_, t.defl, h1.basis_map(r), xc, t.b, t.c));
        for (std::size_t s = 0; s < v.size(); ++s) gmat(r, s) = v[s];
      }
      Matrix kernel = h3.dim() == 0 ? Matrix::identity(h1.dim()) : nullspace(f_, gmat.transpose());
      if (rank(f_, pairing) != mult) {
        error = true;
        return;
      }
      RowSpace top(f_, h2.dim());
      if (kernel.rows() > 0 && h2.dim() > 0) {
        Matrix kp = multiply(f_, kernel, pairing);
        for (std::size_t r = 0; r < kp.rows(); ++r) top.insert(kp.row(r));
      }
      const unsigned killed = static_cast<unsigned>(top.rank());
      unsigned chosen = 0;
      for (std::size_t r = 0; r < h1.dim() && chosen + killed < mult; ++r)
        if (top.insert(pairing.row(r))) {
          selected.emplace_back(i, h1.basis_map(r));
          ++chosen;
        }
      keep.add(i, chosen);
      stripped.add(i, killed);
    });
    if (error) throw ConsistencyError("top of Hom(X, Q) does not match the multiplicity of X in Q");
    if (stripped.is_zero()) return {q, xi, {}};

    SumLayout lk;
    ProjComplex kc = complex_of(keep, &lk);
    ChainMap s = zero_map(kc, t.b);
    std::map<int, std::size_t> whole;
    for (int k : t.b.degrees()) whole[k] = 0;
    for (std::size_t r = 0; r < selected.size(); ++r)
      accumulate(s, embed(selected[r].second, std_[selected[r].first], t.b, lk.offset[r], whole, kc, t.b, 0), 1);
    ChainMap qmap = compose(f_, t.defl, s, kc, t.b, t.c);
    auto real = std::make_shared<DerivedRealization>();
    real->t = triangle_of_deflation(f_, kc, t.c, qmap);
    Extriangle out;
    out.a_end = decompose(real->t.a, "kernel after right-minimal reduction");
    out.mid = keep;
    out.c_end = xi.c_end;
    out.ext_id = keep.is_zero() ? "zero" : "reduced";
    out.realization = real;
    if (!(out.a_end + stripped == xi.a_end))
      throw ConsistencyError("right-minimal reduction did not move the stripped summands into the kernel");
    return {keep, out, stripped};
  }

  std::optional<std::vector<long long>> class_vector(const Obj& x) const override {
    std::vector<long long> v(static_cast<std::size_t>(n_), 0);
    x.for_each([&](IndecIndex i, unsigned m) {
      const auto& iv = window_[i];
      for (int u = iv.a; u <= iv.b; ++u) v[u - 1] += interval_sign(iv) * m;
    });
    return v;
  }

  std::optional<unsigned> direct_hom_dim(const Obj& x, const Obj& y) const override {
    return static_cast<unsigned>(HomSpace(f_, complex_of(x), complex_of(y)).dim());
  }
  std::optional<unsigned> direct_ext_dim(const Obj& c, const Obj& a) const override {
    return static_cast<unsigned>(HomSpace(f_, complex_of(c), shift(f_, complex_of(a), 1)).dim());
  }

  std::shared_ptr<const Backend> restrict_to(const std::vector<IndecIndex>& keep) const override {
    std::vector<Interval> sub;
    for (IndecIndex i : keep) sub.push_back(window_.at(i));
    return std::make_shared<DerivedBackend>(n_, sub, f_.p(), exact_, label_, cap_);
  }

  std::shared_ptr<const Backend> opposite() const override {
    return std::make_shared<OppositeBackend>(shared_from_this());
  }

 private:
  const TriangleData& data(const Extriangle& xi) const {
    auto r = std::dynamic_pointer_cast<const DerivedRealization>(xi.realization);
    if (!r) throw AnnotationMissing("extriangle " + xi.ext_id + " carries no derived realization");
    return r->t;
  }

  Extriangle split_extriangle(const Obj& c, const Obj& a) const {
    ProjComplex ccx = complex_of(c), acx = complex_of(a);
    auto real = std::make_shared<DerivedRealization>();
    real->t = cocone_of_extension(f_, ccx, acx, zero_map(ccx, shift(f_, acx, 1)));
    Extriangle xi;
    xi.a_end = a;
    xi.mid = a + c;
    xi.c_end = c;
    xi.realization = real;
    return xi;
  }

  static ChainMap zero_map(const ProjComplex& x, const ProjComplex& y) {
    ChainMap m;
    for (int k : union_degrees(x, y))
      if (x.rank_at(k) && y.rank_at(k)) m.comp[k] = Matrix(y.rank_at(k), x.rank_at(k));
    return m;
  }

  void accumulate(ChainMap& acc, const ChainMap& m, Scalar c) const {
    for (const auto& [k, mat] : m.comp) {
      auto it = acc.comp.find(k);
      if (it == acc.comp.end()) {
        acc.comp[k] = scale(f_, mat, c);
      } else {
        it->second = add(f_, it->second, scale(f_, mat, c));
      }
    }
  }

  // Places a map between summands into a map between sums. dst_base_shift is the
  // shift of the target sum (1 when the target is A[1]).
  static ChainMap embed(const ChainMap& m, const ProjComplex& src_part, const ProjComplex& dst_part,
                        const std::map<int, std::size_t>& src_off, const std::map<int, std::size_t>& dst_off,
                        const ProjComplex& src_sum, const ProjComplex& dst_sum_unshifted, int dst_base_shift) {
    ChainMap out;
    for (const auto& [k, mat] : m.comp) {
      if (src_part.rank_at(k) == 0 || dst_part.rank_at(k) == 0) continue;
      const int dk = k + dst_base_shift;
      Matrix big(dst_sum_unshifted.rank_at(dk), src_sum.rank_at(k));
      const std::size_t r0 = dst_off.at(dk), c0 = src_off.at(k);
      for (std::size_t r = 0; r < mat.rows(); ++r)
        for (std::size_t c = 0; c < mat.cols(); ++c) big(r0 + r, c0 + c) = mat(r, c);
      out.comp[k] = big;
    }
    return out;
  }

  ChainMap projection(const ProjComplex& sum, const SumLayout& layout, std::size_t part,
                      const ProjComplex& part_cx) const {
    ChainMap p;
    for (int k : part_cx.degrees()) {
      Matrix m(part_cx.rank_at(k), sum.rank_at(k));
      const std::size_t c0 = layout.offset[part].at(k);
      for (std::size_t r = 0; r < part_cx.rank_at(k); ++r) m(r, c0 + r) = 1;
      p.comp[k] = m;
    }
    return p;
  }

  int n_;
  std::vector<Interval> window_;
  PrimeField f_;
  bool exact_;
  std::string label_;
  std::size_t cap_;
  std::map<Interval, IndecIndex> index_;
  std::vector<ProjComplex> std_;
  std::vector<ProjComplex> std_shift1_;
  std::vector<unsigned> hom_;
  std::vector<std::shared_ptr<HomSpace>> ext_spaces_;
};

}  // namespace extcat::derived
