#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "extcat/core.hpp"
#include "extcat/error.hpp"
#include "extcat/model.hpp"
#include "extcat/search.hpp"

namespace extcat::strat {

struct StratSystem {
  std::vector<IndecIndex> phi;
  std::optional<std::vector<Obj>> q;
  std::optional<std::vector<Extriangle>> etas;  // (K_i, Q_i, Phi_i)
};

struct StratVerdict {
  bool pass = true;
  std::string axiom;  // "S1", "S2" or "distinct"
  std::size_t j = 0, i = 0;  // 1-based, the first violating pair
  std::string detail;
};

// S1: Hom(Phi_j, Phi_i) = 0 for j > i.  S2: E(Phi_j, Phi_i) = 0 for j >= i.
inline StratVerdict check_stratifying(const std::vector<IndecIndex>& phi, const CategoryModel& m) {
  for (IndecIndex x : phi)
    if (x >= m.size()) throw UnknownIndec("index " + std::to_string(x) + " outside the model");
  const std::size_t n = phi.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (phi[a] == phi[b]) return {false, "distinct", b + 1, a + 1, m.name(phi[a]) + " is listed twice"};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      if (j > i && m.hom_dim(phi[j], phi[i]) != 0)
        return {false, "S1", j + 1, i + 1, "Hom(" + m.name(phi[j]) + ", " + m.name(phi[i]) + ") != 0"};
      if (m.ext_dim(phi[j], phi[i]) != 0)
        return {false, "S2", j + 1, i + 1, "E(" + m.name(phi[j]) + ", " + m.name(phi[i]) + ") != 0"};
    }
  return {};
}

inline std::vector<IndecIndex> parse_phi(const CategoryModel& m, const std::vector<std::string>& names) {
  std::vector<IndecIndex> out;
  for (const auto& nm : names) out.push_back(m.index_of(nm));
  return out;
}

struct Closure {
  std::vector<IndecIndex> indecs;  // sorted
  ObjSet objects;                  // everything the construction produced
  bool summand_closed = true;
  std::string route;

  bool contains(const Obj& x) const {
    bool ok = true;
    x.for_each([&](IndecIndex i, unsigned) {
      if (!std::binary_search(indecs.begin(), indecs.end(), i)) ok = false;
    });
    return ok;
  }
};

struct ClosureOptions {
  unsigned mult = 1;          // copies of each Phi_i in add Phi_i
  unsigned total_bound = 3;   // object size kept by the fixed-point route
  unsigned max_rounds = 32;
  bool force_fixed_point = false;
};

namespace detail {

inline Closure finish(ObjSet objs, std::string route) {
  Closure c;
  c.route = std::move(route);
  std::set<IndecIndex> ind;
  for (const Obj& x : objs)
    if (x.is_indecomposable()) ind.insert(x.sole());
  c.indecs.assign(ind.begin(), ind.end());
  for (const Obj& x : objs)
    x.for_each([&](IndecIndex i, unsigned) {
      if (!ind.count(i)) c.summand_closed = false;
    });
  c.objects = std::move(objs);
  return c;
}

inline ObjSet add_of(IndecIndex x, unsigned mult) {
  ObjSet s;
  for (unsigned k = 0; k <= mult; ++k) s.insert(Obj::indec(x, k));
  return s;
}

}  // namespace detail

// add Phi_n * add Phi_{n-1} * ... * add Phi_1, bracketed from the left.
inline Closure closure_by_star(const std::vector<IndecIndex>& phi, const CategoryModel& m, unsigned mult = 1) {
  if (phi.empty()) return detail::finish({Obj{}}, "star");
  ObjSet t = detail::add_of(phi.back(), mult);
  for (std::size_t k = phi.size() - 1; k-- > 0;) t = star(t, detail::add_of(phi[k], mult), m);
  return detail::finish(std::move(t), "star");
}

// Same product bracketed from the right.
inline ObjSet closure_by_star_right(const std::vector<IndecIndex>& phi, const CategoryModel& m, unsigned mult = 1) {
  if (phi.empty()) return {Obj{}};
  ObjSet t = detail::add_of(phi.front(), mult);
  for (std::size_t k = 1; k < phi.size(); ++k) t = star(detail::add_of(phi[k], mult), t, m);
  return t;
}

// Smallest set of objects (up to total_bound summands) containing 0 and Phi
// and closed under extensions.
inline Closure closure_by_fixed_point(const std::vector<IndecIndex>& phi, const CategoryModel& m,
                                      const ClosureOptions& opt = {}) {
  ObjSet s{Obj{}};
  for (IndecIndex x : phi) s.insert(Obj::indec(x));
  for (unsigned round = 0; round < opt.max_rounds; ++round) {
    ObjSet next = s;
    for (const Obj& y : star(s, s, m))
      if (y.total() <= opt.total_bound) next.insert(y);
    if (next == s) return detail::finish(std::move(s), "fixed-point");
    s = std::move(next);
  }
  throw NonTermination("extension closure did not stabilise within " + std::to_string(opt.max_rounds) + " rounds");
}

inline Closure filtered_closure(const std::vector<IndecIndex>& phi, const CategoryModel& m,
                                const ClosureOptions& opt = {}) {
  if (!opt.force_fixed_point && check_stratifying(phi, m).pass) return closure_by_star(phi, m, opt.mult);
  return closure_by_fixed_point(phi, m, opt);
}

inline unsigned default_cap(const Obj& x) { return 2 * x.total() + 4; }

// Predecessor pool for filtrations of x inside F(Phi).
inline ObjectPool filtration_pool(const CategoryModel& m, const Closure& c, const Obj& x) {
  unsigned mm = 2;
  for (unsigned v : x.dense()) mm = std::max(mm, v + 1);
  return ObjectPool(m, c.indecs, mm, x.total() + 2);
}

inline FiltrationEngine filtration_engine(const CategoryModel& m, const std::vector<IndecIndex>& phi,
                                          const Closure& c, const Obj& x) {
  return FiltrationEngine(m, phi, filtration_pool(m, c, x));
}

inline FiltrationList enumerate_filtrations(const Obj& x, const std::vector<IndecIndex>& phi, const CategoryModel& m,
                                            std::optional<unsigned> cap = std::nullopt) {
  Closure c = filtered_closure(phi, m);
  if (!c.contains(x)) return {};
  FiltrationEngine eng = filtration_engine(m, phi, c, x);
  return eng.enumerate(x, cap.value_or(default_cap(x)));
}

inline std::size_t phi_position(const std::vector<IndecIndex>& phi, IndecIndex x) {
  auto it = std::find(phi.begin(), phi.end(), x);
  if (it == phi.end()) throw ConsistencyError("factor is not a member of Phi");
  return static_cast<std::size_t>(it - phi.begin());
}

// Same target, length and factors, with Phi-indices j_1 >= j_2 >= ... >= j_t.
inline Filtration reorder_filtration(const Filtration& f, const std::vector<IndecIndex>& phi, const CategoryModel& m) {
  std::vector<std::size_t> pos;
  for (IndecIndex x : f.factors) pos.push_back(phi_position(phi, x));
  if (std::is_sorted(pos.rbegin(), pos.rend())) return f;
  std::sort(pos.begin(), pos.end(), std::greater<>());
  const Obj target = f.target();
  Closure c = filtered_closure(phi, m);
  FiltrationEngine eng = filtration_engine(m, phi, c, target);
  if (auto g = eng.find_with_factors(target, pos)) return *g;
  throw ConsistencyError("no non-increasing filtration of " + m.format(target) + " exists in the window");
}

struct ProjectiveVerdict {
  bool ps1 = true;
  bool ps2 = true;
  std::vector<bool> minimal;
  bool qn_iso = true;
  bool relative_projective = true;
  std::vector<std::string> details;
  std::vector<Extriangle> etas;  // found or supplied

  bool all_minimal() const {
    return std::all_of(minimal.begin(), minimal.end(), [](bool b) { return b; });
  }
  bool ok() const { return ps1 && ps2 && all_minimal() && qn_iso && relative_projective; }
};

namespace detail {

inline std::vector<IndecIndex> tail(const std::vector<IndecIndex>& phi, std::size_t i) {
  return {phi.begin() + static_cast<std::ptrdiff_t>(i) + 1, phi.end()};
}

// An extriangle (K, q, target) with K drawn from the pool.
inline std::optional<Extriangle> find_eta(const CategoryModel& m, const Obj& q, IndecIndex target,
                                          const ObjectPool& pool) {
  const Obj t = Obj::indec(target);
  for (const Obj& k : pool.with_class(class_difference(m, q, t)))
    for (const auto& xi : m.middle_terms(t, k))
      if (xi.mid == q) return xi;
  return std::nullopt;
}

}  // namespace detail

inline ProjectiveVerdict check_projective_system(const StratSystem& sys, const CategoryModel& m) {
  if (!sys.q) throw std::invalid_argument("projective system check needs Q");
  const auto& phi = sys.phi;
  const auto& q = *sys.q;
  const std::size_t n = phi.size();
  if (q.size() != n) throw std::invalid_argument("|Q| differs from |Phi|");
  ProjectiveVerdict v;
  Closure full = filtered_closure(phi, m);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m.ext_dim(q[i], Obj::indec(phi[j])) != 0) {
        v.ps1 = false;
        v.details.push_back("PS1: E(Q_" + std::to_string(i + 1) + ", Phi_" + std::to_string(j + 1) + ") != 0");
      }
  for (std::size_t i = 0; i < n; ++i)
    for (IndecIndex x : full.indecs)
      if (m.ext_dim(q[i], Obj::indec(x)) != 0) {
        v.relative_projective = false;
        v.details.push_back("E(Q_" + std::to_string(i + 1) + ", " + m.name(x) + ") != 0");
      }

  for (std::size_t i = 0; i < n; ++i) {
    Closure tl = filtered_closure(detail::tail(phi, i), m);
    std::optional<Extriangle> eta;
    if (sys.etas) {
      eta = sys.etas->at(i);
      if (!(eta->mid == q[i]) || !(eta->c_end == Obj::indec(phi[i]))) {
        v.ps2 = false;
        v.details.push_back("PS2: eta_" + std::to_string(i + 1) + " does not end in Q_i -> Phi_i");
      } else if (!tl.contains(eta->a_end)) {
        v.ps2 = false;
        v.details.push_back("PS2: K_" + std::to_string(i + 1) + " is not filtered by the later Phi");
      }
    } else {
      ObjectPool pool(m, tl.indecs, q[i].total() + 2, q[i].total() + 2);
      eta = detail::find_eta(m, q[i], phi[i], pool);
      if (!eta) {
        v.ps2 = false;
        v.details.push_back("PS2: no extriangle K_" + std::to_string(i + 1) + " -> Q_i -> Phi_i with K_i filtered by the later Phi");
        ObjectPool any(m, q[i].total() + 1, q[i].total() + 1);
        eta = detail::find_eta(m, q[i], phi[i], any);
      }
    }
    if (!eta) {
      v.minimal.push_back(false);
      v.details.push_back("no extriangle ending in Q_" + std::to_string(i + 1) + " -> Phi_i");
      v.etas.emplace_back();
      continue;
    }
    MinimalReduction r = m.right_minimal_reduce(q[i], phi[i], *eta);
    v.minimal.push_back(r.stripped.is_zero());
    if (!r.stripped.is_zero())
      v.details.push_back("q_" + std::to_string(i + 1) + " is not right minimal: " + m.format(r.stripped) + " strips");
    v.etas.push_back(*eta);
  }
  if (n > 0) {
    const auto& last = v.etas.back();
    if (!last.a_end.is_zero() || !(q.back() == Obj::indec(phi.back()))) {
      v.qn_iso = false;
      v.details.push_back("q_n is not an isomorphism");
    }
  }
  return v;
}

inline StratSystem build_projective_system(const std::vector<IndecIndex>& phi, const CategoryModel& m) {
  StratVerdict sv = check_stratifying(phi, m);
  if (!sv.pass) throw ConsistencyError("Phi is not stratifying: " + sv.axiom + " fails, " + sv.detail);
  const std::size_t n = phi.size();
  StratSystem sys;
  sys.phi = phi;
  sys.q.emplace();
  sys.etas.emplace();
  for (std::size_t i = 0; i < n; ++i) {
    Extriangle xi = m.backend().trivial_deflation(Obj::indec(phi[i]));
    std::size_t last_a = 0;
    for (std::size_t step = 0;; ++step) {
      std::optional<std::size_t> a;
      for (std::size_t t = 0; t < n && !a; ++t)
        if (m.ext_dim(xi.mid, Obj::indec(phi[t])) != 0) a = t;
      if (!a) break;
      if (step > 0 && *a <= last_a)
        throw ConsistencyError("universal extension indices failed to increase at i = " + std::to_string(i + 1));
      if (step > n) throw NonTermination("projective approximation did not terminate");
      last_a = *a;
      xi = m.backend().splice_universal(xi, phi[*a]);
    }
    MinimalReduction r = m.right_minimal_reduce(xi.mid, phi[i], xi);
    Closure tl = filtered_closure(detail::tail(phi, i), m);
    if (!tl.contains(r.eta.a_end))
      throw ConsistencyError("K_" + std::to_string(i + 1) + " = " + m.format(r.eta.a_end) +
                             " is not filtered by the later Phi");
    sys.q->push_back(r.q);
    sys.etas->push_back(r.eta);
  }
  return sys;
}

struct LeftExactVerdict {
  std::vector<bool> left_exact;
  std::vector<bool> q_nonzero;
  std::vector<std::optional<Extriangle>> witness;  // first extriangle with nonzero defect
};

// Hom(Q_i, -) tested on every extriangle of F(Phi) whose ends have at most
// end_total summands.
inline LeftExactVerdict check_left_exact(const StratSystem& sys, const CategoryModel& m, unsigned end_total = 2) {
  if (!sys.q) throw std::invalid_argument("left exactness check needs Q");
  const std::size_t n = sys.phi.size();
  Closure c = filtered_closure(sys.phi, m);
  ObjectPool ends(m, c.indecs, end_total, end_total);
  std::vector<Extriangle> tests;
  for (const Obj& cc : ends.all())
    for (const Obj& aa : ends.all()) {
      if (cc.is_zero() || aa.is_zero() || m.ext_dim(cc, aa) == 0) continue;
      for (const auto& xi : m.middle_terms(cc, aa))
        if (!xi.is_split()) tests.push_back(xi);
    }
  LeftExactVerdict v;
  for (std::size_t i = 0; i < n; ++i) {
    const Obj& qi = (*sys.q)[i];
    bool ok = true;
    std::optional<Extriangle> w;
    for (const auto& xi : tests)
      if (m.left_exact_defect(qi, xi) != 0) {
        ok = false;
        w = xi;
        break;
      }
    v.left_exact.push_back(ok);
    v.witness.push_back(w);
    bool nz = !qi.is_zero();
    if (nz && sys.etas) {
      const Obj t = Obj::indec(sys.phi[i]);
      nz = m.deflation_defect(t, (*sys.etas)[i]) != m.hom_dim(t, t);
    }
    v.q_nonzero.push_back(nz);
  }
  return v;
}

struct MultiplicityMatrix {
  std::vector<std::vector<long long>> d;  // d[i][j] = dim Hom(Q_i, Phi_j)
  bool upper_triangular = true;
  bool diagonal_nonzero = true;
};

inline MultiplicityMatrix multiplicity_matrix(const StratSystem& sys, const CategoryModel& m) {
  if (!sys.q) throw std::invalid_argument("multiplicity matrix needs Q");
  const std::size_t n = sys.phi.size();
  MultiplicityMatrix out;
  out.d.assign(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.d[i][j] = m.hom_dim((*sys.q)[i], Obj::indec(sys.phi[j]));
      if (i > j && out.d[i][j] != 0) out.upper_triangular = false;
      if (i == j && out.d[i][j] == 0) out.diagonal_nonzero = false;
    }
  return out;
}

inline std::vector<long long> hom_vector(const StratSystem& sys, const Obj& x, const CategoryModel& m) {
  std::vector<long long> c;
  for (const Obj& qi : *sys.q) c.push_back(m.hom_dim(qi, x));
  return c;
}

// Solves D m = c exactly over the rationals.
inline std::vector<long long> solve_multiplicities(const std::vector<std::vector<long long>>& d,
                                                   const std::vector<long long>& c) {
  using Q = boost::rational<long long>;
  const std::size_t n = d.size();
  std::vector<std::vector<Q>> a(n, std::vector<Q>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = d[i][j];
    a[i][n] = c.at(i);
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].numerator() == 0) ++piv;
    if (piv == n) throw SingularMatrix("multiplicity matrix is singular");
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].numerator() == 0) continue;
      Q f = a[r][col] / a[col][col];
      for (std::size_t k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  std::vector<long long> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Q v = a[i][n] / a[i][i];
    if (v.denominator() != 1 || v.numerator() < 0)
      throw NonIntegralSolution("multiplicity " + std::to_string(i + 1) + " is " + std::to_string(v.numerator()) +
                                "/" + std::to_string(v.denominator()));
    out[i] = v.numerator();
  }
  return out;
}

inline std::vector<long long> multiplicities(const Obj& x, const StratSystem& sys, const CategoryModel& m) {
  return solve_multiplicities(multiplicity_matrix(sys, m).d, hom_vector(sys, x, m));
}

}  // namespace extcat::strat
