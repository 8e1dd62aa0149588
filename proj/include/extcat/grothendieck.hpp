#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "extcat/core.hpp"
#include "extcat/error.hpp"
#include "extcat/intmat.hpp"
#include "extcat/model.hpp"
#include "extcat/search.hpp"

namespace extcat::groth {

enum class Tri { no, yes, unknown };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::no:
      return "false";
    case Tri::yes:
      return "true";
    default:
      return "unknown";
  }
}
inline Tri tri(bool b) { return b ? Tri::yes : Tri::no; }
inline Tri tri_and(Tri a, Tri b) {
  if (a == Tri::no || b == Tri::no) return Tri::no;
  if (a == Tri::unknown || b == Tri::unknown) return Tri::unknown;
  return Tri::yes;
}

struct Bounds {
  unsigned end_total = 2;     // ends searched when testing simplicity and zero middles
  unsigned object_total = 2;  // objects whose composition series are enumerated
  unsigned relation_total = 1;  // extriangle ends that contribute monoid relations
  unsigned norm = 4;          // largest vector size visited by rewrite search
  std::size_t state_limit = 200000;
};

// ---------------------------------------------------------------- zero and simples

struct ZeroSimpleLike {
  bool value = true;
  std::optional<Extriangle> witness;  // (A, 0, C) with A nonzero
};

inline ZeroSimpleLike zero_simple_like(const CategoryModel& m, const Bounds& b = {}) {
  ObjectPool pool(m, b.end_total, b.end_total);
  for (const Obj& c : pool.all()) {
    if (c.is_zero()) continue;
    auto need = m.class_vector(c);
    if (need)
      for (auto& v : *need) v = -v;
    for (const Obj& a : pool.with_class(need)) {
      if (a.is_zero() || m.ext_dim(c, a) == 0) continue;
      for (const auto& xi : m.middle_terms(c, a))
        if (xi.mid.is_zero()) return {false, xi};
    }
  }
  return {};
}

// An extriangle (A, s, C) with A and C nonzero, if one exists within the bound.
inline std::optional<Extriangle> proper_inflation_into(const CategoryModel& m, IndecIndex s, const ObjectPool& pool) {
  const Obj so = Obj::indec(s);
  for (const Obj& c : pool.all()) {
    if (c.is_zero()) continue;
    for (const Obj& a : pool.with_class(class_difference(m, so, c))) {
      if (a.is_zero() || m.ext_dim(c, a) == 0) continue;
      for (const auto& xi : m.middle_terms(c, a))
        if (xi.mid == so) return xi;
    }
  }
  return std::nullopt;
}

// S is simple iff every extriangle (A, S, C) has A = 0 or C = 0. Without a
// simple-like zero no object is simple, so the search is skipped unless forced.
inline std::vector<IndecIndex> simples(const CategoryModel& m, const Bounds& b = {}, bool force = false) {
  if (!force && !zero_simple_like(m, b).value) return {};
  ObjectPool pool(m, b.end_total, b.end_total);
  std::vector<IndecIndex> out;
  for (std::size_t s = 0; s < m.size(); ++s)
    if (!proper_inflation_into(m, static_cast<IndecIndex>(s), pool)) out.push_back(static_cast<IndecIndex>(s));
  return out;
}

// ---------------------------------------------------------------- composition series

struct SeriesVerdict {
  bool has_series = false;
  std::set<unsigned> lengths;
  std::set<std::vector<unsigned>> factor_multisets;  // counts over the simples list
  bool truncated = false;
  bool jh_local = true;
};

inline ObjectPool series_pool(const CategoryModel& m, const Obj& x) {
  unsigned mm = 2;
  for (unsigned v : x.dense()) mm = std::max(mm, v + 1);
  return ObjectPool(m, mm, x.total() + 1);
}

inline SeriesVerdict composition_series(const Obj& x, const CategoryModel& m, const std::vector<IndecIndex>& simple,
                                        std::optional<unsigned> cap = std::nullopt) {
  FiltrationEngine eng(m, simple, series_pool(m, x));
  FiltrationProfiles p = eng.profiles(x, cap.value_or(2 * x.total() + 4));
  SeriesVerdict v;
  v.factor_multisets = p.counts;
  v.lengths = p.lengths();
  v.has_series = !p.counts.empty();
  v.truncated = p.truncated;
  v.jh_local = v.factor_multisets.size() <= 1 && v.lengths.size() <= 1;
  return v;
}

struct JhVerdict {
  Tri jh = Tri::yes;
  Tri length = Tri::yes;
  ZeroSimpleLike zero;
  std::vector<IndecIndex> simples;
  std::optional<Obj> jh_counterexample;
  std::optional<Obj> length_counterexample;
  std::size_t objects_checked = 0;
};

inline JhVerdict jh_and_length_verdict(const CategoryModel& m, const Bounds& b = {}) {
  JhVerdict v;
  v.zero = zero_simple_like(m, b);
  if (!v.zero.value) {
    // (A, 0, C) with A nonzero gives arbitrarily long filtrations.
    v.jh = Tri::no;
    v.length = Tri::no;
    return v;
  }
  v.simples = simples(m, b);
  bool truncated = false;
  for (const Obj& x : enumerate_objects(m.size(), b.object_total, b.object_total)) {
    if (x.is_zero()) continue;
    ++v.objects_checked;
    SeriesVerdict s = composition_series(x, m, v.simples);
    truncated = truncated || s.truncated;
    if (!s.jh_local && v.jh != Tri::no) {
      v.jh = Tri::no;
      v.jh_counterexample = x;
    }
    if (!s.has_series && !s.truncated && v.length != Tri::no) {
      v.length = Tri::no;
      v.length_counterexample = x;
    }
  }
  if (truncated) {
    if (v.jh == Tri::yes) v.jh = Tri::unknown;
    if (v.length == Tri::yes) v.length = Tri::unknown;
  }
  return v;
}

// ---------------------------------------------------------------- monoid

using Vec = std::vector<unsigned>;

struct Relation {
  Vec lhs;  // [B]
  Vec rhs;  // [A] + [C]
  std::string source;
};

struct MonoidPresentation {
  std::vector<std::string> generators;
  std::vector<Relation> relations;
};

inline MonoidPresentation monoid_presentation(const CategoryModel& m, const Bounds& b = {}) {
  MonoidPresentation p;
  const std::size_t n = m.size();
  for (const auto& id : m.indecs()) p.generators.push_back(id.name);
  std::set<std::pair<Vec, Vec>> seen;
  const auto ends = enumerate_objects(n, b.relation_total, b.relation_total);
  for (const Obj& c : ends)
    for (const Obj& a : ends) {
      if (c.is_zero() || a.is_zero() || m.ext_dim(c, a) == 0) continue;
      for (const auto& xi : m.middle_terms(c, a)) {
        if (xi.is_split()) continue;
        Vec lhs = xi.mid.dense(n), rhs = (xi.a_end + xi.c_end).dense(n);
        if (lhs == rhs || !seen.insert({lhs, rhs}).second) continue;
        p.relations.push_back({lhs, rhs, m.format(xi)});
      }
    }
  std::sort(p.relations.begin(), p.relations.end(),
            [](const Relation& x, const Relation& y) { return std::tie(x.lhs, x.rhs) < std::tie(y.lhs, y.rhs); });
  return p;
}

inline unsigned vec_total(const Vec& v) {
  unsigned t = 0;
  for (unsigned x : v) t += x;
  return t;
}

struct Rewrite {
  std::size_t relation;
  bool forward;  // lhs replaced by rhs
  Vec result;
};

// Vectors reachable from a start by relation rewrites, all of size <= norm.
class RewriteGraph {
 public:
  RewriteGraph(const MonoidPresentation& p, unsigned norm, std::size_t state_limit)
      : p_(p), norm_(norm), limit_(state_limit) {}

  struct Search {
    std::map<Vec, std::pair<Vec, Rewrite>> parent;
    bool complete = true;  // every vector of size <= norm reachable from start was visited
  };

  Search explore(const Vec& start, const std::optional<Vec>& stop_at = std::nullopt) const {
    Search s;
    std::deque<Vec> queue{start};
    s.parent.emplace(start, std::make_pair(start, Rewrite{0, true, start}));
    while (!queue.empty()) {
      Vec cur = std::move(queue.front());
      queue.pop_front();
      if (stop_at && cur == *stop_at) return s;
      for (std::size_t r = 0; r < p_.relations.size(); ++r)
        for (int dir = 0; dir < 2; ++dir) {
          const Vec& from = dir == 0 ? p_.relations[r].lhs : p_.relations[r].rhs;
          const Vec& to = dir == 0 ? p_.relations[r].rhs : p_.relations[r].lhs;
          bool fits = true;
          for (std::size_t i = 0; i < cur.size(); ++i)
            if (cur[i] < from[i]) fits = false;
          if (!fits) continue;
          Vec next = cur;
          for (std::size_t i = 0; i < cur.size(); ++i) next[i] = next[i] - from[i] + to[i];
          if (vec_total(next) > norm_) continue;
          if (s.parent.count(next)) continue;
          if (s.parent.size() >= limit_) {
            s.complete = false;
            return s;
          }
          s.parent.emplace(next, std::make_pair(cur, Rewrite{r, dir == 0, next}));
          queue.push_back(std::move(next));
        }
    }
    return s;
  }

  static std::vector<Rewrite> chain(const Search& s, const Vec& start, const Vec& end) {
    std::vector<Rewrite> out;
    Vec cur = end;
    while (cur != start) {
      const auto& [prev, rw] = s.parent.at(cur);
      out.push_back(rw);
      cur = prev;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  unsigned norm() const { return norm_; }

 private:
  const MonoidPresentation& p_;
  unsigned norm_;
  std::size_t limit_;
};

// ---------------------------------------------------------------- K0

struct K0Result {
  std::vector<BigInt> invariant_factors;  // the factors > 1
  std::size_t free_rank = 0;
  std::size_t relation_rank = 0;
  std::vector<std::vector<BigInt>> simple_images;  // free coordinates
  bool basis_flag = false;
  SmithForm smith;
};

inline K0Result k0(const MonoidPresentation& p, const std::vector<IndecIndex>& simple) {
  const std::size_t n = p.generators.size();
  IntMatrix rel;
  for (const auto& r : p.relations) {
    std::vector<BigInt> row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = BigInt(r.lhs[i]) - BigInt(r.rhs[i]);
    rel.push_back(std::move(row));
  }
  K0Result out;
  out.smith = smith_normal_form(rel, n);
  out.relation_rank = out.smith.rank();
  out.free_rank = n - out.relation_rank;
  for (const auto& d : out.smith.diag)
    if (d > 1) out.invariant_factors.push_back(d);
  IntMatrix block;
  for (IndecIndex s : simple) {
    std::vector<BigInt> e(n, 0);
    e[s] = 1;
    std::vector<BigInt> y = row_times(e, out.smith.v);
    std::vector<BigInt> free(y.begin() + static_cast<std::ptrdiff_t>(out.relation_rank), y.end());
    out.simple_images.push_back(free);
    block.push_back(std::move(free));
  }
  out.basis_flag = out.invariant_factors.empty() && simple.size() == out.free_rank && abs(determinant(block)) == 1;
  return out;
}

inline std::vector<BigInt> to_big(const Vec& v) { return {v.begin(), v.end()}; }

inline bool same_k0_image(const K0Result& k, const Vec& x, const Vec& y) {
  std::vector<BigInt> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = BigInt(x[i]) - BigInt(y[i]);
  return in_row_lattice(k.smith, d);
}

// ---------------------------------------------------------------- word problem

enum class Equality { equal, not_equal, unknown };

inline const char* to_string(Equality e) {
  switch (e) {
    case Equality::equal:
      return "Equal";
    case Equality::not_equal:
      return "NotEqual";
    default:
      return "Unknown";
  }
}

struct EqualityResult {
  Equality verdict = Equality::unknown;
  std::vector<Rewrite> chain;
  std::string reason;
};

inline EqualityResult monoid_equal(const MonoidPresentation& p, const Vec& x, const Vec& y, const Bounds& b = {}) {
  EqualityResult r;
  if (x == y) {
    r.verdict = Equality::equal;
    return r;
  }
  const unsigned norm = std::max({b.norm, vec_total(x), vec_total(y)});
  RewriteGraph g(p, norm, b.state_limit);
  auto s = g.explore(x, y);
  if (s.parent.count(y)) {
    r.verdict = Equality::equal;
    r.chain = RewriteGraph::chain(s, x, y);
    return r;
  }
  K0Result k = k0(p, {});
  if (s.complete && !same_k0_image(k, x, y)) {
    r.verdict = Equality::not_equal;
    r.reason = "distinct images in K0";
    return r;
  }
  r.reason = s.complete ? "search exhausted below the norm bound; no separating invariant" : "search truncated";
  return r;
}

struct Reducedness {
  Tri value = Tri::yes;
  std::optional<Vec> witness;  // a nonzero vector equal to 0
};

inline Reducedness is_reduced(const MonoidPresentation& p, const Bounds& b = {}) {
  const Vec zero(p.generators.size(), 0);
  RewriteGraph g(p, b.norm, b.state_limit);
  auto s = g.explore(zero);
  for (const auto& [v, _] : s.parent)
    if (v != zero) return {Tri::no, v};
  return {s.complete ? Tri::yes : Tri::unknown, std::nullopt};
}

// One generator per atom class.
inline std::vector<IndecIndex> atoms(const MonoidPresentation& p, const Bounds& b = {}) {
  const std::size_t n = p.generators.size();
  const Vec zero(n, 0);
  RewriteGraph g(p, b.norm, b.state_limit);
  auto zs = g.explore(zero);
  auto is_zero_class = [&](const Vec& v) { return zs.parent.count(v) > 0; };
  std::vector<IndecIndex> out;
  std::vector<std::set<Vec>> classes;
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    if (is_zero_class(e)) continue;
    auto cls = g.explore(e);
    bool atom = true;
    for (const auto& [w, _] : cls.parent) {
      if (vec_total(w) < 2) continue;
      // every split of w into two nonempty parts must have a part equal to 0
      Vec part(n, 0);
      std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (!atom) return;
        if (k == n) {
          unsigned t = vec_total(part);
          if (t == 0 || t == vec_total(w)) return;
          Vec rest(n);
          for (std::size_t j = 0; j < n; ++j) rest[j] = w[j] - part[j];
          if (!is_zero_class(part) && !is_zero_class(rest)) atom = false;
          return;
        }
        for (unsigned c = 0; c <= w[k]; ++c) {
          part[k] = c;
          rec(k + 1);
        }
        part[k] = 0;
      };
      rec(0);
      if (!atom) break;
    }
    if (!atom) continue;
    std::set<Vec> keys;
    for (const auto& [w, _] : cls.parent) keys.insert(w);
    bool dup = false;
    for (const auto& c : classes)
      if (c.count(e)) dup = true;
    if (!dup) {
      classes.push_back(std::move(keys));
      out.push_back(static_cast<IndecIndex>(i));
    }
  }
  return out;
}

struct FreeVerdict {
  Tri value = Tri::unknown;
  std::string reason;
  std::map<IndecIndex, Vec> decomposition;  // generator -> equal vector supported on simples
  std::optional<bool> nu_additive;          // total simple count respects every relation
};

inline FreeVerdict monoid_free_on_simples(const MonoidPresentation& p, const std::vector<IndecIndex>& simple,
                                          const Bounds& b = {}) {
  FreeVerdict v;
  const std::size_t n = p.generators.size();
  if (n == 0) {
    v.value = Tri::yes;
    v.reason = "zero model";
    return v;
  }
  Reducedness red = is_reduced(p, b);
  if (red.value == Tri::no) {
    v.value = Tri::no;
    v.reason = "not reduced";
    return v;
  }
  const std::set<IndecIndex> sset(simple.begin(), simple.end());
  RewriteGraph g(p, std::max<unsigned>(b.norm, 1), b.state_limit);
  bool unknown = red.value == Tri::unknown;
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    auto cls = g.explore(e);
    std::vector<Vec> on_simples;
    for (const auto& [w, _] : cls.parent) {
      bool ok = true;
      for (std::size_t j = 0; j < n; ++j)
        if (w[j] && !sset.count(static_cast<IndecIndex>(j))) ok = false;
      if (ok) on_simples.push_back(w);
    }
    if (on_simples.size() > 1) {
      v.value = Tri::no;
      v.reason = p.generators[i] + " equals two different sums of simples";
      return v;
    }
    if (on_simples.empty()) {
      if (simple.empty()) {
        v.value = Tri::no;
        v.reason = "no simple objects, but " + p.generators[i] + " is nonzero";
        return v;
      }
      unknown = true;
      continue;
    }
    v.decomposition[static_cast<IndecIndex>(i)] = on_simples.front();
  }
  if (unknown) {
    v.reason = "some class has no sum-of-simples representative within the norm bound";
    return v;
  }
  auto phi = [&](const Vec& w) {
    Vec out(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[j] += w[i] * v.decomposition.at(static_cast<IndecIndex>(i))[j];
    return out;
  };
  bool nu = true;
  for (const auto& r : p.relations) {
    if (phi(r.lhs) != phi(r.rhs)) {
      v.value = Tri::no;
      v.reason = "relation " + r.source + " identifies two different sums of simples";
      return v;
    }
    if (vec_total(phi(r.lhs)) != vec_total(phi(r.rhs))) nu = false;
  }
  for (const auto& [i, w] : v.decomposition)
    if (vec_total(w) == 0) nu = false;
  v.nu_additive = nu;
  v.value = Tri::yes;
  v.reason = "every generator has a unique sum-of-simples form respected by all relations";
  return v;
}

// ---------------------------------------------------------------- three-way check

struct ThmC {
  Tri verdict_i = Tri::unknown;    // length category and Jordan-Hoelder
  Tri verdict_ii = Tri::unknown;   // monoid free on simples
  Tri verdict_iii = Tri::unknown;  // K0 free on simple images
  bool agree = false;
  JhVerdict jh;
  FreeVerdict free;
  K0Result k;
  MonoidPresentation presentation;
};

inline ThmC thmC_crosscheck(const CategoryModel& m, const Bounds& b = {}) {
  ThmC t;
  t.jh = jh_and_length_verdict(m, b);
  t.presentation = monoid_presentation(m, b);
  t.free = monoid_free_on_simples(t.presentation, t.jh.simples, b);
  t.k = k0(t.presentation, t.jh.simples);
  t.verdict_i = tri_and(t.jh.jh, t.jh.length);
  t.verdict_ii = t.free.value;
  t.verdict_iii = tri(t.k.basis_flag);
  t.agree = t.verdict_i != Tri::unknown && t.verdict_i == t.verdict_ii && t.verdict_ii == t.verdict_iii;
  return t;
}

// Atoms and simples must match as classes when 0 is simple-like.
inline void check_atoms_match_simples(const MonoidPresentation& p, const std::vector<IndecIndex>& simple,
                                      const Bounds& b = {}) {
  std::vector<IndecIndex> at = atoms(p, b);
  std::vector<IndecIndex> s = simple;
  std::sort(s.begin(), s.end());
  std::sort(at.begin(), at.end());
  if (at != s) throw ConsistencyError("atoms of the monoid differ from the classes of the simple objects");
}

// A composition series of mid(xi) whose factors are those of sa and sc together,
// preferring one that passes through a_end.
inline Filtration merge_series(const Filtration& sa, const Filtration& sc, const Extriangle& xi,
                               const CategoryModel& m, const std::vector<IndecIndex>& simple) {
  if (xi.c_end.is_zero()) return sa;
  std::vector<unsigned> want(simple.size(), 0);
  auto count = [&](const Filtration& f) {
    for (IndecIndex x : f.factors) {
      auto it = std::find(simple.begin(), simple.end(), x);
      if (it == simple.end()) throw ConsistencyError("series factor is not simple");
      ++want[static_cast<std::size_t>(it - simple.begin())];
    }
  };
  count(sa);
  count(sc);
  FiltrationEngine eng(m, simple, series_pool(m, xi.mid));
  FiltrationList all = eng.enumerate(xi.mid, static_cast<unsigned>(sa.length() + sc.length()));
  std::optional<Filtration> any;
  for (auto& f : all.filtrations) {
    std::vector<unsigned> got(simple.size(), 0);
    for (IndecIndex x : f.factors) ++got[static_cast<std::size_t>(std::find(simple.begin(), simple.end(), x) - simple.begin())];
    if (got != want) continue;
    const std::size_t k = sa.length();
    if (k == 0 || (k <= f.steps.size() && f.steps[k - 1].mid == xi.a_end)) return f;
    if (!any) any = f;
  }
  if (any) return *any;
  throw ConsistencyError("no composition series of " + m.format(xi.mid) + " merges the given series");
}

}  // namespace extcat::groth
