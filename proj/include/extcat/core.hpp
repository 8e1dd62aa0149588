#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "extcat/model.hpp"
#include "extcat/obj.hpp"
#include "extcat/opposite.hpp"

namespace extcat {

// { mid | there is an extriangle (x, mid, y) with x in X, y in Y }.
inline ObjSet star(const ObjSet& xs, const ObjSet& ys, const CategoryModel& m) {
  ObjSet out;
  for (const Obj& x : xs)
    for (const Obj& y : ys)
      for (const auto& xi : m.middle_terms(y, x)) out.insert(xi.mid);
  return out;
}

// Bounded universe of objects, indexed by the conserved class when one exists.
class ObjectPool {
 public:
  ObjectPool(const CategoryModel& m, unsigned max_mult, unsigned max_total)
      : ObjectPool(m, all_indices(m.size()), max_mult, max_total) {}

  // Objects supported on the given indecomposables only.
  ObjectPool(const CategoryModel& m, std::vector<IndecIndex> support, unsigned max_mult, unsigned max_total)
      : support_(std::move(support)), max_mult_(max_mult), max_total_(max_total) {
    std::sort(support_.begin(), support_.end());
    for (const Obj& local : enumerate_objects(support_.size(), max_mult, max_total)) {
      Obj x;
      local.for_each([&](IndecIndex i, unsigned k) { x.add(support_[i], k); });
      objs_.push_back(x);
    }
    std::sort(objs_.begin(), objs_.end());
    has_classes_ = static_cast<bool>(m.class_vector(Obj{}));
    if (has_classes_)
      for (const Obj& x : objs_) by_class_[*m.class_vector(x)].push_back(x);
  }

  const std::vector<IndecIndex>& support() const { return support_; }

  const std::vector<Obj>& all() const { return objs_; }
  bool has_classes() const { return has_classes_; }
  unsigned max_mult() const { return max_mult_; }
  unsigned max_total() const { return max_total_; }

  bool contains(const Obj& x) const {
    if (x.total() > max_total_) return false;
    bool ok = true;
    x.for_each([&](IndecIndex i, unsigned v) {
      if (v > max_mult_ || !std::binary_search(support_.begin(), support_.end(), i)) ok = false;
    });
    return ok;
  }

  // Candidates with the given class; every object when no class is known.
  const std::vector<Obj>& with_class(const std::optional<std::vector<long long>>& cls) const {
    static const std::vector<Obj> none;
    if (!has_classes_ || !cls) return objs_;
    auto it = by_class_.find(*cls);
    return it == by_class_.end() ? none : it->second;
  }

 private:
  static std::vector<IndecIndex> all_indices(std::size_t n) {
    std::vector<IndecIndex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<IndecIndex>(i);
    return v;
  }
  std::vector<IndecIndex> support_;
  std::vector<Obj> objs_;
  unsigned max_mult_;
  unsigned max_total_;
  bool has_classes_ = false;
  std::map<std::vector<long long>, std::vector<Obj>> by_class_;
};

inline std::optional<std::vector<long long>> class_difference(const CategoryModel& m, const Obj& x, const Obj& y) {
  auto cx = m.class_vector(x), cy = m.class_vector(y);
  if (!cx || !cy) return std::nullopt;
  for (std::size_t i = 0; i < cx->size(); ++i) (*cx)[i] -= (*cy)[i];
  return cx;
}

inline std::vector<Obj> indec_objects(const CategoryModel& m) {
  std::vector<Obj> out;
  for (std::size_t i = 0; i < m.size(); ++i) out.push_back(Obj::indec(static_cast<IndecIndex>(i)));
  return out;
}

// Nonsplit extriangles whose ends are indecomposable, in canonical order.
inline std::vector<Extriangle> indecomposable_extriangles(const CategoryModel& m) {
  std::vector<Extriangle> out;
  for (std::size_t c = 0; c < m.size(); ++c)
    for (std::size_t a = 0; a < m.size(); ++a) {
      if (m.ext_dim(static_cast<IndecIndex>(c), static_cast<IndecIndex>(a)) == 0) continue;
      for (const auto& xi : m.middle_terms(Obj::indec(static_cast<IndecIndex>(c)), Obj::indec(static_cast<IndecIndex>(a))))
        if (!xi.is_split()) out.push_back(xi);
    }
  return out;
}

struct Violation {
  std::string kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> skipped;  // checks not run because an enumeration cap was hit
  bool ok() const { return violations.empty(); }
};

struct ValidationOptions {
  unsigned pair_total = 1;   // ends of split/zero-ext checks range over objects of this total size
  bool sum_closure = true;
  bool morphism_checks = true;  // exact-mode defect checks when the backend can answer them
};

inline ValidationReport validate_model(const CategoryModel& m, ValidationOptions opt = {}) {
  ValidationReport rep;
  auto add = [&](std::string kind, std::string detail) { rep.violations.push_back({std::move(kind), std::move(detail)}); };
  const std::size_t n = m.size();
  auto fmt = [&](const Obj& x) { return m.format(x); };

  // (b) tables: nonzero endomorphisms, and direct sums agree with the additive extension.
  for (std::size_t i = 0; i < n; ++i)
    if (m.hom_dim(static_cast<IndecIndex>(i), static_cast<IndecIndex>(i)) == 0)
      add("additivity", "hom_dim(" + m.name(static_cast<IndecIndex>(i)) + ", itself) = 0");
  std::vector<Obj> ind = indec_objects(m);
  for (const Obj& x : ind)
    for (const Obj& y : ind) {
      const Obj xx = x + x;
      if (auto d = m.backend().direct_hom_dim(xx, y); d && *d != 2 * m.hom_dim(x, y))
        add("additivity", "hom_dim(" + fmt(xx) + ", " + fmt(y) + ") = " + std::to_string(*d));
      if (auto d = m.backend().direct_ext_dim(xx, y); d && *d != 2 * m.ext_dim(x, y))
        add("additivity", "ext_dim(" + fmt(xx) + ", " + fmt(y) + ") = " + std::to_string(*d));
    }
  // Entries stated directly on decomposable objects.
  for (const auto& e : m.backend().declared_sums()) {
    const unsigned additive = e.ext ? m.ext_dim(e.x, e.y) : m.hom_dim(e.x, e.y);
    if (e.dim != additive)
      add("additivity", std::string(e.ext ? "ext_dim(" : "hom_dim(") + fmt(e.x) + ", " + fmt(e.y) + ") = " +
                            std::to_string(e.dim) + " but the indecomposable table gives " + std::to_string(additive));
  }

  // (a), (d): split presence, and ext 0 forces the split entry only.
  std::vector<Obj> small = enumerate_objects(n, opt.pair_total, opt.pair_total);
  for (const Obj& c : small)
    for (const Obj& a : small) {
      const auto& ets = m.middle_terms(c, a);
      bool has_split = false;
      for (const auto& xi : ets) {
        if (xi.is_split() && xi.mid == a + c) has_split = true;
        if (!(xi.a_end == a) || !(xi.c_end == c)) add("split-presence", "middle_terms returned mismatched ends");
        if (auto cd = class_difference(m, xi.mid, xi.a_end); cd && cd != m.class_vector(xi.c_end))
          add("conservation", "class of " + fmt(xi.mid) + " differs from the sum of its ends");
      }
      if (!has_split) add("split-presence", "no split entry for (" + fmt(c) + ", " + fmt(a) + ")");
      if (m.ext_dim(c, a) == 0 && ets.size() != 1)
        add("zero-ext", "E(" + fmt(c) + ", " + fmt(a) + ") = 0 but nonsplit extriangles are listed");
      if ((c.is_zero() || a.is_zero()) && ets.size() != 1)
        add("zero-end", "E with a zero argument has nonsplit entries at (" + fmt(c) + ", " + fmt(a) + ")");
    }

  std::vector<Extriangle> basic = indecomposable_extriangles(m);

  // (c) sums of extriangles are extriangles.
  if (opt.sum_closure) {
    for (std::size_t i = 0; i < basic.size(); ++i)
      for (std::size_t j = i; j < basic.size(); ++j) {
        const auto& x = basic[i];
        const auto& y = basic[j];
        const Obj mid = x.mid + y.mid;
        bool found = false;
        try {
          for (const auto& xi : m.middle_terms(x.c_end + y.c_end, x.a_end + y.a_end))
            if (xi.mid == mid) found = true;
        } catch (const EnumerationCapExceeded& e) {
          rep.skipped.push_back("sum of " + m.format(x) + " and " + m.format(y) + ": " + e.what());
          continue;
        }
        if (!found) add("sum-closure", "sum of " + m.format(x) + " and " + m.format(y) + " is not derivable");
      }
  }

  // (e) zero-middled extriangles (A, 0, C).
  for (const auto& xi : basic) {
    if (!xi.mid.is_zero()) continue;
    if (m.meta().exact_mode) add("exact-mode", "zero-middled extriangle " + m.format(xi) + " in an exact model");
    for (const Obj& x : ind) {
      bool found = false;
      for (const auto& e : m.middle_terms(xi.c_end, xi.a_end + x))
        if (e.mid == x) found = true;
      if (!found)
        add("zero-middle", "(" + fmt(xi.a_end + x) + ", " + fmt(x) + ", " + fmt(xi.c_end) + ") is not derivable from " +
                               m.format(xi));
    }
  }

  // Exact mode: inflations monic, deflations epic.
  if (m.meta().exact_mode) {
    for (const auto& xi : basic) {
      if (auto ca = m.class_vector(xi.a_end), cb = m.class_vector(xi.mid); ca && cb) {
        for (std::size_t t = 0; t < ca->size(); ++t)
          if ((*cb)[t] < (*ca)[t]) add("exact-mode", "middle term smaller than the inflation source in " + m.format(xi));
      }
      if (!opt.morphism_checks) continue;
      try {
        for (const Obj& q : ind)
          if (m.backend().left_exact_defect(q, xi) != 0)
            add("exact-mode", "nonzero left-exact defect on " + m.format(xi));
        for (const Obj& t : ind)
          if (m.backend().deflation_defect(t, xi) != 0) add("exact-mode", "deflation not epi in " + m.format(xi));
      } catch (const AnnotationMissing&) {
      }
    }
  }
  return rep;
}

}  // namespace extcat
