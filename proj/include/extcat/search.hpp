#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "extcat/core.hpp"
#include "extcat/model.hpp"

namespace extcat {

// Steps (M_{i-1}, M_i, X_i) from M_0 = 0 up to the target; factors are the X_i.
struct Filtration {
  std::vector<Extriangle> steps;
  std::vector<IndecIndex> factors;

  std::size_t length() const { return factors.size(); }
  Obj target() const { return steps.empty() ? Obj{} : steps.back().mid; }
};

struct FiltrationList {
  std::vector<Filtration> filtrations;
  bool truncated = false;
};

// Factor-count vectors (indexed like the factor list) of all filtrations up to
// the length cap.
struct FiltrationProfiles {
  std::set<std::vector<unsigned>> counts;
  bool truncated = false;

  std::set<unsigned> lengths() const {
    std::set<unsigned> out;
    for (const auto& c : counts) {
      unsigned t = 0;
      for (unsigned x : c) t += x;
      out.insert(t);
    }
    return out;
  }
};

// Backward search for filtrations with factors drawn from a fixed list of
// indecomposables. Predecessors range over a bounded object pool and are
// pruned by the conserved class when the model has one.
class FiltrationEngine {
 public:
  struct Pred {
    Obj from;
    std::size_t factor;  // position in the factor list
    Extriangle step;
  };

  FiltrationEngine(const CategoryModel& m, std::vector<IndecIndex> factors, ObjectPool pool)
      : m_(m), factors_(std::move(factors)), pool_(std::move(pool)) {}

  const CategoryModel& model() const { return m_; }
  const std::vector<IndecIndex>& factors() const { return factors_; }
  const ObjectPool& pool() const { return pool_; }

  const std::vector<Pred>& predecessors(const Obj& x) {
    auto it = preds_.find(x);
    if (it != preds_.end()) return it->second;
    std::vector<Pred> out;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      const Obj xf = Obj::indec(factors_[f]);
      for (const Obj& y : pool_.with_class(class_difference(m_, x, xf))) {
        for (const auto& xi : m_.middle_terms(xf, y))
          if (xi.mid == x) {
            out.push_back({y, f, xi});
            break;
          }
      }
    }
    return preds_.emplace(x, std::move(out)).first->second;
  }

  FiltrationProfiles profiles(const Obj& x, unsigned cap) {
    FiltrationProfiles out;
    out.counts = profile_rec(x, cap, out.truncated);
    return out;
  }

  // Explicit filtrations, canonically ordered; stops collecting at max_results.
  FiltrationList enumerate(const Obj& x, unsigned cap, std::size_t max_results = 100000) {
    FiltrationList out;
    std::vector<Pred> path;
    enumerate_rec(x, cap, path, out, max_results);
    std::sort(out.filtrations.begin(), out.filtrations.end(), [](const Filtration& a, const Filtration& b) {
      if (a.length() != b.length()) return a.length() < b.length();
      if (a.factors != b.factors) return a.factors < b.factors;
      for (std::size_t i = 0; i < a.steps.size(); ++i)
        if (!(a.steps[i].mid == b.steps[i].mid)) return a.steps[i].mid < b.steps[i].mid;
      return false;
    });
    return out;
  }

  // One filtration with the prescribed factor sequence X_1, ..., X_t, if any.
  std::optional<Filtration> find_with_factors(const Obj& x, const std::vector<std::size_t>& seq) {
    std::vector<Pred> path;
    if (find_rec(x, seq, seq.size(), path)) return build(path);
    return std::nullopt;
  }

 private:
  std::set<std::vector<unsigned>> profile_rec(const Obj& x, unsigned cap, bool& truncated) {
    auto key = std::make_pair(x, cap);
    if (auto it = memo_.find(key); it != memo_.end()) {
      if (it->second.second) truncated = true;
      return it->second.first;
    }
    std::set<std::vector<unsigned>> out;
    bool trunc = false;
    if (x.is_zero()) out.insert(std::vector<unsigned>(factors_.size(), 0));
    const auto& preds = predecessors(x);
    if (cap == 0) {
      if (!preds.empty()) trunc = true;
    } else {
      for (const Pred& p : preds) {
        for (auto v : profile_rec(p.from, cap - 1, trunc)) {
          ++v[p.factor];
          out.insert(std::move(v));
        }
      }
    }
    if (trunc) truncated = true;
    memo_.emplace(key, std::make_pair(out, trunc));
    return out;
  }

  Filtration build(const std::vector<Pred>& path) const {
    Filtration f;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      f.steps.push_back(it->step);
      f.factors.push_back(factors_[it->factor]);
    }
    return f;
  }

  void enumerate_rec(const Obj& x, unsigned cap, std::vector<Pred>& path, FiltrationList& out,
                     std::size_t max_results) {
    if (out.filtrations.size() >= max_results) {
      out.truncated = true;
      return;
    }
    if (x.is_zero()) out.filtrations.push_back(build(path));
    const auto& preds = predecessors(x);
    if (cap == 0) {
      if (!preds.empty()) out.truncated = true;
      return;
    }
    for (const Pred& p : preds) {
      path.push_back(p);
      enumerate_rec(p.from, cap - 1, path, out, max_results);
      path.pop_back();
    }
  }

  bool find_rec(const Obj& x, const std::vector<std::size_t>& seq, std::size_t left, std::vector<Pred>& path) {
    if (left == 0) return x.is_zero();
    for (const Pred& p : predecessors(x)) {
      if (p.factor != seq[left - 1]) continue;
      path.push_back(p);
      if (find_rec(p.from, seq, left - 1, path)) return true;
      path.pop_back();
    }
    return false;
  }

  CategoryModel m_;
  std::vector<IndecIndex> factors_;
  ObjectPool pool_;
  std::map<Obj, std::vector<Pred>> preds_;
  std::map<std::pair<Obj, unsigned>, std::pair<std::set<std::vector<unsigned>>, bool>> memo_;
};

}  // namespace extcat
