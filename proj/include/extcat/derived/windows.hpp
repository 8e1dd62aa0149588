#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "extcat/derived/backend.hpp"
#include "extcat/derived/interval.hpp"
#include "extcat/model.hpp"

namespace extcat::derived {

inline CategoryModel model_of(std::shared_ptr<DerivedBackend> b, std::vector<std::string> notes = {}) {
  ModelMeta meta;
  meta.window_label = b->label();
  meta.notes = std::move(notes);
  return CategoryModel(std::move(b), meta);
}

inline std::vector<Interval> intervals_in_shifts(int n, int lo, int hi) {
  std::vector<Interval> w;
  for (int s = lo; s <= hi; ++s)
    for (int a = 1; a <= n; ++a)
      for (int b = a; b <= n; ++b) w.push_back({a, b, s});
  std::sort(w.begin(), w.end(), window_less);
  return w;
}

// All indecomposables [a,b][k] with lo <= k <= hi. A single shift is a copy of
// mod kA_n and is flagged as exact.
inline CategoryModel build_window(int n, int lo, int hi, std::string label, unsigned p = 2) {
  if (hi < lo) throw std::invalid_argument("empty shift range");
  if (label.empty()) label = "A" + std::to_string(n) + "[" + std::to_string(lo) + ".." + std::to_string(hi) + "]";
  auto b = std::make_shared<DerivedBackend>(n, intervals_in_shifts(n, lo, hi), p, lo == hi, label);
  return model_of(b);
}

// The 17-object segment of the AR quiver of D^b(kA_4) used as WIN4:
// all modules together with M[1] for the intervals M = [a,b] with b >= 3.
inline std::vector<Interval> fig1_intervals() {
  std::vector<Interval> w = intervals_in_shifts(4, 0, 0);
  for (const auto& iv : intervals_in_shifts(4, 1, 1))
    if (iv.b >= 3) w.push_back(iv);
  std::sort(w.begin(), w.end(), window_less);
  return w;
}

inline CategoryModel fig1_window(unsigned p = 2) {
  auto b = std::make_shared<DerivedBackend>(4, fig1_intervals(), p, false, "Fig1");
  return model_of(b, {"the figure prints I3 twice; the occurrence at row 3, column 5 is read as I2 = [1,2]"});
}

// Irreducible maps of D^b(kA_n) between window objects, as index pairs (from, to).
inline std::vector<std::pair<IndecIndex, IndecIndex>> ar_arrows(const DerivedBackend& b) {
  const int n = b.n();
  std::vector<std::pair<IndecIndex, IndecIndex>> out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Interval& x = b.interval(static_cast<IndecIndex>(i));
    std::vector<Interval> targets;
    if (x.a > 1) targets.push_back({x.a - 1, x.b, x.shift});
    if (x.b > x.a) targets.push_back({x.a, x.b - 1, x.shift});
    if (x.a == 1 && x.b < n) targets.push_back({x.b + 1, n, x.shift + 1});
    for (const auto& y : targets)
      if (auto j = b.find(y)) out.emplace_back(static_cast<IndecIndex>(i), *j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Mesh {
  IndecIndex start;  // tau C
  IndecIndex end;    // C
  Extriangle triangle;
};

// AR triangles tau C -> E -> C with both ends in the window, found by cone enumeration.
inline std::vector<Mesh> ar_meshes(const CategoryModel& m, const DerivedBackend& b) {
  std::vector<Mesh> out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const IndecIndex c = static_cast<IndecIndex>(i);
    auto t = b.find(tau(b.interval(c), b.n()));
    if (!t) continue;
    for (const auto& xi : m.middle_terms(Obj::indec(c), Obj::indec(*t)))
      if (!xi.is_split()) out.push_back({*t, c, xi});
  }
  return out;
}

}  // namespace extcat::derived
