#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "extcat/derived/windows.hpp"
#include "extcat/model.hpp"
#include "extcat/strat.hpp"
#include "extcat/table/interchange.hpp"

namespace extcat::fixtures {

struct Fixture {
  std::string name;
  CategoryModel ambient;
  std::vector<std::string> phi;  // empty for plain models
  std::vector<std::string> q;    // the stated Q, "0" for a zero object
  std::vector<std::string> notes;

  bool has_system() const { return !phi.empty(); }
  std::vector<IndecIndex> phi_indices() const { return strat::parse_phi(ambient, phi); }
  std::vector<Obj> q_objects() const {
    std::vector<Obj> out;
    for (const auto& s : q) out.push_back(ambient.parse(s));
    return out;
  }
  strat::StratSystem stated_system() const { return {phi_indices(), q_objects(), std::nullopt}; }

  // F(Phi) as a model of its own when Phi is given; the ambient window otherwise.
  Submodel analysed() const {
    if (!has_system()) {
      std::vector<IndecIndex> all(ambient.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<IndecIndex>(i);
      return {ambient, IndexMap{all}};
    }
    return restrict_model(ambient, strat::filtered_closure(phi_indices(), ambient).indecs);
  }
};

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"ex5_1", "ex5_2", "ex5_3", "win4", "modA2", "modA4"};
  return n;
}

inline CategoryModel win4(unsigned p = 2) { return derived::fig1_window(p); }

// mod kA_2 over 1 -> 2 as an exact table: P1 = [1,2] is the only nonsplit
// extension of S1 by S2.
inline const char* modA2_text() {
  return R"({
  "format": "extcat-model",
  "version": 1,
  "label": "modA2",
  "mode": "exact",
  "field_characteristic": 2,
  "indecomposables": [
    {"name": "S1", "class": [1, 0]},
    {"name": "S2", "class": [0, 1]},
    {"name": "P1", "class": [1, 1]}
  ],
  "hom": [
    {"src": "S1", "dst": "S1", "dim": 1},
    {"src": "S2", "dst": "S2", "dim": 1},
    {"src": "P1", "dst": "P1", "dim": 1},
    {"src": "S2", "dst": "P1", "dim": 1},
    {"src": "P1", "dst": "S1", "dim": 1}
  ],
  "ext": [
    {"c": "S1", "a": "S2", "dim": 1}
  ],
  "extriangles": [
    {"a": "S2", "b": "P1", "c": "S1", "ext_id": "e0", "annotations": {"universal": true}}
  ],
  "meta": {"notes": ["module category of the linearly oriented A2 quiver"], "record_bound": 1}
}
)";
}

inline CategoryModel modA2() { return table::load_model_text(modA2_text()); }

inline CategoryModel modA4(unsigned p = 2) { return derived::build_window(4, 0, 0, "modA4", p); }

inline CategoryModel zero_model() { return CategoryModel(); }

inline Fixture load(const std::string& name, unsigned p = 2) {
  if (name == "ex5_1")
    return {name, win4(p), {"S2", "P3", "S3[1]"}, {"P2", "P3", "S3[1]"}, {}};
  if (name == "ex5_2")
    return {name,
            win4(p),
            {"P2[1]", "S2", "P3"},
            {"0", "P2", "P3"},
            {"the printed extriangle ending in Phi_3 is read as P2 -> 0 -> Phi_1, as the surrounding text requires"}};
  if (name == "ex5_3")
    return {name, win4(p), {"N[1]", "S2", "P3"}, {"S3[1]", "P2", "P3"}, {}};
  if (name == "win4") return {name, win4(p), {}, {}, {}};
  if (name == "modA2") return {name, modA2(), {}, {}, {}};
  if (name == "modA4") return {name, modA4(p), {}, {}, {}};
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

}  // namespace extcat::fixtures
