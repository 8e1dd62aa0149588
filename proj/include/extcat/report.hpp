#pragma once

#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "extcat/derived/windows.hpp"
#include "extcat/grothendieck.hpp"
#include "extcat/model.hpp"
#include "extcat/strat.hpp"

namespace extcat::report {

using json = nlohmann::ordered_json;

inline json names_of(const CategoryModel& m, const std::vector<IndecIndex>& v) {
  json a = json::array();
  for (IndecIndex i : v) a.push_back(m.name(i));
  return a;
}

inline json objs_of(const CategoryModel& m, const std::vector<Obj>& v) {
  json a = json::array();
  for (const Obj& x : v) a.push_back(m.format(x));
  return a;
}

inline json bools(const std::vector<bool>& v) {
  json a = json::array();
  for (bool b : v) a.push_back(b);
  return a;
}

inline json tri(groth::Tri t) {
  if (t == groth::Tri::unknown) return "unknown";
  return t == groth::Tri::yes;
}

inline std::string big(const BigInt& x) { return x.str(); }

inline json stratifying(const strat::StratVerdict& v) {
  json j;
  j["pass"] = v.pass;
  if (!v.pass) {
    j["axiom"] = v.axiom;
    j["pair"] = {v.j, v.i};
    j["detail"] = v.detail;
  }
  return j;
}

inline json matrix(const std::vector<std::vector<long long>>& d) {
  json a = json::array();
  for (const auto& r : d) a.push_back(r);
  return a;
}

inline json jh(const CategoryModel& m, const groth::JhVerdict& v) {
  json j;
  j["zero_simple_like"] = v.zero.value;
  if (v.zero.witness) j["zero_middle_witness"] = m.format(*v.zero.witness);
  j["simples"] = names_of(m, v.simples);
  j["jh"] = tri(v.jh);
  j["length"] = tri(v.length);
  if (v.jh_counterexample) j["jh_counterexample"] = m.format(*v.jh_counterexample);
  if (v.length_counterexample) j["length_counterexample"] = m.format(*v.length_counterexample);
  j["objects_checked"] = v.objects_checked;
  return j;
}

inline json vec_obj(const groth::MonoidPresentation& p, const groth::Vec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i]) continue;
    if (!s.empty()) s += "+";
    if (v[i] > 1) s += std::to_string(v[i]) + "*";
    s += p.generators[i];
  }
  return s.empty() ? "0" : s;
}

inline json relations(const groth::MonoidPresentation& p) {
  json a = json::array();
  for (const auto& r : p.relations) {
    json e;
    e["lhs"] = vec_obj(p, r.lhs);
    e["rhs"] = vec_obj(p, r.rhs);
    e["extriangle"] = r.source;
    a.push_back(e);
  }
  return a;
}

inline json k0(const groth::K0Result& k) {
  json j;
  j["rank"] = k.free_rank;
  json inv = json::array();
  for (const auto& d : k.invariant_factors) inv.push_back(big(d));
  j["invariant_factors"] = inv;
  json imgs = json::array();
  for (const auto& row : k.simple_images) {
    json r = json::array();
    for (const auto& x : row) r.push_back(big(x));
    imgs.push_back(r);
  }
  j["simple_images"] = imgs;
  j["basis_flag"] = k.basis_flag;
  return j;
}

inline json equality(const groth::MonoidPresentation& p, const groth::EqualityResult& r) {
  json j;
  j["verdict"] = groth::to_string(r.verdict);
  json chain = json::array();
  for (const auto& step : r.chain) {
    const auto& rel = p.relations[step.relation];
    json s;
    s["relation"] = rel.source;
    s["direction"] = step.forward ? "middle to ends" : "ends to middle";
    s["result"] = vec_obj(p, step.result);
    chain.push_back(s);
  }
  j["chain"] = chain;
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

inline json thmC(const CategoryModel& m, const groth::ThmC& t, const groth::Bounds& b) {
  json j;
  j["model"] = m.meta().window_label;
  j["simples"] = names_of(m, t.jh.simples);
  j["zero_simple_like"] = t.jh.zero.value;
  if (t.jh.zero.witness) j["zero_middle_witness"] = m.format(*t.jh.zero.witness);
  j["jh"] = tri(t.jh.jh);
  j["length"] = tri(t.jh.length);
  json mon;
  mon["relations"] = relations(t.presentation);
  groth::Reducedness red = groth::is_reduced(t.presentation, b);
  mon["reduced"] = tri(red.value);
  if (red.witness) mon["reduced_witness"] = vec_obj(t.presentation, *red.witness);
  json at = json::array();
  for (IndecIndex a : groth::atoms(t.presentation, b)) at.push_back(t.presentation.generators[a]);
  mon["atoms"] = at;
  mon["free"] = tri(t.free.value);
  mon["free_reason"] = t.free.reason;
  j["monoid"] = mon;
  j["k0"] = k0(t.k);
  j["verdicts"] = {tri(t.verdict_i), tri(t.verdict_ii), tri(t.verdict_iii)};
  j["agree"] = t.agree;
  return j;
}

// DOT rendering in canonical index order; derived windows are laid out on the
// AR grid and drawn with their irreducible maps.
inline std::string dot(const CategoryModel& m, const std::set<IndecIndex>& highlight = {}) {
  std::ostringstream os;
  os << "digraph \"" << (m.meta().window_label.empty() ? "model" : m.meta().window_label) << "\" {\n";
  os << "  node [shape=plaintext];\n";
  auto derived = std::dynamic_pointer_cast<const derived::DerivedBackend>(m.backend_ptr());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const IndecIndex x = static_cast<IndecIndex>(i);
    os << "  n" << i << " [label=\"" << m.name(x) << "\"";
    if (derived) {
      const auto& iv = derived->interval(x);
      os << ", pos=\"" << derived::ar_column(iv, derived->n()) << "," << -derived::ar_row(iv, derived->n()) << "!\"";
    }
    if (highlight.count(x)) os << ", style=filled, fillcolor=gray80, shape=box";
    os << "];\n";
  }
  if (derived) {
    for (const auto& [a, b] : derived::ar_arrows(*derived)) os << "  n" << a << " -> n" << b << ";\n";
  } else {
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        if (i != j && m.hom_dim(static_cast<IndecIndex>(i), static_cast<IndecIndex>(j)) != 0)
          os << "  n" << i << " -> n" << j << " [style=dashed];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace extcat::report
