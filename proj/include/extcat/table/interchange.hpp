#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "extcat/core.hpp"
#include "extcat/error.hpp"
#include "extcat/model.hpp"
#include "extcat/table/backend.hpp"

// Interchange document (UTF-8 JSON):
//
//   { "format": "extcat-model", "version": 1, "label": "...",
//     "mode": "general" | "exact", "field_characteristic": 2,
//     "indecomposables": [ {"name": "S1", "class": [1, 0]}, ... ],
//     "hom": [ {"src": "S1", "dst": "P1", "dim": 1}, ... ],
//     "ext": [ {"c": "S1", "a": "S2", "dim": 1}, ... ],
//     "extriangles": [ {"a": "S2", "b": "P1", "c": "S1", "ext_id": "e0",
//                       "annotations": {"left_exact_defect": {"S1": 1},
//                                       "deflation_defect": {},
//                                       "deflation_kills": "0",
//                                       "universal": true}} ],
//     "meta": {"notes": [...], "record_bound": 1} }
//
// "hom"/"ext" entries on decomposable objects ("S1+S2") are kept as direct
// values and checked against the additive extension by validation. Records
// list nonsplit extriangles; every nonsplit extriangle whose ends have at most
// record_bound summands must be listed.
namespace extcat::table {

using json = nlohmann::ordered_json;

enum class Mode { general, exact };

struct LoadOptions {
  std::optional<Mode> mode;  // overrides the document's mode
  bool validate = true;
  ValidationOptions validation{};
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(where + ": missing key '" + key + "'");
  return j.at(key);
}

inline std::string need_string(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_string()) throw SchemaError(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

inline unsigned need_uint(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_unsigned()) throw SchemaError(where + ": '" + key + "' must be a nonnegative integer");
  return v.get<unsigned>();
}

// Resolves names against the declared indecomposables.
struct NameTable {
  std::vector<std::string> names;
  std::map<std::string, IndecIndex> index;

  IndecIndex at(const std::string& nm, const std::string& where) const {
    auto it = index.find(nm);
    if (it == index.end()) throw SchemaError(where + ": unknown indecomposable '" + nm + "'");
    return it->second;
  }

  Obj parse(const std::string& text, const std::string& where) const {
    Obj out;
    std::string s;
    for (char ch : text)
      if (ch != ' ') s += ch;
    if (s.empty() || s == "0") return out;
    std::size_t pos = 0;
    int depth = 0;
    std::string term;
    auto flush = [&] {
      if (term.empty()) throw SchemaError(where + ": empty summand in '" + text + "'");
      unsigned mult = 1;
      auto star = term.find('*');
      if (star != std::string::npos) {
        try {
          mult = static_cast<unsigned>(std::stoul(term.substr(0, star)));
        } catch (const std::exception&) {
          throw SchemaError(where + ": bad multiplicity in '" + text + "'");
        }
        term = term.substr(star + 1);
      }
      out.add(at(term, where), mult);
      term.clear();
    };
    for (; pos < s.size(); ++pos) {
      char ch = s[pos];
      if (ch == '[') ++depth;
      if (ch == ']') --depth;
      if (ch == '+' && depth == 0) {
        flush();
      } else {
        term += ch;
      }
    }
    flush();
    return out;
  }

  Obj parse(const json& j, const std::string& where) const {
    if (!j.is_string()) throw SchemaError(where + ": object expressions are strings");
    return parse(j.get<std::string>(), where);
  }

  std::map<IndecIndex, unsigned> defect_map(const json& j, const std::string& where) const {
    if (!j.is_object()) throw SchemaError(where + ": defect maps are objects keyed by indecomposable");
    std::map<IndecIndex, unsigned> out;
    for (const auto& [k, v] : j.items()) {
      if (!v.is_number_unsigned()) throw SchemaError(where + ": defect values are nonnegative integers");
      out[at(k, where)] = v.get<unsigned>();
    }
    return out;
  }
};

}  // namespace detail

inline TableSource parse_source(const json& doc) {
  const std::string top = "document";
  if (!doc.is_object()) throw SchemaError("document must be a JSON object");
  if (detail::need_string(doc, "format", top) != "extcat-model") throw SchemaError("format must be \"extcat-model\"");
  if (detail::need_uint(doc, "version", top) != 1) throw SchemaError("unsupported version");

  TableSource src;
  src.label = doc.contains("label") && doc["label"].is_string() ? doc["label"].get<std::string>() : "";
  const std::string mode = doc.contains("mode") ? detail::need_string(doc, "mode", top) : "general";
  if (mode != "general" && mode != "exact") throw SchemaError("mode must be \"general\" or \"exact\"");
  src.exact = mode == "exact";
  if (doc.contains("field_characteristic")) src.p = detail::need_uint(doc, "field_characteristic", top);

  detail::NameTable names;
  const json& ind = detail::need(doc, "indecomposables", top);
  if (!ind.is_array()) throw SchemaError("indecomposables must be an array");
  bool any_class = false, all_class = true;
  std::vector<std::vector<long long>> classes;
  for (std::size_t i = 0; i < ind.size(); ++i) {
    const std::string where = "indecomposables[" + std::to_string(i) + "]";
    std::string nm = detail::need_string(ind[i], "name", where);
    if (nm.empty()) throw SchemaError(where + ": empty name");
    if (names.index.count(nm)) throw SchemaError(where + ": duplicate name " + nm);
    names.index[nm] = static_cast<IndecIndex>(i);
    names.names.push_back(nm);
    if (ind[i].contains("class")) {
      any_class = true;
      try {
        classes.push_back(ind[i]["class"].get<std::vector<long long>>());
      } catch (const json::exception&) {
        throw SchemaError(where + ": class must be an integer array");
      }
    } else {
      all_class = false;
      classes.emplace_back();
    }
  }
  if (any_class && !all_class) throw SchemaError("class vectors must be given for all indecomposables or none");
  if (any_class) src.classes = std::move(classes);
  src.names = names.names;

  auto read_dims = [&](const char* key, const char* k1, const char* k2, auto& table, auto& sums) {
    if (!doc.contains(key)) return;
    const json& arr = doc.at(key);
    if (!arr.is_array()) throw SchemaError(std::string(key) + " must be an array");
    for (std::size_t e = 0; e < arr.size(); ++e) {
      const std::string where = std::string(key) + "[" + std::to_string(e) + "]";
      Obj x = names.parse(detail::need(arr[e], k1, where), where);
      Obj y = names.parse(detail::need(arr[e], k2, where), where);
      unsigned d = detail::need_uint(arr[e], "dim", where);
      if (x.is_indecomposable() && y.is_indecomposable()) {
        if (!table.emplace(std::make_pair(x.sole(), y.sole()), d).second)
          throw SchemaError(where + ": duplicate entry");
      } else {
        sums.push_back({x, y, d});
      }
    }
  };
  read_dims("hom", "src", "dst", src.hom, src.hom_sums);
  read_dims("ext", "c", "a", src.ext, src.ext_sums);

  if (doc.contains("extriangles")) {
    const json& arr = doc.at("extriangles");
    if (!arr.is_array()) throw SchemaError("extriangles must be an array");
    for (std::size_t e = 0; e < arr.size(); ++e) {
      const std::string where = "extriangles[" + std::to_string(e) + "]";
      Record r;
      r.a = names.parse(detail::need(arr[e], "a", where), where);
      r.b = names.parse(detail::need(arr[e], "b", where), where);
      r.c = names.parse(detail::need(arr[e], "c", where), where);
      r.ext_id = arr[e].contains("ext_id") ? detail::need_string(arr[e], "ext_id", where) : "e" + std::to_string(e);
      if (arr[e].contains("annotations")) {
        const json& an = arr[e]["annotations"];
        if (!an.is_object()) throw SchemaError(where + ": annotations must be an object");
        if (an.contains("left_exact_defect"))
          r.ann.left_exact_defect = names.defect_map(an["left_exact_defect"], where);
        if (an.contains("deflation_defect")) r.ann.deflation_defect = names.defect_map(an["deflation_defect"], where);
        if (an.contains("deflation_kills")) r.ann.deflation_kills = names.parse(an["deflation_kills"], where);
        if (an.contains("universal")) {
          if (!an["universal"].is_boolean()) throw SchemaError(where + ": universal must be a boolean");
          r.ann.universal = an["universal"].get<bool>();
        }
      }
      src.records.push_back(std::move(r));
    }
  }

  if (doc.contains("meta")) {
    const json& meta = doc["meta"];
    if (meta.contains("notes")) {
      try {
        src.notes = meta["notes"].get<std::vector<std::string>>();
      } catch (const json::exception&) {
        throw SchemaError("meta.notes must be an array of strings");
      }
    }
    if (meta.contains("record_bound")) src.record_bound = detail::need_uint(meta, "record_bound", "meta");
  }
  return src;
}

inline CategoryModel load_model_text(const std::string& text, const LoadOptions& opt = {}) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = detail::line_column(text, e.byte);
    throw ParseError(e.what(), line, col);
  }
  TableSource src = parse_source(doc);
  if (opt.mode) src.exact = *opt.mode == Mode::exact;
  CategoryModel m = table_model(std::move(src));
  if (opt.validate) {
    ValidationReport rep = validate_model(m, opt.validation);
    if (!rep.ok()) {
      std::string msg = "model failed validation:";
      for (const auto& v : rep.violations) msg += "\n  " + v.kind + ": " + v.detail;
      throw ValidationError(msg);
    }
  }
  return m;
}

inline CategoryModel load_model(const std::string& path, const LoadOptions& opt = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_model_text(ss.str(), opt);
}

// Annotation block computed from the model's own oracle; absent keys mark
// answers the backend cannot give.
inline json annotations_of(const CategoryModel& m, const Extriangle& xi) {
  json an = json::object();
  auto defect_block = [&](bool left) -> std::optional<json> {
    json d = json::object();
    try {
      for (std::size_t i = 0; i < m.size(); ++i) {
        const Obj x = Obj::indec(static_cast<IndecIndex>(i));
        unsigned v = left ? m.left_exact_defect(x, xi) : m.deflation_defect(x, xi);
        if (v) d[m.name(static_cast<IndecIndex>(i))] = v;
      }
    } catch (const AnnotationMissing&) {
      return std::nullopt;
    }
    return d;
  };
  if (m.meta().exact_mode) return an;
  if (auto d = defect_block(true)) an["left_exact_defect"] = *d;
  if (auto d = defect_block(false)) an["deflation_defect"] = *d;
  if (xi.c_end.is_indecomposable()) {
    try {
      MinimalReduction r = m.right_minimal_reduce(xi.mid, xi.c_end.sole(), xi);
      an["deflation_kills"] = m.format(r.stripped);
    } catch (const AnnotationMissing&) {
    }
  }
  return an;
}

inline json to_json(const CategoryModel& m, unsigned record_bound = 1) {
  json doc;
  doc["format"] = "extcat-model";
  doc["version"] = 1;
  doc["label"] = m.meta().window_label;
  doc["mode"] = m.meta().exact_mode ? "exact" : "general";
  doc["field_characteristic"] = m.meta().field_characteristic;
  json ind = json::array();
  const bool classes = static_cast<bool>(m.class_vector(Obj{}));
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string& nm = m.name(static_cast<IndecIndex>(i));
    if (nm.empty()) throw SchemaError("indecomposable " + std::to_string(i) + " has no name");
    json e;
    e["name"] = nm;
    if (classes) e["class"] = *m.class_vector(Obj::indec(static_cast<IndecIndex>(i)));
    ind.push_back(e);
  }
  doc["indecomposables"] = ind;
  json hom = json::array(), ext = json::array();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) {
      const IndecIndex x = static_cast<IndecIndex>(i), y = static_cast<IndecIndex>(j);
      if (unsigned d = m.hom_dim(x, y)) hom.push_back({{"src", m.name(x)}, {"dst", m.name(y)}, {"dim", d}});
      if (unsigned d = m.ext_dim(x, y)) ext.push_back({{"c", m.name(x)}, {"a", m.name(y)}, {"dim", d}});
    }
  doc["hom"] = hom;
  doc["ext"] = ext;

  json recs = json::array();
  const std::vector<Obj> ends = enumerate_objects(m.size(), record_bound, record_bound);
  std::size_t counter = 0;
  for (const Obj& c : ends)
    for (const Obj& a : ends) {
      if (c.is_zero() || a.is_zero() || m.ext_dim(c, a) == 0) continue;
      for (const auto& xi : m.middle_terms(c, a)) {
        if (xi.is_split()) continue;
        json r;
        r["a"] = m.format(xi.a_end);
        r["b"] = m.format(xi.mid);
        r["c"] = m.format(xi.c_end);
        r["ext_id"] = "e" + std::to_string(counter++);
        json an = annotations_of(m, xi);
        if (a.total() == 1 && c.is_indecomposable() && m.ext_dim(c, a) == 1) an["universal"] = true;
        if (!an.empty()) r["annotations"] = an;
        recs.push_back(r);
      }
    }
  doc["extriangles"] = recs;
  json meta;
  meta["notes"] = m.meta().notes;
  meta["record_bound"] = record_bound;
  doc["meta"] = meta;
  return doc;
}

inline void save_model(const CategoryModel& m, const std::string& path, unsigned record_bound = 1) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json(m, record_bound).dump(2) << '\n';
}

// Names, hom/ext tables, class vectors, and the middle terms over every pair
// of objects with at most `bound` summands.
inline bool object_level_equal(const CategoryModel& x, const CategoryModel& y, unsigned bound = 1) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x.name(static_cast<IndecIndex>(i)) != y.name(static_cast<IndecIndex>(i))) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      const IndecIndex a = static_cast<IndecIndex>(i), b = static_cast<IndecIndex>(j);
      if (x.hom_dim(a, b) != y.hom_dim(a, b) || x.ext_dim(a, b) != y.ext_dim(a, b)) return false;
    }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Obj o = Obj::indec(static_cast<IndecIndex>(i));
    if (x.class_vector(o) != y.class_vector(o)) return false;
  }
  const std::vector<Obj> objs = enumerate_objects(x.size(), bound, bound);
  for (const Obj& c : objs)
    for (const Obj& a : objs) {
      ObjSet mx, my;
      for (const auto& xi : x.middle_terms(c, a)) mx.insert(xi.mid);
      for (const auto& xi : y.middle_terms(c, a)) my.insert(xi.mid);
      if (mx != my) return false;
    }
  return true;
}

}  // namespace extcat::table
