#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "extcat/error.hpp"
#include "extcat/model.hpp"
#include "extcat/opposite.hpp"

namespace extcat::table {

struct RecordAnnotations {
  std::optional<std::map<IndecIndex, unsigned>> left_exact_defect;  // by indecomposable Q
  std::optional<std::map<IndecIndex, unsigned>> deflation_defect;   // by indecomposable T
  std::optional<Obj> deflation_kills;  // summands of mid on which the deflation vanishes
  bool universal = false;
};

struct Record {
  Obj a, b, c;
  std::string ext_id;
  RecordAnnotations ann;
};

struct HomEntry {
  Obj src, dst;
  unsigned dim = 0;
};

struct TableSource {
  std::string label;
  bool exact = false;
  unsigned p = 2;
  std::vector<std::string> names;
  std::optional<std::vector<std::vector<long long>>> classes;  // per indecomposable
  std::map<std::pair<IndecIndex, IndecIndex>, unsigned> hom;
  std::map<std::pair<IndecIndex, IndecIndex>, unsigned> ext;  // (C, A) -> dim E(C, A)
  std::vector<HomEntry> hom_sums;  // entries given on decomposable objects
  std::vector<HomEntry> ext_sums;
  std::vector<Record> records;
  std::vector<std::string> notes;
  unsigned record_bound = 1;  // ends up to this total multiplicity are listed exhaustively
};

// A sum of listed records plus a split remainder (rest_a, rest_a + rest_c, rest_c).
struct TableRealization : Realization {
  std::vector<std::size_t> parts;
  Obj rest_a, rest_c;
};

class TableBackend : public Backend, public std::enable_shared_from_this<TableBackend> {
 public:
  explicit TableBackend(TableSource src) : s_(std::move(src)) {
    for (const auto& r : s_.records) {
      if (r.a.is_zero() && r.c.is_zero()) throw SchemaError("extriangle record with both ends zero");
      if (r.ext_id == "split") throw SchemaError("records list only nonsplit extriangles");
    }
  }

  const TableSource& source() const { return s_; }

  std::size_t size() const override { return s_.names.size(); }
  std::string name(IndecIndex i) const override { return s_.names.at(i); }
  unsigned hom_dim(IndecIndex x, IndecIndex y) const override { return lookup(s_.hom, x, y); }
  unsigned ext_dim(IndecIndex c, IndecIndex a) const override { return lookup(s_.ext, c, a); }
  bool exact_mode() const override { return s_.exact; }
  unsigned field_characteristic() const override { return s_.p; }
  std::vector<std::string> notes() const override { return s_.notes; }

  std::vector<Extriangle> middle_terms(const Obj& c, const Obj& a) const override {
    std::map<Obj, Extriangle> found;
    Extriangle split;
    split.a_end = a;
    split.mid = a + c;
    split.c_end = c;
    auto sr = std::make_shared<TableRealization>();
    sr->rest_a = a;
    sr->rest_c = c;
    split.realization = sr;
    found.emplace(split.mid, split);
    // Records are matched even when the ext table says 0, so inconsistent
    // files surface in validation.
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t, const Obj&, const Obj&)> rec = [&](std::size_t from, const Obj& ra,
                                                                       const Obj& rc) {
      if (!chosen.empty()) {
        Obj mid = ra + rc;
        for (std::size_t k : chosen) mid += s_.records[k].b;
        if (!found.count(mid)) {
          Extriangle xi;
          xi.a_end = a;
          xi.mid = mid;
          xi.c_end = c;
          xi.ext_id.clear();
          for (std::size_t k : chosen) xi.ext_id += (xi.ext_id.empty() ? "" : "+") + s_.records[k].ext_id;
          auto real = std::make_shared<TableRealization>();
          real->parts = chosen;
          real->rest_a = ra;
          real->rest_c = rc;
          xi.realization = real;
          found.emplace(mid, std::move(xi));
        }
      }
      for (std::size_t k = from; k < s_.records.size(); ++k) {
        const Record& r = s_.records[k];
        if (!ra.contains(r.a) || !rc.contains(r.c)) continue;
        chosen.push_back(k);
        rec(k, ra.minus(r.a), rc.minus(r.c));
        chosen.pop_back();
      }
    };
    rec(0, a, c);
    std::vector<Extriangle> out;
    for (auto& [mid, xi] : found) out.push_back(std::move(xi));
    return out;
  }

  Extriangle universal_extension(const Obj& c, IndecIndex a) const override {
    const unsigned l = ext_total(c, Obj::indec(a));
    if (l == 0) throw NoExtension("E(C, " + name(a) + ") = 0");
    const Obj al = Obj::indec(a, l);
    for (std::size_t k = 0; k < s_.records.size(); ++k) {
      const Record& r = s_.records[k];
      if (r.ann.universal && r.a == al && r.c == c) return from_record(k);
    }
    if (c.is_indecomposable() && l == 1) {
      std::vector<Extriangle> nonsplit;
      for (auto& xi : middle_terms(c, Obj::indec(a)))
        if (!xi.is_split()) nonsplit.push_back(std::move(xi));
      if (nonsplit.size() == 1) {
        nonsplit.front().ext_id = "universal:" + nonsplit.front().ext_id;
        return nonsplit.front();
      }
      throw AnnotationMissing("several extensions of " + name(c.sole()) + " by " + name(a) +
                              "; mark the universal record");
    }
    if (!c.is_indecomposable()) {
      // Direct sum of the universal extensions of the summands of C.
      Extriangle sum;
      sum.ext_id = "universal";
      auto real = std::make_shared<TableRealization>();
      c.for_each([&](IndecIndex j, unsigned m) {
        for (unsigned t = 0; t < m; ++t) {
          if (ext_dim(j, a) == 0) {
            real->rest_c.add(j);
            sum.mid.add(j);
            sum.c_end.add(j);
            continue;
          }
          Extriangle part = universal_extension(Obj::indec(j), a);
          auto pr = std::dynamic_pointer_cast<const TableRealization>(part.realization);
          real->parts.insert(real->parts.end(), pr->parts.begin(), pr->parts.end());
          real->rest_a += pr->rest_a;
          real->rest_c += pr->rest_c;
          sum.a_end += part.a_end;
          sum.mid += part.mid;
          sum.c_end += part.c_end;
        }
      });
      sum.realization = real;
      return sum;
    }
    throw AnnotationMissing("universal extension of " + name(c.sole()) + " by " + name(a) + " is not recorded");
  }

  Extriangle trivial_deflation(const Obj& x) const override {
    Extriangle xi;
    xi.mid = x;
    xi.c_end = x;
    auto real = std::make_shared<TableRealization>();
    real->rest_c = x;
    xi.realization = real;
    return xi;
  }

  Extriangle splice_universal(const Extriangle& xi, IndecIndex a) const override {
    if (!xi.a_end.is_zero())
      throw AnnotationMissing("table models cannot compose deflations; the construction needs more than one step");
    Extriangle u = universal_extension(xi.mid, a);
    return u;
  }

  unsigned left_exact_defect(const Obj& q, const Extriangle& xi) const override {
    if (s_.exact) return 0;
    unsigned total = 0;
    for (std::size_t k : parts(xi)) {
      const auto& ann = s_.records[k].ann.left_exact_defect;
      if (!ann) throw AnnotationMissing("record " + s_.records[k].ext_id + " has no left_exact_defect annotation");
      q.for_each([&](IndecIndex i, unsigned m) {
        auto it = ann->find(i);
        if (it != ann->end()) total += m * it->second;
      });
    }
    return total;
  }

  unsigned deflation_defect(const Obj& t, const Extriangle& xi) const override {
    if (s_.exact) return 0;
    unsigned total = 0;
    for (std::size_t k : parts(xi)) {
      const auto& ann = s_.records[k].ann.deflation_defect;
      if (!ann) throw AnnotationMissing("record " + s_.records[k].ext_id + " has no deflation_defect annotation");
      t.for_each([&](IndecIndex i, unsigned m) {
        auto it = ann->find(i);
        if (it != ann->end()) total += m * it->second;
      });
    }
    return total;
  }

  MinimalReduction right_minimal_reduce(const Obj& q, IndecIndex, const Extriangle& xi) const override {
    auto real = realization(xi);
    Obj stripped = real->rest_a;
    for (std::size_t k : real->parts) {
      const Record& r = s_.records[k];
      if (r.ann.deflation_kills) {
        stripped += *r.ann.deflation_kills;
      } else if (!r.a.is_indecomposable()) {
        throw AnnotationMissing("record " + r.ext_id + " needs a deflation_kills annotation");
      }
    }
    if (stripped.is_zero()) return {q, xi, {}};
    Extriangle out = xi;
    out.a_end = xi.a_end.minus(stripped);
    out.mid = xi.mid.minus(stripped);
    out.ext_id = out.mid.is_zero() ? "zero" : "reduced";
    return {out.mid, out, stripped};
  }

  std::optional<std::vector<long long>> class_vector(const Obj& x) const override {
    if (!s_.classes) return std::nullopt;
    std::size_t len = s_.classes->empty() ? 0 : s_.classes->front().size();
    std::vector<long long> v(len, 0);
    x.for_each([&](IndecIndex i, unsigned m) {
      const auto& ci = s_.classes->at(i);
      for (std::size_t t = 0; t < len && t < ci.size(); ++t) v[t] += ci[t] * m;
    });
    return v;
  }

  std::optional<unsigned> direct_hom_dim(const Obj& x, const Obj& y) const override {
    for (const auto& e : s_.hom_sums)
      if (e.src == x && e.dst == y) return e.dim;
    return std::nullopt;
  }
  std::optional<unsigned> direct_ext_dim(const Obj& c, const Obj& a) const override {
    for (const auto& e : s_.ext_sums)
      if (e.src == c && e.dst == a) return e.dim;
    return std::nullopt;
  }

  std::vector<SumEntry> declared_sums() const override {
    std::vector<SumEntry> out;
    for (const auto& e : s_.hom_sums) out.push_back({e.src, e.dst, e.dim, false});
    for (const auto& e : s_.ext_sums) out.push_back({e.src, e.dst, e.dim, true});
    return out;
  }

  std::shared_ptr<const Backend> restrict_to(const std::vector<IndecIndex>& keep) const override {
    std::map<IndecIndex, IndecIndex> re;
    TableSource sub;
    sub.label = s_.label;
    sub.exact = s_.exact;
    sub.p = s_.p;
    sub.notes = s_.notes;
    sub.record_bound = s_.record_bound;
    for (IndecIndex i : keep) {
      re[i] = static_cast<IndecIndex>(sub.names.size());
      sub.names.push_back(s_.names.at(i));
    }
    if (s_.classes) {
      sub.classes.emplace();
      for (IndecIndex i : keep) sub.classes->push_back(s_.classes->at(i));
    }
    auto map_obj = [&](const Obj& x) -> std::optional<Obj> {
      Obj out;
      bool ok = true;
      x.for_each([&](IndecIndex i, unsigned m) {
        auto it = re.find(i);
        if (it == re.end()) {
          ok = false;
        } else {
          out.add(it->second, m);
        }
      });
      if (!ok) return std::nullopt;
      return out;
    };
    for (const auto& [k, v] : s_.hom)
      if (re.count(k.first) && re.count(k.second)) sub.hom[{re[k.first], re[k.second]}] = v;
    for (const auto& [k, v] : s_.ext)
      if (re.count(k.first) && re.count(k.second)) sub.ext[{re[k.first], re[k.second]}] = v;
    for (const auto& r : s_.records) {
      auto a = map_obj(r.a), b = map_obj(r.b), c = map_obj(r.c);
      if (!a || !b || !c) continue;
      Record nr{*a, *b, *c, r.ext_id, {}};
      nr.ann.universal = r.ann.universal;
      auto remap = [&](const std::optional<std::map<IndecIndex, unsigned>>& m) {
        std::optional<std::map<IndecIndex, unsigned>> out;
        if (!m) return out;
        out.emplace();
        for (const auto& [i, d] : *m)
          if (re.count(i)) (*out)[re[i]] = d;
        return out;
      };
      nr.ann.left_exact_defect = remap(r.ann.left_exact_defect);
      nr.ann.deflation_defect = remap(r.ann.deflation_defect);
      if (r.ann.deflation_kills) nr.ann.deflation_kills = map_obj(*r.ann.deflation_kills);
      sub.records.push_back(std::move(nr));
    }
    return std::make_shared<TableBackend>(std::move(sub));
  }

  std::shared_ptr<const Backend> opposite() const override {
    return std::make_shared<OppositeBackend>(shared_from_this());
  }

 private:
  static unsigned lookup(const std::map<std::pair<IndecIndex, IndecIndex>, unsigned>& t, IndecIndex x,
                         IndecIndex y) {
    auto it = t.find({x, y});
    return it == t.end() ? 0 : it->second;
  }

  unsigned ext_total(const Obj& c, const Obj& a) const {
    unsigned total = 0;
    c.for_each([&](IndecIndex j, unsigned mj) {
      a.for_each([&](IndecIndex i, unsigned mi) { total += mj * mi * ext_dim(j, i); });
    });
    return total;
  }

  Extriangle from_record(std::size_t k) const {
    const Record& r = s_.records[k];
    Extriangle xi;
    xi.a_end = r.a;
    xi.mid = r.b;
    xi.c_end = r.c;
    xi.ext_id = r.ext_id;
    auto real = std::make_shared<TableRealization>();
    real->parts = {k};
    xi.realization = real;
    return xi;
  }

  std::shared_ptr<const TableRealization> realization(const Extriangle& xi) const {
    auto r = std::dynamic_pointer_cast<const TableRealization>(xi.realization);
    if (!r) throw AnnotationMissing("extriangle " + xi.ext_id + " was not produced by this table");
    return r;
  }

  std::vector<std::size_t> parts(const Extriangle& xi) const { return realization(xi)->parts; }

  TableSource s_;
};

inline CategoryModel table_model(TableSource src) {
  ModelMeta meta;
  meta.window_label = src.label;
  meta.notes = src.notes;
  return CategoryModel(std::make_shared<TableBackend>(std::move(src)), meta);
}

}  // namespace extcat::table
