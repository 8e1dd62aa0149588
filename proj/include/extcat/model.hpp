#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "extcat/error.hpp"
#include "extcat/obj.hpp"

namespace extcat {

// Backend-specific morphism data behind an extriangle.
struct Realization {
  virtual ~Realization() = default;
};

struct Extriangle {
  Obj a_end;
  Obj mid;
  Obj c_end;
  std::string ext_id = "split";
  std::map<std::string, std::string> annotations;
  std::shared_ptr<const Realization> realization;

  bool is_split() const { return ext_id == "split"; }
};

// A hom or ext dimension stated directly on a pair of objects.
struct SumEntry {
  Obj x, y;
  unsigned dim = 0;
  bool ext = false;
};

struct MinimalReduction {
  Obj q;            // the reduced middle term
  Extriangle eta;   // (K', Q', target)
  Obj stripped;     // summands moved into the kernel end
};

class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::size_t size() const = 0;
  virtual std::string name(IndecIndex i) const = 0;
  virtual unsigned hom_dim(IndecIndex x, IndecIndex y) const = 0;
  // dim E(c, a)
  virtual unsigned ext_dim(IndecIndex c, IndecIndex a) const = 0;
  virtual bool exact_mode() const = 0;
  virtual unsigned field_characteristic() const = 0;

  virtual std::vector<Extriangle> middle_terms(const Obj& c, const Obj& a) const = 0;
  virtual Extriangle universal_extension(const Obj& c, IndecIndex a) const = 0;
  // The extriangle (0, X, X) with identity deflation.
  virtual Extriangle trivial_deflation(const Obj& x) const = 0;
  // Given (K, X, T), splices the universal extension of X by Phi_a onto the
  // deflation and returns (K', X', T).
  virtual Extriangle splice_universal(const Extriangle& xi, IndecIndex a) const = 0;
  virtual unsigned left_exact_defect(const Obj& q, const Extriangle& xi) const = 0;
  // dim ker(Hom(C, T) -> Hom(B, T)) along the deflation.
  virtual unsigned deflation_defect(const Obj& t, const Extriangle& xi) const = 0;
  virtual MinimalReduction right_minimal_reduce(const Obj& q, IndecIndex target,
                                                const Extriangle& xi) const = 0;
  virtual std::optional<unsigned> connecting_rank(const Obj&, const Extriangle&) const {
    return std::nullopt;
  }
  // An additive class conserved on extriangles, [B] = [A] + [C], if known.
  virtual std::optional<std::vector<long long>> class_vector(const Obj&) const { return std::nullopt; }
  // Hom dimension computed directly on a decomposable pair, bypassing the table.
  virtual std::optional<unsigned> direct_hom_dim(const Obj&, const Obj&) const { return std::nullopt; }
  virtual std::optional<unsigned> direct_ext_dim(const Obj&, const Obj&) const { return std::nullopt; }
  virtual std::vector<SumEntry> declared_sums() const { return {}; }
  virtual std::shared_ptr<const Backend> restrict_to(const std::vector<IndecIndex>& keep) const = 0;
  virtual std::shared_ptr<const Backend> opposite() const = 0;
  virtual std::vector<std::string> notes() const { return {}; }
};

// The zero category: no indecomposables, only the zero extriangle.
class ZeroBackend : public Backend, public std::enable_shared_from_this<ZeroBackend> {
 public:
  std::size_t size() const override { return 0; }
  std::string name(IndecIndex) const override { throw UnknownIndec("zero model has no objects"); }
  unsigned hom_dim(IndecIndex, IndecIndex) const override { return 0; }
  unsigned ext_dim(IndecIndex, IndecIndex) const override { return 0; }
  bool exact_mode() const override { return true; }
  unsigned field_characteristic() const override { return 2; }
  std::vector<Extriangle> middle_terms(const Obj&, const Obj&) const override { return {Extriangle{}}; }
  Extriangle universal_extension(const Obj&, IndecIndex) const override {
    throw NoExtension("zero model has no extensions");
  }
  Extriangle trivial_deflation(const Obj&) const override { return {}; }
  Extriangle splice_universal(const Extriangle&, IndecIndex) const override {
    throw NoExtension("zero model has no extensions");
  }
  unsigned left_exact_defect(const Obj&, const Extriangle&) const override { return 0; }
  unsigned deflation_defect(const Obj&, const Extriangle&) const override { return 0; }
  MinimalReduction right_minimal_reduce(const Obj& q, IndecIndex, const Extriangle& xi) const override {
    return {q, xi, {}};
  }
  std::optional<std::vector<long long>> class_vector(const Obj&) const override {
    return std::vector<long long>{};
  }
  std::shared_ptr<const Backend> restrict_to(const std::vector<IndecIndex>&) const override {
    return shared_from_this();
  }
  std::shared_ptr<const Backend> opposite() const override { return shared_from_this(); }
};

struct ModelMeta {
  bool exact_mode = false;
  unsigned field_characteristic = 2;
  std::string window_label;
  bool weakly_idempotent_complete = true;
  std::vector<std::string> notes;
};

struct EpiResult {
  bool epi = true;
  std::optional<IndecIndex> witness;  // T with Hom(C,T) -> Hom(B,T) not injective
};

class CategoryModel {
 public:
  CategoryModel() : CategoryModel(nullptr, {}) {}

  CategoryModel(std::shared_ptr<const Backend> backend, ModelMeta meta)
      : backend_(std::move(backend)), meta_(std::move(meta)), cache_(std::make_shared<Cache>()) {
    if (!backend_) {
      backend_ = empty_backend();
    }
    const std::size_t n = backend_->size();
    meta_.exact_mode = backend_->exact_mode();
    meta_.field_characteristic = backend_->field_characteristic();
    indecs_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      IndecIndex idx = static_cast<IndecIndex>(i);
      std::string nm = backend_->name(idx);
      if (nm.empty()) throw SchemaError("indecomposable " + std::to_string(i) + " has no name");
      if (by_name_.count(nm)) throw SchemaError("duplicate indecomposable name " + nm);
      by_name_[nm] = idx;
      indecs_.push_back({nm, idx});
    }
    hom_.assign(n * n, 0);
    ext_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        hom_[i * n + j] = backend_->hom_dim(static_cast<IndecIndex>(i), static_cast<IndecIndex>(j));
        ext_[i * n + j] = backend_->ext_dim(static_cast<IndecIndex>(i), static_cast<IndecIndex>(j));
      }
  }

  std::size_t size() const { return indecs_.size(); }
  const std::vector<IndecId>& indecs() const { return indecs_; }
  const IndecId& indec(IndecIndex i) const { return indecs_.at(i); }
  const std::string& name(IndecIndex i) const { return indecs_.at(i).name; }
  const ModelMeta& meta() const { return meta_; }
  const Backend& backend() const { return *backend_; }
  std::shared_ptr<const Backend> backend_ptr() const { return backend_; }

  std::optional<IndecIndex> find(std::string_view nm) const {
    auto it = by_name_.find(std::string(nm));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }
  IndecIndex index_of(std::string_view nm) const {
    auto i = find(nm);
    if (!i) throw UnknownIndec("unknown indecomposable '" + std::string(nm) + "'");
    return *i;
  }
  Obj obj(std::string_view nm) const { return Obj::indec(index_of(nm)); }

  unsigned hom_dim(IndecIndex x, IndecIndex y) const { return hom_[x * size() + y]; }
  unsigned ext_dim(IndecIndex c, IndecIndex a) const { return ext_[c * size() + a]; }
  unsigned hom_dim(const Obj& x, const Obj& y) const { return additive(hom_, x, y); }
  unsigned ext_dim(const Obj& c, const Obj& a) const { return additive(ext_, c, a); }

  const std::vector<Extriangle>& middle_terms(const Obj& c, const Obj& a) const {
    check_in_window(c);
    check_in_window(a);
    std::pair<Obj, Obj> key{c, a};
    {
      std::lock_guard<std::mutex> lock(cache_->mu);
      auto it = cache_->middle.find(key);
      if (it != cache_->middle.end()) return it->second;
    }
    std::vector<Extriangle> ets = backend_->middle_terms(c, a);
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->middle.emplace(std::move(key), std::move(ets)).first->second;
  }

  Extriangle universal_extension(const Obj& c, IndecIndex a) const {
    return backend_->universal_extension(c, a);
  }
  unsigned left_exact_defect(const Obj& q, const Extriangle& xi) const {
    if (q.is_zero() || xi.is_split() || xi.a_end.is_zero()) return 0;
    return backend_->left_exact_defect(q, xi);
  }
  unsigned deflation_defect(const Obj& t, const Extriangle& xi) const {
    if (t.is_zero() || xi.is_split() || xi.c_end.is_zero()) return 0;
    return backend_->deflation_defect(t, xi);
  }
  // Deflation of xi is epi against every indecomposable of the window (or the given set).
  EpiResult is_epi(const Extriangle& xi, const ObjSet* window = nullptr) const {
    std::vector<Obj> tests;
    if (window) {
      tests.assign(window->begin(), window->end());
    } else {
      for (std::size_t i = 0; i < size(); ++i) tests.push_back(Obj::indec(static_cast<IndecIndex>(i)));
    }
    for (const Obj& t : tests) {
      if (deflation_defect(t, xi) != 0) {
        EpiResult r{false, std::nullopt};
        if (t.is_indecomposable()) r.witness = t.sole();
        return r;
      }
    }
    return {};
  }
  MinimalReduction right_minimal_reduce(const Obj& q, IndecIndex target, const Extriangle& xi) const {
    return backend_->right_minimal_reduce(q, target, xi);
  }
  std::optional<std::vector<long long>> class_vector(const Obj& x) const {
    return backend_->class_vector(x);
  }

  std::string format(const Obj& x) const {
    if (x.is_zero()) return "0";
    std::string out;
    x.for_each([&](IndecIndex i, unsigned m) {
      if (!out.empty()) out += "+";
      if (m > 1) out += std::to_string(m) + "*";
      out += name(i);
    });
    return out;
  }
  std::string format(const Extriangle& xi) const {
    return "(" + format(xi.a_end) + ", " + format(xi.mid) + ", " + format(xi.c_end) + ")";
  }

  // Parses "0", "P3", "P3+S2", "2*P2+S3[1]".
  Obj parse(std::string_view text) const {
    Obj out;
    std::string s;
    for (char ch : text)
      if (ch != ' ' && ch != '\t') s += ch;
    if (s.empty() || s == "0") return out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      std::size_t plus = find_top_level_plus(s, pos);
      std::string term = s.substr(pos, plus - pos);
      if (term.empty()) throw UnknownIndec("empty summand in '" + s + "'");
      unsigned mult = 1;
      auto star = term.find('*');
      if (star != std::string::npos) {
        mult = static_cast<unsigned>(std::stoul(term.substr(0, star)));
        term = term.substr(star + 1);
      }
      if (term != "0") out.add(index_of(term), mult);
      if (plus == s.size()) break;
      pos = plus + 1;
    }
    return out;
  }

  bool in_window(const Obj& x) const { return x.support_bound() <= size(); }

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<Obj, Obj>& p) const {
      ObjHash h;
      return h(p.first) * 31 + h(p.second);
    }
  };
  struct Cache {
    std::mutex mu;
    std::unordered_map<std::pair<Obj, Obj>, std::vector<Extriangle>, PairHash> middle;
  };

  static std::size_t find_top_level_plus(const std::string& s, std::size_t from) {
    int depth = 0;
    for (std::size_t i = from; i < s.size(); ++i) {
      if (s[i] == '[') ++depth;
      if (s[i] == ']') --depth;
      if (s[i] == '+' && depth == 0) return i;
    }
    return s.size();
  }

  void check_in_window(const Obj& x) const {
    if (!in_window(x)) throw WindowOverflow("object outside the model window");
  }

  unsigned additive(const std::vector<unsigned>& table, const Obj& x, const Obj& y) const {
    unsigned total = 0;
    x.for_each([&](IndecIndex i, unsigned mi) {
      y.for_each([&](IndecIndex j, unsigned mj) { total += mi * mj * table[i * size() + j]; });
    });
    return total;
  }

  static std::shared_ptr<const Backend> empty_backend();

  std::shared_ptr<const Backend> backend_;
  ModelMeta meta_;
  std::vector<IndecId> indecs_;
  std::map<std::string, IndecIndex> by_name_;
  std::vector<unsigned> hom_;
  std::vector<unsigned> ext_;
  std::shared_ptr<Cache> cache_;
};

// Objects of a submodel expressed in the parent's indices and back.
struct IndexMap {
  std::vector<IndecIndex> to_parent;

  Obj lift(const Obj& x) const {
    Obj out;
    x.for_each([&](IndecIndex i, unsigned m) { out.add(to_parent.at(i), m); });
    return out;
  }
  std::optional<Obj> lower(const Obj& x) const {
    Obj out;
    bool ok = true;
    x.for_each([&](IndecIndex i, unsigned m) {
      auto it = std::find(to_parent.begin(), to_parent.end(), i);
      if (it == to_parent.end()) {
        ok = false;
        return;
      }
      out.add(static_cast<IndecIndex>(it - to_parent.begin()), m);
    });
    if (!ok) return std::nullopt;
    return out;
  }
};

struct Submodel {
  CategoryModel model;
  IndexMap map;
};

// Full subcategory on the listed indecomposables (kept in the given order).
inline Submodel restrict_model(const CategoryModel& m, std::vector<IndecIndex> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  ModelMeta meta = m.meta();
  auto sub = m.backend().restrict_to(keep);
  return {CategoryModel(sub, meta), IndexMap{std::move(keep)}};
}

inline std::shared_ptr<const Backend> CategoryModel::empty_backend() {
  return std::make_shared<ZeroBackend>();
}

}  // namespace extcat
