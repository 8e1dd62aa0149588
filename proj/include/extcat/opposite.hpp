#pragma once

#include <memory>
#include <utility>

#include "extcat/model.hpp"

namespace extcat {

// (A^op, E^op, s^op): hom transposed, every extriangle (A, B, C) read as (C, B, A).
// Inflation and deflation defects trade places; operations that need a
// construction in the original category are not available here.
class OppositeBackend : public Backend {
 public:
  explicit OppositeBackend(std::shared_ptr<const Backend> base) : base_(std::move(base)) {}

  static Extriangle flip(Extriangle xi) {
    std::swap(xi.a_end, xi.c_end);
    if (xi.annotations.count("opposite")) {
      xi.annotations.erase("opposite");
    } else {
      xi.annotations["opposite"] = "true";
    }
    return xi;
  }

  std::size_t size() const override { return base_->size(); }
  std::string name(IndecIndex i) const override { return base_->name(i); }
  unsigned hom_dim(IndecIndex x, IndecIndex y) const override { return base_->hom_dim(y, x); }
  unsigned ext_dim(IndecIndex c, IndecIndex a) const override { return base_->ext_dim(a, c); }
  bool exact_mode() const override { return base_->exact_mode(); }
  unsigned field_characteristic() const override { return base_->field_characteristic(); }

  std::vector<Extriangle> middle_terms(const Obj& c, const Obj& a) const override {
    std::vector<Extriangle> out;
    for (auto& xi : base_->middle_terms(a, c)) out.push_back(flip(std::move(xi)));
    return out;
  }
  Extriangle universal_extension(const Obj&, IndecIndex) const override { throw unavailable("universal_extension"); }
  Extriangle trivial_deflation(const Obj& x) const override {
    auto ets = base_->middle_terms(Obj{}, x);
    return flip(ets.front());
  }
  Extriangle splice_universal(const Extriangle&, IndecIndex) const override {
    throw unavailable("splice_universal");
  }
  unsigned left_exact_defect(const Obj& q, const Extriangle& xi) const override {
    return base_->deflation_defect(q, flip(xi));
  }
  unsigned deflation_defect(const Obj& t, const Extriangle& xi) const override {
    return base_->left_exact_defect(t, flip(xi));
  }
  MinimalReduction right_minimal_reduce(const Obj&, IndecIndex, const Extriangle&) const override {
    throw unavailable("right_minimal_reduce");
  }
  std::optional<std::vector<long long>> class_vector(const Obj& x) const override { return base_->class_vector(x); }
  std::optional<unsigned> direct_hom_dim(const Obj& x, const Obj& y) const override {
    return base_->direct_hom_dim(y, x);
  }
  std::optional<unsigned> direct_ext_dim(const Obj& c, const Obj& a) const override {
    return base_->direct_ext_dim(a, c);
  }
  std::vector<SumEntry> declared_sums() const override {
    auto v = base_->declared_sums();
    for (auto& e : v) std::swap(e.x, e.y);
    return v;
  }
  std::shared_ptr<const Backend> restrict_to(const std::vector<IndecIndex>& keep) const override {
    return std::make_shared<OppositeBackend>(base_->restrict_to(keep));
  }
  std::shared_ptr<const Backend> opposite() const override { return base_; }
  std::vector<std::string> notes() const override {
    auto n = base_->notes();
    n.push_back("opposite model: construction operations are unavailable");
    return n;
  }

 private:
  static AnnotationMissing unavailable(const std::string& op) {
    return AnnotationMissing(op + " is not available on an opposite model");
  }
  std::shared_ptr<const Backend> base_;
};

inline CategoryModel opposite(const CategoryModel& m) {
  ModelMeta meta = m.meta();
  std::string& l = meta.window_label;
  l = l.ends_with("^op") ? l.substr(0, l.size() - 3) : l + "^op";
  return CategoryModel(m.backend().opposite(), meta);
}

}  // namespace extcat
