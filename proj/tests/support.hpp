#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "extcat/extcat.hpp"

namespace testsupport {

using namespace extcat;

inline std::set<std::string> names(const CategoryModel& m, const std::vector<IndecIndex>& v) {
  std::set<std::string> out;
  for (IndecIndex i : v) out.insert(m.name(i));
  return out;
}

inline std::vector<std::string> formatted(const CategoryModel& m, const std::vector<Obj>& v) {
  std::vector<std::string> out;
  for (const Obj& x : v) out.push_back(m.format(x));
  return out;
}

// The nonsplit extriangle (a, mid, c), if the backend lists one.
inline std::optional<Extriangle> find_extriangle(const CategoryModel& m, const std::string& a, const std::string& mid,
                                                 const std::string& c) {
  const Obj oa = m.parse(a), ob = m.parse(mid), oc = m.parse(c);
  for (const auto& xi : m.middle_terms(oc, oa))
    if (xi.mid == ob && !xi.is_split()) return xi;
  return std::nullopt;
}

inline std::shared_ptr<const derived::DerivedBackend> derived_of(const CategoryModel& m) {
  return std::dynamic_pointer_cast<const derived::DerivedBackend>(m.backend_ptr());
}

inline std::vector<long long> dense_ll(const std::vector<unsigned>& v) { return {v.begin(), v.end()}; }

}  // namespace testsupport
