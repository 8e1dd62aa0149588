#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace extcat {

using IndecIndex = std::uint32_t;

struct IndecId {
  std::string name;
  IndecIndex index = 0;
  friend bool operator==(const IndecId&, const IndecId&) = default;
};

// Finite multiset of indecomposables, stored as a dense multiplicity vector
// with trailing zeros trimmed so equality is multiset equality.
class Obj {
 public:
  Obj() = default;
  Obj(std::initializer_list<std::pair<IndecIndex, unsigned>> entries) {
    for (auto [i, m] : entries) add(i, m);
  }

  static Obj indec(IndecIndex i, unsigned mult = 1) {
    Obj o;
    o.add(i, mult);
    return o;
  }
  static Obj from_dense(std::vector<unsigned> m) {
    Obj o;
    o.m_ = std::move(m);
    o.trim();
    return o;
  }

  unsigned mult(IndecIndex i) const { return i < m_.size() ? m_[i] : 0; }
  const std::vector<unsigned>& dense() const { return m_; }
  std::vector<unsigned> dense(std::size_t n) const {
    std::vector<unsigned> d(m_);
    d.resize(std::max(n, d.size()), 0);
    return d;
  }

  bool is_zero() const { return m_.empty(); }
  unsigned total() const {
    unsigned t = 0;
    for (unsigned x : m_) t += x;
    return t;
  }
  bool is_indecomposable() const { return total() == 1; }
  // Index of the single summand; only meaningful when is_indecomposable().
  IndecIndex sole() const {
    for (std::size_t i = 0; i < m_.size(); ++i)
      if (m_[i] != 0) return static_cast<IndecIndex>(i);
    return 0;
  }
  std::size_t support_bound() const { return m_.size(); }

  void add(IndecIndex i, unsigned mult = 1) {
    if (mult == 0) return;
    if (m_.size() <= i) m_.resize(i + 1, 0);
    m_[i] += mult;
  }
  // Removes mult copies of i; returns false (and leaves *this unchanged) if too few.
  bool remove(IndecIndex i, unsigned mult = 1) {
    if (this->mult(i) < mult) return false;
    m_[i] -= mult;
    trim();
    return true;
  }

  bool contains(const Obj& other) const {
    if (other.m_.size() > m_.size()) return false;
    for (std::size_t i = 0; i < other.m_.size(); ++i)
      if (other.m_[i] > m_[i]) return false;
    return true;
  }
  // Multiset difference; requires contains(other).
  Obj minus(const Obj& other) const {
    Obj r = *this;
    for (std::size_t i = 0; i < other.m_.size(); ++i) r.m_[i] -= other.m_[i];
    r.trim();
    return r;
  }
  Obj scaled(unsigned k) const {
    Obj r = *this;
    for (unsigned& x : r.m_) x *= k;
    r.trim();
    return r;
  }

  template <typename F>
  void for_each(F&& fn) const {
    for (std::size_t i = 0; i < m_.size(); ++i)
      if (m_[i] != 0) fn(static_cast<IndecIndex>(i), m_[i]);
  }
  // Summands listed with repetition, in index order.
  std::vector<IndecIndex> summands() const {
    std::vector<IndecIndex> out;
    for_each([&](IndecIndex i, unsigned m) {
      for (unsigned k = 0; k < m; ++k) out.push_back(i);
    });
    return out;
  }

  friend Obj operator+(Obj x, const Obj& y) {
    if (x.m_.size() < y.m_.size()) x.m_.resize(y.m_.size(), 0);
    for (std::size_t i = 0; i < y.m_.size(); ++i) x.m_[i] += y.m_[i];
    return x;
  }
  Obj& operator+=(const Obj& y) { return *this = *this + y; }

  friend bool operator==(const Obj&, const Obj&) = default;
  // Canonical order: lexicographic on multiplicity vectors in index order.
  friend std::strong_ordering operator<=>(const Obj& a, const Obj& b) { return a.m_ <=> b.m_; }

 private:
  void trim() {
    while (!m_.empty() && m_.back() == 0) m_.pop_back();
  }
  std::vector<unsigned> m_;
};

inline Obj obj_sum(const Obj& x, const Obj& y) { return x + y; }

using ObjSet = std::set<Obj>;

struct ObjHash {
  std::size_t operator()(const Obj& o) const {
    std::size_t h = 1469598103934665603ULL;
    for (unsigned x : o.dense()) h = (h ^ x) * 1099511628211ULL;
    return h;
  }
};

// All objects over n indecomposables with every multiplicity <= max_mult and
// total multiplicity <= max_total, in canonical order.
inline std::vector<Obj> enumerate_objects(std::size_t n, unsigned max_mult, unsigned max_total) {
  std::vector<Obj> out;
  std::vector<unsigned> cur(n, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i == n) {
      out.push_back(Obj::from_dense(cur));
      return;
    }
    for (unsigned m = 0; m <= max_mult && m <= left; ++m) {
      cur[i] = m;
      rec(i + 1, left - m);
    }
    cur[i] = 0;
  };
  rec(0, max_total);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace extcat
