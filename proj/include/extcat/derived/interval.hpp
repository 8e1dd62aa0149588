#pragma once

#include <compare>
#include <optional>
#include <string>
#include <tuple>

namespace extcat::derived {

// Indecomposable [a,b][shift] of D^b(mod kA_n), 1 <= a <= b <= n.
struct Interval {
  int a = 1;
  int b = 1;
  int shift = 0;

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval& x, const Interval& y) {
    return std::tuple(x.a, x.b, x.shift) <=> std::tuple(y.a, y.b, y.shift);
  }

  Interval shifted(int k) const { return {a, b, shift + k}; }
  int length() const { return b - a + 1; }
};

// Window order: by shift, then projectives first (larger b), then a.
inline bool window_less(const Interval& x, const Interval& y) {
  return std::tuple(x.shift, -x.b, x.a) < std::tuple(y.shift, -y.b, y.a);
}

inline std::string interval_base_name(const Interval& iv, int n) {
  if (iv.b == n) return "P" + std::to_string(iv.a);
  if (iv.a == 1) return "I" + std::to_string(iv.b);
  if (iv.a == iv.b) return "S" + std::to_string(iv.a);
  if (n == 4 && iv.a == 2 && iv.b == 3) return "N";
  return "M" + std::to_string(iv.a) + "_" + std::to_string(iv.b);
}

inline std::string interval_name(const Interval& iv, int n) {
  std::string s = interval_base_name(iv, n);
  if (iv.shift != 0) s += "[" + std::to_string(iv.shift) + "]";
  return s;
}

// Inverse of interval_name for a fixed n.
inline std::optional<Interval> parse_interval_name(const std::string& name, int n) {
  std::string base = name;
  int shift = 0;
  auto lb = name.find('[');
  if (lb != std::string::npos) {
    if (name.back() != ']') return std::nullopt;
    try {
      shift = std::stoi(name.substr(lb + 1, name.size() - lb - 2));
    } catch (...) {
      return std::nullopt;
    }
    base = name.substr(0, lb);
  }
  for (int a = 1; a <= n; ++a)
    for (int b = a; b <= n; ++b)
      if (interval_base_name({a, b, 0}, n) == base) return Interval{a, b, shift};
  return std::nullopt;
}

// Coordinates in the ZA_n translation quiver: tau moves two columns left within a row.
inline int ar_row(const Interval& iv, int n) { return iv.a + n - iv.b; }
inline int ar_column(const Interval& iv, int n) { return 2 * n - iv.a - iv.b + iv.shift * (n + 1); }

// Auslander-Reiten translate in D^b(kA_n).
inline Interval tau(const Interval& iv, int n) {
  if (iv.b < n) return {iv.a + 1, iv.b + 1, iv.shift};
  return {1, iv.a, iv.shift - 1};  // tau(P_a) = I_a[-1]
}

inline Interval tau_inverse(const Interval& iv, int n) {
  if (iv.a > 1) return {iv.a - 1, iv.b - 1, iv.shift};
  return {iv.b, n, iv.shift + 1};  // tau^-1(I_b) = P_b[1]
}

// Graded dimension vector contribution: (-1)^shift times the dimension vector.
inline long long interval_sign(const Interval& iv) { return (iv.shift % 2 == 0) ? 1 : -1; }

}  // namespace extcat::derived
