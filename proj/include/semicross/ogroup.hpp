#pragma once

#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "semicross/errors.hpp"

namespace semicross {

enum class Ordering { LT, EQ, GT };

/// Element of Z^k under the lexicographic order.  The first coordinate is the
/// most significant one.  Values are immutable; arithmetic is checked and
/// overflow raises instead of wrapping.
struct GroupElement {
  std::vector<std::int64_t> coords;

  GroupElement() = default;
  explicit GroupElement(std::vector<std::int64_t> c) : coords(std::move(c)) {}

  static GroupElement zero(int k) {
    return GroupElement(std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));
  }
  /// One-dimensional convenience (k = 1 is the default group everywhere).
  static GroupElement scalar(std::int64_t v) { return GroupElement({v}); }

  int dim() const { return static_cast<int>(coords.size()); }

  bool is_zero() const {
    for (auto v : coords)
      if (v != 0) return false;
    return true;
  }

  std::string str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) os << ',';
      os << coords[i];
    }
    os << ')';
    return os.str();
  }
};

inline void require_same_dim(const GroupElement& g, const GroupElement& h) {
  if (g.dim() != h.dim())
    fail(ErrorCode::DimensionMismatch,
         "group elements of dimension " + std::to_string(g.dim()) + " and " +
             std::to_string(h.dim()));
}

inline Ordering compare(const GroupElement& g, const GroupElement& h) {
  require_same_dim(g, h);
  for (int i = 0; i < g.dim(); ++i) {
    if (g.coords[i] < h.coords[i]) return Ordering::LT;
    if (g.coords[i] > h.coords[i]) return Ordering::GT;
  }
  return Ordering::EQ;
}

inline bool operator==(const GroupElement& g, const GroupElement& h) {
  return compare(g, h) == Ordering::EQ;
}
inline bool operator!=(const GroupElement& g, const GroupElement& h) { return !(g == h); }
inline bool operator<(const GroupElement& g, const GroupElement& h) {
  return compare(g, h) == Ordering::LT;
}
inline bool operator<=(const GroupElement& g, const GroupElement& h) {
  return compare(g, h) != Ordering::GT;
}
inline bool operator>(const GroupElement& g, const GroupElement& h) { return h < g; }
inline bool operator>=(const GroupElement& g, const GroupElement& h) { return h <= g; }

/// Membership in the positive cone, 0 <= g (0 itself included).
inline bool in_cone(const GroupElement& g) {
  return compare(GroupElement::zero(g.dim()), g) != Ordering::GT;
}

inline bool strictly_positive(const GroupElement& g) {
  return compare(GroupElement::zero(g.dim()), g) == Ordering::LT;
}

inline GroupElement add(const GroupElement& g, const GroupElement& h) {
  require_same_dim(g, h);
  GroupElement r = g;
  for (int i = 0; i < g.dim(); ++i) {
    if (__builtin_add_overflow(g.coords[i], h.coords[i], &r.coords[i]))
      fail(ErrorCode::IntegerOverflow, "add " + g.str() + " + " + h.str());
  }
  return r;
}

inline GroupElement neg(const GroupElement& g) {
  GroupElement r = g;
  for (int i = 0; i < g.dim(); ++i) {
    if (__builtin_sub_overflow(std::int64_t{0}, g.coords[i], &r.coords[i]))
      fail(ErrorCode::IntegerOverflow, "neg " + g.str());
  }
  return r;
}

inline GroupElement sub(const GroupElement& g, const GroupElement& h) {
  return add(g, neg(h));
}

/// |g| in the lexicographic order: g itself when 0 <= g, otherwise -g.
inline GroupElement lex_abs(const GroupElement& g) {
  return in_cone(g) ? g : neg(g);
}

/// Largest coordinate magnitude; used as the support radius for windows.
inline std::int64_t max_abs_coord(const GroupElement& g) {
  std::int64_t m = 0;
  for (auto v : g.coords) {
    std::int64_t a = v < 0 ? -v : v;
    if (a > m) m = a;
  }
  return m;
}

inline void require_in_cone(const GroupElement& g) {
  if (!in_cone(g)) fail(ErrorCode::NotInCone, g.str() + " is not in the positive cone");
}

}  // namespace semicross
