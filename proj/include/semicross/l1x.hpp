#pragma once

#include <map>
#include <memory>
#include <vector>

#include "semicross/action.hpp"

namespace semicross {

/// Finitely supported element of the convolution *-algebra over a finely
/// representable system.  Coefficients obey the one-sided range constraints
///   a_g = a_g alpha_g(1)        for g > 0,
///   a_g = alpha_{-g}(1) a_g     for g < 0,
/// and coefficients below the system drop threshold are pruned, so the
/// representation is canonical.
class L1Element {
 public:
  L1Element() = default;
  explicit L1Element(SystemPtr sys) : sys_(std::move(sys)) {
    sys_->require_representable();
  }

  static L1Element zero(SystemPtr sys) { return L1Element(std::move(sys)); }

  const SystemPtr& system() const { return sys_; }
  const std::map<GroupElement, AlgebraElement>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  AlgebraElement coeff(const GroupElement& g) const {
    auto it = coeffs_.find(g);
    if (it != coeffs_.end()) return it->second;
    return AlgebraElement::zero(sys_->shape);
  }

  std::vector<GroupElement> support() const {
    std::vector<GroupElement> s;
    s.reserve(coeffs_.size());
    for (const auto& [g, c] : coeffs_) s.push_back(g);
    return s;
  }

  std::int64_t support_radius() const {
    std::int64_t r = 0;
    for (const auto& [g, c] : coeffs_) r = std::max(r, max_abs_coord(g));
    return r;
  }

  double l1_norm() const {
    double n = 0;
    for (const auto& [g, c] : coeffs_) n += op_norm(c);
    return n;
  }

  /// Adds `value` into the coefficient at `g` (no constraint handling; the
  /// callers below keep the invariant).
  void accumulate(const GroupElement& g, const AlgebraElement& value) {
    auto it = coeffs_.find(g);
    if (it == coeffs_.end())
      coeffs_.emplace(g, value);
    else
      it->second = add(it->second, value);
  }

  void canonicalize() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
      it = op_norm(it->second) <= sys_->drop_threshold ? coeffs_.erase(it) : std::next(it);
  }

 private:
  SystemPtr sys_;
  std::map<GroupElement, AlgebraElement> coeffs_;
};

inline void require_same_system(const L1Element& a, const L1Element& b) {
  if (a.system() != b.system())
    fail(ErrorCode::SystemMismatch, "elements belong to different systems");
}

/// Projection of a coefficient onto the degree-g constraint.
inline AlgebraElement project_coefficient(const DynamicalSystem& sys, const AlgebraElement& a,
                                          const GroupElement& g) {
  if (strictly_positive(g)) return mul(a, sys.alpha_unit(g));
  if (!in_cone(g)) return mul(sys.alpha_unit(neg(g)), a);
  return a;
}

enum class ConstraintMode { Strict, Project };

/// Single-coefficient element a delta_g.  The coefficient is projected onto
/// the constraint; strict mode raises when the projection changes it.
inline L1Element delta(SystemPtr sys, const AlgebraElement& a, const GroupElement& g,
                       ConstraintMode mode = ConstraintMode::Strict) {
  L1Element e(sys);
  AlgebraElement p = project_coefficient(*sys, a, g);
  double change = op_norm(sub(a, p));
  if (mode == ConstraintMode::Strict && change > sys->tol)
    fail(ErrorCode::ConstraintViolation,
         "coefficient at " + g.str() + " violates the range constraint by " +
             std::to_string(change));
  e.accumulate(g, p);
  e.canonicalize();
  return e;
}

/// The multiplicative identity 1 delta_0.
inline L1Element unit_element(SystemPtr sys) {
  AlgebraElement one = AlgebraElement::unit(sys->shape);
  GroupElement origin = GroupElement::zero(sys->group_dim);
  return delta(std::move(sys), one, origin);
}

/// Generator u_x = alpha_x(1) delta_x, x in the cone.
inline L1Element u(SystemPtr sys, const GroupElement& x) {
  require_in_cone(x);
  AlgebraElement c = sys->alpha_unit(x);
  return delta(std::move(sys), c, x);
}

/// u_x^* = alpha_x(1) delta_{-x}.
inline L1Element u_star(SystemPtr sys, const GroupElement& x) {
  require_in_cone(x);
  AlgebraElement c = sys->alpha_unit(x);
  return delta(std::move(sys), c, neg(x));
}

inline L1Element add(const L1Element& a, const L1Element& b) {
  require_same_system(a, b);
  L1Element r = a;
  for (const auto& [g, c] : b.coeffs()) r.accumulate(g, c);
  r.canonicalize();
  return r;
}

inline L1Element scale(Complex z, const L1Element& a) {
  L1Element r = L1Element::zero(a.system());
  for (const auto& [g, c] : a.coeffs()) r.accumulate(g, scale(z, c));
  r.canonicalize();
  return r;
}

inline L1Element sub(const L1Element& a, const L1Element& b) {
  return add(a, scale(Complex(-1, 0), b));
}

/// Involution: (a^*)_g = (a_{-g})^*.
inline L1Element star(const L1Element& a) {
  L1Element r = L1Element::zero(a.system());
  for (const auto& [g, c] : a.coeffs()) r.accumulate(neg(g), adjoint(c));
  r.canonicalize();
  return r;
}

/// How far the coefficients are from satisfying the range constraints.
inline double constraint_residual(const L1Element& a) {
  double r = 0;
  for (const auto& [g, c] : a.coeffs())
    r = std::max(r, op_norm(sub(c, project_coefficient(*a.system(), c, g))));
  return r;
}

/// Convolution product.  Each support pair (g1, g2) lands in exactly one of
/// the three summation families of the defining table, selected by the signs
/// of the degrees; writing g1 = x or -x and g2 = y or -y with x, y in the
/// cone:
///   g >= 0:  x,-y (x,y>0):  a_x alpha_{x-y}(b_{-y})
///            -x,y (x,y>0):  L_x(a_{-x} b_y)
///            x,y (x,y>=0):  a_x alpha_x(b_y)
///   g <  0:  x,-y (x,y>0):  alpha_{y-x}(a_x) b_{-y}
///            -x,y (x,y>0):  L_y(a_{-x} b_y)
///            -x,-y (x,y>=0): alpha_y(a_{-x}) b_{-y}
inline L1Element mul(const L1Element& a, const L1Element& b) {
  require_same_system(a, b);
  const DynamicalSystem& sys = *a.system();
  L1Element r = L1Element::zero(a.system());

  for (const auto& [g1, p] : a.coeffs()) {
    for (const auto& [g2, q] : b.coeffs()) {
      GroupElement g = add(g1, g2);
      AlgebraElement c = AlgebraElement::zero(sys.shape);

      const bool pos1 = strictly_positive(g1), neg1 = !in_cone(g1);
      const bool pos2 = strictly_positive(g2), neg2 = !in_cone(g2);

      if (pos1 && neg2) {
        // g1 = x, g2 = -y with x, y > 0.
        if (in_cone(g)) {
          c = mul(p, sys.alpha_apply(g, q));          // a_x alpha_{x-y}(b_{-y})
        } else {
          c = mul(sys.alpha_apply(neg(g), p), q);     // alpha_{y-x}(a_x) b_{-y}
        }
      } else if (neg1 && pos2) {
        // g1 = -x, g2 = y with x, y > 0.
        if (in_cone(g)) {
          c = sys.transfer_apply(neg(g1), mul(p, q));  // L_x(a_{-x} b_y)
        } else {
          c = sys.transfer_apply(g2, mul(p, q));       // L_y(a_{-x} b_y)
        }
      } else if (!neg1 && !neg2) {
        // g1 = x, g2 = y with x, y >= 0.
        c = mul(p, sys.alpha_apply(g1, q));            // a_x alpha_x(b_y)
      } else {
        // g1 = -x, g2 = -y with x, y >= 0.
        c = mul(sys.alpha_apply(neg(g2), p), q);       // alpha_y(a_{-x}) b_{-y}
      }

      r.accumulate(g, c);
    }
  }
  r.canonicalize();
  return r;
}

/// Product of two monomials a delta_{g1} and b delta_{g2} through the six
/// case formulas of the integrated covariant representation; an independent
/// derivation used to cross-check `mul`.
inline L1Element monomial_product(SystemPtr sys, const AlgebraElement& a, const GroupElement& g1,
                                  const AlgebraElement& b, const GroupElement& g2,
                                  ConstraintMode mode = ConstraintMode::Strict) {
  const DynamicalSystem& s = *sys;
  AlgebraElement ca = project_coefficient(s, a, g1);
  AlgebraElement cb = project_coefficient(s, b, g2);
  if (mode == ConstraintMode::Strict) {
    if (op_norm(sub(a, ca)) > s.tol || op_norm(sub(b, cb)) > s.tol)
      fail(ErrorCode::ConstraintViolation, "monomial coefficient violates range constraint");
  }

  GroupElement g = add(g1, g2);
  AlgebraElement c = AlgebraElement::zero(s.shape);
  if (in_cone(g)) {
    if (strictly_positive(g1) && !in_cone(g2)) {
      c = mul(ca, s.alpha_apply(g, cb));                       // I.1
    } else if (!in_cone(g1) && strictly_positive(g2)) {
      c = s.transfer_apply(neg(g1), mul(ca, cb));              // I.2
    } else {
      c = mul(ca, s.alpha_apply(g1, cb));                      // I.3
    }
  } else {
    if (strictly_positive(g1) && !in_cone(g2)) {
      c = mul(s.alpha_apply(neg(g), ca), cb);                  // II.1
    } else if (!in_cone(g1) && strictly_positive(g2)) {
      c = s.transfer_apply(g2, mul(ca, cb));                   // II.2
    } else {
      c = mul(s.alpha_apply(neg(g2), ca), cb);                 // II.3
    }
  }
  return delta(std::move(sys), c, g, ConstraintMode::Project);
}

inline double l1_distance(const L1Element& a, const L1Element& b) {
  return sub(a, b).l1_norm();
}

/// Random finitely supported element with support radius <= radius; the
/// coefficients are drawn Gaussian and projected onto the constraints.
inline L1Element random_l1_element(SystemPtr sys, Sampler& sampler, std::int64_t radius,
                                   int terms) {
  L1Element r = L1Element::zero(sys);
  for (int i = 0; i < terms; ++i) {
    GroupElement g = sampler.signed_element(sys->group_dim, radius);
    AlgebraElement c = sampler.algebra_element(sys->shape);
    r = add(r, delta(sys, c, g, ConstraintMode::Project));
  }
  return r;
}

}  // namespace semicross
