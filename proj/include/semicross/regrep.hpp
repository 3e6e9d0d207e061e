#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "semicross/l1x.hpp"

namespace semicross {

/// Positive linear functional f(a) = sum_i tr(rho_i a_i) given by a density
/// rho >= 0 with unit trace.  Faithful iff rho has full rank in every block.
struct StateFunctional {
  AlgebraElement density;
  bool faithful = false;

  Complex operator()(const AlgebraElement& a) const {
    require_same_shape(density, a);
    Complex t = 0;
    for (int i = 0; i < a.shape.blocks(); ++i) t += (density.block(i) * a.block(i)).trace();
    return t;
  }

  /// Normalized trace: density = 1/(sum n_i) on every block.
  static StateFunctional trace_state(const AlgebraShape& s) {
    int n_total = 0;
    for (int i = 0; i < s.blocks(); ++i) n_total += s.block_size(i);
    StateFunctional f;
    f.density = scale(Complex(1.0 / n_total, 0), AlgebraElement::unit(s));
    f.faithful = true;
    return f;
  }

  static StateFunctional from_density(AlgebraElement rho, double tol) {
    if (!is_positive(rho, tol)) fail(ErrorCode::GramNotPSD, "density is not positive");
    double tr = trace(rho).real();
    if (tr <= tol) fail(ErrorCode::GramNotPSD, "density has vanishing trace");
    StateFunctional f;
    f.density = scale(Complex(1.0 / tr, 0), std::move(rho));
    f.faithful = true;
    for (const auto& m : f.density.blocks) {
      Matrix h = (m + m.adjoint()) / 2.0;
      Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
      if (es.eigenvalues()(0) <= tol) f.faithful = false;
    }
    return f;
  }
};

/// Degree-g semi-inner product on the algebra:
///   <v,u>_0 = f(u* v),  <v,u>_x = f(L_x(u* v)),  <v,u>_{-x} = f(u* alpha_x(1) v).
inline Complex degree_inner(const DynamicalSystem& sys, const StateFunctional& f,
                            const GroupElement& g, const AlgebraElement& v,
                            const AlgebraElement& u) {
  if (strictly_positive(g)) return f(sys.transfer_apply(g, mul(adjoint(u), v)));
  if (!in_cone(g)) return f(mul(adjoint(u), mul(sys.alpha_unit(neg(g)), v)));
  return f(mul(adjoint(u), v));
}

/// One summand of the representation space: the quotient of the algebra by
/// the null space of the degree-g inner product, in whitened coordinates.
/// `to_coords` maps vec(A) onto the d-dimensional coordinate space and `lift`
/// picks representatives, with to_coords * lift = identity.
struct DegreeSpace {
  GroupElement g;
  int dim = 0;
  Matrix to_coords;  // d x dim(A)
  Matrix lift;       // dim(A) x d
};

inline DegreeSpace gns_space(const DynamicalSystem& sys, const StateFunctional& f,
                             const GroupElement& g, double rank_tol = 1e-10) {
  sys.require_representable();
  const AlgebraShape& s = sys.shape;
  const int dim = s.dim();

  std::vector<AlgebraElement> units;
  units.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) units.push_back(basis_unit(s, i));

  Matrix gram(dim, dim);
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q)
      gram(p, q) = degree_inner(sys, f, g, units[static_cast<std::size_t>(q)],
                                units[static_cast<std::size_t>(p)]);
  gram = (gram + gram.adjoint()) / 2.0;

  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const auto& ev = es.eigenvalues();
  double top = std::max(0.0, ev(dim - 1));
  if (ev(0) < -rank_tol * std::max(top, 1.0))
    fail(ErrorCode::GramNotPSD, "degree " + g.str() + " Gram matrix has eigenvalue " +
                                    std::to_string(ev(0)));

  DegreeSpace space;
  space.g = g;
  if (top == 0.0) return space;

  std::vector<int> keep;
  for (int i = 0; i < dim; ++i)
    if (ev(i) > rank_tol * top) keep.push_back(i);
  space.dim = static_cast<int>(keep.size());
  space.to_coords = Matrix(space.dim, dim);
  space.lift = Matrix(dim, space.dim);
  for (int j = 0; j < space.dim; ++j) {
    double lam = ev(keep[static_cast<std::size_t>(j)]);
    Vector col = es.eigenvectors().col(keep[static_cast<std::size_t>(j)]);
    space.to_coords.row(j) = std::sqrt(lam) * col.adjoint();
    space.lift.col(j) = col / std::sqrt(lam);
  }
  return space;
}

/// Regular representation truncated to a symmetric window of degrees (the
/// box |g_i| <= radius).  pi acts degreewise, U_x shifts degrees up by x and
/// U_x^* down by x through the transfer maps; source degrees outside the
/// window are treated as zero.  Identities are therefore only exact on
/// vectors supported in the interior, at componentwise distance >= margin
/// from the boundary, where margin covers all degree shifts involved.
class TruncatedRep {
 public:
  TruncatedRep(SystemPtr sys, StateFunctional f, std::int64_t radius, double rank_tol = 1e-10)
      : sys_(std::move(sys)), state_(std::move(f)), radius_(radius), rank_tol_(rank_tol),
        cache_(std::make_shared<Cache>()) {
    sys_->require_representable();
    if (radius_ < 0) fail(ErrorCode::EmptyWindow, "window radius must be nonnegative");
    const int k = sys_->group_dim;
    double count = std::pow(2.0 * static_cast<double>(radius_) + 1.0, k);
    if (count > 2e5) fail(ErrorCode::ConfigError, "window has too many degrees");

    enumerate_box(GroupElement::zero(k), 0);
    offsets_.reserve(spaces_.size());
    int off = 0;
    for (std::size_t i = 0; i < degrees_.size(); ++i) {
      spaces_.push_back(gns_space(*sys_, state_, degrees_[i], rank_tol_));
      index_.emplace(degrees_[i], static_cast<int>(i));
      offsets_.push_back(off);
      off += spaces_.back().dim;
    }
    total_dim_ = off;
  }

  const SystemPtr& system() const { return sys_; }
  const StateFunctional& state() const { return state_; }
  std::int64_t radius() const { return radius_; }
  int total_dim() const { return total_dim_; }
  const std::vector<GroupElement>& degrees() const { return degrees_; }
  const std::vector<DegreeSpace>& spaces() const { return spaces_; }

  int degree_dim(const GroupElement& g) const {
    auto it = index_.find(g);
    return it == index_.end() ? 0 : spaces_[static_cast<std::size_t>(it->second)].dim;
  }

  bool in_window(const GroupElement& g) const { return index_.count(g) > 0; }

  /// Degreewise action of the algebra: a on nonnegative degrees and
  /// alpha_{-g}(a) on negative ones.
  Matrix pi(const AlgebraElement& a) const {
    Matrix m = Matrix::Zero(total_dim_, total_dim_);
    for (std::size_t i = 0; i < degrees_.size(); ++i) {
      const DegreeSpace& sp = spaces_[i];
      if (sp.dim == 0) continue;
      const GroupElement& g = degrees_[i];
      AlgebraElement act = in_cone(g) ? a : sys_->alpha_apply(neg(g), a);
      Matrix block = sp.to_coords * LinearMap::left_mul(act).m * sp.lift;
      m.block(offsets_[i], offsets_[i], sp.dim, sp.dim) = block;
    }
    return m;
  }

  /// U_x: maps the degree g-x summand into degree g by
  ///   alpha_x           for x <= g,
  ///   alpha_x(1) alpha_g(.)   for 0 <= g <= x,
  ///   alpha_{x-g}(1) .        for g <= 0.
  Matrix u_op(const GroupElement& x) const {
    require_in_cone(x);
    std::scoped_lock lk(cache_->mu);
    auto it = cache_->u.find(x);
    if (it != cache_->u.end()) return it->second;

    Matrix m = Matrix::Zero(total_dim_, total_dim_);
    for (std::size_t i = 0; i < degrees_.size(); ++i) {
      const GroupElement& g = degrees_[i];
      const DegreeSpace& target = spaces_[i];
      if (target.dim == 0) continue;
      GroupElement src = sub(g, x);
      auto jt = index_.find(src);
      if (jt == index_.end()) continue;
      const DegreeSpace& source = spaces_[static_cast<std::size_t>(jt->second)];
      if (source.dim == 0) continue;

      Matrix phi;
      if (x <= g) {
        phi = sys_->alpha(x).m;
      } else if (in_cone(g)) {
        phi = LinearMap::left_mul(sys_->alpha_unit(x)).m * sys_->alpha(g).m;
      } else {
        phi = LinearMap::left_mul(sys_->alpha_unit(sub(x, g))).m;
      }
      m.block(offsets_[i], offsets_[static_cast<std::size_t>(jt->second)], target.dim,
              source.dim) = target.to_coords * phi * source.lift;
    }
    cache_->u.emplace(x, m);
    return m;
  }

  /// U_x^*: maps the degree g+x summand into degree g by
  ///   L_x               for 0 <= g,
  ///   L_{g+x}           for -x <= g <= 0,
  ///   alpha_{-g}(1) .   for g <= -x.
  Matrix u_star_op(const GroupElement& x) const {
    require_in_cone(x);
    std::scoped_lock lk(cache_->mu);
    auto it = cache_->ustar.find(x);
    if (it != cache_->ustar.end()) return it->second;

    Matrix m = Matrix::Zero(total_dim_, total_dim_);
    for (std::size_t i = 0; i < degrees_.size(); ++i) {
      const GroupElement& g = degrees_[i];
      const DegreeSpace& target = spaces_[i];
      if (target.dim == 0) continue;
      GroupElement src = add(g, x);
      auto jt = index_.find(src);
      if (jt == index_.end()) continue;
      const DegreeSpace& source = spaces_[static_cast<std::size_t>(jt->second)];
      if (source.dim == 0) continue;

      Matrix phi;
      if (in_cone(g)) {
        phi = sys_->transfer_map(x).m;
      } else if (in_cone(src)) {
        phi = sys_->transfer_map(src).m;
      } else {
        phi = LinearMap::left_mul(sys_->alpha_unit(neg(g))).m;
      }
      m.block(offsets_[i], offsets_[static_cast<std::size_t>(jt->second)], target.dim,
              source.dim) = target.to_coords * phi * source.lift;
    }
    cache_->ustar.emplace(x, m);
    return m;
  }

  /// Projector onto degrees at componentwise distance >= margin from the
  /// window boundary.
  Matrix interior_projector(std::int64_t margin) const {
    if (margin < 0) fail(ErrorCode::MarginTooSmall, "margin must be nonnegative");
    if (margin > radius_) fail(ErrorCode::EmptyWindow, "margin leaves no interior degrees");
    Matrix q = Matrix::Zero(total_dim_, total_dim_);
    for (std::size_t i = 0; i < degrees_.size(); ++i) {
      if (max_abs_coord(degrees_[i]) > radius_ - margin) continue;
      const DegreeSpace& sp = spaces_[i];
      for (int j = 0; j < sp.dim; ++j)
        q(offsets_[i] + j, offsets_[i] + j) = 1.0;
    }
    return q;
  }

 private:
  struct Cache {
    std::mutex mu;
    std::map<GroupElement, Matrix> u, ustar;
  };

  void enumerate_box(GroupElement g, int coord) {
    if (coord == sys_->group_dim) {
      degrees_.push_back(g);
      return;
    }
    for (std::int64_t v = -radius_; v <= radius_; ++v) {
      g.coords[static_cast<std::size_t>(coord)] = v;
      enumerate_box(g, coord + 1);
    }
  }

  SystemPtr sys_;
  StateFunctional state_;
  std::int64_t radius_;
  double rank_tol_;
  std::vector<GroupElement> degrees_;
  std::vector<DegreeSpace> spaces_;
  std::vector<int> offsets_;
  std::map<GroupElement, int> index_;
  int total_dim_ = 0;
  std::shared_ptr<Cache> cache_;
};

inline TruncatedRep build_regrep(SystemPtr sys, const StateFunctional& f, std::int64_t radius,
                                 const std::vector<GroupElement>& generators,
                                 double rank_tol = 1e-10) {
  TruncatedRep rep(std::move(sys), f, radius, rank_tol);
  for (const auto& x : generators) {
    rep.u_op(x);
    rep.u_star_op(x);
  }
  return rep;
}

/// Integrated form of a finitely supported element:
///   sum_{x>0} U_x^* pi(a_{-x}) + pi(a_0) + sum_{x>0} pi(a_x) U_x.
inline Matrix integrated(const TruncatedRep& rep, const L1Element& a) {
  if (a.system() != rep.system()) fail(ErrorCode::SystemMismatch, "element from another system");
  if (a.support_radius() > rep.radius())
    fail(ErrorCode::SupportExceedsWindow, "support radius " +
                                              std::to_string(a.support_radius()) +
                                              " exceeds window " + std::to_string(rep.radius()));
  Matrix m = Matrix::Zero(rep.total_dim(), rep.total_dim());
  for (const auto& [g, c] : a.coeffs()) {
    if (strictly_positive(g))
      m += rep.pi(c) * rep.u_op(g);
    else if (!in_cone(g))
      m += rep.u_star_op(neg(g)) * rep.pi(c);
    else
      m += rep.pi(c);
  }
  return m;
}

/// Operator norm of the compression to the interior.
inline double interior_norm(const TruncatedRep& rep, const Matrix& m, std::int64_t margin) {
  Matrix q = rep.interior_projector(margin);
  return matrix_op_norm(q * m * q);
}

namespace detail {

inline std::int64_t required_margin(const std::vector<GroupElement>& xs) {
  std::int64_t m = 0;
  for (const auto& x : xs) m = std::max(m, max_abs_coord(x));
  return m;
}

}  // namespace detail

/// Covariance relations on interior vectors: U_x pi(a) U_x^* = pi(alpha_x(a)),
/// U_x^* pi(a) U_x = pi(L_x(a)), the commutation form U_x pi(a) =
/// pi(alpha_x(a)) U_x, and the semigroup law U_x U_y = U_{x+y}.
inline CheckReport covariance_check(const TruncatedRep& rep,
                                    const std::vector<GroupElement>& xs,
                                    const std::vector<std::pair<GroupElement, GroupElement>>& pairs,
                                    Sampler& sampler, int n_samples, std::int64_t margin,
                                    double tol) {
  std::int64_t need = detail::required_margin(xs);
  for (const auto& [x, y] : pairs)
    need = std::max(need, max_abs_coord(x) + max_abs_coord(y));
  if (margin < need)
    fail(ErrorCode::MarginTooSmall,
         "margin " + std::to_string(margin) + " below required " + std::to_string(need));

  const DynamicalSystem& sys = *rep.system();
  Matrix q = rep.interior_projector(margin);
  CheckReport report;

  for (const auto& x : xs) {
    Matrix ux = rep.u_op(x);
    Matrix ustar = rep.u_star_op(x);
    for (int i = 0; i < n_samples; ++i) {
      AlgebraElement a = sampler.algebra_element(sys.shape);
      Matrix pa = rep.pi(a);
      report.track("covariance-endo",
                   matrix_op_norm((ux * pa * ustar - rep.pi(sys.alpha_apply(x, a))) * q), tol,
                   x);
      report.track("covariance-transfer",
                   matrix_op_norm((ustar * pa * ux - rep.pi(sys.transfer_apply(x, a))) * q),
                   tol, x);
      report.track("commutation",
                   matrix_op_norm((ux * pa - rep.pi(sys.alpha_apply(x, a)) * ux) * q), tol, x);
    }
  }
  for (const auto& [x, y] : pairs) {
    Matrix lhs = rep.u_op(x) * rep.u_op(y);
    Matrix rhs = rep.u_op(add(x, y));
    report.track("semigroup", matrix_op_norm((lhs - rhs) * q), tol, x, y);
  }
  return report;
}

/// Mutual adjointness of the assembled U_x and U_x^* (exact under truncation,
/// no interior needed) plus the three underlying Gram-level identities
/// relating the degree inner products across a shift by x.
inline CheckReport adjointness_check(const TruncatedRep& rep,
                                     const std::vector<GroupElement>& xs, Sampler& sampler,
                                     int n_samples, double tol) {
  const DynamicalSystem& sys = *rep.system();
  const StateFunctional& f = rep.state();
  CheckReport report;

  for (const auto& x : xs) {
    Matrix ux = rep.u_op(x);
    Matrix ustar = rep.u_star_op(x);
    report.track("adjointness", matrix_op_norm(Matrix(ux.adjoint()) - ustar), tol, x);
  }

  const std::int64_t r = std::max<std::int64_t>(1, std::min<std::int64_t>(rep.radius(), 4));
  for (int i = 0; i < n_samples; ++i) {
    AlgebraElement v = sampler.algebra_element(sys.shape);
    AlgebraElement u = sampler.algebra_element(sys.shape);
    GroupElement x = sampler.cone_element(sys.group_dim, r);

    // x <= g: <alpha_x(v), u>_g = <v, L_x(u)>_{g-x}
    {
      GroupElement g = add(x, sampler.cone_element(sys.group_dim, r));
      Complex lhs = degree_inner(sys, f, g, sys.alpha_apply(x, v), u);
      Complex rhs = degree_inner(sys, f, sub(g, x), v, sys.transfer_apply(x, u));
      report.track("inner-shift-above", std::abs(lhs - rhs), tol, x, g);
    }
    // 0 <= g <= x: <alpha_x(1) alpha_g(v), u>_g = <v, L_g(u)>_{g-x}
    {
      GroupElement g = x.is_zero() ? x : sampler.cone_element(sys.group_dim, r);
      if (!(g <= x)) g = x;
      Complex lhs = degree_inner(sys, f, g,
                                 mul(sys.alpha_unit(x), sys.alpha_apply(g, v)), u);
      Complex rhs = degree_inner(sys, f, sub(g, x), v, sys.transfer_apply(g, u));
      report.track("inner-shift-inside", std::abs(lhs - rhs), tol, x, g);
    }
    // g <= 0: <alpha_{x-g}(1) v, u>_g = <v, alpha_{x-g}(1) u>_{g-x}
    {
      GroupElement g = neg(sampler.cone_element(sys.group_dim, r));
      AlgebraElement p = sys.alpha_unit(sub(x, g));
      Complex lhs = degree_inner(sys, f, g, mul(p, v), u);
      Complex rhs = degree_inner(sys, f, sub(g, x), v, mul(p, u));
      report.track("inner-shift-below", std::abs(lhs - rhs), tol, x, g);
    }
  }
  return report;
}

/// pi is a *-homomorphism degree by degree; exact under truncation.
inline CheckReport pi_homomorphism_check(const TruncatedRep& rep, Sampler& sampler,
                                         int n_samples, double tol) {
  const DynamicalSystem& sys = *rep.system();
  CheckReport report;
  for (int i = 0; i < n_samples; ++i) {
    AlgebraElement a = sampler.algebra_element(sys.shape);
    AlgebraElement b = sampler.algebra_element(sys.shape);
    report.track("pi-multiplicative",
                 matrix_op_norm(rep.pi(a) * rep.pi(b) - rep.pi(mul(a, b))), tol);
    report.track("pi-star", matrix_op_norm(Matrix(rep.pi(a).adjoint()) - rep.pi(adjoint(a))),
                 tol);
  }
  return report;
}

/// Lower bound test for the integrated representation: the norm of the
/// degree-zero coefficient never exceeds the interior operator norm.
inline CheckReport faithfulness_criterion_check(const TruncatedRep& rep,
                                                const std::vector<L1Element>& elements,
                                                std::int64_t margin, double tol) {
  CheckReport report;
  const GroupElement origin = GroupElement::zero(rep.system()->group_dim);
  for (const auto& a : elements) {
    if (a.support_radius() > margin)
      fail(ErrorCode::MarginTooSmall, "element support exceeds margin");
    double lhs = op_norm(a.coeff(origin));
    double rhs = interior_norm(rep, integrated(rep, a), margin);
    report.track("coefficient-dominance", std::max(0.0, lhs - rhs), tol);
  }
  return report;
}

}  // namespace semicross
