#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semicross/checks.hpp"
#include "semicross/linmap.hpp"
#include "semicross/ogroup.hpp"
#include "semicross/sampling.hpp"

namespace semicross {

/// A *-endomorphism of a block algebra, validated on construction:
/// multiplicative and adjoint-preserving on the matrix-unit basis.  phi(1)
/// is a projection but need not be 1.
struct Endomorphism {
  LinearMap map;
  AlgebraElement unit_image;
  bool unital = false;
};

inline Endomorphism validate_endomorphism(const LinearMap& map, double tol) {
  const AlgebraShape& s = map.shape;
  const int dim = s.dim();
  std::vector<AlgebraElement> units;
  std::vector<AlgebraElement> images;
  units.reserve(static_cast<std::size_t>(dim));
  images.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    units.push_back(basis_unit(s, i));
    images.push_back(map.apply(units.back()));
  }

  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      AlgebraElement lhs = map.apply(mul(units[static_cast<std::size_t>(i)],
                                         units[static_cast<std::size_t>(j)]));
      AlgebraElement rhs =
          mul(images[static_cast<std::size_t>(i)], images[static_cast<std::size_t>(j)]);
      double r = op_norm(sub(lhs, rhs));
      if (r > tol)
        fail(ErrorCode::NotMultiplicative,
             "basis pair (" + std::to_string(i) + "," + std::to_string(j) +
                 ") residual " + std::to_string(r));
    }
  }
  for (int i = 0; i < dim; ++i) {
    double r = op_norm(sub(map.apply(adjoint(units[static_cast<std::size_t>(i)])),
                           adjoint(images[static_cast<std::size_t>(i)])));
    if (r > tol)
      fail(ErrorCode::NotStarPreserving,
           "basis element " + std::to_string(i) + " residual " + std::to_string(r));
  }

  Endomorphism e;
  e.map = map;
  e.unit_image = map.apply(AlgebraElement::unit(s));
  e.unital = op_norm(sub(e.unit_image, AlgebraElement::unit(s))) <= tol;
  return e;
}

inline Endomorphism validate_endomorphism(const Matrix& m, const AlgebraShape& s, double tol) {
  return validate_endomorphism(LinearMap(s, m), tol);
}

/// Semigroup action of the positive cone by *-endomorphisms.  For k = 1 the
/// action is generated by a single endomorphism and at(x) is its x-th
/// compositional power.  For k >= 2 the lexicographic cone is not finitely
/// generated as a semigroup, so the action is either assembled from commuting
/// generators (all but the leading one invertible) or supplied as an oracle
/// that is cross-checked for homomorphy against memoized decompositions.
class EndoAction {
 public:
  static EndoAction cyclic(Endomorphism gen, double tol) {
    EndoAction a;
    a.shape_ = gen.map.shape;
    a.k_ = 1;
    a.tol_ = tol;
    a.cache_ = std::make_shared<Cache>();
    a.cache_->powers.push_back(LinearMap::identity(a.shape_));
    a.cache_->powers.push_back(gen.map);
    a.generators_.push_back(std::move(gen));
    return a;
  }

  static EndoAction from_generators(std::vector<Endomorphism> gens, double tol) {
    if (gens.empty()) fail(ErrorCode::ConfigError, "at least one generator required");
    if (gens.size() == 1) return cyclic(std::move(gens[0]), tol);

    const AlgebraShape shape = gens[0].map.shape;
    const int k = static_cast<int>(gens.size());
    for (const auto& g : gens)
      if (g.map.shape != shape) fail(ErrorCode::ShapeMismatch, "generator shapes differ");

    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        double r = map_distance(gens[static_cast<std::size_t>(i)].map.compose(
                                    gens[static_cast<std::size_t>(j)].map),
                                gens[static_cast<std::size_t>(j)].map.compose(
                                    gens[static_cast<std::size_t>(i)].map));
        if (r > tol)
          fail(ErrorCode::OracleInconsistent, "generators " + std::to_string(i) + "," +
                                                  std::to_string(j) +
                                                  " do not commute, residual " +
                                                  std::to_string(r));
      }

    // Coordinates beyond the leading one take negative values inside the
    // cone, so those generators must be automorphisms.
    std::vector<LinearMap> inverses(static_cast<std::size_t>(k),
                                    LinearMap::identity(shape));
    for (int i = 1; i < k; ++i) {
      const Matrix& m = gens[static_cast<std::size_t>(i)].map.m;
      if (detail::numeric_rank(m, tol) != shape.dim())
        fail(ErrorCode::ConfigError,
             "generator " + std::to_string(i) + " must be invertible for k >= 2");
      inverses[static_cast<std::size_t>(i)] = LinearMap(shape, m.inverse());
    }

    EndoAction a;
    a.shape_ = shape;
    a.k_ = k;
    a.tol_ = tol;
    a.generators_ = gens;
    a.cache_ = std::make_shared<Cache>();
    auto gens_copy = std::move(gens);
    a.oracle_ = [shape, gens_copy, inverses](const GroupElement& x) {
      LinearMap r = LinearMap::identity(shape);
      for (int i = 0; i < x.dim(); ++i) {
        std::int64_t e = x.coords[static_cast<std::size_t>(i)];
        if (e >= 0)
          r = r.compose(gens_copy[static_cast<std::size_t>(i)].map.pow(e));
        else
          r = r.compose(inverses[static_cast<std::size_t>(i)].pow(-e));
      }
      return r;
    };
    return a;
  }

  static EndoAction from_oracle(AlgebraShape shape, int k,
                                std::function<LinearMap(const GroupElement&)> fn, double tol) {
    EndoAction a;
    a.shape_ = std::move(shape);
    a.k_ = k;
    a.tol_ = tol;
    a.oracle_ = std::move(fn);
    a.cache_ = std::make_shared<Cache>();
    a.validate_oracle_values_ = true;
    return a;
  }

  const AlgebraShape& shape() const { return shape_; }
  int group_dim() const { return k_; }
  double tol() const { return tol_; }
  const std::vector<Endomorphism>& generators() const { return generators_; }

  /// alpha_x for x in the cone.
  LinearMap at(const GroupElement& x) const {
    if (x.dim() != k_) fail(ErrorCode::DimensionMismatch, "group dimension");
    require_in_cone(x);
    if (k_ == 1) return power(x.coords[0]);

    std::scoped_lock lk(cache_->mu);
    auto it = cache_->memo.find(x);
    if (it != cache_->memo.end()) return it->second;
    LinearMap v = oracle_(x);
    if (v.shape != shape_) fail(ErrorCode::ShapeMismatch, "oracle value shape");
    if (validate_oracle_values_) {
      validate_endomorphism(v, tol_);
      if (x.is_zero() && map_distance(v, LinearMap::identity(shape_)) > tol_)
        fail(ErrorCode::OracleInconsistent, "oracle at 0 is not the identity");
      cross_check(x, v);
    }
    cache_->memo.emplace(x, v);
    return v;
  }

  AlgebraElement apply(const GroupElement& x, const AlgebraElement& a) const {
    return at(x).apply(a);
  }

  /// alpha_x(1); a nonincreasing family of projections.
  AlgebraElement unit_image(const GroupElement& x) const {
    return apply(x, AlgebraElement::unit(shape_));
  }

 private:
  struct Cache {
    std::mutex mu;
    std::vector<LinearMap> powers;            // k = 1
    std::map<GroupElement, LinearMap> memo;   // k >= 2
  };

  LinearMap power(std::int64_t n) const {
    std::scoped_lock lk(cache_->mu);
    auto& powers = cache_->powers;
    while (static_cast<std::int64_t>(powers.size()) <= n)
      powers.push_back(powers.back().compose(powers[1]));
    return powers[static_cast<std::size_t>(n)];
  }

  // Homomorphy against memoized decompositions x = y + z; a cheap guard on
  // user-supplied oracles.
  void cross_check(const GroupElement& x, const LinearMap& v) const {
    int checked = 0;
    for (const auto& [y, ey] : cache_->memo) {
      if (checked >= 8) break;
      if (!in_cone(y) || y.is_zero()) continue;
      GroupElement z = sub(x, y);
      if (!in_cone(z)) continue;
      auto it = cache_->memo.find(z);
      if (it == cache_->memo.end()) continue;
      double r = map_distance(ey.compose(it->second), v);
      if (r > tol_)
        fail(ErrorCode::OracleInconsistent,
             "alpha_" + y.str() + " o alpha_" + z.str() + " != alpha_" + x.str() +
                 ", residual " + std::to_string(r));
      ++checked;
    }
  }

  AlgebraShape shape_;
  int k_ = 1;
  double tol_ = 1e-9;
  std::vector<Endomorphism> generators_;
  std::function<LinearMap(const GroupElement&)> oracle_;
  bool validate_oracle_values_ = false;
  std::shared_ptr<Cache> cache_;
};

inline AlgebraElement unit_projection(const EndoAction& action, const GroupElement& x) {
  return action.unit_image(x);
}

/// P_x: the central projection complementary to ker(alpha_x), block by block.
/// The kernel of a *-endomorphism is an ideal, hence a block sum; a block that
/// is neither annihilated nor mapped injectively signals numerical breakdown.
inline CentralProjection kernel_projection(const EndoAction& action, const GroupElement& x,
                                           double tol) {
  const AlgebraShape& s = action.shape();
  LinearMap e = action.at(x);
  CentralProjection alive = CentralProjection::none(s);

  for (int i = 0; i < s.blocks(); ++i) {
    int n = s.block_size(i);
    int off = s.vec_offset(i);
    Matrix cols = e.m.middleCols(off, n * n);
    double maxcol = 0;
    for (int j = 0; j < n * n; ++j) maxcol = std::max(maxcol, cols.col(j).norm());
    if (maxcol <= tol) continue;  // block killed
    // Alive block: alpha_x must be injective on it.
    Eigen::JacobiSVD<Matrix> svd(cols);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin <= tol)
      fail(ErrorCode::KernelNotIdeal,
           "block " + std::to_string(i) + " of " + x.str() +
               " is neither annihilated nor injective (sigma_min " + std::to_string(smin) +
               ")");
    alive.mask[static_cast<std::size_t>(i)] = true;
  }

  int expected = alive.dim_span(s);
  if (detail::numeric_rank(e.m, tol) != expected)
    fail(ErrorCode::KernelNotIdeal, "kernel of alpha_" + x.str() + " is not a block sum");
  return alive;
}

/// Theorem-style hereditary range condition: span(alpha_x(A)) equals
/// span(alpha_x(1) A alpha_x(1)).
inline bool hereditary_check(const EndoAction& action, const GroupElement& x, double tol) {
  LinearMap e = action.at(x);
  AlgebraElement u = action.unit_image(x);
  LinearMap corner = LinearMap::left_mul(u).compose(LinearMap::right_mul(u));

  Matrix q1 = detail::orthonormal_span(e.m, tol);
  Matrix q2 = detail::orthonormal_span(corner.m, tol);
  if (q1.cols() != q2.cols()) return false;
  if (q1.cols() == 0) return true;
  Matrix d = q1 * q1.adjoint() - q2 * q2.adjoint();
  return matrix_op_norm(d) <= tol;
}

/// Basis matrix (dim x r) of the ideal P A: the matrix-unit columns of the
/// blocks selected by P.
inline Matrix ideal_basis(const AlgebraShape& s, const CentralProjection& p) {
  std::vector<int> idx;
  for (int i = 0; i < s.blocks(); ++i) {
    if (!p.mask[static_cast<std::size_t>(i)]) continue;
    int off = s.vec_offset(i);
    for (int j = 0; j < s.block_size(i) * s.block_size(i); ++j) idx.push_back(off + j);
  }
  Matrix b = Matrix::Zero(s.dim(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) b(idx[j], static_cast<Eigen::Index>(j)) = 1.0;
  return b;
}

/// Compatibility of the kernel projections with the action, plus the
/// restricted-isomorphism condition, over the supplied pairs.
inline CheckReport projection_compatibility_check(
    const EndoAction& action, const std::vector<std::pair<GroupElement, GroupElement>>& pairs,
    double tol) {
  CheckReport report;
  const AlgebraShape& s = action.shape();
  for (const auto& [x, y] : pairs) {
    CentralProjection pxy = kernel_projection(action, add(x, y), tol);
    CentralProjection py = kernel_projection(action, y, tol);
    AlgebraElement lhs = action.apply(x, pxy.to_element(s));
    AlgebraElement rhs = mul(action.unit_image(x), py.to_element(s));
    report.track("projection-compat", op_norm(sub(lhs, rhs)), tol, x, y);
  }
  // alpha_x restricted to P_x A: full rank, and onto the range of alpha_x.
  for (const auto& [x, y] : pairs) {
    for (const GroupElement* g : {&x, &y}) {
      CentralProjection p = kernel_projection(action, *g, tol);
      Matrix b = ideal_basis(s, p);
      LinearMap e = action.at(*g);
      Matrix r = e.m * b;
      double smin = 1.0;
      if (r.cols() > 0) {
        Eigen::JacobiSVD<Matrix> svd(r);
        smin = svd.singularValues()(svd.singularValues().size() - 1);
      }
      bool onto = detail::numeric_rank(e.m, tol) == static_cast<int>(b.cols());
      report.track("restricted-iso", (smin > tol && onto) ? 0.0 : 1.0, 0.5, *g);
    }
  }
  return report;
}

/// Smallest restricted singular value of alpha_x on P_x A; positive iff the
/// linear system defining the transfer map has a unique solution.
inline double restricted_min_singular(const EndoAction& action, const GroupElement& x,
                                      double tol) {
  CentralProjection p = kernel_projection(action, x, tol);
  Matrix b = ideal_basis(action.shape(), p);
  if (b.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(action.at(x).m * b);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

/// Solves alpha_x(z) = alpha_x(1) a alpha_x(1) for z in P_x A, giving the
/// transfer map L_x.  Least squares with residual gating: a corner that is
/// not in the range of alpha_x means no transfer map exists.
inline LinearMap synthesize_transfer(const EndoAction& action, const GroupElement& x,
                                     double tol) {
  const AlgebraShape& s = action.shape();
  LinearMap e = action.at(x);
  AlgebraElement u = action.unit_image(x);
  LinearMap corner = LinearMap::left_mul(u).compose(LinearMap::right_mul(u));

  CentralProjection p = kernel_projection(action, x, tol);
  Matrix b = ideal_basis(s, p);
  if (b.cols() == 0) {
    double cnorm = matrix_op_norm(corner.m);
    if (cnorm > tol)
      fail(ErrorCode::NotInvertibleOnCorner,
           "alpha_" + x.str() + " vanishes but the corner does not");
    return LinearMap::zero(s);
  }

  Matrix restricted = e.m * b;
  Matrix w = restricted.completeOrthogonalDecomposition().solve(corner.m);
  double residual = matrix_op_norm(restricted * w - corner.m);
  if (residual > tol * std::max(1.0, matrix_op_norm(corner.m)))
    fail(ErrorCode::NotInvertibleOnCorner,
         "corner of alpha_" + x.str() + " is not in range, residual " +
             std::to_string(residual));
  return LinearMap(s, b * w);
}

/// Memoizing wrapper around synthesize_transfer: the transfer maps L_x and
/// the projections P_x = L_x(1) of a finely representable system.
class TransferAction {
 public:
  TransferAction(EndoAction action, double tol)
      : action_(std::move(action)), tol_(tol), cache_(std::make_shared<Cache>()) {}

  const EndoAction& action() const { return action_; }

  LinearMap map(const GroupElement& x) const { return entry(x).first; }
  CentralProjection projection(const GroupElement& x) const { return entry(x).second; }

  AlgebraElement apply(const GroupElement& x, const AlgebraElement& a) const {
    return map(x).apply(a);
  }

 private:
  struct Cache {
    std::mutex mu;
    std::map<GroupElement, std::pair<LinearMap, CentralProjection>> entries;
  };

  const std::pair<LinearMap, CentralProjection>& entry(const GroupElement& x) const {
    require_in_cone(x);
    std::scoped_lock lk(cache_->mu);
    auto it = cache_->entries.find(x);
    if (it == cache_->entries.end()) {
      LinearMap l = synthesize_transfer(action_, x, tol_);
      CentralProjection p = kernel_projection(action_, x, tol_);
      it = cache_->entries.emplace(x, std::make_pair(std::move(l), std::move(p))).first;
    }
    return it->second;
  }

  EndoAction action_;
  double tol_;
  std::shared_ptr<Cache> cache_;
};

enum class Verdict { FinelyRepresentable, NotFinelyRepresentable };

struct Witness {
  std::string check;
  std::optional<GroupElement> x;
  std::optional<GroupElement> y;
  double residual = 0;
  std::string detail;
};

/// A dynamical system together with its analysis: the action, the verdict,
/// and (iff finely representable) the synthesized transfer action.
struct DynamicalSystem {
  std::string name;
  AlgebraShape shape;
  int group_dim = 1;
  EndoAction action;
  std::optional<TransferAction> transfer;
  Verdict verdict = Verdict::NotFinelyRepresentable;
  std::optional<Witness> witness;
  CheckReport analysis;
  double tol = 1e-9;
  double drop_threshold = 1e-12;

  bool representable() const { return verdict == Verdict::FinelyRepresentable; }

  void require_representable() const {
    if (!representable())
      fail(ErrorCode::SystemNotRepresentable,
           name.empty() ? "system is not finely representable"
                        : name + " is not finely representable");
  }

  LinearMap alpha(const GroupElement& x) const { return action.at(x); }
  AlgebraElement alpha_apply(const GroupElement& x, const AlgebraElement& a) const {
    return action.apply(x, a);
  }
  AlgebraElement alpha_unit(const GroupElement& x) const { return action.unit_image(x); }

  LinearMap transfer_map(const GroupElement& x) const {
    require_representable();
    return transfer->map(x);
  }
  AlgebraElement transfer_apply(const GroupElement& x, const AlgebraElement& a) const {
    require_representable();
    return transfer->apply(x, a);
  }
  CentralProjection range_projection(const GroupElement& x) const {
    require_representable();
    return transfer->projection(x);
  }

  GroupElement zero() const { return GroupElement::zero(group_dim); }
};

using SystemPtr = std::shared_ptr<const DynamicalSystem>;

namespace detail {

inline std::vector<GroupElement> verdict_sample_points(const EndoAction& action,
                                                       const SampleSpec& spec,
                                                       Sampler& sampler) {
  std::vector<GroupElement> xs;
  auto push = [&](GroupElement g) {
    for (const auto& h : xs)
      if (h == g) return;
    xs.push_back(std::move(g));
  };
  const int k = action.group_dim();
  push(GroupElement::zero(k));
  if (k == 1) {
    push(GroupElement::scalar(1));
  } else {
    for (int i = 0; i < k; ++i) {
      GroupElement e = GroupElement::zero(k);
      e.coords[static_cast<std::size_t>(i)] = 1;
      push(std::move(e));
    }
  }
  for (int i = 0; i < spec.count; ++i) push(sampler.cone_element(k, spec.coord_max));
  return xs;
}

}  // namespace detail

/// Runs the fine-representability criterion: kernel projections, projection
/// compatibility, restricted isomorphisms and the hereditary range condition
/// on generators and sampled cone elements; on success synthesizes the
/// transfer action and re-validates the transfer axioms, non-degeneracy and
/// the composition law on sampled data.  The verdict carries the first
/// failing witness.
inline SystemPtr analyze_system(EndoAction action, const SampleSpec& spec, double tol = 1e-9,
                                double drop_threshold = 1e-12, std::string name = "") {
  auto sys = std::make_shared<DynamicalSystem>();
  sys->name = std::move(name);
  sys->shape = action.shape();
  sys->group_dim = action.group_dim();
  sys->action = action;
  sys->tol = tol;
  sys->drop_threshold = drop_threshold;

  Sampler sampler(spec.seed);
  const AlgebraShape& s = action.shape();
  CheckReport& report = sys->analysis;

  auto fail_with = [&](Witness w) {
    sys->verdict = Verdict::NotFinelyRepresentable;
    sys->witness = std::move(w);
    return sys;
  };

  std::vector<GroupElement> xs = detail::verdict_sample_points(action, spec, sampler);
  std::vector<std::pair<GroupElement, GroupElement>> pairs;
  for (int i = 0; i < spec.count; ++i)
    pairs.emplace_back(sampler.cone_element(sys->group_dim, spec.coord_max),
                       sampler.cone_element(sys->group_dim, spec.coord_max));

  // Condition 3): projections, restricted isomorphisms, hereditary ranges.
  std::map<GroupElement, CentralProjection> proj;
  std::map<GroupElement, AlgebraElement> units;
  for (const auto& x : xs) {
    AlgebraElement u = action.unit_image(x);
    units.emplace(x, u);
    if (!is_projection(u, tol))
      return fail_with({"unit-projection", x, std::nullopt, op_norm(sub(mul(u, u), u)),
                        "alpha_x(1) is not a projection"});
    report.track("unit-projection", op_norm(sub(mul(u, u), u)), tol, x);

    CentralProjection p = kernel_projection(action, x, tol);
    proj.emplace(x, p);

    if (!hereditary_check(action, x, tol))
      return fail_with({"hereditary", x, std::nullopt, 1.0,
                        "range of alpha_x is a proper subspace of the corner"});
    report.track("hereditary", 0.0, 0.5, x);
  }

  // Nonincreasing families along comparable sample points.
  for (const auto& x : xs)
    for (const auto& y : xs) {
      if (!(x <= y) || x == y) continue;
      const AlgebraElement &ux = units.at(x), &uy = units.at(y);
      double r = op_norm(sub(mul(ux, uy), uy));
      report.track("unit-nonincreasing", r, tol, x, y);
      if (r > tol)
        return fail_with({"unit-nonincreasing", x, y, r, "alpha_x(1) alpha_y(1) != alpha_y(1)"});
      if (!proj.at(y).leq(proj.at(x)))
        return fail_with({"projection-monotone", x, y, 1.0, "P_y is not below P_x"});
    }
  report.track("projection-monotone", 0.0, 0.5);

  // Compatibility alpha_x(P_{x+y}) = alpha_x(1) P_y and restricted iso.
  {
    CheckReport compat = projection_compatibility_check(action, pairs, tol);
    report.merge(compat);
    if (const CheckResult* f = compat.first_failure())
      return fail_with({f->name, f->x, f->y, f->residual, "projection compatibility failed"});
  }

  // Synthesize the transfer action.
  TransferAction transfer(action, tol);
  try {
    for (const auto& x : xs) transfer.map(x);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotInvertibleOnCorner)
      return fail_with({"transfer-synthesis", std::nullopt, std::nullopt, 0.0, e.what()});
    throw;
  }

  // Re-validate: transfer identities, non-degeneracy, composition law.
  for (int i = 0; i < spec.count; ++i) {
    const GroupElement& x = xs[static_cast<std::size_t>(i) % xs.size()];
    const auto& [px, py] = pairs[static_cast<std::size_t>(i)];
    AlgebraElement a = sampler.algebra_element(s);
    AlgebraElement b = sampler.algebra_element(s);
    LinearMap lx = transfer.map(x);

    AlgebraElement ux = units.at(x);
    report.track("transfer-module",
                 op_norm(sub(lx.apply(mul(action.apply(x, a), b)), mul(a, lx.apply(b)))), tol,
                 x);
    report.track("transfer-support",
                 std::max(op_norm(sub(lx.apply(a), lx.apply(mul(ux, a)))),
                          op_norm(sub(lx.apply(a), lx.apply(mul(a, ux))))),
                 tol, x);
    report.track("transfer-complete",
                 op_norm(sub(action.apply(x, lx.apply(a)), mul(mul(ux, a), ux))), tol, x);

    // Non-degeneracy: E_x = alpha_x o L_x is idempotent, fixes the range,
    // alpha_x o L_x o alpha_x = alpha_x and alpha_x(L_x(1)) = alpha_x(1).
    auto ex = [&](const AlgebraElement& c) { return action.apply(x, lx.apply(c)); };
    report.track("expectation-idempotent", op_norm(sub(ex(ex(a)), ex(a))), tol, x);
    report.track("expectation-range",
                 op_norm(sub(ex(action.apply(x, b)), action.apply(x, b))), tol, x);
    report.track("expectation-unit",
                 op_norm(sub(action.apply(x, lx.apply(AlgebraElement::unit(s))), ux)), tol, x);

    report.track("transfer-unit",
                 op_norm(sub(lx.apply(AlgebraElement::unit(s)),
                             transfer.projection(x).to_element(s))),
                 tol, x);

    // Composition law L_{x+y} = L_y o L_x on sampled pairs.
    GroupElement sum = add(px, py);
    AlgebraElement lhs = transfer.apply(sum, a);
    AlgebraElement rhs = transfer.apply(py, transfer.apply(px, a));
    report.track("transfer-composition", op_norm(sub(lhs, rhs)), tol, px, py);

    // Contractivity and positivity, consequences of completeness.
    double excess = std::max(0.0, op_norm(lx.apply(a)) - op_norm(a));
    report.track("transfer-contractive", excess, tol, x);
    AlgebraElement pos = lx.apply(mul(adjoint(a), a));
    report.track("transfer-positive", is_positive(pos, tol) ? 0.0 : 1.0, 0.5, x);
  }

  // Range identity L_x(A) = L_x(1) A.
  for (const auto& x : xs) {
    LinearMap lx = transfer.map(x);
    Matrix q1 = detail::orthonormal_span(lx.m, tol);
    Matrix q2 = detail::orthonormal_span(
        LinearMap::left_mul(transfer.projection(x).to_element(s)).m, tol);
    double r;
    if (q1.cols() != q2.cols())
      r = 1.0;
    else
      r = q1.cols() == 0 ? 0.0 : matrix_op_norm(q1 * q1.adjoint() - q2 * q2.adjoint());
    report.track("transfer-range", r, tol, x);
  }

  if (const CheckResult* f = report.first_failure())
    return fail_with({f->name, f->x, f->y, f->residual, "re-validation failed"});

  sys->verdict = Verdict::FinelyRepresentable;
  sys->transfer = std::move(transfer);
  return sys;
}

}  // namespace semicross
