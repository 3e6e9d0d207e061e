#pragma once

#include <functional>

#include "semicross/algebra.hpp"

namespace semicross {

/// Linear map on a block algebra, stored as a dim x dim matrix acting on
/// vectorized elements.
struct LinearMap {
  AlgebraShape shape;
  Matrix m;

  LinearMap() = default;
  LinearMap(AlgebraShape s, Matrix mat) : shape(std::move(s)), m(std::move(mat)) {
    if (m.rows() != shape.dim() || m.cols() != shape.dim())
      fail(ErrorCode::DimensionMismatch, "linear map must be dim x dim");
  }

  static LinearMap identity(const AlgebraShape& s) {
    return {s, Matrix::Identity(s.dim(), s.dim())};
  }
  static LinearMap zero(const AlgebraShape& s) { return {s, Matrix::Zero(s.dim(), s.dim())}; }

  /// Column j is vec(f(e_j)) over the matrix-unit basis.
  static LinearMap from_function(const AlgebraShape& s,
                                 const std::function<AlgebraElement(const AlgebraElement&)>& f) {
    Matrix mat(s.dim(), s.dim());
    for (int j = 0; j < s.dim(); ++j) mat.col(j) = vec(f(basis_unit(s, j)));
    return {s, std::move(mat)};
  }

  static LinearMap left_mul(const AlgebraElement& a) {
    return from_function(a.shape, [&](const AlgebraElement& e) { return mul(a, e); });
  }
  static LinearMap right_mul(const AlgebraElement& a) {
    return from_function(a.shape, [&](const AlgebraElement& e) { return mul(e, a); });
  }

  AlgebraElement apply(const AlgebraElement& a) const {
    if (a.shape != shape) fail(ErrorCode::ShapeMismatch, "apply: element shape");
    return unvec(shape, m * vec(a));
  }

  /// this after inner: (this o inner)(a) = this(inner(a)).
  LinearMap compose(const LinearMap& inner) const {
    if (shape != inner.shape) fail(ErrorCode::ShapeMismatch, "compose: shapes");
    return {shape, m * inner.m};
  }

  LinearMap pow(std::int64_t n) const {
    if (n < 0) fail(ErrorCode::NotInCone, "negative power of a linear map");
    LinearMap r = identity(shape);
    LinearMap base = *this;
    while (n > 0) {
      if (n & 1) r = r.compose(base);
      base = base.compose(base);
      n >>= 1;
    }
    return r;
  }
};

/// Spectral-norm distance between two maps (on the vectorized basis).
inline double map_distance(const LinearMap& a, const LinearMap& b) {
  if (a.shape != b.shape) fail(ErrorCode::ShapeMismatch, "map_distance: shapes");
  Matrix d = a.m - b.m;
  if (d.norm() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(d);
  return svd.singularValues()(0);
}

inline double matrix_op_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace semicross
