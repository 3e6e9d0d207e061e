#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "semicross/errors.hpp"

namespace semicross {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Shape of a finite-dimensional C*-algebra M_{n1} (+) ... (+) M_{nm}.
struct AlgebraShape {
  std::vector<int> block_sizes;

  AlgebraShape() = default;
  explicit AlgebraShape(std::vector<int> sizes) : block_sizes(std::move(sizes)) {
    if (block_sizes.empty()) fail(ErrorCode::ShapeMismatch, "shape needs at least one block");
    for (int n : block_sizes)
      if (n < 1) fail(ErrorCode::ShapeMismatch, "block sizes must be positive");
  }

  /// Commutative algebra C^n as n one-by-one blocks.
  static AlgebraShape points(int n) {
    return AlgebraShape(std::vector<int>(static_cast<std::size_t>(n), 1));
  }

  int blocks() const { return static_cast<int>(block_sizes.size()); }
  int block_size(int i) const { return block_sizes[static_cast<std::size_t>(i)]; }

  /// Linear dimension sum n_i^2 (the length of vectorized elements).
  int dim() const {
    int d = 0;
    for (int n : block_sizes) d += n * n;
    return d;
  }

  /// Offset of block i inside the vectorization.
  int vec_offset(int i) const {
    int o = 0;
    for (int j = 0; j < i; ++j) o += block_size(j) * block_size(j);
    return o;
  }

  bool operator==(const AlgebraShape& o) const { return block_sizes == o.block_sizes; }
  bool operator!=(const AlgebraShape& o) const { return !(*this == o); }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < block_sizes.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(block_sizes[i]);
    }
    return s + ")";
  }
};

/// Element of a block algebra: one complex n_i x n_i matrix per block.
struct AlgebraElement {
  AlgebraShape shape;
  std::vector<Matrix> blocks;

  AlgebraElement() = default;
  AlgebraElement(AlgebraShape s, std::vector<Matrix> b)
      : shape(std::move(s)), blocks(std::move(b)) {}

  static AlgebraElement zero(const AlgebraShape& s) {
    std::vector<Matrix> b;
    b.reserve(static_cast<std::size_t>(s.blocks()));
    for (int i = 0; i < s.blocks(); ++i)
      b.push_back(Matrix::Zero(s.block_size(i), s.block_size(i)));
    return {s, std::move(b)};
  }

  static AlgebraElement unit(const AlgebraShape& s) {
    std::vector<Matrix> b;
    b.reserve(static_cast<std::size_t>(s.blocks()));
    for (int i = 0; i < s.blocks(); ++i)
      b.push_back(Matrix::Identity(s.block_size(i), s.block_size(i)));
    return {s, std::move(b)};
  }

  const Matrix& block(int i) const { return blocks[static_cast<std::size_t>(i)]; }
  Matrix& block(int i) { return blocks[static_cast<std::size_t>(i)]; }
};

inline void require_same_shape(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.shape != b.shape)
    fail(ErrorCode::ShapeMismatch, "shapes " + a.shape.str() + " vs " + b.shape.str());
}

inline AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_shape(a, b);
  AlgebraElement r = a;
  for (int i = 0; i < a.shape.blocks(); ++i) r.block(i) += b.block(i);
  return r;
}

inline AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_shape(a, b);
  AlgebraElement r = a;
  for (int i = 0; i < a.shape.blocks(); ++i) r.block(i) -= b.block(i);
  return r;
}

inline AlgebraElement scale(Complex z, const AlgebraElement& a) {
  AlgebraElement r = a;
  for (auto& m : r.blocks) m *= z;
  return r;
}

inline AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_shape(a, b);
  AlgebraElement r = a;
  for (int i = 0; i < a.shape.blocks(); ++i) r.block(i) = a.block(i) * b.block(i);
  return r;
}

inline AlgebraElement adjoint(const AlgebraElement& a) {
  AlgebraElement r = a;
  for (int i = 0; i < a.shape.blocks(); ++i) r.block(i) = a.block(i).adjoint();
  return r;
}

inline AlgebraElement lincomb(const std::vector<Complex>& coeffs,
                              const std::vector<AlgebraElement>& elems) {
  if (coeffs.size() != elems.size())
    fail(ErrorCode::ShapeMismatch, "lincomb length mismatch");
  if (elems.empty()) fail(ErrorCode::ShapeMismatch, "lincomb of nothing");
  AlgebraElement r = AlgebraElement::zero(elems.front().shape);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    require_same_shape(r, elems[i]);
    for (int j = 0; j < r.shape.blocks(); ++j) r.block(j) += coeffs[i] * elems[i].block(j);
  }
  return r;
}

inline Complex trace(const AlgebraElement& a) {
  Complex t = 0;
  for (const auto& m : a.blocks) t += m.trace();
  return t;
}

/// C*-norm: the largest singular value over all blocks.
inline double op_norm(const AlgebraElement& a) {
  double n = 0;
  for (const auto& m : a.blocks) {
    if (m.rows() == 1) {
      n = std::max(n, std::abs(m(0, 0)));
    } else {
      Eigen::JacobiSVD<Matrix> svd(m);
      n = std::max(n, svd.singularValues()(0));
    }
  }
  return n;
}

inline double frob_norm(const AlgebraElement& a) {
  double s = 0;
  for (const auto& m : a.blocks) s += m.squaredNorm();
  return std::sqrt(s);
}

inline bool is_zero(const AlgebraElement& a, double tol) { return op_norm(a) <= tol; }

inline bool is_hermitian(const AlgebraElement& a, double tol) {
  return op_norm(sub(a, adjoint(a))) <= tol;
}

/// Positive iff self-adjoint with all block eigenvalues >= -tol.
inline bool is_positive(const AlgebraElement& a, double tol) {
  if (!is_hermitian(a, tol)) return false;
  for (const auto& m : a.blocks) {
    Matrix h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -tol) return false;
  }
  return true;
}

inline bool is_projection(const AlgebraElement& a, double tol) {
  return op_norm(sub(mul(a, a), a)) <= tol && is_hermitian(a, tol);
}

// --- vectorization -------------------------------------------------------
//
// vec lists the blocks in order, each block in row-major order.  This is the
// basis every linear map on the algebra is expressed in, and it matches the
// JSON wire format for elements.

inline Vector vec(const AlgebraElement& a) {
  Vector v(a.shape.dim());
  int o = 0;
  for (int i = 0; i < a.shape.blocks(); ++i) {
    int n = a.shape.block_size(i);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) v(o + r * n + c) = a.block(i)(r, c);
    o += n * n;
  }
  return v;
}

inline AlgebraElement unvec(const AlgebraShape& s, const Vector& v) {
  if (v.size() != s.dim()) fail(ErrorCode::DimensionMismatch, "unvec length");
  AlgebraElement a = AlgebraElement::zero(s);
  int o = 0;
  for (int i = 0; i < s.blocks(); ++i) {
    int n = s.block_size(i);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a.block(i)(r, c) = v(o + r * n + c);
    o += n * n;
  }
  return a;
}

/// Matrix unit sitting at vec index `idx` (the standard basis of the algebra).
inline AlgebraElement basis_unit(const AlgebraShape& s, int idx) {
  AlgebraElement a = AlgebraElement::zero(s);
  Vector v = Vector::Zero(s.dim());
  v(idx) = Complex(1, 0);
  return unvec(s, v);
}

/// Block index owning vec coordinate `idx`.
inline int block_of_index(const AlgebraShape& s, int idx) {
  int o = 0;
  for (int i = 0; i < s.blocks(); ++i) {
    int sz = s.block_size(i) * s.block_size(i);
    if (idx < o + sz) return i;
    o += sz;
  }
  fail(ErrorCode::DimensionMismatch, "vec index out of range");
}

// --- central projections --------------------------------------------------

/// Central orthogonal projection = indicator of a set of blocks.
struct CentralProjection {
  std::vector<bool> mask;

  CentralProjection() = default;
  explicit CentralProjection(std::vector<bool> m) : mask(std::move(m)) {}

  static CentralProjection full(const AlgebraShape& s) {
    return CentralProjection(std::vector<bool>(static_cast<std::size_t>(s.blocks()), true));
  }
  static CentralProjection none(const AlgebraShape& s) {
    return CentralProjection(std::vector<bool>(static_cast<std::size_t>(s.blocks()), false));
  }

  bool operator==(const CentralProjection& o) const { return mask == o.mask; }
  bool operator!=(const CentralProjection& o) const { return !(*this == o); }

  CentralProjection complement() const {
    CentralProjection c = *this;
    for (auto&& b : c.mask) b = !b;
    return c;
  }

  /// Projection order: this <= other iff every block of this is in other.
  bool leq(const CentralProjection& o) const {
    if (mask.size() != o.mask.size()) fail(ErrorCode::ShapeMismatch, "mask lengths");
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i] && !o.mask[i]) return false;
    return true;
  }

  AlgebraElement to_element(const AlgebraShape& s) const {
    if (static_cast<int>(mask.size()) != s.blocks())
      fail(ErrorCode::ShapeMismatch, "mask does not match shape");
    AlgebraElement a = AlgebraElement::zero(s);
    for (int i = 0; i < s.blocks(); ++i)
      if (mask[static_cast<std::size_t>(i)])
        a.block(i) = Matrix::Identity(s.block_size(i), s.block_size(i));
    return a;
  }

  int dim_span(const AlgebraShape& s) const {
    int d = 0;
    for (int i = 0; i < s.blocks(); ++i)
      if (mask[static_cast<std::size_t>(i)]) d += s.block_size(i) * s.block_size(i);
    return d;
  }
};

namespace detail {

/// Rank of the column span with a relative singular-value cutoff.
inline int numeric_rank(const Matrix& m, double tol) {
  if (m.cols() == 0 || m.rows() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0) return 0;
  double cut = std::max(tol, tol * sv(0));
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

}  // namespace detail

/// Block mask of the smallest block-sum ideal containing span(S), obtained by
/// closing span(S) under left/right multiplication by matrix units.  Raises
/// NotAnIdeal when the numeric closure fails to fill the touched blocks
/// (impossible exactly; signals degraded input).
namespace detail {

/// Orthonormal basis of the column span (columns of the result).
inline Matrix orthonormal_span(const Matrix& m, double tol) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0) return Matrix(m.rows(), 0);
  double cut = std::max(tol, tol * sv(0));
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace detail

inline CentralProjection ideal_to_central_projection(const AlgebraShape& shape,
                                                     const std::vector<AlgebraElement>& span,
                                                     double tol) {
  if (span.empty()) return CentralProjection::none(shape);
  const int dim = shape.dim();

  std::vector<AlgebraElement> units;
  units.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) units.push_back(basis_unit(shape, i));

  Matrix basis(dim, static_cast<Eigen::Index>(span.size()));
  for (std::size_t j = 0; j < span.size(); ++j) {
    if (span[j].shape != shape) fail(ErrorCode::ShapeMismatch, "span element shape");
    basis.col(static_cast<Eigen::Index>(j)) = vec(span[j]);
  }
  basis = detail::orthonormal_span(basis, tol);

  // Close under two-sided multiplication by matrix units.
  for (;;) {
    Matrix grown(dim, basis.cols() * (1 + 2 * dim));
    grown.leftCols(basis.cols()) = basis;
    Eigen::Index col = basis.cols();
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
      AlgebraElement e = unvec(shape, basis.col(j));
      for (const auto& u : units) {
        grown.col(col++) = vec(mul(u, e));
        grown.col(col++) = vec(mul(e, u));
      }
    }
    Matrix next = detail::orthonormal_span(grown, tol);
    if (next.cols() == basis.cols()) break;
    basis = std::move(next);
  }

  CentralProjection p = CentralProjection::none(shape);
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    AlgebraElement e = unvec(shape, basis.col(j));
    for (int i = 0; i < shape.blocks(); ++i)
      if (e.block(i).norm() > tol) p.mask[static_cast<std::size_t>(i)] = true;
  }

  if (static_cast<int>(basis.cols()) != p.dim_span(shape))
    fail(ErrorCode::NotAnIdeal,
         "closure has rank " + std::to_string(basis.cols()) + " but touched blocks span " +
             std::to_string(p.dim_span(shape)));
  return p;
}

}  // namespace semicross
