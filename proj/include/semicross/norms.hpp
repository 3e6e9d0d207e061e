#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "semicross/l1x.hpp"

namespace semicross {

namespace detail {

/// a^n by repeated squaring, with pruning after every product and a guard on
/// the support size (supports of powers grow additively).
inline L1Element l1_pow(const L1Element& a, std::int64_t n, std::size_t support_bound) {
  L1Element result = unit_element(a.system());
  L1Element base = a;
  while (n > 0) {
    if (n & 1) {
      result = mul(result, base);
      if (result.coeffs().size() > support_bound)
        fail(ErrorCode::SupportBlowup,
             "support grew past " + std::to_string(support_bound) + " coefficients");
    }
    n >>= 1;
    if (n > 0) {
      base = mul(base, base);
      if (base.coeffs().size() > support_bound)
        fail(ErrorCode::SupportBlowup,
             "support grew past " + std::to_string(support_bound) + " coefficients");
    }
  }
  return result;
}

}  // namespace detail

/// || coefficient at 0 of (a a*)^{2k} ||; the quantity whose 4k-th roots
/// converge to the enveloping C*-norm of a.
inline double e0_power_norm(const L1Element& a, int k, std::size_t support_bound = 4096) {
  if (k < 1) fail(ErrorCode::ConfigError, "power index must be positive");
  L1Element q = mul(a, star(a));
  L1Element p = detail::l1_pow(q, 2l * k, support_bound);
  return op_norm(p.coeff(GroupElement::zero(a.system()->group_dim)));
}

/// Two-sided certificate for the enveloping C*-norm of a finitely supported
/// element.  For each k,
///   s_k = ||E0[(aa*)^{2k}]||^{1/4k}   is a lower bound, and
///   t_k = (2 m_k + 1)^{1/4k} s_k      is an upper bound,
/// where m_k counts the strictly positive support of the self-adjoint power
/// (aa*)^k, i.e. the number of generator degrees in its standard form.  Both
/// follow from compressing (aa*)^{2k} to degree zero and from the C*-algebra
/// inequality ||sum d_i||^2 <= m ||sum d_i d_i*||.
struct NormCertificate {
  std::vector<int> k;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::size_t> f_sizes;
  double lo = 0;
  double hi = 0;
};

inline NormCertificate cstar_norm_bounds(const L1Element& a, int k_max,
                                         std::size_t support_bound = 4096) {
  if (k_max < 1) fail(ErrorCode::ConfigError, "k_max must be positive");
  NormCertificate cert;
  const GroupElement origin = GroupElement::zero(a.system()->group_dim);

  L1Element q = mul(a, star(a));
  for (int k = 1; k <= k_max; ++k) {
    L1Element pk = detail::l1_pow(q, k, support_bound);
    L1Element p2k = mul(pk, pk);
    if (p2k.coeffs().size() > support_bound)
      fail(ErrorCode::SupportBlowup, "support of the squared power too large");

    std::size_t m = 0;
    for (const auto& [g, c] : pk.coeffs())
      if (strictly_positive(g)) ++m;

    double e0 = op_norm(p2k.coeff(origin));
    double s = std::pow(e0, 1.0 / (4.0 * k));
    double t = std::pow(2.0 * static_cast<double>(m) + 1.0, 1.0 / (4.0 * k)) * s;

    cert.k.push_back(k);
    cert.lower.push_back(s);
    cert.upper.push_back(t);
    cert.f_sizes.push_back(m);
  }

  cert.lo = *std::max_element(cert.lower.begin(), cert.lower.end());
  cert.hi = *std::min_element(cert.upper.begin(), cert.upper.end());
  return cert;
}

/// Dual-group action: multiplies the degree-g coefficient by exp(i<theta,g>).
/// An isometric *-automorphism of the finitely supported algebra.
inline L1Element gauge_twist(const L1Element& a, const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != a.system()->group_dim)
    fail(ErrorCode::DimensionMismatch, "phase vector length");
  L1Element r = L1Element::zero(a.system());
  for (const auto& [g, c] : a.coeffs()) {
    double phase = 0;
    for (int i = 0; i < g.dim(); ++i)
      phase += theta[static_cast<std::size_t>(i)] * static_cast<double>(g.coords[static_cast<std::size_t>(i)]);
    r.accumulate(g, scale(std::polar(1.0, phase), c));
  }
  r.canonicalize();
  return r;
}

struct ZeroTest {
  bool is_zero = false;
  std::optional<GroupElement> witness;
  double max_coeff_norm = 0;
  double quad_norm = 0;
};

/// Vanishing test through two equivalent routes: every coefficient below tol,
/// and ||E0(a* a)|| below tol^2 (the quadratic scaling keeps the two routes
/// consistent).  A disagreement cannot happen mathematically and is raised as
/// an internal-consistency failure.
inline ZeroTest zero_test(const L1Element& a, double tol) {
  ZeroTest result;
  std::optional<GroupElement> witness;
  for (const auto& [g, c] : a.coeffs()) {
    double n = op_norm(c);
    if (n > result.max_coeff_norm) result.max_coeff_norm = n;
    if (n > tol && !witness) witness = g;
  }
  bool zero_by_coeffs = !witness.has_value();

  L1Element q = mul(star(a), a);
  result.quad_norm = op_norm(q.coeff(GroupElement::zero(a.system()->group_dim)));
  bool zero_by_quad = result.quad_norm <= tol * tol;

  if (zero_by_coeffs != zero_by_quad)
    fail(ErrorCode::InconsistentEquivalence,
         "coefficient test says " + std::string(zero_by_coeffs ? "zero" : "nonzero") +
             " but the quadratic test says " + std::string(zero_by_quad ? "zero" : "nonzero"));

  result.is_zero = zero_by_coeffs;
  result.witness = witness;
  return result;
}

}  // namespace semicross
