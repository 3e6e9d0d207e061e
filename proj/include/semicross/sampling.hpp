#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "semicross/algebra.hpp"
#include "semicross/ogroup.hpp"

namespace semicross {

/// Deterministic sampling plan: seed plus counts, so that every verdict and
/// property run is reproducible from its config.
struct SampleSpec {
  std::uint64_t seed = 1;
  int count = 64;
  std::int64_t coord_max = 8;
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> d(lo, hi);
    return d(rng_);
  }

  double uniform_real(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng_);
  }

  Complex gaussian() {
    std::normal_distribution<double> d(0.0, 1.0);
    return {d(rng_), d(rng_)};
  }

  /// Cone element with coordinates in [0, coord_max].
  GroupElement cone_element(int k, std::int64_t coord_max) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(k));
    for (auto& v : c) v = uniform_int(0, coord_max);
    return GroupElement(std::move(c));
  }

  /// Arbitrary element with coordinates in [-radius, radius].
  GroupElement signed_element(int k, std::int64_t radius) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(k));
    for (auto& v : c) v = uniform_int(-radius, radius);
    return GroupElement(std::move(c));
  }

  AlgebraElement algebra_element(const AlgebraShape& s) {
    AlgebraElement a = AlgebraElement::zero(s);
    for (int i = 0; i < s.blocks(); ++i) {
      int n = s.block_size(i);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a.block(i)(r, c) = gaussian();
    }
    return a;
  }

  AlgebraElement hermitian_element(const AlgebraShape& s) {
    AlgebraElement a = algebra_element(s);
    return scale(0.5, add(a, adjoint(a)));
  }

  AlgebraElement positive_element(const AlgebraShape& s) {
    AlgebraElement a = algebra_element(s);
    return mul(adjoint(a), a);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace semicross
