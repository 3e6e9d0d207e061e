#include <catch2/catch_amalgamated.hpp>

#include "semicross/fixtures.hpp"
#include "semicross/norms.hpp"

using namespace semicross;

namespace {

const double kTol = 1e-9;

SystemPtr fixture(const std::string& name) { return make_fixture(name, SampleSpec{1, 64, 8}, kTol); }

GroupElement g1(std::int64_t v) { return GroupElement::scalar(v); }

L1Element normalized(L1Element a) {
  return scale(Complex(1.0 / std::max(1.0, a.l1_norm()), 0), a);
}

}  // namespace

TEST_CASE("degree-zero power norms") {
  SystemPtr s2 = fixture("S2");

  // u u* is a projection, so every power norm is exactly one.
  L1Element us = u(s2, g1(1));
  for (int k : {1, 2, 5, 10}) CHECK(e0_power_norm(us, k) == 1.0);

  // (u + u*)^2 = 1; all power norms are one.
  L1Element a = add(us, u_star(s2, g1(1)));
  for (int k : {1, 3, 7}) CHECK(e0_power_norm(a, k) == 1.0);

  CHECK(e0_power_norm(L1Element::zero(s2), 4) == 0.0);
  CHECK_THROWS_AS(e0_power_norm(us, 0), Error);
}

TEST_CASE("certificate for a partial isometry") {
  SystemPtr s2 = fixture("S2");
  NormCertificate cert = cstar_norm_bounds(u(s2, g1(1)), 10);
  REQUIRE(cert.k.size() == 10);
  for (double s : cert.lower) CHECK(s == 1.0);
  CHECK(cert.upper.back() <= 1.08);
  CHECK(cert.lo == 1.0);
  CHECK(cert.hi >= 1.0 - 1e-12);
}

TEST_CASE("certificate for the self-adjoint unitary") {
  SystemPtr s2 = fixture("S2");
  L1Element a = add(u(s2, g1(1)), u_star(s2, g1(1)));
  NormCertificate cert = cstar_norm_bounds(a, 8);
  CHECK(cert.lo >= 1.0 - kTol);
  CHECK(cert.hi <= 1.08);
}

TEST_CASE("certificate brackets the known norm in the automorphism fixture") {
  SystemPtr saut = fixture("SAut");
  L1Element a = add(unit_element(saut), u(saut, g1(1)));
  NormCertificate cert = cstar_norm_bounds(a, 12);
  // The element 1 + u with u unitary has enveloping norm 2.
  CHECK(cert.lower.back() >= 1.9);
  CHECK(cert.lo <= 2.0 + kTol);
  CHECK(cert.hi >= 2.0 - kTol);
  // f-counts grow linearly for a support-one element.
  for (std::size_t i = 0; i < cert.f_sizes.size(); ++i) CHECK(cert.f_sizes[i] == i + 1);
}

TEST_CASE("degenerate certificates") {
  SystemPtr s2 = fixture("S2");
  NormCertificate zero = cstar_norm_bounds(L1Element::zero(s2), 4);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi == 0.0);

  // Elements supported at zero collapse to the plain operator norm.
  AlgebraElement c = AlgebraElement::zero(s2->shape);
  c.block(0)(0, 0) = 0.75;
  c.block(1)(0, 0) = Complex(0, -0.5);
  L1Element a = delta(s2, c, g1(0));
  NormCertificate cert = cstar_norm_bounds(a, 5);
  CHECK_THAT(cert.lo, Catch::Matchers::WithinAbs(op_norm(c), 1e-12));
  CHECK_THAT(cert.hi, Catch::Matchers::WithinAbs(op_norm(c), 1e-12));
}

TEST_CASE("sandwich property") {
  Sampler sampler(20);
  for (const char* name : {"S2", "SAut", "SMx"}) {
    SystemPtr sys = fixture(name);
    for (int i = 0; i < 10; ++i) {
      L1Element a = normalized(random_l1_element(sys, sampler, 2, 3));
      NormCertificate cert = cstar_norm_bounds(a, 6);
      for (double s : cert.lower)
        for (double t : cert.upper) {
          INFO(name);
          CHECK(s <= t + kTol);
        }
    }
  }
}

TEST_CASE("coefficient norms sit below the upper bound") {
  Sampler sampler(21);
  for (const char* name : {"S2", "SAut", "SMx"}) {
    SystemPtr sys = fixture(name);
    for (int i = 0; i < 20; ++i) {
      L1Element a = random_l1_element(sys, sampler, 3, 4);
      NormCertificate cert = cstar_norm_bounds(a, 5);
      for (const auto& [g, c] : a.coeffs()) {
        INFO(name);
        CHECK(op_norm(c) <= cert.hi + kTol);
      }
    }
  }
}

TEST_CASE("certificates of an element and its adjoint overlap") {
  Sampler sampler(22);
  SystemPtr s2 = fixture("S2");
  for (int i = 0; i < 10; ++i) {
    L1Element a = random_l1_element(s2, sampler, 2, 3);
    NormCertificate ca = cstar_norm_bounds(a, 5);
    NormCertificate cs = cstar_norm_bounds(star(a), 5);
    CHECK(ca.lo <= cs.hi + kTol);
    CHECK(cs.lo <= ca.hi + kTol);
  }
}

TEST_CASE("support blowup guard") {
  SystemPtr saut = fixture("SAut");
  L1Element a = add(unit_element(saut), u(saut, g1(1)));
  try {
    cstar_norm_bounds(a, 12, 4);
    FAIL("expected a support blowup");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SupportBlowup);
  }
}

TEST_CASE("gauge twist") {
  SystemPtr s2 = fixture("S2");
  Sampler sampler(23);

  L1Element a = random_l1_element(s2, sampler, 3, 4);
  CHECK(l1_distance(gauge_twist(a, {0.0}), a) == 0.0);

  // A half-turn phase is a full turn on a degree-two coefficient.
  const double two_pi = 6.283185307179586476925287;
  SystemPtr saut = fixture("SAut");
  L1Element b = delta(saut, Sampler(99).algebra_element(saut->shape), g1(2),
                      ConstraintMode::Project);
  CHECK_FALSE(b.empty());
  CHECK(l1_distance(gauge_twist(b, {two_pi / 2.0}), b) <= 1e-12);

  // Quarter turn multiplies the degree-one coefficient by i.
  L1Element us = u(s2, g1(1));
  L1Element twisted = gauge_twist(us, {two_pi / 4.0});
  AlgebraElement expected = scale(Complex(0, 1), us.coeff(g1(1)));
  CHECK(op_norm(sub(twisted.coeff(g1(1)), expected)) <= 1e-15);

  // The twist is an l1-isometric *-automorphism on samples.
  for (int i = 0; i < 10; ++i) {
    std::vector<double> theta{sampler.uniform_real(0, two_pi)};
    L1Element x = random_l1_element(s2, sampler, 2, 3);
    L1Element y = random_l1_element(s2, sampler, 2, 3);
    CHECK(std::abs(gauge_twist(x, theta).l1_norm() - x.l1_norm()) <= 1e-12);
    CHECK(l1_distance(gauge_twist(mul(x, y), theta),
                      mul(gauge_twist(x, theta), gauge_twist(y, theta))) <= 1e-12);
    CHECK(l1_distance(gauge_twist(star(x), theta), star(gauge_twist(x, theta))) <= 1e-12);
  }
}

TEST_CASE("power norms are gauge invariant") {
  Sampler sampler(24);
  for (const char* name : {"S2", "SAut"}) {
    SystemPtr sys = fixture(name);
    for (int i = 0; i < 16; ++i) {
      L1Element a = normalized(random_l1_element(sys, sampler, 2, 3));
      std::vector<double> theta{sampler.uniform_real(0, 6.28)};
      INFO(name);
      CHECK(std::abs(e0_power_norm(a, 2) - e0_power_norm(gauge_twist(a, theta), 2)) <= 1e-12);
    }
  }
}

TEST_CASE("zero tests") {
  SystemPtr s2 = fixture("S2");
  L1Element us = u(s2, g1(1));

  ZeroTest forced = zero_test(sub(us, us), kTol);
  CHECK(forced.is_zero);
  CHECK_FALSE(forced.witness.has_value());

  ZeroTest nonzero = zero_test(us, kTol);
  CHECK_FALSE(nonzero.is_zero);
  REQUIRE(nonzero.witness.has_value());
  CHECK(*nonzero.witness == g1(1));

  // A coefficient below tolerance (but above the pruning threshold, so it is
  // really stored) counts as zero on both routes.
  AlgebraElement tiny = scale(Complex(kTol / 2, 0), AlgebraElement::unit(s2->shape));
  L1Element small = delta(s2, tiny, g1(0));
  CHECK(small.coeffs().size() == 1);
  CHECK(zero_test(small, kTol).is_zero);

  Sampler sampler(25);
  for (int i = 0; i < 50; ++i) {
    L1Element a = random_l1_element(s2, sampler, 2, 3);
    ZeroTest t = zero_test(a, kTol);
    CHECK(t.is_zero == a.empty());
  }
}
