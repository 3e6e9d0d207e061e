#include <catch2/catch_amalgamated.hpp>

#include "semicross/fixtures.hpp"
#include "semicross/norms.hpp"
#include "semicross/regrep.hpp"

using namespace semicross;

namespace {

const double kTol = 1e-9;

SystemPtr fixture(const std::string& name) { return make_fixture(name, SampleSpec{1, 64, 8}, kTol); }

GroupElement g1(std::int64_t v) { return GroupElement::scalar(v); }

}  // namespace

TEST_CASE("state functionals") {
  AlgebraShape s({1, 1});
  StateFunctional f = StateFunctional::trace_state(s);
  CHECK(f.faithful);
  CHECK_THAT(f(AlgebraElement::unit(s)).real(), Catch::Matchers::WithinAbs(1.0, 1e-15));
  AlgebraElement a = AlgebraElement::zero(s);
  a.block(0)(0, 0) = 3.0;
  a.block(1)(0, 0) = 1.0;
  CHECK_THAT(f(a).real(), Catch::Matchers::WithinAbs(2.0, 1e-15));

  // Densities are normalized; non-positive ones are rejected.
  AlgebraElement rho = AlgebraElement::zero(s);
  rho.block(0)(0, 0) = 2.0;
  rho.block(1)(0, 0) = 0.0;
  StateFunctional g = StateFunctional::from_density(rho, kTol);
  CHECK_FALSE(g.faithful);
  CHECK_THAT(trace(g.density).real(), Catch::Matchers::WithinAbs(1.0, 1e-15));

  AlgebraElement bad = AlgebraElement::zero(s);
  bad.block(0)(0, 0) = -1.0;
  CHECK_THROWS_AS(StateFunctional::from_density(bad, kTol), Error);

  // Positivity of the functional on random squares.
  SystemPtr s2 = fixture("S2");
  Sampler sampler(31);
  for (int i = 0; i < 30; ++i) {
    AlgebraElement x = sampler.algebra_element(s2->shape);
    CHECK(f(mul(adjoint(x), x)).real() >= -kTol);
  }
}

TEST_CASE("degree space dimensions in the shift fixture") {
  SystemPtr s2 = fixture("S2");
  StateFunctional f = StateFunctional::trace_state(s2->shape);

  DegreeSpace d0 = gns_space(*s2, f, g1(0));
  CHECK(d0.dim == 2);
  DegreeSpace d1 = gns_space(*s2, f, g1(1));
  CHECK(d1.dim == 1);
  DegreeSpace dm1 = gns_space(*s2, f, g1(-1));
  CHECK(dm1.dim == 1);
  CHECK(gns_space(*s2, f, g1(2)).dim == 0);
  CHECK(gns_space(*s2, f, g1(-2)).dim == 0);

  // Whitening: to_coords * lift = identity on the retained space.
  Matrix id = d0.to_coords * d0.lift;
  CHECK((id - Matrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("automorphism fixture keeps full degree spaces") {
  SystemPtr saut = fixture("SAut");
  StateFunctional f = StateFunctional::trace_state(saut->shape);
  for (std::int64_t g = -3; g <= 3; ++g) CHECK(gns_space(*saut, f, g1(g)).dim == 2);
}

TEST_CASE("window assembly") {
  SystemPtr s2 = fixture("S2");
  TruncatedRep rep(s2, StateFunctional::trace_state(s2->shape), 3);
  CHECK(rep.total_dim() == 4);  // 2 + 1 + 1
  CHECK(rep.degree_dim(g1(0)) == 2);
  CHECK(rep.degree_dim(g1(1)) == 1);
  CHECK(rep.degree_dim(g1(-1)) == 1);
  CHECK(rep.degree_dim(g1(2)) == 0);

  // U_0 is the identity; pi(1) is the identity.
  CHECK((rep.u_op(g1(0)) - Matrix::Identity(4, 4)).norm() <= 1e-12);
  CHECK((rep.pi(AlgebraElement::unit(s2->shape)) - Matrix::Identity(4, 4)).norm() <= 1e-12);

  CHECK_THROWS_AS(TruncatedRep(s2, StateFunctional::trace_state(s2->shape), -1), Error);
  SystemPtr sneg = make_fixture("SNeg");
  CHECK_THROWS_AS(TruncatedRep(sneg, StateFunctional::trace_state(sneg->shape), 3), Error);
}

TEST_CASE("covariance relations hold on the interior") {
  Sampler sampler(32);
  for (const char* name : {"S2", "SAut", "SMx"}) {
    SystemPtr sys = fixture(name);
    TruncatedRep rep(sys, StateFunctional::trace_state(sys->shape), 12);
    std::vector<GroupElement> xs{g1(0), g1(1), g1(2)};
    std::vector<std::pair<GroupElement, GroupElement>> pairs{{g1(1), g1(1)}, {g1(1), g1(2)},
                                                             {g1(2), g1(2)}};
    CheckReport r = covariance_check(rep, xs, pairs, sampler, 8, 6, kTol);
    INFO(name);
    CHECK(r.pass());
    CHECK(r.max_residual() <= kTol);
  }
}

TEST_CASE("margins are enforced") {
  SystemPtr s2 = fixture("S2");
  TruncatedRep rep(s2, StateFunctional::trace_state(s2->shape), 6);
  Sampler sampler(33);
  std::vector<std::pair<GroupElement, GroupElement>> pairs{{g1(2), g1(2)}};
  try {
    covariance_check(rep, {g1(1)}, pairs, sampler, 2, 3, kTol);
    FAIL("expected MarginTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MarginTooSmall);
  }
  CHECK_THROWS_AS(rep.interior_projector(7), Error);
}

TEST_CASE("adjointness at operator and Gram level") {
  Sampler sampler(34);
  for (const char* name : {"S2", "SAut", "SMx"}) {
    SystemPtr sys = fixture(name);
    TruncatedRep rep(sys, StateFunctional::trace_state(sys->shape), 8);
    CheckReport r = adjointness_check(rep, {g1(0), g1(1), g1(2)}, sampler, 16, kTol);
    INFO(name);
    CHECK(r.pass());
    CHECK(r.max_residual() <= kTol);
  }
}

TEST_CASE("pi is a *-homomorphism") {
  Sampler sampler(35);
  for (const char* name : {"S2", "SAut", "SMx"}) {
    SystemPtr sys = fixture(name);
    TruncatedRep rep(sys, StateFunctional::trace_state(sys->shape), 6);
    CheckReport r = pi_homomorphism_check(rep, sampler, 16, kTol);
    INFO(name);
    CHECK(r.pass());
  }
}

TEST_CASE("integrated operators") {
  SystemPtr s2 = fixture("S2");
  TruncatedRep rep(s2, StateFunctional::trace_state(s2->shape), 6);

  CHECK((integrated(rep, unit_element(s2)) - Matrix::Identity(rep.total_dim(), rep.total_dim()))
            .norm() <= 1e-12);

  // For the generator, pi(alpha_1(1)) U_1 collapses to U_1 itself.
  L1Element us = u(s2, g1(1));
  CHECK((integrated(rep, us) - rep.u_op(g1(1))).norm() <= 1e-12);

  // Multiplicativity on interior vectors.
  Sampler sampler(36);
  Matrix q = rep.interior_projector(4);
  for (int i = 0; i < 10; ++i) {
    L1Element a = random_l1_element(s2, sampler, 2, 3);
    L1Element b = random_l1_element(s2, sampler, 2, 3);
    Matrix lhs = integrated(rep, mul(a, b)) * q;
    Matrix rhs = integrated(rep, a) * integrated(rep, b) * q;
    CHECK(matrix_op_norm(lhs - rhs) <= kTol * std::max(1.0, a.l1_norm() * b.l1_norm()));
  }

  // The integrated form is a *-map on the interior.
  for (int i = 0; i < 10; ++i) {
    L1Element a = random_l1_element(s2, sampler, 2, 3);
    Matrix m = q * (Matrix(integrated(rep, a).adjoint()) - integrated(rep, star(a))) * q;
    CHECK(matrix_op_norm(m) <= kTol);
  }

  L1Element wide = u(s2, g1(1));
  TruncatedRep tiny(s2, StateFunctional::trace_state(s2->shape), 0);
  CHECK_THROWS_AS(integrated(tiny, wide), Error);
}

TEST_CASE("interior norms approach the enveloping norm from below") {
  SystemPtr saut = fixture("SAut");
  L1Element a = add(unit_element(saut), u(saut, g1(1)));
  TruncatedRep rep(saut, StateFunctional::trace_state(saut->shape), 24);
  double norm24 = interior_norm(rep, integrated(rep, a), 1);
  CHECK(norm24 <= 2.0 + kTol);
  CHECK(norm24 >= 1.95);

  TruncatedRep small(saut, StateFunctional::trace_state(saut->shape), 8);
  double norm8 = interior_norm(small, integrated(small, a), 1);
  CHECK(norm8 <= norm24 + kTol);
}

TEST_CASE("interior norm sits inside the certificate interval") {
  Sampler sampler(37);
  for (const char* name : {"S2", "SAut", "SMx"}) {
    SystemPtr sys = fixture(name);
    TruncatedRep rep(sys, StateFunctional::trace_state(sys->shape), 12);
    std::vector<L1Element> elems{u(sys, g1(1)),
                                 add(unit_element(sys), u(sys, g1(1))),
                                 add(u(sys, g1(1)), u_star(sys, g1(1)))};
    for (const auto& a : elems) {
      if (a.empty()) continue;
      NormCertificate cert = cstar_norm_bounds(a, 10);
      double norm = interior_norm(rep, integrated(rep, a), 2);
      INFO(name);
      CHECK(norm <= cert.hi + 1e-6);
      CHECK(norm >= cert.lo - 1e-6);
    }
  }
}

TEST_CASE("coefficient dominance") {
  Sampler sampler(38);
  for (const char* name : {"S2", "SAut", "SMx"}) {
    SystemPtr sys = fixture(name);
    TruncatedRep rep(sys, StateFunctional::trace_state(sys->shape), 10);
    std::vector<L1Element> samples;
    for (int i = 0; i < 25; ++i) samples.push_back(random_l1_element(sys, sampler, 2, 3));
    CheckReport r = faithfulness_criterion_check(rep, samples, 4, kTol);
    INFO(name);
    CHECK(r.pass());
  }

  // For elements supported at zero and a faithful state the two sides agree.
  SystemPtr s2 = fixture("S2");
  TruncatedRep rep(s2, StateFunctional::trace_state(s2->shape), 4);
  for (int i = 0; i < 10; ++i) {
    AlgebraElement c = sampler.algebra_element(s2->shape);
    L1Element a = delta(s2, c, g1(0));
    double lhs = op_norm(c);
    double rhs = interior_norm(rep, integrated(rep, a), 1);
    CHECK_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-9));
  }

  // u + u* has a vanishing zero coefficient, a trivial lower bound.
  L1Element a = add(u(s2, g1(1)), u_star(s2, g1(1)));
  CheckReport r = faithfulness_criterion_check(rep, {a}, 2, kTol);
  CHECK(r.pass());
}

TEST_CASE("interior norms are gauge invariant") {
  Sampler sampler(39);
  SystemPtr s2 = fixture("S2");
  TruncatedRep rep(s2, StateFunctional::trace_state(s2->shape), 10);
  for (int i = 0; i < 10; ++i) {
    L1Element a = random_l1_element(s2, sampler, 2, 3);
    std::vector<double> theta{sampler.uniform_real(0, 6.28)};
    double n1 = interior_norm(rep, integrated(rep, a), 3);
    double n2 = interior_norm(rep, integrated(rep, gauge_twist(a, theta)), 3);
    CHECK(std::abs(n1 - n2) <= 1e-6 * std::max(1.0, n1));
  }
}

TEST_CASE("semigroup law on interior vectors") {
  Sampler sampler(40);
  for (const char* name : {"S2", "SAut", "SMx"}) {
    SystemPtr sys = fixture(name);
    TruncatedRep rep(sys, StateFunctional::trace_state(sys->shape), 12);
    Matrix q = rep.interior_projector(6);
    for (std::int64_t x = 0; x <= 3; ++x)
      for (std::int64_t y = 0; y <= 3 - x; ++y) {
        Matrix lhs = rep.u_op(g1(x)) * rep.u_op(g1(y)) * q;
        Matrix rhs = rep.u_op(g1(x + y)) * q;
        INFO(name << " x=" << x << " y=" << y);
        CHECK(matrix_op_norm(lhs - rhs) <= kTol);
      }
  }
}
