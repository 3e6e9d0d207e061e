// Acceptance suite: ten end-to-end criteria, one pass/fail line each.
// Every tolerance is pinned here; the unit suites cover the finer grain.

#include <catch2/catch_amalgamated.hpp>

#include <iostream>
#include <set>

#include "semicross/fixtures.hpp"
#include "semicross/norms.hpp"
#include "semicross/regrep.hpp"
#include "semicross/runner.hpp"

using namespace semicross;

namespace {

GroupElement g1(std::int64_t v) { return GroupElement::scalar(v); }

SystemPtr fixture(const std::string& name, std::uint64_t seed = 1) {
  return make_fixture(name, SampleSpec{seed, 64, 8}, 1e-9);
}

const std::vector<std::string> kRepresentable{"S2", "SAut", "SMx"};

struct Criterion {
  std::string id;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }

  void finish() {
    std::cout << "[" << id << "] " << (failures.empty() ? "PASS" : "FAIL") << "\n";
    for (const auto& f : failures) std::cout << "    " << f << "\n";
    REQUIRE(failures.empty());
  }
};

}  // namespace

TEST_CASE("criterion 1: transfer synthesis") {
  Criterion c{"1 transfer-synthesis"};

  Matrix l_s2 = fixture("S2")->transfer_map(g1(1)).m;
  Matrix want_s2 = Matrix::Zero(2, 2);
  want_s2(1, 0) = 1.0;
  c.expect((l_s2 - want_s2).cwiseAbs().maxCoeff() <= 1e-12, "S2 transfer map off by > 1e-12");

  Matrix l_smx = fixture("SMx")->transfer_map(g1(1)).m;
  Matrix want_smx = Matrix::Zero(5, 5);
  want_smx(4, 0) = 1.0;
  c.expect((l_smx - want_smx).cwiseAbs().maxCoeff() <= 1e-12, "SMx transfer map off by > 1e-12");

  Matrix l_saut = fixture("SAut")->transfer_map(g1(1)).m;
  Matrix want_saut = Matrix::Zero(2, 2);
  want_saut(0, 1) = 1.0;
  want_saut(1, 0) = 1.0;
  c.expect((l_saut - want_saut).cwiseAbs().maxCoeff() == 0.0, "SAut transfer map not exact");

  c.finish();
}

TEST_CASE("criterion 2: verdicts, stable under sampling reseeds") {
  Criterion c{"2 verdicts"};

  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    for (const auto& name : kRepresentable) {
      SystemPtr sys = fixture(name, seed);
      c.expect(sys->representable(), name + " misclassified at seed " + std::to_string(seed));
    }
    SystemPtr sneg = fixture("SNeg", seed);
    bool good = !sneg->representable() && sneg->witness &&
                sneg->witness->check == "hereditary" && sneg->witness->x &&
                *sneg->witness->x == g1(1);
    c.expect(good, "SNeg witness wrong at seed " + std::to_string(seed));
    if (!c.failures.empty()) break;
  }

  c.finish();
}

TEST_CASE("criterion 3: transfer axioms and composition law") {
  Criterion c{"3 transfer-axioms"};
  const double tol = 1e-9;

  for (const auto& name : kRepresentable) {
    SystemPtr sys = fixture(name);
    Sampler sampler(101);
    double worst = 0;
    for (int i = 0; i < 64; ++i) {
      GroupElement x = sampler.cone_element(1, 8);
      GroupElement y = sampler.cone_element(1, 8);
      AlgebraElement a = sampler.algebra_element(sys->shape);
      AlgebraElement b = sampler.algebra_element(sys->shape);
      LinearMap lx = sys->transfer_map(x);
      AlgebraElement ux = sys->alpha_unit(x);

      worst = std::max(worst,
                       op_norm(sub(lx.apply(mul(sys->alpha_apply(x, a), b)), mul(a, lx.apply(b)))));
      worst = std::max(worst, op_norm(sub(lx.apply(a), lx.apply(mul(ux, a)))));
      worst = std::max(worst, op_norm(sub(lx.apply(a), lx.apply(mul(a, ux)))));
      worst = std::max(worst, op_norm(sub(sys->alpha_apply(x, lx.apply(a)), mul(mul(ux, a), ux))));

      auto ex = [&](const AlgebraElement& z) { return sys->alpha_apply(x, lx.apply(z)); };
      worst = std::max(worst, op_norm(sub(ex(ex(a)), ex(a))));
      worst = std::max(worst, op_norm(sub(ex(sys->alpha_apply(x, a)), sys->alpha_apply(x, a))));
      worst = std::max(worst, op_norm(sub(sys->alpha_apply(x, lx.apply(AlgebraElement::unit(sys->shape))), ux)));

      worst = std::max(worst, op_norm(sub(sys->transfer_apply(add(x, y), a),
                                          sys->transfer_apply(y, sys->transfer_apply(x, a)))));
    }
    c.expect(worst <= tol, name + " worst transfer residual " + std::to_string(worst));
  }

  c.finish();
}

TEST_CASE("criterion 4: Banach *-algebra laws") {
  Criterion c{"4 l1-algebra"};
  const double tol = 1e-9;

  for (const auto& name : kRepresentable) {
    SystemPtr sys = fixture(name);
    Sampler sampler(102);

    std::set<int> patterns_seen;
    bool negative_total_seen = false;
    double worst_assoc = 0;
    for (int i = 0; i < 1000; ++i) {
      int pattern = i % 27;
      auto degree = [&](int sign_class) {
        switch (sign_class) {
          case 0: return g1(-sampler.uniform_int(1, 3));
          case 1: return g1(0);
          default: return g1(sampler.uniform_int(1, 3));
        }
      };
      GroupElement d1 = degree(pattern % 3);
      GroupElement d2 = degree((pattern / 3) % 3);
      GroupElement d3 = degree(pattern / 9);
      patterns_seen.insert(pattern);
      if (!in_cone(add(add(d1, d2), d3))) negative_total_seen = true;

      L1Element a = delta(sys, sampler.algebra_element(sys->shape), d1, ConstraintMode::Project);
      L1Element b = delta(sys, sampler.algebra_element(sys->shape), d2, ConstraintMode::Project);
      L1Element cc = delta(sys, sampler.algebra_element(sys->shape), d3, ConstraintMode::Project);
      worst_assoc = std::max(worst_assoc, l1_distance(mul(mul(a, b), cc), mul(a, mul(b, cc))));
    }
    c.expect(patterns_seen.size() == 27, name + " sign patterns not all covered");
    c.expect(negative_total_seen, name + " no negative-total triple sampled");
    c.expect(worst_assoc <= tol,
             name + " associativity residual " + std::to_string(worst_assoc));

    double worst_star = 0, worst_sub = 0;
    for (int i = 0; i < 500; ++i) {
      L1Element a = random_l1_element(sys, sampler, 3, 3);
      L1Element b = random_l1_element(sys, sampler, 3, 3);
      worst_star = std::max(worst_star, l1_distance(star(mul(a, b)), mul(star(b), star(a))));
      worst_sub = std::max(worst_sub, mul(a, b).l1_norm() - a.l1_norm() * b.l1_norm());
    }
    c.expect(worst_star <= tol, name + " star residual " + std::to_string(worst_star));
    c.expect(worst_sub <= tol, name + " submultiplicativity slack " + std::to_string(worst_sub));
  }

  c.finish();
}

TEST_CASE("criterion 5: product routes agree on the degree grid") {
  Criterion c{"5 product-cross-check"};

  for (const auto& name : kRepresentable) {
    SystemPtr sys = fixture(name);
    Sampler sampler(103);
    double worst = 0;
    for (std::int64_t d1 = -3; d1 <= 3; ++d1)
      for (std::int64_t d2 = -3; d2 <= 3; ++d2) {
        AlgebraElement a = project_coefficient(*sys, sampler.algebra_element(sys->shape), g1(d1));
        AlgebraElement b = project_coefficient(*sys, sampler.algebra_element(sys->shape), g1(d2));
        L1Element via_table = mul(delta(sys, a, g1(d1)), delta(sys, b, g1(d2)));
        L1Element via_cases = monomial_product(sys, a, g1(d1), b, g1(d2));
        worst = std::max(worst, l1_distance(via_table, via_cases));
      }
    c.expect(worst <= 1e-12, name + " grid residual " + std::to_string(worst));
  }

  c.finish();
}

TEST_CASE("criterion 6: norm certificates") {
  Criterion c{"6 norm-certificates"};

  {
    SystemPtr s2 = fixture("S2");
    NormCertificate cert = cstar_norm_bounds(u(s2, g1(1)), 10);
    for (double s : cert.lower)
      c.expect(s == 1.0, "S2 u1 lower bound not exactly 1");
    c.expect(cert.upper[9] <= 1.08, "S2 u1 upper bound at k=10 exceeds 1.08");
  }

  {
    SystemPtr s2 = fixture("S2");
    L1Element a = add(u(s2, g1(1)), u_star(s2, g1(1)));
    c.expect(l1_distance(mul(a, a), unit_element(s2)) <= 1e-12,
             "S2 (u+u*)^2 is not the unit to 1e-12");
    NormCertificate cert = cstar_norm_bounds(a, 10);
    c.expect(cert.lo >= 1.0 - 1e-9 && cert.hi <= 1.08,
             "S2 (u+u*) certificate interval escapes [1-1e-9, 1.08]");
  }

  {
    SystemPtr saut = fixture("SAut");
    L1Element a = add(unit_element(saut), u(saut, g1(1)));
    NormCertificate cert = cstar_norm_bounds(a, 12);
    c.expect(cert.lower[11] >= 1.9, "SAut 1+u lower bound below 1.9 at k=12");

    TruncatedRep rep(saut, StateFunctional::trace_state(saut->shape), 24);
    double norm = interior_norm(rep, integrated(rep, a), 1);
    c.expect(norm >= cert.lo - 1e-6 && norm <= cert.hi + 1e-6,
             "SAut truncated norm " + std::to_string(norm) + " outside certificate");
  }

  c.finish();
}

TEST_CASE("criterion 7: coefficient norms below the upper bound") {
  Criterion c{"7 coefficient-bound"};

  for (const auto& name : kRepresentable) {
    SystemPtr sys = fixture(name);
    Sampler sampler(104);
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
      L1Element a = random_l1_element(sys, sampler, 3, 4);
      NormCertificate cert = cstar_norm_bounds(a, 6);
      for (const auto& [g, coeff] : a.coeffs())
        worst = std::max(worst, op_norm(coeff) - cert.hi);
    }
    c.expect(worst <= 1e-9, name + " coefficient exceeds bound by " + std::to_string(worst));
  }

  c.finish();
}

TEST_CASE("criterion 8: regular representation") {
  Criterion c{"8 regular-representation"};
  const double tol = 1e-9;

  for (const auto& name : kRepresentable) {
    SystemPtr sys = fixture(name);
    Sampler sampler(105);
    TruncatedRep rep(sys, StateFunctional::trace_state(sys->shape), 12);
    std::vector<GroupElement> xs{g1(0), g1(1), g1(2)};
    std::vector<std::pair<GroupElement, GroupElement>> pairs{
        {g1(1), g1(1)}, {g1(1), g1(2)}, {g1(2), g1(2)}, {g1(0), g1(1)}};

    CheckReport cov = covariance_check(rep, xs, pairs, sampler, 16, 6, tol);
    c.expect(cov.pass(), name + " covariance/semigroup residual " +
                             std::to_string(cov.max_residual()));
    CheckReport adj = adjointness_check(rep, xs, sampler, 32, tol);
    c.expect(adj.pass(), name + " adjointness residual " + std::to_string(adj.max_residual()));
    CheckReport hom = pi_homomorphism_check(rep, sampler, 32, tol);
    c.expect(hom.pass(), name + " pi residual " + std::to_string(hom.max_residual()));
  }

  {
    SystemPtr s2 = fixture("S2");
    TruncatedRep rep(s2, StateFunctional::trace_state(s2->shape), 12);
    bool dims_ok = rep.degree_dim(g1(0)) == 2 && rep.degree_dim(g1(1)) == 1 &&
                   rep.degree_dim(g1(-1)) == 1;
    for (std::int64_t g = 2; g <= 12 && dims_ok; ++g)
      dims_ok = rep.degree_dim(g1(g)) == 0 && rep.degree_dim(g1(-g)) == 0;
    c.expect(dims_ok, "S2 degree dimensions differ from (2,1,1,0,...)");
  }

  c.finish();
}

TEST_CASE("criterion 9: coefficient dominance and gauge action") {
  Criterion c{"9 gauge-and-dominance"};

  for (const auto& name : kRepresentable) {
    SystemPtr sys = fixture(name);
    Sampler sampler(106);
    TruncatedRep rep(sys, StateFunctional::trace_state(sys->shape), 12);

    std::vector<L1Element> samples;
    for (int i = 0; i < 100; ++i) samples.push_back(random_l1_element(sys, sampler, 2, 3));
    CheckReport dom = faithfulness_criterion_check(rep, samples, 2, 1e-9);
    c.expect(dom.pass(), name + " coefficient dominance failed");

    double worst_e0 = 0;
    for (int i = 0; i < 32; ++i) {
      std::vector<double> theta{sampler.uniform_real(0, 6.283185307179586)};
      L1Element a = random_l1_element(sys, sampler, 2, 3);
      a = scale(Complex(1.0 / std::max(1.0, a.l1_norm()), 0), a);
      worst_e0 = std::max(worst_e0, std::abs(e0_power_norm(a, 2) -
                                             e0_power_norm(gauge_twist(a, theta), 2)));
    }
    c.expect(worst_e0 <= 1e-12, name + " power norms move under gauge by " +
                                    std::to_string(worst_e0));

    double worst_int = 0;
    for (int i = 0; i < 10; ++i) {
      std::vector<double> theta{sampler.uniform_real(0, 6.283185307179586)};
      L1Element a = random_l1_element(sys, sampler, 2, 3);
      double n1 = interior_norm(rep, integrated(rep, a), 2);
      double n2 = interior_norm(rep, integrated(rep, gauge_twist(a, theta)), 2);
      worst_int = std::max(worst_int, std::abs(n1 - n2));
    }
    c.expect(worst_int <= 1e-6, name + " interior norms move under gauge by " +
                                    std::to_string(worst_int));
  }

  c.finish();
}

TEST_CASE("criterion 10: vanishing equivalence") {
  Criterion c{"10 vanishing-equivalence"};

  for (const auto& name : kRepresentable) {
    SystemPtr sys = fixture(name);
    Sampler sampler(107);
    int agreements = 0;
    try {
      for (int i = 0; i < 500; ++i) {
        L1Element a = random_l1_element(sys, sampler, 2, 3);
        if (i % 5 == 0) a = sub(a, a);                       // forced zero
        if (i % 7 == 0) a = scale(Complex(0, 0), a);         // scaled to zero
        ZeroTest t = zero_test(a, 1e-9);                     // raises on disagreement
        bool expect_zero = (i % 5 == 0) || (i % 7 == 0);
        if (t.is_zero == expect_zero || (!expect_zero && !t.is_zero)) ++agreements;
      }
    } catch (const Error& e) {
      c.expect(false, name + std::string(" equivalence raised: ") + e.what());
      continue;
    }
    c.expect(agreements == 500, name + " zero-test verdicts inconsistent with construction");
  }

  c.finish();
}
