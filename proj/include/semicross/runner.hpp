#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "semicross/fixtures.hpp"
#include "semicross/json_io.hpp"
#include "semicross/norms.hpp"
#include "semicross/regrep.hpp"

namespace semicross {

constexpr int kReportSchemaVersion = 1;

enum class Command { CheckSystem, Transfer, Mul, Norm, RegRep, SelfTest, ListFixtures };

inline const char* command_name(Command c) {
  switch (c) {
    case Command::CheckSystem: return "check-system";
    case Command::Transfer: return "transfer";
    case Command::Mul: return "mul";
    case Command::Norm: return "norm";
    case Command::RegRep: return "regrep";
    case Command::SelfTest: return "selftest";
    case Command::ListFixtures: return "list-fixtures";
  }
  return "unknown";
}

/// Everything a run needs; identical configs produce identical reports.
struct RunConfig {
  Command command = Command::SelfTest;
  std::string fixture;
  std::string system_path;
  std::string element;        // norm / regrep
  std::string lhs, rhs;       // mul
  GroupElement x = GroupElement::scalar(1);
  int kmax = 10;
  std::size_t growth_bound = 4096;
  std::int64_t window = 12;
  std::vector<GroupElement> gens;
  std::string state = "trace";
  std::int64_t margin = -1;
  std::string expect;         // "", "representable", "not-representable"
  std::uint64_t seed = 1;
  int count = 64;
  double tol = 1e-9;
  std::string output_path;
  bool json_output = false;
};

struct RunResult {
  int exit_code = 0;
  Json report;
};

// --- element expressions -----------------------------------------------------
//
// Sums of the terms `1`, `u<n>`, `u<n>*` (k = 1), `u(<ints>)`, `u(<ints>)*`,
// or a whole `@file.json` element.  Enough to name every element the CLI
// needs; anything richer goes through JSON.

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

inline GroupElement parse_degree(const std::string& body, int k) {
  std::vector<std::int64_t> coords;
  std::string token;
  for (char ch : body + ",") {
    if (ch == ',') {
      if (token.empty()) fail(ErrorCode::ConfigError, "empty coordinate in '" + body + "'");
      coords.push_back(std::stoll(token));
      token.clear();
    } else {
      token += ch;
    }
  }
  if (static_cast<int>(coords.size()) != k)
    fail(ErrorCode::ConfigError, "degree '" + body + "' has wrong dimension");
  return GroupElement(std::move(coords));
}

}  // namespace detail

inline L1Element parse_element(SystemPtr sys, const std::string& expr) {
  std::string e = detail::trim(expr);
  if (e.empty()) fail(ErrorCode::ConfigError, "empty element expression");
  if (e.front() == '@') return l1_from_json(sys, load_json_file(e.substr(1)));

  L1Element result = L1Element::zero(sys);
  std::size_t pos = 0;
  while (pos <= e.size()) {
    std::size_t next = e.find('+', pos);
    std::string term = detail::trim(e.substr(pos, next == std::string::npos ? next : next - pos));
    if (term.empty()) fail(ErrorCode::ConfigError, "empty term in '" + expr + "'");

    if (term == "1") {
      result = add(result, unit_element(sys));
    } else if (term.front() == 'u') {
      bool starred = term.back() == '*';
      std::string body = term.substr(1, term.size() - 1 - (starred ? 1 : 0));
      GroupElement x;
      if (!body.empty() && body.front() == '(') {
        if (body.back() != ')') fail(ErrorCode::ConfigError, "unbalanced '(' in '" + term + "'");
        x = detail::parse_degree(body.substr(1, body.size() - 2), sys->group_dim);
      } else {
        if (sys->group_dim != 1)
          fail(ErrorCode::ConfigError, "'" + term + "' needs u(...) for group dimension > 1");
        x = GroupElement::scalar(std::stoll(body));
      }
      result = add(result, starred ? u_star(sys, x) : u(sys, x));
    } else {
      fail(ErrorCode::ConfigError, "cannot parse term '" + term + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return result;
}

// --- report plumbing ----------------------------------------------------------

namespace detail {

inline Json base_report(Command cmd, const RunConfig& cfg) {
  return Json::object({{"schema_version", kReportSchemaVersion},
                       {"command", command_name(cmd)},
                       {"seed", cfg.seed},
                       {"tol", cfg.tol}});
}

inline void attach_summary(Json& report, const CheckReport& checks) {
  report["checks"] = check_report_to_json(checks);
  report["summary"] = Json::object({{"pass", checks.pass()},
                                    {"checks", checks.items.size()},
                                    {"failed", checks.failed()}});
}

inline Json system_header(const DynamicalSystem& sys) {
  return Json::object({{"name", sys.name},
                       {"shape", shape_to_json(sys.shape)},
                       {"group_dim", sys.group_dim}});
}

inline SystemPtr load_system(const RunConfig& cfg) {
  SampleSpec spec{cfg.seed, cfg.count, 8};
  if (!cfg.fixture.empty()) {
    const Fixture& f = find_fixture(cfg.fixture);
    return analyze_system(f.make_action(cfg.tol), spec, cfg.tol, 1e-12, f.name);
  }
  if (!cfg.system_path.empty()) {
    SystemDescription d = system_from_json(load_json_file(cfg.system_path));
    double tol = cfg.tol > 0 ? cfg.tol : d.tol;
    return analyze_system(action_from_description(d), spec, tol, 1e-12,
                          d.name.empty() ? cfg.system_path : d.name);
  }
  fail(ErrorCode::ConfigError, "no system given: use a fixture name or a JSON path");
}

inline const char* verdict_name(Verdict v) {
  return v == Verdict::FinelyRepresentable ? "finely-representable" : "not-finely-representable";
}

}  // namespace detail

// --- commands -------------------------------------------------------------------

inline RunResult run_check_system(const RunConfig& cfg) {
  SystemPtr sys = detail::load_system(cfg);
  Json report = detail::base_report(Command::CheckSystem, cfg);
  report["system"] = detail::system_header(*sys);
  report["verdict"] = detail::verdict_name(sys->verdict);
  if (sys->witness) report["witness"] = witness_to_json(*sys->witness);

  CheckReport checks = sys->analysis;
  if (!cfg.expect.empty()) {
    bool want = cfg.expect == "representable";
    checks.add(CheckResult{"expected-verdict", std::nullopt, std::nullopt,
                           sys->representable() == want ? 0.0 : 1.0, 0.5,
                           sys->representable() == want,
                           "expected " + cfg.expect});
  } else {
    // Without --expect the verdict itself is the (always successful) result;
    // only internal analysis breakage fails the run.
    CheckReport verdict_only;
    verdict_only.add(CheckResult{"verdict-computed", std::nullopt, std::nullopt, 0.0, 0.5,
                                 true, detail::verdict_name(sys->verdict)});
    checks = verdict_only;
  }
  detail::attach_summary(report, checks);
  return {checks.pass() ? 0 : 1, report};
}

inline RunResult run_transfer(const RunConfig& cfg) {
  SystemPtr sys = detail::load_system(cfg);
  Json report = detail::base_report(Command::Transfer, cfg);
  report["system"] = detail::system_header(*sys);
  report["verdict"] = detail::verdict_name(sys->verdict);
  if (!sys->representable()) {
    if (sys->witness) report["witness"] = witness_to_json(*sys->witness);
    CheckReport checks;
    checks.add(CheckResult{"transfer-available", std::nullopt, std::nullopt, 1.0, 0.5, false,
                           "no transfer action exists"});
    detail::attach_summary(report, checks);
    return {1, report};
  }

  const GroupElement x = cfg.x.dim() == sys->group_dim ? cfg.x : GroupElement::zero(sys->group_dim);
  LinearMap lx = sys->transfer_map(x);
  CentralProjection px = sys->range_projection(x);

  Json mat = Json::array();
  for (int r = 0; r < lx.m.rows(); ++r)
    for (int c = 0; c < lx.m.cols(); ++c) mat.push_back(complex_to_json(lx.m(r, c)));
  report["x"] = group_to_json(x);
  report["transfer_matrix"] = std::move(mat);
  report["range_projection"] = Json(px.mask);
  report["unit_image"] = element_to_json(sys->alpha_unit(x));

  CheckReport checks;
  Sampler sampler(cfg.seed);
  const AlgebraShape& s = sys->shape;
  for (int i = 0; i < cfg.count; ++i) {
    AlgebraElement a = sampler.algebra_element(s);
    AlgebraElement b = sampler.algebra_element(s);
    AlgebraElement ux = sys->alpha_unit(x);
    checks.track("transfer-module",
                 op_norm(sub(lx.apply(mul(sys->alpha_apply(x, a), b)), mul(a, lx.apply(b)))),
                 cfg.tol, x);
    checks.track("transfer-support",
                 std::max(op_norm(sub(lx.apply(a), lx.apply(mul(ux, a)))),
                          op_norm(sub(lx.apply(a), lx.apply(mul(a, ux))))),
                 cfg.tol, x);
    checks.track("transfer-complete",
                 op_norm(sub(sys->alpha_apply(x, lx.apply(a)), mul(mul(ux, a), ux))), cfg.tol,
                 x);
  }
  detail::attach_summary(report, checks);
  return {checks.pass() ? 0 : 1, report};
}

inline RunResult run_mul(const RunConfig& cfg) {
  SystemPtr sys = detail::load_system(cfg);
  sys->require_representable();
  L1Element lhs = parse_element(sys, cfg.lhs);
  L1Element rhs = parse_element(sys, cfg.rhs);
  L1Element product = mul(lhs, rhs);

  Json report = detail::base_report(Command::Mul, cfg);
  report["system"] = detail::system_header(*sys);
  report["product"] = l1_to_json(product);
  report["l1_norms"] = Json::object(
      {{"lhs", lhs.l1_norm()}, {"rhs", rhs.l1_norm()}, {"product", product.l1_norm()}});

  CheckReport checks;
  checks.track("product-constraint", constraint_residual(product), cfg.tol);
  checks.track("submultiplicative",
               std::max(0.0, product.l1_norm() - lhs.l1_norm() * rhs.l1_norm()), cfg.tol);
  detail::attach_summary(report, checks);
  return {checks.pass() ? 0 : 1, report};
}

inline RunResult run_norm(const RunConfig& cfg) {
  SystemPtr sys = detail::load_system(cfg);
  sys->require_representable();
  L1Element a = parse_element(sys, cfg.element);
  NormCertificate cert = cstar_norm_bounds(a, cfg.kmax, cfg.growth_bound);

  Json report = detail::base_report(Command::Norm, cfg);
  report["system"] = detail::system_header(*sys);
  report["element"] = cfg.element;
  report["certificate"] = certificate_to_json(cert);

  CheckReport checks;
  double sandwich = 0;
  for (double s : cert.lower) sandwich = std::max(sandwich, s - cert.hi);
  checks.track("certificate-sandwich", sandwich, cfg.tol);
  checks.track("coefficient-bound",
               [&] {
                 double worst = 0;
                 for (const auto& [g, c] : a.coeffs())
                   worst = std::max(worst, op_norm(c) - cert.hi);
                 return std::max(0.0, worst);
               }(),
               cfg.tol);
  detail::attach_summary(report, checks);
  return {checks.pass() ? 0 : 1, report};
}

inline RunResult run_regrep(const RunConfig& cfg) {
  SystemPtr sys = detail::load_system(cfg);
  sys->require_representable();

  StateFunctional f = StateFunctional::trace_state(sys->shape);
  if (cfg.state != "trace") {
    if (cfg.state.empty() || cfg.state.front() != '@')
      fail(ErrorCode::ConfigError, "--state must be 'trace' or '@density.json'");
    f = StateFunctional::from_density(
        element_from_json(sys->shape, load_json_file(cfg.state.substr(1))), cfg.tol);
  }

  std::vector<GroupElement> gens = cfg.gens;
  if (gens.empty()) {
    for (int i = 0; i < sys->group_dim; ++i) {
      GroupElement e = GroupElement::zero(sys->group_dim);
      e.coords[static_cast<std::size_t>(i)] = 1;
      gens.push_back(std::move(e));
    }
  }
  std::int64_t margin = cfg.margin >= 0 ? cfg.margin : cfg.window / 2;

  TruncatedRep rep = build_regrep(sys, f, cfg.window, gens);

  Json report = detail::base_report(Command::RegRep, cfg);
  report["system"] = detail::system_header(*sys);
  report["window"] = cfg.window;
  report["margin"] = margin;
  report["state_faithful"] = f.faithful;
  report["total_dim"] = rep.total_dim();
  if (sys->group_dim >= 2)
    report["caveat"] = "box window: order convexity relaxed to componentwise bounds";
  Json dims = Json::array();
  for (std::size_t i = 0; i < rep.degrees().size(); ++i)
    if (rep.spaces()[i].dim > 0)
      dims.push_back(Json::object(
          {{"g", group_to_json(rep.degrees()[i])}, {"dim", rep.spaces()[i].dim}}));
  report["degree_dims"] = std::move(dims);

  Sampler sampler(cfg.seed);
  std::vector<std::pair<GroupElement, GroupElement>> pairs;
  for (const auto& x : gens)
    for (const auto& y : gens) pairs.emplace_back(x, y);

  CheckReport checks = covariance_check(rep, gens, pairs, sampler, std::max(1, cfg.count / 8),
                                        margin, cfg.tol);
  checks.merge(adjointness_check(rep, gens, sampler, std::max(1, cfg.count / 8), cfg.tol));
  checks.merge(pi_homomorphism_check(rep, sampler, std::max(1, cfg.count / 8), cfg.tol));

  std::vector<L1Element> samples;
  std::int64_t radius = std::max<std::int64_t>(1, std::min<std::int64_t>(2, margin));
  for (int i = 0; i < std::max(1, cfg.count / 8); ++i)
    samples.push_back(random_l1_element(sys, sampler, radius, 3));
  checks.merge(faithfulness_criterion_check(rep, samples, margin, cfg.tol));

  if (!cfg.element.empty()) {
    L1Element a = parse_element(sys, cfg.element);
    double norm = interior_norm(rep, integrated(rep, a), margin);
    NormCertificate cert = cstar_norm_bounds(a, std::min(cfg.kmax, 8), cfg.growth_bound);
    report["element"] = cfg.element;
    report["interior_norm"] = norm;
    report["certificate"] = certificate_to_json(cert);
    checks.track("norm-vs-certificate",
                 std::max(0.0, std::max(cert.lo - norm, norm - cert.hi)), 1e-6);
  }

  detail::attach_summary(report, checks);
  return {checks.pass() ? 0 : 1, report};
}

inline RunResult run_list_fixtures(const RunConfig& cfg) {
  Json report = detail::base_report(Command::ListFixtures, cfg);
  Json list = Json::array();
  for (const auto& f : fixture_catalog())
    list.push_back(Json::object({{"name", f.name},
                                 {"description", f.description},
                                 {"shape", shape_to_json(f.shape)},
                                 {"group_dim", f.group_dim},
                                 {"expected_verdict", f.expect_representable
                                                          ? "finely-representable"
                                                          : "not-finely-representable"},
                                 {"notes", f.notes}}));
  report["fixtures"] = std::move(list);
  CheckReport checks;
  checks.add(CheckResult{"catalog", std::nullopt, std::nullopt, 0.0, 0.5, true,
                         std::to_string(fixture_catalog().size()) + " fixtures"});
  detail::attach_summary(report, checks);
  return {0, report};
}

inline RunResult run_selftest(const RunConfig& cfg) {
  Json report = detail::base_report(Command::SelfTest, cfg);
  CheckReport checks;
  Sampler sampler(cfg.seed);
  SampleSpec spec{cfg.seed, cfg.count, 8};

  Json fixture_results = Json::array();
  for (const auto& fx : fixture_catalog()) {
    SystemPtr sys = analyze_system(fx.make_action(cfg.tol), spec, cfg.tol, 1e-12, fx.name);
    bool verdict_ok = sys->representable() == fx.expect_representable;
    checks.add(CheckResult{"verdict-" + fx.name, std::nullopt, std::nullopt,
                           verdict_ok ? 0.0 : 1.0, 0.5, verdict_ok,
                           detail::verdict_name(sys->verdict)});
    fixture_results.push_back(Json::object(
        {{"name", fx.name}, {"verdict", detail::verdict_name(sys->verdict)}}));
    if (!sys->representable()) continue;

    checks.track("analysis-" + fx.name, sys->analysis.max_residual(), cfg.tol);

    // Convolution algebra properties on random monomials.
    for (int i = 0; i < 100; ++i) {
      auto monomial = [&] {
        GroupElement g = sampler.signed_element(sys->group_dim, 3);
        return delta(sys, sampler.algebra_element(sys->shape), g, ConstraintMode::Project);
      };
      L1Element a = monomial(), b = monomial(), c = monomial();
      checks.track("assoc-" + fx.name, l1_distance(mul(mul(a, b), c), mul(a, mul(b, c))),
                   cfg.tol);
      checks.track("star-antihom-" + fx.name, l1_distance(star(mul(a, b)), mul(star(b), star(a))),
                   cfg.tol);
      checks.track("submult-" + fx.name,
                   std::max(0.0, mul(a, b).l1_norm() - a.l1_norm() * b.l1_norm()), cfg.tol);
      checks.track("unit-law-" + fx.name,
                   l1_distance(mul(unit_element(sys), a), a) +
                       l1_distance(mul(a, unit_element(sys)), a),
                   cfg.tol);
    }

    // The two product routes agree on a degree grid.
    for (std::int64_t g1 = -2; g1 <= 2; ++g1)
      for (std::int64_t g2 = -2; g2 <= 2; ++g2) {
        AlgebraElement ca = sampler.algebra_element(sys->shape);
        AlgebraElement cb = sampler.algebra_element(sys->shape);
        L1Element da = delta(sys, ca, GroupElement::scalar(g1), ConstraintMode::Project);
        L1Element db = delta(sys, cb, GroupElement::scalar(g2), ConstraintMode::Project);
        L1Element via_mul = mul(da, db);
        L1Element via_cases =
            monomial_product(sys, da.coeff(GroupElement::scalar(g1)),
                             GroupElement::scalar(g1), db.coeff(GroupElement::scalar(g2)),
                             GroupElement::scalar(g2));
        checks.track("monomial-consistency-" + fx.name, l1_distance(via_mul, via_cases),
                     1e-12);
      }

    // Vanishing tests, including forced zeros; zero_test itself raises if
    // its two routes ever disagree.
    for (int i = 0; i < 50; ++i) {
      L1Element a = random_l1_element(sys, sampler, 2, 3);
      zero_test(a, cfg.tol);
      ZeroTest forced = zero_test(sub(a, a), cfg.tol);
      checks.track("zero-test-" + fx.name, forced.is_zero ? 0.0 : 1.0, 0.5);
    }

    // Norm certificate sanity and gauge invariance.
    L1Element gen = u(sys, GroupElement::scalar(1));
    NormCertificate cert = cstar_norm_bounds(gen, 6, cfg.growth_bound);
    checks.track("certificate-sandwich-" + fx.name, std::max(0.0, cert.lo - cert.hi), cfg.tol);
    for (int i = 0; i < 8; ++i) {
      std::vector<double> theta(static_cast<std::size_t>(sys->group_dim));
      for (auto& t : theta) t = sampler.uniform_real(0, 6.283185307179586);
      L1Element a = random_l1_element(sys, sampler, 2, 3);
      a = scale(Complex(1.0 / std::max(1.0, a.l1_norm()), 0), a);
      checks.track("gauge-invariance-" + fx.name,
                   std::abs(e0_power_norm(a, 2) - e0_power_norm(gauge_twist(a, theta), 2)),
                   1e-12);
    }

    // Truncated regular representation.
    TruncatedRep rep = build_regrep(sys, StateFunctional::trace_state(sys->shape), 8,
                                    {GroupElement::scalar(1)});
    std::vector<GroupElement> xs{GroupElement::scalar(0), GroupElement::scalar(1),
                                 GroupElement::scalar(2)};
    std::vector<std::pair<GroupElement, GroupElement>> pairs{
        {GroupElement::scalar(1), GroupElement::scalar(1)},
        {GroupElement::scalar(1), GroupElement::scalar(2)}};
    CheckReport rr = covariance_check(rep, xs, pairs, sampler, 4, 4, cfg.tol);
    rr.merge(adjointness_check(rep, xs, sampler, 4, cfg.tol));
    rr.merge(pi_homomorphism_check(rep, sampler, 4, cfg.tol));
    std::vector<L1Element> samples;
    for (int i = 0; i < 4; ++i) samples.push_back(random_l1_element(sys, sampler, 2, 3));
    rr.merge(faithfulness_criterion_check(rep, samples, 4, cfg.tol));
    for (auto& item : rr.items) item.name += "-" + fx.name;
    checks.merge(rr);
  }

  report["fixtures"] = std::move(fixture_results);
  detail::attach_summary(report, checks);
  return {checks.pass() ? 0 : 1, report};
}

inline RunResult run(const RunConfig& cfg) {
  try {
    switch (cfg.command) {
      case Command::CheckSystem: return run_check_system(cfg);
      case Command::Transfer: return run_transfer(cfg);
      case Command::Mul: return run_mul(cfg);
      case Command::Norm: return run_norm(cfg);
      case Command::RegRep: return run_regrep(cfg);
      case Command::SelfTest: return run_selftest(cfg);
      case Command::ListFixtures: return run_list_fixtures(cfg);
    }
    fail(ErrorCode::ConfigError, "unknown command");
  } catch (const Error& e) {
    Json report = detail::base_report(cfg.command, cfg);
    report["error"] = Json::object(
        {{"code", error_code_name(e.code())}, {"message", e.what()}});
    report["summary"] = Json::object({{"pass", false}, {"checks", 0}, {"failed", 1}});
    bool config_error =
        e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::SystemLoadError;
    return {config_error ? 2 : 1, report};
  }
}

}  // namespace semicross
