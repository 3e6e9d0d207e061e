#pragma once

#include <functional>
#include <string>
#include <vector>

#include "semicross/action.hpp"

namespace semicross {

/// Built-in example system with its expected analysis outcome.
struct Fixture {
  std::string name;
  std::string description;
  AlgebraShape shape;
  int group_dim = 1;
  bool expect_representable = true;
  std::string notes;
  std::function<EndoAction(double tol)> make_action;
};

namespace detail {

inline Matrix fixture_matrix(int dim, const std::vector<std::pair<std::pair<int, int>, double>>& entries) {
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& [rc, v] : entries) m(rc.first, rc.second) = v;
  return m;
}

}  // namespace detail

inline const std::vector<Fixture>& fixture_catalog() {
  static const std::vector<Fixture> fixtures = [] {
    std::vector<Fixture> fs;

    // C^2 with the one-sided shift (l1, l2) -> (l2, 0); the generator kills
    // the algebra in two steps.
    fs.push_back(Fixture{
        "S2",
        "A = C^2, generator (l1,l2) -> (l2,0); nilpotent beyond degree one",
        AlgebraShape({1, 1}),
        1,
        true,
        "transfer map (a1,a2) -> (0,a1); range projection at 1 is (0,1)",
        [](double tol) {
          Matrix m = detail::fixture_matrix(2, {{{0, 1}, 1.0}});
          return EndoAction::cyclic(validate_endomorphism(m, AlgebraShape({1, 1}), tol), tol);
        }});

    // C^2 with the coordinate swap, an automorphism; the transfer map is the
    // inverse swap and every range projection is full.
    fs.push_back(Fixture{
        "SAut",
        "A = C^2, generator = coordinate swap (an automorphism)",
        AlgebraShape({1, 1}),
        1,
        true,
        "transfer map = swap; unit images all 1",
        [](double tol) {
          Matrix m = detail::fixture_matrix(2, {{{0, 1}, 1.0}, {{1, 0}, 1.0}});
          return EndoAction::cyclic(validate_endomorphism(m, AlgebraShape({1, 1}), tol), tol);
        }});

    // M2 (+) C with (m, l) -> (l I, l): unital, but the range is a line while
    // the corner is everything, so the hereditary condition fails at 1.
    fs.push_back(Fixture{
        "SNeg",
        "A = M2 (+) C, generator (m,l) -> (l I, l); hereditary condition fails",
        AlgebraShape({2, 1}),
        1,
        false,
        "not finely representable: range of alpha_1 is a line inside a full corner",
        [](double tol) {
          Matrix m = detail::fixture_matrix(
              5, {{{0, 4}, 1.0}, {{3, 4}, 1.0}, {{4, 4}, 1.0}});
          return EndoAction::cyclic(validate_endomorphism(m, AlgebraShape({2, 1}), tol), tol);
        }});

    // M2 (+) C with (m, l) -> (l e11, 0): non-unital corner embedding; the
    // transfer map reads off the (1,1) entry.
    fs.push_back(Fixture{
        "SMx",
        "A = M2 (+) C, generator (m,l) -> (l e11, 0); corner embedding",
        AlgebraShape({2, 1}),
        1,
        true,
        "transfer map (m,l) -> (0, m11); range projection at 1 is (0,1)",
        [](double tol) {
          Matrix m = detail::fixture_matrix(5, {{{0, 4}, 1.0}});
          return EndoAction::cyclic(validate_endomorphism(m, AlgebraShape({2, 1}), tol), tol);
        }});

    return fs;
  }();
  return fixtures;
}

inline const Fixture& find_fixture(const std::string& name) {
  for (const auto& f : fixture_catalog())
    if (f.name == name) return f;
  fail(ErrorCode::ConfigError, "unknown fixture '" + name + "'");
}

inline SystemPtr make_fixture(const std::string& name, const SampleSpec& spec = {},
                              double tol = 1e-9) {
  const Fixture& f = find_fixture(name);
  return analyze_system(f.make_action(tol), spec, tol, 1e-12, f.name);
}

}  // namespace semicross
