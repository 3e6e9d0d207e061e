#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semicross/action.hpp"
#include "semicross/checks.hpp"
#include "semicross/l1x.hpp"
#include "semicross/norms.hpp"

namespace semicross {

using Json = nlohmann::json;

// --- group elements --------------------------------------------------------

inline Json group_to_json(const GroupElement& g) {
  Json j = Json::array();
  for (auto v : g.coords) j.push_back(v);
  return j;
}

inline GroupElement group_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    fail(ErrorCode::SystemLoadError, "group element must be a nonempty integer array");
  std::vector<std::int64_t> c;
  for (const auto& v : j) {
    if (!v.is_number_integer())
      fail(ErrorCode::SystemLoadError, "group element coordinates must be integers");
    c.push_back(v.get<std::int64_t>());
  }
  return GroupElement(std::move(c));
}

// --- complex entries and elements ------------------------------------------

inline Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  fail(ErrorCode::SystemLoadError, "complex entry must be a number or [re, im]");
}

inline Json shape_to_json(const AlgebraShape& s) {
  Json j = Json::array();
  for (int n : s.block_sizes) j.push_back(n);
  return j;
}

inline AlgebraShape shape_from_json(const Json& j) {
  if (j.is_object() && j.contains("points")) return AlgebraShape::points(j["points"].get<int>());
  if (!j.is_array() || j.empty())
    fail(ErrorCode::SystemLoadError, "shape must be an array of block sizes");
  std::vector<int> sizes;
  for (const auto& v : j) sizes.push_back(v.get<int>());
  return AlgebraShape(std::move(sizes));
}

/// Element wire format: one flat row-major entry list per block.
inline Json element_to_json(const AlgebraElement& a) {
  Json blocks = Json::array();
  for (int i = 0; i < a.shape.blocks(); ++i) {
    int n = a.shape.block_size(i);
    Json b = Json::array();
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) b.push_back(complex_to_json(a.block(i)(r, c)));
    blocks.push_back(std::move(b));
  }
  return blocks;
}

inline AlgebraElement element_from_json(const AlgebraShape& s, const Json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != s.blocks())
    fail(ErrorCode::SystemLoadError, "element must list one block per shape entry");
  AlgebraElement a = AlgebraElement::zero(s);
  for (int i = 0; i < s.blocks(); ++i) {
    int n = s.block_size(i);
    const Json& b = j[static_cast<std::size_t>(i)];
    if (!b.is_array() || static_cast<int>(b.size()) != n * n)
      fail(ErrorCode::SystemLoadError,
           "block " + std::to_string(i) + " must have " + std::to_string(n * n) + " entries");
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        a.block(i)(r, c) = complex_from_json(b[static_cast<std::size_t>(r * n + c)]);
  }
  return a;
}

// --- endomorphism matrices ---------------------------------------------------

/// Generator wire format: a flat row-major dim^2 complex matrix, nested rows,
/// or a commutative point map {"map": [index-or-null, ...]}.
inline LinearMap generator_from_json(const AlgebraShape& s, const Json& j) {
  const int dim = s.dim();
  if (j.is_object() && j.contains("map")) {
    for (int n : s.block_sizes)
      if (n != 1)
        fail(ErrorCode::SystemLoadError, "point maps require a commutative shape (all blocks 1x1)");
    const Json& pm = j["map"];
    if (!pm.is_array() || static_cast<int>(pm.size()) != dim)
      fail(ErrorCode::SystemLoadError, "point map must list one entry per point");
    Matrix m = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      const Json& e = pm[static_cast<std::size_t>(i)];
      if (e.is_null()) continue;
      int src = e.get<int>();
      if (src < 0 || src >= dim)
        fail(ErrorCode::SystemLoadError, "point map index out of range");
      m(i, src) = 1.0;
    }
    return LinearMap(s, std::move(m));
  }

  if (!j.is_array() || j.empty()) fail(ErrorCode::SystemLoadError, "generator must be a matrix");
  Matrix m(dim, dim);
  bool nested = static_cast<int>(j.size()) == dim && j[0].is_array() &&
                static_cast<int>(j[0].size()) == dim;
  if (nested) {
    for (int r = 0; r < dim; ++r) {
      const Json& row = j[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != dim)
        fail(ErrorCode::SystemLoadError, "generator rows must have dim entries");
      for (int c = 0; c < dim; ++c)
        m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
    return LinearMap(s, std::move(m));
  }
  if (static_cast<int>(j.size()) == dim * dim) {
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        m(r, c) = complex_from_json(j[static_cast<std::size_t>(r * dim + c)]);
    return LinearMap(s, std::move(m));
  }
  fail(ErrorCode::SystemLoadError, "generator matrix has the wrong size");
}

/// System description: { "shape": [...] | {"points": n}, "group_dim": k,
/// "generators": [...], "commutative_map": [...], "tol": 1e-9 }.
struct SystemDescription {
  AlgebraShape shape;
  int group_dim = 1;
  std::vector<LinearMap> generators;
  double tol = 1e-9;
  std::string name;
};

inline SystemDescription system_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::SystemLoadError, "system must be a JSON object");
  SystemDescription d;
  if (j.contains("shape"))
    d.shape = shape_from_json(j["shape"]);
  else if (j.contains("points"))
    d.shape = AlgebraShape::points(j["points"].get<int>());
  else
    fail(ErrorCode::SystemLoadError, "system needs a shape");
  d.group_dim = j.value("group_dim", 1);
  d.tol = j.value("tol", 1e-9);
  d.name = j.value("name", std::string{});

  if (j.contains("commutative_map")) {
    Json wrapped = Json::object({{"map", j["commutative_map"]}});
    d.generators.push_back(generator_from_json(d.shape, wrapped));
  }
  if (j.contains("generators"))
    for (const auto& g : j["generators"]) d.generators.push_back(generator_from_json(d.shape, g));
  if (d.generators.empty()) fail(ErrorCode::SystemLoadError, "system needs generators");
  if (static_cast<int>(d.generators.size()) != d.group_dim)
    fail(ErrorCode::SystemLoadError, "expected one generator per group dimension");
  return d;
}

inline EndoAction action_from_description(const SystemDescription& d) {
  std::vector<Endomorphism> gens;
  gens.reserve(d.generators.size());
  for (const auto& g : d.generators) gens.push_back(validate_endomorphism(g, d.tol));
  return EndoAction::from_generators(std::move(gens), d.tol);
}

// --- l1 elements -------------------------------------------------------------

inline Json l1_to_json(const L1Element& a) {
  Json coeffs = Json::array();
  for (const auto& [g, c] : a.coeffs())
    coeffs.push_back(Json::object({{"g", group_to_json(g)}, {"value", element_to_json(c)}}));
  return Json::object({{"coeffs", std::move(coeffs)}});
}

inline L1Element l1_from_json(SystemPtr sys, const Json& j,
                              ConstraintMode mode = ConstraintMode::Strict) {
  if (!j.is_object() || !j.contains("coeffs"))
    fail(ErrorCode::SystemLoadError, "element must be {\"coeffs\": [...]}");
  L1Element r = L1Element::zero(sys);
  for (const auto& entry : j["coeffs"]) {
    GroupElement g = group_from_json(entry.at("g"));
    if (g.dim() != sys->group_dim)
      fail(ErrorCode::SystemLoadError, "coefficient degree has wrong dimension");
    AlgebraElement c = element_from_json(sys->shape, entry.at("value"));
    r = add(r, delta(sys, c, g, mode));
  }
  return r;
}

// --- reports ------------------------------------------------------------------

inline Json check_result_to_json(const CheckResult& c) {
  Json j = Json::object({{"name", c.name},
                         {"residual", c.residual},
                         {"tol", c.tol},
                         {"pass", c.pass}});
  if (c.x) j["x"] = group_to_json(*c.x);
  if (c.y) j["y"] = group_to_json(*c.y);
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

inline Json check_report_to_json(const CheckReport& r) {
  Json items = Json::array();
  for (const auto& c : r.items) items.push_back(check_result_to_json(c));
  return items;
}

inline Json witness_to_json(const Witness& w) {
  Json j = Json::object({{"check", w.check}, {"residual", w.residual}});
  if (w.x) j["x"] = group_to_json(*w.x);
  if (w.y) j["y"] = group_to_json(*w.y);
  if (!w.detail.empty()) j["detail"] = w.detail;
  return j;
}

inline Json certificate_to_json(const NormCertificate& c) {
  return Json::object({{"k", c.k},
                       {"lower", c.lower},
                       {"upper", c.upper},
                       {"f_sizes", c.f_sizes},
                       {"interval", Json::array({c.lo, c.hi})}});
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::SystemLoadError, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::SystemLoadError, "parse error in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace semicross
