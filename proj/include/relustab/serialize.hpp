#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "relustab/canonical.hpp"
#include "relustab/landscape.hpp"
#include "relustab/metrics.hpp"
#include "relustab/pathology.hpp"
#include "relustab/reparam.hpp"
#include "relustab/types.hpp"

namespace relustab {

// Insertion-ordered JSON keeps the wire field order stable.
using ojson = nlohmann::ordered_json;

using AnyNetwork = std::variant<ShallowNet, BiasedShallowNet>;

namespace detail {

inline ojson matrix_rows(const Matrix& M) {
  ojson rows = ojson::array();
  for (int i = 0; i < M.rows(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ojson vector_entries(const Vector& v) {
  ojson arr = ojson::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

inline void require_keys(const ojson& j, const std::vector<std::string>& required,
                         const std::vector<std::string>& optional,
                         const std::string& what) {
  if (!j.is_object()) throw UsageError(what + ": expected a JSON object");
  for (const auto& key : required)
    if (!j.contains(key)) throw UsageError(what + ": missing field \"" + key + "\"");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    bool known = std::find(required.begin(), required.end(), key) != required.end() ||
                 std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) throw UsageError(what + ": unknown field \"" + key + "\"");
  }
}

inline double as_number(const ojson& j, const std::string& what) {
  if (!j.is_number()) throw UsageError(what + ": expected a number");
  return j.get<double>();
}

inline Matrix parse_matrix(const ojson& j, int rows, int cols, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw UsageError(what + ": expected " + std::to_string(rows) + " rows");
  Matrix M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw UsageError(what + ": row " + std::to_string(i) + " must have " +
                       std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c)
      M(i, c) = as_number(row[static_cast<size_t>(c)], what);
  }
  return M;
}

inline Vector parse_vector(const ojson& j, int len, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != len)
    throw UsageError(what + ": expected " + std::to_string(len) + " entries");
  Vector v(len);
  for (int i = 0; i < len; ++i) v(i) = as_number(j[static_cast<size_t>(i)], what);
  return v;
}

}  // namespace detail

inline ojson to_json(const ShallowNet& net) {
  ojson j;
  j["d"] = net.d();
  j["m"] = net.m();
  j["D"] = net.out_dim();
  j["A"] = detail::matrix_rows(net.A);
  j["C"] = detail::matrix_rows(net.C);
  return j;
}

inline ojson to_json(const BiasedShallowNet& net) {
  ojson j;
  j["d"] = net.d();
  j["m"] = net.m();
  j["D"] = net.out_dim();
  j["A"] = detail::matrix_rows(net.A);
  j["C"] = detail::matrix_rows(net.C);
  j["b"] = detail::vector_entries(net.b);
  j["e"] = detail::vector_entries(net.e);
  return j;
}

// Parses {"d","m","D","A","C"[,"b","e"]}; unknown keys are rejected. The
// biased form is returned when either bias field is present (a missing one
// defaults to zero).
inline AnyNetwork parse_network(const ojson& j) {
  detail::require_keys(j, {"d", "m", "D", "A", "C"}, {"b", "e"}, "network");
  int d = j["d"].is_number_integer() ? j["d"].get<int>()
                                     : throw UsageError("network: d must be an integer");
  int m = j["m"].is_number_integer() ? j["m"].get<int>()
                                     : throw UsageError("network: m must be an integer");
  int D = j["D"].is_number_integer() ? j["D"].get<int>()
                                     : throw UsageError("network: D must be an integer");
  if (d < 1 || m < 1 || D < 1)
    throw UsageError("network: dimensions must be positive");
  Matrix A = detail::parse_matrix(j["A"], m, d, "network A");
  Matrix C = detail::parse_matrix(j["C"], D, m, "network C");
  if (!j.contains("b") && !j.contains("e"))
    return ShallowNet(std::move(A), std::move(C));
  Vector b = j.contains("b") ? detail::parse_vector(j["b"], m, "network b")
                             : Vector(Vector::Zero(m));
  Vector e = j.contains("e") ? detail::parse_vector(j["e"], D, "network e")
                             : Vector(Vector::Zero(D));
  return BiasedShallowNet(std::move(A), std::move(b), std::move(C), std::move(e));
}

inline ShallowNet expect_shallow(AnyNetwork net, const std::string& what) {
  if (std::holds_alternative<BiasedShallowNet>(net))
    throw UsageError(what + ": expected a bias-free network");
  return std::get<ShallowNet>(std::move(net));
}

inline BiasedShallowNet expect_biased(AnyNetwork net) {
  if (std::holds_alternative<BiasedShallowNet>(net))
    return std::get<BiasedShallowNet>(std::move(net));
  ShallowNet s = std::get<ShallowNet>(std::move(net));
  Vector b = Vector::Zero(s.m());
  Vector e = Vector::Zero(s.out_dim());
  return BiasedShallowNet(std::move(s.A), std::move(b), std::move(s.C), std::move(e));
}

inline ojson to_json(const SignPattern& s) {
  ojson arr = ojson::array();
  for (auto bit : s.bits) arr.push_back(static_cast<int>(bit));
  return arr;
}

inline ojson to_json(const SeminormBreakdown& b) {
  ojson j;
  j["value"] = b.value;
  j["argmax_pattern"] = to_json(b.argmax_pattern);
  j["cells"] = b.cells();
  return j;
}

inline ojson to_json(const ConditionReport& rep) {
  ojson j;
  j["beta"] = rep.beta_used;
  j["c1"] = rep.c1_ok;
  j["c2"] = rep.c2_ok;
  j["c3a"] = rep.c3a_ok;
  j["c3b"] = rep.c3b_ok;
  ojson violations = ojson::array();
  for (const auto& v : rep.violations) {
    ojson it;
    it["condition"] = v.condition;
    it["neurons"] = v.neurons;
    it["value"] = v.value;
    violations.push_back(std::move(it));
  }
  j["violations"] = std::move(violations);
  return j;
}

inline ojson to_json(const Certificate& cert) {
  ojson j;
  j["phi"] = to_json(cert.phi);
  j["r"] = cert.r;
  j["bound"] = cert.bound;
  j["achieved"] = cert.achieved;
  j["mode"] = cert.restricted ? "restricted" : "general";
  if (!cert.restricted) j["beta"] = cert.beta;
  ojson cases = ojson::array();
  for (auto c : cert.matching.cases) cases.push_back(to_string(c));
  j["cases"] = std::move(cases);
  return j;
}

// Accepts a bare certificate object or the CLI wrapper around one.
inline Certificate parse_certificate(const ojson& in) {
  const ojson& j = in.is_object() && in.contains("certificate") ? in["certificate"] : in;
  detail::require_keys(j, {"phi", "r", "bound", "achieved", "mode"},
                       {"beta", "cases"}, "certificate");
  ShallowNet phi = expect_shallow(parse_network(j["phi"]), "certificate phi");
  Certificate cert{std::move(phi)};
  cert.r = detail::as_number(j["r"], "certificate r");
  cert.bound = detail::as_number(j["bound"], "certificate bound");
  cert.achieved = detail::as_number(j["achieved"], "certificate achieved");
  std::string mode = j["mode"].get<std::string>();
  if (mode == "restricted") {
    cert.restricted = true;
  } else if (mode == "general") {
    cert.restricted = false;
    if (!j.contains("beta"))
      throw UsageError("certificate: general mode requires beta");
    cert.beta = detail::as_number(j["beta"], "certificate beta");
  } else {
    throw UsageError("certificate: mode must be \"restricted\" or \"general\"");
  }
  return cert;
}

inline ojson to_json(const Dataset& data) {
  ojson samples = ojson::array();
  for (const auto& [x, y] : data.samples) {
    ojson s;
    s["x"] = detail::vector_entries(x);
    s["y"] = detail::vector_entries(y);
    samples.push_back(std::move(s));
  }
  ojson j;
  j["samples"] = std::move(samples);
  j["augmented"] = data.augmented;
  return j;
}

inline Dataset parse_dataset(const ojson& j) {
  detail::require_keys(j, {"samples"}, {"augmented"}, "dataset");
  if (!j["samples"].is_array() || j["samples"].empty())
    throw UsageError("dataset: samples must be a nonempty array");
  std::vector<std::pair<Vector, Vector>> samples;
  for (const auto& s : j["samples"]) {
    detail::require_keys(s, {"x", "y"}, {}, "dataset sample");
    int dx = static_cast<int>(s["x"].size());
    int dy = static_cast<int>(s["y"].size());
    samples.emplace_back(detail::parse_vector(s["x"], dx, "sample x"),
                         detail::parse_vector(s["y"], dy, "sample y"));
  }
  bool aug = j.contains("augmented") && j["augmented"].get<bool>();
  return Dataset(std::move(samples), aug);
}

inline ojson to_json(const Measurement& mm) {
  ojson j;
  j["family"] = to_string(mm.family);
  j["k"] = mm.k;
  j["sobolev_distance"] = mm.sobolev_dist;
  j["closed_form"] = mm.closed_form;
  j["seminorm_g"] = mm.seminorm_g;
  j["min_param_distance"] = mm.min_param_distance;
  j["param_lower_bound"] = mm.param_lower_bound;
  if (mm.uniform_norm) j["uniform_norm"] = *mm.uniform_norm;
  if (mm.loss_gamma) j["loss_gamma"] = *mm.loss_gamma;
  if (mm.loss_g) j["loss_g"] = *mm.loss_g;
  return j;
}

}  // namespace relustab
