#include "gpbound/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gpbound {

using nlohmann::json;

namespace {

// JSON has no infinities or NaN; those become null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json alpha_json(const ExponentVector& a) {
  json out = json::array();
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i]);
  return out;
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw FormatError(std::string(what) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Polynomial polynomial_from_json(const json& j, std::size_t n) {
  try {
    if (j.is_string()) return parse_polynomial(j.get<std::string>(), n);
    if (!j.is_object()) throw FormatError("polynomial must be a string or an object");
    if (j.contains("n") && j.at("n").get<std::size_t>() != n)
      throw FormatError("polynomial variable count does not match the problem");
    std::vector<std::pair<ExponentVector, double>> terms;
    for (const auto& t : j.at("terms")) {
      auto alpha = t.at("alpha").get<std::vector<int>>();
      if (alpha.size() != n) throw FormatError("exponent vector has the wrong length");
      terms.emplace_back(ExponentVector(alpha), t.at("c").get<double>());
    }
    return Polynomial(n, terms);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad polynomial: ") + e.what());
  } catch (const PolynomialError& e) {
    throw FormatError(std::string("bad polynomial: ") + e.what());
  }
}

json polynomial_to_json(const Polynomial& f) {
  json terms = json::array();
  for (const auto& [alpha, c] : f.terms()) terms.push_back({{"alpha", alpha_json(alpha)}, {"c", c}});
  return {{"n", f.n()}, {"terms", terms}};
}

ProblemFile parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("problem must be a JSON object");
  try {
    if (!j.contains("n") || !j.contains("f")) throw FormatError("problem needs \"n\" and \"f\"");
    const auto n = j.at("n").get<std::size_t>();
    if (n == 0) throw FormatError("\"n\" must be positive");
    ProblemFile out;
    auto& p = out.problem;
    p.f = polynomial_from_json(j.at("f"), n);
    if (j.contains("g")) {
      if (!j.at("g").is_array()) throw FormatError("\"g\" must be an array");
      for (const auto& gj : j.at("g")) p.g.push_back(polynomial_from_json(gj, n));
    }
    p.d = j.contains("d") ? j.at("d").get<int>() : default_degree_bound(p.f, p.g);
    if (j.contains("A") && !j.at("A").is_null()) {
      const auto& rows = j.at("A");
      if (!rows.is_array()) throw FormatError("\"A\" must be an array of rows");
      const auto size = static_cast<Eigen::Index>(rows.size());
      Eigen::MatrixXd a(size, size);
      for (Eigen::Index r = 0; r < size; ++r) {
        auto row = numbers(rows[static_cast<std::size_t>(r)], "each row of \"A\"");
        if (static_cast<Eigen::Index>(row.size()) != size) throw FormatError("\"A\" must be square");
        for (Eigen::Index c = 0; c < size; ++c) a(r, c) = row[static_cast<std::size_t>(c)];
      }
      p.A = TransformMatrix(a);
    }
    if (j.contains("path")) out.path = parse_path(j.at("path").get<std::string>());
    if (j.contains("box") && !j.at("box").is_null()) {
      auto b = numbers(j.at("box"), "\"box\"");
      p.box = Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    }
    p.validate();
    return out;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad problem: ") + e.what());
  } catch (const ProblemError& e) {
    throw FormatError(std::string("bad problem: ") + e.what());
  }
}

ProblemFile read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

json problem_to_json(const ProblemFile& pf) {
  const auto& p = pf.problem;
  json g = json::array();
  for (const auto& gj : p.g) g.push_back(polynomial_to_json(gj));
  json out = {{"n", p.n()}, {"d", p.d}, {"f", polynomial_to_json(p.f)}, {"g", g}, {"path", to_string(pf.path)}};
  if (p.A) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < p.A->matrix().rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < p.A->matrix().cols(); ++c) row.push_back(p.A->matrix()(r, c));
      rows.push_back(row);
    }
    out["A"] = rows;
  }
  if (p.box) out["box"] = std::vector<double>(p.box->data(), p.box->data() + p.box->size());
  return out;
}

json result_to_json(const BoundResult& r) {
  json out;
  out["status"] = to_string(r.status);
  out["value"] = r.status == BoundStatus::Bound ? number_or_null(r.value) : json(nullptr);
  if (r.status == BoundStatus::NegInfinity) out["value_text"] = "-inf";
  out["theorem_path"] = to_string(r.path);
  if (r.A) {
    json rows = json::array();
    const auto& a = r.A->matrix();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(a(i, k));
      rows.push_back(row);
    }
    out["A"] = rows;
  } else {
    out["A"] = nullptr;
  }
  out["generator_subset"] = r.generator_subset;
  json z = json::array(), w = json::array();
  for (const auto& e : r.witness.z) z.push_back({{"alpha", alpha_json(e.alpha)}, {"i", e.i + 1}, {"value", e.value}});
  for (const auto& e : r.witness.w)
    w.push_back({{"alpha", alpha_json(e.alpha)}, {"value", e.value}, {"eliminated", e.eliminated}});
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  out["witness"] = {{"z", z}, {"w", w}, {"mu", vec(r.witness.mu)}, {"lambda", vec(r.witness.lambda)}};
  out["solver_status"] = gp::to_string(r.solver_status);
  out["kkt_residual"] = number_or_null(r.kkt_residual);
  out["diagnostics"] = r.diagnostics;
  return out;
}

json trivial_to_json(const TrivialBoundReport& r) {
  json terms = json::array();
  for (const auto& [alpha, v] : r.per_term) terms.push_back({{"alpha", alpha_json(alpha)}, {"contribution", v}});
  return {{"f_tr", r.f_tr}, {"delta_prime", terms}};
}

}  // namespace gpbound
