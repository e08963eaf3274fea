#include "amoebakit/poly_io.hpp"

#include <cmath>

#include "amoebakit/error.hpp"

namespace amoebakit {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw UsageError(where + ": " + what);
}

int read_dim(const json& j) {
  if (!j.is_object()) fail("$", "expected an object");
  if (!j.contains("n")) fail("$.n", "missing");
  if (!j["n"].is_number_integer()) fail("$.n", "expected integer");
  const int n = j["n"].get<int>();
  if (n < 1) fail("$.n", "must be positive");
  if (!j.contains("terms") || !j["terms"].is_array()) fail("$.terms", "expected array");
  if (j["terms"].empty()) fail("$.terms", "must be nonempty");
  return n;
}

cplx read_coef(const json& c, const std::string& where) {
  if (c.is_number()) return {c.get<double>(), 0.0};
  if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
    fail(where, "expected [re, im]");
  }
  return {c[0].get<double>(), c[1].get<double>()};
}

json coef_json(cplx c) { return json::array({c.real(), c.imag()}); }

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError("parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace

LaurentPolynomial laurent_from_json(const json& j) {
  const int n = read_dim(j);
  std::vector<Term> terms;
  for (std::size_t i = 0; i < j["terms"].size(); ++i) {
    const std::string at = "$.terms[" + std::to_string(i) + "]";
    const json& t = j["terms"][i];
    if (!t.is_object()) fail(at, "expected object");
    if (!t.contains("e") || !t["e"].is_array()) fail(at + ".e", "expected integer array");
    if (static_cast<int>(t["e"].size()) != n) fail(at + ".e", "length differs from n");
    std::vector<int> e;
    for (std::size_t k = 0; k < t["e"].size(); ++k) {
      if (!t["e"][k].is_number_integer()) {
        fail(at + ".e[" + std::to_string(k) + "]", "expected integer");
      }
      e.push_back(t["e"][k].get<int>());
    }
    if (!t.contains("c")) fail(at + ".c", "missing");
    terms.push_back({std::move(e), read_coef(t["c"], at + ".c")});
  }
  return LaurentPolynomial(n, std::move(terms));
}

json to_json(const LaurentPolynomial& p) {
  json terms = json::array();
  for (const auto& t : p.terms()) terms.push_back({{"e", t.exponent}, {"c", coef_json(t.coef)}});
  return {{"n", p.dim()}, {"terms", terms}};
}

ExponentialSum exponential_sum_from_json(const json& j) {
  const int n = read_dim(j);
  std::vector<ExpTerm> terms;
  for (std::size_t i = 0; i < j["terms"].size(); ++i) {
    const std::string at = "$.terms[" + std::to_string(i) + "]";
    const json& t = j["terms"][i];
    if (!t.is_object()) fail(at, "expected object");
    if (!t.contains("f") || !t["f"].is_array()) fail(at + ".f", "expected real array");
    if (static_cast<int>(t["f"].size()) != n) fail(at + ".f", "length differs from n");
    std::vector<double> f;
    for (std::size_t k = 0; k < t["f"].size(); ++k) {
      if (!t["f"][k].is_number()) fail(at + ".f[" + std::to_string(k) + "]", "expected number");
      f.push_back(t["f"][k].get<double>());
    }
    if (!t.contains("c")) fail(at + ".c", "missing");
    terms.push_back({std::move(f), read_coef(t["c"], at + ".c")});
  }
  return ExponentialSum(n, std::move(terms));
}

json to_json(const ExponentialSum& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) terms.push_back({{"f", t.frequency}, {"c", coef_json(t.coef)}});
  return {{"n", f.dim()}, {"terms", terms}};
}

LaurentPolynomial parse_laurent(const std::string& text) { return laurent_from_json(parse_text(text)); }

ExponentialSum parse_exponential_sum(const std::string& text) {
  return exponential_sum_from_json(parse_text(text));
}

}  // namespace amoebakit
