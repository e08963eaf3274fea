#pragma once

#include <string>

#include "json.hpp"

#include "amoebakit/exponential_sum.hpp"
#include "amoebakit/laurent.hpp"

namespace amoebakit {

/// {"n": int, "terms": [{"e": [ints], "c": [re, im]}]}
LaurentPolynomial laurent_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LaurentPolynomial& p);

/// Same layout with "f": [reals] in place of "e".
ExponentialSum exponential_sum_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExponentialSum& f);

/// Parse text; errors carry the byte offset or the JSON path of the fault.
LaurentPolynomial parse_laurent(const std::string& text);
ExponentialSum parse_exponential_sum(const std::string& text);

}  // namespace amoebakit
