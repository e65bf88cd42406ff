#pragma once

// JSON formats. Complex numbers are [re, im] pairs, matrices are row-major
// nested arrays, and "n/d" strings are accepted wherever a float is.
//
//   system:     {"d": int, "diagonal": bool,
//                "index": [{"label": str, "f": float, "s": [[[re,im],...],...]}, ...]}
//               or {"family": "gamma_corner", "d": int, "gamma": float}
//   stage spec: {"p": float-or-"n/d", "stages": [{"d": int, "system": <system>}, ...]}
//   family:     {"family": "power", "c": float, "a": float}        gamma(n) = 1 + c n^-a
//               {"family": "geometric", "c": float, "q": float}    gamma(n) = 1 + c q^n
//               {"family": "log", "c": float, "a": float}          gamma(n) = 1 + c / (n ln(n+1)^a)
//               optional "d" (default 2)

#include "lpuhf/criteria.hpp"
#include "lpuhf/tensor_type.hpp"

#include <nlohmann/json.hpp>

namespace lpuhf::io {

using nlohmann::json;

/// Parses a float or an "n/d" / decimal string.
double number_from_json(const json& j);
Complex complex_from_json(const json& j);
CMatrix matrix_from_json(const json& j);
json matrix_to_json(const CMatrix& m);
json vector_to_json(const CVector& v);

/// Validates on load unless told not to; throws InputError for malformed or
/// invalid systems.
SimilaritySystem system_from_json(const json& j, bool validate = true);
json system_to_json(const SimilaritySystem& s);

StageSpec stage_spec_from_json(const json& j);
GammaFamily family_from_json(const json& j);
/// A family document or an explicit stage spec.
StageRecipe recipe_from_json(const json& j);

json to_json(const NormInterval& n);
json to_json(const SeriesReport& r);

}  // namespace lpuhf::io
