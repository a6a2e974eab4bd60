#pragma once

#include "json.hpp"

#include "pairedk/rational.hpp"

namespace pairedk {

/// Parses {"coeffs": {...}} or zero-pole-gain JSON (MalformedSymbol on bad input).
/// Location tags in the zpk form override numeric classification.
Rational symbol_from_json(const nlohmann::json& j);

/// Laurent polynomials print in coefficient form, everything else as zpk.
nlohmann::json symbol_to_json(const Rational& f);

}  // namespace pairedk
