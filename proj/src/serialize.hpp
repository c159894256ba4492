// SPDX-License-Identifier: Apache-2.0
//
// JSON and CSV encodings. Rationals are always "num/den" strings.

#pragma once

#include <string>

#include "json.hpp"

#include "diffop.hpp"
#include "flags.hpp"
#include "models_f4.hpp"
#include "spectral.hpp"

namespace f4solv {

using Json = nlohmann::ordered_json;

/// Always "num/den", also for integers.
std::string rational_string(const Rational& q);

Json to_json(const ExpVec& e);
Json to_json(const MPoly& p);
MPoly mpoly_from_json(const Json& j);
Json to_json(const SecondOrderOp& op);
Json to_json(const CharVector& f);
Json to_json(const ClosureWitness& w);
Json to_json(const ModelParams& p);
Json to_json(const FlagScan& scan);
Json to_json(const AmbiguitySearch& search);

/// {model, nu, mu, omega?, beta2?}; throws ParseError on bad input.
ModelParams params_from_json(const Json& j);

}  // namespace f4solv
