// SPDX-License-Identifier: Apache-2.0

#include "serialize.hpp"

namespace f4solv {

std::string rational_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Json to_json(const ExpVec& e) { return Json::array({e[0], e[1], e[2], e[3]}); }

Json to_json(const MPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms())
    terms.push_back({{"exponents", to_json(e)}, {"coeff", rational_string(c)}});
  return {{"frame", std::string(frame_name(p.frame()))}, {"terms", std::move(terms)}};
}

MPoly mpoly_from_json(const Json& j) {
  try {
    MPoly p(parse_frame(j.at("frame").get<std::string>()));
    for (const auto& t : j.at("terms")) {
      const auto ex = t.at("exponents").get<std::vector<int>>();
      if (ex.size() != 4 || std::any_of(ex.begin(), ex.end(), [](int v) { return v < 0; }))
        throw ParseError("exponents must be four non-negative integers");
      p.add_term({ex[0], ex[1], ex[2], ex[3]}, parse_rational(t.at("coeff").get<std::string>()));
    }
    return p;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed polynomial JSON: ") + e.what());
  }
}

Json to_json(const SecondOrderOp& op) {
  Json a = Json::array(), b = Json::array();
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j)
      if (!op.a(i, j).is_zero())
        a.push_back({{"a", kVariableLabels[i]}, {"b", kVariableLabels[j]}, {"poly", to_json(op.a(i, j))}});
    if (!op.b(i).is_zero()) b.push_back({{"a", kVariableLabels[i]}, {"poly", to_json(op.b(i))}});
  }
  return {{"frame", std::string(frame_name(op.frame()))}, {"A", a}, {"B", b}, {"C", to_json(op.c())}};
}

Json to_json(const CharVector& f) {
  const auto& w = f.weights();
  return Json::array({w[0], w[1], w[2], w[3]});
}

Json to_json(const ClosureWitness& w) {
  return {{"monomial", to_json(w.monomial)},
          {"offending_term", to_json(w.offending)},
          {"coeff", rational_string(w.coefficient)}};
}

Json to_json(const ModelParams& p) {
  Json j{{"model", std::string(model_name(p.model))},
         {"nu", rational_string(p.nu)},
         {"mu", rational_string(p.mu)}};
  if (p.omega) j["omega"] = rational_string(*p.omega);
  if (p.beta2) j["beta2"] = rational_string(*p.beta2);
  return j;
}

Json to_json(const FlagScan& scan) {
  Json preserved = Json::array(), minimal = Json::array(), witnesses = Json::object();
  for (const auto& f : scan.preserved) preserved.push_back(to_json(f));
  for (const auto& f : scan.minimal) minimal.push_back(to_json(f));
  for (const auto& [f, w] : scan.witnesses) witnesses[f.to_string()] = to_json(w);
  return {{"bound", scan.bound},
          {"level", scan.level},
          {"preserved", preserved},
          {"minimal", minimal},
          {"witnesses", witnesses}};
}

Json to_json(const AmbiguitySearch& search) {
  Json hits = Json::array(), missing = Json::array();
  for (const auto& h : search.hits) {
    const auto& p = h.params;
    hits.push_back({{"flag", to_json(h.flag)},
                    {"params",
                     {{"A", rational_string(p.a)},
                      {"B1", rational_string(p.b1)},
                      {"B2", rational_string(p.b2)},
                      {"C1", rational_string(p.c1)},
                      {"C2", rational_string(p.c2)},
                      {"C3", rational_string(p.c3)},
                      {"C4", rational_string(p.c4)}}}});
  }
  for (const auto& f : search.not_found) missing.push_back(to_json(f));
  return {{"grid", search.grid},
          {"candidates_tried", search.candidates_tried},
          {"hits", hits},
          {"not_found", missing}};
}

ModelParams params_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ParseError("parameter file must hold a JSON object");
    auto field = [&](const char* key) -> std::optional<Rational> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      const auto& v = j.at(key);
      if (v.is_string()) return parse_rational(v.get<std::string>());
      if (v.is_number_integer()) return Rational(v.get<long>());
      throw ParseError(std::string("'") + key + "' must be a \"num/den\" string");
    };
    ModelParams p;
    p.model = parse_model(j.at("model").get<std::string>());
    auto nu = field("nu"), mu = field("mu");
    if (!nu || !mu) throw ParseError("parameter file needs nu and mu");
    p.nu = *nu;
    p.mu = *mu;
    p.omega = field("omega");
    p.beta2 = field("beta2");
    p.validate();
    return p;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed parameter JSON: ") + e.what());
  }
}

}  // namespace f4solv
