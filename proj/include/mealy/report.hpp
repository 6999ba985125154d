#pragma once

#include "json.hpp"
#include "mealy/automaton.hpp"
#include "mealy/classify.hpp"
#include "mealy/order.hpp"

namespace mealy {

/// Flat document with the ClassReport field names; activity as a string
/// ("polynomial(0)", "finitary", "not-polynomial") or null.
nlohmann::ordered_json class_report_to_json(const ClassReport& report);

/// Certificate with rule tag, subject, scope and a rule-specific witness,
/// using the automaton's state and letter names.
nlohmann::ordered_json certificate_to_json(const MealyAutomaton& a, const OrderCertificate& c);

}  // namespace mealy
