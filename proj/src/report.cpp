#include "mealy/report.hpp"

#include "mealy/io.hpp"

namespace mealy {
namespace {

using ojson = nlohmann::ordered_json;

ojson letters_json(const MealyAutomaton& a, std::span<const Letter> word) {
  auto out = ojson::array();
  for (Letter x : word) out.push_back(a.letter_name(x));
  return out;
}

std::string signed_word_string(const MealyAutomaton& a, const SignedWord& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out += ' ';
    out += a.state_name(w[i].state);
    if (w[i].sign < 0) out += "^-1";
  }
  return out;
}

struct WitnessWriter {
  const MealyAutomaton& a;

  ojson operator()(std::monostate) const { return nullptr; }

  ojson operator()(const ResetWitness& w) const {
    // The witness automaton is the unfolding: its states are the letters.
    return {{"x0", a.letter_name(w.x0)},
            {"cycle", letters_json(a, w.cycle)},
            {"pi", letters_json(a, w.pi)},
            {"word_family", "x0 (cycle)^alpha"}};
  }

  ojson operator()(const SelfLoopWitness& w) const {
    return {{"state", a.state_name(w.state)},
            {"grouping", w.grouping},
            {"loop_block", letters_json(a, w.loop_block)},
            {"image", letters_json(a, w.image)}};
  }

  ojson operator()(const ReversibleWitness& w) const {
    auto comps = ojson::array();
    for (const auto& comp : w.components) {
      auto names = ojson::array();
      for (State q : comp) names.push_back(a.state_name(q));
      comps.push_back(std::move(names));
    }
    return {{"components", std::move(comps)}, {"component_reading", w.component_reading}};
  }

  ojson operator()(const SignalizerWitness& w) const {
    return {{"vertices", w.vertices},
            {"prefix", letters_json(a, w.prefix)},
            {"cycle", letters_json(a, w.cycle)},
            {"cycle_labels", w.cycle_labels}};
  }

  ojson operator()(const BruteForceWitness& w) const { return {{"power", w.power}}; }
};

}  // namespace

ojson class_report_to_json(const ClassReport& r) {
  ojson doc;
  doc["invertible"] = r.invertible;
  doc["reversible"] = r.reversible;
  doc["bireversible"] = r.bireversible;
  doc["reset"] = r.reset;
  doc["activity"] = r.activity ? ojson(to_string(*r.activity)) : ojson(nullptr);
  doc["connected"] = r.connected;
  return doc;
}

ojson certificate_to_json(const MealyAutomaton& a, const OrderCertificate& c) {
  ojson doc;
  doc["subject"] = c.subject ? ojson(signed_word_string(a, *c.subject)) : ojson(nullptr);
  doc["verdict"] = to_string(c.verdict);
  doc["order"] = c.is_finite() ? ojson(c.order) : ojson(nullptr);
  doc["rule"] = to_string(c.rule);
  doc["scope"] = c.scope;
  doc["witness"] = std::visit(WitnessWriter{a}, c.witness);
  return doc;
}

}  // namespace mealy
