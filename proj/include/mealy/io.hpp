#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mealy/automaton.hpp"
#include "mealy/element.hpp"

namespace mealy {

/// Automaton document:
///   { "states": [...], "alphabet": [...],
///     "delta": { letter: [state per state position] },
///     "rho":   { state:  [letter per letter position] },
///     "id_state": name (optional) }
/// Unknown top-level fields (e.g. "meta") are ignored on input.
/// Structural problems throw Error{parse}; a bad id_state throws Error{invariant}.
MealyAutomaton automaton_from_json(const nlohmann::json& doc);
MealyAutomaton parse_automaton(std::string_view text);
MealyAutomaton load_automaton(const std::string& path);

/// Normalised document with a fixed field order (states, alphabet, delta,
/// rho, id_state). Serialising twice gives identical bytes.
nlohmann::ordered_json automaton_to_json(const MealyAutomaton& a);
std::string format_automaton(const MealyAutomaton& a);

/// One node per state, one edge per (state, letter) labelled "x|rho_q(x)".
std::string to_dot(const MealyAutomaton& a);

/// Signed word of state names. Tokens are separated by whitespace; a token
/// is a state name optionally followed by "^-1". When every state name is a
/// single character, tokens may also be run together ("bcd^-1").
SignedWord parse_signed_word(const MealyAutomaton& a, std::string_view text);

/// Letter word; same tokenisation rules over letter names.
LetterWord parse_letter_word(const MealyAutomaton& a, std::string_view text);

std::string format_letter_word(const MealyAutomaton& a, std::span<const Letter> word);

}  // namespace mealy
