#include "mealy/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "mealy/errors.hpp"

namespace mealy {
namespace {

using nlohmann::json;

std::vector<std::string> name_list(const json& doc, const char* field) {
  if (!doc.contains(field)) throw Error(ErrorKind::parse, std::string("missing field '") + field + "'");
  const auto& arr = doc.at(field);
  if (!arr.is_array()) throw Error(ErrorKind::parse, std::string("field '") + field + "' must be an array");
  std::vector<std::string> names;
  for (const auto& v : arr) {
    if (!v.is_string()) throw Error(ErrorKind::parse, std::string("field '") + field + "' must hold strings");
    names.push_back(v.get<std::string>());
  }
  return names;
}

std::uint32_t lookup(const std::vector<std::string>& names, const std::string& name, const std::string& where) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error(ErrorKind::parse, where + ": unknown name '" + name + "'");
  return static_cast<std::uint32_t>(it - names.begin());
}

// Table indexed by key name (row) then by position (column).
std::vector<std::vector<std::uint32_t>> name_table(const json& doc, const char* field,
                                                   const std::vector<std::string>& keys,
                                                   const std::vector<std::string>& values,
                                                   std::size_t width) {
  if (!doc.contains(field)) throw Error(ErrorKind::parse, std::string("missing field '") + field + "'");
  const auto& obj = doc.at(field);
  if (!obj.is_object()) throw Error(ErrorKind::parse, std::string("field '") + field + "' must be an object");
  for (const auto& [key, _] : obj.items()) lookup(keys, key, field);

  std::vector<std::vector<std::uint32_t>> table;
  for (const auto& key : keys) {
    const std::string where = std::string(field) + "[" + key + "]";
    if (!obj.contains(key)) throw Error(ErrorKind::parse, where + " is missing");
    const auto& row = obj.at(key);
    if (!row.is_array() || row.size() != width) {
      throw Error(ErrorKind::parse, where + " must be an array of " + std::to_string(width) + " names");
    }
    std::vector<std::uint32_t> entries;
    for (const auto& v : row) {
      if (!v.is_string()) throw Error(ErrorKind::parse, where + " must hold strings");
      entries.push_back(lookup(values, v.get<std::string>(), where));
    }
    table.push_back(std::move(entries));
  }
  return table;
}

// Splits a word into name tokens.
std::vector<std::pair<std::string, bool>> tokenize(const std::vector<std::string>& names, std::string_view text,
                                                   bool allow_inverse) {
  constexpr std::string_view kInv = "^-1";
  std::vector<std::pair<std::string, bool>> tokens;
  const bool single = std::all_of(names.begin(), names.end(), [](const auto& s) { return s.size() == 1; });

  std::vector<std::string> chunks;
  std::istringstream in{std::string(text)};
  for (std::string chunk; in >> chunk;) chunks.push_back(chunk);

  for (const auto& chunk : chunks) {
    if (std::find(names.begin(), names.end(), chunk) != names.end()) {
      tokens.emplace_back(chunk, false);
      continue;
    }
    if (allow_inverse && chunk.size() > kInv.size() && chunk.ends_with(kInv)) {
      std::string base = chunk.substr(0, chunk.size() - kInv.size());
      if (std::find(names.begin(), names.end(), base) != names.end()) {
        tokens.emplace_back(base, true);
        continue;
      }
    }
    if (!single) throw Error(ErrorKind::parse, "unknown name '" + chunk + "'");
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      std::string name(1, chunk[i]);
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw Error(ErrorKind::parse, "unknown name '" + name + "' at offset " + std::to_string(i));
      }
      bool inv = false;
      if (allow_inverse && std::string_view(chunk).substr(i + 1).starts_with(kInv)) {
        inv = true;
        i += kInv.size();
      }
      tokens.emplace_back(std::move(name), inv);
    }
  }
  return tokens;
}

}  // namespace

MealyAutomaton automaton_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::parse, "automaton document must be an object");
  auto states = name_list(doc, "states");
  auto alphabet = name_list(doc, "alphabet");
  if (states.empty()) throw Error(ErrorKind::parse, "'states' is empty");
  if (alphabet.empty()) throw Error(ErrorKind::parse, "'alphabet' is empty");

  auto delta = name_table(doc, "delta", alphabet, states, states.size());
  auto rho = name_table(doc, "rho", states, alphabet, alphabet.size());

  std::optional<State> id;
  if (doc.contains("id_state") && !doc.at("id_state").is_null()) {
    const auto& v = doc.at("id_state");
    if (!v.is_string()) throw Error(ErrorKind::parse, "'id_state' must be a string");
    id = lookup(states, v.get<std::string>(), "id_state");
  }
  try {
    return MealyAutomaton(std::move(states), std::move(alphabet), delta, rho, id);
  } catch (const Error& e) {
    // Duplicate names are a document problem; everything else is an invariant.
    if (std::string_view(e.what()).starts_with("duplicate")) throw Error(ErrorKind::parse, e.what());
    throw;
  }
}

MealyAutomaton parse_automaton(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("malformed document at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  return automaton_from_json(doc);
}

MealyAutomaton load_automaton(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_automaton(buf.str());
}

nlohmann::ordered_json automaton_to_json(const MealyAutomaton& a) {
  nlohmann::ordered_json doc;
  doc["states"] = a.state_names();
  doc["alphabet"] = a.letter_names();
  nlohmann::ordered_json delta = nlohmann::ordered_json::object();
  for (Letter x = 0; x < a.num_letters(); ++x) {
    auto col = nlohmann::ordered_json::array();
    for (State q : a.delta_column(x)) col.push_back(a.state_name(q));
    delta[a.letter_name(x)] = std::move(col);
  }
  doc["delta"] = std::move(delta);
  nlohmann::ordered_json rho = nlohmann::ordered_json::object();
  for (State q = 0; q < a.num_states(); ++q) {
    auto row = nlohmann::ordered_json::array();
    for (Letter y : a.rho_row(q)) row.push_back(a.letter_name(y));
    rho[a.state_name(q)] = std::move(row);
  }
  doc["rho"] = std::move(rho);
  if (a.id_state()) doc["id_state"] = a.state_name(*a.id_state());
  return doc;
}

std::string format_automaton(const MealyAutomaton& a) { return automaton_to_json(a).dump(2) + "\n"; }

std::string to_dot(const MealyAutomaton& a) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << "digraph mealy {\n  rankdir=LR;\n";
  for (State q = 0; q < a.num_states(); ++q) {
    out << "  " << quote(a.state_name(q));
    if (a.id_state() == q) out << " [shape=doublecircle]";
    out << ";\n";
  }
  for (State q = 0; q < a.num_states(); ++q) {
    for (Letter x = 0; x < a.num_letters(); ++x) {
      out << "  " << quote(a.state_name(q)) << " -> " << quote(a.state_name(a.delta(x, q)))
          << " [label=" << quote(a.letter_name(x) + "|" + a.letter_name(a.rho(q, x))) << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

SignedWord parse_signed_word(const MealyAutomaton& a, std::string_view text) {
  SignedWord word;
  for (const auto& [name, inv] : tokenize(a.state_names(), text, true)) {
    word.push_back({*a.find_state(name), inv ? -1 : +1});
  }
  return word;
}

LetterWord parse_letter_word(const MealyAutomaton& a, std::string_view text) {
  LetterWord word;
  for (const auto& [name, inv] : tokenize(a.letter_names(), text, false)) word.push_back(*a.find_letter(name));
  return word;
}

std::string format_letter_word(const MealyAutomaton& a, std::span<const Letter> word) {
  const auto& names = a.letter_names();
  const bool single = std::all_of(names.begin(), names.end(), [](const auto& s) { return s.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i > 0 && !single) out += ' ';
    out += a.letter_name(word[i]);
  }
  return out;
}

}  // namespace mealy
