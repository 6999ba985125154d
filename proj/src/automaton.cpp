#include "mealy/automaton.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "mealy/errors.hpp"

namespace mealy {
namespace {

void check_unique(const std::vector<std::string>& names, const char* what) {
  std::set<std::string_view> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) {
      throw Error(ErrorKind::invariant, std::string("duplicate ") + what + " name '" + name + "'");
    }
  }
}

// base^exp, or nullopt when above cap.
std::optional<std::size_t> bounded_power(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && result > cap / base) return std::nullopt;
    result *= base;
  }
  if (result > cap) return std::nullopt;
  return result;
}

// Concatenate component names; separate with '.' unless every name is a
// single character.
std::string join_names(const std::vector<std::string>& names, std::span<const std::uint32_t> parts) {
  bool single = std::all_of(names.begin(), names.end(), [](const auto& s) { return s.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0 && !single) out += '.';
    out += names[parts[i]];
  }
  return out;
}

std::vector<std::uint32_t> digits_of(std::size_t index, std::size_t base, std::size_t len) {
  std::vector<std::uint32_t> digits(len);
  for (std::size_t i = len; i-- > 0;) {
    digits[i] = static_cast<std::uint32_t>(index % base);
    index /= base;
  }
  return digits;
}

}  // namespace

MealyAutomaton::MealyAutomaton(std::vector<std::string> state_names,
                               std::vector<std::string> letter_names,
                               const std::vector<std::vector<State>>& delta,
                               const std::vector<std::vector<Letter>>& rho,
                               std::optional<State> id_state)
    : state_names_(std::move(state_names)), letter_names_(std::move(letter_names)), id_state_(id_state) {
  const std::size_t n = state_names_.size();
  const std::size_t k = letter_names_.size();
  if (n == 0) throw Error(ErrorKind::invariant, "automaton needs at least one state");
  if (k == 0) throw Error(ErrorKind::invariant, "automaton needs at least one letter");
  check_unique(state_names_, "state");
  check_unique(letter_names_, "letter");

  if (delta.size() != k) throw Error(ErrorKind::invariant, "delta must have one column per letter");
  if (rho.size() != n) throw Error(ErrorKind::invariant, "rho must have one row per state");

  delta_.reserve(n * k);
  for (std::size_t x = 0; x < k; ++x) {
    if (delta[x].size() != n) {
      throw Error(ErrorKind::invariant, "delta column for letter '" + letter_names_[x] + "' is not total");
    }
    for (State q : delta[x]) {
      if (q >= n) throw Error(ErrorKind::invariant, "delta entry out of range");
      delta_.push_back(q);
    }
  }
  rho_.reserve(n * k);
  for (std::size_t q = 0; q < n; ++q) {
    if (rho[q].size() != k) {
      throw Error(ErrorKind::invariant, "rho row for state '" + state_names_[q] + "' is not total");
    }
    for (Letter y : rho[q]) {
      if (y >= k) throw Error(ErrorKind::invariant, "rho entry out of range");
      rho_.push_back(y);
    }
  }

  if (id_state_) {
    const State e = *id_state_;
    if (e >= n) throw Error(ErrorKind::invariant, "id_state out of range");
    for (Letter x = 0; x < k; ++x) {
      if (rho_[e * k + x] != x || delta_[x * n + e] != e) {
        throw Error(ErrorKind::invariant,
                    "id_state '" + state_names_[e] + "' is not a self-looping identity state");
      }
    }
  }
}

std::optional<State> MealyAutomaton::find_state(std::string_view name) const {
  auto it = std::find(state_names_.begin(), state_names_.end(), name);
  if (it == state_names_.end()) return std::nullopt;
  return static_cast<State>(it - state_names_.begin());
}

std::optional<Letter> MealyAutomaton::find_letter(std::string_view name) const {
  auto it = std::find(letter_names_.begin(), letter_names_.end(), name);
  if (it == letter_names_.end()) return std::nullopt;
  return static_cast<Letter>(it - letter_names_.begin());
}

MealyAutomaton MealyAutomaton::with_id_state(std::optional<State> id) const {
  return MealyAutomaton(state_names_, letter_names_, delta_table(), rho_table(), id);
}

std::vector<std::vector<State>> MealyAutomaton::delta_table() const {
  std::vector<std::vector<State>> table(num_letters());
  for (Letter x = 0; x < num_letters(); ++x) {
    auto col = delta_column(x);
    table[x].assign(col.begin(), col.end());
  }
  return table;
}

std::vector<std::vector<Letter>> MealyAutomaton::rho_table() const {
  std::vector<std::vector<Letter>> table(num_states());
  for (State q = 0; q < num_states(); ++q) {
    auto row = rho_row(q);
    table[q].assign(row.begin(), row.end());
  }
  return table;
}

bool same_tables(const MealyAutomaton& a, const MealyAutomaton& b) noexcept {
  if (a.num_states() != b.num_states() || a.num_letters() != b.num_letters()) return false;
  for (Letter x = 0; x < a.num_letters(); ++x) {
    if (!std::ranges::equal(a.delta_column(x), b.delta_column(x))) return false;
  }
  for (State q = 0; q < a.num_states(); ++q) {
    if (!std::ranges::equal(a.rho_row(q), b.rho_row(q))) return false;
  }
  return true;
}

std::pair<State, Letter> step(const MealyAutomaton& a, State q, Letter x) {
  if (q >= a.num_states()) throw Error(ErrorKind::input_domain, "state index out of range");
  if (x >= a.num_letters()) throw Error(ErrorKind::input_domain, "letter index out of range");
  return {a.delta(x, q), a.rho(q, x)};
}

LetterWord act_positive(const MealyAutomaton& a, std::span<const State> u, std::span<const Letter> s) {
  for (Letter x : s) {
    if (x >= a.num_letters()) throw Error(ErrorKind::input_domain, "letter index out of range");
  }
  LetterWord word(s.begin(), s.end());
  for (State q : u) {
    if (q >= a.num_states()) throw Error(ErrorKind::input_domain, "state index out of range");
    State cur = q;
    for (auto& x : word) {
      const Letter y = a.rho(cur, x);
      cur = a.delta(x, cur);
      x = y;
    }
  }
  return word;
}

bool is_permutation(std::span<const std::uint32_t> map, std::size_t size) noexcept {
  if (map.size() != size) return false;
  std::vector<bool> hit(size, false);
  for (auto v : map) {
    if (v >= size || hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

std::vector<std::uint32_t> invert_permutation(std::span<const std::uint32_t> perm) {
  std::vector<std::uint32_t> inv(perm.size());
  for (std::uint32_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

bool is_invertible(const MealyAutomaton& a) noexcept {
  for (State q = 0; q < a.num_states(); ++q) {
    if (!is_permutation(a.rho_row(q), a.num_letters())) return false;
  }
  return true;
}

bool is_reversible(const MealyAutomaton& a) noexcept {
  for (Letter x = 0; x < a.num_letters(); ++x) {
    if (!is_permutation(a.delta_column(x), a.num_states())) return false;
  }
  return true;
}

MealyAutomaton dual(const MealyAutomaton& a) {
  // dual.delta(q, x) = a.rho(q, x); dual.rho(x, q) = a.delta(x, q)
  return MealyAutomaton(a.letter_names(), a.state_names(), a.rho_table(), a.delta_table());
}

MealyAutomaton inverse(const MealyAutomaton& a) {
  if (!is_invertible(a)) throw Error(ErrorKind::capability, "inverse requires an invertible automaton");
  const std::size_t n = a.num_states();
  const std::size_t k = a.num_letters();
  std::vector<std::vector<State>> delta(k, std::vector<State>(n));
  std::vector<std::vector<Letter>> rho(n);
  for (State q = 0; q < n; ++q) {
    rho[q] = invert_permutation(a.rho_row(q));
    for (Letter y = 0; y < k; ++y) delta[y][q] = a.delta(rho[q][y], q);
  }
  std::vector<std::string> names;
  names.reserve(n);
  constexpr std::string_view suffix = "^-1";
  for (const auto& name : a.state_names()) {
    if (name.size() > suffix.size() && name.ends_with(suffix)) {
      names.push_back(name.substr(0, name.size() - suffix.size()));
    } else {
      names.push_back(name + std::string(suffix));
    }
  }
  return MealyAutomaton(std::move(names), a.letter_names(), delta, rho, a.id_state());
}

MealyAutomaton power(const MealyAutomaton& a, std::size_t len, std::size_t cap) {
  if (len == 0) throw Error(ErrorKind::input_domain, "power exponent must be positive");
  const std::size_t n = a.num_states();
  const std::size_t k = a.num_letters();
  auto total = bounded_power(n, len, cap);
  if (!total) throw Error(ErrorKind::size, "power: stateset exceeds cap");
  const std::size_t m = *total;

  std::vector<std::string> names(m);
  std::vector<std::vector<State>> delta(k, std::vector<State>(m));
  std::vector<std::vector<Letter>> rho(m, std::vector<Letter>(k));
  for (std::size_t idx = 0; idx < m; ++idx) {
    auto tuple = digits_of(idx, n, len);
    names[idx] = join_names(a.state_names(), tuple);
    for (Letter x = 0; x < k; ++x) {
      Letter cur = x;
      std::size_t target = 0;
      for (State q : tuple) {
        target = target * n + a.delta(cur, q);
        cur = a.rho(q, cur);
      }
      delta[x][idx] = static_cast<State>(target);
      rho[idx][x] = cur;
    }
  }
  std::optional<State> id;
  if (a.id_state()) {
    std::size_t e = 0;
    for (std::size_t i = 0; i < len; ++i) e = e * n + *a.id_state();
    id = static_cast<State>(e);
  }
  return MealyAutomaton(std::move(names), a.letter_names(), delta, rho, id);
}

MealyAutomaton wop(const MealyAutomaton& a, std::size_t len, std::size_t cap) {
  if (len == 0) throw Error(ErrorKind::input_domain, "letter grouping must be positive");
  const std::size_t n = a.num_states();
  const std::size_t k = a.num_letters();
  auto total = bounded_power(k, len, cap);
  if (!total) throw Error(ErrorKind::size, "wop: alphabet exceeds cap");
  const std::size_t m = *total;

  std::vector<std::string> names(m);
  std::vector<std::vector<State>> delta(m, std::vector<State>(n));
  std::vector<std::vector<Letter>> rho(n, std::vector<Letter>(m));
  for (std::size_t idx = 0; idx < m; ++idx) {
    auto block = digits_of(idx, k, len);
    names[idx] = join_names(a.letter_names(), block);
    for (State q = 0; q < n; ++q) {
      State cur = q;
      std::size_t out = 0;
      for (Letter x : block) {
        out = out * k + a.rho(cur, x);
        cur = a.delta(x, cur);
      }
      delta[idx][q] = cur;
      rho[q][idx] = static_cast<Letter>(out);
    }
  }
  return MealyAutomaton(a.state_names(), std::move(names), delta, rho, a.id_state());
}

LetterWord group_letters(std::span<const Letter> s, std::size_t k, std::size_t len) {
  if (len == 0 || s.size() % len != 0) {
    throw Error(ErrorKind::input_domain, "word length is not a multiple of the grouping");
  }
  LetterWord out;
  out.reserve(s.size() / len);
  for (std::size_t i = 0; i < s.size(); i += len) {
    std::size_t v = 0;
    for (std::size_t j = 0; j < len; ++j) v = v * k + s[i + j];
    out.push_back(static_cast<Letter>(v));
  }
  return out;
}

LetterWord ungroup_letters(std::span<const Letter> s, std::size_t k, std::size_t len) {
  LetterWord out;
  out.reserve(s.size() * len);
  for (Letter block : s) {
    auto digits = digits_of(block, k, len);
    out.insert(out.end(), digits.begin(), digits.end());
  }
  return out;
}

MealyAutomaton restrict_to(const MealyAutomaton& a, std::span<const State> states) {
  constexpr State kAbsent = std::numeric_limits<State>::max();
  std::vector<State> position(a.num_states(), kAbsent);
  for (std::size_t i = 0; i < states.size(); ++i) position[states[i]] = static_cast<State>(i);

  std::vector<std::string> names;
  std::vector<std::vector<State>> delta(a.num_letters());
  std::vector<std::vector<Letter>> rho;
  for (State q : states) {
    names.push_back(a.state_name(q));
    auto row = a.rho_row(q);
    rho.emplace_back(row.begin(), row.end());
    for (Letter x = 0; x < a.num_letters(); ++x) {
      const State target = position[a.delta(x, q)];
      if (target == kAbsent) throw Error(ErrorKind::input_domain, "restrict_to: state set is not closed");
      delta[x].push_back(target);
    }
  }
  std::optional<State> id;
  if (a.id_state() && position[*a.id_state()] != kAbsent) id = position[*a.id_state()];
  return MealyAutomaton(std::move(names), a.letter_names(), delta, rho, id);
}

}  // namespace mealy
