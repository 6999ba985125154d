#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mealy {

using State = std::uint32_t;
using Letter = std::uint32_t;
using LetterWord = std::vector<Letter>;
using StateWord = std::vector<State>;

inline constexpr std::size_t kDefaultExpansionCap = 1'000'000;

/// Finite letter-to-letter transducer (Q, Sigma, delta, rho).
///
/// Tables are dense and index based: delta is stored per input letter
/// (the transition function delta_x : Q -> Q), rho per state (the
/// production function rho_q : Sigma -> Sigma). Names are only used at the
/// I/O boundary. Instances are immutable.
class MealyAutomaton {
 public:
  /// `delta[x][q]` and `rho[q][x]`. Throws Error{invariant} on ragged or
  /// out-of-range tables, duplicate names, or an id_state that is not a
  /// self-looping identity state.
  MealyAutomaton(std::vector<std::string> state_names, std::vector<std::string> letter_names,
                 const std::vector<std::vector<State>>& delta,
                 const std::vector<std::vector<Letter>>& rho,
                 std::optional<State> id_state = std::nullopt);

  std::size_t num_states() const noexcept { return state_names_.size(); }
  std::size_t num_letters() const noexcept { return letter_names_.size(); }

  State delta(Letter x, State q) const noexcept { return delta_[x * num_states() + q]; }
  Letter rho(State q, Letter x) const noexcept { return rho_[q * num_letters() + x]; }

  std::span<const State> delta_column(Letter x) const noexcept {
    return {delta_.data() + x * num_states(), num_states()};
  }
  std::span<const Letter> rho_row(State q) const noexcept {
    return {rho_.data() + q * num_letters(), num_letters()};
  }

  const std::vector<std::string>& state_names() const noexcept { return state_names_; }
  const std::vector<std::string>& letter_names() const noexcept { return letter_names_; }
  const std::string& state_name(State q) const { return state_names_.at(q); }
  const std::string& letter_name(Letter x) const { return letter_names_.at(x); }

  std::optional<State> find_state(std::string_view name) const;
  std::optional<Letter> find_letter(std::string_view name) const;

  std::optional<State> id_state() const noexcept { return id_state_; }

  /// Copy with a different designated identity state (validated).
  MealyAutomaton with_id_state(std::optional<State> id) const;

  std::vector<std::vector<State>> delta_table() const;
  std::vector<std::vector<Letter>> rho_table() const;

  /// Full equality: names, tables and id_state.
  bool operator==(const MealyAutomaton&) const = default;

 private:
  std::vector<std::string> state_names_;
  std::vector<std::string> letter_names_;
  std::vector<State> delta_;   // [x * n + q]
  std::vector<Letter> rho_;    // [q * k + x]
  std::optional<State> id_state_;
};

/// Equality of sizes and of the delta/rho tables, ignoring names and id_state.
bool same_tables(const MealyAutomaton& a, const MealyAutomaton& b) noexcept;

/// Cross-transition (delta_x(q), rho_q(x)). Throws Error{input_domain}.
std::pair<State, Letter> step(const MealyAutomaton& a, State q, Letter x);

/// Action of a positive state word: rho_u(s), u applied left to right
/// (rho_{qu} = rho_u o rho_q). Signed words go through AutomatonGroup.
LetterWord act_positive(const MealyAutomaton& a, std::span<const State> u, std::span<const Letter> s);

bool is_permutation(std::span<const std::uint32_t> map, std::size_t size) noexcept;
std::vector<std::uint32_t> invert_permutation(std::span<const std::uint32_t> perm);

bool is_invertible(const MealyAutomaton& a) noexcept;
bool is_reversible(const MealyAutomaton& a) noexcept;

/// Exchanges stateset and alphabet. The identity-state designation does not
/// survive dualisation.
MealyAutomaton dual(const MealyAutomaton& a);

/// Swaps input/output labels of every transition. State q of the result is
/// q^-1; a "^-1" suffix is toggled on the names so that inverse is an
/// involution. Throws Error{capability} unless invertible.
MealyAutomaton inverse(const MealyAutomaton& a);

/// Stateset Q^len; state (q1..ql) acts as rho_{q1...ql}. Index of a tuple is
/// its base-n numeral with q1 most significant. Throws Error{size} above cap.
MealyAutomaton power(const MealyAutomaton& a, std::size_t len, std::size_t cap = kDefaultExpansionCap);

/// Same stateset read over blocks of `len` letters (alphabet Sigma^len,
/// first letter most significant in the index). Throws Error{size} above cap.
MealyAutomaton wop(const MealyAutomaton& a, std::size_t len, std::size_t cap = kDefaultExpansionCap);

/// Packs a word whose length is a multiple of `len` into blocks (letters of
/// wop(a, len)), and the inverse operation.
LetterWord group_letters(std::span<const Letter> s, std::size_t k, std::size_t len);
LetterWord ungroup_letters(std::span<const Letter> s, std::size_t k, std::size_t len);

/// Sub-automaton on a set of states closed under every delta_x. State order
/// follows `states`.
MealyAutomaton restrict_to(const MealyAutomaton& a, std::span<const State> states);

}  // namespace mealy
