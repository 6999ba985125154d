#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mealy/automaton.hpp"

namespace mealy {

struct SignedState {
  State state = 0;
  int sign = +1;  // +1 or -1

  bool operator==(const SignedState&) const = default;
};

using SignedWord = std::vector<SignedState>;

SignedWord positive_word(std::span<const State> states);

/// An automaton together with its inverse, precomputed once so that signed
/// generators act through a single table of 2n signed states. Code q is the
/// generator q, code n + q is q^-1. Immutable.
class AutomatonGroup {
 public:
  using Code = std::uint32_t;

  static std::shared_ptr<const AutomatonGroup> create(MealyAutomaton automaton);

  const MealyAutomaton& automaton() const noexcept { return automaton_; }
  bool invertible() const noexcept { return invertible_; }
  std::size_t num_states() const noexcept { return automaton_.num_states(); }
  std::size_t num_letters() const noexcept { return automaton_.num_letters(); }

  Code encode(SignedState s) const;
  SignedState decode(Code c) const noexcept;
  Code inverse_code(Code c) const noexcept;

  Code next(Code c, Letter x) const noexcept { return next_[c * num_letters() + x]; }
  Letter output(Code c, Letter x) const noexcept { return out_[c * num_letters() + x]; }

  /// True when the code is the designated identity state (either sign).
  bool is_identity_code(Code c) const noexcept;

 private:
  explicit AutomatonGroup(MealyAutomaton automaton);

  MealyAutomaton automaton_;
  bool invertible_;
  std::vector<Code> next_;
  std::vector<Letter> out_;
};

using GroupPtr = std::shared_ptr<const AutomatonGroup>;

/// A signed word over the generators, denoting rho_word with the left-to-right
/// convention: the product g * h acts as g first, then h.
class Element {
 public:
  using Code = AutomatonGroup::Code;

  /// Throws Error{capability} for negative signs over a non-invertible
  /// automaton, Error{input_domain} for unknown states.
  Element(GroupPtr group, const SignedWord& word);

  static Element identity(GroupPtr group);
  static Element generator(GroupPtr group, State q);
  static Element from_codes(GroupPtr group, std::vector<Code> codes);

  const GroupPtr& group() const noexcept { return group_; }
  const std::vector<Code>& codes() const noexcept { return codes_; }
  SignedWord word() const;
  std::size_t length() const noexcept { return codes_.size(); }
  bool empty() const noexcept { return codes_.empty(); }
  bool is_positive() const noexcept;

  Letter act(Letter x) const;
  LetterWord act(std::span<const Letter> s) const;

  /// g|_x and g|_s.
  Element section(Letter x) const;
  Element section(std::span<const Letter> s) const;

  /// Image of every letter (sigma_g).
  std::vector<Letter> root_map() const;

  Element inverse() const;
  Element operator*(const Element& rhs) const;
  Element pow(std::uint64_t m) const;

  /// Free reduction (q q^-1 cancellation) and removal of the designated
  /// identity state. Denotes the same transformation.
  Element reduced() const;

  std::string to_string() const;

  bool operator==(const Element& rhs) const noexcept { return codes_ == rhs.codes_; }

 private:
  Element(GroupPtr group, std::vector<Code> codes) : group_(std::move(group)), codes_(std::move(codes)) {}

  GroupPtr group_;
  std::vector<Code> codes_;
};

/// rho_u(s) for a signed state word; negative signs go through the inverse
/// automaton. Throws Error{capability} if signs need an inverse that does not exist.
LetterWord act(const MealyAutomaton& a, const SignedWord& u, std::span<const Letter> s);

struct WreathRecursion {
  std::vector<Element> sections;   // sections[x] = g|_x
  std::vector<Letter> root_permutation;
};

WreathRecursion wreath_recursion(const Element& g);

enum class Verdict { yes, no, inconclusive };

const char* to_string(Verdict v) noexcept;

struct IdentityResult {
  Verdict verdict = Verdict::inconclusive;
  LetterWord witness;         // a moved word when verdict == no (shortest for is_identity)
  std::size_t explored = 0;   // distinct sections visited

  bool is_true() const noexcept { return verdict == Verdict::yes; }
  bool is_false() const noexcept { return verdict == Verdict::no; }
};

inline constexpr std::size_t kDefaultIdentityBudget = 100'000;

/// Breadth-first search over the section closure of g. Sections of a word
/// are words of the same length, so the closure is finite; `budget` caps the
/// number of distinct sections explored.
IdentityResult is_identity(const Element& g, std::size_t budget = kDefaultIdentityBudget);

/// Decides t^m = id by descending the orbit tree: when r = Orb_h(x) divides
/// the remaining exponent e, (h^e)|_x = ((h^r)|_x)^(e/r). A letter whose
/// orbit does not divide e ends a witness. Much cheaper than is_identity on
/// the expanded power when t^m fixes long words. Requires an invertible
/// automaton.
IdentityResult is_identity_power(const Element& t, std::uint64_t m, std::size_t budget = kDefaultIdentityBudget);

/// is_identity(g * h^-1) over invertible automata. Over non-invertible
/// automata only positive words are accepted; they are compared by a
/// breadth-first search over pairs of sections. Throws Error{capability}
/// for signed words over non-invertible automata.
IdentityResult elements_equal(const Element& g, const Element& h, std::size_t budget = kDefaultIdentityBudget);

}  // namespace mealy
