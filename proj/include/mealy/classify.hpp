#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mealy/automaton.hpp"

namespace mealy {

enum class ActivityKind { not_polynomial, finitary, polynomial };

struct Activity {
  ActivityKind kind = ActivityKind::not_polynomial;
  int degree = 0;  // -1 for finitary, >= 0 for polynomial, unused otherwise

  bool is_polynomial() const noexcept { return kind != ActivityKind::not_polynomial; }
  bool operator==(const Activity&) const = default;
};

/// "not-polynomial", "finitary" or "polynomial(d)".
std::string to_string(const Activity& a);

struct ClassReport {
  bool invertible = false;
  bool reversible = false;
  bool bireversible = false;
  bool reset = false;
  std::optional<Activity> activity;  // empty when no identity state is designated
  bool connected = false;            // strong connectivity of the transition digraph
};

struct ClassifyOptions {
  /// Reject automata where a state other than the designated one acts as
  /// the identity (checked with is_identity).
  bool strict = false;
};

ClassReport classify(const MealyAutomaton& a, const ClassifyOptions& options = {});

/// outputs[r][y] is true iff some transition p --i|y--> r exists.
struct OutputSets {
  std::vector<std::vector<bool>> outputs;

  bool is_full(State r) const;
  std::vector<Letter> letters(State r) const;
};

OutputSets output_sets(const MealyAutomaton& a);

/// Both characterisations are computed; throws Error{internal} if they differ.
bool is_bireversible(const MealyAutomaton& a);
bool is_bireversible_by_inverse(const MealyAutomaton& a);
bool is_bireversible_by_output_sets(const MealyAutomaton& a);

bool is_reset(const MealyAutomaton& a) noexcept;
/// Q = Sigma (same count) and delta_x(q) = x.
bool is_unfolded_reset(const MealyAutomaton& a) noexcept;

struct ResetUnfolding {
  MealyAutomaton automaton;    // stateset = alphabet, delta_x(q) = x
  std::vector<State> origin;   // origin[x] = original state phi(x) that unfolded state x stands for
  std::vector<State> pruned;   // original states dropped for lack of ingoing edges
};

/// Throws Error{capability} on a non-reset automaton.
ResetUnfolding unfold_reset(const MealyAutomaton& a);

/// Strongly connected components of an arbitrary digraph given as adjacency
/// lists, in reverse topological order of the condensation (sinks first).
std::vector<std::vector<State>> strongly_connected_components(const std::vector<std::vector<State>>& adjacency);

bool is_strongly_connected(const MealyAutomaton& a);

/// Components of the underlying undirected transition graph; each is closed
/// under every delta_x.
std::vector<std::vector<State>> connected_components(const MealyAutomaton& a);

struct CycleComponent {
  std::vector<State> states;
  bool cyclic = false;        // contains a cycle (size > 1 or a self-loop)
  bool simple_cycle = false;  // every vertex has exactly one transition staying inside
};

/// Transition digraph restricted to states other than the identity state.
struct CycleStructure {
  std::vector<std::vector<State>> successors;  // distinct successors, identity state excluded
  std::vector<CycleComponent> components;      // sinks first
  std::vector<std::size_t> component_of;       // per state; identity state maps to npos
  /// Maximum number of cyclic components along a directed path, or
  /// nullopt when some component is entangled.
  std::optional<int> max_cycles_on_path;
};

/// Throws Error{precondition} without a designated identity state.
CycleStructure cycle_structure(const MealyAutomaton& a);

/// Throws Error{precondition} without a designated identity state.
Activity activity_class(const MealyAutomaton& a);

/// Maximum number of cyclic components along paths starting at q; 0 when
/// none is reachable. Requires a polynomial automaton.
int cycles_reachable_from(const CycleStructure& cs, State q);

inline constexpr std::size_t kDefaultActivityLengthCap = 12;

/// Brute-force count of length-`len` words x with delta_x(t) != id.
/// Throws Error{size} when len exceeds the cap, Error{precondition} without
/// an identity state.
std::uint64_t activity_count(const MealyAutomaton& a, State t, std::size_t len,
                             std::size_t max_len = kDefaultActivityLengthCap);

struct NormalForm {
  MealyAutomaton automaton;
  std::size_t cycle_lcm = 1;  // l: lcm of simple-cycle lengths
  std::size_t depth = 1;      // d
  std::size_t grouping() const noexcept { return cycle_lcm * depth; }
};

/// wop(a, d * l). Throws Error{capability} for non-polynomial automata and
/// Error{size} when k^(d l) exceeds the cap.
NormalForm normal_form(const MealyAutomaton& a, std::size_t cap = kDefaultExpansionCap);

/// States reachable in exactly `steps` transitions from each state.
std::vector<std::vector<State>> successors_after(const MealyAutomaton& a, std::size_t steps);

}  // namespace mealy
