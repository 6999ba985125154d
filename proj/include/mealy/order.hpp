#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mealy/automaton.hpp"
#include "mealy/element.hpp"

namespace mealy {

inline constexpr std::size_t kDefaultSignalizerVertices = 10'000;
inline constexpr std::size_t kDefaultBruteForcePowers = 64;
inline constexpr std::size_t kDefaultWordLengthCap = 12;

struct OrderBudget {
  std::size_t signalizer_vertices = kDefaultSignalizerVertices;
  std::size_t brute_force_powers = kDefaultBruteForcePowers;
  std::size_t word_length = kDefaultWordLengthCap;
  std::size_t identity_sections = kDefaultIdentityBudget;
  /// Longest representative word kept for a signalizer vertex.
  std::size_t vertex_word_length = 256;
  /// Sections explored per signalizer vertex comparison, and the number of
  /// comparisons a signalizer may run before giving up.
  std::size_t comparison_sections = 1'000;
  std::size_t signalizer_comparisons = 2'000;
};

/// Smallest alpha > 0 with t^alpha(x) = x. Throws Error{size} when |x|
/// exceeds `max_len`, Error{capability} when t is not a permutation of the
/// words of length |x| (no orbit returns to x).
std::uint64_t orbit(const Element& t, std::span<const Letter> x, std::size_t max_len = kDefaultWordLengthCap);

struct OrbitSignalizer {
  struct Edge {
    std::size_t from;
    Letter letter;
    std::uint64_t label;  // orbit of `letter` under the source vertex
    std::size_t to;
  };

  std::vector<Element> vertices;  // vertices[0] is the root t
  std::vector<Edge> edges;        // out-edges of vertex v are edges[v*k .. v*k+k) when complete
  bool complete = false;
};

/// Breadth-first construction of the graph of sections t^{Orb_t(x)}|_x.
/// Vertices are identified up to elements_equal; an inconclusive comparison
/// keeps the vertices apart. Stops (complete = false) past the vertex or
/// comparison budget.
OrbitSignalizer orbit_signalizer(const Element& t, const OrderBudget& budget = {});

/// lcm over root paths of at most `depth` edges of the product of their
/// labels, i.e. the order of t acting on words of length `depth`.
std::uint64_t signalizer_lcm_to_depth(const OrbitSignalizer& g, std::size_t depth);

enum class OrderVerdict { infinite, finite, inconclusive };

enum class CertificateRule {
  none,
  reset_pi,
  bounded_selfloop,
  reversible_nonbireversible,
  orbit_signalizer,
  brute_force,
};

const char* to_string(OrderVerdict v) noexcept;
const char* to_string(CertificateRule r) noexcept;

/// pi_A is not a permutation: x0 lies off every pi-cycle and pi(x0) = cycle[0].
/// Every state moves x0 (cycle)^alpha through more than |cycle| * alpha
/// distinct words.
struct ResetWitness {
  Letter x0 = 0;
  std::vector<Letter> cycle;
  std::vector<Letter> pi;
};

/// In the normal form (grouping letters by `grouping`), `state` loops on
/// `loop_block` and rewrites it to `image` != loop_block.
struct SelfLoopWitness {
  State state = 0;
  std::size_t grouping = 1;
  LetterWord loop_block;
  LetterWord image;
};

/// Connected components of the automaton, none of which is bireversible as
/// a standalone automaton.
struct ReversibleWitness {
  std::vector<std::vector<State>> components;
  std::string component_reading = "connected component of the automaton";
};

/// Complete signalizer summary. For infinite verdicts `cycle` is a letter
/// path from `prefix`'s endpoint back to itself whose labels include one > 1.
struct SignalizerWitness {
  std::size_t vertices = 0;
  LetterWord prefix;
  LetterWord cycle;
  std::vector<std::uint64_t> cycle_labels;
};

struct BruteForceWitness {
  std::uint64_t power = 0;
};

using CertificateWitness =
    std::variant<std::monostate, ResetWitness, SelfLoopWitness, ReversibleWitness, SignalizerWitness, BruteForceWitness>;

struct OrderCertificate {
  OrderVerdict verdict = OrderVerdict::inconclusive;
  std::uint64_t order = 0;  // valid when verdict == finite
  CertificateRule rule = CertificateRule::none;
  /// Element the verdict is about; empty for automaton-wide certificates,
  /// whose reach is described by `scope`.
  std::optional<SignedWord> subject;
  std::string scope;
  CertificateWitness witness;

  bool is_infinite() const noexcept { return verdict == OrderVerdict::infinite; }
  bool is_finite() const noexcept { return verdict == OrderVerdict::finite; }
};

/// Order from the orbit signalizer, falling back to class certificates
/// (single positive generator words only) and to brute-force powers.
OrderCertificate order_of(const Element& t, const OrderBudget& budget = {});

/// Unfolded invertible reset automata. Throws Error{capability} otherwise.
OrderCertificate cert_reset(const MealyAutomaton& a);

/// Polynomial activity (identity state designated). Reports the first
/// witness found; Error{capability} for non-polynomial automata.
OrderCertificate cert_bounded(const MealyAutomaton& a, std::size_t cap = kDefaultExpansionCap);

/// Per-state variant of cert_bounded: result[q] holds a witness when state q
/// is certified. Only states whose reachable part has bounded activity are
/// considered.
std::vector<std::optional<SelfLoopWitness>> bounded_selfloop_witnesses(const MealyAutomaton& a,
                                                                        std::size_t cap = kDefaultExpansionCap);

/// Invertible reversible automata. Throws Error{capability} otherwise.
OrderCertificate cert_reversible(const MealyAutomaton& a);

/// Strongest verdict per state, class certificates first.
std::vector<OrderCertificate> analyze(const MealyAutomaton& a, const OrderBudget& budget = {});

}  // namespace mealy
