#include "mealy/classify.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mealy/element.hpp"
#include "mealy/errors.hpp"

namespace mealy {
namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

std::vector<std::vector<State>> transition_graph(const MealyAutomaton& a) {
  std::vector<std::vector<State>> adj(a.num_states());
  for (State q = 0; q < a.num_states(); ++q) {
    for (Letter x = 0; x < a.num_letters(); ++x) adj[q].push_back(a.delta(x, q));
    std::ranges::sort(adj[q]);
    adj[q].erase(std::unique(adj[q].begin(), adj[q].end()), adj[q].end());
  }
  return adj;
}

State require_id(const MealyAutomaton& a) {
  if (!a.id_state()) throw Error(ErrorKind::precondition, "activity needs a designated identity state");
  return *a.id_state();
}

}  // namespace

std::string to_string(const Activity& a) {
  switch (a.kind) {
    case ActivityKind::not_polynomial: return "not-polynomial";
    case ActivityKind::finitary: return "finitary";
    case ActivityKind::polynomial: return "polynomial(" + std::to_string(a.degree) + ")";
  }
  return "not-polynomial";
}

bool OutputSets::is_full(State r) const {
  return std::ranges::all_of(outputs.at(r), [](bool b) { return b; });
}

std::vector<Letter> OutputSets::letters(State r) const {
  std::vector<Letter> out;
  for (Letter y = 0; y < outputs.at(r).size(); ++y) {
    if (outputs[r][y]) out.push_back(y);
  }
  return out;
}

OutputSets output_sets(const MealyAutomaton& a) {
  OutputSets sets;
  sets.outputs.assign(a.num_states(), std::vector<bool>(a.num_letters(), false));
  for (State p = 0; p < a.num_states(); ++p) {
    for (Letter i = 0; i < a.num_letters(); ++i) sets.outputs[a.delta(i, p)][a.rho(p, i)] = true;
  }
  return sets;
}

bool is_bireversible_by_inverse(const MealyAutomaton& a) {
  return is_invertible(a) && is_reversible(a) && is_reversible(inverse(a));
}

bool is_bireversible_by_output_sets(const MealyAutomaton& a) {
  if (!is_invertible(a) || !is_reversible(a)) return false;
  auto sets = output_sets(a);
  for (State r = 0; r < a.num_states(); ++r) {
    if (!sets.is_full(r)) return false;
  }
  return true;
}

bool is_bireversible(const MealyAutomaton& a) {
  const bool by_inverse = is_bireversible_by_inverse(a);
  const bool by_outputs = is_bireversible_by_output_sets(a);
  if (by_inverse != by_outputs) {
    throw Error(ErrorKind::internal, "bireversibility characterisations disagree");
  }
  return by_inverse;
}

bool is_reset(const MealyAutomaton& a) noexcept {
  for (Letter x = 0; x < a.num_letters(); ++x) {
    auto col = a.delta_column(x);
    if (std::ranges::any_of(col, [&](State q) { return q != col[0]; })) return false;
  }
  return true;
}

bool is_unfolded_reset(const MealyAutomaton& a) noexcept {
  if (a.num_states() != a.num_letters()) return false;
  for (Letter x = 0; x < a.num_letters(); ++x) {
    for (State q : a.delta_column(x)) {
      if (q != x) return false;
    }
  }
  return true;
}

ResetUnfolding unfold_reset(const MealyAutomaton& a) {
  if (!is_reset(a)) throw Error(ErrorKind::capability, "unfold_reset requires a reset automaton");
  const std::size_t n = a.num_states();
  const std::size_t k = a.num_letters();

  // Prune states without ingoing edges until none remain.
  std::vector<bool> alive(n, true);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<bool> has_in(n, false);
    for (State q = 0; q < n; ++q) {
      if (!alive[q]) continue;
      for (Letter x = 0; x < k; ++x) has_in[a.delta(x, q)] = true;
    }
    for (State q = 0; q < n; ++q) {
      if (alive[q] && !has_in[q]) {
        alive[q] = false;
        changed = true;
      }
    }
  }

  ResetUnfolding result{a, {}, {}};
  for (State q = 0; q < n; ++q) {
    if (!alive[q]) result.pruned.push_back(q);
  }
  std::vector<std::vector<State>> delta(k, std::vector<State>(k));
  std::vector<std::vector<Letter>> rho(k);
  for (Letter x = 0; x < k; ++x) {
    const State phi = a.delta(x, 0);
    result.origin.push_back(phi);
    auto row = a.rho_row(phi);
    rho[x].assign(row.begin(), row.end());
    for (State q = 0; q < k; ++q) delta[x][q] = x;
  }
  std::optional<State> id;
  if (k == 1 && a.id_state() && result.origin[0] == *a.id_state()) id = 0;
  result.automaton = MealyAutomaton(a.letter_names(), a.letter_names(), delta, rho, id);
  return result;
}

std::vector<std::vector<State>> strongly_connected_components(const std::vector<std::vector<State>>& adjacency) {
  // Iterative Tarjan.
  const std::size_t n = adjacency.size();
  std::vector<std::size_t> index(n, npos), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<State> stack;
  std::vector<std::vector<State>> components;
  std::size_t counter = 0;

  struct Frame {
    State v;
    std::size_t next_edge;
  };
  std::vector<Frame> call;
  for (State root = 0; root < n; ++root) {
    if (index[root] != npos) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& frame = call.back();
      const State v = frame.v;
      if (frame.next_edge < adjacency[v].size()) {
        const State w = adjacency[v][frame.next_edge++];
        if (index[w] == npos) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<State> comp;
        State w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::ranges::sort(comp);
        components.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) {
        const State parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return components;
}

bool is_strongly_connected(const MealyAutomaton& a) {
  return strongly_connected_components(transition_graph(a)).size() == 1;
}

std::vector<std::vector<State>> connected_components(const MealyAutomaton& a) {
  std::vector<State> parent(a.num_states());
  std::iota(parent.begin(), parent.end(), State{0});
  auto find = [&](State v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (State q = 0; q < a.num_states(); ++q) {
    for (Letter x = 0; x < a.num_letters(); ++x) {
      State r1 = find(q), r2 = find(a.delta(x, q));
      if (r1 != r2) parent[std::max(r1, r2)] = std::min(r1, r2);
    }
  }
  std::vector<std::vector<State>> comps;
  std::vector<std::size_t> slot(a.num_states(), npos);
  for (State q = 0; q < a.num_states(); ++q) {
    const State r = find(q);
    if (slot[r] == npos) {
      slot[r] = comps.size();
      comps.emplace_back();
    }
    comps[slot[r]].push_back(q);
  }
  return comps;
}

CycleStructure cycle_structure(const MealyAutomaton& a) {
  const State id = require_id(a);
  CycleStructure cs;
  cs.successors = transition_graph(a);
  cs.successors[id].clear();
  for (auto& succ : cs.successors) std::erase(succ, id);

  auto comps = strongly_connected_components(cs.successors);
  cs.component_of.assign(a.num_states(), npos);
  for (auto& states : comps) {
    if (states.size() == 1 && states[0] == id) continue;
    CycleComponent comp;
    comp.states = std::move(states);
    const std::size_t c = cs.components.size();
    for (State q : comp.states) cs.component_of[q] = c;
    cs.components.push_back(std::move(comp));
  }

  bool entangled = false;
  for (std::size_t c = 0; c < cs.components.size(); ++c) {
    auto& comp = cs.components[c];
    bool all_single = true;
    bool any_inner_edge = false;
    for (State q : comp.states) {
      // Transitions, not distinct targets: two letters looping on q are two cycles.
      std::size_t inner = 0;
      for (Letter x = 0; x < a.num_letters(); ++x) {
        const State s = a.delta(x, q);
        if (s != id && cs.component_of[s] == c) ++inner;
      }
      any_inner_edge = any_inner_edge || inner > 0;
      all_single = all_single && inner == 1;
    }
    comp.cyclic = any_inner_edge;
    comp.simple_cycle = comp.cyclic && all_single;
    if (comp.cyclic && !comp.simple_cycle) entangled = true;
  }
  if (entangled) return cs;

  // Components come sinks first, so successors are finished before use.
  std::vector<int> best(cs.components.size(), 0);
  int overall = 0;
  for (std::size_t c = 0; c < cs.components.size(); ++c) {
    int below = 0;
    for (State q : cs.components[c].states) {
      for (State s : cs.successors[q]) {
        if (cs.component_of[s] != c) below = std::max(below, best[cs.component_of[s]]);
      }
    }
    best[c] = below + (cs.components[c].cyclic ? 1 : 0);
    overall = std::max(overall, best[c]);
  }
  cs.max_cycles_on_path = overall;
  return cs;
}

int cycles_reachable_from(const CycleStructure& cs, State q) {
  if (!cs.max_cycles_on_path) throw Error(ErrorKind::capability, "automaton is not of polynomial activity");
  if (cs.component_of.at(q) == npos) return 0;
  // Recompute the per-component values; components are sinks first.
  std::vector<int> best(cs.components.size(), 0);
  for (std::size_t c = 0; c < cs.components.size(); ++c) {
    int below = 0;
    for (State v : cs.components[c].states) {
      for (State s : cs.successors[v]) {
        if (cs.component_of[s] != c) below = std::max(below, best[cs.component_of[s]]);
      }
    }
    best[c] = below + (cs.components[c].cyclic ? 1 : 0);
  }
  return best[cs.component_of[q]];
}

Activity activity_class(const MealyAutomaton& a) {
  auto cs = cycle_structure(a);
  if (!cs.max_cycles_on_path) return {ActivityKind::not_polynomial, 0};
  if (*cs.max_cycles_on_path == 0) return {ActivityKind::finitary, -1};
  return {ActivityKind::polynomial, *cs.max_cycles_on_path - 1};
}

std::uint64_t activity_count(const MealyAutomaton& a, State t, std::size_t len, std::size_t max_len) {
  const State id = require_id(a);
  if (t >= a.num_states()) throw Error(ErrorKind::input_domain, "state index out of range");
  if (len > max_len) throw Error(ErrorKind::size, "activity_count: word length above cap");
  const std::size_t k = a.num_letters();
  double words = 1;
  for (std::size_t i = 0; i < len; ++i) words *= static_cast<double>(k);
  if (words > static_cast<double>(1u << 24)) throw Error(ErrorKind::size, "activity_count: too many words");

  std::uint64_t count = 0;
  auto visit = [&](auto&& self, State q, std::size_t depth) -> void {
    if (depth == len) {
      if (q != id) ++count;
      return;
    }
    for (Letter x = 0; x < k; ++x) self(self, a.delta(x, q), depth + 1);
  };
  visit(visit, t, 0);
  return count;
}

std::vector<std::vector<State>> successors_after(const MealyAutomaton& a, std::size_t steps) {
  const std::size_t n = a.num_states();
  std::vector<std::vector<State>> result(n);
  for (State q = 0; q < n; ++q) {
    std::vector<bool> cur(n, false);
    cur[q] = true;
    for (std::size_t s = 0; s < steps; ++s) {
      std::vector<bool> next(n, false);
      for (State v = 0; v < n; ++v) {
        if (!cur[v]) continue;
        for (Letter x = 0; x < a.num_letters(); ++x) next[a.delta(x, v)] = true;
      }
      cur = std::move(next);
    }
    for (State v = 0; v < n; ++v) {
      if (cur[v]) result[q].push_back(v);
    }
  }
  return result;
}

NormalForm normal_form(const MealyAutomaton& a, std::size_t cap) {
  auto cs = cycle_structure(a);
  if (!cs.max_cycles_on_path) throw Error(ErrorKind::capability, "normal form needs polynomial activity");

  std::size_t l = 1;
  for (const auto& comp : cs.components) {
    if (comp.cyclic) l = std::lcm(l, comp.states.size());
  }

  // Graph of wop(a, l): every cycle is a self-loop there.
  auto succ = successors_after(a, l);
  const std::size_t n = a.num_states();
  std::vector<bool> looped(n, false);
  for (State q = 0; q < n; ++q) looped[q] = std::ranges::binary_search(succ[q], q);

  // Longest run of non-looped states ending at the first looped state.
  std::vector<int> height(n, -1);
  std::vector<bool> active(n, false);
  auto climb = [&](auto&& self, State q) -> int {
    if (height[q] >= 0) return height[q];
    if (active[q]) throw Error(ErrorKind::internal, "normal form: cycle outside self-loops");
    active[q] = true;
    int h = 0;
    for (State s : succ[q]) {
      if (s == q) continue;
      h = std::max(h, looped[s] ? 1 : 1 + self(self, s));
    }
    active[q] = false;
    return height[q] = h;
  };
  int depth = 0;
  for (State q = 0; q < n; ++q) {
    if (!looped[q]) depth = std::max(depth, climb(climb, q));
  }

  NormalForm nf{a, l, static_cast<std::size_t>(std::max(depth, 1))};
  nf.automaton = wop(a, nf.grouping(), cap);
  return nf;
}

ClassReport classify(const MealyAutomaton& a, const ClassifyOptions& options) {
  if (options.strict) {
    auto group = AutomatonGroup::create(a);
    for (State q = 0; q < a.num_states(); ++q) {
      if (a.id_state() == q) continue;
      if (is_identity(Element::generator(group, q)).is_true()) {
        throw Error(ErrorKind::invariant,
                    "state '" + a.state_name(q) + "' acts as the identity but is not the designated id_state");
      }
    }
  }
  ClassReport r;
  r.invertible = is_invertible(a);
  r.reversible = is_reversible(a);
  r.bireversible = is_bireversible(a);
  r.reset = is_reset(a);
  if (a.id_state()) r.activity = activity_class(a);
  r.connected = is_strongly_connected(a);
  return r;
}

}  // namespace mealy
