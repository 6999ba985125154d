#include "mealy/order.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

#include "mealy/classify.hpp"
#include "mealy/errors.hpp"
#include "word_hash.hpp"

namespace mealy {
namespace {

constexpr std::uint64_t kOverflow = std::numeric_limits<std::uint64_t>::max();

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a == kOverflow || b == kOverflow) return kOverflow;
  if (a != 0 && b > kOverflow / a) return kOverflow;
  return a * b;
}

std::uint64_t checked_lcm(std::uint64_t a, std::uint64_t b) {
  if (a == kOverflow || b == kOverflow) return kOverflow;
  return checked_mul(a / std::gcd(a, b), b);
}

// Action on every word of a fixed small length and on a fixed set of long
// pseudo-random words, used to bucket candidates before the exact comparison.
std::vector<Letter> fingerprint(const Element& g) {
  const std::size_t k = g.group()->num_letters();
  std::size_t len = 1;
  std::size_t words = k;
  while (words * k <= 256 && len < 8) {
    words *= k;
    ++len;
  }
  std::vector<Letter> out;
  out.reserve(words * len);
  LetterWord w(len, 0);
  for (std::size_t i = 0; i < words; ++i) {
    std::size_t v = i;
    for (std::size_t j = len; j-- > 0;) {
      w[j] = static_cast<Letter>(v % k);
      v /= k;
    }
    auto img = g.act(w);
    out.insert(out.end(), img.begin(), img.end());
  }
  constexpr std::size_t kProbes = 16, kProbeLength = 32;
  std::mt19937_64 probe_source(0x5eed);
  std::uniform_int_distribution<Letter> letter(0, static_cast<Letter>(k - 1));
  LetterWord probe(kProbeLength);
  for (std::size_t i = 0; i < kProbes; ++i) {
    for (auto& x : probe) x = letter(probe_source);
    auto img = g.act(probe);
    out.insert(out.end(), img.begin(), img.end());
  }
  return out;
}

OrderCertificate inconclusive_for(const Element& t) {
  OrderCertificate c;
  c.subject = t.word();
  return c;
}

std::optional<State> single_generator(const Element& t) {
  if (t.length() == 1 && t.is_positive()) return t.codes()[0];
  return std::nullopt;
}

// Letter path between two vertices of a signalizer restricted to `allowed`.
std::optional<LetterWord> letter_path(const OrbitSignalizer& g, std::size_t k, std::size_t from, std::size_t to,
                                      const std::vector<bool>& allowed) {
  std::vector<std::size_t> parent(g.vertices.size(), kOverflow);
  std::vector<Letter> via(g.vertices.size(), 0);
  std::deque<std::size_t> queue{from};
  parent[from] = from;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (Letter y = 0; y < k; ++y) {
      const auto& e = g.edges[v * k + y];
      if (!allowed[e.to] || parent[e.to] != kOverflow) continue;
      parent[e.to] = v;
      via[e.to] = y;
      queue.push_back(e.to);
    }
  }
  if (parent[to] == kOverflow) return std::nullopt;
  LetterWord path;
  for (auto v = to; v != from; v = parent[v]) path.push_back(via[v]);
  return LetterWord(path.rbegin(), path.rend());
}

std::optional<OrderCertificate> class_certificate_for(const Element& t);

std::optional<OrderCertificate> brute_force(const Element& t, const OrderBudget& budget) {
  for (std::uint64_t m = 1; m <= budget.brute_force_powers; ++m) {
    auto r = t.group()->invertible() ? is_identity_power(t, m, budget.identity_sections)
                                     : is_identity(t.pow(m), budget.identity_sections);
    if (r.is_true()) {
      OrderCertificate c = inconclusive_for(t);
      c.verdict = OrderVerdict::finite;
      c.order = m;
      c.rule = CertificateRule::brute_force;
      c.witness = BruteForceWitness{m};
      return c;
    }
    if (!r.is_false()) return std::nullopt;  // minimality would be unproven
  }
  return std::nullopt;
}

OrderCertificate order_of_impl(const Element& t, const OrderBudget& budget, bool try_class_certificates) {
  if (!t.group()->invertible()) throw Error(ErrorKind::capability, "order is defined for invertible automata only");
  const std::size_t k = t.group()->num_letters();

  auto sig = orbit_signalizer(t, budget);
  if (sig.complete) {
    const std::size_t v = sig.vertices.size();
    std::vector<std::vector<State>> adj(v);
    for (const auto& e : sig.edges) adj[e.from].push_back(static_cast<State>(e.to));
    auto comps = strongly_connected_components(adj);
    std::vector<std::size_t> comp_of(v);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (State s : comps[c]) comp_of[s] = c;
    }

    for (const auto& e : sig.edges) {
      if (e.label > 1 && comp_of[e.from] == comp_of[e.to]) {
        OrderCertificate c = inconclusive_for(t);
        c.verdict = OrderVerdict::infinite;
        c.rule = CertificateRule::orbit_signalizer;
        std::vector<bool> all(v, true), inside(v, false);
        for (State s : comps[comp_of[e.from]]) inside[s] = true;
        SignalizerWitness w;
        w.vertices = v;
        w.prefix = *letter_path(sig, k, 0, e.from, all);
        w.cycle.push_back(e.letter);
        auto back = *letter_path(sig, k, e.to, e.from, inside);
        w.cycle.insert(w.cycle.end(), back.begin(), back.end());
        std::size_t cur = e.from;
        for (Letter y : w.cycle) {
          w.cycle_labels.push_back(sig.edges[cur * k + y].label);
          cur = sig.edges[cur * k + y].to;
        }
        c.witness = std::move(w);
        return c;
      }
    }

    // No cycle carries a label > 1: the order is the lcm over root paths of
    // label products. Components come sinks first.
    std::vector<std::uint64_t> below(comps.size(), 1);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (State s : comps[c]) {
        for (Letter y = 0; y < k; ++y) {
          const auto& e = sig.edges[s * k + y];
          if (comp_of[e.to] != c) below[c] = checked_lcm(below[c], checked_mul(e.label, below[comp_of[e.to]]));
        }
      }
    }
    const std::uint64_t m = below[comp_of[0]];
    if (m != kOverflow) {
      constexpr std::uint64_t kCrossCheckLimit = 4096;
      if (m <= kCrossCheckLimit && is_identity(t.pow(m), budget.identity_sections).is_false()) {
        throw Error(ErrorKind::internal, "signalizer order is contradicted by the action");
      }
      OrderCertificate c = inconclusive_for(t);
      c.verdict = OrderVerdict::finite;
      c.order = m;
      c.rule = CertificateRule::orbit_signalizer;
      c.witness = SignalizerWitness{v, {}, {}, {}};
      return c;
    }
  }

  if (try_class_certificates) {
    if (auto c = class_certificate_for(t)) return *c;
  }
  if (auto c = brute_force(t, budget)) return *c;
  return inconclusive_for(t);
}

std::optional<OrderCertificate> class_certificate_for(const Element& t) {
  const auto& a = t.group()->automaton();
  if (t.empty() || !t.is_positive()) return std::nullopt;
  auto gen = single_generator(t);

  if (is_reversible(a)) {
    auto whole = cert_reversible(a);
    if (whole.is_infinite()) {
      whole.subject = t.word();
      return whole;
    }
    if (gen) {
      for (const auto& comp : connected_components(a)) {
        if (!std::ranges::binary_search(comp, *gen)) continue;
        auto local = cert_reversible(restrict_to(a, comp));
        if (local.is_infinite()) {
          std::get<ReversibleWitness>(local.witness).components = {comp};
          local.subject = t.word();
          return local;
        }
      }
    }
  }
  if (gen && is_reset(a)) {
    auto unfolded = unfold_reset(a);
    auto c = cert_reset(unfolded.automaton);
    if (c.is_infinite() && std::ranges::find(unfolded.origin, *gen) != unfolded.origin.end()) {
      c.subject = t.word();
      return c;
    }
  }
  if (gen && a.id_state() && activity_class(a).is_polynomial()) {
    auto witnesses = bounded_selfloop_witnesses(a);
    if (witnesses[*gen]) {
      OrderCertificate c;
      c.verdict = OrderVerdict::infinite;
      c.rule = CertificateRule::bounded_selfloop;
      c.subject = t.word();
      c.witness = *witnesses[*gen];
      return c;
    }
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(OrderVerdict v) noexcept {
  switch (v) {
    case OrderVerdict::infinite: return "infinite";
    case OrderVerdict::finite: return "finite";
    case OrderVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

const char* to_string(CertificateRule r) noexcept {
  switch (r) {
    case CertificateRule::none: return "none";
    case CertificateRule::reset_pi: return "reset-pi";
    case CertificateRule::bounded_selfloop: return "bounded-selfloop";
    case CertificateRule::reversible_nonbireversible: return "reversible-nonbireversible";
    case CertificateRule::orbit_signalizer: return "orbit-signalizer";
    case CertificateRule::brute_force: return "brute-force";
  }
  return "none";
}

std::uint64_t orbit(const Element& t, std::span<const Letter> x, std::size_t max_len) {
  if (x.size() > max_len) throw Error(ErrorKind::size, "orbit: word longer than cap");
  const std::size_t k = t.group()->num_letters();
  std::uint64_t words = 1;
  for (std::size_t i = 0; i < x.size(); ++i) words = checked_mul(words, k);

  LetterWord target(x.begin(), x.end());
  LetterWord cur = t.act(target);
  for (std::uint64_t alpha = 1; alpha <= words; ++alpha) {
    if (cur == target) return alpha;
    cur = t.act(cur);
  }
  throw Error(ErrorKind::capability, "orbit: the word never returns (element is not a permutation)");
}

OrbitSignalizer orbit_signalizer(const Element& t, const OrderBudget& budget) {
  const auto& group = t.group();
  const std::size_t k = group->num_letters();
  OrbitSignalizer g;

  std::unordered_map<std::vector<Element::Code>, std::size_t, detail::WordHash> by_word;
  std::map<std::vector<Letter>, std::vector<std::size_t>> by_fingerprint;

  auto add_vertex = [&](Element e) {
    const std::size_t idx = g.vertices.size();
    by_word.emplace(e.codes(), idx);
    by_fingerprint[fingerprint(e)].push_back(idx);
    g.vertices.push_back(std::move(e));
    return idx;
  };

  std::size_t comparisons = 0;
  auto find_vertex = [&](const Element& e) -> std::optional<std::size_t> {
    if (auto it = by_word.find(e.codes()); it != by_word.end()) return it->second;
    auto it = by_fingerprint.find(fingerprint(e));
    if (it == by_fingerprint.end()) return std::nullopt;
    for (std::size_t idx : it->second) {
      ++comparisons;
      if (elements_equal(e, g.vertices[idx], budget.comparison_sections).is_true()) {
        by_word.emplace(e.codes(), idx);
        return idx;
      }
    }
    return std::nullopt;
  };

  add_vertex(t.reduced());
  for (std::size_t head = 0; head < g.vertices.size(); ++head) {
    for (Letter y = 0; y < k; ++y) {
      const Element v = g.vertices[head];
      const std::uint64_t label = orbit(v, std::span<const Letter>(&y, 1), 1);
      Element child = v.pow(label).section(y).reduced();
      auto target = find_vertex(child);
      if (comparisons > budget.signalizer_comparisons) return g;
      if (!target) {
        if (g.vertices.size() >= budget.signalizer_vertices || child.length() > budget.vertex_word_length) {
          g.complete = false;
          return g;
        }
        target = add_vertex(std::move(child));
      }
      g.edges.push_back({head, y, label, *target});
    }
  }
  g.complete = true;
  return g;
}

std::uint64_t signalizer_lcm_to_depth(const OrbitSignalizer& g, std::size_t depth) {
  if (!g.complete) throw Error(ErrorKind::precondition, "signalizer is truncated");
  const std::size_t v = g.vertices.size();
  std::vector<std::uint64_t> level(v, 1);
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<std::uint64_t> next(v, 1);
    for (const auto& e : g.edges) next[e.from] = checked_lcm(next[e.from], checked_mul(e.label, level[e.to]));
    level = std::move(next);
  }
  return level[0];
}

OrderCertificate order_of(const Element& t, const OrderBudget& budget) { return order_of_impl(t, budget, true); }

OrderCertificate cert_reset(const MealyAutomaton& a) {
  if (!is_unfolded_reset(a)) throw Error(ErrorKind::capability, "cert_reset needs an unfolded reset automaton");
  if (!is_invertible(a)) throw Error(ErrorKind::capability, "cert_reset needs an invertible automaton");
  const std::size_t k = a.num_letters();

  std::vector<Letter> pi(k);
  for (State q = 0; q < k; ++q) {
    auto row = a.rho_row(q);
    pi[q] = static_cast<Letter>(std::ranges::find(row, q) - row.begin());
  }

  OrderCertificate c;
  c.scope = "every state";
  if (is_permutation(pi, k)) return c;

  // Points reached after k steps lie on cycles.
  std::vector<bool> cyclic(k, false);
  for (Letter x = 0; x < k; ++x) {
    Letter y = x;
    for (std::size_t i = 0; i < k; ++i) y = pi[y];
    cyclic[y] = true;
  }
  for (bool grown = true; grown;) {
    grown = false;
    for (Letter x = 0; x < k; ++x) {
      if (cyclic[x] && !cyclic[pi[x]]) {
        cyclic[pi[x]] = true;
        grown = true;
      }
    }
  }
  ResetWitness w;
  w.pi = pi;
  for (Letter x = 0; x < k; ++x) {
    if (!cyclic[x] && cyclic[pi[x]]) {
      w.x0 = x;
      break;
    }
  }
  const Letter x1 = pi[w.x0];
  Letter y = x1;
  do {
    w.cycle.push_back(y);
    y = pi[y];
  } while (y != x1);

  c.verdict = OrderVerdict::infinite;
  c.rule = CertificateRule::reset_pi;
  c.witness = std::move(w);
  return c;
}

std::vector<std::optional<SelfLoopWitness>> bounded_selfloop_witnesses(const MealyAutomaton& a, std::size_t cap) {
  auto cs = cycle_structure(a);
  if (!cs.max_cycles_on_path) throw Error(ErrorKind::capability, "cert_bounded needs polynomial activity");
  auto nf = normal_form(a, cap);
  const auto& b = nf.automaton;
  const std::size_t k = a.num_letters();

  std::vector<std::optional<SelfLoopWitness>> out(a.num_states());
  for (State t = 0; t < a.num_states(); ++t) {
    if (a.id_state() == t || cycles_reachable_from(cs, t) != 1) continue;
    for (Letter block = 0; block < b.num_letters(); ++block) {
      if (b.delta(block, t) == t && b.rho(t, block) != block) {
        const Letter image = b.rho(t, block);
        out[t] = SelfLoopWitness{t, nf.grouping(),
                                 ungroup_letters(std::span<const Letter>(&block, 1), k, nf.grouping()),
                                 ungroup_letters(std::span<const Letter>(&image, 1), k, nf.grouping())};
        break;
      }
    }
  }
  return out;
}

OrderCertificate cert_bounded(const MealyAutomaton& a, std::size_t cap) {
  auto witnesses = bounded_selfloop_witnesses(a, cap);
  OrderCertificate c;
  for (const auto& w : witnesses) {
    if (!w) continue;
    c.verdict = OrderVerdict::infinite;
    c.rule = CertificateRule::bounded_selfloop;
    c.subject = SignedWord{{w->state, +1}};
    c.witness = *w;
    return c;
  }
  return c;
}

OrderCertificate cert_reversible(const MealyAutomaton& a) {
  if (!is_invertible(a) || !is_reversible(a)) {
    throw Error(ErrorKind::capability, "cert_reversible needs an invertible reversible automaton");
  }
  OrderCertificate c;
  c.scope = "every nonempty positive state word";
  auto comps = connected_components(a);
  for (const auto& comp : comps) {
    auto sub = restrict_to(a, comp);
    if (!is_strongly_connected(sub)) throw Error(ErrorKind::internal, "reversible component is not strongly connected");
    if (is_bireversible(sub)) return c;
  }
  c.verdict = OrderVerdict::infinite;
  c.rule = CertificateRule::reversible_nonbireversible;
  c.witness = ReversibleWitness{std::move(comps)};
  return c;
}

std::vector<OrderCertificate> analyze(const MealyAutomaton& a, const OrderBudget& budget) {
  auto group = AutomatonGroup::create(a);
  const std::size_t n = a.num_states();
  std::vector<OrderCertificate> out(n);
  for (State q = 0; q < n; ++q) out[q].subject = SignedWord{{q, +1}};
  if (!group->invertible()) {
    for (auto& c : out) c.scope = "order undefined: automaton is not invertible";
    return out;
  }

  auto settle = [&](State q, OrderCertificate c) {
    if (out[q].verdict != OrderVerdict::inconclusive) return;
    c.subject = SignedWord{{q, +1}};
    out[q] = std::move(c);
  };

  if (is_reversible(a)) {
    for (const auto& comp : connected_components(a)) {
      auto c = cert_reversible(restrict_to(a, comp));
      if (!c.is_infinite()) continue;
      std::get<ReversibleWitness>(c.witness).components = {comp};
      for (State q : comp) settle(q, c);
    }
  }
  if (is_reset(a)) {
    auto unfolded = unfold_reset(a);
    auto c = cert_reset(unfolded.automaton);
    if (c.is_infinite()) {
      for (State q : unfolded.origin) settle(q, c);
    }
  }
  if (a.id_state() && activity_class(a).is_polynomial()) {
    auto witnesses = bounded_selfloop_witnesses(a);
    for (State q = 0; q < n; ++q) {
      if (!witnesses[q]) continue;
      OrderCertificate c;
      c.verdict = OrderVerdict::infinite;
      c.rule = CertificateRule::bounded_selfloop;
      c.witness = *witnesses[q];
      settle(q, std::move(c));
    }
  }
  for (State q = 0; q < n; ++q) {
    if (out[q].verdict == OrderVerdict::inconclusive) {
      out[q] = order_of_impl(Element::generator(group, q), budget, false);
    }
  }
  return out;
}

}  // namespace mealy
