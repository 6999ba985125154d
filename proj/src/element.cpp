#include "mealy/element.hpp"

#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "mealy/errors.hpp"
#include "word_hash.hpp"

namespace mealy {

SignedWord positive_word(std::span<const State> states) {
  SignedWord word;
  word.reserve(states.size());
  for (State q : states) word.push_back({q, +1});
  return word;
}

std::shared_ptr<const AutomatonGroup> AutomatonGroup::create(MealyAutomaton automaton) {
  return std::shared_ptr<const AutomatonGroup>(new AutomatonGroup(std::move(automaton)));
}

AutomatonGroup::AutomatonGroup(MealyAutomaton automaton)
    : automaton_(std::move(automaton)), invertible_(is_invertible(automaton_)) {
  const std::size_t n = automaton_.num_states();
  const std::size_t k = automaton_.num_letters();
  const std::size_t codes = invertible_ ? 2 * n : n;
  next_.resize(codes * k);
  out_.resize(codes * k);
  for (State q = 0; q < n; ++q) {
    for (Letter x = 0; x < k; ++x) {
      next_[q * k + x] = automaton_.delta(x, q);
      out_[q * k + x] = automaton_.rho(q, x);
    }
  }
  if (invertible_) {
    // p --x|y--> q  <=>  p^-1 --y|x--> q^-1
    for (State q = 0; q < n; ++q) {
      for (Letter x = 0; x < k; ++x) {
        const Letter y = automaton_.rho(q, x);
        next_[(n + q) * k + y] = static_cast<Code>(n + automaton_.delta(x, q));
        out_[(n + q) * k + y] = x;
      }
    }
  }
}

AutomatonGroup::Code AutomatonGroup::encode(SignedState s) const {
  if (s.state >= num_states()) throw Error(ErrorKind::input_domain, "state index out of range");
  if (s.sign == +1) return s.state;
  if (s.sign != -1) throw Error(ErrorKind::input_domain, "sign must be +1 or -1");
  if (!invertible_) {
    throw Error(ErrorKind::capability, "negative generator over a non-invertible automaton");
  }
  return static_cast<Code>(num_states() + s.state);
}

SignedState AutomatonGroup::decode(Code c) const noexcept {
  const auto n = static_cast<Code>(num_states());
  return c < n ? SignedState{c, +1} : SignedState{c - n, -1};
}

AutomatonGroup::Code AutomatonGroup::inverse_code(Code c) const noexcept {
  const auto n = static_cast<Code>(num_states());
  return c < n ? c + n : c - n;
}

bool AutomatonGroup::is_identity_code(Code c) const noexcept {
  auto id = automaton_.id_state();
  return id && decode(c).state == *id;
}

Element::Element(GroupPtr group, const SignedWord& word) : group_(std::move(group)) {
  codes_.reserve(word.size());
  for (const auto& s : word) codes_.push_back(group_->encode(s));
}

Element Element::identity(GroupPtr group) { return Element(std::move(group), std::vector<Code>{}); }

Element Element::generator(GroupPtr group, State q) {
  return Element(std::move(group), SignedWord{{q, +1}});
}

Element Element::from_codes(GroupPtr group, std::vector<Code> codes) {
  const std::size_t limit = group->invertible() ? 2 * group->num_states() : group->num_states();
  for (Code c : codes) {
    if (c >= limit) throw Error(ErrorKind::input_domain, "generator code out of range");
  }
  return Element(std::move(group), std::move(codes));
}

SignedWord Element::word() const {
  SignedWord w;
  w.reserve(codes_.size());
  for (Code c : codes_) w.push_back(group_->decode(c));
  return w;
}

bool Element::is_positive() const noexcept {
  for (Code c : codes_) {
    if (c >= group_->num_states()) return false;
  }
  return true;
}

Letter Element::act(Letter x) const {
  if (x >= group_->num_letters()) throw Error(ErrorKind::input_domain, "letter index out of range");
  for (Code c : codes_) x = group_->output(c, x);
  return x;
}

LetterWord Element::act(std::span<const Letter> s) const {
  for (Letter x : s) {
    if (x >= group_->num_letters()) throw Error(ErrorKind::input_domain, "letter index out of range");
  }
  LetterWord word(s.begin(), s.end());
  for (Code c : codes_) {
    Code cur = c;
    for (auto& x : word) {
      const Letter y = group_->output(cur, x);
      cur = group_->next(cur, x);
      x = y;
    }
  }
  return word;
}

Element Element::section(Letter x) const {
  if (x >= group_->num_letters()) throw Error(ErrorKind::input_domain, "letter index out of range");
  std::vector<Code> out;
  out.reserve(codes_.size());
  for (Code c : codes_) {
    out.push_back(group_->next(c, x));
    x = group_->output(c, x);
  }
  return Element(group_, std::move(out));
}

Element Element::section(std::span<const Letter> s) const {
  Element cur = *this;
  for (Letter x : s) cur = cur.section(x);
  return cur;
}

std::vector<Letter> Element::root_map() const {
  std::vector<Letter> map(group_->num_letters());
  for (Letter x = 0; x < map.size(); ++x) map[x] = act(x);
  return map;
}

Element Element::inverse() const {
  if (!group_->invertible()) throw Error(ErrorKind::capability, "inverse of an element of a non-invertible automaton");
  std::vector<Code> out(codes_.rbegin(), codes_.rend());
  for (auto& c : out) c = group_->inverse_code(c);
  return Element(group_, std::move(out));
}

Element Element::operator*(const Element& rhs) const {
  if (group_ != rhs.group_) throw Error(ErrorKind::input_domain, "elements of different automata");
  std::vector<Code> out = codes_;
  out.insert(out.end(), rhs.codes_.begin(), rhs.codes_.end());
  return Element(group_, std::move(out));
}

Element Element::pow(std::uint64_t m) const {
  std::vector<Code> out;
  out.reserve(codes_.size() * m);
  for (std::uint64_t i = 0; i < m; ++i) out.insert(out.end(), codes_.begin(), codes_.end());
  return Element(group_, std::move(out));
}

Element Element::reduced() const {
  std::vector<Code> out;
  out.reserve(codes_.size());
  for (Code c : codes_) {
    if (group_->is_identity_code(c)) continue;
    if (group_->invertible() && !out.empty() && out.back() == group_->inverse_code(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return Element(group_, std::move(out));
}

std::string Element::to_string() const {
  if (codes_.empty()) return "1";
  std::string out;
  const auto& a = group_->automaton();
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (i > 0) out += ' ';
    auto s = group_->decode(codes_[i]);
    out += a.state_name(s.state);
    if (s.sign < 0) out += "^-1";
  }
  return out;
}

LetterWord act(const MealyAutomaton& a, const SignedWord& u, std::span<const Letter> s) {
  bool signed_word = false;
  for (const auto& g : u) signed_word = signed_word || g.sign < 0;
  if (!signed_word) {
    StateWord states;
    for (const auto& g : u) states.push_back(g.state);
    return act_positive(a, states, s);
  }
  return Element(AutomatonGroup::create(a), u).act(s);
}

WreathRecursion wreath_recursion(const Element& g) {
  WreathRecursion w;
  const std::size_t k = g.group()->num_letters();
  w.sections.reserve(k);
  for (Letter x = 0; x < k; ++x) w.sections.push_back(g.section(x));
  w.root_permutation = g.root_map();
  return w;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::yes: return "true";
    case Verdict::no: return "false";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

struct Node {
  std::vector<AutomatonGroup::Code> codes;
  std::size_t parent;
  Letter via;
};

LetterWord path_to(const std::vector<Node>& nodes, std::size_t idx) {
  LetterWord path;
  while (nodes[idx].parent != idx) {
    path.push_back(nodes[idx].via);
    idx = nodes[idx].parent;
  }
  return {path.rbegin(), path.rend()};
}

}  // namespace

IdentityResult is_identity(const Element& g, std::size_t budget) {
  const auto& group = *g.group();
  const std::size_t k = group.num_letters();
  IdentityResult result;

  std::vector<Node> nodes;
  std::unordered_set<std::vector<AutomatonGroup::Code>, detail::WordHash> seen;
  nodes.push_back({g.codes(), 0, 0});
  seen.insert(g.codes());

  std::vector<AutomatonGroup::Code> next(g.length());
  bool truncated = false;
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    result.explored = head + 1;
    // Root action of this section.
    for (Letter x = 0; x < k; ++x) {
      Letter y = x;
      for (auto c : nodes[head].codes) y = group.output(c, y);
      if (y != x) {
        result.verdict = Verdict::no;
        result.witness = path_to(nodes, head);
        result.witness.push_back(x);
        return result;
      }
    }
    for (Letter x = 0; x < k; ++x) {
      Letter y = x;
      const auto& codes = nodes[head].codes;
      for (std::size_t i = 0; i < codes.size(); ++i) {
        next[i] = group.next(codes[i], y);
        y = group.output(codes[i], y);
      }
      if (seen.contains(next)) continue;
      if (seen.size() >= budget) {
        // Keep draining the queue: a queued section may still move a letter.
        truncated = true;
        continue;
      }
      seen.insert(next);
      nodes.push_back({next, head, x});
    }
  }
  result.verdict = truncated ? Verdict::inconclusive : Verdict::yes;
  return result;
}

IdentityResult is_identity_power(const Element& t, std::uint64_t m, std::size_t budget) {
  if (!t.group()->invertible()) throw Error(ErrorKind::capability, "power identity test needs an invertible automaton");
  if (m == 0) return {Verdict::yes, {}, 0};
  const std::size_t k = t.group()->num_letters();
  using Code = AutomatonGroup::Code;
  const Code kSep = ~Code{0};

  struct PowerNode {
    Element base;
    std::uint64_t exponent;
    std::size_t parent;
    Letter via;
  };
  std::vector<PowerNode> nodes{{t.reduced(), m, 0, 0}};
  std::unordered_set<std::vector<Code>, detail::WordHash> seen;
  auto key = [&](const PowerNode& n) {
    auto codes = n.base.codes();
    codes.push_back(kSep);
    codes.push_back(static_cast<Code>(n.exponent));
    codes.push_back(static_cast<Code>(n.exponent >> 32));
    return codes;
  };
  seen.insert(key(nodes[0]));
  auto path = [&](std::size_t idx) {
    LetterWord w;
    while (idx != 0) {
      w.push_back(nodes[idx].via);
      idx = nodes[idx].parent;
    }
    return LetterWord(w.rbegin(), w.rend());
  };

  // Depth-first, exponent-reducing children first: witnesses tend to be
  // long while the tree below orbit-1 letters is wide.
  IdentityResult result;
  bool truncated = false;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t head = stack.back();
    stack.pop_back();
    ++result.explored;
    const Element h = nodes[head].base;
    const std::uint64_t e = nodes[head].exponent;
    std::vector<std::uint64_t> orbits(k, 1);
    for (Letter x = 0; x < k; ++x) {
      for (Letter y = h.act(x); y != x; y = h.act(y)) ++orbits[x];
      if (e % orbits[x] != 0) {
        result.verdict = Verdict::no;
        result.witness = path(head);
        result.witness.push_back(x);
        return result;
      }
    }
    std::vector<std::size_t> fixed, moving;
    for (Letter x = 0; x < k; ++x) {
      PowerNode child{h.pow(orbits[x]).section(x).reduced(), e / orbits[x], head, x};
      if (child.base.empty()) continue;
      auto ck = key(child);
      if (seen.contains(ck)) continue;
      if (seen.size() >= budget) {
        truncated = true;
        continue;
      }
      seen.insert(std::move(ck));
      nodes.push_back(std::move(child));
      (orbits[x] > 1 ? moving : fixed).push_back(nodes.size() - 1);
    }
    stack.insert(stack.end(), fixed.rbegin(), fixed.rend());
    stack.insert(stack.end(), moving.rbegin(), moving.rend());
  }
  result.verdict = truncated ? Verdict::inconclusive : Verdict::yes;
  return result;
}

IdentityResult elements_equal(const Element& g, const Element& h, std::size_t budget) {
  if (g.group() != h.group()) throw Error(ErrorKind::input_domain, "elements of different automata");
  if (g.codes() == h.codes()) return {Verdict::yes, {}, 1};
  if (g.group()->invertible()) return is_identity(g * h.inverse(), budget);
  if (!g.is_positive() || !h.is_positive()) {
    throw Error(ErrorKind::capability, "signed comparison over a non-invertible automaton");
  }

  // Semigroup case: pairs of sections (g|_s, h|_s) over the words s on
  // which g and h agree.
  const auto& group = *g.group();
  const std::size_t k = group.num_letters();
  using Codes = std::vector<AutomatonGroup::Code>;
  struct PairNode {
    Codes left, right;
    std::size_t parent;
    Letter via;
  };
  std::vector<PairNode> nodes;
  std::unordered_set<Codes, detail::WordHash> seen;
  auto key = [](const Codes& a, const Codes& b) {
    Codes joined = a;
    joined.push_back(~AutomatonGroup::Code{0});
    joined.insert(joined.end(), b.begin(), b.end());
    return joined;
  };
  nodes.push_back({g.codes(), h.codes(), 0, 0});
  seen.insert(key(g.codes(), h.codes()));

  auto run = [&](const Codes& codes, Letter x, Codes& next) {
    next.resize(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) {
      next[i] = group.next(codes[i], x);
      x = group.output(codes[i], x);
    }
    return x;
  };

  IdentityResult result;
  Codes nl, nr;
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    result.explored = head + 1;
    for (Letter x = 0; x < k; ++x) {
      const Letter yl = run(nodes[head].left, x, nl);
      const Letter yr = run(nodes[head].right, x, nr);
      if (yl != yr) {
        result.verdict = Verdict::no;
        LetterWord path;
        for (std::size_t i = head; nodes[i].parent != i; i = nodes[i].parent) path.push_back(nodes[i].via);
        result.witness.assign(path.rbegin(), path.rend());
        result.witness.push_back(x);
        return result;
      }
    }
    for (Letter x = 0; x < k; ++x) {
      run(nodes[head].left, x, nl);
      run(nodes[head].right, x, nr);
      auto joined = key(nl, nr);
      if (seen.contains(joined)) continue;
      if (seen.size() >= budget) {
        result.verdict = Verdict::inconclusive;
        return result;
      }
      seen.insert(std::move(joined));
      nodes.push_back({nl, nr, head, x});
    }
  }
  result.verdict = Verdict::yes;
  return result;
}

}  // namespace mealy
