#include "mealy/sample.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "mealy/classify.hpp"
#include "mealy/errors.hpp"

namespace mealy {
namespace {

std::vector<std::string> numbered(std::string_view prefix, std::size_t count) {
  std::vector<std::string> names;
  names.reserve(count);
  for (std::size_t i = 0; i < count; ++i) names.push_back(std::string(prefix) + std::to_string(i));
  return names;
}

void require_positive(std::size_t value, const char* what) {
  if (value == 0) throw Error(ErrorKind::input_domain, std::string(what) + " must be at least 1");
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t trial_index) { return Rng(seed ^ splitmix64(trial_index)); }

std::uint64_t Rng::below(std::uint64_t bound) {
  std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
  return dist(engine_);
}

std::vector<std::uint32_t> random_permutation(std::size_t size, Rng& rng) {
  std::vector<std::uint32_t> perm(size);
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), rng.engine());
  return perm;
}

const char* to_string(SamplerClass c) noexcept {
  switch (c) {
    case SamplerClass::invertible_reversible: return "invertible-reversible";
    case SamplerClass::reset_unfolded: return "reset-unfolded";
    case SamplerClass::reset_minimal: return "reset-minimal";
    case SamplerClass::pol: return "pol";
    case SamplerClass::pol0_conditional: return "pol0-conditional";
  }
  return "?";
}

SamplerClass sampler_class_from_string(std::string_view name) {
  for (auto c : {SamplerClass::invertible_reversible, SamplerClass::reset_unfolded, SamplerClass::reset_minimal,
                 SamplerClass::pol, SamplerClass::pol0_conditional}) {
    if (name == to_string(c)) return c;
  }
  throw Error(ErrorKind::parse, "unknown sampler class '" + std::string(name) + "'");
}

nlohmann::ordered_json sampler_spec_to_json(const SamplerSpec& spec) {
  nlohmann::ordered_json doc;
  doc["class"] = to_string(spec.sampler);
  doc["n"] = spec.n;
  doc["k"] = spec.k;
  doc["degree"] = spec.degree;
  doc["degree_inclusive"] = spec.degree_inclusive;
  doc["seed"] = spec.seed;
  doc["trial_index"] = spec.trial_index;
  doc["max_rejects"] = spec.max_rejects;
  return doc;
}

SamplerSpec sampler_spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::parse, "sampler spec must be an object");
  SamplerSpec spec;
  try {
    spec.sampler = sampler_class_from_string(doc.at("class").get<std::string>());
    spec.n = doc.value("n", spec.n);
    spec.k = doc.value("k", spec.k);
    spec.degree = doc.value("degree", spec.degree);
    spec.degree_inclusive = doc.value("degree_inclusive", spec.degree_inclusive);
    spec.seed = doc.value("seed", spec.seed);
    spec.trial_index = doc.value("trial_index", spec.trial_index);
    spec.max_rejects = doc.value("max_rejects", spec.max_rejects);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("sampler spec: ") + e.what());
  }
  return spec;
}

MealyAutomaton sample_invertible_reversible(std::size_t n, std::size_t k, Rng& rng) {
  require_positive(n, "n");
  require_positive(k, "k");
  std::vector<std::vector<State>> delta;
  for (std::size_t x = 0; x < k; ++x) delta.push_back(random_permutation(n, rng));
  std::vector<std::vector<Letter>> rho;
  for (std::size_t q = 0; q < n; ++q) rho.push_back(random_permutation(k, rng));
  return MealyAutomaton(numbered("q", n), numbered("", k), delta, rho);
}

MealyAutomaton sample_reset(std::size_t k, Rng& rng) {
  require_positive(k, "k");
  std::vector<std::vector<State>> delta(k, std::vector<State>(k));
  for (Letter x = 0; x < k; ++x) std::fill(delta[x].begin(), delta[x].end(), x);
  std::vector<std::vector<Letter>> rho;
  for (std::size_t q = 0; q < k; ++q) rho.push_back(random_permutation(k, rng));
  return MealyAutomaton(numbered("s", k), numbered("", k), delta, rho);
}

MealyAutomaton sample_reset_minimal(std::size_t k, Rng& rng, std::size_t max_rejects) {
  if (k < 2) throw Error(ErrorKind::capability, "reset-minimal sampling needs k >= 2");
  for (std::size_t attempt = 0; attempt <= max_rejects; ++attempt) {
    auto a = sample_reset(k, rng);
    std::set<std::vector<Letter>> rows;
    for (State q = 0; q < k; ++q) rows.emplace(a.rho_row(q).begin(), a.rho_row(q).end());
    if (rows.size() == k) return a;
  }
  throw Error(ErrorKind::sampling_exhausted,
              "reset-minimal: no sample with distinct rows after " + std::to_string(max_rejects) + " rejections");
}

MealyAutomaton sample_pol_conditional(const MealyAutomaton& skeleton, Rng& rng) {
  const Activity act = activity_class(skeleton);
  if (!act.is_polynomial() || act.kind == ActivityKind::finitary) {
    throw Error(ErrorKind::capability, "conditional sampling needs a polynomial, non-finitary skeleton (got " +
                                           to_string(act) + ")");
  }
  const State id = *skeleton.id_state();
  auto rho = skeleton.rho_table();
  for (State q = 0; q < skeleton.num_states(); ++q) {
    if (q != id) rho[q] = random_permutation(skeleton.num_letters(), rng);
  }
  return MealyAutomaton(skeleton.state_names(), skeleton.letter_names(), skeleton.delta_table(), rho, id);
}

MealyAutomaton pol_skeleton(std::size_t n, std::size_t k, const std::vector<State>& targets) {
  require_positive(n, "n");
  require_positive(k, "k");
  if (targets.size() != (n - 1) * k) throw Error(ErrorKind::input_domain, "skeleton target count mismatch");
  const State id = static_cast<State>(n - 1);
  std::vector<std::vector<State>> delta(k, std::vector<State>(n, id));
  for (State q = 0; q < id; ++q) {
    for (Letter x = 0; x < k; ++x) delta[x][q] = targets[q * k + x];
  }
  std::vector<std::vector<Letter>> rho(n, std::vector<Letter>(k));
  for (auto& row : rho) std::iota(row.begin(), row.end(), 0u);
  auto names = numbered("q", n - 1);
  names.push_back("e");
  return MealyAutomaton(std::move(names), numbered("", k), delta, rho, id);
}

MealyAutomaton sample_pol(int degree, std::size_t n, std::size_t k, Rng& rng, std::size_t max_rejects,
                          bool inclusive) {
  require_positive(n, "n");
  require_positive(k, "k");
  if (degree < -1) throw Error(ErrorKind::input_domain, "degree must be >= -1");
  auto accepts = [&](const Activity& act) {
    if (!act.is_polynomial()) return false;
    return inclusive ? act.degree <= degree : act.degree == degree;
  };
  std::vector<State> targets((n - 1) * k);
  for (std::size_t attempt = 0; attempt <= max_rejects; ++attempt) {
    for (auto& t : targets) t = static_cast<State>(rng.below(n));
    auto skeleton = pol_skeleton(n, k, targets);
    if (!accepts(activity_class(skeleton))) continue;
    auto rho = skeleton.rho_table();
    for (State q = 0; q + 1 < n; ++q) rho[q] = random_permutation(k, rng);
    return MealyAutomaton(skeleton.state_names(), skeleton.letter_names(), skeleton.delta_table(), rho,
                          skeleton.id_state());
  }
  throw Error(ErrorKind::sampling_exhausted, "pol(" + std::to_string(degree) + "): no accepted skeleton after " +
                                                 std::to_string(max_rejects) + " rejections");
}

MealyAutomaton sample(const SamplerSpec& spec, const MealyAutomaton* skeleton) {
  Rng rng = Rng::for_trial(spec.seed, spec.trial_index);
  switch (spec.sampler) {
    case SamplerClass::invertible_reversible: return sample_invertible_reversible(spec.n, spec.k, rng);
    case SamplerClass::reset_unfolded: return sample_reset(spec.k, rng);
    case SamplerClass::reset_minimal: return sample_reset_minimal(spec.k, rng, spec.max_rejects);
    case SamplerClass::pol:
      return sample_pol(spec.degree, spec.n, spec.k, rng, spec.max_rejects, spec.degree_inclusive);
    case SamplerClass::pol0_conditional:
      if (skeleton == nullptr) throw Error(ErrorKind::precondition, "pol0-conditional sampling needs a skeleton");
      return sample_pol_conditional(*skeleton, rng);
  }
  throw Error(ErrorKind::internal, "unhandled sampler class");
}

}  // namespace mealy
