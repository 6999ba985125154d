#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mealy/automaton.hpp"

namespace mealy {

/// Per-trial random stream: std::mt19937_64 seeded with
/// seed ^ splitmix64(trial_index). A trial's stream does not depend on
/// scheduling.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  static constexpr std::string_view algorithm = "std::mt19937_64; stream seed = seed ^ splitmix64(trial_index)";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng for_trial(std::uint64_t seed, std::uint64_t trial_index);

  engine_type& engine() noexcept { return engine_; }

  /// Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  engine_type engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Uniform permutation of {0..size-1} (Fisher-Yates through std::shuffle).
std::vector<std::uint32_t> random_permutation(std::size_t size, Rng& rng);

enum class SamplerClass { invertible_reversible, reset_unfolded, reset_minimal, pol, pol0_conditional };

const char* to_string(SamplerClass c) noexcept;
SamplerClass sampler_class_from_string(std::string_view name);

struct SamplerSpec {
  SamplerClass sampler = SamplerClass::invertible_reversible;
  std::size_t n = 1;  // states (ignored by the reset samplers: n = k)
  std::size_t k = 1;  // letters
  int degree = 0;     // pol: target activity degree, -1 for finitary
  bool degree_inclusive = false;  // pol: accept any degree in [-1, degree]
  std::uint64_t seed = 0;
  std::uint64_t trial_index = 0;
  std::size_t max_rejects = 100'000;

  bool operator==(const SamplerSpec&) const = default;
};

nlohmann::ordered_json sampler_spec_to_json(const SamplerSpec& spec);
SamplerSpec sampler_spec_from_json(const nlohmann::json& doc);

/// k uniform permutations of the states (delta) and n uniform permutations of
/// the letters (rho).
MealyAutomaton sample_invertible_reversible(std::size_t n, std::size_t k, Rng& rng);

/// Unfolded reset automaton: Q = Sigma, delta_x(q) = x, uniform rho rows.
MealyAutomaton sample_reset(std::size_t k, Rng& rng);

/// sample_reset conditioned on pairwise distinct rho rows (rejection).
/// Throws Error{capability} for k < 2, Error{sampling_exhausted} after
/// max_rejects rejections.
MealyAutomaton sample_reset_minimal(std::size_t k, Rng& rng, std::size_t max_rejects = 100'000);

/// Keeps delta and the identity row of `skeleton`, draws every other rho row
/// uniformly. The skeleton must have polynomial, non-finitary activity.
MealyAutomaton sample_pol_conditional(const MealyAutomaton& skeleton, Rng& rng);

/// Uniform delta (identity state = last state, self-looping), rejected until
/// the activity degree is `degree` (or in [-1, degree] when inclusive); then
/// uniform rho rows. Throws Error{sampling_exhausted}.
MealyAutomaton sample_pol(int degree, std::size_t n, std::size_t k, Rng& rng, std::size_t max_rejects = 100'000,
                          bool inclusive = false);

/// Transition skeleton used by sample_pol: states q0..q{n-2} and identity
/// state e (last), letters 0..k-1; `targets[q * k + x]` for non-identity q.
MealyAutomaton pol_skeleton(std::size_t n, std::size_t k, const std::vector<State>& targets);

/// Dispatches on spec.sampler with Rng::for_trial(seed, trial_index).
/// pol0_conditional needs a skeleton.
MealyAutomaton sample(const SamplerSpec& spec, const MealyAutomaton* skeleton = nullptr);

}  // namespace mealy
