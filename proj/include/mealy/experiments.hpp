#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mealy/sample.hpp"
#include "mealy/stats.hpp"

namespace mealy {

enum class BoundDirection { at_most, at_least };
enum class ExperimentMode { exact, sampled };

const char* to_string(BoundDirection d) noexcept;  // "<=" / ">="
const char* to_string(ExperimentMode m) noexcept;
ExperimentMode experiment_mode_from_string(std::string_view name);

struct TrialRecord {
  std::uint64_t trial_index = 0;
  std::vector<bool> flags;  // parallel to ExperimentReport::flag_names

  bool operator==(const TrialRecord&) const = default;
};

/// Secondary frequency measured alongside the main outcome.
struct Metric {
  std::string name;
  std::string scheme;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double frequency = 0.0;
  Interval ci;
  std::optional<double> expected;  // value the interval should contain
  std::optional<bool> contains_expected;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentReport {
  std::string name;
  ExperimentMode mode = ExperimentMode::sampled;
  SamplerSpec spec;
  std::string scheme;
  std::uint64_t trials = 0;

  std::vector<std::string> flag_names;  // flag_names[0] is the measured outcome
  std::vector<TrialRecord> records;

  std::uint64_t successes = 0;
  double frequency = 0.0;
  Interval ci;                     // 99% Wilson; collapses to the exact value in exact mode
  std::optional<Rational> exact;   // exact mode only

  std::optional<double> bound;     // empty when the comparison is degenerate
  BoundDirection direction = BoundDirection::at_most;
  std::string bound_formula;
  /// The bound-side edge of the interval respects the bound direction.
  bool pass = false;

  std::vector<Metric> metrics;
  std::vector<Check> checks;

  std::string rng = std::string(Rng::algorithm);
  double wall_clock_seconds = 0.0;
  std::string genericity_note;

  bool all_checks_pass() const noexcept;
  const Metric* metric(std::string_view metric_name) const noexcept;
  const Check* check(std::string_view check_name) const noexcept;
};

struct ExperimentOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  /// One trial in `sweep_stride` gets the certificate soundness sweep.
  std::uint64_t sweep_stride = 100;
  std::uint64_t sweep_max_power = 32;
  std::size_t sweep_identity_budget = 20'000;
  std::uint64_t exact_cap = 10'000'000;
};

/// Frequency of bireversibility among invertible reversible automata with
/// n states over k letters; bound 1/n^(k-1) + 1/k (at most).
ExperimentReport exp_bireversible(std::size_t n, std::size_t k, std::uint64_t trials, ExperimentMode mode,
                                  std::uint64_t seed, const ExperimentOptions& options = {});

/// Frequency of pi_A not being a permutation among unfolded reset automata
/// over k letters; exact value 1 - k!/k^k, bound 1 - e sqrt(k) e^-k (at least).
/// Exact mode enumerates (k!)^k automata.
ExperimentReport exp_reset(std::size_t k, std::uint64_t trials, ExperimentMode mode, std::uint64_t seed,
                           const ExperimentOptions& options = {});

/// Frequency of automata with an infinite-order generator among Pol(0)
/// automata (finitary ones included) with n states over k letters; bound
/// (k-1)/(k+1) (at least).
ExperimentReport exp_bounded(std::size_t n, std::size_t k, std::uint64_t trials, std::uint64_t seed,
                             const ExperimentOptions& options = {});

/// Exhaustive ratio #finitary / #Pol(0) over transition skeletons with n
/// states (identity last) over k letters, plus the injection check from
/// finitary skeletons into bounded non-finitary ones.
ExperimentReport exp_finitary_fraction(std::size_t n, std::size_t k, const ExperimentOptions& options = {});

/// Finitary to bounded non-finitary map: sets delta_i(t) = t for the
/// smallest non-identity state t all of whose transitions reach the identity.
/// Returns nullopt when no such state exists.
std::optional<std::vector<State>> finitary_lift(std::size_t n, std::size_t k, const std::vector<State>& targets,
                                                Letter i);
/// Inverse of finitary_lift: reverts the unique non-identity self-loop.
/// Returns nullopt unless there is exactly one.
std::optional<std::vector<State>> finitary_unlift(std::size_t n, std::size_t k, const std::vector<State>& targets);

struct ExperimentConfig {
  std::string experiment;  // bireversible, reset, bounded, finitary-fraction
  ExperimentMode mode = ExperimentMode::sampled;
  std::uint64_t trials = 1000;
  SamplerSpec spec;  // n, k and seed are read from here

  bool operator==(const ExperimentConfig&) const = default;
};

nlohmann::ordered_json experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);

ExperimentReport run_experiment(const ExperimentConfig& config, const ExperimentOptions& options = {});

nlohmann::ordered_json report_to_json(const ExperimentReport& report, bool include_records = false);

/// CSV with a header line "trial_index,<flag names>" and one row per trial.
std::string trial_table_csv(const ExperimentReport& report);

}  // namespace mealy
