#include "mealy/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "mealy/classify.hpp"
#include "mealy/element.hpp"
#include "mealy/errors.hpp"
#include "mealy/order.hpp"
#include "word_hash.hpp"

namespace mealy {
namespace {

constexpr const char* kGenericityNote =
    "fixed-size bound consistency only; limits as n or k grow are not measured";

// Runs fn(i) for i in [0, count) on a pool of threads. Results are stored by
// index, so the output does not depend on scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::uint64_t count, unsigned threads, Fn fn) {
  std::vector<T> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(count, 1)));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    constexpr std::uint64_t kChunk = 64;
    for (;;) {
      const std::uint64_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::uint64_t end = std::min(count, begin + kChunk);
      try {
        for (std::uint64_t i = begin; i < end; ++i) out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

enum class SweepStatus { skipped, confirmed, inconclusive, refuted };

struct TrialResult {
  std::vector<bool> flags;
  SweepStatus sweep = SweepStatus::skipped;
};

// Necessary condition for an infinite verdict: no small power is trivial.
SweepStatus soundness_sweep(const MealyAutomaton& a, State q, const ExperimentOptions& options) {
  auto g = Element::generator(AutomatonGroup::create(a), q);
  SweepStatus status = SweepStatus::confirmed;
  for (std::uint64_t m = 1; m <= options.sweep_max_power; ++m) {
    auto r = g.group()->invertible() ? is_identity_power(g, m, options.sweep_identity_budget)
                                     : is_identity(g.pow(m), options.sweep_identity_budget);
    if (r.is_true()) return SweepStatus::refuted;
    if (!r.is_false()) status = SweepStatus::inconclusive;
  }
  return status;
}

bool in_sweep(std::uint64_t index, const ExperimentOptions& options) {
  return options.sweep_stride > 0 && index % options.sweep_stride == 0;
}

Check sweep_check(const std::vector<TrialResult>& results) {
  std::uint64_t checked = 0, confirmed = 0, inconclusive = 0, refuted = 0;
  for (const auto& r : results) {
    switch (r.sweep) {
      case SweepStatus::skipped: continue;
      case SweepStatus::confirmed: ++confirmed; break;
      case SweepStatus::inconclusive: ++inconclusive; break;
      case SweepStatus::refuted: ++refuted; break;
    }
    ++checked;
  }
  std::ostringstream detail;
  detail << "checked " << checked << ", all powers nontrivial " << confirmed << ", inconclusive " << inconclusive
         << ", trivial power found " << refuted;
  return {"certificate_soundness_sweep", refuted == 0, detail.str()};
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) return 0;
    r *= base;
  }
  return r;
}

std::uint64_t factorial(std::uint64_t n) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<std::vector<std::uint32_t>> all_permutations(std::size_t size) {
  std::vector<std::uint32_t> p(size);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<std::vector<std::uint32_t>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

void require_enumerable(std::uint64_t total, const ExperimentOptions& options, const std::string& what) {
  if (total == 0 || total > options.exact_cap) {
    throw Error(ErrorKind::size, what + ": exhaustive space exceeds the enumeration cap of " +
                                     std::to_string(options.exact_cap));
  }
}

std::uint64_t trial_count(ExperimentMode mode, std::uint64_t trials, std::uint64_t space) {
  return mode == ExperimentMode::exact ? space : trials;
}

// Fills records, counts and interval from per-trial results; flag 0 is the outcome.
void aggregate(ExperimentReport& report, const std::vector<TrialResult>& results) {
  report.records.reserve(results.size());
  report.successes = 0;
  for (std::uint64_t i = 0; i < results.size(); ++i) {
    report.records.push_back({i, results[i].flags});
    if (results[i].flags[0]) ++report.successes;
  }
  report.trials = results.size();
  report.frequency = static_cast<double>(report.successes) / static_cast<double>(report.trials);
  if (report.mode == ExperimentMode::exact) {
    report.exact = Rational(report.successes, report.trials);
    report.ci = {report.frequency, report.frequency};
  } else {
    report.ci = wilson_interval(report.successes, report.trials);
  }
}

// The bound-side edge of the interval (or the exact value) respects the bound.
bool bound_consistent(const ExperimentReport& r, double tolerance = 1e-12) {
  if (!r.bound) return true;
  if (r.direction == BoundDirection::at_most) return r.ci.lower <= *r.bound + tolerance;
  return r.ci.upper >= *r.bound - tolerance;
}

Metric make_metric(std::string name, std::string scheme, std::uint64_t successes, std::uint64_t trials,
                   std::optional<double> expected) {
  Metric m;
  m.name = std::move(name);
  m.scheme = std::move(scheme);
  m.successes = successes;
  m.trials = trials;
  if (trials > 0) {
    m.frequency = static_cast<double>(successes) / static_cast<double>(trials);
    m.ci = wilson_interval(successes, trials);
  }
  m.expected = expected;
  if (expected && trials > 0) m.contains_expected = m.ci.contains(*expected);
  return m;
}

std::uint64_t count_flag(const std::vector<TrialResult>& results, std::size_t flag) {
  return static_cast<std::uint64_t>(
      std::ranges::count_if(results, [flag](const TrialResult& r) { return static_cast<bool>(r.flags[flag]); }));
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Smallest non-identity state all of whose transitions go to the identity.
std::optional<State> minimal_acceptable(std::size_t n, std::size_t k, const std::vector<State>& targets) {
  const State id = static_cast<State>(n - 1);
  for (State t = 0; t < id; ++t) {
    bool all_id = true;
    for (Letter x = 0; x < k; ++x) all_id = all_id && targets[t * k + x] == id;
    if (all_id) return t;
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(BoundDirection d) noexcept { return d == BoundDirection::at_most ? "<=" : ">="; }

const char* to_string(ExperimentMode m) noexcept { return m == ExperimentMode::exact ? "exact" : "sampled"; }

ExperimentMode experiment_mode_from_string(std::string_view name) {
  if (name == "exact") return ExperimentMode::exact;
  if (name == "sampled") return ExperimentMode::sampled;
  throw Error(ErrorKind::parse, "unknown experiment mode '" + std::string(name) + "'");
}

bool ExperimentReport::all_checks_pass() const noexcept {
  return std::ranges::all_of(checks, [](const Check& c) { return c.pass; });
}

const Metric* ExperimentReport::metric(std::string_view metric_name) const noexcept {
  auto it = std::ranges::find(metrics, metric_name, &Metric::name);
  return it == metrics.end() ? nullptr : &*it;
}

const Check* ExperimentReport::check(std::string_view check_name) const noexcept {
  auto it = std::ranges::find(checks, check_name, &Check::name);
  return it == checks.end() ? nullptr : &*it;
}

ExperimentReport exp_bireversible(std::size_t n, std::size_t k, std::uint64_t trials, ExperimentMode mode,
                                  std::uint64_t seed, const ExperimentOptions& options) {
  if (n == 0 || k == 0) throw Error(ErrorKind::input_domain, "n and k must be at least 1");
  if (mode == ExperimentMode::sampled && trials < 100) {
    throw Error(ErrorKind::input_domain, "sampled bireversibility experiment needs at least 100 trials");
  }
  Stopwatch clock;
  ExperimentReport report;
  report.name = "bireversible";
  report.mode = mode;
  report.spec = {SamplerClass::invertible_reversible, n, k, 0, false, seed, 0};
  report.scheme = mode == ExperimentMode::exact ? "exhaustive over all invertible reversible automata"
                                                : "uniform invertible reversible automata";
  report.flag_names = {"bireversible", "strongly_connected", "cert_reversible_infinite"};

  const auto state_perms = all_permutations(n);
  const auto letter_perms = all_permutations(k);
  std::uint64_t space = 0;
  if (mode == ExperimentMode::exact) {
    const std::uint64_t a = checked_pow(state_perms.size(), k), b = checked_pow(letter_perms.size(), n);
    space = (a == 0 || b == 0 || a > options.exact_cap / b) ? 0 : a * b;
    require_enumerable(space, options, "bireversible exact mode");
  }

  auto build = [&](std::uint64_t index) {
    if (mode == ExperimentMode::sampled) {
      Rng rng = Rng::for_trial(seed, index);
      return sample_invertible_reversible(n, k, rng);
    }
    std::vector<std::vector<State>> delta;
    std::vector<std::vector<Letter>> rho;
    for (std::size_t x = 0; x < k; ++x, index /= state_perms.size()) delta.push_back(state_perms[index % state_perms.size()]);
    for (std::size_t q = 0; q < n; ++q, index /= letter_perms.size()) rho.push_back(letter_perms[index % letter_perms.size()]);
    std::vector<std::string> states, letters;
    for (std::size_t q = 0; q < n; ++q) states.push_back("q" + std::to_string(q));
    for (std::size_t x = 0; x < k; ++x) letters.push_back(std::to_string(x));
    return MealyAutomaton(states, letters, delta, rho);
  };

  auto results = parallel_map<TrialResult>(trial_count(mode, trials, space), options.threads, [&](std::uint64_t i) {
    const auto a = build(i);
    TrialResult r;
    const bool bir = is_bireversible(a);
    const bool infinite = cert_reversible(a).is_infinite();
    r.flags = {bir, is_strongly_connected(a), infinite};
    if (infinite && in_sweep(i, options)) r.sweep = soundness_sweep(a, 0, options);
    return r;
  });
  aggregate(report, results);

  report.bound = 1.0 / std::pow(static_cast<double>(n), static_cast<double>(k - 1)) + 1.0 / static_cast<double>(k);
  report.direction = BoundDirection::at_most;
  report.bound_formula = "1/n^(k-1) + 1/k";
  report.pass = bound_consistent(report);

  report.metrics.push_back(
      make_metric("strongly_connected", report.scheme, count_flag(results, 1), report.trials, std::nullopt));
  if (mode == ExperimentMode::exact) report.metrics.back().ci = {report.metrics.back().frequency, report.metrics.back().frequency};
  // A connected automaton gets the certificate iff it is not bireversible.
  std::uint64_t mismatched = 0;
  for (const auto& r : results) mismatched += r.flags[1] && r.flags[2] == r.flags[0];
  report.checks.push_back({"cert_reversible_iff_not_bireversible_when_connected", mismatched == 0,
                           std::to_string(mismatched) + " connected automata disagree"});
  report.checks.push_back(sweep_check(results));
  report.genericity_note = kGenericityNote;
  report.wall_clock_seconds = clock.seconds();
  return report;
}

ExperimentReport exp_reset(std::size_t k, std::uint64_t trials, ExperimentMode mode, std::uint64_t seed,
                           const ExperimentOptions& options) {
  if (k == 0) throw Error(ErrorKind::input_domain, "k must be at least 1");
  if (mode == ExperimentMode::sampled && trials == 0) throw Error(ErrorKind::input_domain, "trials must be positive");
  Stopwatch clock;
  ExperimentReport report;
  report.name = "reset";
  report.mode = mode;
  report.spec = {SamplerClass::reset_unfolded, k, k, 0, false, seed, 0};
  report.scheme = mode == ExperimentMode::exact ? "exhaustive over all unfolded reset automata"
                                                : "uniform unfolded reset automata";
  report.flag_names = {"pi_not_permutation", "cert_reset_infinite"};

  const auto perms = all_permutations(k);
  std::uint64_t space = 0;
  if (mode == ExperimentMode::exact) {
    if (k > 6) throw Error(ErrorKind::size, "reset exact mode: (k!)^k is not enumerable for k > 6");
    space = checked_pow(perms.size(), k);
    require_enumerable(space, options, "reset exact mode");
  }

  std::vector<std::string> names;
  for (std::size_t x = 0; x < k; ++x) names.push_back(std::to_string(x));
  std::vector<std::string> state_names;
  for (std::size_t x = 0; x < k; ++x) state_names.push_back("s" + std::to_string(x));
  std::vector<std::vector<State>> delta(k, std::vector<State>(k));
  for (Letter x = 0; x < k; ++x) std::ranges::fill(delta[x], x);

  auto build = [&](std::uint64_t index) {
    if (mode == ExperimentMode::sampled) {
      Rng rng = Rng::for_trial(seed, index);
      return sample_reset(k, rng);
    }
    std::vector<std::vector<Letter>> rho;
    for (std::size_t q = 0; q < k; ++q, index /= perms.size()) rho.push_back(perms[index % perms.size()]);
    return MealyAutomaton(state_names, names, delta, rho);
  };

  auto results = parallel_map<TrialResult>(trial_count(mode, trials, space), options.threads, [&](std::uint64_t i) {
    const auto a = build(i);
    // pi(q) = rho_q^-1(q), computed here independently of cert_reset.
    std::vector<bool> hit(k, false);
    for (State q = 0; q < k; ++q) {
      auto row = a.rho_row(q);
      hit[std::ranges::find(row, q) - row.begin()] = true;
    }
    const bool not_perm = std::ranges::find(hit, false) != hit.end();
    const bool infinite = cert_reset(a).is_infinite();
    TrialResult r;
    r.flags = {not_perm, infinite};
    if (infinite && in_sweep(i, options)) r.sweep = soundness_sweep(a, 0, options);
    return r;
  });
  aggregate(report, results);

  const double kd = static_cast<double>(k);
  report.bound = 1.0 - std::numbers::e * std::sqrt(kd) * std::exp(-kd);
  report.direction = BoundDirection::at_least;
  report.bound_formula = "1 - e sqrt(k) e^-k";
  report.pass = bound_consistent(report);

  const std::uint64_t kk = checked_pow(k, k);
  const double expected = kk != 0 ? 1.0 - static_cast<double>(factorial(k)) / static_cast<double>(kk)
                                  : 1.0 - std::exp(std::lgamma(kd + 1) - kd * std::log(kd));
  std::uint64_t disagreements = 0;
  for (const auto& r : results) disagreements += r.flags[0] != r.flags[1];
  report.checks.push_back({"cert_reset_iff_pi_not_permutation", disagreements == 0,
                           std::to_string(disagreements) + " trials disagree"});
  if (mode == ExperimentMode::exact) {
    const Rational formula(kk - factorial(k), kk);
    report.checks.push_back({"exact_equals_1_minus_kfact_over_k_pow_k", *report.exact == formula,
                             report.exact->to_string() + " vs " + formula.to_string()});
  } else {
    std::ostringstream d1, d2;
    d1.precision(10);
    d2.precision(10);
    d1 << "[" << report.ci.lower << ", " << report.ci.upper << "] vs " << expected;
    d2 << report.ci.lower << " vs " << *report.bound;
    report.checks.push_back({"ci_contains_1_minus_kfact_over_k_pow_k", report.ci.contains(expected), d1.str()});
    report.checks.push_back({"ci_lower_edge_exceeds_weak_bound", report.ci.lower > *report.bound, d2.str()});
  }
  report.checks.push_back(sweep_check(results));
  report.genericity_note = kGenericityNote;
  report.wall_clock_seconds = clock.seconds();
  return report;
}

ExperimentReport exp_bounded(std::size_t n, std::size_t k, std::uint64_t trials, std::uint64_t seed,
                             const ExperimentOptions& options) {
  if (n == 0 || k == 0) throw Error(ErrorKind::input_domain, "n and k must be at least 1");
  if (trials == 0) throw Error(ErrorKind::input_domain, "trials must be positive");
  Stopwatch clock;
  ExperimentReport report;
  report.name = "bounded";
  report.mode = ExperimentMode::sampled;
  report.spec = {SamplerClass::pol, n, k, 0, true, seed, 0};
  report.scheme = "full rejection: uniform delta with identity state, activity degree <= 0, uniform rho";
  report.flag_names = {"has_infinite_generator", "cert_bounded_infinite", "finitary", "conditional_trial",
                       "conditional_moved_cycle_letter", "conditional_selfloop_certificate"};

  auto results = parallel_map<TrialResult>(trials, options.threads, [&](std::uint64_t i) {
    Rng rng = Rng::for_trial(seed, i);
    const auto a = sample_pol(0, n, k, rng, report.spec.max_rejects, true);
    const auto activity = activity_class(a);
    const bool finitary = activity.kind == ActivityKind::finitary;

    const auto certs = analyze(a);
    std::optional<State> infinite_state;
    for (State q = 0; q < a.num_states() && !infinite_state; ++q) {
      if (certs[q].is_infinite()) infinite_state = q;
    }
    const bool bounded_cert = cert_bounded(a).is_infinite();

    // Conditional scheme: same delta and identity row, fresh rho elsewhere;
    // t is the smallest state on a cycle and i the letter following it.
    bool conditional = false, moved = false, certified = false;
    if (!finitary) {
      conditional = true;
      const auto cs = cycle_structure(a);
      State t = 0;
      for (State q = 0; q < n; ++q) {
        if (a.id_state() == q) continue;
        if (cs.components[cs.component_of[q]].cyclic) {
          t = q;
          break;
        }
      }
      Letter i = 0;
      while (cs.component_of[a.delta(i, t)] != cs.component_of[t] || a.id_state() == a.delta(i, t)) ++i;
      const auto b = sample_pol_conditional(a, rng);
      moved = b.rho(t, i) != i;
      certified = bounded_selfloop_witnesses(b)[t].has_value();
    }
    TrialResult r;
    r.flags = {infinite_state.has_value(), bounded_cert, finitary, conditional, moved, certified};
    if (infinite_state && in_sweep(i, options)) r.sweep = soundness_sweep(a, *infinite_state, options);
    return r;
  });
  aggregate(report, results);

  report.bound = (static_cast<double>(k) - 1) / (static_cast<double>(k) + 1);
  report.direction = BoundDirection::at_least;
  report.bound_formula = "(k-1)/(k+1)";
  report.pass = bound_consistent(report);

  const std::uint64_t conditional = count_flag(results, 3);
  report.metrics.push_back(make_metric("finitary", report.scheme, count_flag(results, 2), report.trials, std::nullopt));
  report.metrics.push_back(make_metric("conditional_moved_cycle_letter",
                                       "conditional: delta of each non-finitary sample kept, rho resampled",
                                       count_flag(results, 4), conditional,
                                       1.0 - 1.0 / static_cast<double>(k)));
  if (const auto& m = report.metrics.back(); m.contains_expected) {
    report.checks.push_back({"conditional_frequency_brackets_1_minus_1_over_k", *m.contains_expected,
                             std::to_string(m.successes) + "/" + std::to_string(m.trials)});
  }
  std::uint64_t uncertified = 0;
  for (const auto& r : results) uncertified += r.flags[4] && !r.flags[5];
  report.checks.push_back({"moved_cycle_letter_gives_selfloop_certificate", uncertified == 0,
                           std::to_string(uncertified) + " conditional trials without a certificate"});
  report.checks.push_back(sweep_check(results));
  report.genericity_note = kGenericityNote;
  report.wall_clock_seconds = clock.seconds();
  return report;
}

std::optional<std::vector<State>> finitary_lift(std::size_t n, std::size_t k, const std::vector<State>& targets,
                                                Letter i) {
  auto t = minimal_acceptable(n, k, targets);
  if (!t || i >= k) return std::nullopt;
  auto lifted = targets;
  lifted[*t * k + i] = *t;
  return lifted;
}

std::optional<std::vector<State>> finitary_unlift(std::size_t n, std::size_t k, const std::vector<State>& targets) {
  std::optional<std::size_t> loop;
  for (State q = 0; q + 1 < n; ++q) {
    for (Letter x = 0; x < k; ++x) {
      if (targets[q * k + x] != q) continue;
      if (loop) return std::nullopt;
      loop = q * k + x;
    }
  }
  if (!loop) return std::nullopt;
  auto out = targets;
  out[*loop] = static_cast<State>(n - 1);
  return out;
}

ExperimentReport exp_finitary_fraction(std::size_t n, std::size_t k, const ExperimentOptions& options) {
  if (n == 0 || k == 0) throw Error(ErrorKind::input_domain, "n and k must be at least 1");
  Stopwatch clock;
  ExperimentReport report;
  report.name = "finitary-fraction";
  report.mode = ExperimentMode::exact;
  report.spec = {SamplerClass::pol, n, k, 0, true, 0, 0};
  report.scheme = "exhaustive over transition skeletons (identity state last)";
  report.flag_names = {"finitary", "pol0", "lift_ok"};
  report.rng = "none (exhaustive)";

  const std::size_t slots = (n - 1) * k;
  const std::uint64_t space = checked_pow(n, slots);
  require_enumerable(space, options, "finitary-fraction");

  auto decode = [&](std::uint64_t index) {
    std::vector<State> targets(slots);
    for (auto& t : targets) {
      t = static_cast<State>(index % n);
      index /= n;
    }
    return targets;
  };

  std::vector<std::vector<State>> lifts_per_trial;
  auto results = parallel_map<TrialResult>(space, options.threads, [&](std::uint64_t index) {
    const auto targets = decode(index);
    const auto act = activity_class(pol_skeleton(n, k, targets));
    const bool finitary = act.kind == ActivityKind::finitary;
    const bool pol0 = act.is_polynomial() && act.degree <= 0;
    bool lift_ok = true;
    if (finitary && n > 1) {
      for (Letter i = 0; i < k && lift_ok; ++i) {
        auto lifted = finitary_lift(n, k, targets, i);
        if (!lifted) {
          lift_ok = false;
          break;
        }
        const auto lifted_act = activity_class(pol_skeleton(n, k, *lifted));
        lift_ok = lifted_act.kind == ActivityKind::polynomial && lifted_act.degree == 0 &&
                  finitary_unlift(n, k, *lifted) == targets;
      }
    }
    TrialResult r;
    r.flags = {finitary, pol0, lift_ok};
    return r;
  });

  // Global injectivity: no two (skeleton, letter) pairs lift to the same skeleton.
  std::unordered_set<std::vector<State>, detail::WordHash> images;
  std::uint64_t lifts = 0, collisions = 0;
  if (n > 1) {
    for (std::uint64_t index = 0; index < space; ++index) {
      if (!results[index].flags[0]) continue;
      const auto targets = decode(index);
      for (Letter i = 0; i < k; ++i) {
        if (auto lifted = finitary_lift(n, k, targets, i)) {
          ++lifts;
          if (!images.insert(std::move(*lifted)).second) ++collisions;
        }
      }
    }
  }

  const std::uint64_t finitary = count_flag(results, 0);
  const std::uint64_t pol0 = count_flag(results, 1);
  report.records.reserve(space);
  for (std::uint64_t i = 0; i < space; ++i) report.records.push_back({i, results[i].flags});
  report.successes = finitary;
  report.trials = pol0;
  report.exact = Rational(finitary, pol0);
  report.frequency = report.exact->value();
  report.ci = {report.frequency, report.frequency};

  const bool degenerate = n == 1;
  report.direction = BoundDirection::at_most;
  report.bound_formula = "1/(k+1)";
  if (!degenerate) report.bound = 1.0 / (static_cast<double>(k) + 1);
  report.pass = bound_consistent(report);

  std::uint64_t bad_lifts = 0;
  for (const auto& r : results) bad_lifts += r.flags[0] && !r.flags[2];
  report.checks.push_back({"lifts_are_bounded_nonfinitary_and_reconstructible", bad_lifts == 0,
                           std::to_string(bad_lifts) + " finitary skeletons fail"});
  report.checks.push_back({"lift_map_injective", collisions == 0 && lifts == (degenerate ? 0 : finitary * k),
                           std::to_string(lifts) + " lifts, " + std::to_string(collisions) + " collisions"});
  report.genericity_note =
      degenerate ? "degenerate: with one state the only skeleton is the identity machine, no ratio trend applies"
                 : "fixed-size exhaustive ratio; shrinking with k is checked across sizes, not extrapolated";
  report.wall_clock_seconds = clock.seconds();
  return report;
}

nlohmann::ordered_json experiment_config_to_json(const ExperimentConfig& config) {
  nlohmann::ordered_json doc;
  doc["experiment"] = config.experiment;
  doc["mode"] = to_string(config.mode);
  doc["trials"] = config.trials;
  doc["spec"] = sampler_spec_to_json(config.spec);
  return doc;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::parse, "experiment config must be an object");
  ExperimentConfig config;
  try {
    config.experiment = doc.at("experiment").get<std::string>();
    config.mode = experiment_mode_from_string(doc.value("mode", std::string("sampled")));
    config.trials = doc.value("trials", config.trials);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("experiment config: ") + e.what());
  }
  if (doc.contains("spec")) config.spec = sampler_spec_from_json(doc.at("spec"));
  return config;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const ExperimentOptions& options) {
  const auto& s = config.spec;
  if (config.experiment == "bireversible") return exp_bireversible(s.n, s.k, config.trials, config.mode, s.seed, options);
  if (config.experiment == "reset") return exp_reset(s.k, config.trials, config.mode, s.seed, options);
  if (config.experiment == "bounded") return exp_bounded(s.n, s.k, config.trials, s.seed, options);
  if (config.experiment == "finitary-fraction") return exp_finitary_fraction(s.n, s.k, options);
  throw Error(ErrorKind::parse, "unknown experiment '" + config.experiment + "'");
}

nlohmann::ordered_json report_to_json(const ExperimentReport& r, bool include_records) {
  using ojson = nlohmann::ordered_json;
  auto interval = [](const Interval& ci) {
    ojson j;
    j["lower"] = ci.lower;
    j["upper"] = ci.upper;
    j["level"] = 0.99;
    j["method"] = "wilson";
    return j;
  };
  ojson doc;
  doc["name"] = r.name;
  doc["mode"] = to_string(r.mode);
  doc["spec"] = sampler_spec_to_json(r.spec);
  doc["scheme"] = r.scheme;
  doc["trials"] = r.trials;
  doc["flag_names"] = r.flag_names;
  doc["successes"] = r.successes;
  doc["frequency"] = r.frequency;
  doc["ci"] = interval(r.ci);
  if (r.exact) {
    doc["exact"] = {{"fraction", r.exact->to_string()}, {"value", r.exact->value()}};
  } else {
    doc["exact"] = nullptr;
  }
  ojson bound;
  bound["value"] = r.bound ? ojson(*r.bound) : ojson(nullptr);
  bound["direction"] = to_string(r.direction);
  bound["formula"] = r.bound_formula;
  doc["bound"] = std::move(bound);
  doc["pass"] = r.pass;
  auto metrics = ojson::array();
  for (const auto& m : r.metrics) {
    ojson j;
    j["name"] = m.name;
    j["scheme"] = m.scheme;
    j["successes"] = m.successes;
    j["trials"] = m.trials;
    j["frequency"] = m.frequency;
    j["ci"] = interval(m.ci);
    j["expected"] = m.expected ? ojson(*m.expected) : ojson(nullptr);
    j["contains_expected"] = m.contains_expected ? ojson(*m.contains_expected) : ojson(nullptr);
    metrics.push_back(std::move(j));
  }
  doc["metrics"] = std::move(metrics);
  auto checks = ojson::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  doc["checks"] = std::move(checks);
  doc["all_checks_pass"] = r.all_checks_pass();
  doc["rng"] = r.rng;
  doc["wall_clock_seconds"] = r.wall_clock_seconds;
  doc["genericity_note"] = r.genericity_note;
  if (include_records) {
    auto records = ojson::array();
    for (const auto& rec : r.records) {
      ojson j;
      j["trial_index"] = rec.trial_index;
      for (std::size_t f = 0; f < r.flag_names.size(); ++f) j[r.flag_names[f]] = static_cast<bool>(rec.flags[f]);
      records.push_back(std::move(j));
    }
    doc["records"] = std::move(records);
  }
  return doc;
}

std::string trial_table_csv(const ExperimentReport& report) {
  std::string out = "trial_index";
  for (const auto& f : report.flag_names) out += "," + f;
  out += "\n";
  for (const auto& rec : report.records) {
    out += std::to_string(rec.trial_index);
    for (bool b : rec.flags) out += b ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

}  // namespace mealy
