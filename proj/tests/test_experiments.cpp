#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "mealy/classify.hpp"
#include "mealy/errors.hpp"
#include "mealy/experiments.hpp"

using namespace mealy;

namespace {

ExperimentOptions quick() {
  ExperimentOptions o;
  o.sweep_stride = 0;
  return o;
}

ExperimentOptions serial(unsigned threads) {
  ExperimentOptions o;
  o.threads = threads;
  return o;
}

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "no error thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

double factorial_ratio(std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r *= static_cast<double>(i) / static_cast<double>(k);
  return r;
}

}  // namespace

TEST(Wilson, KnownValues) {
  const auto ci = wilson_interval(50, 100, 1.96);
  EXPECT_NEAR(ci.lower, 0.4038, 1e-4);
  EXPECT_NEAR(ci.upper, 0.5962, 1e-4);
  EXPECT_EQ(wilson_interval(0, 10).lower, 0.0);
  EXPECT_EQ(wilson_interval(10, 10).upper, 1.0);
  EXPECT_LT(wilson_interval(10, 10).lower, 1.0);
  expect_error(ErrorKind::input_domain, [] { wilson_interval(0, 0); });
}

TEST(Wilson, NarrowsWithTrials) {
  const auto a = wilson_interval(30, 100), b = wilson_interval(3000, 10'000);
  EXPECT_LT(b.upper - b.lower, a.upper - a.lower);
  EXPECT_TRUE(a.contains(0.3));
  EXPECT_TRUE(b.contains(0.3));
}

TEST(Rational, LowestTerms) {
  EXPECT_EQ(Rational(6, 8), Rational(3, 4));
  EXPECT_EQ(Rational(6, 8).to_string(), "3/4");
  EXPECT_EQ(Rational(0, 5).to_string(), "0/1");
  EXPECT_DOUBLE_EQ(Rational(7, 9).value(), 7.0 / 9.0);
}

TEST(ExpReset, ExactSmallAlphabets) {
  const auto r2 = exp_reset(2, 0, ExperimentMode::exact, 0);
  EXPECT_EQ(r2.trials, 4u);
  ASSERT_TRUE(r2.exact);
  EXPECT_EQ(*r2.exact, Rational(1, 2));
  EXPECT_TRUE(r2.all_checks_pass());

  const auto r3 = exp_reset(3, 0, ExperimentMode::exact, 0);
  EXPECT_EQ(r3.trials, 216u);
  EXPECT_EQ(*r3.exact, Rational(7, 9));
  EXPECT_TRUE(r3.pass);
  EXPECT_TRUE(r3.all_checks_pass());
}

TEST(ExpReset, ExactFourLetters) {
  const auto r = exp_reset(4, 0, ExperimentMode::exact, 0, quick());
  EXPECT_EQ(r.trials, 331'776u);
  EXPECT_EQ(*r.exact, Rational(29, 32));
  EXPECT_TRUE(r.all_checks_pass());
}

TEST(ExpReset, ExactTooLargeIsSizeError) {
  expect_error(ErrorKind::size, [] { exp_reset(5, 0, ExperimentMode::exact, 0); });
}

TEST(ExpReset, SampledIntervalContainsExact) {
  for (std::size_t k = 2; k <= 4; ++k) {
    const auto exact = exp_reset(k, 0, ExperimentMode::exact, 0, quick());
    const auto sampled = exp_reset(k, 5000, ExperimentMode::sampled, 1000 + k);
    EXPECT_TRUE(sampled.ci.contains(exact.exact->value())) << "k = " << k;
    EXPECT_TRUE(sampled.check("cert_reset_iff_pi_not_permutation")->pass);
    EXPECT_TRUE(sampled.check("certificate_soundness_sweep")->pass);
  }
}

TEST(ExpReset, BoundValues) {
  const auto r = exp_reset(8, 200, ExperimentMode::sampled, 3);
  ASSERT_TRUE(r.bound);
  EXPECT_NEAR(*r.bound, 1.0 - std::exp(1.0) * std::sqrt(8.0) * std::exp(-8.0), 1e-12);
  EXPECT_EQ(r.direction, BoundDirection::at_least);
  EXPECT_NEAR(1.0 - factorial_ratio(8), 0.99759674, 1e-8);
}

TEST(ExpBireversible, ExhaustiveTwoByTwo) {
  const auto r = exp_bireversible(2, 2, 0, ExperimentMode::exact, 0);
  EXPECT_EQ(r.trials, 16u);
  EXPECT_EQ(*r.exact, Rational(3, 4));
  EXPECT_DOUBLE_EQ(*r.bound, 1.0);
  EXPECT_TRUE(r.pass);
}

TEST(ExpBireversible, ExhaustiveThreeByThree) {
  const auto r = exp_bireversible(3, 3, 0, ExperimentMode::exact, 0, quick());
  EXPECT_EQ(r.trials, 46'656u);
  EXPECT_EQ(*r.exact, Rational(61, 324));
  EXPECT_LE(r.exact->value(), 1.0 / 9 + 1.0 / 3);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.all_checks_pass());
  EXPECT_NE(r.metric("strongly_connected"), nullptr);
}

TEST(ExpBireversible, SampledAgreesWithExhaustive) {
  const auto r = exp_bireversible(3, 3, 4000, ExperimentMode::sampled, 77);
  EXPECT_TRUE(r.ci.contains(61.0 / 324.0));
  EXPECT_TRUE(r.all_checks_pass());
}

TEST(ExpBireversible, TooFewTrials) {
  expect_error(ErrorKind::input_domain, [] { exp_bireversible(3, 3, 99, ExperimentMode::sampled, 1); });
}

TEST(ExpBounded, TwoLetters) {
  const auto r = exp_bounded(3, 2, 2000, 5);
  EXPECT_EQ(r.trials, 2000u);
  EXPECT_NEAR(*r.bound, 1.0 / 3.0, 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.all_checks_pass());
  const auto* m = r.metric("conditional_moved_cycle_letter");
  ASSERT_NE(m, nullptr);
  EXPECT_TRUE(m->ci.contains(0.5));
}

TEST(ExpBounded, ConditionalFourLetters) {
  const auto r = exp_bounded(3, 4, 2000, 6);
  const auto* m = r.metric("conditional_moved_cycle_letter");
  ASSERT_NE(m, nullptr);
  EXPECT_TRUE(m->ci.contains(0.75));
  EXPECT_TRUE(r.all_checks_pass());
}

TEST(ExpBounded, SingleLetterDegenerate) {
  const auto r = exp_bounded(3, 1, 200, 7);
  EXPECT_DOUBLE_EQ(*r.bound, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(FinitaryLift, RoundTrip) {
  // q0 -> q1, e; q1 -> e, e.
  const std::vector<State> targets{1, 2, 2, 2};
  std::set<std::vector<State>> images;
  for (Letter i = 0; i < 2; ++i) {
    auto lifted = finitary_lift(3, 2, targets, i);
    ASSERT_TRUE(lifted);
    const auto act = activity_class(pol_skeleton(3, 2, *lifted));
    EXPECT_EQ(act, (Activity{ActivityKind::polynomial, 0}));
    EXPECT_EQ(finitary_unlift(3, 2, *lifted), targets);
    images.insert(*lifted);
  }
  EXPECT_EQ(images.size(), 2u);
}

TEST(ExpFinitaryFraction, Ratios) {
  const auto r2 = exp_finitary_fraction(3, 2);
  EXPECT_EQ(*r2.exact, Rational(1, 5));
  EXPECT_TRUE(r2.pass);
  EXPECT_TRUE(r2.all_checks_pass());
  const auto r3 = exp_finitary_fraction(3, 3);
  EXPECT_EQ(*r3.exact, Rational(5, 33));
  EXPECT_LT(r3.exact->value(), r2.exact->value());
  EXPECT_TRUE(r3.all_checks_pass());
}

TEST(ExpFinitaryFraction, SingleStateDegenerate) {
  const auto r = exp_finitary_fraction(1, 2);
  EXPECT_FALSE(r.bound);
  EXPECT_FALSE(r.genericity_note.empty());
}

TEST(Experiments, RecordsReproducibleAcrossThreadCounts) {
  const auto a = exp_bounded(3, 2, 300, 11, serial(1));
  const auto b = exp_bounded(3, 2, 300, 11, serial(3));
  EXPECT_EQ(a.records, b.records);
  const auto c = exp_reset(5, 300, ExperimentMode::sampled, 12, serial(1));
  const auto d = exp_reset(5, 300, ExperimentMode::sampled, 12, serial(4));
  EXPECT_EQ(c.records, d.records);
  const auto e = exp_reset(5, 300, ExperimentMode::sampled, 13, serial(1));
  EXPECT_NE(c.records, e.records);
}

TEST(ExperimentConfig, JsonRoundTrip) {
  ExperimentConfig config{"bounded", ExperimentMode::sampled, 250, {SamplerClass::pol, 3, 2, 0, true, 9, 0}};
  EXPECT_EQ(experiment_config_from_json(experiment_config_to_json(config)), config);
  expect_error(ErrorKind::parse, [] { experiment_config_from_json(nlohmann::json::array()); });
}

TEST(ExperimentConfig, RunByName) {
  ExperimentConfig config{"reset", ExperimentMode::exact, 0, {SamplerClass::reset_unfolded, 2, 2, 0, false, 0, 0}};
  EXPECT_EQ(*run_experiment(config).exact, Rational(1, 2));
  config.experiment = "growth";
  expect_error(ErrorKind::parse, [&] { run_experiment(config); });
}

TEST(Report, CsvAndJson) {
  const auto r = exp_reset(2, 0, ExperimentMode::exact, 0);
  const auto csv = trial_table_csv(r);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "trial_index,pi_not_permutation,cert_reset_infinite");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 4u);

  const auto doc = report_to_json(r, true);
  EXPECT_EQ(doc.at("exact").at("fraction"), "1/2");
  EXPECT_EQ(doc.at("bound").at("direction"), ">=");
  EXPECT_EQ(doc.at("records").size(), 4u);
  EXPECT_TRUE(doc.contains("rng"));
  EXPECT_TRUE(doc.contains("wall_clock_seconds"));
  EXPECT_FALSE(report_to_json(r).contains("records"));
}
