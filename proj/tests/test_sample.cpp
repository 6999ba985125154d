#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "mealy/classify.hpp"
#include "mealy/errors.hpp"
#include "mealy/sample.hpp"
#include "mealy/stats.hpp"
#include "support/chi2.hpp"
#include "support/fixtures.hpp"

using namespace mealy;

namespace {

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "no error thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

std::vector<std::vector<std::uint32_t>> tables(const MealyAutomaton& a) {
  auto t = a.delta_table();
  for (auto& row : a.rho_table()) t.push_back(row);
  return t;
}

bool rows_distinct(const MealyAutomaton& a) {
  auto rows = a.rho_table();
  std::ranges::sort(rows);
  return std::ranges::adjacent_find(rows) == rows.end();
}

}  // namespace

TEST(Rng, StreamsDependOnTrialIndexOnly) {
  auto a = Rng::for_trial(7, 3), b = Rng::for_trial(7, 3), c = Rng::for_trial(7, 4);
  const auto x = a.engine()(), y = b.engine()(), z = c.engine()();
  EXPECT_EQ(x, y);
  EXPECT_NE(x, z);
  EXPECT_NE(splitmix64(0), splitmix64(1));
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.below(5), 5u);
}

TEST(Shuffle, FourElementPermutationsUniform) {
  Rng rng(2024);
  std::map<std::vector<std::uint32_t>, std::uint64_t> counts;
  for (int i = 0; i < 24'000; ++i) ++counts[random_permutation(4, rng)];
  EXPECT_EQ(counts.size(), 24u);
  EXPECT_LT(chi2::uniform_statistic(counts, 24), chi2::critical_001(23));
}

TEST(SampleInvertibleReversible, SingleStateSingleLetter) {
  Rng rng(5);
  const auto a = sample_invertible_reversible(1, 1, rng);
  EXPECT_EQ(a.num_states(), 1u);
  EXPECT_EQ(a.num_letters(), 1u);
  EXPECT_EQ(a.delta(0, 0), 0u);
  EXPECT_EQ(a.rho(0, 0), 0u);
}

TEST(SampleInvertibleReversible, Reproducible) {
  const SamplerSpec spec{SamplerClass::invertible_reversible, 3, 3, 0, false, 0xC0FFEE, 11};
  EXPECT_EQ(tables(sample(spec)), tables(sample(spec)));
  auto other = spec;
  other.trial_index = 12;
  EXPECT_NE(tables(sample(spec)), tables(sample(other)));
}

TEST(SampleInvertibleReversible, DeltaZeroUniformAt3x2) {
  std::map<std::vector<State>, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < 6000; ++i) {
    auto rng = Rng::for_trial(99, i);
    const auto a = sample_invertible_reversible(3, 2, rng);
    ++counts[std::vector<State>(a.delta_column(0).begin(), a.delta_column(0).end())];
  }
  EXPECT_EQ(counts.size(), 6u);
  EXPECT_LT(chi2::uniform_statistic(counts, 6), chi2::critical_001(5));
}

TEST(SampleInvertibleReversible, ClassMembership) {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t k = 1; k <= 5; ++k) {
      auto rng = Rng::for_trial(n, k);
      const auto a = sample_invertible_reversible(n, k, rng);
      EXPECT_TRUE(is_invertible(a));
      EXPECT_TRUE(is_reversible(a));
    }
  }
}

TEST(SampleReset, SingleLetter) {
  Rng rng(3);
  const auto a = sample_reset(1, rng);
  EXPECT_EQ(a.num_states(), 1u);
  EXPECT_TRUE(is_unfolded_reset(a));
}

TEST(SampleReset, FourMachinesEquallyLikelyAtK2) {
  std::map<std::vector<std::vector<Letter>>, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < 4000; ++i) {
    auto rng = Rng::for_trial(5, i);
    const auto a = sample_reset(2, rng);
    ASSERT_TRUE(is_reset(a));
    ASSERT_TRUE(is_unfolded_reset(a));
    ++counts[a.rho_table()];
  }
  EXPECT_EQ(counts.size(), 4u);
  EXPECT_LT(chi2::uniform_statistic(counts, 4), chi2::critical_001(3));
  for (const auto& [_, c] : counts) EXPECT_TRUE(wilson_interval(c, 4000).contains(0.25));
}

TEST(SampleResetMinimal, AcceptanceRates) {
  auto acceptance = [](std::size_t k, std::uint64_t draws) {
    std::uint64_t accepted = 0;
    for (std::uint64_t i = 0; i < draws; ++i) {
      auto rng = Rng::for_trial(17, i);
      try {
        EXPECT_TRUE(rows_distinct(sample_reset_minimal(k, rng, 0)));
        ++accepted;
      } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::sampling_exhausted);
      }
    }
    return wilson_interval(accepted, draws);
  };
  EXPECT_TRUE(acceptance(2, 4000).contains(0.5));
  EXPECT_TRUE(acceptance(3, 4000).contains(120.0 / 216.0));
}

TEST(SampleResetMinimal, RowsPairwiseDistinct) {
  for (std::size_t k = 2; k <= 6; ++k) {
    for (std::uint64_t i = 0; i < 50; ++i) {
      auto rng = Rng::for_trial(k, i);
      const auto a = sample_reset_minimal(k, rng);
      EXPECT_TRUE(rows_distinct(a));
      EXPECT_TRUE(is_unfolded_reset(a));
    }
  }
}

TEST(SampleResetMinimal, SingleLetterIsCapability) {
  Rng rng(0);
  expect_error(ErrorKind::capability, [&] { sample_reset_minimal(1, rng); });
}

TEST(SamplePolConditional, AddingMachineSkeleton) {
  const auto skeleton = fixture("adding_machine");
  const State p = *skeleton.find_state("p");
  const Letter one = *skeleton.find_letter("1");
  const State e = *skeleton.id_state();
  std::uint64_t moved = 0;
  const std::uint64_t draws = 4000;
  for (std::uint64_t i = 0; i < draws; ++i) {
    auto rng = Rng::for_trial(8, i);
    const auto a = sample_pol_conditional(skeleton, rng);
    ASSERT_EQ(a.delta_table(), skeleton.delta_table());
    ASSERT_EQ(a.rho_table()[e], skeleton.rho_table()[e]);
    ASSERT_EQ(activity_class(a), activity_class(skeleton));
    moved += a.rho(p, one) != one;
  }
  EXPECT_TRUE(wilson_interval(moved, draws).contains(0.5));
}

TEST(SamplePolConditional, RejectsFinitaryAndNonPolynomial) {
  Rng rng(1);
  const auto finitary = pol_skeleton(3, 2, {1, 2, 2, 2});
  ASSERT_EQ(activity_class(finitary).kind, ActivityKind::finitary);
  expect_error(ErrorKind::capability, [&] { sample_pol_conditional(finitary, rng); });
  const auto wild = pol_skeleton(2, 2, {0, 0});
  ASSERT_FALSE(activity_class(wild).is_polynomial());
  expect_error(ErrorKind::capability, [&] { sample_pol_conditional(wild, rng); });
}

TEST(SamplePol, DegreeZeroAlwaysBounded) {
  for (std::uint64_t i = 0; i < 500; ++i) {
    auto rng = Rng::for_trial(4, i);
    const auto a = sample_pol(0, 3, 2, rng);
    EXPECT_EQ(activity_class(a), (Activity{ActivityKind::polynomial, 0}));
    EXPECT_TRUE(is_invertible(a));
  }
}

TEST(SamplePol, FinitaryRequest) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = Rng::for_trial(6, i);
    EXPECT_EQ(activity_class(sample_pol(-1, 4, 2, rng)).kind, ActivityKind::finitary);
  }
}

TEST(SamplePol, AcceptanceMatchesExhaustiveCount) {
  // Non-identity states q0, q1 with two targets each among {q0, q1, e}.
  std::uint64_t qualifying = 0, total = 0;
  std::vector<State> t(4);
  for (std::uint32_t code = 0; code < 81; ++code) {
    for (std::uint32_t j = 0, c = code; j < 4; ++j, c /= 3) t[j] = c % 3;
    ++total;
    qualifying += activity_class(pol_skeleton(3, 2, t)) == Activity{ActivityKind::polynomial, 0};
  }
  ASSERT_EQ(total, 81u);

  std::uint64_t accepted = 0;
  const std::uint64_t draws = 20'000;
  for (std::uint64_t i = 0; i < draws; ++i) {
    auto rng = Rng::for_trial(12, i);
    try {
      sample_pol(0, 3, 2, rng, 0);
      ++accepted;
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::sampling_exhausted);
    }
  }
  const double exact = static_cast<double>(qualifying) / 81.0;
  EXPECT_TRUE(wilson_interval(accepted, draws).contains(exact)) << accepted << " vs " << exact;
}

TEST(SamplePol, AcceptedSkeletonsUniform) {
  std::map<std::vector<std::vector<State>>, std::uint64_t> counts;
  std::size_t cells = 0;
  std::vector<State> t(4);
  for (std::uint32_t code = 0; code < 81; ++code) {
    for (std::uint32_t j = 0, c = code; j < 4; ++j, c /= 3) t[j] = c % 3;
    cells += activity_class(pol_skeleton(3, 2, t)) == Activity{ActivityKind::polynomial, 0};
  }
  for (std::uint64_t i = 0; i < 12'000; ++i) {
    auto rng = Rng::for_trial(13, i);
    ++counts[sample_pol(0, 3, 2, rng).delta_table()];
  }
  EXPECT_EQ(counts.size(), cells);
  EXPECT_LT(chi2::uniform_statistic(counts, cells), chi2::critical_001(cells - 1));
}

TEST(SamplePol, Errors) {
  Rng rng(0);
  expect_error(ErrorKind::input_domain, [&] { sample_pol(-2, 3, 2, rng); });
  // Two states leave a single non-identity state: degree 3 is unreachable.
  expect_error(ErrorKind::sampling_exhausted, [&] { sample_pol(3, 2, 2, rng, 10); });
}

TEST(SamplerSpec, JsonRoundTrip) {
  SamplerSpec spec{SamplerClass::pol, 4, 3, 1, true, 42, 9, 500};
  EXPECT_EQ(sampler_spec_from_json(sampler_spec_to_json(spec)), spec);
  for (auto c : {SamplerClass::invertible_reversible, SamplerClass::reset_unfolded, SamplerClass::reset_minimal,
                 SamplerClass::pol, SamplerClass::pol0_conditional}) {
    EXPECT_EQ(sampler_class_from_string(to_string(c)), c);
  }
  expect_error(ErrorKind::parse, [] { sampler_class_from_string("uniform"); });
}

TEST(Sample, ConditionalNeedsSkeleton) {
  SamplerSpec spec;
  spec.sampler = SamplerClass::pol0_conditional;
  expect_error(ErrorKind::precondition, [&] { sample(spec); });
  const auto skeleton = fixture("adding_machine");
  EXPECT_EQ(tables(sample(spec, &skeleton)), tables(sample(spec, &skeleton)));
}
