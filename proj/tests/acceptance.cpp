// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "mealy/classify.hpp"
#include "mealy/errors.hpp"
#include "mealy/experiments.hpp"
#include "mealy/order.hpp"
#include "support/fixtures.hpp"
#include "support/iso.hpp"
#include "support/oracle.hpp"

using namespace mealy;

namespace {

// Pinned tolerances: wall-clock limits per criterion (seconds), seeds, sizes.
constexpr double kLimit1 = 1, kLimit2 = 1, kLimit3 = 10, kLimit4 = 5, kLimit5 = 60, kLimit6 = 120, kLimit7 = 120,
                 kLimit8 = 30, kLimit9 = 120;
constexpr std::uint64_t kSeed = 1;
constexpr std::size_t kOracleLength = 10;
constexpr std::uint64_t kSpotPowers = 32;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int number, double limit, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds >= limit) {
    o.pass = false;
    o.detail << " [over time limit " << limit << " s]";
  }
  if (!o.pass) ++failures;
  std::cout << "criterion " << number << ": " << (o.pass ? "PASS" : "FAIL") << " (" << std::fixed
            << std::setprecision(2) << seconds << " s)" << o.detail.str() << std::endl;
}

State st(const MealyAutomaton& a, const char* name) { return *a.find_state(name); }

}  // namespace

int main() {
  criterion(1, kLimit1, [](Outcome& o) {
    const auto g = classify(fixture("grigorchuk"));
    o.require(g.invertible && !g.reversible && g.activity == Activity{ActivityKind::polynomial, 0}, "grigorchuk");
    const auto m = classify(fixture("adding_machine"));
    o.require(m.invertible && m.activity == Activity{ActivityKind::polynomial, 0}, "adding_machine");
    const auto fig2 = fixture("fig2");
    const auto f = classify(fig2);
    o.require(f.invertible && f.reversible && !f.bireversible, "fig2 classes");
    const auto ob = output_sets(fig2).letters(st(fig2, "b"));
    std::vector<std::string> names;
    for (Letter y : ob) names.push_back(fig2.letter_name(y));
    o.require(names == std::vector<std::string>{"1", "3"}, "O_b = {1,3}");
    o.detail << " grigorchuk " << to_string(*g.activity) << ", adding_machine " << to_string(*m.activity)
             << ", fig2 bireversible=" << f.bireversible << ", |O_b|=" << names.size();
  });

  criterion(2, kLimit2, [](Outcome& o) {
    const auto nf = normal_form(fixture("grigorchuk"));
    o.require(nf.grouping() == 3, "l*d = 3");
    o.require(isomorphic_up_to_state_names(nf.automaton, fixture("grigorchuk_nf3")), "isomorphic to fixture");
    o.detail << " l=" << nf.cycle_lcm << " d=" << nf.depth;
  });

  criterion(3, kLimit3, [](Outcome& o) {
    const auto m = fixture("adding_machine");
    const auto cb = cert_bounded(m);
    const auto pm = analyze(m)[st(m, "p")];
    o.require(cb.is_infinite() && pm.is_infinite() && pm.rule == CertificateRule::bounded_selfloop,
              "adding machine p infinite via cert_bounded");

    const auto g = fixture("grigorchuk");
    const auto gg = AutomatonGroup::create(g);
    for (const char* name : {"a", "b", "c", "d"}) {
      const auto t = Element::generator(gg, st(g, name));
      const auto c = order_of(t);
      const bool rule_ok = c.rule == CertificateRule::orbit_signalizer || c.rule == CertificateRule::brute_force;
      o.require(c.is_finite() && c.order == 2 && rule_ok, std::string(name) + " finite(2)");
      o.require(is_identity(t.pow(2)).is_true(), std::string(name) + "^2 = id");
      const SignedWord u{{st(g, name), +1}};
      o.require(oracle::fixes_all_words(g, oracle::power(u, 2), kOracleLength) &&
                    !oracle::fixes_all_words(g, u, kOracleLength),
                std::string(name) + " oracle");
    }

    const auto f = fixture("fig2");
    const auto fg = AutomatonGroup::create(f);
    const auto certs = analyze(f);
    std::size_t spot = 0;
    for (State q = 0; q < f.num_states(); ++q) {
      o.require(certs[q].is_infinite() && certs[q].rule == CertificateRule::reversible_nonbireversible,
                "fig2 " + f.state_name(q) + " via cert_reversible");
      const auto t = Element::generator(fg, q);
      for (std::uint64_t p = 1; p <= kSpotPowers; ++p) {
        const auto r = is_identity_power(t, p);
        const bool ok = r.is_false() && t.pow(p).act(r.witness) != r.witness;
        o.require(ok, "fig2 " + f.state_name(q) + "^" + std::to_string(p) + " != id");
        spot += ok;
      }
    }
    o.detail << " p " << to_string(pm.verdict) << " (" << to_string(pm.rule) << "); grigorchuk a-d finite(2); fig2 "
             << spot << "/" << f.num_states() * kSpotPowers << " powers definitely nontrivial";
  });

  criterion(4, kLimit4, [](Outcome& o) {
    const auto r2 = exp_reset(2, 0, ExperimentMode::exact, kSeed);
    const auto r3 = exp_reset(3, 0, ExperimentMode::exact, kSeed);
    o.require(r2.exact && *r2.exact == Rational(1, 2), "k=2 exactly 1/2");
    o.require(r3.exact && *r3.exact == Rational(7, 9), "k=3 exactly 7/9");
    o.detail << " k=2 " << r2.exact->to_string() << ", k=3 " << r3.exact->to_string();
  });

  criterion(5, kLimit5, [](Outcome& o) {
    const auto r = exp_reset(8, 50'000, ExperimentMode::sampled, kSeed);
    double kfact_over = 1.0;
    for (int i = 1; i <= 8; ++i) kfact_over *= i / 8.0;
    const double exact = 1.0 - kfact_over;
    const double weak = 1.0 - std::exp(1.0) * std::sqrt(8.0) * std::exp(-8.0);
    o.require(r.ci.contains(exact), "CI contains 1 - 8!/8^8");
    o.require(r.ci.lower > weak, "CI lower edge exceeds 1 - e sqrt(8) e^-8");
    o.detail << std::setprecision(6) << " freq " << r.frequency << ", 99% CI [" << r.ci.lower << ", " << r.ci.upper
             << "], 1-8!/8^8 = " << exact << ", weak bound " << weak;
  });

  criterion(6, kLimit6, [](Outcome& o) {
    const auto ex = exp_bireversible(3, 3, 0, ExperimentMode::exact, kSeed);
    o.require(ex.exact && ex.exact->value() <= 1.0 / 9.0 + 1.0 / 3.0, "(3,3) exact <= 1/9 + 1/3");
    const auto s = exp_bireversible(5, 8, 10'000, ExperimentMode::sampled, kSeed);
    const double bound = 1.0 / std::pow(5.0, 7) + 1.0 / 8.0;
    o.require(s.pass && s.ci.lower <= bound, "(5,8) CI consistent with <= 1/5^7 + 1/8");
    o.detail << std::setprecision(6) << " (3,3) exact " << ex.exact->to_string() << " = " << ex.exact->value()
             << "; (5,8) freq " << s.frequency << ", CI [" << s.ci.lower << ", " << s.ci.upper << "], bound " << bound;
  });

  criterion(7, kLimit7, [](Outcome& o) {
    const auto r = exp_bounded(3, 2, 5'000, kSeed);
    o.require(r.pass && r.ci.upper >= 1.0 / 3.0, "frequency + CI >= 1/3");
    o.require(r.check("certificate_soundness_sweep")->pass, "soundness sweep");
    o.detail << std::setprecision(6) << " freq " << r.frequency << ", CI [" << r.ci.lower << ", " << r.ci.upper
             << "], bound 1/3";
  });

  criterion(8, kLimit8, [](Outcome& o) {
    const auto r = exp_finitary_fraction(3, 2);
    const auto* lifts = r.check("lifts_are_bounded_nonfinitary_and_reconstructible");
    const auto* injective = r.check("lift_map_injective");
    o.require(lifts && lifts->pass, "lifts reconstructible");
    o.require(injective && injective->pass, "lift map injective");
    o.detail << " " << r.exact->to_string() << " finitary among Pol(0); " << injective->detail;
  });

  criterion(9, kLimit9, [](Outcome& o) {
    const int status = std::system(MEALY_PROPERTY_SUITE " --gtest_brief=1 > /dev/null 2>&1");
    o.require(status == 0, "property suite exit status " + std::to_string(status));
    o.detail << " " << MEALY_PROPERTY_SUITE;
  });

  return failures == 0 ? 0 : 1;
}
