#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "pcause/cost_expected.hpp"
#include "pcause/errors.hpp"
#include "support/random_models.hpp"

using namespace pcause;
using fixtures::ids;
using fixtures::prepare;

namespace {

const char* kNegativeDetour = R"(dtmc
state a weight=0
state b weight=1
state c weight=-5
state error target
state safe
init a
trans a b 1/2
trans a safe 1/2
trans b c 1
trans c error 9/10
trans c safe 1/10
trans error error 1
trans safe safe 1
)";

PreparedModel zero_weights(const PreparedModel& pm) { return pm.with_weights(std::vector<Rat>(pm.size(), Rat(0))); }

bool ambiguous(const PreparedModel& pm) { return pm.error_weight_ambiguous() || pm.safe_weight_ambiguous(); }

// Minimum of expcost_of over every Q with error in Q and Q \ {error} a subset of S_p.
Rat brute_force_min(const PreparedModel& pm) {
  std::vector<StateId> pool;
  for (auto s : pm.sp()) {
    if (s != pm.error()) pool.push_back(s);
  }
  std::optional<Rat> best;
  for (auto q : fixtures::subsets(pool)) {
    q.push_back(pm.error());
    std::sort(q.begin(), q.end());
    Rat v = expcost_of(pm, StateBasedCause{q});
    if (!best || v < *best) best = v;
  }
  return *best;
}

}  // namespace

TEST(ExpcostOf, TriggerSetOnFig1) {
  auto pm = prepare("fig1.dtmc", "3/4");
  EXPECT_EQ(expcost_of(pm, StateBasedCause{ids(pm, "t u error")}), Rat(2));
  EXPECT_EQ(expcost_of(pm, canonical_cause(pm)), Rat(1));
}

TEST(ExpcostOf, ExplicitCauseMatchesHandSum) {
  auto pm = prepare("fig1.dtmc", "3/4");
  ExplicitCause c;
  for (const char* path : {"s t error", "s u", "s t u"}) c.paths.push_back(ids(pm, path));
  EXPECT_EQ(expcost_of(pm, c), Rat(39, 16));
}

TEST(ExpcostOf, ZeroWeightsGiveZero) {
  auto pm = zero_weights(prepare("fig1.dtmc", "3/4"));
  EXPECT_EQ(expcost_of(pm, canonical_cause(pm)), Rat(0));
  EXPECT_EQ(expcost_of(pm, StateBasedCause{ids(pm, "u error")}), Rat(0));
}

TEST(ExpcostOf, RejectsNonCovering) {
  auto pm = prepare("fig1.dtmc", "3/4");
  EXPECT_THROW(expcost_of(pm, StateBasedCause{ids(pm, "u")}), CauseError);
  ExplicitCause c;
  c.paths.push_back(ids(pm, "s u"));
  EXPECT_THROW(expcost_of(pm, c), CauseError);
}

TEST(ExpcostOf, ThresholdIsUnsupported) {
  auto pm = prepare("fig4.dtmc", "1/2");
  ThresholdCause c;
  c.t[pm.error()] = ExtRat::pos_inf();
  EXPECT_THROW(expcost_of(pm, c), UnsupportedError);
}

TEST(ExpcostMinimal, NonNegativeWeightsGiveCanonical) {
  auto pm = prepare("fig1.dtmc", "3/4");
  auto res = expcost_minimal(pm);
  EXPECT_EQ(res.value, ExtRat(Rat(1)));
  EXPECT_EQ(res.value, ExtRat(expcost_of(pm, canonical_cause(pm))));
  EXPECT_TRUE(verify_cause(pm, res.cause, 30).ok());
  EXPECT_EQ(expcost_minimal(zero_weights(pm)).value, ExtRat(Rat(0)));
}

TEST(ExpcostMinimal, NegativeWeightDelaysPick) {
  auto pm = preprocess(parse_dtmc(kNegativeDetour), parse_rat("1/2"));
  auto res = expcost_minimal(pm);
  EXPECT_EQ(res.value, ExtRat(Rat(-2)));
  EXPECT_LT(Rat(-2), expcost_of(pm, canonical_cause(pm)));
  EXPECT_EQ(std::get<StateBasedCause>(res.cause).q, ids(pm, "c error"));
  EXPECT_EQ(res.value, ExtRat(brute_force_min(pm)));
}

TEST(ExpcostMinimal, MatchesBruteForceOnRandomModels) {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int round = 0; round < 150; ++round) {
    fixtures::RandomModelOptions opts;
    opts.inner_states = 3 + round % 5;
    opts.acyclic = round % 3 == 0;
    opts.weight_min = round % 2 == 0 ? -4 : 0;
    auto m = fixtures::random_dtmc(rng, opts);
    for (const char* p : {"1/3", "1/2", "4/5"}) {
      auto pm = preprocess(m, parse_rat(p));
      if (pm.trivial() || pm.sp().size() > 9 || ambiguous(pm)) continue;
      auto res = expcost_minimal(pm);
      ASSERT_EQ(res.value, ExtRat(brute_force_min(pm))) << "round " << round << " p " << p;
      ASSERT_EQ(res.value, ExtRat(expcost_of(pm, res.cause)));
      ASSERT_TRUE(verify_cause(pm, res.cause, 30).ok());
      ++checked;
    }
  }
  EXPECT_GT(checked, 200);
}

TEST(ExpcostMinimal, CanonicalIsBelowEveryStateBasedCause) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 100; ++round) {
    fixtures::RandomModelOptions opts;
    opts.inner_states = 3 + round % 4;
    auto pm = preprocess(fixtures::random_dtmc(rng, opts), parse_rat("1/2"));
    if (pm.trivial() || ambiguous(pm)) continue;
    Rat theta = expcost_of(pm, canonical_cause(pm));
    std::vector<StateId> pool;
    for (auto s : pm.sp()) {
      if (s != pm.error()) pool.push_back(s);
    }
    for (auto q : fixtures::subsets(pool)) {
      q.push_back(pm.error());
      std::sort(q.begin(), q.end());
      ASSERT_LE(theta, expcost_of(pm, StateBasedCause{q})) << "round " << round;
    }
  }
}

TEST(ExpcostMinimal, PolicyIterationNeverIncreases) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 100; ++round) {
    fixtures::RandomModelOptions opts;
    opts.inner_states = 4 + round % 5;
    opts.weight_min = -5;
    auto pm = preprocess(fixtures::random_dtmc(rng, opts), parse_rat("1/3"));
    auto ssp = expcost_ssp(pm);
    if (ssp.state_of.empty()) continue;
    auto sol = solve_ssp(ssp.problem);
    ASSERT_FALSE(sol.history.empty());
    for (std::size_t k = 1; k < sol.history.size(); ++k) {
      for (std::size_t i = 0; i < sol.value.size(); ++i) ASSERT_LE(sol.history[k][i], sol.history[k - 1][i]);
    }
    EXPECT_EQ(sol.history.back(), sol.value);
  }
}
