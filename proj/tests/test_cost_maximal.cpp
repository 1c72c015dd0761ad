#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "pcause/cost_maximal.hpp"
#include "pcause/errors.hpp"
#include "support/random_models.hpp"

using namespace pcause;
using fixtures::ids;
using fixtures::prepare;

namespace {

// fig1 with weights s=1, t=2, u=5.
PreparedModel fig1_weighted() {
  auto pm = prepare("fig1.dtmc", "3/4");
  std::vector<Rat> w(pm.size(), Rat(0));
  w[ids(pm, "s")[0]] = 1;
  w[ids(pm, "t")[0]] = 2;
  w[ids(pm, "u")[0]] = 5;
  return pm.with_weights(w);
}

const char* kMixedSigns = R"(dtmc
state s0 weight=3
state t weight=-4
state u weight=-1
state error target
init s0
trans s0 t 1/2
trans s0 u 1/2
trans t error 1
trans u error 1
trans error error 1
)";

bool ambiguous(const PreparedModel& pm) { return pm.error_weight_ambiguous() || pm.safe_weight_ambiguous(); }

ExtRat brute_force_min(const PreparedModel& pm) {
  std::vector<StateId> pool;
  for (auto s : pm.sp()) {
    if (s != pm.error()) pool.push_back(s);
  }
  ExtRat best = ExtRat::pos_inf();
  for (auto q : fixtures::subsets(pool)) {
    q.push_back(pm.error());
    std::sort(q.begin(), q.end());
    best = std::min(best, maxcost_of(pm, StateBasedCause{q}));
  }
  return best;
}

}  // namespace

TEST(PositiveCycle, Examples) {
  auto fig2 = prepare("fig2.dtmc", "1/2");
  EXPECT_FALSE(fig2.in_sp(ids(fig2, "s")[0]));
  EXPECT_TRUE(has_positive_cycle_outside_sp(fig2));
  EXPECT_TRUE(maxcost_minimal(fig2).value.is_pos_inf());
  auto zero = fig2.with_weights(std::vector<Rat>(fig2.size(), Rat(0)));
  EXPECT_FALSE(has_positive_cycle_outside_sp(zero));
  EXPECT_FALSE(has_positive_cycle_outside_sp(fig1_weighted()));
}

TEST(PositiveCycle, SafeLoopDoesNotCount) {
  auto pm = prepare("fig1.dtmc", "3/4");
  std::vector<Rat> w(pm.size(), Rat(1));
  auto heavy = pm.with_weights(w);
  EXPECT_FALSE(has_positive_cycle_outside_sp(heavy));
}

TEST(MaxcostOf, Fig1) {
  auto pm = fig1_weighted();
  EXPECT_EQ(maxcost_of(pm, StateBasedCause{ids(pm, "t u error")}), ExtRat(Rat(6)));
  EXPECT_EQ(maxcost_of(pm, StateBasedCause{ids(pm, "u error")}), ExtRat(Rat(8)));
  EXPECT_EQ(maxcost_of(pm, canonical_cause(pm)), ExtRat(Rat(1)));
  ExplicitCause c;
  for (const char* path : {"s t error", "s u", "s t u"}) c.paths.push_back(ids(pm, path));
  EXPECT_EQ(maxcost_of(pm, c), ExtRat(Rat(8)));
  auto zero = pm.with_weights(std::vector<Rat>(pm.size(), Rat(0)));
  EXPECT_EQ(maxcost_of(zero, StateBasedCause{ids(zero, "u error")}), ExtRat(Rat(0)));
  EXPECT_THROW(maxcost_of(pm, StateBasedCause{ids(pm, "u")}), CauseError);
}

TEST(MaxcostOf, PumpingCycleIsInfinite) {
  auto pm = prepare("fig2.dtmc", "1/2");
  EXPECT_TRUE(maxcost_of(pm, canonical_cause(pm)).is_pos_inf());
}

TEST(MaxcostMinimal, NonNegativeTakesCanonical) {
  auto pm = fig1_weighted();
  auto res = maxcost_minimal(pm);
  EXPECT_EQ(res.value, maxcost_of(pm, canonical_cause(pm)));
  auto zero = pm.with_weights(std::vector<Rat>(pm.size(), Rat(0)));
  auto z = maxcost_minimal(zero);
  EXPECT_EQ(z.value, ExtRat(Rat(0)));
  EXPECT_EQ(z.cause, canonical_cause(zero));
}

TEST(MaxcostMinimal, MixedSignsPickLater) {
  auto pm = preprocess(parse_dtmc(kMixedSigns), parse_rat("1/2"));
  EXPECT_EQ(pm.sp().size(), pm.size() - 1);
  auto res = maxcost_minimal(pm);
  EXPECT_EQ(res.value, ExtRat(Rat(2)));
  EXPECT_EQ(std::get<StateBasedCause>(res.cause).q, ids(pm, "t u error"));
  EXPECT_EQ(maxcost_of(pm, canonical_cause(pm)), ExtRat(Rat(3)));
  EXPECT_EQ(maxcost_of(pm, res.cause), res.value);
}

TEST(GameArena, Shape) {
  auto pm = preprocess(parse_dtmc(kMixedSigns), parse_rat("1/2"));
  auto a = build_arena(pm);
  for (std::size_t v = 0; v < a.size(); ++v) {
    if (!a.min_vertex[v]) continue;
    ASSERT_EQ(a.succ[v].size(), a.state[v] == pm.error() ? 1u : 2u);
    EXPECT_TRUE(std::find(a.succ[v].begin(), a.succ[v].end(), a.target) != a.succ[v].end());
    EXPECT_EQ(a.weight[v], pm.weight(a.state[v]));
  }
  EXPECT_TRUE(a.min_vertex[a.start]);
  auto vals = solve_game(pm, a);
  EXPECT_FALSE(vals.value[a.start].is_neg_inf());
}

TEST(MaxcostMinimal, MatchesBruteForceOnRandomModels) {
  std::mt19937_64 rng(31);
  int checked = 0;
  int infinite = 0;
  for (int round = 0; round < 160; ++round) {
    fixtures::RandomModelOptions opts;
    opts.inner_states = 3 + round % 4;
    opts.acyclic = round % 4 == 0;
    opts.weight_min = round % 2 == 0 ? -4 : 0;
    auto m = fixtures::random_dtmc(rng, opts);
    for (const char* p : {"1/3", "3/5"}) {
      auto pm = preprocess(m, parse_rat(p));
      if (pm.trivial() || ambiguous(pm) || pm.sp().size() > 9) continue;
      auto res = maxcost_minimal(pm);
      ASSERT_EQ(res.value, brute_force_min(pm)) << pm.chain().to_text() << "p " << p;
      ASSERT_EQ(maxcost_of(pm, res.cause), res.value) << pm.chain().to_text();
      infinite += res.value.is_pos_inf();
      ++checked;
    }
  }
  EXPECT_GT(checked, 150);
  EXPECT_GT(infinite, 0);
}

TEST(MaxcostMinimal, GameAgreesWithLongestPath) {
  std::mt19937_64 rng(37);
  for (int round = 0; round < 120; ++round) {
    fixtures::RandomModelOptions opts;
    opts.inner_states = 3 + round % 5;
    opts.weight_max = round % 3 == 0 ? 1 : 4;
    auto pm = preprocess(fixtures::random_dtmc(rng, opts), parse_rat("1/2"));
    if (pm.trivial() || ambiguous(pm)) continue;
    auto arena = build_arena(pm);
    auto game = solve_game(pm, arena);
    ASSERT_EQ(game.value[arena.start], maxcost_nonnegative(pm)) << pm.chain().to_text();
    ASSERT_EQ(maxcost_nonnegative(pm), maxcost_of(pm, canonical_cause(pm)));
  }
}

TEST(MaxcostOf, CanonicalIsBelowEveryStateBasedCause) {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 100; ++round) {
    fixtures::RandomModelOptions opts;
    opts.inner_states = 3 + round % 4;
    auto pm = preprocess(fixtures::random_dtmc(rng, opts), parse_rat("1/2"));
    if (pm.trivial() || ambiguous(pm)) continue;
    auto theta = maxcost_of(pm, canonical_cause(pm));
    std::vector<StateId> pool;
    for (auto s : pm.sp()) {
      if (s != pm.error()) pool.push_back(s);
    }
    for (auto q : fixtures::subsets(pool)) {
      q.push_back(pm.error());
      std::sort(q.begin(), q.end());
      ASSERT_LE(theta, maxcost_of(pm, StateBasedCause{q}));
    }
  }
}
