#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "pcause/cost_instantaneous.hpp"
#include "pcause/errors.hpp"
#include "support/random_models.hpp"

using namespace pcause;

namespace {

// fig1 shape with instantaneous weights t=2, u=5, error=10, safe=0 and the given weight of s.
InstModel fig1_inst(const char* s_weight, const char* safe_weight = "0") {
  auto m = fixtures::load_model("fig1.dtmc");
  std::vector<Rat> w(m.size(), Rat(0));
  w[m.at("s")] = parse_rat(s_weight);
  w[m.at("t")] = 2;
  w[m.at("u")] = 5;
  w[m.at("error")] = 10;
  w[m.at("safe")] = parse_rat(safe_weight);
  return make_inst_model(m.with_weights(w), parse_rat("3/4"));
}

std::vector<StateId> names(const Dtmc& m, std::initializer_list<const char*> list) {
  std::vector<StateId> out;
  for (const char* n : list) out.push_back(m.at(n));
  std::sort(out.begin(), out.end());
  return out;
}

// Same chain with states declared in the order given by `perm`.
Dtmc permuted(const Dtmc& m, const std::vector<StateId>& perm) {
  DtmcBuilder b;
  std::vector<StateId> id(m.size());
  for (auto s : perm) id[s] = b.add_state(m.name(s), m.weight(s), m.is_target(s), m.state(s).safe_terminal);
  b.set_init(id[m.init()]);
  for (StateId s = 0; s < m.size(); ++s) {
    for (const auto& tr : m.row(s)) b.add_transition(id[s], id[tr.to], tr.prob);
  }
  return b.build();
}

bool error_reachable_avoiding(const InstModel& im, const std::vector<StateId>& removed) {
  std::vector<bool> blocked(im.chain.size(), false);
  for (auto s : removed) blocked[s] = true;
  std::vector<bool> seen(im.chain.size(), false);
  std::vector<StateId> stack;
  if (!blocked[im.chain.init()]) stack.push_back(im.chain.init());
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    if (seen[s]) continue;
    seen[s] = true;
    if (im.error_set[s]) return true;
    if (im.safe_set[s]) continue;
    for (const auto& tr : im.chain.row(s)) {
      if (!blocked[tr.to]) stack.push_back(tr.to);
    }
  }
  return false;
}

std::vector<std::vector<StateId>> candidate_causes(const InstModel& im) {
  std::vector<StateId> pool;
  for (auto s : im.sp()) {
    if (!im.error_set[s]) pool.push_back(s);
  }
  auto out = fixtures::subsets(pool);
  for (auto& q : out) {
    for (StateId s = 0; s < im.chain.size(); ++s) {
      if (im.error_set[s]) q.push_back(s);
    }
    std::sort(q.begin(), q.end());
  }
  return out;
}

}  // namespace

TEST(InstModel, Sets) {
  auto im = fig1_inst("1");
  EXPECT_TRUE(im.error_set[im.chain.at("error")]);
  EXPECT_TRUE(im.safe_set[im.chain.at("safe")]);
  EXPECT_EQ(im.sp(), names(im.chain, {"s", "t", "u", "error"}));
  EXPECT_THROW(make_inst_model(im.chain, Rat(0)), ModelError);
}

TEST(ExpcostInst, Fig1) {
  auto im = fig1_inst("6");
  auto res = expcost_inst_minimal(im);
  EXPECT_EQ(res.value, ExtRat(Rat(7, 2)));
  EXPECT_EQ(std::get<StateBasedCause>(res.cause).q, names(im.chain, {"t", "u", "error"}));
  EXPECT_EQ(expcost_inst_of(im, names(im.chain, {"t", "u", "error"})), Rat(7, 2));
  auto cheap = expcost_inst_minimal(fig1_inst("1"));
  EXPECT_EQ(cheap.value, ExtRat(Rat(1)));
}

TEST(ExpcostInst, ZeroWeightsAndFreeErrors) {
  auto im = fig1_inst("6");
  auto zero = make_inst_model(im.chain.with_weights(std::vector<Rat>(im.chain.size(), Rat(0))), im.p);
  EXPECT_EQ(expcost_inst_minimal(zero).value, ExtRat(Rat(0)));
  EXPECT_EQ(pexpcost_inst_minimal(zero).value, ExtRat(Rat(0)));
  EXPECT_EQ(maxcost_inst_minimal(zero).value, ExtRat(Rat(0)));

  auto w = im.chain.weights();
  w[im.chain.at("error")] = 0;
  w[im.chain.at("safe")] = 1;
  auto free = make_inst_model(im.chain.with_weights(w), im.p);
  auto res = expcost_inst_minimal(free);
  Rat best = expcost_inst_of(free, {free.chain.at("error")});
  for (const auto& q : candidate_causes(free)) best = std::min(best, expcost_inst_of(free, q));
  EXPECT_EQ(res.value, ExtRat(best));
  auto mx = maxcost_inst_minimal(free);
  EXPECT_EQ(mx.value, ExtRat(Rat(0)));
  EXPECT_EQ(std::get<StateBasedCause>(mx.cause).q, names(free.chain, {"error"}));
}

TEST(PexpcostInst, IgnoresSafeWeights) {
  auto base = pexpcost_inst_minimal(fig1_inst("6"));
  auto heavy = pexpcost_inst_minimal(fig1_inst("6", "100"));
  EXPECT_EQ(base.value, heavy.value);
  EXPECT_EQ(base.cause, heavy.cause);
  EXPECT_EQ(base.value, expcost_inst_minimal(fig1_inst("6")).value);
}

TEST(MaxcostInst, Fig1) {
  auto im = fig1_inst("6");
  std::vector<StateId> order;
  auto res = maxcost_inst_minimal(im, &order);
  EXPECT_EQ(res.value, ExtRat(Rat(5)));
  EXPECT_EQ(order, (std::vector<StateId>{im.chain.at("t"), im.chain.at("u")}));
  EXPECT_EQ(std::get<StateBasedCause>(res.cause).q, names(im.chain, {"t", "u", "error"}));
  EXPECT_EQ(maxcost_inst_of(im, std::get<StateBasedCause>(res.cause).q), res.value);
}

TEST(InstantaneousCosts, MatchBruteForceOnRandomModels) {
  std::mt19937_64 rng(43);
  int checked = 0;
  for (int round = 0; round < 150; ++round) {
    fixtures::RandomModelOptions opts;
    opts.inner_states = 3 + round % 4;
    opts.acyclic = round % 3 == 0;
    opts.weight_min = round % 2 == 0 ? -3 : 0;
    auto m = fixtures::random_dtmc(rng, opts);
    for (const char* p : {"1/3", "2/3"}) {
      auto im = make_inst_model(m, parse_rat(p));
      if (im.terminal(m.init())) continue;
      auto causes = candidate_causes(im);
      std::optional<Rat> e, pe;
      std::optional<ExtRat> mx;
      for (const auto& q : causes) {
        Rat a = expcost_inst_of(im, q);
        Rat b = pexpcost_inst_of(im, q);
        ExtRat c = maxcost_inst_of(im, q);
        if (!e || a < *e) e = a;
        if (!pe || b < *pe) pe = b;
        if (!mx || c < *mx) mx = c;
      }
      auto er = expcost_inst_minimal(im);
      ASSERT_EQ(er.value, ExtRat(*e)) << m.to_text();
      ASSERT_EQ(expcost_inst_of(im, std::get<StateBasedCause>(er.cause).q), *e);
      ASSERT_EQ(pexpcost_inst_minimal(im).value, ExtRat(*pe));
      std::vector<StateId> order;
      auto mr = maxcost_inst_minimal(im, &order);
      ASSERT_EQ(mr.value, *mx) << m.to_text();
      ASSERT_EQ(maxcost_inst_of(im, std::get<StateBasedCause>(mr.cause).q), *mx);

      // Every strict prefix of the removal order leaves E reachable, so no cause lives inside it.
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        std::vector<StateId> prefix(order.begin(), order.begin() + k + 1);
        ASSERT_TRUE(error_reachable_avoiding(im, prefix));
      }
      ASSERT_FALSE(error_reachable_avoiding(im, order));
      ++checked;
    }
  }
  EXPECT_GT(checked, 150);
}

TEST(InstantaneousCosts, PexpcostIgnoresSafeWeightPerturbation) {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> bump(-20, 20);
  for (int round = 0; round < 60; ++round) {
    fixtures::RandomModelOptions opts;
    opts.inner_states = 3 + round % 5;
    auto m = fixtures::random_dtmc(rng, opts);
    auto im = make_inst_model(m, parse_rat("1/2"));
    auto w = m.weights();
    for (StateId s = 0; s < m.size(); ++s) {
      if (im.safe_set[s]) w[s] += bump(rng);
    }
    auto other = make_inst_model(m.with_weights(w), im.p);
    auto a = pexpcost_inst_minimal(im);
    auto b = pexpcost_inst_minimal(other);
    ASSERT_EQ(a.value, b.value);
    ASSERT_EQ(a.cause, b.cause);
  }
}

TEST(MaxcostInst, TieOrderDoesNotChangeValue) {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 60; ++round) {
    fixtures::RandomModelOptions opts;
    opts.inner_states = 4 + round % 3;
    opts.weight_max = 2;
    auto m = fixtures::random_dtmc(rng, opts);
    std::vector<StateId> perm(m.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto a = maxcost_inst_minimal(make_inst_model(m, parse_rat("1/2")));
    auto b = maxcost_inst_minimal(make_inst_model(permuted(m, perm), parse_rat("1/2")));
    ASSERT_EQ(a.value, b.value);
  }
}
