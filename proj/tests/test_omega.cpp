#include <gtest/gtest.h>

#include <random>

#include "pcause/cause.hpp"
#include "pcause/errors.hpp"
#include "pcause/graph.hpp"
#include "pcause/omega.hpp"
#include "support/random_models.hpp"

using namespace pcause;
using fixtures::load_model;

namespace {

Dra load_automaton(const std::string& file) { return load_dra(std::string(PCAUSE_MODELS_DIR) + "/" + file); }

// One-state automaton accepting every word over the chain's names.
Dra accept_all(const Dtmc& m) {
  Dra a;
  a.states = {"all"};
  for (StateId s = 0; s < m.size(); ++s) a.delta[{0, m.name(s)}] = 0;
  a.pairs.emplace_back(std::vector<bool>{false}, std::vector<bool>{true});
  return a;
}

// Random total automaton with `k` states and one random Rabin pair.
Dra random_dra(std::mt19937_64& rng, const Dtmc& m, std::size_t k) {
  Dra a;
  for (std::size_t i = 0; i < k; ++i) a.states.push_back("q" + std::to_string(i));
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  for (std::size_t q = 0; q < k; ++q) {
    for (StateId s = 0; s < m.size(); ++s) a.delta[{q, m.name(s)}] = pick(rng);
  }
  std::bernoulli_distribution coin(0.4);
  std::vector<bool> e(k), f(k);
  for (std::size_t q = 0; q < k; ++q) {
    e[q] = coin(rng);
    f[q] = !e[q] && coin(rng);
  }
  a.pairs.emplace_back(e, f);
  return a;
}

std::vector<std::string> names(const Dtmc& m, const std::vector<StateId>& path) {
  std::vector<std::string> out;
  for (auto s : path) out.push_back(m.name(s));
  return out;
}

}  // namespace

TEST(Dra, ParsesAndRejects) {
  auto a = load_automaton("eventually_error.dra");
  EXPECT_EQ(a.states.size(), 2u);
  EXPECT_EQ(a.run({"s", "t", "error"}), *a.find("hit"));
  EXPECT_EQ(a.run({"s", "u", "safe"}), *a.find("wait"));
  EXPECT_THROW(parse_dra("dra\nstate a\n"), ModelError);
  EXPECT_THROW(parse_dra("dra\nstate a\ninit a\ntrans a x b\n"), ModelError);
  EXPECT_THROW(parse_dra("dra\nstate a\nstate b\ninit a\ntrans a x a\ntrans a x b\n"), ModelError);
  EXPECT_THROW(parse_dra("dra\nstate a\ninit a\npair a b\n"), ModelError);
  EXPECT_THROW(parse_dra("nfa\n"), ModelError);
}

TEST(Product, MissingTransitionThrows) {
  auto fig1 = load_model("fig1.dtmc");
  auto a = parse_dra("dra\nstate w\ninit w\ntrans w s w\ntrans w t w\npair E: F:w\n");
  EXPECT_THROW(build_product(fig1, a), ModelError);
}

TEST(Product, AcceptAllIsIsomorphic) {
  for (const char* file : {"fig1.dtmc", "fig2.dtmc", "fig4.dtmc"}) {
    auto m = load_model(file);
    auto prod = build_product(m, accept_all(m));
    ASSERT_EQ(prod.chain.size(), m.size()) << file;
    for (StateId v = 0; v < prod.chain.size(); ++v) {
      EXPECT_EQ(prod.chain.weight(v), m.weight(prod.m_state[v]));
      for (const auto& tr : prod.chain.row(v)) EXPECT_EQ(tr.prob, m.prob(prod.m_state[v], prod.m_state[tr.to]));
    }
    EXPECT_TRUE(std::all_of(prod.bscc_accepting.begin(), prod.bscc_accepting.end(), [](bool b) { return b; }));
    EXPECT_EQ(prod.effect_probability(), Rat(1));
  }
}

TEST(Product, AcceptAllProjectionIsIdentity) {
  auto m = load_model("fig1.dtmc");
  auto prod = build_product(m, accept_all(m));
  auto pm = prod.prepare(Rat(1, 2));
  // Every path is accepted, so the initial state alone is the canonical cause.
  auto proj = transfer_cause(prod, pm, canonical_cause(pm), 10);
  ASSERT_EQ(proj.members.size(), 1u);
  EXPECT_EQ(proj.members[0], std::vector<StateId>{m.init()});
  ASSERT_TRUE(proj.state_based.has_value());
  EXPECT_EQ(*proj.state_based, std::vector<StateId>{m.init()});
  EXPECT_TRUE(verify_projected(m, accept_all(m), Rat(1, 2), proj).ok());
}

TEST(Product, EventuallyErrorMatchesDirectPipeline) {
  auto m = load_model("fig1.dtmc");
  auto a = load_automaton("eventually_error.dra");
  auto prod = build_product(m, a);
  EXPECT_EQ(prod.effect_probability(), reach_probabilities(m, std::vector<StateId>{*m.find("error")})[m.init()]);
  for (const char* p : {"3/4", "4/5", "7/8", "1/2"}) {
    const Rat pr = parse_rat(p);
    auto direct = preprocess(m, pr);
    auto direct_unfold = unfold(direct, canonical_cause(direct), 10);
    std::vector<std::vector<std::string>> expected;
    for (const auto& member : direct_unfold.members) {
      std::vector<std::string> row;
      for (auto s : member) row.push_back(direct.members()[s].front());
      expected.push_back(row);
    }

    auto ppm = prod.prepare(pr);
    auto proj = transfer_cause(prod, ppm, canonical_cause(ppm), 10);
    std::vector<std::vector<std::string>> got;
    for (const auto& member : proj.members) got.push_back(names(m, member));
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, expected) << "p = " << p;
    EXPECT_EQ(proj.residual, direct_unfold.residual);
    EXPECT_TRUE(verify_projected(m, a, pr, proj).ok()) << "p = " << p;
  }
}

TEST(Product, Fig1CanonicalProjections) {
  auto m = load_model("fig1.dtmc");
  auto a = load_automaton("eventually_error.dra");
  auto prod = build_product(m, a);
  EXPECT_EQ(prod.effect_probability(), Rat(49, 64));
  auto project = [&](const char* p) {
    auto ppm = prod.prepare(parse_rat(p));
    auto proj = transfer_cause(prod, ppm, canonical_cause(ppm), 10);
    std::vector<std::vector<std::string>> got;
    for (const auto& member : proj.members) got.push_back(names(m, member));
    return std::pair{got, proj};
  };
  // q(s) = 49/64 >= 3/4: the initial state alone is critical.
  auto [at_three_quarters, proj1] = project("3/4");
  EXPECT_EQ(at_three_quarters, (std::vector<std::vector<std::string>>{{"s"}}));
  // q(t) = 25/32 while q(u) = 3/4 falls below p.
  auto [at_t, proj2] = project("25/32");
  EXPECT_EQ(at_t, (std::vector<std::vector<std::string>>{{"s", "t"}, {"s", "u", "error"}}));
  ASSERT_TRUE(proj2.state_based.has_value());
  EXPECT_EQ(names(m, *proj2.state_based), (std::vector<std::string>{"t", "error"}));
}

TEST(Product, StateBasedWhenAutomatonStateIsDetermined) {
  auto m = load_model("fig2.dtmc");
  std::string text = "dra\nstate w\nstate h\ninit w\n";
  for (const char* s : {"s", "t", "safe"}) text += std::string("trans w ") + s + " w\n";
  text += "trans w error h\n";
  for (const char* s : {"s", "t", "safe", "error"}) text += std::string("trans h ") + s + " h\n";
  text += "pair E: F:h\n";
  auto a = parse_dra(text);
  auto prod = build_product(m, a);
  auto ppm = prod.prepare(Rat(1, 2));
  auto proj = transfer_cause(prod, ppm, canonical_cause(ppm), 12);
  ASSERT_TRUE(proj.state_based.has_value());
  EXPECT_EQ(names(m, *proj.state_based), (std::vector<std::string>{"t"}));
  // Members of depth <= 12 are s^k t; the loop leaves residual mass (1/2)^12 undecided.
  for (const auto& member : proj.members) EXPECT_EQ(m.name(member.back()), "t");
  EXPECT_EQ(proj.residual, Rat(1, 4096));
  EXPECT_TRUE(verify_projected(m, a, Rat(1, 2), proj).ok(1e-3));
}

TEST(Product, TransientTargetHasEmptyEffect) {
  auto m = load_model("transient_t.dtmc");
  auto a = load_automaton("infinitely_t.dra");
  auto prod = build_product(m, a);
  EXPECT_FALSE(prod.bsccs.empty());
  EXPECT_TRUE(std::none_of(prod.bscc_accepting.begin(), prod.bscc_accepting.end(), [](bool b) { return b; }));
  EXPECT_EQ(prod.effect_probability(), Rat(0));
  for (const auto& q : prod.q) EXPECT_EQ(q, Rat(0));
  EXPECT_THROW(prod.prepare(Rat(1, 2)), ModelError);
  EXPECT_EQ(conditional_probability(m, a, {m.init(), *m.find("t")}), Rat(0));
}

TEST(Product, RejectsNonTriggerCause) {
  auto m = load_model("fig1.dtmc");
  auto prod = build_product(m, load_automaton("eventually_error.dra"));
  auto ppm = prod.prepare(Rat(3, 4));
  EXPECT_THROW(transfer_cause(prod, ppm, ThresholdCause{{}}, 5), UnsupportedError);
  // {t} misses the paths through u.
  EXPECT_THROW(transfer_cause(prod, ppm, StateBasedCause{fixtures::ids(ppm, "t@wait")}, 5), CauseError);
}

TEST(Product, ConditionalProbabilityMatchesLiftedState) {
  std::mt19937_64 rng(20261015);
  int checked = 0;
  while (checked < 1000) {
    fixtures::RandomModelOptions opts;
    opts.inner_states = 3;
    auto m = fixtures::random_dtmc(rng, opts);
    auto a = random_dra(rng, m, 1 + rng() % 3);
    auto prod = build_product(m, a);
    for (int k = 0; k < 50; ++k) {
      std::vector<StateId> path{m.init()};
      std::size_t len = rng() % 9;
      for (std::size_t i = 0; i < len; ++i) {
        const auto& row = m.row(path.back());
        path.push_back(row[rng() % row.size()].to);
      }
      auto lifted = prod.lift(path);
      ASSERT_EQ(lifted.size(), path.size());
      for (std::size_t i = 0; i < path.size(); ++i) ASSERT_EQ(prod.m_state[lifted[i]], path[i]);
      EXPECT_EQ(prod.a_state[lifted.back()], a.run(names(m, path)));
      ASSERT_EQ(conditional_probability(m, a, path), prod.q[lifted.back()]);
      ++checked;
    }
  }
}

TEST(Product, BottomComponentsAreAllOrNothing) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    fixtures::RandomModelOptions opts;
    opts.inner_states = 3 + trial % 4;
    auto m = fixtures::random_dtmc(rng, opts);
    auto prod = build_product(m, random_dra(rng, m, 1 + trial % 4));
    std::vector<bool> covered(prod.chain.size(), false);
    for (std::size_t i = 0; i < prod.bsccs.size(); ++i) {
      const Rat expected = prod.bscc_accepting[i] ? Rat(1) : Rat(0);
      for (auto v : prod.bsccs[i]) {
        ASSERT_EQ(prod.q[v], expected);
        ASSERT_EQ(prod.accepting[v], prod.bscc_accepting[i]);
        covered[v] = true;
        for (const auto& tr : prod.chain.row(v)) {
          ASSERT_TRUE(std::find(prod.bsccs[i].begin(), prod.bsccs[i].end(), tr.to) != prod.bsccs[i].end());
        }
      }
    }
    for (StateId v = 0; v < prod.chain.size(); ++v) {
      if (!covered[v]) ASSERT_FALSE(prod.accepting[v]);
    }
  }
}

TEST(Product, RandomProjectionsVerifyOnModel) {
  std::mt19937_64 rng(99);
  int verified = 0;
  for (int trial = 0; trial < 300 && verified < 60; ++trial) {
    fixtures::RandomModelOptions opts;
    opts.inner_states = 3;
    opts.acyclic = true;
    auto m = fixtures::random_dtmc(rng, opts);
    auto a = random_dra(rng, m, 2);
    auto prod = build_product(m, a);
    if (sgn(prod.effect_probability()) == 0) continue;
    const Rat p(1 + rng() % 9, 10);
    auto ppm = prod.prepare(p);
    auto proj = transfer_cause(prod, ppm, canonical_cause(ppm), 12);
    auto rep = verify_projected(m, a, p, proj);
    EXPECT_TRUE(rep.prefix_free);
    EXPECT_TRUE(rep.critical);
    EXPECT_LE(rep.uncovered, rep.residual);
    ++verified;
  }
  EXPECT_GE(verified, 20);
}
