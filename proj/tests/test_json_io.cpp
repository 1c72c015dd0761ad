#include <gtest/gtest.h>

#include "pcause/cost_partial.hpp"
#include "pcause/errors.hpp"
#include "pcause/json_io.hpp"
#include "support/random_models.hpp"

using namespace pcause;
using fixtures::prepare;

TEST(JsonIo, RationalsAreStrings) {
  EXPECT_EQ(rat_json(Rat(511, 1152)), "511/1152");
  EXPECT_EQ(rat_json(Rat(4)), "4");
  EXPECT_EQ(ext_rat_json(ExtRat::pos_inf()), "inf");
  EXPECT_EQ(ext_rat_json(ExtRat::neg_inf()), "-inf");
  EXPECT_EQ(rat_from_json(Json("-3/6")), Rat(-1, 2));
  EXPECT_TRUE(ext_rat_from_json(Json("inf")).is_pos_inf());
  EXPECT_THROW(rat_from_json(Json(0.5)), CauseError);
}

TEST(JsonIo, CausesRoundTrip) {
  auto pm = prepare("fig1.dtmc", "3/4");
  auto ids = [&](const char* names) { return fixtures::ids(pm, names); };
  std::vector<CauseRepr> causes{
      CanonicalCause{},
      StateBasedCause{ids("t u error")},
      ThresholdCause{{{ids("t")[0], ExtRat(Rat(5, 2))}, {ids("error")[0], ExtRat::pos_inf()}}},
      ExplicitCause{{ids("s t"), ids("s u")}},
  };
  for (const auto& c : causes) {
    auto j = cause_json(pm, c);
    EXPECT_EQ(cause_from_json(pm, Json::parse(j.dump())), c) << j.dump();
  }
}

TEST(JsonIo, RejectsMalformedCauses) {
  auto pm = prepare("fig1.dtmc", "3/4");
  EXPECT_THROW(cause_from_json(pm, Json::parse(R"({"states":["t"]})")), CauseError);
  EXPECT_THROW(cause_from_json(pm, Json::parse(R"({"kind":"ring"})")), CauseError);
  EXPECT_THROW(cause_from_json(pm, Json::parse(R"({"kind":"state_based","states":"t"})")), CauseError);
  EXPECT_THROW(cause_from_json(pm, Json::parse(R"({"kind":"state_based","states":["nowhere"]})")), ModelError);
}

TEST(JsonIo, ResultLayout) {
  auto pm = prepare("fig4.dtmc", "1/2");
  auto j = result_json(pm, pexpcost_minimal(pm));
  EXPECT_EQ(j["cost"], "pexpcost");
  EXPECT_EQ(j["value"], "511/1152");
  EXPECT_EQ(j["cause"]["kind"], "threshold");
  EXPECT_EQ(j["cause"]["thresholds"]["t"], "4");
  EXPECT_EQ(j.begin().key(), "cost");
}
