// Copyright 2026 The aifgrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aifgrid/community_planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "aifgrid/errors.hpp"
#include "oracles.hpp"

namespace aifgrid {
namespace {

using oracle::RandomBelief;
using oracle::RandomMarket;

Categorical OneHotState(LoadLevel b1, LoadLevel b2, SocLevel ess) {
  return Categorical::OneHot(kNumStates, JointState{b1, b2, ess}.index());
}

TEST(ExpectedCost, BalancedLoadHasNoPenalties) {
  const Categorical q = OneHotState(LoadLevel::kHigh, LoadLevel::kHigh, SocLevel::kLow);
  const MarketStep m{0.1, 18.0, 0.0};
  const CostBreakdown c = ExpectedCost(q, JointAction{}, m, CostWeights{}, StateEconomics{});
  EXPECT_EQ(c.demand_kw, 18.0);
  EXPECT_EQ(c.residual_kw, 0.0);
  EXPECT_EQ(c.deviation, 0.0);
  EXPECT_EQ(c.unused_pv, 0.0);
  EXPECT_EQ(c.battery, 0.0);
  EXPECT_EQ(c.total(), c.spot);
}

TEST(ExpectedCost, DoublingPriceDoublesSpotOnly) {
  std::mt19937_64 rng(3);
  const StateEconomics e;
  const CostWeights w;
  for (int u = 0; u < kNumActions; ++u) {
    const Categorical q = RandomBelief(rng);
    const JointAction a = JointAction::FromIndex(u);
    const MarketStep m{0.07, 6.0, 4.0};
    const MarketStep m2{0.14, 6.0, 4.0};
    const CostBreakdown c1 = ExpectedCost(q, a, m, w, e);
    const CostBreakdown c2 = ExpectedCost(q, a, m2, w, e);
    EXPECT_DOUBLE_EQ(c2.spot, 2.0 * c1.spot);
    EXPECT_EQ(c2.deviation, c1.deviation);
    EXPECT_EQ(c2.unused_pv, c1.unused_pv);
    EXPECT_EQ(c2.battery, c1.battery);
  }
}

TEST(ExpectedCost, MatchesReferenceOnRandomInputs) {
  std::mt19937_64 rng(4);
  const CostWeights w;
  StateEconomics e;
  e.reduction_kw = {0.0, 0.25, 0.5};
  for (int trial = 0; trial < 500; ++trial) {
    const Categorical q = RandomBelief(rng);
    const JointAction a = JointAction::FromIndex(trial % kNumActions);
    const MarketStep m = RandomMarket(1, rng)[0];
    EXPECT_NEAR(ExpectedCost(q, a, m, w, e).total(), oracle::StepCost(q, a, m, w, e), 1e-14);
  }
}

TEST(ExpectedCost, SellAbsorbsSurplusPv) {
  const Categorical q = OneHotState(LoadLevel::kLow, LoadLevel::kLow, SocLevel::kHigh);
  const JointAction sell{BuildingAction::kNoChange, StorageAction::kHold, MarketAction::kSell};
  const MarketStep m{0.1, 0.0, 12.0};
  const CostBreakdown c = ExpectedCost(q, sell, m, CostWeights{}, StateEconomics{});
  // 4 kW of load plus the 5 kW block take 9 of the 12 kW available.
  EXPECT_DOUBLE_EQ(c.pv_used_kw, 9.0);
  EXPECT_DOUBLE_EQ(c.pv_curtailed_kw, 3.0);
  EXPECT_DOUBLE_EQ(c.residual_kw, 0.0);
  EXPECT_DOUBLE_EQ(c.spot, -0.9 * 0.1 * 5.0 * 0.25);
}

TEST(UsablePv, BoundedBySinks) {
  EXPECT_EQ(UsablePv(10.0, 4.0, 0.0, 0.0), 4.0);
  EXPECT_EQ(UsablePv(10.0, 4.0, 5.0, 0.0), 9.0);
  EXPECT_EQ(UsablePv(10.0, 4.0, 0.0, -3.0), 7.0);
  EXPECT_EQ(UsablePv(2.0, 4.0, 0.0, 0.0), 2.0);
  EXPECT_EQ(UsablePv(-1.0, 4.0, 0.0, 0.0), 0.0);
}

TEST(StepAmbiguity, MatchesDoubleSum) {
  std::mt19937_64 rng(5);
  const CommunityModel m = CommunityModel::Build({});
  for (int trial = 0; trial < 100; ++trial) {
    const Categorical q = RandomBelief(rng);
    EXPECT_NEAR(StepAmbiguity(q, m), oracle::Ambiguity(q.vector(), m.likelihood().matrix()),
                1e-12);
  }
}

TEST(StepAmbiguity, ExtremeLikelihoods) {
  std::mt19937_64 rng(6);
  EXPECT_EQ(StepAmbiguity(RandomBelief(rng), oracle::DeterministicSensingModel()), 0.0);
  const CommunityModel base = CommunityModel::Build({});
  std::vector<StochasticMatrix> b;
  for (int u = 0; u < kNumActions; ++u) b.push_back(base.transition(u));
  const CommunityModel flat(
      StochasticMatrix::FromMatrix(Eigen::MatrixXd::Constant(27, 36, 1.0 / 27.0)),
      oracle::ToArray(b), PreferredObservations(0.5));
  EXPECT_NEAR(StepAmbiguity(RandomBelief(rng), flat), std::log(27.0), 1e-12);
}

TEST(EvaluatePolicy, SingleStepWithoutAmbiguityIsCost) {
  std::mt19937_64 rng(7);
  const CommunityModel m = CommunityModel::Build({});
  EfeConfig cfg;
  cfg.horizon = 1;
  cfg.alpha_amb = 0.0;
  const auto market = RandomMarket(1, rng);
  const Categorical q = RandomBelief(rng);
  for (int u = 0; u < kNumActions; ++u) {
    const std::vector<JointAction> policy{JointAction::FromIndex(u)};
    const PolicyEvaluation ev =
        EvaluatePolicy(q, policy, market, m, cfg, CostWeights{}, StateEconomics{});
    EXPECT_EQ(ev.efe,
              ExpectedCost(q, policy[0], market[0], CostWeights{}, StateEconomics{}).total());
  }
}

TEST(EvaluatePolicy, TwoStepsMatchExplicitExpansion) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> pick(0, kNumActions - 1);
  std::uniform_real_distribution<double> alpha(0.0, 2.0);
  const CostWeights w;
  const StateEconomics e;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const CommunityModel m = trial % 2 ? oracle::RandomModel(rng) : CommunityModel::Build({});
    EfeConfig cfg;
    cfg.horizon = 2;
    cfg.alpha_amb = alpha(rng);
    const std::vector<JointAction> pol{JointAction::FromIndex(pick(rng)),
                                       JointAction::FromIndex(pick(rng))};
    const auto market = RandomMarket(2, rng);
    const Categorical q = RandomBelief(rng);

    const double expected = oracle::TwoStepEfe(q, pol, market, m, cfg.alpha_amb, w, e);
    const PolicyEvaluation ev = EvaluatePolicy(q, pol, market, m, cfg, w, e);
    worst = std::max(worst, std::abs(ev.efe - expected));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(EvaluatePolicy, EfeIsSumOfStepTerms) {
  std::mt19937_64 rng(9);
  const CommunityModel m = CommunityModel::Build({});
  EfeConfig cfg;
  cfg.alpha_amb = 0.7;
  std::uniform_int_distribution<int> pick(0, kNumActions - 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<JointAction> pol;
    for (int k = 0; k < cfg.horizon; ++k) pol.push_back(JointAction::FromIndex(pick(rng)));
    const PolicyEvaluation ev = EvaluatePolicy(RandomBelief(rng), pol, RandomMarket(4, rng), m,
                                               cfg, CostWeights{}, StateEconomics{});
    double sum = 0.0;
    for (int k = 0; k < cfg.horizon; ++k) {
      sum += ev.step_cost[k] + cfg.alpha_amb * ev.step_ambiguity[k];
      EXPECT_NEAR(ev.step_ambiguity[k], StepAmbiguity(ev.predicted_beliefs[k], m), 1e-15);
    }
    EXPECT_NEAR(ev.efe, sum, 1e-12);
    EXPECT_EQ(ev.efe, ev.expected_cost + cfg.alpha_amb * ev.ambiguity);
  }
}

TEST(EvaluatePolicy, RiskModeUsesKlToPreferences) {
  std::mt19937_64 rng(10);
  const CommunityModel m = CommunityModel::Build({});
  EfeConfig cfg;
  cfg.horizon = 2;
  cfg.alpha_amb = 0.5;
  cfg.mode = EfeMode::kRiskAmbiguity;
  const std::vector<JointAction> pol{JointAction::FromIndex(4), JointAction::FromIndex(22)};
  const PolicyEvaluation ev = EvaluatePolicy(RandomBelief(rng), pol, RandomMarket(2, rng), m,
                                             cfg, CostWeights{}, StateEconomics{});
  double risk = 0.0;
  for (const Categorical& q : ev.predicted_beliefs) {
    const Eigen::VectorXd o = m.likelihood().matrix() * q.vector();
    for (int i = 0; i < 27; ++i) {
      if (o(i) > 0.0) risk += o(i) * std::log(o(i) / m.preferred_observations()[i]);
    }
  }
  EXPECT_NEAR(ev.risk, risk, 1e-12);
  EXPECT_EQ(ev.efe, ev.risk + cfg.alpha_amb * ev.ambiguity);
}

// Every policy of length h, scored independently.
std::pair<double, std::int64_t> FlatArgmin(const Categorical& q,
                                           const std::vector<MarketStep>& market,
                                           const CommunityModel& m, const EfeConfig& cfg) {
  std::int64_t total = 1;
  for (int k = 0; k < cfg.horizon; ++k) total *= kNumActions;
  double best = std::numeric_limits<double>::infinity();
  std::int64_t arg = -1;
  std::vector<JointAction> pol(static_cast<std::size_t>(cfg.horizon));
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t r = idx;
    for (int k = cfg.horizon - 1; k >= 0; --k) {
      pol[k] = JointAction::FromIndex(static_cast<int>(r % kNumActions));
      r /= kNumActions;
    }
    const double v = EvaluatePolicy(q, pol, market, m, cfg, CostWeights{}, StateEconomics{}).efe;
    if (v < best) {
      best = v;
      arg = idx;
    }
  }
  return {best, arg};
}

TEST(Plan, ZeroAlphaMatchesFlatCostArgmin) {
  std::mt19937_64 rng(11);
  const CommunityModel m = CommunityModel::Build({});
  for (int h = 1; h <= 3; ++h) {
    for (int trial = 0; trial < (h == 3 ? 2 : 10); ++trial) {
      EfeConfig cfg;
      cfg.horizon = h;
      cfg.alpha_amb = 0.0;
      const auto market = RandomMarket(h, rng);
      const Categorical q = RandomBelief(rng);
      const PlanResult r = Plan(q, market, m, cfg, CostWeights{}, StateEconomics{});
      const auto [best, arg] = FlatArgmin(q, market, m, cfg);
      EXPECT_NEAR(r.evaluation.efe, best, 1e-12);
      EXPECT_NEAR(r.evaluation.expected_cost, best, 1e-12);
      // Ties aside, the selected policy is the flat argmin.
      const PolicyEvaluation at_arg = EvaluatePolicy(
          q, r.evaluation.policy, market, m, cfg, CostWeights{}, StateEconomics{});
      if (std::abs(at_arg.efe - best) > 1e-12) ADD_FAILURE() << "h=" << h;
      if (PolicyIndex(r.evaluation.policy) != arg) {
        EXPECT_NEAR(at_arg.efe, best, 1e-12);
      }
      EXPECT_EQ(r.candidates_evaluated, static_cast<std::int64_t>(std::pow(27, h)));
    }
  }
}

TEST(Plan, CheaperSingleActionWins) {
  const CommunityModel m = CommunityModel::Build({});
  EfeConfig cfg;
  cfg.horizon = 1;
  cfg.alpha_amb = 0.0;
  // Evening deficit: buying a block beats paying the deviation penalty.
  const std::vector<MarketStep> market{{0.02, 0.0, 0.0}};
  const Categorical q = OneHotState(LoadLevel::kMed, LoadLevel::kMed, SocLevel::kEmpty);
  const PlanResult r = Plan(q, market, m, cfg, CostWeights{}, StateEconomics{});
  EXPECT_EQ(r.action.market, MarketAction::kBuy);
  EXPECT_NE(r.action.storage, StorageAction::kCharge);
}

TEST(Plan, SaturatedBeamEqualsExhaustive) {
  std::mt19937_64 rng(12);
  const CommunityModel m = CommunityModel::Build({});
  for (int trial = 0; trial < 3; ++trial) {
    EfeConfig cfg;
    cfg.horizon = 3;
    cfg.alpha_amb = trial * 0.5;
    const auto market = RandomMarket(3, rng);
    const Categorical q = RandomBelief(rng);
    const PlanResult ex = Plan(q, market, m, cfg, CostWeights{}, StateEconomics{});
    cfg.search = SearchMode::kBeam;
    cfg.beam_width = 27 * 27 * 27;
    const PlanResult beam = Plan(q, market, m, cfg, CostWeights{}, StateEconomics{});
    EXPECT_EQ(PolicyIndex(beam.evaluation.policy), PolicyIndex(ex.evaluation.policy));
    EXPECT_EQ(beam.evaluation.efe, ex.evaluation.efe);
    EXPECT_EQ(beam.action, ex.action);
  }
}

TEST(Plan, TreeBeliefsMatchIndependentPropagation) {
  std::mt19937_64 rng(13);
  const CommunityModel m = CommunityModel::Build({});
  for (int trial = 0; trial < 5; ++trial) {
    EfeConfig cfg;
    cfg.horizon = 3;
    cfg.alpha_amb = 0.3;
    const auto market = RandomMarket(3, rng);
    const Categorical q = RandomBelief(rng);
    const PlanResult r = Plan(q, market, m, cfg, CostWeights{}, StateEconomics{});
    Eigen::VectorXd v = q.vector();
    for (int k = 0; k < cfg.horizon; ++k) {
      v = m.transition(r.evaluation.policy[k].index()).matrix() * v;
      EXPECT_LE((r.evaluation.predicted_beliefs[k].vector() - v).cwiseAbs().maxCoeff(), 1e-12);
    }
    const PolicyEvaluation again =
        EvaluatePolicy(q, r.evaluation.policy, market, m, cfg, CostWeights{}, StateEconomics{});
    EXPECT_EQ(again.efe, r.evaluation.efe);
  }
}

TEST(Plan, SelectedAmbiguityNonIncreasingInAlpha) {
  std::mt19937_64 rng(14);
  const CommunityModel m = CommunityModel::Build({});
  const std::vector<double> alphas{0.0, 0.5, 1.0, 1.5, 2.0};
  for (int trial = 0; trial < 10; ++trial) {
    EfeConfig cfg;
    cfg.horizon = trial < 8 ? 2 : 4;
    const auto market = RandomMarket(cfg.horizon, rng);
    const Categorical q = RandomBelief(rng);
    const auto results = PlanMultiAlpha(q, market, m, cfg, alphas, CostWeights{},
                                        StateEconomics{});
    for (std::size_t i = 1; i < alphas.size(); ++i) {
      EXPECT_LE(results[i].evaluation.ambiguity, results[i - 1].evaluation.ambiguity + 1e-12);
    }
    // Single-alpha planning agrees with the shared sweep.
    for (std::size_t i = 0; i < alphas.size(); i += 2) {
      cfg.alpha_amb = alphas[i];
      const PlanResult single = Plan(q, market, m, cfg, CostWeights{}, StateEconomics{});
      EXPECT_EQ(PolicyIndex(single.evaluation.policy),
                PolicyIndex(results[i].evaluation.policy));
    }
  }
}

TEST(Plan, DeterministicSensingMakesAlphaIrrelevant) {
  std::mt19937_64 rng(15);
  const CommunityModel m = oracle::DeterministicSensingModel();
  EfeConfig cfg;
  cfg.horizon = 3;
  const auto market = RandomMarket(3, rng);
  const Categorical q = RandomBelief(rng);
  cfg.alpha_amb = 0.0;
  const PlanResult a0 = Plan(q, market, m, cfg, CostWeights{}, StateEconomics{});
  cfg.alpha_amb = 2.0;
  const PlanResult a2 = Plan(q, market, m, cfg, CostWeights{}, StateEconomics{});
  EXPECT_EQ(a0.action, a2.action);
  EXPECT_EQ(a0.evaluation.efe, a2.evaluation.efe);
  EXPECT_EQ(a2.evaluation.ambiguity, 0.0);
}

TEST(Plan, FourStepExhaustiveCountsEveryPolicy) {
  std::mt19937_64 rng(16);
  const CommunityModel m = CommunityModel::Build({});
  const EfeConfig cfg;  // horizon 4
  const auto market = RandomMarket(4, rng);
  const Categorical q = RandomBelief(rng);
  const PlanResult r = Plan(q, market, m, cfg, CostWeights{}, StateEconomics{});
  EXPECT_EQ(r.candidates_evaluated, 531441);
  const PlanResult again = Plan(q, market, m, cfg, CostWeights{}, StateEconomics{});
  EXPECT_EQ(again.action, r.action);
  EXPECT_EQ(again.evaluation.efe, r.evaluation.efe);
  // Spot check against a slice of the flat enumeration: no policy sharing the
  // selected first action beats the selection.
  std::vector<JointAction> pol = r.evaluation.policy;
  for (int a = 0; a < kNumActions; ++a) {
    pol[3] = JointAction::FromIndex(a);
    EXPECT_GE(EvaluatePolicy(q, pol, market, m, cfg, CostWeights{}, StateEconomics{}).efe,
              r.evaluation.efe - 1e-12);
  }
}

TEST(Plan, ShortMarketWraps) {
  std::mt19937_64 rng(17);
  const CommunityModel m = CommunityModel::Build({});
  EfeConfig cfg;
  cfg.horizon = 2;
  const auto one = RandomMarket(1, rng);
  const std::vector<MarketStep> two{one[0], one[0]};
  const Categorical q = RandomBelief(rng);
  EXPECT_EQ(Plan(q, one, m, cfg, CostWeights{}, StateEconomics{}).evaluation.efe,
            Plan(q, two, m, cfg, CostWeights{}, StateEconomics{}).evaluation.efe);
}

TEST(EfeConfig, RejectsInvalidSettings) {
  EfeConfig c;
  c.horizon = 0;
  EXPECT_THROW(c.Validate(), ParameterError);
  c = EfeConfig{};
  c.alpha_amb = -1.0;
  EXPECT_THROW(c.Validate(), ParameterError);
}

}  // namespace
}  // namespace aifgrid
