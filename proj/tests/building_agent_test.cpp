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

#include "aifgrid/building_agent.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "aifgrid/errors.hpp"
#include "oracles.hpp"

namespace aifgrid {
namespace {

VfeConfig UnitConfig() {
  VfeConfig c;
  c.sensor_std = 1.0;
  c.preference_std = 1.0;
  c.target = {24.0};
  return c;
}

StepContext SomeContext() {
  StepContext ctx;
  ctx.previous_observation = 25.0;
  ctx.previous_action = {0.1, 14.0};
  ctx.previous_ambient = 30.0;
  ctx.observation = 25.2;
  ctx.ambient = 30.5;
  ctx.target = 24.0;
  ctx.prior = {2.0, 0.01};
  return ctx;
}

TEST(PredictObservation, MatchesWorldAtTrueStates) {
  const ThermalParams p;
  const ZoneTruth z{25.0, 3.0, 0.02};
  const HvacAction a{0.15, 13.0};
  const ContinuousBelief b{3.0, 0.02};
  EXPECT_EQ(PredictObservation(b, a, z.temperature, 31.0, p),
            StepTemperature(z, a, 31.0, p));
}

TEST(PredictObservation, OccupancySensitivity) {
  const ThermalParams p;
  const HvacAction a{0.1, 14.0};
  const double base = PredictObservation({2.0, 0.0}, a, 25.0, 30.0, p);
  const double plus = PredictObservation({3.0, 0.0}, a, 25.0, 30.0, p);
  EXPECT_NEAR(plus - base, 0.0153, 1e-12);
}

TEST(Vfe, PerfectFitIsZero) {
  const ThermalParams p;
  StepContext ctx = SomeContext();
  const ContinuousBelief b{ctx.prior.occupancy, ctx.prior.infiltration};
  const HvacAction a{0.1, 14.0};
  ctx.observation = ReconstructObservation(b, ctx, p);
  ctx.target = PredictObservation(b, a, ctx.observation, ctx.ambient, p);
  EXPECT_EQ(Vfe(b, a, ctx, UnitConfig(), p), 0.0);
}

TEST(Vfe, HandEvaluatedResiduals) {
  const ThermalParams p;
  StepContext ctx = SomeContext();
  ContinuousBelief b{3.0, 0.03, 1.0, 1.0};
  const HvacAction a{0.1, 14.0};
  ctx.prior = {2.0, -0.97};  // complexity residuals of 1 and 1
  ctx.observation = ReconstructObservation(b, ctx, p) + 1.0;
  ctx.target = PredictObservation(b, a, ctx.observation, ctx.ambient, p) + 2.0;
  const VfeTerms t = VfeBreakdown(b, a, ctx, UnitConfig(), p);
  EXPECT_NEAR(t.accuracy, 0.5, 1e-12);
  EXPECT_NEAR(t.preference, 2.0, 1e-12);
  EXPECT_NEAR(t.complexity, 1.0, 1e-12);
  EXPECT_NEAR(t.total(), 3.5, 1e-12);
}

TEST(Vfe, PreferenceWidthScalesOnlyItsTerm) {
  const ThermalParams p;
  const StepContext ctx = SomeContext();
  const ContinuousBelief b{1.0, 0.0};
  const HvacAction a{0.2, 12.0};
  VfeConfig c = UnitConfig();
  const VfeTerms narrow = VfeBreakdown(b, a, ctx, c, p);
  c.preference_std *= 2.0;
  const VfeTerms wide = VfeBreakdown(b, a, ctx, c, p);
  EXPECT_NEAR(wide.preference, narrow.preference / 4.0, 1e-12);
  EXPECT_EQ(wide.accuracy, narrow.accuracy);
  EXPECT_EQ(wide.complexity, narrow.complexity);
}

TEST(Vfe, FirstStepDropsAccuracy) {
  const ThermalParams p;
  StepContext ctx = SomeContext();
  ctx.has_history = false;
  EXPECT_EQ(VfeBreakdown({1.0, 0.0}, {0.1, 14.0}, ctx, UnitConfig(), p).accuracy, 0.0);
}

TEST(VfeGrad, MatchesCentralDifferences) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    EXPECT_LE(oracle::WorstGradientError(oracle::RandomVfeCase(rng), 1e-5), 1e-5)
        << "trial " << trial;
  }
}

TEST(UpdateStates, FixedPointIsReturnedUnchanged) {
  const ThermalParams p;
  StepContext ctx = SomeContext();
  const ContinuousBelief b{ctx.prior.occupancy, ctx.prior.infiltration};
  const HvacAction a{0.1, 14.0};
  ctx.observation = ReconstructObservation(b, ctx, p);
  ctx.target = PredictObservation(b, a, ctx.observation, ctx.ambient, p);
  VfeConfig cfg;
  cfg.target = {ctx.target};
  const StateUpdate s = UpdateStates(b, a, ctx, cfg, p);
  EXPECT_EQ(s.iterations, 0);
  EXPECT_EQ(s.belief.occupancy, b.occupancy);
  EXPECT_EQ(s.belief.infiltration, b.infiltration);
}

TEST(UpdateStates, UnexplainedWarmthRaisesInfiltration) {
  const ThermalParams p;
  StepContext ctx = SomeContext();  // ambient above the zone
  const ContinuousBelief b{ctx.prior.occupancy, ctx.prior.infiltration};
  const HvacAction a{0.1, 14.0};
  ctx.observation = ReconstructObservation(b, ctx, p) + 0.3;
  ctx.target = PredictObservation(b, a, ctx.observation, ctx.ambient, p);
  VfeConfig cfg;
  cfg.target = {ctx.target};
  cfg.max_iters = 1;
  double previous = b.infiltration;
  ContinuousBelief cur = b;
  for (int i = 0; i < 5; ++i) {
    cur = UpdateStates(cur, a, ctx, cfg, p).belief;
    EXPECT_GT(cur.infiltration, previous);
    previous = cur.infiltration;
  }
}

TEST(UpdateStates, NonFiniteGradientReportsIteration) {
  const ThermalParams p;
  StepContext ctx = SomeContext();
  ctx.observation = std::nan("");
  VfeConfig cfg;
  cfg.target = {24.0};
  try {
    UpdateStates({1.0, 0.0}, {0.1, 14.0}, ctx, cfg, p);
    FAIL() << "expected NumericalFailure";
  } catch (const NumericalFailure& e) {
    EXPECT_EQ(e.iteration(), 0);
  }
}

TEST(UpdateStates, MeansStayNonNegative) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    oracle::VfeCase c = oracle::RandomVfeCase(rng);
    c.ctx.prior = {0.0, 0.0};
    c.ctx.observation -= 3.0;  // push the inference toward negative gains
    const StateUpdate s = UpdateStates(c.belief, c.action, c.ctx, c.cfg, c.params);
    EXPECT_GE(s.belief.occupancy, 0.0);
    EXPECT_GE(s.belief.infiltration, 0.0);
  }
}

TEST(UpdateActions, AtTargetUnchanged) {
  const ThermalParams p;
  StepContext ctx = SomeContext();
  const ContinuousBelief b{2.0, 0.01};
  const HvacAction a{0.1, 14.0};
  ctx.target = PredictObservation(b, a, ctx.observation, ctx.ambient, p);
  VfeConfig cfg;
  cfg.target = {ctx.target};
  const ActionUpdate u = UpdateActions(a, b, ctx, cfg, p);
  EXPECT_EQ(u.iterations, 0);
  EXPECT_EQ(u.action.airflow, a.airflow);
  EXPECT_EQ(u.action.supply_temp, a.supply_temp);
}

TEST(UpdateActions, TooWarmIncreasesCoolAirflow) {
  const ThermalParams p;
  StepContext ctx = SomeContext();
  const ContinuousBelief b{2.0, 0.01};
  const HvacAction a{0.1, 14.0};  // supply below the zone
  ctx.target = PredictObservation(b, a, ctx.observation, ctx.ambient, p) - 0.5;
  VfeConfig cfg;
  cfg.target = {ctx.target};
  cfg.max_iters = 1;
  EXPECT_LT(VfeGrad(b, a, ctx, cfg, p).airflow, 0.0);
  EXPECT_GT(UpdateActions(a, b, ctx, cfg, p).action.airflow, a.airflow);
}

TEST(UpdateActions, UnboundedDemandHitsAirflowCap) {
  const ThermalParams p;
  StepContext ctx = SomeContext();
  ctx.target = -100.0;
  VfeConfig cfg;
  cfg.target = {ctx.target};
  cfg.max_iters = 500;
  const ActionUpdate u = UpdateActions({0.1, 14.0}, {2.0, 0.01}, ctx, cfg, p);
  EXPECT_EQ(u.action.airflow, 0.3);
  EXPECT_EQ(u.action.supply_temp, 10.0);
}

TEST(UpdateActions, AlwaysWithinBounds) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> wild(-200.0, 200.0);
  for (int trial = 0; trial < 300; ++trial) {
    oracle::VfeCase c = oracle::RandomVfeCase(rng);
    c.ctx.target = wild(rng);
    c.cfg.zeta_airflow = 0.1;
    c.cfg.zeta_supply = 5.0;
    const ActionUpdate u = UpdateActions(c.action, c.belief, c.ctx, c.cfg, c.params);
    EXPECT_TRUE(u.action.InBounds());
  }
}

TEST(AgentStep, DoesNotIncreaseVfe) {
  std::mt19937_64 rng(41);
  const ThermalParams p;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    // Noiseless readings generated by the true zone, true states as priors.
    const ZoneTruth prev{22.0 + 6.0 * u(rng), 4.0 * u(rng), 0.04 * u(rng)};
    const HvacAction prev_action{0.3 * u(rng), 10.0 + 15.0 * u(rng)};
    StepContext ctx;
    ctx.previous_observation = prev.temperature;
    ctx.previous_action = prev_action;
    ctx.previous_ambient = 24.0 + 10.0 * u(rng);
    ctx.observation = StepTemperature(prev, prev_action, ctx.previous_ambient, p);
    ctx.ambient = ctx.previous_ambient;
    ctx.target = 23.0 + 2.0 * u(rng);
    ctx.prior = {prev.occupancy, prev.infiltration};
    VfeConfig cfg;
    cfg.target = {ctx.target};
    const ContinuousBelief start{4.0 * u(rng), 0.04 * u(rng)};
    const AgentStepResult r = AgentStep(start, prev_action, ctx, cfg, p);
    EXPECT_LE(r.diagnostics.vfe, r.diagnostics.vfe_before);
  }
}

TEST(Anchoring, TightPriorPinsMeans) {
  const ThermalParams p;
  StepContext ctx = SomeContext();
  ctx.observation += 0.5;  // likelihood pulls away from the prior
  ContinuousBelief b{4.5, 0.04, 1e-6, 1e-6};
  VfeConfig cfg;
  cfg.target = {ctx.target};
  // A fixed-step descent is only stable for steps below the curvature.
  cfg.eta_occupancy = 1e-12;
  cfg.eta_infiltration = 1e-12;
  cfg.max_iters = 200;
  const StateUpdate s = UpdateStates(b, {0.1, 14.0}, ctx, cfg, p);
  EXPECT_LT(std::abs(s.belief.occupancy - ctx.prior.occupancy), 1e-3);
  EXPECT_LT(std::abs(s.belief.infiltration - ctx.prior.infiltration), 1e-3);
}

TEST(Anchoring, SharpSensorRecoversOccupancy) {
  const ThermalParams p;
  const ZoneTruth prev{25.0, 3.0, 0.01};
  StepContext ctx;
  ctx.previous_observation = prev.temperature;
  ctx.previous_action = {0.1, 14.0};
  ctx.previous_ambient = 30.0;
  ctx.observation = StepTemperature(prev, ctx.previous_action, 30.0, p);
  ctx.ambient = 30.0;
  ctx.target = 24.0;
  ctx.prior = {0.0, prev.infiltration};
  VfeConfig cfg;
  cfg.sensor_std = 1e-3;
  cfg.preference_std = 1e3;
  cfg.target = {ctx.target};
  cfg.eta_occupancy = 0.004;
  cfg.eta_infiltration = 1e-12;  // infiltration pinned at its true value
  cfg.max_iters = 2000;
  cfg.grad_tol = 1e-9;
  const ContinuousBelief b{0.0, prev.infiltration, 2.0, 1e-3};
  const StateUpdate s = UpdateStates(b, {0.1, 14.0}, ctx, cfg, p);
  EXPECT_NEAR(s.belief.occupancy, prev.occupancy, 0.1);
}

TEST(PriorModel, Ar1BlendsPreviousBelief) {
  const PriorModel m(PriorModel::Mode::kAr1, {{2.0, 0.0}}, 0.5, 0.25);
  ContinuousBelief prev{4.0, 0.04};
  const HiddenStateMeans at = m.At(0, prev);
  EXPECT_DOUBLE_EQ(at.occupancy, 3.0);
  EXPECT_DOUBLE_EQ(at.infiltration, 0.01);
  EXPECT_THROW(PriorModel(PriorModel::Mode::kAr1, {{0.0, 0.0}}, 1.5, 0.0), ParameterError);
}

TEST(BuildingAgent, StepAttachesStepIndexToFailures) {
  VfeConfig cfg;
  cfg.target = std::vector<double>(10, 24.0);
  BuildingAgent agent(ThermalParams{}, cfg, PriorModel(PriorModel::Mode::kSchedule, {{0, 0}}),
                      ContinuousBelief{}, HvacAction{});
  agent.Step(0, 25.0, 30.0);
  try {
    agent.Step(1, std::nan(""), 30.0);
    FAIL() << "expected NumericalFailure";
  } catch (const NumericalFailure& e) {
    EXPECT_EQ(e.step(), 1);
  }
}

}  // namespace
}  // namespace aifgrid
