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

#ifndef AIFGRID_COMMUNITY_PLANNER_HPP_
#define AIFGRID_COMMUNITY_PLANNER_HPP_

// Rolling-horizon policy selection for the community agent. Policies are
// scored open-loop: beliefs are pushed through B[u] without conditioning on
// hypothetical observations, and each step adds a cost (or risk) term plus
// alpha times the expected likelihood entropy.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "aifgrid/belief_math.hpp"
#include "aifgrid/community_model.hpp"

namespace aifgrid {

enum class EfeMode { kCostAmbiguity, kRiskAmbiguity };
enum class SearchMode { kExhaustive, kBeam };

struct EfeConfig {
  int horizon = 4;
  // Ambiguity is in nats and costs are in dollars per step; 0.01 lets it
  // break near-ties without overriding the cost terms.
  double alpha_amb = 0.01;
  EfeMode mode = EfeMode::kCostAmbiguity;
  SearchMode search = SearchMode::kExhaustive;
  int beam_width = 729;

  void Validate() const;
};

struct CostWeights {
  double lambda_dev = 0.05;  // $/kWh of |residual|
  double lambda_upv = 0.02;  // $/kWh of curtailed PV
  double lambda_bat = 0.01;  // $/kWh of battery throughput
  double sell_ratio = 0.9;   // share of spot price paid for exports

  void Validate() const;
};

struct StateEconomics {
  std::array<double, 3> load_kw{9.0, 5.0, 2.0};       // High, Med, Low
  std::array<double, 3> reduction_kw{0.0, 1.0, 2.0};  // per building
  double trade_block_kw = 5.0;
  double ess_power_kw = 5.0;
  double step_hours = 0.25;

  void Validate() const;
};

// Exogenous inputs for one community step.
struct MarketStep {
  double spot_price = 0.0;  // $/kWh
  double target_kw = 0.0;   // day-ahead plan, positive = import
  double pv_kw = 0.0;       // available PV
};

// Expected quantities and cost terms of one action under one belief.
struct CostBreakdown {
  double demand_kw = 0.0;     // expected building load after reductions + ESS
  double ess_flow_kw = 0.0;   // expected, positive = charging
  double pv_used_kw = 0.0;
  double pv_curtailed_kw = 0.0;
  double spot_buy_kw = 0.0;
  double spot_sell_kw = 0.0;
  double net_load_kw = 0.0;   // real-time net grid draw outside the spot trade
  double residual_kw = 0.0;   // net_load - target
  double spot = 0.0;          // $
  double deviation = 0.0;     // $
  double unused_pv = 0.0;     // $
  double battery = 0.0;       // $

  double total() const { return spot + deviation + unused_pv + battery; }
};

// PV that can be absorbed: local demand, a Sell block, and any export
// committed in the day-ahead plan. The rest is curtailed. Shared by the
// planner's cost model and the physical dispatch.
double UsablePv(double pv_kw, double demand_kw, double sell_kw,
                double target_kw);

CostBreakdown ExpectedCost(const Categorical& belief, const JointAction& action,
                           const MarketStep& market,
                           const CostWeights& weights,
                           const StateEconomics& econ);

// sum_s q(s) H(A[:, s]).
double StepAmbiguity(const Categorical& predicted_belief,
                     const CommunityModel& model);

// KL(A q || preferred observations).
double StepRisk(const Categorical& predicted_belief,
                const CommunityModel& model);

struct PolicyEvaluation {
  std::vector<JointAction> policy;
  double efe = 0.0;
  double expected_cost = 0.0;  // sum of per-step costs
  double risk = 0.0;           // sum of per-step risks (risk mode only)
  double ambiguity = 0.0;      // sum of per-step ambiguities
  std::vector<double> step_cost;
  std::vector<double> step_risk;
  std::vector<double> step_ambiguity;
  std::vector<Categorical> predicted_beliefs;  // after each action
};

// Per-step market context is market[k % market.size()] for k = 0..h-1,
// so a context shorter than the horizon wraps around.
PolicyEvaluation EvaluatePolicy(const Categorical& belief,
                                std::span<const JointAction> policy,
                                std::span<const MarketStep> market,
                                const CommunityModel& model,
                                const EfeConfig& cfg,
                                const CostWeights& weights,
                                const StateEconomics& econ);

struct PlanResult {
  JointAction action;
  PolicyEvaluation evaluation;
  std::int64_t candidates_evaluated = 0;
};

PlanResult Plan(const Categorical& belief, std::span<const MarketStep> market,
                const CommunityModel& model, const EfeConfig& cfg,
                const CostWeights& weights, const StateEconomics& econ);

// Exhaustive search scored at several ambiguity weights in one traversal.
// Element i is the selection for alphas[i]; cfg.alpha_amb and cfg.search
// are ignored.
std::vector<PlanResult> PlanMultiAlpha(const Categorical& belief,
                                       std::span<const MarketStep> market,
                                       const CommunityModel& model,
                                       const EfeConfig& cfg,
                                       std::span<const double> alphas,
                                       const CostWeights& weights,
                                       const StateEconomics& econ);

// Lexicographic rank of a policy: sum_k index(u_k) * 27^(h-1-k).
std::int64_t PolicyIndex(std::span<const JointAction> policy);

}  // namespace aifgrid

#endif  // AIFGRID_COMMUNITY_PLANNER_HPP_
