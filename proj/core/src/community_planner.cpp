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
#include <cmath>
#include <limits>
#include <string>

#include "aifgrid/errors.hpp"

namespace aifgrid {
namespace {

// Largest horizon the exhaustive tree accepts (27^5 leaves).
constexpr int kMaxExhaustiveHorizon = 5;

void RequireNonNegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be finite and >= 0");
  }
}

const MarketStep& MarketAt(std::span<const MarketStep> market, int k) {
  return market[static_cast<std::size_t>(k) % market.size()];
}

void CheckInputs(const Categorical& belief, std::span<const MarketStep> market,
                 const EfeConfig& cfg, const CostWeights& weights,
                 const StateEconomics& econ) {
  cfg.Validate();
  weights.Validate();
  econ.Validate();
  if (belief.size() != kNumStates) {
    throw ParameterError("belief must have 36 entries");
  }
  if (market.empty()) throw ParameterError("market context is empty");
}

// Per-step terms of one (belief, action) pair.
struct StepTerms {
  double cost = 0.0;
  double risk = 0.0;
  double ambiguity = 0.0;
};

// Belief-dependent quantities for the 9 distinct (building, storage)
// action pairs and the 27 per-action costs at one tree node.
struct NodeTable {
  std::array<double, kNumActions> cost{};
  std::array<double, 9> ambiguity{};
  std::array<double, 9> risk{};
};

NodeTable Expand(const Categorical& belief, const MarketStep& market,
                 const CommunityModel& model, const CostWeights& weights,
                 const StateEconomics& econ, bool need_risk,
                 std::vector<Categorical>* children) {
  NodeTable t;
  for (int a = 0; a < kNumActions; ++a) {
    t.cost[static_cast<std::size_t>(a)] =
        ExpectedCost(belief, JointAction::FromIndex(a), market, weights, econ)
            .total();
  }
  for (int c = 0; c < 9; ++c) {
    Categorical child =
        PredictBelief(belief, JointAction::FromIndex(c * 3), model);
    t.ambiguity[static_cast<std::size_t>(c)] = StepAmbiguity(child, model);
    if (need_risk) t.risk[static_cast<std::size_t>(c)] = StepRisk(child, model);
    if (children != nullptr) children->push_back(std::move(child));
  }
  return t;
}

struct Best {
  double efe = std::numeric_limits<double>::infinity();
  std::int64_t index = -1;
};

// Exhaustive tree over all 27^h policies. Beliefs depend only on the
// (building, storage) components, so they are computed once per node of
// the 9-ary tree and shared by the three market siblings.
class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const Categorical& belief,
                   std::span<const MarketStep> market,
                   const CommunityModel& model, const EfeConfig& cfg,
                   const CostWeights& weights, const StateEconomics& econ,
                   std::span<const double> alphas)
      : horizon_(cfg.horizon),
        risk_mode_(cfg.mode == EfeMode::kRiskAmbiguity),
        alphas_(alphas.begin(), alphas.end()),
        best_(alphas.size()) {
    tables_.resize(static_cast<std::size_t>(horizon_));
    std::vector<Categorical> level{belief};
    for (int d = 0; d < horizon_; ++d) {
      std::vector<Categorical> next;
      const bool last = d + 1 == horizon_;
      if (!last) next.reserve(level.size() * 9);
      auto& tables = tables_[static_cast<std::size_t>(d)];
      tables.reserve(level.size());
      for (const Categorical& q : level) {
        tables.push_back(Expand(q, MarketAt(market, d), model, weights, econ,
                                risk_mode_, last ? nullptr : &next));
      }
      level = std::move(next);
    }
  }

  void Run() { Visit(0, 0, 0.0, 0.0, 0); }

  std::int64_t leaves() const { return leaves_; }
  const std::vector<Best>& best() const { return best_; }

 private:
  void Visit(int depth, std::size_t node, double term_sum, double amb_sum,
             std::int64_t prefix) {
    const NodeTable& t = tables_[static_cast<std::size_t>(depth)][node];
    const bool leaf = depth + 1 == horizon_;
    for (int a = 0; a < kNumActions; ++a) {
      const std::size_t pair = static_cast<std::size_t>(a / 3);
      const double term =
          term_sum + (risk_mode_ ? t.risk[pair]
                                 : t.cost[static_cast<std::size_t>(a)]);
      const double amb = amb_sum + t.ambiguity[pair];
      const std::int64_t index = prefix * kNumActions + a;
      if (!leaf) {
        Visit(depth + 1, node * 9 + pair, term, amb, index);
        continue;
      }
      ++leaves_;
      for (std::size_t i = 0; i < alphas_.size(); ++i) {
        const double efe = term + alphas_[i] * amb;
        // Strict comparison keeps the lowest index among ties.
        if (efe < best_[i].efe) best_[i] = {efe, index};
      }
    }
  }

  int horizon_;
  bool risk_mode_;
  std::vector<double> alphas_;
  std::vector<std::vector<NodeTable>> tables_;
  std::vector<Best> best_;
  std::int64_t leaves_ = 0;
};

std::vector<JointAction> DecodePolicy(std::int64_t index, int horizon) {
  std::vector<JointAction> policy(static_cast<std::size_t>(horizon));
  for (int k = horizon - 1; k >= 0; --k) {
    policy[static_cast<std::size_t>(k)] =
        JointAction::FromIndex(static_cast<int>(index % kNumActions));
    index /= kNumActions;
  }
  return policy;
}

PlanResult Finish(std::int64_t index, std::int64_t candidates,
                  const Categorical& belief,
                  std::span<const MarketStep> market,
                  const CommunityModel& model, const EfeConfig& cfg,
                  const CostWeights& weights, const StateEconomics& econ) {
  if (index < 0) {
    throw NumericalFailure("community-planner", 0,
                           "no policy with a finite expected free energy");
  }
  PlanResult r;
  const std::vector<JointAction> policy = DecodePolicy(index, cfg.horizon);
  r.evaluation =
      EvaluatePolicy(belief, policy, market, model, cfg, weights, econ);
  r.action = policy.front();
  r.candidates_evaluated = candidates;
  return r;
}

struct BeamEntry {
  std::int64_t index;
  double term_sum;
  double amb_sum;
  double score;
  Categorical belief;
};

PlanResult BeamPlan(const Categorical& belief,
                    std::span<const MarketStep> market,
                    const CommunityModel& model, const EfeConfig& cfg,
                    const CostWeights& weights, const StateEconomics& econ) {
  const bool risk_mode = cfg.mode == EfeMode::kRiskAmbiguity;
  std::vector<BeamEntry> beam{{0, 0.0, 0.0, 0.0, belief}};
  std::int64_t candidates = 0;
  Best best;
  for (int d = 0; d < cfg.horizon; ++d) {
    const bool last = d + 1 == cfg.horizon;
    std::vector<BeamEntry> next;
    for (const BeamEntry& e : beam) {
      std::vector<Categorical> children;
      const NodeTable t = Expand(e.belief, MarketAt(market, d), model,
                                 weights, econ, risk_mode,
                                 last ? nullptr : &children);
      for (int a = 0; a < kNumActions; ++a) {
        const std::size_t pair = static_cast<std::size_t>(a / 3);
        const double term =
            e.term_sum + (risk_mode ? t.risk[pair]
                                    : t.cost[static_cast<std::size_t>(a)]);
        const double amb = e.amb_sum + t.ambiguity[pair];
        const double score = term + cfg.alpha_amb * amb;
        const std::int64_t index = e.index * kNumActions + a;
        if (last) {
          ++candidates;
          if (score < best.efe ||
              (score == best.efe && index < best.index)) {
            best = {score, index};
          }
        } else {
          next.push_back({index, term, amb, score, children[pair]});
        }
      }
    }
    if (last) break;
    const auto by_score = [](const BeamEntry& x, const BeamEntry& y) {
      return x.score < y.score || (x.score == y.score && x.index < y.index);
    };
    const std::size_t width = static_cast<std::size_t>(cfg.beam_width);
    if (next.size() > width) {
      std::partial_sort(next.begin(), next.begin() + static_cast<long>(width),
                        next.end(), by_score);
      next.erase(next.begin() + static_cast<long>(width), next.end());
    }
    beam = std::move(next);
  }
  return Finish(best.index, candidates, belief, market, model, cfg, weights,
                econ);
}

}  // namespace

void EfeConfig::Validate() const {
  if (horizon < 1) throw ParameterError("planner horizon must be >= 1");
  RequireNonNegative(alpha_amb, "alpha_amb");
  if (beam_width < 1) throw ParameterError("beam_width must be >= 1");
  if (search == SearchMode::kExhaustive && horizon > kMaxExhaustiveHorizon) {
    throw ParameterError("exhaustive search supports horizon <= " +
                         std::to_string(kMaxExhaustiveHorizon));
  }
}

void CostWeights::Validate() const {
  RequireNonNegative(lambda_dev, "lambda_dev");
  RequireNonNegative(lambda_upv, "lambda_upv");
  RequireNonNegative(lambda_bat, "lambda_bat");
  RequireNonNegative(sell_ratio, "sell_ratio");
  if (sell_ratio > 1.0) throw ParameterError("sell_ratio must be <= 1");
}

void StateEconomics::Validate() const {
  for (double v : load_kw) RequireNonNegative(v, "load_kw");
  for (double v : reduction_kw) RequireNonNegative(v, "reduction_kw");
  if (!(load_kw[0] > load_kw[1] && load_kw[1] > load_kw[2])) {
    throw ParameterError("load_kw must be strictly decreasing High > Med > Low");
  }
  RequireNonNegative(trade_block_kw, "trade_block_kw");
  RequireNonNegative(ess_power_kw, "ess_power_kw");
  if (!(step_hours > 0.0) || !std::isfinite(step_hours)) {
    throw ParameterError("step_hours must be > 0");
  }
}

double UsablePv(double pv_kw, double demand_kw, double sell_kw,
                double target_kw) {
  const double sink =
      std::max(0.0, demand_kw + sell_kw + std::max(0.0, -target_kw));
  return std::min(std::max(pv_kw, 0.0), sink);
}

CostBreakdown ExpectedCost(const Categorical& belief, const JointAction& action,
                           const MarketStep& market,
                           const CostWeights& weights,
                           const StateEconomics& econ) {
  if (belief.size() != kNumStates) {
    throw ParameterError("belief must have 36 entries");
  }
  double load = 0.0;
  double p_empty = 0.0;
  double p_full = 0.0;
  for (int s = 0; s < kNumStates; ++s) {
    const JointState js = JointState::FromIndex(s);
    const double q = belief[s];
    load += q * (econ.load_kw[static_cast<std::size_t>(js.b1)] +
                 econ.load_kw[static_cast<std::size_t>(js.b2)]);
    if (js.ess == SocLevel::kEmpty) p_empty += q;
    if (js.ess == SocLevel::kFull) p_full += q;
  }

  CostBreakdown c;
  switch (action.storage) {
    case StorageAction::kCharge:
      c.ess_flow_kw = econ.ess_power_kw * (1.0 - p_full);
      break;
    case StorageAction::kDischarge:
      c.ess_flow_kw = -econ.ess_power_kw * (1.0 - p_empty);
      break;
    case StorageAction::kHold:
      break;
  }
  const double reduction =
      2.0 * econ.reduction_kw[static_cast<std::size_t>(action.building)];
  c.demand_kw = std::max(0.0, load - reduction) + c.ess_flow_kw;
  if (action.market == MarketAction::kBuy) c.spot_buy_kw = econ.trade_block_kw;
  if (action.market == MarketAction::kSell) {
    c.spot_sell_kw = econ.trade_block_kw;
  }
  c.pv_used_kw =
      UsablePv(market.pv_kw, c.demand_kw, c.spot_sell_kw, market.target_kw);
  c.pv_curtailed_kw = std::max(market.pv_kw, 0.0) - c.pv_used_kw;
  c.net_load_kw =
      c.demand_kw - c.pv_used_kw - c.spot_buy_kw + c.spot_sell_kw;
  c.residual_kw = c.net_load_kw - market.target_kw;

  const double h = econ.step_hours;
  c.spot = market.spot_price * c.spot_buy_kw * h -
           weights.sell_ratio * market.spot_price * c.spot_sell_kw * h;
  c.deviation = weights.lambda_dev * std::abs(c.residual_kw) * h;
  c.unused_pv = weights.lambda_upv * c.pv_curtailed_kw * h;
  c.battery = weights.lambda_bat * std::abs(c.ess_flow_kw) * h;
  return c;
}

double StepAmbiguity(const Categorical& predicted_belief,
                     const CommunityModel& model) {
  return predicted_belief.vector().dot(model.column_entropy());
}

double StepRisk(const Categorical& predicted_belief,
                const CommunityModel& model) {
  const Categorical outcomes = Categorical::FromVector(
      model.likelihood().matrix() * predicted_belief.vector());
  return KlDivergence(outcomes, model.preferred_observations());
}

PolicyEvaluation EvaluatePolicy(const Categorical& belief,
                                std::span<const JointAction> policy,
                                std::span<const MarketStep> market,
                                const CommunityModel& model,
                                const EfeConfig& cfg,
                                const CostWeights& weights,
                                const StateEconomics& econ) {
  CheckInputs(belief, market, cfg, weights, econ);
  if (static_cast<int>(policy.size()) != cfg.horizon) {
    throw ParameterError("policy length must equal the planning horizon");
  }
  PolicyEvaluation ev;
  ev.policy.assign(policy.begin(), policy.end());
  Categorical q = belief;
  for (int k = 0; k < cfg.horizon; ++k) {
    const JointAction& u = policy[static_cast<std::size_t>(k)];
    const double cost =
        ExpectedCost(q, u, MarketAt(market, k), weights, econ).total();
    Categorical next = PredictBelief(q, u, model);
    const double amb = StepAmbiguity(next, model);
    const double risk =
        cfg.mode == EfeMode::kRiskAmbiguity ? StepRisk(next, model) : 0.0;
    ev.step_cost.push_back(cost);
    ev.step_risk.push_back(risk);
    ev.step_ambiguity.push_back(amb);
    ev.expected_cost += cost;
    ev.risk += risk;
    ev.ambiguity += amb;
    ev.predicted_beliefs.push_back(next);
    q = std::move(next);
  }
  const double term =
      cfg.mode == EfeMode::kRiskAmbiguity ? ev.risk : ev.expected_cost;
  ev.efe = term + cfg.alpha_amb * ev.ambiguity;
  return ev;
}

PlanResult Plan(const Categorical& belief, std::span<const MarketStep> market,
                const CommunityModel& model, const EfeConfig& cfg,
                const CostWeights& weights, const StateEconomics& econ) {
  CheckInputs(belief, market, cfg, weights, econ);
  if (cfg.search == SearchMode::kBeam) {
    return BeamPlan(belief, market, model, cfg, weights, econ);
  }
  const double alpha = cfg.alpha_amb;
  ExhaustiveSearch search(belief, market, model, cfg, weights, econ,
                          std::span<const double>(&alpha, 1));
  search.Run();
  return Finish(search.best().front().index, search.leaves(), belief, market,
                model, cfg, weights, econ);
}

std::vector<PlanResult> PlanMultiAlpha(const Categorical& belief,
                                       std::span<const MarketStep> market,
                                       const CommunityModel& model,
                                       const EfeConfig& cfg,
                                       std::span<const double> alphas,
                                       const CostWeights& weights,
                                       const StateEconomics& econ) {
  EfeConfig base = cfg;
  base.search = SearchMode::kExhaustive;
  CheckInputs(belief, market, base, weights, econ);
  for (double a : alphas) RequireNonNegative(a, "alpha");
  ExhaustiveSearch search(belief, market, model, base, weights, econ, alphas);
  search.Run();
  std::vector<PlanResult> out;
  out.reserve(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    EfeConfig c = base;
    c.alpha_amb = alphas[i];
    out.push_back(Finish(search.best()[i].index, search.leaves(), belief,
                         market, model, c, weights, econ));
  }
  return out;
}

std::int64_t PolicyIndex(std::span<const JointAction> policy) {
  std::int64_t index = 0;
  for (const JointAction& u : policy) index = index * kNumActions + u.index();
  return index;
}

}  // namespace aifgrid
