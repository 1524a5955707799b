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
#include <limits>
#include <sstream>

#include "aifgrid/errors.hpp"

namespace aifgrid {
namespace {

constexpr char kModule[] = "building-agent";

ZoneTruth AsZone(double temperature, const ContinuousBelief& belief) {
  return {temperature, belief.occupancy, belief.infiltration};
}

struct Residuals {
  double accuracy;    // (phi - T_hat) / sz^2
  double preference;  // (rho - phi_hat) / sr^2
};

Residuals WeightedResiduals(const ContinuousBelief& belief, const HvacAction& action,
                            const StepContext& ctx, const VfeConfig& cfg,
                            const ThermalParams& params) {
  Residuals r{0.0, 0.0};
  if (ctx.has_history) {
    r.accuracy = (ctx.observation - ReconstructObservation(belief, ctx, params)) /
                 (cfg.sensor_std * cfg.sensor_std);
  }
  const double predicted =
      PredictObservation(belief, action, ctx.observation, ctx.ambient, params);
  r.preference = (ctx.target - predicted) / (cfg.preference_std * cfg.preference_std);
  return r;
}

// Component of the projected gradient that can still move the iterate.
double Projected(double value, double grad, double lo, double hi) {
  if (value <= lo && grad > 0.0) return 0.0;
  if (value >= hi && grad < 0.0) return 0.0;
  return grad;
}

void CheckFinite(double a, double b, int iteration, const char* what) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    std::ostringstream os;
    os << what << ": non-finite gradient at iteration " << iteration;
    throw NumericalFailure(kModule, iteration, os.str());
  }
}

}  // namespace

void ContinuousBelief::Validate() const {
  if (!(occupancy_std > 0.0) || !(infiltration_std > 0.0)) {
    throw ParameterError("belief: prior stds must be positive");
  }
  if (occupancy < 0.0 || infiltration < 0.0) {
    throw ParameterError("belief: means must be non-negative");
  }
}

PriorModel::PriorModel(Mode mode, std::vector<HiddenStateMeans> schedule,
                       double ar1_occupancy, double ar1_infiltration)
    : mode_(mode),
      schedule_(std::move(schedule)),
      ar1_occupancy_(ar1_occupancy),
      ar1_infiltration_(ar1_infiltration) {
  if (schedule_.empty()) throw ParameterError("prior model: empty schedule");
  auto in_unit = [](double c) { return c >= 0.0 && c <= 1.0; };
  if (!in_unit(ar1_occupancy_) || !in_unit(ar1_infiltration_)) {
    throw ParameterError("prior model: ar1 coefficients must lie in [0, 1]");
  }
}

HiddenStateMeans PriorModel::At(int step, const ContinuousBelief& previous) const {
  const auto& s = schedule_.at(static_cast<std::size_t>(std::clamp(step, 0, steps() - 1)));
  if (mode_ == Mode::kSchedule) return s;
  return {ar1_occupancy_ * previous.occupancy + (1.0 - ar1_occupancy_) * s.occupancy,
          ar1_infiltration_ * previous.infiltration +
              (1.0 - ar1_infiltration_) * s.infiltration};
}

void VfeConfig::Validate() const {
  if (!(sensor_std > 0.0) || !(preference_std > 0.0)) {
    throw ParameterError("vfe config: sigmas must be positive");
  }
  if (!(eta_occupancy > 0.0) || !(eta_infiltration > 0.0) || !(zeta_airflow > 0.0) ||
      !(zeta_supply > 0.0)) {
    throw ParameterError("vfe config: learning rates must be positive");
  }
  if (max_iters < 1) throw ParameterError("vfe config: max_iters must be >= 1");
  if (!(grad_tol >= 0.0)) throw ParameterError("vfe config: grad_tol must be >= 0");
}

double VfeConfig::TargetAt(int step) const {
  if (target.empty()) throw ParameterError("vfe config: empty target series");
  const int last = static_cast<int>(target.size()) - 1;
  return target[static_cast<std::size_t>(std::clamp(step, 0, last))];
}

double PredictObservation(const ContinuousBelief& belief, const HvacAction& action,
                          double current_temp, double ambient,
                          const ThermalParams& params) {
  return StepTemperature(AsZone(current_temp, belief), action, ambient, params);
}

double ReconstructObservation(const ContinuousBelief& belief, const StepContext& ctx,
                              const ThermalParams& params) {
  return StepTemperature(AsZone(ctx.previous_observation, belief), ctx.previous_action,
                         ctx.previous_ambient, params);
}

VfeTerms VfeBreakdown(const ContinuousBelief& belief, const HvacAction& action,
                      const StepContext& ctx, const VfeConfig& cfg,
                      const ThermalParams& params) {
  VfeTerms terms;
  if (ctx.has_history) {
    const double e = ctx.observation - ReconstructObservation(belief, ctx, params);
    terms.accuracy = e * e / (2.0 * cfg.sensor_std * cfg.sensor_std);
  }
  const double p = ctx.target -
                   PredictObservation(belief, action, ctx.observation, ctx.ambient, params);
  terms.preference = p * p / (2.0 * cfg.preference_std * cfg.preference_std);
  const double d_occ = belief.occupancy - ctx.prior.occupancy;
  const double d_inf = belief.infiltration - ctx.prior.infiltration;
  terms.complexity =
      d_occ * d_occ / (2.0 * belief.occupancy_std * belief.occupancy_std) +
      d_inf * d_inf / (2.0 * belief.infiltration_std * belief.infiltration_std);
  return terms;
}

double Vfe(const ContinuousBelief& belief, const HvacAction& action,
           const StepContext& ctx, const VfeConfig& cfg, const ThermalParams& params) {
  return VfeBreakdown(belief, action, ctx, cfg, params).total();
}

VfeGradient VfeGrad(const ContinuousBelief& belief, const HvacAction& action,
                    const StepContext& ctx, const VfeConfig& cfg,
                    const ThermalParams& params) {
  const Residuals r = WeightedResiduals(belief, action, ctx, cfg, params);
  const double k = params.dt / params.capacity;

  // Sensitivities of the reconstruction (previous step) and the prediction
  // (next step) to the belief means.
  const double dthat_occ = k * params.occupant_gain;
  const double dthat_inf =
      k * params.specific_heat * (ctx.previous_ambient - ctx.previous_observation);
  const double dphihat_occ = k * params.occupant_gain;
  const double dphihat_inf = k * params.specific_heat * (ctx.ambient - ctx.observation);
  const double dphihat_airflow =
      k * params.specific_heat * (action.supply_temp - ctx.observation);
  const double dphihat_supply = k * action.airflow * params.specific_heat;

  VfeGradient g;
  g.occupancy = -r.accuracy * dthat_occ - r.preference * dphihat_occ +
                (belief.occupancy - ctx.prior.occupancy) /
                    (belief.occupancy_std * belief.occupancy_std);
  g.infiltration = -r.accuracy * dthat_inf - r.preference * dphihat_inf +
                   (belief.infiltration - ctx.prior.infiltration) /
                       (belief.infiltration_std * belief.infiltration_std);
  g.airflow = -r.preference * dphihat_airflow;
  g.supply_temp = -r.preference * dphihat_supply;
  return g;
}

StateUpdate UpdateStates(const ContinuousBelief& belief, const HvacAction& action,
                         const StepContext& ctx, const VfeConfig& cfg,
                         const ThermalParams& params) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  StateUpdate out{belief, 0, 0.0};
  ContinuousBelief& mu = out.belief;
  for (int it = 0;; ++it) {
    const VfeGradient g = VfeGrad(mu, action, ctx, cfg, params);
    CheckFinite(g.occupancy, g.infiltration, it, "update_states");
    const double p_occ = Projected(mu.occupancy, g.occupancy, 0.0, kInf);
    const double p_inf = Projected(mu.infiltration, g.infiltration, 0.0, kInf);
    out.grad_norm = std::max(std::abs(p_occ), std::abs(p_inf));
    if (out.grad_norm < cfg.grad_tol || it == cfg.max_iters) break;
    mu.occupancy = std::max(0.0, mu.occupancy - cfg.eta_occupancy * g.occupancy);
    mu.infiltration = std::max(0.0, mu.infiltration - cfg.eta_infiltration * g.infiltration);
    out.iterations = it + 1;
  }
  return out;
}

ActionUpdate UpdateActions(const HvacAction& action, const ContinuousBelief& belief,
                           const StepContext& ctx, const VfeConfig& cfg,
                           const ThermalParams& params) {
  ActionUpdate out{action.Clamped(), 0, 0.0};
  HvacAction& a = out.action;
  for (int it = 0;; ++it) {
    const VfeGradient g = VfeGrad(belief, a, ctx, cfg, params);
    CheckFinite(g.airflow, g.supply_temp, it, "update_actions");
    const double p_flow =
        Projected(a.airflow, g.airflow, HvacAction::kMinAirflow, HvacAction::kMaxAirflow);
    const double p_sup = Projected(a.supply_temp, g.supply_temp,
                                   HvacAction::kMinSupplyTemp, HvacAction::kMaxSupplyTemp);
    out.grad_norm = std::max(std::abs(p_flow), std::abs(p_sup));
    if (out.grad_norm < cfg.grad_tol || it == cfg.max_iters) break;
    a = HvacAction{a.airflow - cfg.zeta_airflow * g.airflow,
                   a.supply_temp - cfg.zeta_supply * g.supply_temp}
            .Clamped();
    out.iterations = it + 1;
  }
  return out;
}

AgentStepResult AgentStep(const ContinuousBelief& belief, const HvacAction& action,
                          const StepContext& ctx, const VfeConfig& cfg,
                          const ThermalParams& params) {
  AgentStepResult out;
  out.diagnostics.vfe_before = Vfe(belief, action, ctx, cfg, params);
  const StateUpdate s = UpdateStates(belief, action, ctx, cfg, params);
  const ActionUpdate a = UpdateActions(action, s.belief, ctx, cfg, params);
  out.belief = s.belief;
  out.action = a.action;
  out.diagnostics.vfe = Vfe(out.belief, out.action, ctx, cfg, params);
  out.diagnostics.state_iterations = s.iterations;
  out.diagnostics.action_iterations = a.iterations;
  out.diagnostics.state_grad_norm = s.grad_norm;
  out.diagnostics.action_grad_norm = a.grad_norm;
  return out;
}

BuildingAgent::BuildingAgent(ThermalParams params, VfeConfig cfg, PriorModel prior,
                             ContinuousBelief initial_belief, HvacAction initial_action)
    : params_(params),
      cfg_(std::move(cfg)),
      prior_(std::move(prior)),
      belief_(initial_belief),
      action_(initial_action.Clamped()) {
  params_.Validate();
  cfg_.Validate();
  belief_.Validate();
}

AgentStepResult BuildingAgent::Step(int step, double observation, double ambient,
                                    std::optional<double> target) {
  StepContext ctx;
  ctx.observation = observation;
  ctx.previous_observation = has_history_ ? previous_observation_ : observation;
  ctx.previous_action = action_;
  ctx.previous_ambient = has_history_ ? previous_ambient_ : ambient;
  ctx.ambient = ambient;
  ctx.target = target.value_or(cfg_.TargetAt(step + 1));
  ctx.prior = prior_.At(step, belief_);
  ctx.has_history = has_history_;

  AgentStepResult result;
  try {
    result = AgentStep(belief_, action_, ctx, cfg_, params_);
  } catch (const NumericalFailure& e) {
    throw e.AtStep(step);
  }
  belief_ = result.belief;
  action_ = result.action;
  previous_observation_ = observation;
  previous_ambient_ = ambient;
  has_history_ = true;
  return result;
}

}  // namespace aifgrid
