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

#ifndef AIFGRID_BUILDING_AGENT_HPP_
#define AIFGRID_BUILDING_AGENT_HPP_

// Continuous free-energy agent for one thermal zone. It holds Gaussian
// beliefs over occupancy and infiltration (fixed prior widths) and descends
// the preference-augmented free energy
//
//   F = (phi - T_hat)^2 / 2 sz^2          accuracy: current observation vs
//                                          reconstruction from last step
//     + (rho - phi_hat)^2 / 2 sr^2        preference: predicted next
//                                          observation vs target
//     + sum_i (mu_i - prior_i)^2 / 2 sw_i^2
//
// with respect to the belief means and then the HVAC action.

#include <optional>
#include <vector>

#include "aifgrid/thermal_world.hpp"

namespace aifgrid {

struct HiddenStateMeans {
  double occupancy = 0.0;     // persons
  double infiltration = 0.0;  // kg/s
};

struct ContinuousBelief {
  double occupancy = 0.0;        // mu_occ, persons
  double infiltration = 0.0;     // mu_inf, kg/s
  double occupancy_std = 2.0;    // prior width, persons
  double infiltration_std = 0.02;  // prior width, kg/s

  HiddenStateMeans means() const { return {occupancy, infiltration}; }
  void Validate() const;
};

// Source of the prior means at each step. In kSchedule mode the prior is the
// schedule entry. In kAr1 mode it is c * previous posterior + (1 - c) *
// schedule entry, per hidden state.
class PriorModel {
 public:
  enum class Mode { kSchedule, kAr1 };

  PriorModel() = default;
  PriorModel(Mode mode, std::vector<HiddenStateMeans> schedule,
             double ar1_occupancy = 0.0, double ar1_infiltration = 0.0);

  HiddenStateMeans At(int step, const ContinuousBelief& previous) const;
  Mode mode() const { return mode_; }
  int steps() const { return static_cast<int>(schedule_.size()); }
  const std::vector<HiddenStateMeans>& schedule() const { return schedule_; }

 private:
  Mode mode_ = Mode::kSchedule;
  std::vector<HiddenStateMeans> schedule_;
  double ar1_occupancy_ = 0.0;
  double ar1_infiltration_ = 0.0;
};

struct VfeConfig {
  double sensor_std = 0.1;      // sigma_z, C
  double preference_std = 0.5;  // sigma_rho, C
  std::vector<double> target;   // rho(t), C
  double eta_occupancy = 0.1;
  double eta_infiltration = 2e-4;
  double zeta_airflow = 1e-3;
  double zeta_supply = 0.05;
  int max_iters = 50;
  double grad_tol = 1e-6;

  void Validate() const;
  // Target for step `step`, clamped to the series ends.
  double TargetAt(int step) const;
};

// Inputs of the free energy at one step other than belief and action.
struct StepContext {
  double observation = 0.0;           // phi(t)
  double previous_observation = 0.0;  // phi(t-1)
  HvacAction previous_action;         // a(t-1)
  double previous_ambient = 0.0;      // T_amb(t-1)
  double ambient = 0.0;               // T_amb(t)
  double target = 0.0;                // rho for the next observation
  HiddenStateMeans prior;
  // False on the first step of a run: no reconstruction is possible, so the
  // accuracy term is dropped.
  bool has_history = true;
};

// Eq. 4 at the belief means: mean prediction of the next temperature.
double PredictObservation(const ContinuousBelief& belief, const HvacAction& action,
                          double current_temp, double ambient,
                          const ThermalParams& params);

// Belief-conditioned reconstruction of the current observation from the
// previous observation, action and ambient.
double ReconstructObservation(const ContinuousBelief& belief, const StepContext& ctx,
                              const ThermalParams& params);

struct VfeTerms {
  double accuracy = 0.0;
  double preference = 0.0;
  double complexity = 0.0;
  double total() const { return accuracy + preference + complexity; }
};

VfeTerms VfeBreakdown(const ContinuousBelief& belief, const HvacAction& action,
                      const StepContext& ctx, const VfeConfig& cfg,
                      const ThermalParams& params);
double Vfe(const ContinuousBelief& belief, const HvacAction& action,
           const StepContext& ctx, const VfeConfig& cfg, const ThermalParams& params);

struct VfeGradient {
  double occupancy = 0.0;
  double infiltration = 0.0;
  double airflow = 0.0;
  double supply_temp = 0.0;
};

// Analytic partial derivatives of Vfe().
VfeGradient VfeGrad(const ContinuousBelief& belief, const HvacAction& action,
                    const StepContext& ctx, const VfeConfig& cfg,
                    const ThermalParams& params);

struct StateUpdate {
  ContinuousBelief belief;
  int iterations = 0;
  double grad_norm = 0.0;  // projected inf-norm at the returned belief
};

// Projected gradient descent on the belief means (clamped at zero). Throws
// NumericalFailure on a non-finite gradient.
StateUpdate UpdateStates(const ContinuousBelief& belief, const HvacAction& action,
                         const StepContext& ctx, const VfeConfig& cfg,
                         const ThermalParams& params);

struct ActionUpdate {
  HvacAction action;
  int iterations = 0;
  double grad_norm = 0.0;
};

// Projected gradient descent on the HVAC action within its bounds.
ActionUpdate UpdateActions(const HvacAction& action, const ContinuousBelief& belief,
                           const StepContext& ctx, const VfeConfig& cfg,
                           const ThermalParams& params);

struct AgentDiagnostics {
  double vfe_before = 0.0;
  double vfe = 0.0;
  int state_iterations = 0;
  int action_iterations = 0;
  double state_grad_norm = 0.0;
  double action_grad_norm = 0.0;
};

struct AgentStepResult {
  ContinuousBelief belief;
  HvacAction action;
  AgentDiagnostics diagnostics;
};

// States first, then actions.
AgentStepResult AgentStep(const ContinuousBelief& belief, const HvacAction& action,
                          const StepContext& ctx, const VfeConfig& cfg,
                          const ThermalParams& params);

// Sequential wrapper that carries the previous observation, action and
// ambient between steps.
class BuildingAgent {
 public:
  BuildingAgent(ThermalParams params, VfeConfig cfg, PriorModel prior,
                ContinuousBelief initial_belief, HvacAction initial_action);

  // `target` overrides cfg.TargetAt(step + 1) when set.
  AgentStepResult Step(int step, double observation, double ambient,
                       std::optional<double> target = std::nullopt);

  const ContinuousBelief& belief() const { return belief_; }
  const HvacAction& action() const { return action_; }
  const VfeConfig& config() const { return cfg_; }

 private:
  ThermalParams params_;
  VfeConfig cfg_;
  PriorModel prior_;
  ContinuousBelief belief_;
  HvacAction action_;
  bool has_history_ = false;
  double previous_observation_ = 0.0;
  double previous_ambient_ = 0.0;
};

}  // namespace aifgrid

#endif  // AIFGRID_BUILDING_AGENT_HPP_
