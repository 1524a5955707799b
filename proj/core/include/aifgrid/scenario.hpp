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

#ifndef AIFGRID_SCENARIO_HPP_
#define AIFGRID_SCENARIO_HPP_

// Couples the building and community layers into day-long experiments:
// physical battery, PV and market inputs, signal discretization, the
// setpoint downlink, the full-information baseline and run reports.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "aifgrid/horizon.hpp"
#include "aifgrid/scenario_config.hpp"

namespace aifgrid {

// ---- Physical pieces ------------------------------------------------------

struct SignalDiscretizer {
  double power_deadband = 0.05;  // relative
  double flow_deadband = 0.5;    // kW
};

PowerSignal DiscretizeBuildingSignal(double power_now, double power_prev,
                                     const SignalDiscretizer& d);
FlowSignal DiscretizeFlow(double net_grid_kw, const SignalDiscretizer& d);

struct ReductionOffsets {
  double small = 1.0;
  double big = 2.0;
  double min_target = 22.0;
  double max_target = 26.0;
};

// Cooling-season downlink: raise the setpoint, clamped to the band.
double ApplyReduction(BuildingAction u, double base_target,
                      const ReductionOffsets& offsets);

struct EssPhysical {
  double capacity_kwh = 5.0;
  double max_power_kw = 20.0;
  double soc = 0.5;         // fraction
  double efficiency = 0.9;  // applied on the way in

  void Validate() const;
};

struct EssStep {
  EssPhysical ess;
  double flow_kw = 0.0;  // positive = charging (grid side), negative = supply
};

// Charge draws min(block, max power, headroom / efficiency); discharge
// supplies min(block, max power, stored energy). SoC stays in [0, 1].
EssStep StepEss(const EssPhysical& ess, StorageAction u, double block_kw,
                double dt_s);

// Level of a continuous SoC: Empty below 0.125, Full above 0.875, Low/High
// split at 0.5.
SocLevel SocToLevel(double soc);

// HVAC electrical draw plus occupant-driven plug load, kW.
double BuildingPower(const HvacAction& action, double zone_temp,
                     double occupancy, const WorldConfig& world);

struct MarketProfile {
  std::vector<double> spot_price;   // $/kWh
  std::vector<double> da_plan;      // kW, positive = import
  std::vector<double> pv_forecast;  // kW
  std::vector<double> pv_actual;    // kW

  int steps() const { return static_cast<int>(spot_price.size()); }
  std::vector<MarketStep> Steps() const;
  void Validate() const;
};

double BuiltInPrice(double hour, const MarketConfig& m);
double BuiltInPv(double hour, const MarketConfig& m);

// Built-in or file-backed market inputs with the day-ahead plan generated
// from the nominal load forecast and PV forecast when the file lacks one.
MarketProfile BuildMarket(const ScenarioConfig& cfg);

// Comfort target schedule for one building over `steps` steps.
std::vector<double> BaseTargets(const AgentConfig& agents, int steps);

// Exogenous profile of building `b` (file-backed or built-in).
ExogenousProfile BuildingProfile(const ScenarioConfig& cfg, int b);

// Nominal hidden-state schedule the agent's prior is built from.
std::vector<HiddenStateMeans> NominalSchedule(const ExogenousProfile& profile,
                                              int delay_steps);

// Day-ahead load forecast of one building per community interval, kW.
std::vector<double> ForecastBuildingLoad(const ScenarioConfig& cfg, int b);

// ---- Runs -----------------------------------------------------------------

struct BuildingTraceRow {
  int step = 0;
  double time_h = 0.0;
  double ambient = 0.0;
  double temperature = 0.0;  // true, after the step
  double observation = 0.0;  // sensor reading the agent acted on
  double target = 0.0;
  double true_occupancy = 0.0;
  double inferred_occupancy = 0.0;
  double true_infiltration = 0.0;
  double inferred_infiltration = 0.0;
  double airflow = 0.0;
  double supply_temp = 0.0;
  double power_kw = 0.0;
  double vfe = 0.0;
  int comfort_ok = 1;
};

struct BuildingSummary {
  double comfort_fraction = 0.0;  // share of post-warm-up steps in band
  double occupancy_correlation = 0.0;
  double energy_kwh = 0.0;
  double realized_objective = 0.0;  // sum (rho - T)^2 / 2 sr^2
};

struct BuildingRun {
  std::vector<BuildingTraceRow> trace;
  BuildingSummary summary;
};

struct CommunityTraceRow {
  int step = 0;
  int selected_action_index = 0;
  int u_b = 0;
  int u_ess = 0;
  int u_m = 0;
  double efe = 0.0;
  double expected_cost = 0.0;
  double ambiguity = 0.0;
  std::int64_t candidates = 0;
  double time_h = 0.0;
  double spot_price = 0.0;
  double load_b1_kw = 0.0;
  double load_b2_kw = 0.0;
  double building_load_kw = 0.0;
  double pv_available_kw = 0.0;
  double pv_used_kw = 0.0;
  double pv_curtailed_kw = 0.0;
  double battery_flow_kw = 0.0;  // positive = charging
  double battery_charge_kw = 0.0;
  double battery_discharge_kw = 0.0;
  double soc = 0.0;
  double spot_buy_kw = 0.0;
  double spot_sell_kw = 0.0;
  double da_baseline_kw = 0.0;
  double imbalance_kw = 0.0;  // real-time deviation from the plan
  double balance_residual_kw = 0.0;
  int o_b1 = 1;
  int o_b2 = 1;
  int o_ess = 1;
  int map_state = 0;
  int degenerate_evidence = 0;
  double spot_cost = 0.0;       // $
  double deviation_cost = 0.0;  // $
  double unused_pv_cost = 0.0;  // $
  double battery_cost = 0.0;    // $
  double total_cost = 0.0;      // $
  double deviation_kwh = 0.0;
  double curtailed_kwh = 0.0;
  double throughput_kwh = 0.0;
  double spot_buy_kwh = 0.0;
  double battery_net_discharge_kwh = 0.0;
  // Selected-policy ambiguity at each sweep alpha from this step's belief;
  // empty outside sweeps.
  std::vector<double> sweep_ambiguity;
};

struct CommunityTotals {
  double spot_cost = 0.0;
  double deviation_cost = 0.0;
  double unused_pv_cost = 0.0;
  double battery_cost = 0.0;
  double total_cost = 0.0;
  double deviation_kwh = 0.0;
  double curtailed_kwh = 0.0;
  double throughput_kwh = 0.0;
  double spot_buy_kwh = 0.0;
  double peak_battery_net_discharge_kwh = 0.0;
  double peak_spot_buy_kwh = 0.0;
  double max_balance_residual_kw = 0.0;
  double cumulative_efe = 0.0;
  double cumulative_ambiguity = 0.0;
  int degenerate_evidence_events = 0;
  std::array<int, kNumActions> action_histogram{};
};

struct CommunityRun {
  std::vector<CommunityTraceRow> trace;
  CommunityTotals totals;
  std::vector<BuildingRun> buildings;  // two, 288 rows each
  MarketProfile market;
};

// Single-building closed loop over 288 steps for building index `b`.
BuildingRun RunBuildingDay(const ScenarioConfig& cfg, int b = 0);

// Both layers over 96 community steps. When `sweep_alphas` is non-empty
// each trace row also records the selected-policy ambiguity under every
// listed alpha from that step's belief.
CommunityRun RunCommunityDay(const ScenarioConfig& cfg,
                             std::span<const double> sweep_alphas = {});

// Totals recomputed from trace columns, in trace order.
CommunityTotals SumTrace(const std::vector<CommunityTraceRow>& trace,
                         const MarketConfig& market);

struct SweepEntry {
  double alpha = 0.0;
  CommunityRun run;
  // True when every step's selected ambiguity is non-increasing over the
  // sorted alpha grid (within 1e-12).
  bool ambiguity_monotone = true;
};

std::vector<SweepEntry> SweepAmbiguity(const ScenarioConfig& cfg,
                                       std::span<const double> alphas);

// Pearson correlation; 0 when either series is constant.
double PearsonCorrelation(std::span<const double> x,
                          std::span<const double> y);

// ---- Full-information baseline ------------------------------------------

struct BaselineOptions {
  int max_iters = 100000;  // per start
  double tolerance = 1e-6;
};

struct BaselineSolution {
  std::vector<HvacAction> actions;
  std::vector<double> temperatures;  // T_1..T_N
  double objective = 0.0;
  int best_start = 0;
  int iterations = 0;
  bool converged = false;
};

// Multi-start projected gradient with forward-sensitivity gradients on the
// known dynamics. Independent of OptimizeFullHorizon.
BaselineSolution BaselineFullInformation(const HorizonProblem& problem,
                                         const BaselineOptions& options = {});

// The default day's full-information problem for building `b`.
HorizonProblem DefaultHorizonProblem(const ScenarioConfig& cfg, int b = 0);

// ---- Output ---------------------------------------------------------------

std::string BuildingTraceCsv(const BuildingRun& run);
std::string CommunityTraceCsv(const CommunityRun& run);

}  // namespace aifgrid

#endif  // AIFGRID_SCENARIO_HPP_
