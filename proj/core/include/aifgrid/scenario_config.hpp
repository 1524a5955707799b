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

#ifndef AIFGRID_SCENARIO_CONFIG_HPP_
#define AIFGRID_SCENARIO_CONFIG_HPP_

// Resolved scenario configuration. The on-disk form is a JSON object with
// sections world, agents, community_model, planner, economics, market,
// profiles and seeds; every key is optional and falls back to the defaults
// below. Unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aifgrid/building_agent.hpp"
#include "aifgrid/community_model.hpp"
#include "aifgrid/community_planner.hpp"
#include "aifgrid/thermal_world.hpp"

namespace aifgrid {

inline constexpr int kBuildingSteps = 288;
inline constexpr int kCommunitySteps = 96;
inline constexpr int kStepsPerInterval = kBuildingSteps / kCommunitySteps;

struct WorldConfig {
  ThermalParams thermal;
  double initial_temp = 26.0;  // C
  double sensor_std = 0.1;     // C
  // Electrical model used to aggregate building power.
  double cop = 3.0;
  double base_load_kw = 2.0;
  double occupant_load_kw = 1.5;
  // Occupancy schedule shift of each building, hours. Its size sets the
  // number of simulated buildings in run-building; the community uses the
  // first two.
  std::vector<double> building_shift_hours{0.0, 1.0};
};

struct AgentConfig {
  // Sensor noise the agent assumes (the world's actual noise is
  // WorldConfig::sensor_std).
  double sensor_std = 0.1;
  double preference_std = 0.5;
  double eta_occupancy = 0.1;
  double eta_infiltration = 2e-4;
  double zeta_airflow = 1e-3;
  double zeta_supply = 0.05;
  int max_iters = 50;
  double grad_tol = 1e-6;
  double occupancy_std = 2.0;
  double infiltration_std = 0.02;
  // Comfort target: day value between day_start_h and day_end_h.
  double target_day = 24.0;
  double target_night = 25.0;
  double day_start_h = 6.0;
  double day_end_h = 22.0;
  double comfort_band = 2.0;  // +/- C
  double warmup_h = 1.0;      // excluded from comfort statistics
  // Prior over hidden states: "schedule" or "ar1".
  std::string prior_mode = "schedule";
  // The nominal occupancy schedule lags the true one by this many steps;
  // the nominal infiltration is zero.
  int prior_delay_steps = 6;
  double ar1_occupancy = 0.5;
  double ar1_infiltration = 0.5;
  HvacAction initial_action{0.0, 13.0};

  VfeConfig ToVfeConfig(std::vector<double> target) const;
};

struct EconomicsConfig {
  CostWeights weights;
  // Relief per building follows what a setpoint offset actually saves in
  // the simulated zones (HVAC is a small share of building power).
  StateEconomics state{.reduction_kw = {0.0, 0.25, 0.5}};
  // Setpoint offsets of the reduction actions and the band they stay in.
  double small_offset = 1.0;
  double big_offset = 2.0;
  double target_min = 22.0;
  double target_max = 26.0;
  // Signal discretization. In "level" mode each building's power is
  // compared with the Med representative load using level_deadband; in
  // "trend" mode with the previous interval using power_deadband.
  std::string building_signal = "level";
  double level_deadband = 0.35;
  double power_deadband = 0.05;
  double flow_deadband = 0.5;
  // Physical battery.
  double ess_capacity_kwh = 5.0;
  double ess_max_power_kw = 20.0;
  double ess_efficiency = 0.9;
  double ess_initial_soc = 0.5;
};

struct MarketConfig {
  // Built-in price curve: base + peak bump centred at peak_hour minus a
  // midday dip, $/kWh.
  double price_base = 0.022;
  double price_peak = 0.015;
  double price_peak_hour = 18.0;
  double price_peak_width_h = 2.5;
  double price_dip = 0.004;
  double price_dip_hour = 13.0;
  double price_dip_width_h = 2.0;
  // Uniform multiplier and extra multiplier of the peak window.
  double price_scale = 1.0;
  double peak_multiplier = 1.0;
  double peak_start_h = 16.0;
  double peak_end_h = 20.0;
  // PV bell between sunrise and sunset.
  double pv_peak_kw = 20.0;
  double pv_peak_hour = 13.0;
  double sunrise_h = 6.0;
  double sunset_h = 20.0;
  // Relative day-ahead forecast error, uniform in [-e, e].
  double da_error = 0.1;
};

struct ProfilePaths {
  // One exogenous profile per building (empty: built-in summer day).
  std::vector<std::filesystem::path> buildings;
  // Columns step,spot_price,pv_forecast_kw,pv_actual_kw[,da_plan_kw].
  std::optional<std::filesystem::path> market;
};

struct SeedConfig {
  std::uint64_t master = 20240601;
};

struct ScenarioConfig {
  WorldConfig world;
  AgentConfig agents;
  CommunityModelParams community_model;
  EfeConfig planner;
  EconomicsConfig economics;
  MarketConfig market;
  ProfilePaths profiles;
  SeedConfig seeds;
};

// Parses JSON text. Relative profile paths resolve against `base_dir`.
// Throws ConfigError listing every offending key.
ScenarioConfig ParseConfig(const std::string& json_text,
                           const std::filesystem::path& base_dir);
// Reads and parses a file. Throws IoError when it cannot be read.
ScenarioConfig LoadConfig(const std::filesystem::path& path);

// Canonical JSON of a resolved config (absolute profile paths).
std::string ConfigToJson(const ScenarioConfig& cfg);

// Price x2 all day and x3 of baseline in the 16:00-20:00 window.
ScenarioConfig ExtremePricing(ScenarioConfig cfg);

// Independent per-component seed derived from the master seed.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream);

}  // namespace aifgrid

#endif  // AIFGRID_SCENARIO_CONFIG_HPP_
