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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "aifgrid/csv.hpp"
#include "aifgrid/errors.hpp"
#include "aifgrid/scenario.hpp"

namespace aifgrid {
namespace {

constexpr double kIntervalHours = 24.0 / kCommunitySteps;

bool InWindow(double hour, double start, double end) {
  return hour >= start && hour < end;
}

void RequireSeries(const std::vector<double>& v, const char* name,
                   bool non_negative) {
  if (static_cast<int>(v.size()) != kCommunitySteps) {
    throw ParameterError(std::string(name) + " must have 96 entries");
  }
  for (double x : v) {
    if (!std::isfinite(x) || (non_negative && x < 0.0)) {
      throw ParameterError(std::string(name) + " has an invalid entry");
    }
  }
}

}  // namespace

PowerSignal DiscretizeBuildingSignal(double power_now, double power_prev,
                                     const SignalDiscretizer& d) {
  if (power_prev == 0.0) {
    if (power_now > d.flow_deadband) return PowerSignal::kUp;
    if (power_now < -d.flow_deadband) return PowerSignal::kDown;
    return PowerSignal::kSame;
  }
  if (power_now > power_prev * (1.0 + d.power_deadband)) {
    return PowerSignal::kUp;
  }
  if (power_now < power_prev * (1.0 - d.power_deadband)) {
    return PowerSignal::kDown;
  }
  return PowerSignal::kSame;
}

FlowSignal DiscretizeFlow(double net_grid_kw, const SignalDiscretizer& d) {
  if (net_grid_kw > d.flow_deadband) return FlowSignal::kImport;
  if (net_grid_kw < -d.flow_deadband) return FlowSignal::kExport;
  return FlowSignal::kNeutral;
}

double ApplyReduction(BuildingAction u, double base_target,
                      const ReductionOffsets& offsets) {
  double target = base_target;
  if (u == BuildingAction::kSmallReduction) target += offsets.small;
  if (u == BuildingAction::kBigReduction) target += offsets.big;
  if (u == BuildingAction::kNoChange) return target;
  // Offsets never move the setpoint out of the band, nor below the base.
  return std::max(base_target,
                  std::clamp(target, offsets.min_target, offsets.max_target));
}

void EssPhysical::Validate() const {
  if (!(capacity_kwh > 0.0) || !(max_power_kw > 0.0)) {
    throw ParameterError("battery capacity and power must be > 0");
  }
  if (!(soc >= 0.0 && soc <= 1.0)) {
    throw ParameterError("battery SoC must be in [0, 1]");
  }
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw ParameterError("battery efficiency must be in (0, 1]");
  }
}

EssStep StepEss(const EssPhysical& ess, StorageAction u, double block_kw,
                double dt_s) {
  ess.Validate();
  if (!(block_kw >= 0.0) || !(dt_s > 0.0)) {
    throw ParameterError("battery block must be >= 0 and dt > 0");
  }
  const double hours = dt_s / 3600.0;
  const double stored = ess.soc * ess.capacity_kwh;
  EssStep out{ess, 0.0};
  if (u == StorageAction::kCharge) {
    const double headroom = ess.capacity_kwh - stored;
    const double p = std::min({block_kw, ess.max_power_kw,
                               headroom / (ess.efficiency * hours)});
    out.flow_kw = std::max(p, 0.0);
    out.ess.soc = (stored + out.flow_kw * hours * ess.efficiency) /
                  ess.capacity_kwh;
  } else if (u == StorageAction::kDischarge) {
    const double p = std::min({block_kw, ess.max_power_kw, stored / hours});
    out.flow_kw = -std::max(p, 0.0);
    out.ess.soc = (stored + out.flow_kw * hours) / ess.capacity_kwh;
  }
  out.ess.soc = std::clamp(out.ess.soc, 0.0, 1.0);
  return out;
}

SocLevel SocToLevel(double soc) {
  if (soc < 0.125) return SocLevel::kEmpty;
  if (soc < 0.5) return SocLevel::kLow;
  if (soc <= 0.875) return SocLevel::kHigh;
  return SocLevel::kFull;
}

double BuildingPower(const HvacAction& action, double zone_temp,
                     double occupancy, const WorldConfig& world) {
  const double hvac_w = action.airflow * world.thermal.specific_heat *
                        std::abs(action.supply_temp - zone_temp) / world.cop;
  return world.base_load_kw + world.occupant_load_kw * occupancy +
         hvac_w / 1000.0;
}

std::vector<MarketStep> MarketProfile::Steps() const {
  std::vector<MarketStep> out(spot_price.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = {spot_price[k], da_plan[k], pv_actual[k]};
  }
  return out;
}

void MarketProfile::Validate() const {
  RequireSeries(spot_price, "spot_price", true);
  RequireSeries(da_plan, "da_plan", false);
  RequireSeries(pv_forecast, "pv_forecast", true);
  RequireSeries(pv_actual, "pv_actual", true);
}

double BuiltInPrice(double hour, const MarketConfig& m) {
  const auto bump = [hour](double centre, double width) {
    const double z = (hour - centre) / width;
    return std::exp(-z * z);
  };
  return m.price_base + m.price_peak * bump(m.price_peak_hour,
                                            m.price_peak_width_h) -
         m.price_dip * bump(m.price_dip_hour, m.price_dip_width_h);
}

double BuiltInPv(double hour, const MarketConfig& m) {
  if (hour <= m.sunrise_h || hour >= m.sunset_h) return 0.0;
  const double x = hour <= m.pv_peak_hour
                       ? (hour - m.sunrise_h) / (m.pv_peak_hour - m.sunrise_h)
                       : (m.sunset_h - hour) / (m.sunset_h - m.pv_peak_hour);
  const double s = std::sin(0.5 * std::numbers::pi * x);
  return m.pv_peak_kw * s * s;
}

std::vector<double> BaseTargets(const AgentConfig& agents, int steps) {
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    const double hour = 24.0 * k / steps;
    out[static_cast<std::size_t>(k)] =
        InWindow(hour, agents.day_start_h, agents.day_end_h)
            ? agents.target_day
            : agents.target_night;
  }
  return out;
}

ExogenousProfile BuildingProfile(const ScenarioConfig& cfg, int b) {
  const auto& shifts = cfg.world.building_shift_hours;
  if (b < 0 || b >= static_cast<int>(shifts.size())) {
    throw ParameterError("building index out of range");
  }
  ExogenousProfile p =
      cfg.profiles.buildings.empty()
          ? ExogenousProfile::SummerDay(kBuildingSteps,
                                        shifts[static_cast<std::size_t>(b)])
          : ExogenousProfile::LoadCsv(
                cfg.profiles.buildings[static_cast<std::size_t>(b)]);
  if (p.steps() != kBuildingSteps) {
    throw ParameterError("building profile must have 288 rows");
  }
  return p;
}

std::vector<HiddenStateMeans> NominalSchedule(const ExogenousProfile& profile,
                                              int delay_steps) {
  std::vector<HiddenStateMeans> out(static_cast<std::size_t>(profile.steps()));
  const auto occ = profile.occupancy();
  for (int k = 0; k < profile.steps(); ++k) {
    out[static_cast<std::size_t>(k)].occupancy =
        occ[static_cast<std::size_t>(std::max(0, k - delay_steps))];
  }
  return out;
}

std::vector<double> ForecastBuildingLoad(const ScenarioConfig& cfg, int b) {
  const ExogenousProfile profile = BuildingProfile(cfg, b);
  const std::vector<HiddenStateMeans> nominal =
      NominalSchedule(profile, cfg.agents.prior_delay_steps);
  const std::vector<double> targets =
      BaseTargets(cfg.agents, profile.steps());
  const ThermalParams& th = cfg.world.thermal;
  std::vector<double> out(kCommunitySteps, 0.0);
  for (int k = 0; k < profile.steps(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    // Steady-state heat the HVAC must remove (or add) to hold the target.
    const double load_w =
        (th.envelope_ua + nominal[i].infiltration * th.specific_heat) *
            (profile.ambient()[i] - targets[i]) +
        nominal[i].occupancy * th.occupant_gain;
    const double power = cfg.world.base_load_kw +
                         cfg.world.occupant_load_kw * nominal[i].occupancy +
                         std::abs(load_w) / cfg.world.cop / 1000.0;
    out[static_cast<std::size_t>(k / kStepsPerInterval)] +=
        power / kStepsPerInterval;
  }
  return out;
}

MarketProfile BuildMarket(const ScenarioConfig& cfg) {
  const MarketConfig& m = cfg.market;
  MarketProfile mp;
  bool has_plan = false;
  if (cfg.profiles.market) {
    const CsvTable t = ReadCsv(*cfg.profiles.market);
    if (t.rows.size() != static_cast<std::size_t>(kCommunitySteps)) {
      throw ParameterError("market profile must have 96 rows");
    }
    const int price = t.Column("spot_price");
    const int fc = t.Column("pv_forecast_kw");
    const int act = t.Column("pv_actual_kw");
    const auto plan_it =
        std::find(t.header.begin(), t.header.end(), "da_plan_kw");
    has_plan = plan_it != t.header.end();
    const int plan = has_plan ? t.Column("da_plan_kw") : -1;
    for (const auto& row : t.rows) {
      mp.spot_price.push_back(row[static_cast<std::size_t>(price)]);
      mp.pv_forecast.push_back(row[static_cast<std::size_t>(fc)]);
      mp.pv_actual.push_back(row[static_cast<std::size_t>(act)]);
      if (has_plan) mp.da_plan.push_back(row[static_cast<std::size_t>(plan)]);
    }
  } else {
    for (int k = 0; k < kCommunitySteps; ++k) {
      const double mid = (k + 0.5) * kIntervalHours;
      mp.spot_price.push_back(BuiltInPrice(mid, m));
      mp.pv_forecast.push_back(BuiltInPv(mid, m));
    }
    mp.pv_actual = mp.pv_forecast;
  }
  for (int k = 0; k < kCommunitySteps; ++k) {
    const double start = k * kIntervalHours;
    double mult = m.price_scale;
    if (InWindow(start, m.peak_start_h, m.peak_end_h)) {
      mult *= m.peak_multiplier;
    }
    mp.spot_price[static_cast<std::size_t>(k)] *= mult;
  }
  if (!has_plan) {
    const std::vector<double> l1 = ForecastBuildingLoad(cfg, 0);
    const std::vector<double> l2 = ForecastBuildingLoad(cfg, 1);
    std::mt19937_64 rng(DeriveSeed(cfg.seeds.master, 100));
    std::uniform_real_distribution<double> err(-m.da_error, m.da_error);
    for (int k = 0; k < kCommunitySteps; ++k) {
      const auto i = static_cast<std::size_t>(k);
      // Draw unconditionally so the stream does not depend on da_error.
      const double e = m.da_error > 0.0 ? err(rng) : (rng(), 0.0);
      mp.da_plan.push_back(
          std::max(0.0, l1[i] + l2[i] - mp.pv_forecast[i]) * (1.0 + e));
    }
  }
  mp.Validate();
  return mp;
}

}  // namespace aifgrid
