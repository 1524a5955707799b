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

#include "aifgrid/thermal_world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "aifgrid/csv.hpp"
#include "aifgrid/errors.hpp"

namespace aifgrid {
namespace {

constexpr double kWindowFlow = 0.03;   // kg/s
constexpr double kWindowOpen = 14.0;   // h
constexpr double kWindowClose = 15.5;  // h

double WrapHour(double hour) {
  double h = std::fmod(hour, 24.0);
  return h < 0.0 ? h + 24.0 : h;
}

}  // namespace

void ThermalParams::Validate() const {
  if (!(specific_heat > 0.0) || !(capacity > 0.0) || !(envelope_ua > 0.0) ||
      !(occupant_gain > 0.0) || !(dt > 0.0)) {
    throw ParameterError("thermal params: all coefficients must be positive");
  }
}

bool HvacAction::InBounds() const {
  return airflow >= kMinAirflow && airflow <= kMaxAirflow &&
         supply_temp >= kMinSupplyTemp && supply_temp <= kMaxSupplyTemp;
}

HvacAction HvacAction::Clamped() const {
  return {std::clamp(airflow, kMinAirflow, kMaxAirflow),
          std::clamp(supply_temp, kMinSupplyTemp, kMaxSupplyTemp)};
}

ExogenousProfile::ExogenousProfile(std::vector<double> ambient,
                                   std::vector<double> occupancy,
                                   std::vector<double> infiltration)
    : ambient_(std::move(ambient)),
      occupancy_(std::move(occupancy)),
      infiltration_(std::move(infiltration)) {
  if (ambient_.size() != occupancy_.size() || ambient_.size() != infiltration_.size()) {
    throw ParameterError("exogenous profile: series lengths differ");
  }
  if (ambient_.empty()) throw ParameterError("exogenous profile: empty");
  for (std::size_t i = 0; i < ambient_.size(); ++i) {
    if (!std::isfinite(ambient_[i]) || !std::isfinite(occupancy_[i]) ||
        !std::isfinite(infiltration_[i]) || occupancy_[i] < 0.0 ||
        infiltration_[i] < 0.0) {
      throw ParameterError("exogenous profile: invalid row " + std::to_string(i));
    }
  }
}

double SummerDayOccupancy(double hour) {
  const double h = WrapHour(hour);
  if (h < 7.0) return 0.0;
  if (h < 9.0) return 3.0;
  if (h < 17.0) return 1.0;
  if (h < 23.0) return 4.0;
  return 1.0;
}

double SummerDayAmbient(double hour) {
  return 29.0 + 5.0 * std::cos(2.0 * std::numbers::pi * (hour - 15.0) / 24.0);
}

ExogenousProfile ExogenousProfile::SummerDay(int steps, double shift_hours) {
  if (steps <= 0) throw ParameterError("summer day: steps must be positive");
  const double step_hours = 24.0 / steps;
  std::vector<double> ambient(steps), occupancy(steps), infiltration(steps);
  for (int k = 0; k < steps; ++k) {
    const double hour = k * step_hours;
    const double local = WrapHour(hour - shift_hours);
    ambient[k] = SummerDayAmbient(hour);
    occupancy[k] = SummerDayOccupancy(local);
    infiltration[k] = (local >= kWindowOpen && local < kWindowClose) ? kWindowFlow : 0.0;
  }
  return ExogenousProfile(std::move(ambient), std::move(occupancy), std::move(infiltration));
}

ExogenousProfile ExogenousProfile::LoadCsv(const std::filesystem::path& path) {
  const CsvTable table = ReadCsv(path);
  const int c_step = table.Column("step");
  const int c_amb = table.Column("ambient_c");
  const int c_occ = table.Column("occupancy");
  const int c_inf = table.Column("infiltration_kgps");
  std::vector<double> ambient, occupancy, infiltration;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row[c_step] != static_cast<double>(i)) {
      throw ParameterError(path.string() + ": step column must count from 0");
    }
    ambient.push_back(row[c_amb]);
    occupancy.push_back(row[c_occ]);
    infiltration.push_back(row[c_inf]);
  }
  return ExogenousProfile(std::move(ambient), std::move(occupancy), std::move(infiltration));
}

void ExogenousProfile::SaveCsv(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << "step,ambient_c,occupancy,infiltration_kgps\n";
  for (int k = 0; k < steps(); ++k) {
    out << k << ',' << FormatNumber(ambient_[k]) << ',' << FormatNumber(occupancy_[k])
        << ',' << FormatNumber(infiltration_[k]) << '\n';
  }
  WriteFileAtomic(path, out.str());
}

ExogenousRow ExogenousProfile::Row(int step) const {
  return {ambient_.at(step), occupancy_.at(step), infiltration_.at(step)};
}

ExogenousRow ExogenousProfile::TransitionRow(int step) const {
  const int next = std::min(step + 1, steps() - 1);
  return {ambient_.at(step), occupancy_.at(next), infiltration_.at(next)};
}

TemperatureSensor::TemperatureSensor(const SensorModel& model)
    : noise_std_(model.noise_std), rng_(model.seed) {
  if (!(noise_std_ >= 0.0)) throw ParameterError("sensor: noise std must be >= 0");
}

double TemperatureSensor::Observe(const ZoneTruth& state) {
  // Draw even when noiseless so streams stay aligned across configurations.
  const double z = normal_(rng_);
  if (noise_std_ == 0.0) return state.temperature;
  return state.temperature + noise_std_ * z;
}

double StepTemperature(const ZoneTruth& state, const HvacAction& action,
                       double ambient, const ThermalParams& params) {
  const double t = state.temperature;
  const double hvac = action.airflow * params.specific_heat * (action.supply_temp - t);
  const double internal = state.occupancy * params.occupant_gain;
  const double envelope =
      (params.envelope_ua + state.infiltration * params.specific_heat) * (ambient - t);
  return t + params.dt * (hvac + internal + envelope) / params.capacity;
}

ZoneTruth AdvanceWorld(const ZoneTruth& state, const HvacAction& action,
                       const ExogenousRow& row, const ThermalParams& params) {
  ZoneTruth next;
  next.temperature = StepTemperature(state, action, row.ambient, params);
  next.occupancy = row.occupancy;
  next.infiltration = row.infiltration;
  return next;
}

}  // namespace aifgrid
