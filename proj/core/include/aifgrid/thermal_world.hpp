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

#ifndef AIFGRID_THERMAL_WORLD_HPP_
#define AIFGRID_THERMAL_WORLD_HPP_

// Ground-truth single-zone thermal process: explicit-Euler energy balance,
// exogenous schedules and the noisy temperature sensor.

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

namespace aifgrid {

struct ThermalParams {
  double specific_heat = 1005.0;  // c_p, J/(kg C)
  double capacity = 2.0e6;        // C_b, J/C
  double envelope_ua = 50.0;      // U_w, W/C
  double occupant_gain = 102.0;   // q_occ, W per person
  double dt = 300.0;              // s

  // Throws ParameterError unless every field is strictly positive.
  void Validate() const;
};

// HVAC control pair. Bounds follow the equipment limits of the zone.
struct HvacAction {
  static constexpr double kMinAirflow = 0.0;     // kg/s
  static constexpr double kMaxAirflow = 0.3;     // kg/s
  static constexpr double kMinSupplyTemp = 10.0;  // C
  static constexpr double kMaxSupplyTemp = 25.0;  // C

  double airflow = 0.0;        // kg/s
  double supply_temp = 13.0;   // C

  bool InBounds() const;
  HvacAction Clamped() const;
};

struct ZoneTruth {
  double temperature = 24.0;  // C
  double occupancy = 0.0;     // persons
  double infiltration = 0.0;  // kg/s
};

struct ExogenousRow {
  double ambient = 0.0;       // C
  double occupancy = 0.0;     // persons
  double infiltration = 0.0;  // kg/s
};

// Piecewise-constant per-step drivers of one zone.
class ExogenousProfile {
 public:
  ExogenousProfile() = default;
  // Throws ParameterError on mismatched lengths, negative occupancy or
  // infiltration, or non-finite values.
  ExogenousProfile(std::vector<double> ambient, std::vector<double> occupancy,
                   std::vector<double> infiltration);

  // Built-in summer day. `shift_hours` delays the occupancy schedule and the
  // open-window event; ambient is unchanged.
  static ExogenousProfile SummerDay(int steps = 288, double shift_hours = 0.0);

  // Columnar text with header `step,ambient_c,occupancy,infiltration_kgps`.
  static ExogenousProfile LoadCsv(const std::filesystem::path& path);
  void SaveCsv(const std::filesystem::path& path) const;

  int steps() const { return static_cast<int>(ambient_.size()); }
  ExogenousRow Row(int step) const;
  // Row driving the transition out of `step`: ambient of `step`, occupancy
  // and infiltration of `step + 1` (held at the last value at the end).
  ExogenousRow TransitionRow(int step) const;

  std::span<const double> ambient() const { return ambient_; }
  std::span<const double> occupancy() const { return occupancy_; }
  std::span<const double> infiltration() const { return infiltration_; }

 private:
  std::vector<double> ambient_;
  std::vector<double> occupancy_;
  std::vector<double> infiltration_;
};

// Hour-of-day occupancy of the built-in schedule.
double SummerDayOccupancy(double hour);
// Ambient sinusoid between 24 and 34 C peaking at 15:00.
double SummerDayAmbient(double hour);

struct SensorModel {
  double noise_std = 0.1;  // sigma_z, C
  std::uint64_t seed = 1;
};

// Seeded additive-Gaussian temperature sensor.
class TemperatureSensor {
 public:
  explicit TemperatureSensor(const SensorModel& model);
  double Observe(const ZoneTruth& state);

 private:
  double noise_std_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// One explicit-Euler step of the zone energy balance.
double StepTemperature(const ZoneTruth& state, const HvacAction& action,
                       double ambient, const ThermalParams& params);

// Advances temperature with the current occupancy/infiltration, then takes
// the next occupancy/infiltration from `row`.
ZoneTruth AdvanceWorld(const ZoneTruth& state, const HvacAction& action,
                       const ExogenousRow& row, const ThermalParams& params);

}  // namespace aifgrid

#endif  // AIFGRID_THERMAL_WORLD_HPP_
