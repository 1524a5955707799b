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

#ifndef AIFGRID_HORIZON_HPP_
#define AIFGRID_HORIZON_HPP_

// Full-horizon free-energy minimization under perfect information: the
// preference terms of every step are summed over the day and minimized
// jointly over all HVAC actions, with the zone rolled forward by the
// deterministic energy balance.

#include <vector>

#include "aifgrid/thermal_world.hpp"

namespace aifgrid {

struct HorizonProblem {
  double initial_temp = 24.0;
  std::vector<double> ambient;       // per step, C
  std::vector<double> occupancy;     // true, persons
  std::vector<double> infiltration;  // true, kg/s
  std::vector<double> target;        // rho per step, C
  double preference_std = 0.5;
  ThermalParams params;

  int steps() const { return static_cast<int>(ambient.size()); }
  void Validate() const;

  static HorizonProblem FromProfile(double initial_temp, const ExogenousProfile& profile,
                                    std::vector<double> target, double preference_std,
                                    const ThermalParams& params);
};

// Temperatures T_1..T_N produced by actions a_0..a_{N-1}.
std::vector<double> RollOut(const HorizonProblem& problem,
                            const std::vector<HvacAction>& actions);

// sum_k (rho_{k+1} - T_{k+1})^2 / (2 sr^2), rho clamped to the last entry.
double HorizonObjective(const HorizonProblem& problem,
                        const std::vector<HvacAction>& actions);

// Adjoint gradient of HorizonObjective; entry k holds (d/d airflow_k,
// d/d supply_temp_k).
std::vector<HvacAction> HorizonGradient(const HorizonProblem& problem,
                                        const std::vector<HvacAction>& actions);

struct HorizonOptions {
  int max_iters = 200000;
  // Stop when the projected gradient inf-norm (in unit-box coordinates)
  // falls below this.
  double tolerance = 1e-6;
};

struct HorizonSolution {
  std::vector<HvacAction> actions;
  std::vector<double> temperatures;  // T_1..T_N
  double objective = 0.0;
  int iterations = 0;
  double projected_gradient = 0.0;  // inf-norm, unit-box coordinates
  bool converged = false;  // false: best-so-far after the iteration budget
};

HorizonSolution OptimizeFullHorizon(const HorizonProblem& problem,
                                    const HorizonOptions& options = {});

}  // namespace aifgrid

#endif  // AIFGRID_HORIZON_HPP_
