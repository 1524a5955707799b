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

#include "aifgrid/horizon.hpp"

#include <algorithm>
#include <cmath>

#include "aifgrid/errors.hpp"

namespace aifgrid {
namespace {

constexpr double kFlowRange = HvacAction::kMaxAirflow - HvacAction::kMinAirflow;
constexpr double kSupplyRange = HvacAction::kMaxSupplyTemp - HvacAction::kMinSupplyTemp;

double TargetAfter(const HorizonProblem& p, int k) {
  const int last = static_cast<int>(p.target.size()) - 1;
  return p.target[static_cast<std::size_t>(std::min(k + 1, last))];
}

// Unit-box coordinates: x[2k] = scaled airflow, x[2k+1] = scaled supply.
std::vector<HvacAction> FromUnit(const std::vector<double>& x) {
  std::vector<HvacAction> a(x.size() / 2);
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k].airflow = HvacAction::kMinAirflow + kFlowRange * x[2 * k];
    a[k].supply_temp = HvacAction::kMinSupplyTemp + kSupplyRange * x[2 * k + 1];
  }
  return a;
}

std::vector<double> UnitGradient(const HorizonProblem& p, const std::vector<double>& x) {
  const auto g = HorizonGradient(p, FromUnit(x));
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    out[2 * k] = g[k].airflow * kFlowRange;
    out[2 * k + 1] = g[k].supply_temp * kSupplyRange;
  }
  return out;
}

// Costate dJ/dT_{k+1} for every k.
std::vector<double> Adjoints(const HorizonProblem& p, const std::vector<double>& temps,
                             const std::vector<HvacAction>& actions) {
  const int n = p.steps();
  const double c = p.params.dt / p.params.capacity;
  const double cp = p.params.specific_heat;
  const double w = 1.0 / (p.preference_std * p.preference_std);
  std::vector<double> lambda(static_cast<std::size_t>(n));
  double adjoint = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    const std::size_t ku = static_cast<std::size_t>(k);
    adjoint += w * (temps[ku] - TargetAfter(p, k));
    lambda[ku] = adjoint;
    const HvacAction& a = actions[ku];
    adjoint *= 1.0 - c * (a.airflow * cp + p.params.envelope_ua + p.infiltration[ku] * cp);
  }
  return lambda;
}

// With zero airflow the supply temperature does not enter the objective, so
// it is moved to the bound that makes airflow a descent direction: coldest
// supply when the zone downstream is too warm, warmest when too cold.
void ReseatIdleSupply(const HorizonProblem& p, std::vector<double>& x) {
  const auto actions = FromUnit(x);
  const auto temps = RollOut(p, actions);
  const auto lambda = Adjoints(p, temps, actions);
  for (std::size_t k = 0; k < actions.size(); ++k) {
    if (x[2 * k] > 0.0) continue;
    const double t_k = k == 0 ? p.initial_temp : temps[k - 1];
    if (lambda[k] > 0.0 && t_k > HvacAction::kMinSupplyTemp) {
      x[2 * k + 1] = 0.0;
    } else if (lambda[k] < 0.0 && t_k < HvacAction::kMaxSupplyTemp) {
      x[2 * k + 1] = 1.0;
    }
  }
}

double ProjectedNorm(const std::vector<double>& x, const std::vector<double>& g) {
  double n = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double step = std::clamp(x[i] - g[i], 0.0, 1.0) - x[i];
    n = std::max(n, std::abs(step));
  }
  return n;
}

}  // namespace

void HorizonProblem::Validate() const {
  params.Validate();
  const std::size_t n = ambient.size();
  if (n == 0) throw ParameterError("horizon: empty problem");
  if (occupancy.size() != n || infiltration.size() != n || target.size() != n) {
    throw ParameterError("horizon: series lengths differ");
  }
  if (!(preference_std > 0.0)) throw ParameterError("horizon: preference_std must be > 0");
}

HorizonProblem HorizonProblem::FromProfile(double initial_temp,
                                           const ExogenousProfile& profile,
                                           std::vector<double> target,
                                           double preference_std,
                                           const ThermalParams& params) {
  HorizonProblem p;
  p.initial_temp = initial_temp;
  p.ambient.assign(profile.ambient().begin(), profile.ambient().end());
  p.occupancy.assign(profile.occupancy().begin(), profile.occupancy().end());
  p.infiltration.assign(profile.infiltration().begin(), profile.infiltration().end());
  p.target = std::move(target);
  p.preference_std = preference_std;
  p.params = params;
  p.Validate();
  return p;
}

std::vector<double> RollOut(const HorizonProblem& p, const std::vector<HvacAction>& actions) {
  if (static_cast<int>(actions.size()) != p.steps()) {
    throw ParameterError("horizon: action count must equal steps");
  }
  std::vector<double> temps(actions.size());
  ZoneTruth z{p.initial_temp, 0.0, 0.0};
  for (std::size_t k = 0; k < actions.size(); ++k) {
    z.occupancy = p.occupancy[k];
    z.infiltration = p.infiltration[k];
    z.temperature = StepTemperature(z, actions[k], p.ambient[k], p.params);
    temps[k] = z.temperature;
  }
  return temps;
}

double HorizonObjective(const HorizonProblem& p, const std::vector<HvacAction>& actions) {
  const auto temps = RollOut(p, actions);
  const double w = 1.0 / (2.0 * p.preference_std * p.preference_std);
  double j = 0.0;
  for (int k = 0; k < p.steps(); ++k) {
    const double e = TargetAfter(p, k) - temps[static_cast<std::size_t>(k)];
    j += w * e * e;
  }
  return j;
}

std::vector<HvacAction> HorizonGradient(const HorizonProblem& p,
                                        const std::vector<HvacAction>& actions) {
  const auto temps = RollOut(p, actions);
  const auto lambda = Adjoints(p, temps, actions);
  const double c = p.params.dt / p.params.capacity;
  const double cp = p.params.specific_heat;
  std::vector<HvacAction> grad(actions.size());
  for (std::size_t k = 0; k < actions.size(); ++k) {
    const double t_k = k == 0 ? p.initial_temp : temps[k - 1];
    grad[k].airflow = lambda[k] * c * cp * (actions[k].supply_temp - t_k);
    grad[k].supply_temp = lambda[k] * c * cp * actions[k].airflow;
  }
  return grad;
}

HorizonSolution OptimizeFullHorizon(const HorizonProblem& problem,
                                    const HorizonOptions& options) {
  problem.Validate();
  const std::size_t dim = 2 * static_cast<std::size_t>(problem.steps());
  auto objective = [&](const std::vector<double>& v) {
    return HorizonObjective(problem, FromUnit(v));
  };

  // Spectral projected gradient with a nonmonotone Armijo test over the last
  // kMemory objective values. Start: no airflow, coldest supply.
  constexpr int kMemory = 10;
  constexpr double kSufficient = 1e-4;
  constexpr double kMinStep = 1e-12;
  constexpr double kMaxStep = 1e12;

  std::vector<double> x(dim, 0.0);
  ReseatIdleSupply(problem, x);
  double f = objective(x);
  std::vector<double> g = UnitGradient(problem, x);
  std::vector<double> history(kMemory, f);
  double step = 1.0;

  std::vector<double> best_x = x;
  double best_f = f;
  HorizonSolution sol;
  std::vector<double> dir(dim), trial(dim), g_new(dim);
  int it = 0;
  for (; it < options.max_iters; ++it) {
    if (!std::isfinite(f)) {
      throw NumericalFailure("building-agent", it, "full horizon: non-finite objective");
    }
    if (ProjectedNorm(x, g) < options.tolerance) {
      sol.converged = true;
      break;
    }
    double slope = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      dir[i] = std::clamp(x[i] - step * g[i], 0.0, 1.0) - x[i];
      slope += g[i] * dir[i];
    }
    const double reference = *std::max_element(history.begin(), history.end());
    double lambda = 1.0;
    double f_trial = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < dim; ++i) trial[i] = x[i] + lambda * dir[i];
      f_trial = objective(trial);
      if (f_trial <= reference + kSufficient * lambda * slope) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
    ReseatIdleSupply(problem, trial);
    f_trial = objective(trial);
    g_new = UnitGradient(problem, trial);

    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double s_i = trial[i] - x[i];
      ss += s_i * s_i;
      sy += s_i * (g_new[i] - g[i]);
    }
    step = sy > 0.0 ? std::clamp(ss / sy, kMinStep, kMaxStep) : kMaxStep;

    x.swap(trial);
    g.swap(g_new);
    f = f_trial;
    history[static_cast<std::size_t>(it % kMemory)] = f;
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  if (!sol.converged) x = best_x;
  sol.actions = FromUnit(x);
  sol.temperatures = RollOut(problem, sol.actions);
  sol.objective = objective(x);
  sol.iterations = it;
  sol.projected_gradient = ProjectedNorm(x, UnitGradient(problem, x));
  return sol;
}

}  // namespace aifgrid
