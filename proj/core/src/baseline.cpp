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
#include <limits>

#include "aifgrid/errors.hpp"
#include "aifgrid/scenario.hpp"

namespace aifgrid {
namespace {

// Decision vector in physical units: [airflow_0, supply_0, airflow_1, ...].
using Vec = std::vector<double>;

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;
constexpr double kMaxStep = 1e12;

struct Model {
  const HorizonProblem& p;
  double a;    // dt / C_b
  double cp;
  double inv_sr2;

  double Target(int j) const {
    const int n = static_cast<int>(p.target.size());
    return p.target[static_cast<std::size_t>(std::min(j, n - 1))];
  }

  // Forward simulation; temps[j] is T_j for j = 0..N.
  void Simulate(const Vec& x, Vec* temps) const {
    const int n = p.steps();
    temps->assign(static_cast<std::size_t>(n + 1), 0.0);
    (*temps)[0] = p.initial_temp;
    for (int k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      const double t = (*temps)[i];
      const double flow = x[2 * i];
      const double sup = x[2 * i + 1];
      const double q = flow * cp * (sup - t) +
                       p.occupancy[i] * p.params.occupant_gain +
                       (p.params.envelope_ua + p.infiltration[i] * cp) *
                           (p.ambient[i] - t);
      (*temps)[i + 1] = t + a * q;
    }
  }

  double Objective(const Vec& temps) const {
    double j = 0.0;
    for (int k = 1; k < static_cast<int>(temps.size()); ++k) {
      const double e = Target(k) - temps[static_cast<std::size_t>(k)];
      j += 0.5 * e * e * inv_sr2;
    }
    return j;
  }

  // Forward sensitivities: dT_j/du_k = (prod_{i=k+1}^{j-1} phi_i) dT_{k+1}/du_k.
  void Gradient(const Vec& x, const Vec& temps, Vec* g) const {
    const int n = p.steps();
    g->assign(x.size(), 0.0);
    Vec phi(static_cast<std::size_t>(n));
    Vec resid(static_cast<std::size_t>(n + 1), 0.0);
    for (int k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      phi[i] = 1.0 - a * (x[2 * i] * cp + p.params.envelope_ua +
                          p.infiltration[i] * cp);
      resid[i + 1] = (temps[i + 1] - Target(k + 1)) * inv_sr2;
    }
    for (int k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      double sens = 1.0;  // dT_j / dT_{k+1}
      double acc = 0.0;
      for (int j = k + 1; j <= n; ++j) {
        acc += resid[static_cast<std::size_t>(j)] * sens;
        if (j < n) sens *= phi[static_cast<std::size_t>(j)];
      }
      (*g)[2 * i] = acc * a * cp * (x[2 * i + 1] - temps[i]);
      (*g)[2 * i + 1] = acc * a * cp * x[2 * i];
    }
  }
};

double Lower(std::size_t i) {
  return i % 2 == 0 ? HvacAction::kMinAirflow : HvacAction::kMinSupplyTemp;
}
double Upper(std::size_t i) {
  return i % 2 == 0 ? HvacAction::kMaxAirflow : HvacAction::kMaxSupplyTemp;
}
// Box scale so both coordinates see comparable steps.
double Scale(std::size_t i) { return Upper(i) - Lower(i); }

void Project(Vec* x) {
  for (std::size_t i = 0; i < x->size(); ++i) {
    (*x)[i] = std::clamp((*x)[i], Lower(i), Upper(i));
  }
}

// With no airflow the supply temperature has no effect; point it in the
// direction a deadbeat controller would so airflow can restart usefully.
void ParkIdleSupply(const Model& m, const Vec& temps, Vec* x) {
  for (std::size_t k = 0; 2 * k < x->size(); ++k) {
    if ((*x)[2 * k] > 0.0) continue;
    const double t = temps[k];
    (*x)[2 * k + 1] = m.Target(static_cast<int>(k) + 1) < t
                          ? HvacAction::kMinSupplyTemp
                          : HvacAction::kMaxSupplyTemp;
  }
}

// Projected-gradient inf-norm in box-scaled coordinates.
double Stationarity(const Vec& x, const Vec& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = Scale(i);
    const double moved =
        std::clamp(x[i] - g[i] * s * s, Lower(i), Upper(i)) - x[i];
    worst = std::max(worst, std::abs(moved) / s);
  }
  return worst;
}

Vec DeadbeatStart(const Model& m) {
  const int n = m.p.steps();
  Vec x(static_cast<std::size_t>(2 * n));
  double t = m.p.initial_temp;
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double drift =
        m.p.occupancy[i] * m.p.params.occupant_gain +
        (m.p.params.envelope_ua + m.p.infiltration[i] * m.cp) *
            (m.p.ambient[i] - t);
    const double need = (m.Target(k + 1) - t) / m.a - drift;  // W
    const double sup = need < 0.0 ? HvacAction::kMinSupplyTemp
                                   : HvacAction::kMaxSupplyTemp;
    const double dt = sup - t;
    double flow = std::abs(dt) > 1e-9 ? need / (m.cp * dt) : 0.0;
    flow = std::clamp(flow, HvacAction::kMinAirflow, HvacAction::kMaxAirflow);
    x[2 * i] = flow;
    x[2 * i + 1] = sup;
    t += m.a * (flow * m.cp * dt + drift);
  }
  return x;
}

Vec UniformStart(int n, double flow, double sup) {
  Vec x(static_cast<std::size_t>(2 * n));
  for (int k = 0; k < n; ++k) {
    x[2 * static_cast<std::size_t>(k)] = flow;
    x[2 * static_cast<std::size_t>(k) + 1] = sup;
  }
  return x;
}

struct StartResult {
  Vec x;
  Vec temps;
  double objective;
  int iterations;
  bool converged;
};

StartResult Descend(const Model& m, Vec x, const BaselineOptions& opt) {
  Project(&x);
  Vec temps;
  m.Simulate(x, &temps);
  ParkIdleSupply(m, temps, &x);
  m.Simulate(x, &temps);
  double f = m.Objective(temps);
  Vec g;
  m.Gradient(x, temps, &g);

  Vec x_new(x.size());
  Vec temps_new;
  Vec g_new;
  double step = 1.0;
  int it = 0;
  bool converged = false;
  for (; it < opt.max_iters; ++it) {
    if (Stationarity(x, g) < opt.tolerance) {
      converged = true;
      break;
    }
    // Monotone backtracking along the projected path.
    double t = step;
    double f_new = f;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      double decrease = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = Scale(i);
        x_new[i] = std::clamp(x[i] - t * g[i] * s * s, Lower(i), Upper(i));
        decrease += g[i] * (x_new[i] - x[i]);
      }
      m.Simulate(x_new, &temps_new);
      f_new = m.Objective(temps_new);
      if (!std::isfinite(f_new)) {
        throw NumericalFailure("scenario", it, "baseline objective diverged");
      }
      if (f_new <= f + kArmijo * decrease) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no progress possible at machine precision
    ParkIdleSupply(m, temps_new, &x_new);
    m.Simulate(x_new, &temps_new);
    f_new = m.Objective(temps_new);
    m.Gradient(x_new, temps_new, &g_new);

    // Barzilai-Borwein step in scaled coordinates, alternating the two
    // classic formulas.
    double ss = 0.0;
    double sy = 0.0;
    double yy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double s = Scale(i);
      const double ds = (x_new[i] - x[i]) / s;
      const double dy = (g_new[i] - g[i]) * s;
      ss += ds * ds;
      sy += ds * dy;
      yy += dy * dy;
    }
    if (sy > 0.0) {
      step = (it % 2 == 0) ? ss / sy : sy / yy;
      step = std::clamp(step, kMinStep, kMaxStep);
    } else {
      step = std::min(kMaxStep, 2.0 * t);
    }
    x.swap(x_new);
    temps.swap(temps_new);
    g.swap(g_new);
    f = f_new;
  }
  return {std::move(x), std::move(temps), f, it, converged};
}

}  // namespace

BaselineSolution BaselineFullInformation(const HorizonProblem& problem,
                                         const BaselineOptions& options) {
  problem.Validate();
  const Model m{problem, problem.params.dt / problem.params.capacity,
                problem.params.specific_heat,
                1.0 / (problem.preference_std * problem.preference_std)};
  const int n = problem.steps();
  const std::vector<Vec> starts{
      DeadbeatStart(m),
      UniformStart(n, 0.5 * HvacAction::kMaxAirflow,
                   0.5 * (HvacAction::kMinSupplyTemp +
                          HvacAction::kMaxSupplyTemp)),
      UniformStart(n, HvacAction::kMaxAirflow, HvacAction::kMinSupplyTemp)};

  BaselineSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts.size(); ++s) {
    StartResult r = Descend(m, starts[s], options);
    best.iterations += r.iterations;
    if (r.objective < best.objective) {
      best.objective = r.objective;
      best.best_start = static_cast<int>(s);
      best.converged = r.converged;
      best.actions.resize(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        best.actions[i] = {r.x[2 * i], r.x[2 * i + 1]};
      }
      best.temperatures.assign(r.temps.begin() + 1, r.temps.end());
    }
  }
  return best;
}

HorizonProblem DefaultHorizonProblem(const ScenarioConfig& cfg, int b) {
  const ExogenousProfile profile = BuildingProfile(cfg, b);
  return HorizonProblem::FromProfile(
      cfg.world.initial_temp, profile,
      BaseTargets(cfg.agents, profile.steps()), cfg.agents.preference_std,
      cfg.world.thermal);
}

}  // namespace aifgrid
