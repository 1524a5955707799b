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
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "aifgrid/csv.hpp"
#include "aifgrid/errors.hpp"
#include "aifgrid/scenario.hpp"

namespace aifgrid {
namespace {

constexpr double kIntervalHours = 24.0 / kCommunitySteps;

// One zone closed loop, advanced a step at a time so the community layer can
// interleave its own decisions.
class BuildingLoop {
 public:
  BuildingLoop(const ScenarioConfig& cfg, int b)
      : cfg_(cfg),
        profile_(BuildingProfile(cfg, b)),
        targets_(BaseTargets(cfg.agents, profile_.steps())),
        agent_(MakeAgent(cfg, profile_, targets_)),
        sensor_(SensorModel{cfg.world.sensor_std,
                            DeriveSeed(cfg.seeds.master,
                                       10 + static_cast<std::uint64_t>(b))}) {
    truth_.temperature = cfg.world.initial_temp;
    truth_.occupancy = profile_.occupancy()[0];
    truth_.infiltration = profile_.infiltration()[0];
  }

  int steps() const { return profile_.steps(); }
  const std::vector<double>& base_targets() const { return targets_; }

  // `target` is the setpoint the agent should aim the next temperature at.
  BuildingTraceRow Step(int k, double target) {
    const auto i = static_cast<std::size_t>(k);
    BuildingTraceRow row;
    row.step = k;
    row.time_h = k * cfg_.world.thermal.dt / 3600.0;
    row.ambient = profile_.ambient()[i];
    row.true_occupancy = truth_.occupancy;
    row.true_infiltration = truth_.infiltration;
    row.observation = sensor_.Observe(truth_);
    const AgentStepResult r =
        agent_.Step(k, row.observation, row.ambient, target);
    row.target = target;
    row.inferred_occupancy = r.belief.occupancy;
    row.inferred_infiltration = r.belief.infiltration;
    row.airflow = r.action.airflow;
    row.supply_temp = r.action.supply_temp;
    row.vfe = r.diagnostics.vfe;
    row.power_kw = BuildingPower(r.action, truth_.temperature,
                                 truth_.occupancy, cfg_.world);
    truth_ = AdvanceWorld(truth_, r.action, profile_.TransitionRow(k),
                          cfg_.world.thermal);
    row.temperature = truth_.temperature;
    row.comfort_ok =
        std::abs(row.temperature - target) <= cfg_.agents.comfort_band ? 1 : 0;
    return row;
  }

 private:
  static BuildingAgent MakeAgent(const ScenarioConfig& cfg,
                                 const ExogenousProfile& profile,
                                 const std::vector<double>& targets) {
    const AgentConfig& a = cfg.agents;
    const PriorModel prior(a.prior_mode == "ar1" ? PriorModel::Mode::kAr1
                                                 : PriorModel::Mode::kSchedule,
                           NominalSchedule(profile, a.prior_delay_steps),
                           a.ar1_occupancy, a.ar1_infiltration);
    ContinuousBelief belief;
    belief.occupancy_std = a.occupancy_std;
    belief.infiltration_std = a.infiltration_std;
    const HiddenStateMeans start = prior.schedule().front();
    belief.occupancy = start.occupancy;
    belief.infiltration = start.infiltration;
    return BuildingAgent(cfg.world.thermal, a.ToVfeConfig(targets), prior,
                         belief, a.initial_action);
  }

  const ScenarioConfig& cfg_;
  ExogenousProfile profile_;
  std::vector<double> targets_;
  BuildingAgent agent_;
  TemperatureSensor sensor_;
  ZoneTruth truth_;
};

BuildingSummary Summarize(const std::vector<BuildingTraceRow>& trace,
                          const ScenarioConfig& cfg) {
  BuildingSummary s;
  const double dt_h = cfg.world.thermal.dt / 3600.0;
  int counted = 0;
  int ok = 0;
  std::vector<double> inferred;
  std::vector<double> truth;
  const double sr2 = cfg.agents.preference_std * cfg.agents.preference_std;
  for (const BuildingTraceRow& r : trace) {
    // The row's temperature is reached at the end of the step.
    if ((r.step + 1) * dt_h > cfg.agents.warmup_h + 1e-9) {
      ++counted;
      ok += r.comfort_ok;
    }
    inferred.push_back(r.inferred_occupancy);
    truth.push_back(r.true_occupancy);
    s.energy_kwh += r.power_kw * dt_h;
    const double e = r.target - r.temperature;
    s.realized_objective += e * e / (2.0 * sr2);
  }
  s.comfort_fraction = counted > 0 ? static_cast<double>(ok) / counted : 1.0;
  s.occupancy_correlation = PearsonCorrelation(inferred, truth);
  return s;
}

std::vector<MarketStep> Window(const std::vector<MarketStep>& all, int start,
                               int length) {
  std::vector<MarketStep> out;
  out.reserve(static_cast<std::size_t>(length));
  for (int j = 0; j < length; ++j) {
    out.push_back(all[static_cast<std::size_t>((start + j) %
                                               static_cast<int>(all.size()))]);
  }
  return out;
}

}  // namespace

double PearsonCorrelation(std::span<const double> x,
                          std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw ParameterError("correlation needs two equal non-empty series");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

BuildingRun RunBuildingDay(const ScenarioConfig& cfg, int b) {
  BuildingLoop loop(cfg, b);
  BuildingRun run;
  for (int k = 0; k < loop.steps(); ++k) {
    try {
      const auto next = static_cast<std::size_t>(
          std::min(k + 1, loop.steps() - 1));
      run.trace.push_back(loop.Step(k, loop.base_targets()[next]));
    } catch (const NumericalFailure& e) {
      throw e.step() >= 0 ? e : e.AtStep(k);
    }
  }
  run.summary = Summarize(run.trace, cfg);
  return run;
}

CommunityTotals SumTrace(const std::vector<CommunityTraceRow>& trace,
                         const MarketConfig& market) {
  CommunityTotals t;
  for (const CommunityTraceRow& r : trace) {
    t.spot_cost += r.spot_cost;
    t.deviation_cost += r.deviation_cost;
    t.unused_pv_cost += r.unused_pv_cost;
    t.battery_cost += r.battery_cost;
    t.total_cost += r.total_cost;
    t.deviation_kwh += r.deviation_kwh;
    t.curtailed_kwh += r.curtailed_kwh;
    t.throughput_kwh += r.throughput_kwh;
    t.spot_buy_kwh += r.spot_buy_kwh;
    const double start = r.step * kIntervalHours;
    if (start >= market.peak_start_h && start < market.peak_end_h) {
      t.peak_battery_net_discharge_kwh += r.battery_net_discharge_kwh;
      t.peak_spot_buy_kwh += r.spot_buy_kwh;
    }
    t.max_balance_residual_kw =
        std::max(t.max_balance_residual_kw, std::abs(r.balance_residual_kw));
    t.cumulative_efe += r.efe;
    t.cumulative_ambiguity += r.ambiguity;
    t.degenerate_evidence_events += r.degenerate_evidence;
    ++t.action_histogram[static_cast<std::size_t>(r.selected_action_index)];
  }
  return t;
}

CommunityRun RunCommunityDay(const ScenarioConfig& cfg,
                             std::span<const double> sweep_alphas) {
  if (cfg.world.building_shift_hours.size() < 2) {
    throw ParameterError("the community needs two buildings");
  }
  const CommunityModel model = CommunityModel::Build(cfg.community_model);
  const EconomicsConfig& econ = cfg.economics;
  const bool level_signal = econ.building_signal == "level";
  const SignalDiscretizer disc{
      level_signal ? econ.level_deadband : econ.power_deadband,
      econ.flow_deadband};
  const double med_kw =
      econ.state.load_kw[static_cast<std::size_t>(LoadLevel::kMed)];
  const ReductionOffsets offsets{econ.small_offset, econ.big_offset,
                                 econ.target_min, econ.target_max};
  const double interval_s = kIntervalHours * 3600.0;
  const double h = kIntervalHours;

  CommunityRun run;
  run.market = BuildMarket(cfg);
  const std::vector<MarketStep> steps = run.market.Steps();
  std::vector<BuildingLoop> loops;
  loops.emplace_back(cfg, 0);
  loops.emplace_back(cfg, 1);
  run.buildings.resize(2);

  EssPhysical ess{econ.ess_capacity_kwh, econ.ess_max_power_kw,
                  econ.ess_initial_soc, econ.ess_efficiency};
  Categorical belief = Categorical::Uniform(kNumStates);
  std::array<double, 2> previous_power{0.0, 0.0};

  for (int k = 0; k < kCommunitySteps; ++k) {
    const auto ki = static_cast<std::size_t>(k);
    const std::vector<MarketStep> context =
        Window(steps, k, cfg.planner.horizon);
    const PlanResult plan = Plan(belief, context, model, cfg.planner,
                                 econ.weights, econ.state);
    const JointAction u = plan.action;

    CommunityTraceRow row;
    row.step = k;
    row.selected_action_index = u.index();
    row.u_b = static_cast<int>(u.building);
    row.u_ess = static_cast<int>(u.storage);
    row.u_m = static_cast<int>(u.market);
    row.efe = plan.evaluation.efe;
    row.expected_cost = plan.evaluation.expected_cost;
    row.ambiguity = plan.evaluation.ambiguity;
    row.candidates = plan.candidates_evaluated;
    row.time_h = k * h;
    row.spot_price = steps[ki].spot_price;
    if (!sweep_alphas.empty()) {
      for (const PlanResult& r :
           PlanMultiAlpha(belief, context, model, cfg.planner, sweep_alphas,
                          econ.weights, econ.state)) {
        row.sweep_ambiguity.push_back(r.evaluation.ambiguity);
      }
    }

    // Downlink and the three building steps of this interval.
    std::array<double, 2> power{0.0, 0.0};
    for (int b = 0; b < 2; ++b) {
      BuildingLoop& loop = loops[static_cast<std::size_t>(b)];
      for (int j = 0; j < kStepsPerInterval; ++j) {
        const int s = k * kStepsPerInterval + j;
        const auto next =
            static_cast<std::size_t>(std::min(s + 1, loop.steps() - 1));
        const double target =
            ApplyReduction(u.building, loop.base_targets()[next], offsets);
        BuildingTraceRow br;
        try {
          br = loop.Step(s, target);
        } catch (const NumericalFailure& e) {
          throw e.step() >= 0 ? e : e.AtStep(s);
        }
        power[static_cast<std::size_t>(b)] += br.power_kw / kStepsPerInterval;
        run.buildings[static_cast<std::size_t>(b)].trace.push_back(br);
      }
    }
    row.load_b1_kw = power[0];
    row.load_b2_kw = power[1];
    row.building_load_kw = power[0] + power[1];

    // Battery, PV and market settlement.
    const EssStep es = StepEss(ess, u.storage, econ.state.ess_power_kw,
                               interval_s);
    ess = es.ess;
    row.battery_flow_kw = es.flow_kw;
    row.battery_charge_kw = std::max(es.flow_kw, 0.0);
    row.battery_discharge_kw = std::max(-es.flow_kw, 0.0);
    row.soc = ess.soc;
    row.spot_buy_kw =
        u.market == MarketAction::kBuy ? econ.state.trade_block_kw : 0.0;
    row.spot_sell_kw =
        u.market == MarketAction::kSell ? econ.state.trade_block_kw : 0.0;
    row.da_baseline_kw = steps[ki].target_kw;
    row.pv_available_kw = steps[ki].pv_kw;
    const double demand = row.building_load_kw + es.flow_kw;
    row.pv_used_kw = UsablePv(row.pv_available_kw, demand, row.spot_sell_kw,
                              row.da_baseline_kw);
    row.pv_curtailed_kw = row.pv_available_kw - row.pv_used_kw;
    row.imbalance_kw = demand - row.pv_used_kw - row.da_baseline_kw -
                       row.spot_buy_kw + row.spot_sell_kw;
    row.balance_residual_kw =
        row.building_load_kw -
        (row.pv_used_kw + row.battery_discharge_kw - row.battery_charge_kw +
         row.da_baseline_kw + row.spot_buy_kw - row.spot_sell_kw +
         row.imbalance_kw);

    const CostWeights& w = econ.weights;
    row.spot_cost = row.spot_price * row.spot_buy_kw * h -
                    w.sell_ratio * row.spot_price * row.spot_sell_kw * h;
    row.deviation_kwh = std::abs(row.imbalance_kw) * h;
    row.curtailed_kwh = row.pv_curtailed_kw * h;
    row.throughput_kwh = std::abs(row.battery_flow_kw) * h;
    row.spot_buy_kwh = row.spot_buy_kw * h;
    row.battery_net_discharge_kwh = -row.battery_flow_kw * h;
    row.deviation_cost = w.lambda_dev * row.deviation_kwh;
    row.unused_pv_cost = w.lambda_upv * row.curtailed_kwh;
    row.battery_cost = w.lambda_bat * row.throughput_kwh;
    row.total_cost = row.spot_cost + row.deviation_cost +
                     row.unused_pv_cost + row.battery_cost;

    // What the community sees: each building's load against a reference
    // (the Med level, or the previous interval in trend mode) and the
    // unscheduled grid exchange left after every action.
    std::array<PowerSignal, 2> signal{};
    for (std::size_t b = 0; b < 2; ++b) {
      const double reference =
          level_signal ? med_kw : (k == 0 ? power[b] : previous_power[b]);
      signal[b] = DiscretizeBuildingSignal(power[b], reference, disc);
    }
    const JointObservation obs{signal[0], signal[1],
                               DiscretizeFlow(row.imbalance_kw, disc)};
    previous_power = power;
    row.o_b1 = static_cast<int>(obs.b1);
    row.o_b2 = static_cast<int>(obs.b2);
    row.o_ess = static_cast<int>(obs.ess);
    try {
      belief = BeliefUpdate(belief, u, obs, model);
    } catch (const DegenerateEvidenceError&) {
      belief = PredictBelief(belief, u, model);
      row.degenerate_evidence = 1;
    }
    row.map_state = belief.ArgMax();
    run.trace.push_back(std::move(row));
  }
  for (BuildingRun& b : run.buildings) b.summary = Summarize(b.trace, cfg);
  run.totals = SumTrace(run.trace, cfg.market);
  return run;
}

std::vector<SweepEntry> SweepAmbiguity(const ScenarioConfig& cfg,
                                       std::span<const double> alphas) {
  if (alphas.empty()) throw ParameterError("alpha list is empty");
  std::vector<double> sorted(alphas.begin(), alphas.end());
  for (double a : sorted) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw ParameterError("alphas must be finite and >= 0");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  std::vector<SweepEntry> out;
  for (double alpha : alphas) {
    ScenarioConfig c = cfg;
    c.planner.alpha_amb = alpha;
    SweepEntry e;
    e.alpha = alpha;
    e.run = RunCommunityDay(c, sorted);
    for (const CommunityTraceRow& r : e.run.trace) {
      for (std::size_t i = 1; i < r.sweep_ambiguity.size(); ++i) {
        if (r.sweep_ambiguity[i] > r.sweep_ambiguity[i - 1] + 1e-12) {
          e.ambiguity_monotone = false;
        }
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string BuildingTraceCsv(const BuildingRun& run) {
  std::ostringstream os;
  os << "step,time_h,ambient_c,temperature_c,observation_c,target_c,"
        "true_occupancy,inferred_occupancy,true_infiltration_kgps,"
        "inferred_infiltration_kgps,airflow_kgps,supply_temp_c,power_kw,vfe,"
        "comfort_ok\n";
  for (const BuildingTraceRow& r : run.trace) {
    os << r.step << ',' << FormatNumber(r.time_h) << ','
       << FormatNumber(r.ambient) << ',' << FormatNumber(r.temperature) << ','
       << FormatNumber(r.observation) << ',' << FormatNumber(r.target) << ','
       << FormatNumber(r.true_occupancy) << ','
       << FormatNumber(r.inferred_occupancy) << ','
       << FormatNumber(r.true_infiltration) << ','
       << FormatNumber(r.inferred_infiltration) << ','
       << FormatNumber(r.airflow) << ',' << FormatNumber(r.supply_temp) << ','
       << FormatNumber(r.power_kw) << ',' << FormatNumber(r.vfe) << ','
       << r.comfort_ok << '\n';
  }
  return os.str();
}

std::string CommunityTraceCsv(const CommunityRun& run) {
  std::ostringstream os;
  os << "step,selected_action_index,u_b,u_ess,u_m,efe,expected_cost,"
        "ambiguity,candidates,time_h,spot_price,load_b1_kw,load_b2_kw,"
        "building_load_kw,pv_available_kw,pv_used_kw,pv_curtailed_kw,"
        "battery_flow_kw,battery_charge_kw,battery_discharge_kw,soc,"
        "spot_buy_kw,spot_sell_kw,da_baseline_kw,imbalance_kw,"
        "balance_residual_kw,o_b1,o_b2,o_ess,map_state,degenerate_evidence,"
        "spot_cost,deviation_cost,unused_pv_cost,battery_cost,total_cost,"
        "deviation_kwh,curtailed_kwh,throughput_kwh,spot_buy_kwh,"
        "battery_net_discharge_kwh\n";
  const auto n = [](double v) { return FormatNumber(v); };
  for (const CommunityTraceRow& r : run.trace) {
    os << r.step << ',' << r.selected_action_index << ',' << r.u_b << ','
       << r.u_ess << ',' << r.u_m << ',' << n(r.efe) << ','
       << n(r.expected_cost) << ',' << n(r.ambiguity) << ',' << r.candidates
       << ',' << n(r.time_h) << ',' << n(r.spot_price) << ','
       << n(r.load_b1_kw) << ',' << n(r.load_b2_kw) << ','
       << n(r.building_load_kw) << ',' << n(r.pv_available_kw) << ','
       << n(r.pv_used_kw) << ',' << n(r.pv_curtailed_kw) << ','
       << n(r.battery_flow_kw) << ',' << n(r.battery_charge_kw) << ','
       << n(r.battery_discharge_kw) << ',' << n(r.soc) << ','
       << n(r.spot_buy_kw) << ',' << n(r.spot_sell_kw) << ','
       << n(r.da_baseline_kw) << ',' << n(r.imbalance_kw) << ','
       << n(r.balance_residual_kw) << ',' << r.o_b1 << ',' << r.o_b2 << ','
       << r.o_ess << ',' << r.map_state << ',' << r.degenerate_evidence << ','
       << n(r.spot_cost) << ',' << n(r.deviation_cost) << ','
       << n(r.unused_pv_cost) << ',' << n(r.battery_cost) << ','
       << n(r.total_cost) << ',' << n(r.deviation_kwh) << ','
       << n(r.curtailed_kwh) << ',' << n(r.throughput_kwh) << ','
       << n(r.spot_buy_kwh) << ',' << n(r.battery_net_discharge_kwh) << '\n';
  }
  return os.str();
}

}  // namespace aifgrid
