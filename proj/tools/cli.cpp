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


#include "cli.hpp"

#include <algorithm>
#include <map>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

#include "CLI11.hpp"
#include "aifgrid/community_model.hpp"
#include "aifgrid/csv.hpp"
#include "aifgrid/errors.hpp"
#include "aifgrid/horizon.hpp"
#include "aifgrid/scenario.hpp"
#include "aifgrid/scenario_config.hpp"
#include "json.hpp"

namespace aifgrid::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string Fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

json BaseReport(const Command& cmd, const ScenarioConfig& cfg) {
  json r;
  r["tool"] = "aifgrid";
  r["command"] = cmd.verb;
  r["seed"] = cfg.seeds.master;
  r["config"] = json::parse(ConfigToJson(cfg));
  return r;
}

json TotalsJson(const CommunityTotals& t) {
  json j;
  j["spot_cost"] = t.spot_cost;
  j["deviation_cost"] = t.deviation_cost;
  j["unused_pv_cost"] = t.unused_pv_cost;
  j["battery_cost"] = t.battery_cost;
  j["total_cost"] = t.total_cost;
  j["deviation_kwh"] = t.deviation_kwh;
  j["curtailed_kwh"] = t.curtailed_kwh;
  j["throughput_kwh"] = t.throughput_kwh;
  j["spot_buy_kwh"] = t.spot_buy_kwh;
  j["peak_battery_net_discharge_kwh"] = t.peak_battery_net_discharge_kwh;
  j["peak_spot_buy_kwh"] = t.peak_spot_buy_kwh;
  j["max_balance_residual_kw"] = t.max_balance_residual_kw;
  j["cumulative_efe"] = t.cumulative_efe;
  j["cumulative_ambiguity"] = t.cumulative_ambiguity;
  j["degenerate_evidence_events"] = t.degenerate_evidence_events;
  j["action_histogram"] = t.action_histogram;
  return j;
}

json BuildingJson(const BuildingSummary& s) {
  json j;
  j["comfort_fraction"] = s.comfort_fraction;
  j["occupancy_correlation"] = s.occupancy_correlation;
  j["energy_kwh"] = s.energy_kwh;
  j["realized_objective"] = s.realized_objective;
  return j;
}

void WriteReport(const Command& cmd, const json& report) {
  WriteFileAtomic(cmd.out_dir / "report.json", report.dump(2) + "\n");
}

void WriteBuildings(const Command& cmd, const std::vector<BuildingRun>& runs) {
  for (std::size_t b = 0; b < runs.size(); ++b) {
    WriteFileAtomic(cmd.out_dir / ("building_" + std::to_string(b + 1) + ".csv"),
                    BuildingTraceCsv(runs[b]));
  }
}

std::string ComfortText(const std::vector<BuildingRun>& runs) {
  std::string comfort;
  std::string corr;
  for (std::size_t b = 0; b < runs.size(); ++b) {
    const char* sep = b == 0 ? "" : "/";
    comfort += sep + Fixed(100.0 * runs[b].summary.comfort_fraction, 1);
    corr += sep + Fixed(runs[b].summary.occupancy_correlation, 3);
  }
  return "comfort " + comfort + "%, correlation " + corr;
}

std::string RunBuilding(const Command& cmd, const ScenarioConfig& cfg) {
  const int n = static_cast<int>(cfg.world.building_shift_hours.size());
  std::vector<BuildingRun> runs;
  for (int b = 0; b < n; ++b) runs.push_back(RunBuildingDay(cfg, b));
  WriteBuildings(cmd, runs);
  json report = BaseReport(cmd, cfg);
  double energy = 0.0;
  for (const BuildingRun& r : runs) {
    report["buildings"].push_back(BuildingJson(r.summary));
    energy += r.summary.energy_kwh;
  }
  WriteReport(cmd, report);
  return "run-building: " + std::to_string(n) + " building(s), energy " +
         Fixed(energy, 2) + " kWh, " + ComfortText(runs);
}

json CommunityReport(const Command& cmd, const ScenarioConfig& cfg,
                     const CommunityRun& run) {
  json report = BaseReport(cmd, cfg);
  report["community_rows"] = run.trace.size();
  report["totals"] = TotalsJson(run.totals);
  for (const BuildingRun& b : run.buildings) {
    report["buildings"].push_back(BuildingJson(b.summary));
  }
  return report;
}

std::string RunCommunity(const Command& cmd, const ScenarioConfig& cfg) {
  const CommunityRun run = RunCommunityDay(cfg);
  WriteFileAtomic(cmd.out_dir / "community.csv", CommunityTraceCsv(run));
  WriteBuildings(cmd, run.buildings);
  WriteReport(cmd, CommunityReport(cmd, cfg, run));
  return "run-community: total cost $" + Fixed(run.totals.total_cost, 4) +
         ", " + ComfortText(run.buildings);
}

std::string ExtremePricingCmd(const Command& cmd, const ScenarioConfig& cfg) {
  const CommunityRun base = RunCommunityDay(cfg);
  const CommunityRun extreme = RunCommunityDay(ExtremePricing(cfg));
  WriteFileAtomic(cmd.out_dir / "community.csv", CommunityTraceCsv(extreme));
  WriteFileAtomic(cmd.out_dir / "community_base.csv", CommunityTraceCsv(base));
  WriteBuildings(cmd, extreme.buildings);
  json report = CommunityReport(cmd, cfg, extreme);
  report["pricing"] = "extreme";
  report["peak_battery_net_discharge_kwh"] =
      extreme.totals.peak_battery_net_discharge_kwh;
  report["peak_spot_buy_kwh"] = {
      {"base", base.totals.peak_spot_buy_kwh},
      {"extreme", extreme.totals.peak_spot_buy_kwh}};
  report["base_totals"] = TotalsJson(base.totals);
  WriteReport(cmd, report);
  return "extreme-pricing: total cost $" +
         Fixed(extreme.totals.total_cost, 4) + " (base $" +
         Fixed(base.totals.total_cost, 4) + "), peak discharge " +
         Fixed(extreme.totals.peak_battery_net_discharge_kwh, 3) +
         " kWh, peak spot buy " + Fixed(extreme.totals.peak_spot_buy_kwh, 3) +
         " kWh (base " + Fixed(base.totals.peak_spot_buy_kwh, 3) + "), " +
         ComfortText(extreme.buildings);
}

std::string SweepCmd(const Command& cmd, const ScenarioConfig& cfg) {
  const std::vector<SweepEntry> sweep = SweepAmbiguity(cfg, cmd.alphas);
  std::ostringstream csv;
  csv << "alpha,step,selected_action_index,efe,expected_cost,ambiguity,"
         "weighted_ambiguity,cumulative_cost,cumulative_ambiguity\n";
  json report = BaseReport(cmd, cfg);
  bool monotone = true;
  std::string costs;
  for (const SweepEntry& e : sweep) {
    double cum_cost = 0.0;
    double cum_amb = 0.0;
    for (const CommunityTraceRow& r : e.run.trace) {
      cum_cost += r.total_cost;
      cum_amb += r.ambiguity;
      csv << FormatNumber(e.alpha) << ',' << r.step << ','
          << r.selected_action_index << ',' << FormatNumber(r.efe) << ','
          << FormatNumber(r.expected_cost) << ',' << FormatNumber(r.ambiguity)
          << ',' << FormatNumber(e.alpha * r.ambiguity) << ','
          << FormatNumber(cum_cost) << ',' << FormatNumber(cum_amb) << '\n';
    }
    WriteFileAtomic(
        cmd.out_dir / ("community_alpha_" + FormatNumber(e.alpha) + ".csv"),
        CommunityTraceCsv(e.run));
    json entry;
    entry["alpha"] = e.alpha;
    entry["ambiguity_monotone"] = e.ambiguity_monotone;
    entry["totals"] = TotalsJson(e.run.totals);
    report["sweep"].push_back(entry);
    monotone = monotone && e.ambiguity_monotone;
    costs += (costs.empty() ? "" : " ") + FormatNumber(e.alpha) + ":$" +
             Fixed(e.run.totals.total_cost, 4);
  }
  report["ambiguity_monotone"] = monotone;
  WriteFileAtomic(cmd.out_dir / "sweep.csv", csv.str());
  WriteReport(cmd, report);
  return "sweep-ambiguity: total cost " + costs + ", ambiguity monotone " +
         (monotone ? "yes" : "NO");
}

std::string CompareBaselineCmd(const Command& cmd, const ScenarioConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  const HorizonProblem problem = DefaultHorizonProblem(cfg, 0);
  const auto t0 = Clock::now();
  const HorizonSolution horizon = OptimizeFullHorizon(problem);
  const auto t1 = Clock::now();
  const BaselineSolution baseline = BaselineFullInformation(problem);
  const auto t2 = Clock::now();
  const BuildingRun aif = RunBuildingDay(cfg, 0);

  double max_diff = 0.0;
  std::ostringstream csv;
  csv << "step,target_c,horizon_temp_c,baseline_temp_c,one_step_temp_c,"
         "horizon_airflow_kgps,horizon_supply_c,baseline_airflow_kgps,"
         "baseline_supply_c\n";
  for (int k = 0; k < problem.steps(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    max_diff = std::max(
        max_diff, std::abs(horizon.temperatures[i] - baseline.temperatures[i]));
    csv << k << ',' << FormatNumber(problem.target[i]) << ','
        << FormatNumber(horizon.temperatures[i]) << ','
        << FormatNumber(baseline.temperatures[i]) << ','
        << FormatNumber(aif.trace[i].temperature) << ','
        << FormatNumber(horizon.actions[i].airflow) << ','
        << FormatNumber(horizon.actions[i].supply_temp) << ','
        << FormatNumber(baseline.actions[i].airflow) << ','
        << FormatNumber(baseline.actions[i].supply_temp) << '\n';
  }
  WriteFileAtomic(cmd.out_dir / "baseline.csv", csv.str());

  json report = BaseReport(cmd, cfg);
  report["max_abs_temperature_diff_c"] = max_diff;
  report["horizon"] = {{"objective", horizon.objective},
                       {"iterations", horizon.iterations},
                       {"converged", horizon.converged}};
  report["baseline"] = {{"objective", baseline.objective},
                        {"iterations", baseline.iterations},
                        {"best_start", baseline.best_start},
                        {"converged", baseline.converged}};
  report["one_step"] = BuildingJson(aif.summary);
  WriteReport(cmd, report);

  const double th = std::chrono::duration<double>(t1 - t0).count();
  const double tb = std::chrono::duration<double>(t2 - t1).count();
  std::ostringstream os;
  os << "compare-baseline: max |dT| " << std::scientific << std::setprecision(2)
     << max_diff << " C, objective horizon " << std::fixed
     << std::setprecision(4) << horizon.objective << " baseline "
     << baseline.objective << " one-step " << aif.summary.realized_objective
     << " (" << std::setprecision(1) << th << " s / " << tb << " s), comfort "
     << 100.0 * aif.summary.comfort_fraction << "%, correlation "
     << std::setprecision(3) << aif.summary.occupancy_correlation;
  return os.str();
}

std::string MatrixText(const Eigen::MatrixXd& m) {
  std::string s;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) s += ' ';
      s += FormatNumber(m(r, c));
    }
    s += '\n';
  }
  return s;
}

std::string DumpModelCmd(const Command& cmd, const ScenarioConfig& cfg) {
  const CommunityModel model = CommunityModel::Build(cfg.community_model);
  std::string a = "# A 27x36 rows=observation cols=state\n";
  a += MatrixText(model.likelihood().matrix());
  std::string b;
  for (int u = 0; u < kNumActions; ++u) {
    const JointAction act = JointAction::FromIndex(u);
    b += "# B action " + std::to_string(u) + " " +
         std::string(Name(act.building)) + " " +
         std::string(Name(act.storage)) + " " + std::string(Name(act.market)) +
         " 36x36 rows=next_state cols=state\n";
    b += MatrixText(model.transition(u).matrix());
  }
  WriteFileAtomic(cmd.out_dir / "A.txt", a);
  WriteFileAtomic(cmd.out_dir / "B.txt", b);
  WriteReport(cmd, BaseReport(cmd, cfg));
  return "dump-model: wrote A.txt (27x36) and B.txt (27 x 36x36)";
}

}  // namespace

const std::vector<std::string>& Verbs() {
  static const std::vector<std::string> verbs{
      "run-building", "run-community", "compare-baseline", "sweep-ambiguity",
      "extreme-pricing", "dump-model", "validate-config"};
  return verbs;
}

std::string Describe(const std::string& verb) {
  static const std::map<std::string, std::string> text{
      {"run-building", "Simulate both buildings alone for one day"},
      {"run-community", "Simulate the full two-layer day"},
      {"compare-baseline", "Compare full-horizon inference with the full-information optimum"},
      {"sweep-ambiguity", "Rerun the community day for several ambiguity weights"},
      {"extreme-pricing", "Rerun the community day under peak-scaled prices"},
      {"dump-model", "Write the observation and transition matrices"},
      {"validate-config", "Check a config file and exit"}};
  return text.at(verb);
}

void WriteFileAtomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f << contents;
    f.flush();
    if (!f) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

int Execute(const Command& cmd, std::ostream& out, std::ostream& err) {
  const auto& verbs = Verbs();
  if (std::find(verbs.begin(), verbs.end(), cmd.verb) == verbs.end()) {
    err << "error: unknown command '" << cmd.verb << "'\n";
    return kExitConfig;
  }
  try {
    std::error_code ec;
    if (!fs::is_regular_file(cmd.config_path, ec)) {
      err << "config error: " << cmd.config_path.string()
          << " does not exist\n";
      return kExitConfig;
    }
    ScenarioConfig cfg = LoadConfig(cmd.config_path);
    if (cmd.seed_override) cfg.seeds.master = *cmd.seed_override;
    if (cmd.verb == "validate-config") {
      if (!cmd.quiet) out << "OK\n";
      return kExitOk;
    }
    fs::create_directories(cmd.out_dir, ec);
    if (ec || !fs::is_directory(cmd.out_dir)) {
      throw IoError("cannot create output directory " +
                    cmd.out_dir.string());
    }
    std::string summary;
    if (cmd.verb == "run-building") {
      summary = RunBuilding(cmd, cfg);
    } else if (cmd.verb == "run-community") {
      summary = RunCommunity(cmd, cfg);
    } else if (cmd.verb == "compare-baseline") {
      summary = CompareBaselineCmd(cmd, cfg);
    } else if (cmd.verb == "sweep-ambiguity") {
      summary = SweepCmd(cmd, cfg);
    } else if (cmd.verb == "extreme-pricing") {
      summary = ExtremePricingCmd(cmd, cfg);
    } else {
      summary = DumpModelCmd(cmd, cfg);
    }
    if (!cmd.quiet) out << summary << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    err << "numerical failure in " << e.module() << " at step " << e.step()
        << " (iteration " << e.iteration() << "): " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Two-layer active-inference building and community energy "
               "simulator"};
  app.require_subcommand(1);
  Command cmd;
  std::string alpha_list;
  for (const std::string& verb : Verbs()) {
    CLI::App* sub = app.add_subcommand(verb, Describe(verb));
    sub->add_option("--config", cmd.config_path, "Scenario config (JSON)")
        ->required();
    sub->add_flag("--quiet", cmd.quiet, "Suppress the summary line");
    if (verb == "validate-config") continue;
    sub->add_option("--out", cmd.out_dir, "Output directory");
    sub->add_option("--seed", cmd.seed_override, "Override the master seed");
    if (verb == "sweep-ambiguity") {
      sub->add_option("--alpha-list", alpha_list,
                      "Comma-separated ambiguity coefficients");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitConfig;
  }
  cmd.verb = app.get_subcommands().front()->get_name();
  if (!alpha_list.empty()) {
    cmd.alphas.clear();
    std::stringstream ss(alpha_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        const double a = std::stod(item, &used);
        if (used != item.size() || !(a >= 0.0)) throw std::invalid_argument("");
        cmd.alphas.push_back(a);
      } catch (const std::exception&) {
        err << "usage error: --alpha-list entry '" << item
            << "' is not a non-negative number\n";
        return kExitConfig;
      }
    }
  }
  return Execute(cmd, out, err);
}

}  // namespace aifgrid::cli
