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

#include "aifgrid/scenario_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "aifgrid/errors.hpp"
#include "json.hpp"

namespace aifgrid {
namespace {

using nlohmann::json;

// Walks one JSON object, copying recognised keys into their destinations
// and remembering every problem so the caller can report all of them.
class Section {
 public:
  Section(const json& root, std::string name, std::vector<std::string>* bad,
          std::vector<std::string>* why)
      : name_(std::move(name)), bad_(bad), why_(why) {
    if (!root.contains(name_)) return;
    const json& node = root.at(name_);
    if (!node.is_object()) {
      Fail(name_, "must be an object");
      return;
    }
    node_ = &node;
  }

  void Number(const std::string& key, double* dst,
              const std::function<bool(double)>& ok, const char* rule) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (!v->is_number() || !std::isfinite(v->get<double>()) ||
        !ok(v->get<double>())) {
      Fail(Path(key), rule);
      return;
    }
    *dst = v->get<double>();
  }

  void Integer(const std::string& key, int* dst,
               const std::function<bool(long long)>& ok, const char* rule) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (!v->is_number_integer() || !ok(v->get<long long>())) {
      Fail(Path(key), rule);
      return;
    }
    *dst = static_cast<int>(v->get<long long>());
  }

  void Unsigned(const std::string& key, std::uint64_t* dst) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (!v->is_number_unsigned() && !(v->is_number_integer() &&
                                       v->get<long long>() >= 0)) {
      Fail(Path(key), "must be a non-negative integer");
      return;
    }
    *dst = v->get<std::uint64_t>();
  }

  void Choice(const std::string& key, std::string* dst,
              const std::set<std::string>& allowed) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (!v->is_string() || !allowed.contains(v->get<std::string>())) {
      std::string rule = "must be one of";
      for (const std::string& a : allowed) rule += " " + a;
      Fail(Path(key), rule);
      return;
    }
    *dst = v->get<std::string>();
  }

  void NumberList(const std::string& key, std::vector<double>* dst,
                  std::size_t min_size, const std::function<bool(double)>& ok,
                  const char* rule) {
    const json* v = Find(key);
    if (v == nullptr) return;
    bool good = v->is_array() && v->size() >= min_size;
    std::vector<double> out;
    if (good) {
      for (const json& e : *v) {
        if (!e.is_number() || !std::isfinite(e.get<double>()) ||
            !ok(e.get<double>())) {
          good = false;
          break;
        }
        out.push_back(e.get<double>());
      }
    }
    if (!good) {
      Fail(Path(key), rule);
      return;
    }
    *dst = std::move(out);
  }

  // Raw access for keys with bespoke structure.
  const json* Find(const std::string& key) {
    known_.insert(key);
    if (node_ == nullptr || !node_->contains(key)) return nullptr;
    return &node_->at(key);
  }

  void Fail(const std::string& path, const std::string& rule) {
    bad_->push_back(path);
    why_->push_back(path + ": " + rule);
  }

  std::string Path(const std::string& key) const { return name_ + "." + key; }

  // Reports keys present in the object but never asked for.
  void Finish() {
    if (node_ == nullptr) return;
    for (const auto& [key, value] : node_->items()) {
      if (!known_.contains(key)) Fail(Path(key), "unknown key");
    }
  }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::set<std::string> known_;
  std::vector<std::string>* bad_;
  std::vector<std::string>* why_;
};

bool Positive(double v) { return v > 0.0; }
bool NonNegative(double v) { return v >= 0.0; }
bool Fraction(double v) { return v >= 0.0 && v <= 1.0; }
bool OpenFraction(double v) { return v > 0.0 && v < 1.0; }
bool HalfOpenFraction(double v) { return v > 0.0 && v <= 1.0; }
bool Hour(double v) { return v >= 0.0 && v <= 24.0; }
bool Any(double) { return true; }

std::filesystem::path Resolve(const std::string& text,
                              const std::filesystem::path& base_dir) {
  std::filesystem::path p(text);
  if (p.is_relative()) p = base_dir / p;
  return p.lexically_normal();
}

json ActionJson(const HvacAction& a) {
  return {{"airflow", a.airflow}, {"supply_temp", a.supply_temp}};
}

}  // namespace

VfeConfig AgentConfig::ToVfeConfig(std::vector<double> target) const {
  VfeConfig v;
  v.sensor_std = sensor_std;
  v.preference_std = preference_std;
  v.target = std::move(target);
  v.eta_occupancy = eta_occupancy;
  v.eta_infiltration = eta_infiltration;
  v.zeta_airflow = zeta_airflow;
  v.zeta_supply = zeta_supply;
  v.max_iters = max_iters;
  v.grad_tol = grad_tol;
  return v;
}

ScenarioConfig ParseConfig(const std::string& json_text,
                           const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what(),
                      {"<document>"});
  }
  if (!root.is_object()) {
    throw ConfigError("config must be a JSON object", {"<document>"});
  }

  ScenarioConfig cfg;
  std::vector<std::string> bad;
  std::vector<std::string> why;
  const std::set<std::string> sections{
      "world",   "agents", "community_model", "planner",
      "economics", "market", "profiles",       "seeds"};
  for (const auto& [key, value] : root.items()) {
    if (!sections.contains(key)) {
      bad.push_back(key);
      why.push_back(key + ": unknown section");
    }
  }

  {
    Section s(root, "world", &bad, &why);
    WorldConfig& w = cfg.world;
    s.Number("specific_heat", &w.thermal.specific_heat, Positive, "must be > 0");
    s.Number("capacity", &w.thermal.capacity, Positive, "must be > 0");
    s.Number("envelope_ua", &w.thermal.envelope_ua, Positive, "must be > 0");
    s.Number("occupant_gain", &w.thermal.occupant_gain, Positive,
             "must be > 0");
    s.Number("dt", &w.thermal.dt, Positive, "must be > 0");
    s.Number("initial_temp", &w.initial_temp, Any, "must be a number");
    s.Number("sensor_std", &w.sensor_std, NonNegative, "must be >= 0");
    s.Number("cop", &w.cop, Positive, "must be > 0");
    s.Number("base_load_kw", &w.base_load_kw, NonNegative, "must be >= 0");
    s.Number("occupant_load_kw", &w.occupant_load_kw, NonNegative,
             "must be >= 0");
    s.NumberList("building_shift_hours", &w.building_shift_hours, 1, Any,
                 "must be a non-empty list of numbers");
    s.Finish();
  }
  {
    Section s(root, "agents", &bad, &why);
    AgentConfig& a = cfg.agents;
    s.Number("sensor_std", &a.sensor_std, Positive, "must be > 0");
    s.Number("preference_std", &a.preference_std, Positive, "must be > 0");
    s.Number("eta_occupancy", &a.eta_occupancy, Positive, "must be > 0");
    s.Number("eta_infiltration", &a.eta_infiltration, Positive, "must be > 0");
    s.Number("zeta_airflow", &a.zeta_airflow, Positive, "must be > 0");
    s.Number("zeta_supply", &a.zeta_supply, Positive, "must be > 0");
    s.Integer("max_iters", &a.max_iters,
              [](long long v) { return v >= 1; }, "must be an integer >= 1");
    s.Number("grad_tol", &a.grad_tol, NonNegative, "must be >= 0");
    s.Number("occupancy_std", &a.occupancy_std, Positive, "must be > 0");
    s.Number("infiltration_std", &a.infiltration_std, Positive, "must be > 0");
    s.Number("target_day", &a.target_day, Any, "must be a number");
    s.Number("target_night", &a.target_night, Any, "must be a number");
    s.Number("day_start_h", &a.day_start_h, Hour, "must be in [0, 24]");
    s.Number("day_end_h", &a.day_end_h, Hour, "must be in [0, 24]");
    s.Number("comfort_band", &a.comfort_band, Positive, "must be > 0");
    s.Number("warmup_h", &a.warmup_h, Hour, "must be in [0, 24]");
    s.Choice("prior_mode", &a.prior_mode, {"schedule", "ar1"});
    s.Integer("prior_delay_steps", &a.prior_delay_steps,
              [](long long v) { return v >= 0 && v < kBuildingSteps; },
              "must be an integer in [0, 288)");
    s.Number("ar1_occupancy", &a.ar1_occupancy, Fraction, "must be in [0, 1]");
    s.Number("ar1_infiltration", &a.ar1_infiltration, Fraction,
             "must be in [0, 1]");
    if (const json* v = s.Find("initial_action"); v != nullptr) {
      if (!v->is_object() || v->size() != 2 || !v->contains("airflow") ||
          !v->contains("supply_temp") || !v->at("airflow").is_number() ||
          !v->at("supply_temp").is_number()) {
        s.Fail(s.Path("initial_action"),
               "must be {\"airflow\": x, \"supply_temp\": y}");
      } else {
        HvacAction act{v->at("airflow").get<double>(),
                       v->at("supply_temp").get<double>()};
        if (!act.InBounds()) {
          s.Fail(s.Path("initial_action"), "outside the HVAC bounds");
        } else {
          a.initial_action = act;
        }
      }
    }
    s.Finish();
    if (a.day_end_h <= a.day_start_h) {
      bad.push_back("agents.day_end_h");
      why.push_back("agents.day_end_h: must exceed day_start_h");
    }
  }
  {
    Section s(root, "community_model", &bad, &why);
    CommunityModelParams& m = cfg.community_model;
    s.Number("confusion", &m.confusion,
             [](double v) { return v >= 0.5 && v < 1.0; },
             "must be in [0.5, 1)");
    s.Number("persistence", &m.persistence, OpenFraction, "must be in (0, 1)");
    s.Number("persistence_b2", &m.persistence_b2,
             [](double v) { return v < 0.0 || OpenFraction(v); },
             "must be in (0, 1), or negative to share building 1's kernel");
    s.Number("small_pull", &m.small_pull, Fraction, "must be in [0, 1]");
    s.Number("big_pull", &m.big_pull, Fraction, "must be in [0, 1]");
    s.Number("ess_efficiency", &m.ess_efficiency, HalfOpenFraction,
             "must be in (0, 1]");
    s.Number("preferred_mass", &m.preferred_mass, HalfOpenFraction,
             "must be in (0, 1]");
    if (const json* v = s.Find("ess_likelihood"); v != nullptr) {
      bool good = v->is_array() && v->size() == 3;
      Eigen::Matrix<double, 3, 4> lik;
      for (int r = 0; good && r < 3; ++r) {
        const json& row = v->at(static_cast<std::size_t>(r));
        good = row.is_array() && row.size() == 4;
        for (int c = 0; good && c < 4; ++c) {
          const json& e = row.at(static_cast<std::size_t>(c));
          good = e.is_number();
          if (good) lik(r, c) = e.get<double>();
        }
      }
      if (good) {
        try {
          StochasticMatrix::FromMatrix(lik);
          m.ess_likelihood = lik;
        } catch (const ParameterError&) {
          good = false;
        }
      }
      if (!good) {
        s.Fail(s.Path("ess_likelihood"),
               "must be 3 rows x 4 columns with columns summing to 1");
      }
    }
    s.Finish();
  }
  {
    Section s(root, "planner", &bad, &why);
    EfeConfig& p = cfg.planner;
    s.Integer("horizon", &p.horizon,
              [](long long v) { return v >= 1 && v <= 8; },
              "must be an integer in [1, 8]");
    s.Number("alpha_amb", &p.alpha_amb, NonNegative, "must be >= 0");
    std::string mode =
        p.mode == EfeMode::kCostAmbiguity ? "cost_ambiguity" : "risk_ambiguity";
    s.Choice("mode", &mode, {"cost_ambiguity", "risk_ambiguity"});
    p.mode = mode == "cost_ambiguity" ? EfeMode::kCostAmbiguity
                                      : EfeMode::kRiskAmbiguity;
    std::string search =
        p.search == SearchMode::kExhaustive ? "exhaustive" : "beam";
    s.Choice("search", &search, {"exhaustive", "beam"});
    p.search = search == "exhaustive" ? SearchMode::kExhaustive
                                      : SearchMode::kBeam;
    s.Integer("beam_width", &p.beam_width,
              [](long long v) { return v >= 1 && v <= 100000000; },
              "must be a positive integer");
    s.Finish();
    if (p.search == SearchMode::kExhaustive && p.horizon > 5) {
      bad.push_back("planner.horizon");
      why.push_back("planner.horizon: exhaustive search supports <= 5");
    }
  }
  {
    Section s(root, "economics", &bad, &why);
    EconomicsConfig& e = cfg.economics;
    s.Number("lambda_dev", &e.weights.lambda_dev, NonNegative, "must be >= 0");
    s.Number("lambda_upv", &e.weights.lambda_upv, NonNegative, "must be >= 0");
    s.Number("lambda_bat", &e.weights.lambda_bat, NonNegative, "must be >= 0");
    s.Number("sell_ratio", &e.weights.sell_ratio, Fraction, "must be in [0, 1]");
    std::vector<double> loads(e.state.load_kw.begin(), e.state.load_kw.end());
    s.NumberList("load_kw", &loads, 3, NonNegative,
                 "must be three non-negative numbers High, Med, Low");
    if (loads.size() != 3 || !(loads[0] > loads[1] && loads[1] > loads[2])) {
      s.Fail(s.Path("load_kw"), "must be strictly decreasing High > Med > Low");
    } else {
      std::copy(loads.begin(), loads.end(), e.state.load_kw.begin());
    }
    std::vector<double> red(e.state.reduction_kw.begin(),
                            e.state.reduction_kw.end());
    s.NumberList("reduction_kw", &red, 3, NonNegative,
                 "must be three non-negative numbers");
    if (red.size() != 3) {
      s.Fail(s.Path("reduction_kw"), "must have exactly three entries");
    } else {
      std::copy(red.begin(), red.end(), e.state.reduction_kw.begin());
    }
    s.Number("trade_block_kw", &e.state.trade_block_kw, NonNegative,
             "must be >= 0");
    s.Number("ess_power_kw", &e.state.ess_power_kw, NonNegative,
             "must be >= 0");
    s.Number("small_offset", &e.small_offset, NonNegative, "must be >= 0");
    s.Number("big_offset", &e.big_offset, NonNegative, "must be >= 0");
    s.Number("target_min", &e.target_min, Any, "must be a number");
    s.Number("target_max", &e.target_max, Any, "must be a number");
    s.Choice("building_signal", &e.building_signal, {"level", "trend"});
    s.Number("level_deadband", &e.level_deadband, Fraction, "must be in [0, 1]");
    s.Number("power_deadband", &e.power_deadband, NonNegative, "must be >= 0");
    s.Number("flow_deadband", &e.flow_deadband, NonNegative, "must be >= 0");
    s.Number("ess_capacity_kwh", &e.ess_capacity_kwh, Positive, "must be > 0");
    s.Number("ess_max_power_kw", &e.ess_max_power_kw, Positive, "must be > 0");
    s.Number("ess_efficiency", &e.ess_efficiency, HalfOpenFraction,
             "must be in (0, 1]");
    s.Number("ess_initial_soc", &e.ess_initial_soc, Fraction,
             "must be in [0, 1]");
    s.Finish();
    if (e.target_max < e.target_min) {
      bad.push_back("economics.target_max");
      why.push_back("economics.target_max: must be >= target_min");
    }
  }
  {
    Section s(root, "market", &bad, &why);
    MarketConfig& m = cfg.market;
    s.Number("price_base", &m.price_base, NonNegative, "must be >= 0");
    s.Number("price_peak", &m.price_peak, NonNegative, "must be >= 0");
    s.Number("price_peak_hour", &m.price_peak_hour, Hour, "must be in [0, 24]");
    s.Number("price_peak_width_h", &m.price_peak_width_h, Positive,
             "must be > 0");
    s.Number("price_dip", &m.price_dip, NonNegative, "must be >= 0");
    s.Number("price_dip_hour", &m.price_dip_hour, Hour, "must be in [0, 24]");
    s.Number("price_dip_width_h", &m.price_dip_width_h, Positive,
             "must be > 0");
    s.Number("price_scale", &m.price_scale, NonNegative, "must be >= 0");
    s.Number("peak_multiplier", &m.peak_multiplier, NonNegative,
             "must be >= 0");
    s.Number("peak_start_h", &m.peak_start_h, Hour, "must be in [0, 24]");
    s.Number("peak_end_h", &m.peak_end_h, Hour, "must be in [0, 24]");
    s.Number("pv_peak_kw", &m.pv_peak_kw, NonNegative, "must be >= 0");
    s.Number("pv_peak_hour", &m.pv_peak_hour, Hour, "must be in [0, 24]");
    s.Number("sunrise_h", &m.sunrise_h, Hour, "must be in [0, 24]");
    s.Number("sunset_h", &m.sunset_h, Hour, "must be in [0, 24]");
    s.Number("da_error", &m.da_error, Fraction, "must be in [0, 1]");
    s.Finish();
    if (m.price_base < m.price_dip) {
      bad.push_back("market.price_dip");
      why.push_back("market.price_dip: must not exceed price_base");
    }
    if (!(m.sunrise_h < m.pv_peak_hour && m.pv_peak_hour < m.sunset_h)) {
      bad.push_back("market.pv_peak_hour");
      why.push_back("market.pv_peak_hour: must lie between sunrise and sunset");
    }
  }
  {
    Section s(root, "profiles", &bad, &why);
    if (const json* v = s.Find("buildings"); v != nullptr) {
      bool good = v->is_array();
      std::vector<std::filesystem::path> paths;
      if (good) {
        for (const json& e : *v) {
          if (!e.is_string()) {
            good = false;
            break;
          }
          paths.push_back(Resolve(e.get<std::string>(), base_dir));
        }
      }
      if (!good) {
        s.Fail(s.Path("buildings"), "must be a list of file paths");
      } else {
        cfg.profiles.buildings = std::move(paths);
      }
    }
    if (const json* v = s.Find("market"); v != nullptr) {
      if (v->is_null()) {
        cfg.profiles.market.reset();
      } else if (!v->is_string()) {
        s.Fail(s.Path("market"), "must be a file path or null");
      } else {
        cfg.profiles.market = Resolve(v->get<std::string>(), base_dir);
      }
    }
    s.Finish();
    for (std::size_t i = 0; i < cfg.profiles.buildings.size(); ++i) {
      if (!std::filesystem::exists(cfg.profiles.buildings[i])) {
        const std::string key = "profiles.buildings[" + std::to_string(i) + "]";
        bad.push_back(key);
        why.push_back(key + ": file not found: " +
                      cfg.profiles.buildings[i].string());
      }
    }
    if (cfg.profiles.market && !std::filesystem::exists(*cfg.profiles.market)) {
      bad.push_back("profiles.market");
      why.push_back("profiles.market: file not found: " +
                    cfg.profiles.market->string());
    }
  }
  {
    Section s(root, "seeds", &bad, &why);
    s.Unsigned("master", &cfg.seeds.master);
    s.Finish();
  }
  if (!cfg.profiles.buildings.empty() &&
      cfg.profiles.buildings.size() != cfg.world.building_shift_hours.size()) {
    bad.push_back("profiles.buildings");
    why.push_back(
        "profiles.buildings: need one file per building in "
        "world.building_shift_hours");
  }

  if (!bad.empty()) {
    std::string msg = "invalid config:";
    for (const std::string& w : why) msg += "\n  " + w;
    throw ConfigError(msg, bad);
  }
  return cfg;
}

ScenarioConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str(), path.parent_path());
}

std::string ConfigToJson(const ScenarioConfig& cfg) {
  const WorldConfig& w = cfg.world;
  const AgentConfig& a = cfg.agents;
  const CommunityModelParams& cm = cfg.community_model;
  const EfeConfig& p = cfg.planner;
  const EconomicsConfig& e = cfg.economics;
  const MarketConfig& m = cfg.market;

  json lik = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(cm.ess_likelihood(r, c));
    lik.push_back(row);
  }
  json buildings = json::array();
  for (const auto& b : cfg.profiles.buildings) buildings.push_back(b.string());

  json j = {
      {"world",
       {{"specific_heat", w.thermal.specific_heat},
        {"capacity", w.thermal.capacity},
        {"envelope_ua", w.thermal.envelope_ua},
        {"occupant_gain", w.thermal.occupant_gain},
        {"dt", w.thermal.dt},
        {"initial_temp", w.initial_temp},
        {"sensor_std", w.sensor_std},
        {"cop", w.cop},
        {"base_load_kw", w.base_load_kw},
        {"occupant_load_kw", w.occupant_load_kw},
        {"building_shift_hours", w.building_shift_hours}}},
      {"agents",
       {{"sensor_std", a.sensor_std},
        {"preference_std", a.preference_std},
        {"eta_occupancy", a.eta_occupancy},
        {"eta_infiltration", a.eta_infiltration},
        {"zeta_airflow", a.zeta_airflow},
        {"zeta_supply", a.zeta_supply},
        {"max_iters", a.max_iters},
        {"grad_tol", a.grad_tol},
        {"occupancy_std", a.occupancy_std},
        {"infiltration_std", a.infiltration_std},
        {"target_day", a.target_day},
        {"target_night", a.target_night},
        {"day_start_h", a.day_start_h},
        {"day_end_h", a.day_end_h},
        {"comfort_band", a.comfort_band},
        {"warmup_h", a.warmup_h},
        {"prior_mode", a.prior_mode},
        {"prior_delay_steps", a.prior_delay_steps},
        {"ar1_occupancy", a.ar1_occupancy},
        {"ar1_infiltration", a.ar1_infiltration},
        {"initial_action", ActionJson(a.initial_action)}}},
      {"community_model",
       {{"confusion", cm.confusion},
        {"persistence", cm.persistence},
        {"persistence_b2", cm.persistence_b2},
        {"small_pull", cm.small_pull},
        {"big_pull", cm.big_pull},
        {"ess_efficiency", cm.ess_efficiency},
        {"preferred_mass", cm.preferred_mass},
        {"ess_likelihood", lik}}},
      {"planner",
       {{"horizon", p.horizon},
        {"alpha_amb", p.alpha_amb},
        {"mode", p.mode == EfeMode::kCostAmbiguity ? "cost_ambiguity"
                                                   : "risk_ambiguity"},
        {"search", p.search == SearchMode::kExhaustive ? "exhaustive" : "beam"},
        {"beam_width", p.beam_width}}},
      {"economics",
       {{"lambda_dev", e.weights.lambda_dev},
        {"lambda_upv", e.weights.lambda_upv},
        {"lambda_bat", e.weights.lambda_bat},
        {"sell_ratio", e.weights.sell_ratio},
        {"load_kw", e.state.load_kw},
        {"reduction_kw", e.state.reduction_kw},
        {"trade_block_kw", e.state.trade_block_kw},
        {"ess_power_kw", e.state.ess_power_kw},
        {"small_offset", e.small_offset},
        {"big_offset", e.big_offset},
        {"target_min", e.target_min},
        {"target_max", e.target_max},
        {"building_signal", e.building_signal},
        {"level_deadband", e.level_deadband},
        {"power_deadband", e.power_deadband},
        {"flow_deadband", e.flow_deadband},
        {"ess_capacity_kwh", e.ess_capacity_kwh},
        {"ess_max_power_kw", e.ess_max_power_kw},
        {"ess_efficiency", e.ess_efficiency},
        {"ess_initial_soc", e.ess_initial_soc}}},
      {"market",
       {{"price_base", m.price_base},
        {"price_peak", m.price_peak},
        {"price_peak_hour", m.price_peak_hour},
        {"price_peak_width_h", m.price_peak_width_h},
        {"price_dip", m.price_dip},
        {"price_dip_hour", m.price_dip_hour},
        {"price_dip_width_h", m.price_dip_width_h},
        {"price_scale", m.price_scale},
        {"peak_multiplier", m.peak_multiplier},
        {"peak_start_h", m.peak_start_h},
        {"peak_end_h", m.peak_end_h},
        {"pv_peak_kw", m.pv_peak_kw},
        {"pv_peak_hour", m.pv_peak_hour},
        {"sunrise_h", m.sunrise_h},
        {"sunset_h", m.sunset_h},
        {"da_error", m.da_error}}},
      {"profiles",
       {{"buildings", buildings},
        {"market", cfg.profiles.market ? json(cfg.profiles.market->string())
                                       : json(nullptr)}}},
      {"seeds", {{"master", cfg.seeds.master}}},
  };
  return j.dump(2);
}

ScenarioConfig ExtremePricing(ScenarioConfig cfg) {
  // Doubled everywhere; the peak window reaches three times the baseline.
  cfg.market.price_scale *= 2.0;
  cfg.market.peak_multiplier *= 1.5;
  cfg.market.peak_start_h = 16.0;
  cfg.market.peak_end_h = 20.0;
  return cfg;
}

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 gen(seq);
  return gen();
}

}  // namespace aifgrid
