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

#include "aifgrid/community_model.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "aifgrid/errors.hpp"

namespace aifgrid {
namespace {

void CheckIndex(int index, int count, const char* what) {
  if (index < 0 || index >= count) {
    throw ParameterError(std::string(what) + " index out of range: " +
                         std::to_string(index));
  }
}

void CheckProbability(double value, double lo, double hi, bool lo_open,
                      bool hi_open, const char* name) {
  const bool below = lo_open ? !(value > lo) : !(value >= lo);
  const bool above = hi_open ? !(value < hi) : !(value <= hi);
  if (below || above || !std::isfinite(value)) {
    throw ParameterError(std::string(name) + " out of range: " +
                         std::to_string(value));
  }
}

Eigen::MatrixXd NeighborDiffusion() {
  // High -> Med, Med -> half High / half Low, Low -> Med.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d(1, 0) = 1.0;
  d(0, 1) = 0.5;
  d(2, 1) = 0.5;
  d(1, 2) = 1.0;
  return d;
}

template <std::size_t... I>
std::array<StochasticMatrix, sizeof...(I)> ToArray(
    const std::vector<StochasticMatrix>& v, std::index_sequence<I...>) {
  return {v[I]...};
}

}  // namespace

std::string_view Name(LoadLevel v) {
  static constexpr std::string_view kNames[] = {"High", "Med", "Low"};
  return kNames[static_cast<int>(v)];
}
std::string_view Name(SocLevel v) {
  static constexpr std::string_view kNames[] = {"Empty", "Low", "High",
                                                "Full"};
  return kNames[static_cast<int>(v)];
}
std::string_view Name(PowerSignal v) {
  static constexpr std::string_view kNames[] = {"Up", "Same", "Down"};
  return kNames[static_cast<int>(v)];
}
std::string_view Name(FlowSignal v) {
  static constexpr std::string_view kNames[] = {"Import", "Neutral",
                                                "Export"};
  return kNames[static_cast<int>(v)];
}
std::string_view Name(BuildingAction v) {
  static constexpr std::string_view kNames[] = {"NoChange", "SmallReduction",
                                                "BigReduction"};
  return kNames[static_cast<int>(v)];
}
std::string_view Name(StorageAction v) {
  static constexpr std::string_view kNames[] = {"Charge", "Hold",
                                                "Discharge"};
  return kNames[static_cast<int>(v)];
}
std::string_view Name(MarketAction v) {
  static constexpr std::string_view kNames[] = {"Buy", "NoTransaction",
                                                "Sell"};
  return kNames[static_cast<int>(v)];
}

int JointState::index() const {
  return (static_cast<int>(b1) * 3 + static_cast<int>(b2)) * 4 +
         static_cast<int>(ess);
}

JointState JointState::FromIndex(int index) {
  CheckIndex(index, kNumStates, "state");
  JointState s;
  s.ess = static_cast<SocLevel>(index % 4);
  s.b2 = static_cast<LoadLevel>((index / 4) % 3);
  s.b1 = static_cast<LoadLevel>(index / 12);
  return s;
}

int JointObservation::index() const {
  return (static_cast<int>(b1) * 3 + static_cast<int>(b2)) * 3 +
         static_cast<int>(ess);
}

JointObservation JointObservation::FromIndex(int index) {
  CheckIndex(index, kNumObservations, "observation");
  JointObservation o;
  o.ess = static_cast<FlowSignal>(index % 3);
  o.b2 = static_cast<PowerSignal>((index / 3) % 3);
  o.b1 = static_cast<PowerSignal>(index / 9);
  return o;
}

int JointAction::index() const {
  return (static_cast<int>(building) * 3 + static_cast<int>(storage)) * 3 +
         static_cast<int>(market);
}

JointAction JointAction::FromIndex(int index) {
  CheckIndex(index, kNumActions, "action");
  JointAction a;
  a.market = static_cast<MarketAction>(index % 3);
  a.storage = static_cast<StorageAction>((index / 3) % 3);
  a.building = static_cast<BuildingAction>(index / 9);
  return a;
}

Eigen::Matrix<double, 3, 4> CommunityModelParams::DefaultEssLikelihood() {
  Eigen::Matrix<double, 3, 4> m;
  m << 0.80, 0.50, 0.15, 0.05,
       0.15, 0.35, 0.35, 0.15,
       0.05, 0.15, 0.50, 0.80;
  return m;
}

void CommunityModelParams::Validate() const {
  CheckProbability(confusion, 0.5, 1.0, false, true, "confusion");
  CheckProbability(persistence, 0.0, 1.0, true, true, "persistence");
  if (persistence_b2 >= 0.0) {
    CheckProbability(persistence_b2, 0.0, 1.0, true, true, "persistence_b2");
  }
  CheckProbability(small_pull, 0.0, 1.0, false, false, "small_pull");
  CheckProbability(big_pull, 0.0, 1.0, false, false, "big_pull");
  CheckProbability(ess_efficiency, 0.0, 1.0, true, false, "ess_efficiency");
  CheckProbability(preferred_mass, 0.0, 1.0, true, false, "preferred_mass");
  StochasticMatrix::FromMatrix(ess_likelihood);
}

StochasticMatrix BuildingLikelihood(double confusion) {
  CheckProbability(confusion, 0.5, 1.0, false, true, "confusion");
  const double rest = 1.0 - confusion;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 0) = confusion;
  m(1, 0) = rest;
  m(0, 1) = rest / 2.0;
  m(1, 1) = confusion;
  m(2, 1) = rest / 2.0;
  m(1, 2) = rest;
  m(2, 2) = confusion;
  return StochasticMatrix::FromMatrix(m);
}

StochasticMatrix BuildObservationMatrix(
    double confusion, const StochasticMatrix& ess_likelihood) {
  if (ess_likelihood.rows() != 3 || ess_likelihood.cols() != 4) {
    throw ParameterError("ess likelihood must be 3x4");
  }
  const StochasticMatrix ab = BuildingLikelihood(confusion);
  return Kron(Kron(ab, ab), ess_likelihood);
}

StochasticMatrix BuildingTransition(double persistence, double pull) {
  CheckProbability(persistence, 0.0, 1.0, true, true, "persistence");
  CheckProbability(pull, 0.0, 1.0, false, false, "pull");
  Eigen::MatrixXd to_low = Eigen::MatrixXd::Zero(3, 3);
  to_low.row(static_cast<int>(LoadLevel::kLow)).setOnes();
  const Eigen::MatrixXd move =
      (1.0 - pull) * NeighborDiffusion() + pull * to_low;
  return StochasticMatrix::FromMatrix(
      persistence * Eigen::MatrixXd::Identity(3, 3) +
      (1.0 - persistence) * move);
}

StochasticMatrix StorageTransition(StorageAction action, double efficiency) {
  CheckProbability(efficiency, 0.0, 1.0, true, false, "ess_efficiency");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  if (action == StorageAction::kHold) return StochasticMatrix::FromMatrix(m);
  const int shift = action == StorageAction::kCharge ? 1 : -1;
  for (int s = 0; s < 4; ++s) {
    const int next = s + shift;
    if (next < 0 || next > 3) continue;  // bound absorbs
    m(s, s) = 1.0 - efficiency;
    m(next, s) = efficiency;
  }
  return StochasticMatrix::FromMatrix(m);
}

std::array<StochasticMatrix, kNumActions> BuildTransitionMatrices(
    double persistence, ReductionPull pull, double ess_efficiency,
    double persistence_b2) {
  const double p2 = persistence_b2 < 0.0 ? persistence : persistence_b2;
  const double pulls[3] = {0.0, pull.small, pull.big};
  std::vector<StochasticMatrix> joint;
  joint.reserve(kNumActions);
  for (int ub = 0; ub < 3; ++ub) {
    const StochasticMatrix bb =
        Kron(BuildingTransition(persistence, pulls[ub]),
             BuildingTransition(p2, pulls[ub]));
    for (int ue = 0; ue < 3; ++ue) {
      const StochasticMatrix b = Kron(
          bb, StorageTransition(static_cast<StorageAction>(ue),
                                ess_efficiency));
      // The market component leaves the hidden state untouched.
      for (int um = 0; um < 3; ++um) joint.push_back(b);
    }
  }
  return ToArray(joint, std::make_index_sequence<kNumActions>{});
}

Categorical PreferredObservations(double mass) {
  CheckProbability(mass, 0.0, 1.0, true, false, "preferred_mass");
  const int preferred =
      JointObservation{PowerSignal::kSame, PowerSignal::kSame,
                       FlowSignal::kNeutral}
          .index();
  Eigen::VectorXd p = Eigen::VectorXd::Constant(
      kNumObservations, (1.0 - mass) / (kNumObservations - 1));
  p(preferred) = mass;
  return Categorical::FromVector(p);
}

CommunityModel CommunityModel::Build(const CommunityModelParams& params) {
  params.Validate();
  return CommunityModel(
      BuildObservationMatrix(params.confusion,
                             StochasticMatrix::FromMatrix(params.ess_likelihood)),
      BuildTransitionMatrices(params.persistence,
                              {params.small_pull, params.big_pull},
                              params.ess_efficiency, params.persistence_b2),
      PreferredObservations(params.preferred_mass));
}

CommunityModel::CommunityModel(
    StochasticMatrix likelihood,
    std::array<StochasticMatrix, kNumActions> transitions,
    Categorical preferred_observations)
    : likelihood_(std::move(likelihood)),
      transitions_(std::move(transitions)),
      preferred_(std::move(preferred_observations)) {
  if (likelihood_.rows() != kNumObservations ||
      likelihood_.cols() != kNumStates) {
    throw ParameterError("likelihood must be 27x36");
  }
  for (const StochasticMatrix& b : transitions_) {
    if (b.rows() != kNumStates || b.cols() != kNumStates) {
      throw ParameterError("transition matrices must be 36x36");
    }
  }
  if (preferred_.size() != kNumObservations) {
    throw ParameterError("preferred observations must have 27 entries");
  }
  column_entropy_.resize(kNumStates);
  for (int s = 0; s < kNumStates; ++s) {
    const Eigen::VectorXd col = likelihood_.matrix().col(s);
    column_entropy_(s) =
        Entropy(std::span<const double>(col.data(), kNumObservations));
  }
}

Categorical PredictBelief(const Categorical& prior, const JointAction& action,
                          const CommunityModel& model) {
  if (prior.size() != kNumStates) {
    throw ParameterError("belief must have 36 entries");
  }
  return Categorical::FromVector(model.transition(action.index()).matrix() *
                                 prior.vector());
}

Categorical BeliefUpdate(const Categorical& prior, const JointAction& action,
                         const JointObservation& observation,
                         const CommunityModel& model) {
  const Categorical predicted = PredictBelief(prior, action, model);
  const Eigen::VectorXd weighted = predicted.vector().cwiseProduct(
      model.likelihood().matrix().row(observation.index()).transpose());
  return Normalize(weighted);
}

}  // namespace aifgrid
