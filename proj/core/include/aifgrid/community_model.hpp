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

#ifndef AIFGRID_COMMUNITY_MODEL_HPP_
#define AIFGRID_COMMUNITY_MODEL_HPP_

// Discrete generative model of the community manager: two building load
// factors and one storage factor, composed into a 36-state space with a
// 27x36 likelihood and 27 transition matrices, one per joint action.
//
// Flattening convention (every index in this library uses it):
//   state       = (b1 * 3 + b2) * 4 + ess
//   observation = (o_b1 * 3 + o_b2) * 3 + o_ess
//   action      = (u_b * 3 + u_ess) * 3 + u_m

#include <array>
#include <string_view>

#include "aifgrid/belief_math.hpp"

namespace aifgrid {

inline constexpr int kLoadLevels = 3;
inline constexpr int kSocLevels = 4;
inline constexpr int kNumStates = kLoadLevels * kLoadLevels * kSocLevels;  // 36
inline constexpr int kNumObservations = 27;
inline constexpr int kNumActions = 27;

enum class LoadLevel { kHigh = 0, kMed = 1, kLow = 2 };
enum class SocLevel { kEmpty = 0, kLow = 1, kHigh = 2, kFull = 3 };
enum class PowerSignal { kUp = 0, kSame = 1, kDown = 2 };
enum class FlowSignal { kImport = 0, kNeutral = 1, kExport = 2 };
enum class BuildingAction { kNoChange = 0, kSmallReduction = 1, kBigReduction = 2 };
enum class StorageAction { kCharge = 0, kHold = 1, kDischarge = 2 };
enum class MarketAction { kBuy = 0, kNoTransaction = 1, kSell = 2 };

std::string_view Name(LoadLevel v);
std::string_view Name(SocLevel v);
std::string_view Name(PowerSignal v);
std::string_view Name(FlowSignal v);
std::string_view Name(BuildingAction v);
std::string_view Name(StorageAction v);
std::string_view Name(MarketAction v);

struct JointState {
  LoadLevel b1 = LoadLevel::kMed;
  LoadLevel b2 = LoadLevel::kMed;
  SocLevel ess = SocLevel::kLow;

  int index() const;
  // Throws ParameterError outside 0..35.
  static JointState FromIndex(int index);
  friend bool operator==(const JointState&, const JointState&) = default;
};

struct JointObservation {
  PowerSignal b1 = PowerSignal::kSame;
  PowerSignal b2 = PowerSignal::kSame;
  FlowSignal ess = FlowSignal::kNeutral;

  int index() const;
  static JointObservation FromIndex(int index);
  friend bool operator==(const JointObservation&, const JointObservation&) = default;
};

// The building action is shared by both buildings.
struct JointAction {
  BuildingAction building = BuildingAction::kNoChange;
  StorageAction storage = StorageAction::kHold;
  MarketAction market = MarketAction::kNoTransaction;

  int index() const;
  static JointAction FromIndex(int index);
  friend bool operator==(const JointAction&, const JointAction&) = default;
};

// Per-factor parameters. Defaults are this library's instantiation; the
// factor entries themselves are not tied to measured data.
struct CommunityModelParams {
  double confusion = 0.8;       // P(correct load signal), in [0.5, 1)
  double persistence = 0.9;     // load-state self-transition mass, in (0, 1)
  double small_pull = 0.6;      // share of moving mass sent to Low
  double big_pull = 0.9;
  double ess_efficiency = 0.9;  // P(one SoC level shift) under charge/discharge
  // P(flow signal | SoC): rows Import/Neutral/Export, columns E/L/H/F.
  Eigen::Matrix<double, 3, 4> ess_likelihood = DefaultEssLikelihood();
  // Optional separate persistence for building 2 (shared kernel when < 0).
  double persistence_b2 = -1.0;
  // Mass on (Same, Same, Neutral) in the preferred observation distribution.
  double preferred_mass = 0.5;

  static Eigen::Matrix<double, 3, 4> DefaultEssLikelihood();
  void Validate() const;
};

// 3x3 load-signal confusion: correct signal with `confusion`, remainder split
// over adjacent signals (edge states give it all to their one neighbour).
StochasticMatrix BuildingLikelihood(double confusion);

// A = A_B (x) A_B (x) ess_likelihood; 27x36.
StochasticMatrix BuildObservationMatrix(double confusion,
                                        const StochasticMatrix& ess_likelihood);

// 3x3 load kernel: persistence * I + (1 - persistence) * [(1 - pull) *
// neighbour diffusion + pull * jump to Low].
StochasticMatrix BuildingTransition(double persistence, double pull);

// 4x4 SoC kernel: charge shifts up one level with probability `efficiency`,
// discharge shifts down, hold is the identity. Bounds absorb.
StochasticMatrix StorageTransition(StorageAction action, double efficiency);

struct ReductionPull {
  double small = 0.6;
  double big = 0.9;
};

// One 36x36 matrix per joint action index; the market component does not
// move the hidden state.
std::array<StochasticMatrix, kNumActions> BuildTransitionMatrices(
    double persistence, ReductionPull pull, double ess_efficiency,
    double persistence_b2 = -1.0);

class CommunityModel {
 public:
  static CommunityModel Build(const CommunityModelParams& params);
  // Assembles a model from explicit matrices (validated for shape).
  CommunityModel(StochasticMatrix likelihood,
                 std::array<StochasticMatrix, kNumActions> transitions,
                 Categorical preferred_observations);

  const StochasticMatrix& likelihood() const { return likelihood_; }
  const StochasticMatrix& transition(int action_index) const {
    return transitions_.at(static_cast<std::size_t>(action_index));
  }
  const Categorical& preferred_observations() const { return preferred_; }
  // Entropy of every likelihood column, nats.
  const Eigen::VectorXd& column_entropy() const { return column_entropy_; }

 private:
  StochasticMatrix likelihood_;
  std::array<StochasticMatrix, kNumActions> transitions_;
  Categorical preferred_;
  Eigen::VectorXd column_entropy_;
};

// Preferred observation distribution: `mass` on (Same, Same, Neutral), the
// rest uniform over the other 26 outcomes.
Categorical PreferredObservations(double mass);

// Prediction step B[u] q.
Categorical PredictBelief(const Categorical& prior, const JointAction& action,
                          const CommunityModel& model);

// q(s') proportional to sum_s B[u](s', s) q(s) A(o', s'). Throws
// DegenerateEvidenceError when the observation has zero probability under
// the prediction.
Categorical BeliefUpdate(const Categorical& prior, const JointAction& action,
                         const JointObservation& observation,
                         const CommunityModel& model);

}  // namespace aifgrid

#endif  // AIFGRID_COMMUNITY_MODEL_HPP_
