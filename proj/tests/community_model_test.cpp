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

#include <array>
#include <cmath>
#include <random>
#include <utility>

#include <gtest/gtest.h>

#include "aifgrid/errors.hpp"
#include "oracles.hpp"

namespace aifgrid {
namespace {

using oracle::RandomStochastic;
using oracle::Repeat;

TEST(Indexing, StateBijection) {
  for (int i = 0; i < kNumStates; ++i) {
    const JointState s = JointState::FromIndex(i);
    EXPECT_EQ(s.index(), i);
    EXPECT_EQ((static_cast<int>(s.b1) * 3 + static_cast<int>(s.b2)) * 4 +
                  static_cast<int>(s.ess),
              i);
  }
  EXPECT_THROW(JointState::FromIndex(36), ParameterError);
  EXPECT_THROW(JointState::FromIndex(-1), ParameterError);
}

TEST(Indexing, ObservationAndActionBijections) {
  for (int i = 0; i < kNumObservations; ++i) {
    const JointObservation o = JointObservation::FromIndex(i);
    EXPECT_EQ(o.index(), i);
    EXPECT_EQ((static_cast<int>(o.b1) * 3 + static_cast<int>(o.b2)) * 3 +
                  static_cast<int>(o.ess),
              i);
  }
  for (int i = 0; i < kNumActions; ++i) {
    const JointAction a = JointAction::FromIndex(i);
    EXPECT_EQ(a.index(), i);
    EXPECT_EQ((static_cast<int>(a.building) * 3 + static_cast<int>(a.storage)) * 3 +
                  static_cast<int>(a.market),
              i);
  }
  const JointAction idle{BuildingAction::kNoChange, StorageAction::kHold,
                         MarketAction::kNoTransaction};
  EXPECT_EQ(idle.index(), 4);
}

TEST(ObservationMatrix, ShapeAndStochasticity) {
  const CommunityModel m = CommunityModel::Build({});
  ASSERT_EQ(m.likelihood().rows(), 27);
  ASSERT_EQ(m.likelihood().cols(), 36);
  for (int c = 0; c < 36; ++c) {
    double sum = 0.0;
    for (int r = 0; r < 27; ++r) sum += m.likelihood()(r, c);
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(ObservationMatrix, HighHighFullColumn) {
  const CommunityModel m = CommunityModel::Build({});
  const int s = JointState{LoadLevel::kHigh, LoadLevel::kHigh, SocLevel::kFull}.index();
  const int o = JointObservation{PowerSignal::kUp, PowerSignal::kUp, FlowSignal::kExport}.index();
  const double p_export_full = CommunityModelParams::DefaultEssLikelihood()(2, 3);
  EXPECT_NEAR(m.likelihood()(o, s), 0.8 * 0.8 * p_export_full, 1e-15);
}

TEST(ObservationMatrix, NearPerfectSensingIsNearlyDeterministic) {
  Eigen::MatrixXd ess = Eigen::MatrixXd::Zero(3, 4);
  ess(0, 0) = ess(1, 1) = ess(1, 2) = ess(2, 3) = 1.0;
  const StochasticMatrix a =
      BuildObservationMatrix(1.0 - 1e-12, StochasticMatrix::FromMatrix(ess));
  for (int c = 0; c < 36; ++c) {
    int ones = 0;
    for (int r = 0; r < 27; ++r) {
      const double v = a(r, c);
      EXPECT_TRUE(v < 1e-11 || v > 1.0 - 1e-11);
      ones += v > 0.5;
    }
    EXPECT_EQ(ones, 1);
  }
}

TEST(ObservationMatrix, InvalidConfusionRejected) {
  EXPECT_THROW(BuildingLikelihood(1.0), ParameterError);
  EXPECT_THROW(BuildingLikelihood(0.4), ParameterError);
}

TEST(ObservationMatrix, EqualsKronOfFactors) {
  const CommunityModelParams params;
  const CommunityModel m = CommunityModel::Build(params);
  Eigen::Matrix3d ab;  // tri-diagonal confusion, edges give residual to neighbour
  ab << 0.8, 0.1, 0.0,
        0.2, 0.8, 0.2,
        0.0, 0.1, 0.8;
  const Eigen::MatrixXd ref =
      oracle::Kron(oracle::Kron(ab, ab), params.ess_likelihood);
  EXPECT_LE((m.likelihood().matrix() - ref).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TransitionMatrices, AllColumnStochasticExhaustive) {
  const CommunityModel m = CommunityModel::Build({});
  for (int u = 0; u < kNumActions; ++u) {
    const StochasticMatrix& b = m.transition(u);
    ASSERT_EQ(b.rows(), 36);
    ASSERT_EQ(b.cols(), 36);
    for (int c = 0; c < 36; ++c) {
      double sum = 0.0;
      for (int r = 0; r < 36; ++r) {
        EXPECT_GE(b(r, c), 0.0);
        sum += b(r, c);
      }
      EXPECT_NEAR(sum, 1.0, 1e-9) << "u=" << u << " col=" << c;
    }
  }
}

TEST(TransitionMatrices, FactorsMatchReference) {
  const CommunityModelParams params;
  const CommunityModel m = CommunityModel::Build(params);
  const double pulls[3] = {0.0, params.small_pull, params.big_pull};
  for (int u = 0; u < kNumActions; ++u) {
    const JointAction a = JointAction::FromIndex(u);
    const Eigen::Matrix3d bb =
        oracle::BuildingKernel(params.persistence, pulls[static_cast<int>(a.building)]);
    const Eigen::MatrixXd be = StorageTransition(a.storage, params.ess_efficiency).matrix();
    const Eigen::MatrixXd ref = oracle::Kron(oracle::Kron(bb, bb), be);
    EXPECT_LE((m.transition(u).matrix() - ref).cwiseAbs().maxCoeff(), 1e-15) << "u=" << u;
  }
}

TEST(TransitionMatrices, StorageKernels) {
  EXPECT_TRUE(StorageTransition(StorageAction::kHold, 0.9).matrix().isIdentity(0.0));
  const StochasticMatrix charge = StorageTransition(StorageAction::kCharge, 0.9);
  EXPECT_EQ(charge(3, 3), 1.0);
  EXPECT_NEAR(charge(1, 0), 0.9, 1e-15);
  EXPECT_NEAR(charge(0, 0), 0.1, 1e-15);
  const StochasticMatrix discharge = StorageTransition(StorageAction::kDischarge, 0.9);
  EXPECT_EQ(discharge(0, 0), 1.0);
  EXPECT_NEAR(discharge(2, 3), 0.9, 1e-15);
}

TEST(TransitionMatrices, BigReductionPullsHighToLow) {
  const StochasticMatrix b = BuildingTransition(0.95, 0.9);
  EXPECT_NEAR(b(2, 0), 0.9 * (1.0 - 0.95), 1e-15);
  EXPECT_NEAR(b(0, 0), 0.95, 1e-15);
}

TEST(TransitionMatrices, MarketLeavesStateAlone) {
  const CommunityModel m = CommunityModel::Build({});
  for (int u = 0; u < kNumActions; u += 3) {
    EXPECT_EQ(m.transition(u).matrix(), m.transition(u + 1).matrix());
    EXPECT_EQ(m.transition(u).matrix(), m.transition(u + 2).matrix());
  }
}

TEST(BeliefUpdate, MatchesBruteForceBayes) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> pick_o(0, 26), pick_u(0, 26);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::MatrixXd a = RandomStochastic(27, 36, rng, 0.3);
    const Eigen::MatrixXd b = RandomStochastic(36, 36, rng, 0.3);
    const CommunityModel model(StochasticMatrix::FromMatrix(a),
                               Repeat(StochasticMatrix::FromMatrix(b)),
                               PreferredObservations(0.5));
    const Categorical prior = oracle::RandomBelief(rng);
    const JointAction u = JointAction::FromIndex(pick_u(rng));
    const int o = pick_o(rng);
    double z = 0.0;
    const Eigen::VectorXd ref = oracle::BayesPosterior(prior.vector(), b, a, o, &z);
    if (z == 0.0) {
      EXPECT_THROW(BeliefUpdate(prior, u, JointObservation::FromIndex(o), model),
                   DegenerateEvidenceError);
      continue;
    }
    const Categorical post = BeliefUpdate(prior, u, JointObservation::FromIndex(o), model);
    worst = std::max(worst, (post.vector() - ref).cwiseAbs().maxCoeff());
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(BeliefUpdate, PerfectSensorGivesOneHot) {
  // States 0..26 map to their own observation, 27..35 alias onto 0..8.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(27, 36);
  for (int s = 0; s < 36; ++s) a(s % 27, s) = 1.0;
  const CommunityModel model(StochasticMatrix::FromMatrix(a),
                             Repeat(StochasticMatrix::Identity(36)),
                             PreferredObservations(0.5));
  std::mt19937_64 rng(5);
  const Categorical prior = oracle::RandomBelief(rng);
  for (int o = 9; o < 27; ++o) {
    const Categorical post =
        BeliefUpdate(prior, JointAction{}, JointObservation::FromIndex(o), model);
    EXPECT_EQ(post[o], 1.0);
  }
}

TEST(BeliefUpdate, FlatPriorGivesNormalizedLikelihoodRow) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd a = RandomStochastic(27, 36, rng);
  const CommunityModel model(StochasticMatrix::FromMatrix(a),
                             Repeat(StochasticMatrix::Identity(36)),
                             PreferredObservations(0.5));
  const int o = 17;
  const Categorical post = BeliefUpdate(Categorical::Uniform(36), JointAction{},
                                        JointObservation::FromIndex(o), model);
  const double row_sum = a.row(o).sum();
  for (int s = 0; s < 36; ++s) EXPECT_NEAR(post[s], a(o, s) / row_sum, 1e-15);
}

TEST(BeliefUpdate, NormalizedAndNonNegative) {
  const CommunityModel model = CommunityModel::Build({});
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> pick(0, 26);
  for (int trial = 0; trial < 300; ++trial) {
    const Categorical post =
        BeliefUpdate(oracle::RandomBelief(rng), JointAction::FromIndex(pick(rng)),
                     JointObservation::FromIndex(pick(rng)), model);
    EXPECT_NEAR(post.vector().sum(), 1.0, 1e-12);
    EXPECT_GE(post.vector().minCoeff(), 0.0);
  }
}

TEST(BeliefUpdate, FactorizesWhenOtherEvidenceIsFlat) {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXd a1 = RandomStochastic(3, 3, rng);
  const Eigen::MatrixXd b1 = RandomStochastic(3, 3, rng);
  const Eigen::MatrixXd b2 = RandomStochastic(3, 3, rng);
  const Eigen::MatrixXd be = RandomStochastic(4, 4, rng);
  const Eigen::MatrixXd flat2 = Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0);
  const Eigen::MatrixXd flat_ess = Eigen::MatrixXd::Constant(3, 4, 1.0 / 3.0);
  const CommunityModel model(
      StochasticMatrix::FromMatrix(oracle::Kron(oracle::Kron(a1, flat2), flat_ess)),
      Repeat(StochasticMatrix::FromMatrix(oracle::Kron(oracle::Kron(b1, b2), be))),
      PreferredObservations(0.5));
  for (int trial = 0; trial < 50; ++trial) {
    const Categorical prior = oracle::RandomBelief(rng);
    const JointObservation o = JointObservation::FromIndex(trial % 27);
    const Categorical post = BeliefUpdate(prior, JointAction{}, o, model);

    Eigen::Vector3d marginal_prior = Eigen::Vector3d::Zero();
    Eigen::Vector3d marginal_post = Eigen::Vector3d::Zero();
    for (int s = 0; s < 36; ++s) {
      marginal_prior(s / 12) += prior[s];
      marginal_post(s / 12) += post[s];
    }
    Eigen::Vector3d small = (b1 * marginal_prior).cwiseProduct(
        a1.row(static_cast<int>(o.b1)).transpose());
    small /= small.sum();
    EXPECT_LE((marginal_post - small).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(BeliefUpdate, RepeatedEvidenceConcentrates) {
  const CommunityModel base = CommunityModel::Build({});
  const CommunityModel model(base.likelihood(), Repeat(StochasticMatrix::Identity(36)),
                             PreferredObservations(0.5));
  const JointObservation o{PowerSignal::kUp, PowerSignal::kSame, FlowSignal::kExport};
  Categorical q = Categorical::Uniform(36);
  double h = Entropy(q);
  for (int k = 0; k < 20; ++k) {
    q = BeliefUpdate(q, JointAction{}, o, model);
    const double next = Entropy(q);
    EXPECT_LE(next, h + 1e-12);
    h = next;
  }
}

TEST(BeliefUpdate, ImpossibleObservationIsDegenerate) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(27, 36);
  for (int s = 0; s < 36; ++s) a(0, s) = 1.0;
  const CommunityModel model(StochasticMatrix::FromMatrix(a),
                             Repeat(StochasticMatrix::Identity(36)),
                             PreferredObservations(0.5));
  EXPECT_THROW(BeliefUpdate(Categorical::Uniform(36), JointAction{},
                            JointObservation::FromIndex(5), model),
               DegenerateEvidenceError);
}

TEST(PreferredObservations, MassOnSteadyState) {
  const Categorical p = PreferredObservations(0.5);
  EXPECT_EQ(p[JointObservation{}.index()], 0.5);
  EXPECT_NEAR(p[0], 0.5 / 26.0, 1e-15);
}

TEST(CommunityModel, ColumnEntropyMatchesLikelihood) {
  const CommunityModel m = CommunityModel::Build({});
  for (int s = 0; s < 36; ++s) {
    EXPECT_NEAR(m.column_entropy()(s), Entropy(m.likelihood().Column(s)), 1e-15);
  }
}

}  // namespace
}  // namespace aifgrid
