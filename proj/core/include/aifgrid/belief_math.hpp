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

#ifndef AIFGRID_BELIEF_MATH_HPP_
#define AIFGRID_BELIEF_MATH_HPP_

// Categorical distributions and column-stochastic matrices shared by the
// building and community agents. Probabilities are kept in linear space.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace aifgrid {

// Tolerance used when validating sums of probabilities at construction.
inline constexpr double kStochasticTolerance = 1e-9;

// A normalized probability vector. Immutable once constructed.
class Categorical {
 public:
  // Validates non-negativity and unit sum (within kStochasticTolerance).
  // Throws ParameterError otherwise. No renormalization is applied.
  static Categorical FromProbabilities(std::span<const double> probs);
  static Categorical FromVector(const Eigen::VectorXd& probs);
  static Categorical Uniform(int size);
  static Categorical OneHot(int size, int index);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }
  const Eigen::VectorXd& vector() const { return probs_; }
  std::span<const double> probabilities() const {
    return {probs_.data(), static_cast<std::size_t>(probs_.size())};
  }

  // Index of the largest entry; ties resolve to the lowest index.
  int ArgMax() const;

 private:
  explicit Categorical(Eigen::VectorXd probs) : probs_(std::move(probs)) {}
  Eigen::VectorXd probs_;
};

// Column-stochastic matrix: rows are outcomes, columns are conditions.
class StochasticMatrix {
 public:
  // Throws ParameterError unless all entries are in [0, 1] and every column
  // sums to 1 within kStochasticTolerance.
  static StochasticMatrix FromMatrix(const Eigen::MatrixXd& entries);
  static StochasticMatrix Identity(int size);

  int rows() const { return static_cast<int>(entries_.rows()); }
  int cols() const { return static_cast<int>(entries_.cols()); }
  double operator()(int row, int col) const { return entries_(row, col); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  Categorical Column(int col) const;

 private:
  explicit StochasticMatrix(Eigen::MatrixXd entries)
      : entries_(std::move(entries)) {}
  Eigen::MatrixXd entries_;
};

// Kronecker product a (x) b. Entry ((i*b.rows + k), (j*b.cols + l)) equals
// a(i, j) * b(k, l).
StochasticMatrix Kron(const StochasticMatrix& a, const StochasticMatrix& b);

// Shannon entropy in nats with 0 ln 0 = 0.
double Entropy(const Categorical& p);
double Entropy(std::span<const double> p);

// KL(q || p) in nats. Throws AbsoluteContinuityError if some q_i > 0 where
// p_i == 0, and ParameterError on size mismatch.
double KlDivergence(const Categorical& q, const Categorical& p);

// Rescales non-negative weights to unit sum. Throws DegenerateEvidenceError
// when every weight is zero and ParameterError on negative or non-finite
// entries.
Categorical Normalize(std::span<const double> weights);
Categorical Normalize(const Eigen::VectorXd& weights);

}  // namespace aifgrid

#endif  // AIFGRID_BELIEF_MATH_HPP_
