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

#include "aifgrid/belief_math.hpp"

#include <cmath>
#include <sstream>

#include "aifgrid/errors.hpp"

namespace aifgrid {
namespace {

void ValidateProbabilityVector(const Eigen::VectorXd& p) {
  if (p.size() == 0) throw ParameterError("categorical: empty vector");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0) {
      std::ostringstream os;
      os << "categorical: entry " << i << " = " << p[i] << " is not a probability";
      throw ParameterError(os.str());
    }
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance) {
    std::ostringstream os;
    os << "categorical: entries sum to " << sum;
    throw ParameterError(os.str());
  }
}

}  // namespace

Categorical Categorical::FromProbabilities(std::span<const double> probs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(probs.size()));
  for (std::size_t i = 0; i < probs.size(); ++i) v[static_cast<Eigen::Index>(i)] = probs[i];
  return FromVector(v);
}

Categorical Categorical::FromVector(const Eigen::VectorXd& probs) {
  ValidateProbabilityVector(probs);
  return Categorical(probs);
}

Categorical Categorical::Uniform(int size) {
  if (size <= 0) throw ParameterError("categorical: size must be positive");
  return Categorical(Eigen::VectorXd::Constant(size, 1.0 / size));
}

Categorical Categorical::OneHot(int size, int index) {
  if (size <= 0 || index < 0 || index >= size) {
    throw ParameterError("categorical: one-hot index out of range");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
  v[index] = 1.0;
  return Categorical(std::move(v));
}

int Categorical::ArgMax() const {
  int best = 0;
  for (int i = 1; i < size(); ++i) {
    if (probs_[i] > probs_[best]) best = i;
  }
  return best;
}

StochasticMatrix StochasticMatrix::FromMatrix(const Eigen::MatrixXd& entries) {
  if (entries.rows() == 0 || entries.cols() == 0) {
    throw ParameterError("stochastic matrix: empty");
  }
  for (Eigen::Index j = 0; j < entries.cols(); ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < entries.rows(); ++i) {
      const double v = entries(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        std::ostringstream os;
        os << "stochastic matrix: entry (" << i << ", " << j << ") = " << v;
        throw ParameterError(os.str());
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      std::ostringstream os;
      os << "stochastic matrix: column " << j << " sums to " << sum;
      throw ParameterError(os.str());
    }
  }
  return StochasticMatrix(entries);
}

StochasticMatrix StochasticMatrix::Identity(int size) {
  if (size <= 0) throw ParameterError("stochastic matrix: size must be positive");
  return StochasticMatrix(Eigen::MatrixXd::Identity(size, size));
}

Categorical StochasticMatrix::Column(int col) const {
  return Categorical::FromVector(entries_.col(col));
}

StochasticMatrix Kron(const StochasticMatrix& a, const StochasticMatrix& b) {
  const Eigen::MatrixXd& am = a.matrix();
  const Eigen::MatrixXd& bm = b.matrix();
  Eigen::MatrixXd out(am.rows() * bm.rows(), am.cols() * bm.cols());
  for (Eigen::Index i = 0; i < am.rows(); ++i) {
    for (Eigen::Index j = 0; j < am.cols(); ++j) {
      out.block(i * bm.rows(), j * bm.cols(), bm.rows(), bm.cols()) = am(i, j) * bm;
    }
  }
  return StochasticMatrix::FromMatrix(out);
}

double Entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double Entropy(const Categorical& p) { return Entropy(p.probabilities()); }

double KlDivergence(const Categorical& q, const Categorical& p) {
  if (q.size() != p.size()) throw ParameterError("kl: size mismatch");
  double kl = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    if (q[i] == 0.0) continue;
    if (p[i] == 0.0) {
      std::ostringstream os;
      os << "kl: q[" << i << "] = " << q[i] << " has no support under p";
      throw AbsoluteContinuityError(os.str(), i);
    }
    kl += q[i] * std::log(q[i] / p[i]);
  }
  // Rounding can leave a tiny negative value for q ~= p.
  return kl < 0.0 ? 0.0 : kl;
}

Categorical Normalize(const Eigen::VectorXd& weights) {
  if (weights.size() == 0) throw ParameterError("normalize: empty vector");
  double total = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw ParameterError("normalize: weights must be finite and non-negative");
    }
    total += weights[i];
  }
  if (total <= 0.0) {
    throw DegenerateEvidenceError("normalize: all weights are zero");
  }
  return Categorical::FromVector(weights / total);
}

Categorical Normalize(std::span<const double> weights) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) v[static_cast<Eigen::Index>(i)] = weights[i];
  return Normalize(v);
}

}  // namespace aifgrid
