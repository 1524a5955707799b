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

#ifndef AIFGRID_ERRORS_HPP_
#define AIFGRID_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aifgrid {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Out-of-range or structurally invalid parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Normalizing an all-zero weight vector (no evidence mass).
class DegenerateEvidenceError : public Error {
 public:
  using Error::Error;
};

// KL(q || p) with q > 0 where p == 0.
class AbsoluteContinuityError : public Error {
 public:
  AbsoluteContinuityError(const std::string& what, int index)
      : Error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

// Non-finite value produced inside an iterative solver.
class NumericalFailure : public Error {
 public:
  NumericalFailure(std::string module, int iteration, const std::string& what,
                   int step = -1)
      : Error(what),
        module_(std::move(module)),
        iteration_(iteration),
        step_(step) {}

  const std::string& module() const { return module_; }
  int iteration() const { return iteration_; }
  // Simulation step at which the failure happened, -1 if unknown.
  int step() const { return step_; }

  NumericalFailure AtStep(int step) const {
    return NumericalFailure(module_, iteration_, what(), step);
  }

 private:
  std::string module_;
  int iteration_;
  int step_;
};

// Scenario configuration rejected; keys() lists every offending key path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> keys)
      : Error(what), keys_(std::move(keys)) {}
  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::vector<std::string> keys_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace aifgrid

#endif  // AIFGRID_ERRORS_HPP_
