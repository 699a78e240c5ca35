// Copyright 2026 The qnsr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNSR_ERRORS_H_
#define QNSR_ERRORS_H_

#include <stdexcept>
#include <string>

namespace qnsr {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition (bad
/// dimension, non-Hermitian input where Hermitian is required, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InvalidDimensionError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// The Fock truncation is too small for the requested state.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int suggested_dim)
      : Error(what), suggested_dim_(suggested_dim) {}
  int suggested_dim() const { return suggested_dim_; }

 private:
  int suggested_dim_;
};

/// A numerical result failed an internal consistency check (imaginary
/// residue of an expectation, negative probabilities, ...).
class NumericalConsistencyError : public Error {
 public:
  using Error::Error;
};

/// The state is an eigenstate of the observable while its mean still moves.
class DegenerateObservableError : public NumericalConsistencyError {
 public:
  using NumericalConsistencyError::NumericalConsistencyError;
};

/// The optimality residual divides by Tr[dρ·M], which vanished.
class UndefinedResidualError : public NumericalConsistencyError {
 public:
  using NumericalConsistencyError::NumericalConsistencyError;
};

/// Quantities that divide by the Fisher information were asked for at a
/// point that carries none.
class NoInformationError : public NumericalConsistencyError {
 public:
  using NumericalConsistencyError::NumericalConsistencyError;
};

/// A calibration curve has no monotone window wide enough to invert.
class NonInvertibleCurveError : public NumericalConsistencyError {
 public:
  using NumericalConsistencyError::NumericalConsistencyError;
};

}  // namespace qnsr

#endif  // QNSR_ERRORS_H_
