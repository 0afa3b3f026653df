// Copyright 2026 The QRBM Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qrbm {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Operand sizes disagree (qubit counts, vector lengths).
class DimensionError : public Error {
   public:
    using Error::Error;
};

/// Malformed Pauli text, Hamiltonian file, parameter document or config.
class ParseError : public Error {
   public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at " + std::to_string(position) + ")"), position_(position) {}
    std::size_t position() const noexcept { return position_; }

   private:
    std::size_t position_;
};

/// Problem exceeds a dense/statevector size bound.
class CapacityError : public Error {
   public:
    using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractError : public Error {
   public:
    using Error::Error;
};

/// Non-finite or otherwise unusable numerical result.
class NumericalError : public Error {
   public:
    using Error::Error;
};

class PostselectionError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

/// Evaluation point coincides with a pole of the resolvent.
class SingularityError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

class PartitionError : public Error {
   public:
    using Error::Error;
};

class UnsupportedLocalityError : public Error {
   public:
    using Error::Error;
};

/// Structurally invalid input to a construction (e.g. a non-PSD operator).
class InputError : public Error {
   public:
    using Error::Error;
};

}  // namespace qrbm
