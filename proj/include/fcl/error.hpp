/*
Copyright 2026 The fclbench Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace fcl {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
  public:
    using Error::Error;
};

// Frustrated-loop placement or instance rejection ran out of retries.
class GenerationFailure : public Error {
  public:
    using Error::Error;
};

// Problem too large for the exact solvers (lattice width, vertex count).
class ResourceLimit : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

class VersionError : public Error {
  public:
    using Error::Error;
};

// Autocorrelation of a series with zero variance.
class DegenerateSeries : public Error {
  public:
    using Error::Error;
};

// KL-divergence requested from a sample set with no ground-state hits.
class UndefinedKld : public Error {
  public:
    using Error::Error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidParameter(message);
}

} // namespace fcl
