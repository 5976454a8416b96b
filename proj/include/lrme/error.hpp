// Copyright 2026 The LRME Authors.
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

#ifndef LRME_ERROR_HPP_
#define LRME_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace lrme {

// Base of every exception thrown by the engine. The C API maps each subclass
// onto one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration value or flag combination.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Unreadable, malformed, or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because m! exceeds the configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lrme

#endif  // LRME_ERROR_HPP_
