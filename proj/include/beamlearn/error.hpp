// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The beamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMLEARN_ERROR_HPP
#define BEAMLEARN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace beamlearn {

// Invalid configuration or argument values (config invariants, bad strategy names, ...)
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Inconsistent vector/matrix sizes between codebook, channels and labels
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed dataset, codebook or config files
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition)
        throw ConfigError(message);
}

inline void require_dims(bool condition, const std::string& message) {
    if (!condition)
        throw DimensionError(message);
}

} // namespace detail
} // namespace beamlearn

#endif // BEAMLEARN_ERROR_HPP
