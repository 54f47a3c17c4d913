// Copyright 2026 The chordosc Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace chordosc {

/// Parameters outside the damping regime a model is defined for
/// (e.g. an underdamped map requested with beta >= 2).
class regime_error : public std::domain_error {
public:
    explicit regime_error(const std::string& what) : std::domain_error(what) {}
};

/// A combination the closed-form solutions do not cover, such as a driven
/// overdamped oscillator.
class unsupported_error : public regime_error {
public:
    explicit unsupported_error(const std::string& what) : regime_error(what) {}
};

/// Malformed or out-of-range user input (configs, CLI arguments).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Output could not be written.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace chordosc
