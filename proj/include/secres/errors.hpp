// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

#include <stdexcept>
#include <string>

namespace secres {

/// Bad or inconsistent user configuration (unknown key, non-positive constant).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A phase point outside the region where the model is defined
/// (e >= 1, negative square-root arguments, |H| > G ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Failure of an iterative numerical procedure (no convergence, no bracket,
/// integrator breakdown, non-decaying tails).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace secres
