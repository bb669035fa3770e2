/*******************************************************************************
* Copyright 2026 The fracctl Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*******************************************************************************/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracctl {

// Failure classes. The CLI maps each one onto its own exit code.
enum class ErrorKind {
    domain,        // argument outside the mathematical domain
    validation,    // malformed model or configuration object
    convergence,   // iterative method ran out of budget
    divergence,    // closed loop exceeded the divergence bound
    non_physical,  // converged to a solution outside the admissible set
    unsupported,   // request outside what the routine implements
    io,
    config,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& what) : Error(ErrorKind::unsupported, what) {}
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::size_t iterations)
        : Error(ErrorKind::convergence, what), iterations_(iterations) {}

    // Terms summed or iterations performed before giving up.
    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

}  // namespace fracctl
