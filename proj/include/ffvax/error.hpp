/*
* Copyright (C) 2026 ffvax contributors
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
*/
#ifndef FFVAX_ERROR_HPP
#define FFVAX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ffvax
{

/// Argument outside the domain where a formula is defined (N = 0, nu = 0, alpha > 1, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Configuration or CLI input that violates the documented schema.
class ValidationError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The endemic branch does not exist for the given parameters; carries the computed I*.
class NoEndemicEquilibrium : public std::runtime_error
{
public:
    explicit NoEndemicEquilibrium(double impacted)
        : std::runtime_error("no endemic equilibrium: I* = " + std::to_string(impacted) + " <= 0")
        , m_impacted(impacted)
    {
    }

    double impacted() const noexcept
    {
        return m_impacted;
    }

private:
    double m_impacted;
};

/// A positivity bound whose normalising denominator is not positive.
class BoundInapplicable : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace ffvax

#endif // FFVAX_ERROR_HPP
