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
#ifndef FFVAX_MODEL_HPP
#define FFVAX_MODEL_HPP

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>

namespace ffvax
{

inline constexpr std::size_t kNumCompartments = 7;

/// Compartments in the canonical order used by every vector, matrix and file.
enum class Compartment : std::size_t
{
    Susceptible = 0, ///< S_p: willing to vaccinate, exposed to harmful information
    Impacted,        ///< I
    Positive,        ///< I_p
    Negative,        ///< I_n
    Confused,        ///< I_c
    Recovered,       ///< R
    Denial,          ///< D: death or denial of vaccination
};

inline constexpr std::array<Compartment, kNumCompartments> kAllCompartments = {
    Compartment::Susceptible, Compartment::Impacted,  Compartment::Positive, Compartment::Negative,
    Compartment::Confused,    Compartment::Recovered, Compartment::Denial};

/// Short column name ("S_p", "I", ...).
std::string_view compartment_name(Compartment c);
std::optional<Compartment> compartment_from_name(std::string_view name);

/**
 * Seven named slots indexed by Compartment. The tag keeps population values
 * and their time derivatives from being mixed up.
 */
template <class Tag>
struct CompartmentVector {
    std::array<double, kNumCompartments> values{};

    CompartmentVector() = default;
    CompartmentVector(double s_p, double i, double i_p, double i_n, double i_c, double r, double d)
        : values{s_p, i, i_p, i_n, i_c, r, d}
    {
    }
    explicit CompartmentVector(const std::array<double, kNumCompartments>& v)
        : values(v)
    {
    }

    double& operator[](Compartment c)
    {
        return values[static_cast<std::size_t>(c)];
    }
    double operator[](Compartment c) const
    {
        return values[static_cast<std::size_t>(c)];
    }
    double& operator[](std::size_t k)
    {
        return values[k];
    }
    double operator[](std::size_t k) const
    {
        return values[k];
    }

    double& s_p() { return values[0]; }
    double& i() { return values[1]; }
    double& i_p() { return values[2]; }
    double& i_n() { return values[3]; }
    double& i_c() { return values[4]; }
    double& r() { return values[5]; }
    double& d() { return values[6]; }
    double s_p() const { return values[0]; }
    double i() const { return values[1]; }
    double i_p() const { return values[2]; }
    double i_n() const { return values[3]; }
    double i_c() const { return values[4]; }
    double r() const { return values[5]; }
    double d() const { return values[6]; }

    double sum() const
    {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }

    bool is_finite() const
    {
        for (double v : values) {
            if (!std::isfinite(v)) {
                return false;
            }
        }
        return true;
    }

    Eigen::Matrix<double, kNumCompartments, 1> to_eigen() const
    {
        return Eigen::Map<const Eigen::Matrix<double, kNumCompartments, 1>>(values.data());
    }

    static CompartmentVector from_eigen(const Eigen::Matrix<double, kNumCompartments, 1>& v)
    {
        CompartmentVector out;
        Eigen::Map<Eigen::Matrix<double, kNumCompartments, 1>>(out.values.data()) = v;
        return out;
    }

    friend bool operator==(const CompartmentVector&, const CompartmentVector&) = default;
};

struct StateTag {
};
struct RateTag {
};

/// Population counts (S_p, I, I_p, I_n, I_c, R, D).
using State = CompartmentVector<StateTag>;
/// Time derivative of a State, individuals per unit time.
using StateDerivative = CompartmentVector<RateTag>;

using Matrix7 = Eigen::Matrix<double, kNumCompartments, kNumCompartments>;

/// True iff every component is finite and nonnegative.
bool is_admissible(const State& state);

/// The sixteen rate constants of the model plus the fractional and fractal orders.
struct ModelParams {
    double Pi     = 0.0; ///< influx of eligible individuals
    double beta   = 0.0; ///< transmission coefficient of harmful information
    double sigma  = 0.0; ///< S_p -> D
    double nu     = 0.0; ///< natural exit rate, all compartments
    double gamma1 = 0.0; ///< I -> I_p
    double gamma2 = 0.0; ///< I -> I_n
    double gamma3 = 0.0; ///< I -> I_c
    double gamma4 = 0.0; ///< I -> D
    double tau    = 0.0; ///< R -> D
    double tau1   = 0.0; ///< I -> R
    double tau2   = 0.0; ///< I_n -> R
    double tau3   = 0.0; ///< I_p -> R
    double tau4   = 0.0; ///< I_c -> R
    double phi1   = 0.0; ///< I_n -> D
    double phi2   = 0.0; ///< I_c -> D
    double alpha  = 1.0; ///< fractional order, (0, 1]
    double eta    = 1.0; ///< fractal dimension, (0, 1]

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Throws DomainError when a rate is negative or non-finite, or an order leaves (0, 1].
void validate(const ModelParams& params);

/// Aggregated exit rates shared by the equilibrium, threshold and stability formulas.
struct DerivedRates {
    double j1; ///< gamma1+gamma2+gamma3+gamma4+tau1+nu, total exit rate from I
    double j2; ///< tau3+nu
    double j3; ///< tau2+phi1+nu
    double j4; ///< tau4+phi2+nu
    double j5; ///< tau+nu
    double a1; ///< sigma+nu
    double lambda; ///< alias of j1
};

DerivedRates derived_rates(const ModelParams& params);

double total_population(const State& state);

/// beta*S_p*I/N with the all-zero population mapped to 0.
double force_of_infection(const ModelParams& params, const State& state);

/// Right-hand side of the seven-compartment system with N taken as the live sum.
StateDerivative rhs(const ModelParams& params, const State& state);

/// Analytic d(rhs)/d(state); requires N > 0.
Matrix7 jacobian(const ModelParams& params, const State& state);

/// d^2x/dt^2 along the flow, i.e. jacobian(state) * rhs(state); requires N > 0.
StateDerivative second_derivative_rhs(const ModelParams& params, const State& state);

} // namespace ffvax

#endif // FFVAX_MODEL_HPP
