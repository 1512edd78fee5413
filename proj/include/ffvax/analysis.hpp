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
#ifndef FFVAX_ANALYSIS_HPP
#define FFVAX_ANALYSIS_HPP

#include "ffvax/model.hpp"
#include "ffvax/special_functions.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ffvax
{

// ---------------------------------------------------------------------------
// Equilibria

enum class EquilibriumKind
{
    DiseaseFree,
    Endemic,
};

struct EquilibriumReport {
    State point;
    double residual_norm = 0.0; ///< max |rhs(point)|, not clamped
    EquilibriumKind kind = EquilibriumKind::DiseaseFree;
    bool closed_form_used = true;
    int refinement_iterations = 0;
    State seed; ///< closed-form value before refinement (equal to point for the disease-free state)
};

/// (Pi/(sigma+nu), 0, 0, 0, 0, 0, sigma*Pi/((sigma+nu)*nu)); requires nu > 0.
EquilibriumReport disease_free_equilibrium(const ModelParams& params);

/**
 * Closed-form endemic point for a population normalised to N* = 1 (per-capita
 * influx nu), scaled by N* = Pi/nu. Throws NoEndemicEquilibrium when I* <= 0.
 */
State endemic_closed_form(const ModelParams& params);

/// endemic_closed_form refined by damped Newton iteration on rhs = 0 with live N.
EquilibriumReport endemic_equilibrium(const ModelParams& params);

// ---------------------------------------------------------------------------
// Threshold quantities

struct NGMReport {
    Eigen::Matrix4d f_matrix;
    Eigen::Matrix4d v_matrix;
    Eigen::Matrix4d v_inverse;
    double spectral_radius = 0.0;
};

/// New-infection and transition matrices on (I, I_p, I_n, I_c) at the disease-free state.
NGMReport next_generation_matrices(const ModelParams& params);

/// beta*nu / ((sigma+nu) * j1)
double reproduction_number(const ModelParams& params);

/// -2 beta (sigma+nu) / (Pi (1 + sigma/nu)^2 j1)
double strength_number(const ModelParams& params);

// ---------------------------------------------------------------------------
// Local stability of the disease-free state

enum class StabilityClass
{
    LocallyStable, ///< every eigenvalue has negative real part
    Unstable,      ///< at least one eigenvalue with positive real part
    Marginal,
};

std::string_view to_string(StabilityClass c);

struct StabilityReport {
    std::vector<std::complex<double>> eigenvalues; ///< sorted by descending real part
    StabilityClass classification = StabilityClass::Marginal;
    double threshold_eigenvalue = 0.0; ///< beta*nu/(sigma+nu) - j1, the only one that can change sign
};

StabilityReport stability_spectrum(const ModelParams& params);

// ---------------------------------------------------------------------------
// Existence/uniqueness constants

/// Supremum-norm surrogates of the compartments over the time window of interest.
struct SupBounds {
    double sup_i  = 0.0;
    double sup_sp = 0.0;
    double sup_in = 0.0;
    double sup_ip = 0.0;
    double sup_ic = 0.0;
    double sup_r  = 0.0;
    double sup_n  = 0.0;
};

/// Componentwise max |x| (and max N) over the given states.
SupBounds sup_bounds_from(std::span<const State> states);

struct LipschitzReport {
    std::array<double, 7> rho{};
    std::array<double, 7> rho_bar{};
    std::array<double, 6> k_conditions{};
    bool feasible = false; ///< max K_i <= 1
    std::vector<std::string> notes;
};

/**
 * Evaluates the growth and Lipschitz constants and the feasibility ratios
 * K_1..K_6, keeping the sigma^4 term in rho_1 and K_1 (flagged in
 * notes). epsilon1 is the unspecified additive constant in rho_7.
 */
LipschitzReport lipschitz_constants(const ModelParams& params, const SupBounds& bounds, double epsilon1 = 0.0);

// ---------------------------------------------------------------------------
// Positivity lower bounds

enum class OperatorFamily
{
    Classical,
    Caputo,
    CaputoFabrizio,
    AtanganaBaleanu,
    FFPower,
    FFExponential,
    FFMittagLeffler,
};

std::string_view to_string(OperatorFamily f);
std::optional<OperatorFamily> operator_family_from_string(std::string_view name);

/// Normalisations and constants shared by the bound formulas.
struct BoundOptions {
    double cf_normalization = 1.0;            ///< M(alpha)
    std::optional<double> ab_normalization;   ///< AB(alpha); defaults to 1 - alpha + alpha/Gamma(alpha)
    double fractal_time_constant = 1.0;       ///< c in the c^(1-eta) factor
    MLEvalPolicy ml_policy{};
};

/// 1 - alpha + alpha/Gamma(alpha)
double ab_normalization(double alpha);

/// Composite exit rate bounding the decay of one compartment (e.g. beta*sup_i/sup_n + sigma + nu for S_p).
double decay_rate(const ModelParams& params, const SupBounds& bounds, Compartment compartment);

/**
 * Lower bound on a compartment at time t for the given operator family.
 * Throws BoundInapplicable when the CF/AB denominator M - (1-alpha)*rate is not positive.
 */
double positivity_lower_bound(OperatorFamily family, const ModelParams& params, const SupBounds& bounds,
                              Compartment compartment, double initial_value, double t, double alpha, double eta,
                              const BoundOptions& options = {});

// ---------------------------------------------------------------------------
// Lyapunov diagnostics around an equilibrium with strictly positive components

/// Volterra function sum_i (x_i - x_i* - x_i* log(x_i/x_i*)).
double lyapunov_value(const State& state, const State& equilibrium);

struct LyapunovDerivative {
    double dl_dt = 0.0;
    double omega = 0.0;      ///< inflow terms plus (x*/x)-weighted outflow terms
    double sigma_term = 0.0; ///< (x*/x)-weighted inflow terms plus outflow terms
};

LyapunovDerivative lyapunov_derivative(const ModelParams& params, const State& state, const State& equilibrium);

double lyapunov_second_derivative(const ModelParams& params, const State& state, const State& equilibrium);

struct GlobalStabilityCheck {
    double value = 0.0;
    bool satisfied = false; ///< value <= 0
};

/// Five-term sufficient condition for global stability of the endemic state; diagnostic only.
GlobalStabilityCheck global_stability_condition(const State& state, const State& equilibrium);

// ---------------------------------------------------------------------------
// Second-order wave window

enum class Curvature
{
    LocalMaximum, ///< d2I/dt2 < 0
    LocalMinimum, ///< d2I/dt2 > 0
    Inflection,
};

std::string_view to_string(Curvature c);

struct WaveWindowReport {
    double lower = 0.0; ///< j1^2 / (beta sigma + 2 beta j1 + beta^2)
    double upper = 0.0; ///< min over k in {2,3,4} of (j1 + j_k) N / beta
    double s_p_current = 0.0;
    bool in_window = false;
    double d2i_dt2 = 0.0;
    Curvature curvature = Curvature::Inflection;
    bool assumptions_hold = false; ///< N > S_p and N > I, used when deriving the window
};

WaveWindowReport wave_window(const ModelParams& params, const State& state);

} // namespace ffvax

#endif // FFVAX_ANALYSIS_HPP
