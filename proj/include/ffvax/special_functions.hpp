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
#ifndef FFVAX_SPECIAL_FUNCTIONS_HPP
#define FFVAX_SPECIAL_FUNCTIONS_HPP

#include <optional>

namespace ffvax
{

/// Gamma function for x > 0 (Lanczos g=7 with upward recurrence below 1/2).
double gamma_fn(double x);

/// log Gamma(x) for x > 0, finite far beyond the overflow point of gamma_fn.
double log_gamma(double x);

/**
 * Controls for the one-parameter Mittag-Leffler evaluator.
 *
 * The power series is tried for |z| <= series_radius and accepted only when
 * its peak term stays small enough for cancellation not to eat the tolerance.
 * For z < 0 and alpha < 1 the large-argument expansion is accepted once its
 * optimally truncated tail is below tolerance; everything in between goes
 * through a Laplace-type integral representation.
 */
struct MLEvalPolicy {
    int series_term_cap    = 250;
    double series_radius   = 5.0;
    int asymptotic_order   = 60;
    double target_abs_tol  = 1e-10;
};

/// Throws DomainError unless the policy fields are usable.
void validate(const MLEvalPolicy& policy);

enum class MLBranch
{
    Exponential, ///< alpha == 1, E_1 = exp
    Series,
    Asymptotic,
    LaplaceIntegral,
};

struct MLEvaluation {
    double value;
    MLBranch branch;
};

/**
 * E_alpha(z) = sum_k z^k / Gamma(1 + alpha k).
 *
 * alpha in (0, 2]; values above 1 are served by the series only and are
 * rejected when |z|^(1/alpha) is large enough for cancellation to dominate.
 * For z <= 0 and alpha <= 1 the result is clamped into [0, 1].
 */
MLEvaluation mittag_leffler_eval(double alpha, double z, const MLEvalPolicy& policy = {});

double mittag_leffler(double alpha, double z, const MLEvalPolicy& policy = {});

/// Individual branches, exposed for continuity checks.
namespace ml_branch
{

/// Truncated power series; nullopt when it fails to converge within the cap or loses too much to cancellation.
std::optional<double> series(double alpha, double z, const MLEvalPolicy& policy = {});

/// Algebraic large-|z| expansion for z < 0, 0 < alpha < 1; nullopt when its tail bound exceeds tolerance.
std::optional<double> asymptotic(double alpha, double z, const MLEvalPolicy& policy = {});

/// Smallest |z| at which asymptotic() is accepted for this alpha.
double asymptotic_threshold(double alpha, const MLEvalPolicy& policy = {});

/// E_alpha(-x), x > 0, 0 < alpha < 1, by adaptive quadrature of its completely monotone representation.
double laplace_integral(double alpha, double x, const MLEvalPolicy& policy = {});

} // namespace ml_branch

} // namespace ffvax

#endif // FFVAX_SPECIAL_FUNCTIONS_HPP
