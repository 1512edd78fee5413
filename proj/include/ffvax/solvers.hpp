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
#ifndef FFVAX_SOLVERS_HPP
#define FFVAX_SOLVERS_HPP

#include "ffvax/model.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace ffvax
{

enum class Kernel
{
    Classical, ///< fourth-order Runge-Kutta on the integer-order system
    FFP,       ///< fractal-fractional, power-law kernel
    FFE,       ///< fractal-fractional, exponential-decay kernel
    FFM,       ///< fractal-fractional, Mittag-Leffler kernel
};

std::string_view to_string(Kernel kernel);
std::optional<Kernel> kernel_from_string(std::string_view name);

/// Uniform grid t_k = k*h, k = 0..n_steps.
struct Grid {
    double h            = 0.01;
    std::size_t n_steps = 1;

    double time(std::size_t k) const
    {
        return static_cast<double>(k) * h;
    }
    double t_end() const
    {
        return time(n_steps);
    }

    /// Smallest grid with step h reaching at least t_end.
    static Grid covering(double t_end, double h);
};

void validate(const Grid& grid);

struct Trajectory {
    Grid grid;
    std::vector<State> states; ///< n_steps+1 entries unless the run diverged
    Kernel kernel = Kernel::Classical;
    double alpha  = 1.0;
    double eta    = 1.0;
    /// First node whose state was not finite; states holds the nodes before it.
    std::optional<std::size_t> diverged_at;

    bool diverged() const
    {
        return diverged_at.has_value();
    }
};

struct SchemeWeights {
    double w_cur  = 0.0;
    double w_prev = 0.0;
};

/**
 * Two-step Lagrange history weights for the node pair (n, j):
 * w_cur = (m+1)^a (m+a+2) - m^a (m+2a+2), w_prev = (m+1)^(a+1) - m^a (m+a+1), m = n-j.
 */
SchemeWeights ff_weights(long n, long j, double alpha);

/// eta * t^(eta-1); at t = 0 with eta < 1 the factor is taken at t = h.
double fractal_factor(double t, double eta, double h);

/// Treatment of the singular fractal factor at t = 0 when eta < 1.
enum class FirstNodeRule
{
    Regularize, ///< use the factor at t = h
    DropTerm,   ///< zero the j = 0 history term
};

struct SchemeOptions {
    double cf_normalization = 1.0;          ///< M(alpha) of the exponential kernel
    std::optional<double> ab_normalization; ///< defaults to 1 - alpha + alpha/Gamma(alpha)
    FirstNodeRule first_node = FirstNodeRule::Regularize;
};

Trajectory integrate_classical(const ModelParams& params, const State& init, const Grid& grid);
Trajectory integrate_ffp(const ModelParams& params, const State& init, const Grid& grid, double alpha, double eta,
                         const SchemeOptions& options = {});
Trajectory integrate_ffe(const ModelParams& params, const State& init, const Grid& grid, double alpha, double eta,
                         const SchemeOptions& options = {});
Trajectory integrate_ffm(const ModelParams& params, const State& init, const Grid& grid, double alpha, double eta,
                         const SchemeOptions& options = {});

/// Dispatch on kernel; alpha and eta are ignored for Classical.
Trajectory integrate(Kernel kernel, const ModelParams& params, const State& init, const Grid& grid, double alpha,
                     double eta, const SchemeOptions& options = {});

} // namespace ffvax

#endif // FFVAX_SOLVERS_HPP
