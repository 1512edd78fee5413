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
#include "ffvax/solvers.hpp"
#include "ffvax/error.hpp"
#include "ffvax/special_functions.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ffvax
{

namespace
{

// Seven compartments padded to eight lanes so the history sums vectorise.
using Lanes = std::array<double, 8>;

Lanes to_lanes(const StateDerivative& d, double factor)
{
    Lanes out{};
    for (std::size_t c = 0; c < kNumCompartments; ++c) {
        out[c] = factor * d[c];
    }
    return out;
}

void check_orders(double alpha, double eta)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0,1]");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw DomainError("eta must lie in (0,1]");
    }
}

Trajectory start(const ModelParams& params, const State& init, const Grid& grid, Kernel kernel, double alpha,
                 double eta)
{
    validate(params);
    validate(grid);
    if (!is_admissible(init)) {
        throw DomainError("initial state must be finite and nonnegative");
    }
    Trajectory traj;
    traj.grid   = grid;
    traj.kernel = kernel;
    traj.alpha  = alpha;
    traj.eta    = eta;
    traj.states.reserve(grid.n_steps + 1);
    traj.states.push_back(init);
    return traj;
}

/// Appends x unless it is non-finite; returns false when the run has diverged.
bool push_node(Trajectory& traj, const State& x)
{
    if (!x.is_finite()) {
        traj.diverged_at = traj.states.size();
        return false;
    }
    traj.states.push_back(x);
    return true;
}

// Weights for m = n - j, evaluated in extended precision through expm1/log1p
// so the O(m^(a+1)) terms cancel without losing the O(m^(a-1)) result.
SchemeWeights weights_for_offset(long m, double alpha)
{
    if (m == 0) {
        return {alpha + 2.0, 1.0};
    }
    if (alpha == 1.0) {
        return {3.0, 1.0};
    }
    const long double a  = alpha;
    const long double lm = static_cast<long double>(m);
    const long double scale = std::pow(lm, a);
    const long double e1    = std::expm1(a * std::log1p(1.0L / lm)); // (1+1/m)^a - 1
    const long double w_cur  = scale * (e1 * (lm + a + 2.0L) - a);
    const long double w_prev = scale * ((lm + 1.0L) * e1 - a);
    return {static_cast<double>(w_cur), static_cast<double>(w_prev)};
}

/**
 * Shared history sum of the power-law and Mittag-Leffler schemes:
 *   S_n = sum_{j=0..n} [F_j w_cur(n-j) - F_{j-1} w_prev(n-j)],  F_{-1} = F_0,
 * regrouped as sum_{j<n} F_j g(n-j) + F_n w_cur(0) - F_0 w_prev(n) with
 * g(m) = w_cur(m) - w_prev(m-1).
 */
class HistorySum
{
public:
    HistorySum(std::size_t n_steps, double alpha)
        : m_n_steps(n_steps)
        , m_reversed_g(n_steps)
        , m_w_prev(n_steps + 1)
    {
        m_w_cur0 = weights_for_offset(0, alpha).w_cur;
        SchemeWeights previous = weights_for_offset(0, alpha);
        m_w_prev[0] = previous.w_prev;
        for (std::size_t m = 1; m <= n_steps; ++m) {
            const auto w = weights_for_offset(static_cast<long>(m), alpha);
            m_reversed_g[n_steps - m] = w.w_cur - previous.w_prev;
            m_w_prev[m] = w.w_prev;
            previous = w;
        }
        m_history.reserve(n_steps + 1);
    }

    void push(const Lanes& f)
    {
        m_history.push_back(f);
    }

    /// S_n for n = (number of pushed values) - 1.
    Lanes sum() const
    {
        const std::size_t n = m_history.size() - 1;
        const double* g     = m_reversed_g.data() + (m_n_steps - n);
        Lanes acc{};
        for (std::size_t j = 0; j < n; ++j) {
            const Lanes& f = m_history[j];
            for (std::size_t c = 0; c < acc.size(); ++c) {
                acc[c] += f[c] * g[j];
            }
        }
        const Lanes& current = m_history[n];
        const Lanes& first   = m_history[0];
        for (std::size_t c = 0; c < acc.size(); ++c) {
            acc[c] += current[c] * m_w_cur0 - first[c] * m_w_prev[n];
        }
        return acc;
    }

private:
    std::size_t m_n_steps;
    std::vector<double> m_reversed_g; ///< m_reversed_g[k] = g(n_steps - k)
    std::vector<double> m_w_prev;
    double m_w_cur0 = 0.0;
    std::vector<Lanes> m_history;
};

double history_factor(std::size_t k, const Grid& grid, double eta, FirstNodeRule rule)
{
    if (k == 0 && eta < 1.0 && rule == FirstNodeRule::DropTerm) {
        return 0.0;
    }
    return fractal_factor(grid.time(k), eta, grid.h);
}

enum class MemoryScheme
{
    Power,
    MittagLeffler,
};

Trajectory integrate_with_memory(MemoryScheme scheme, const ModelParams& params, const State& init,
                                 const Grid& grid, double alpha, double eta, const SchemeOptions& options)
{
    check_orders(alpha, eta);
    Trajectory traj = start(params, init, grid, scheme == MemoryScheme::Power ? Kernel::FFP : Kernel::FFM,
                            alpha, eta);

    const double base = std::pow(grid.h, alpha) / gamma_fn(alpha + 2.0);
    double history_coeff = base;
    double local_coeff   = 0.0;
    if (scheme == MemoryScheme::MittagLeffler) {
        const double ab = options.ab_normalization.value_or(1.0 - alpha + alpha / gamma_fn(alpha));
        if (!(ab > 0.0)) {
            throw DomainError("AB(alpha) normalisation must be positive");
        }
        history_coeff = base * (alpha / ab);
        local_coeff   = (1.0 - alpha) / ab;
    }

    HistorySum history(grid.n_steps, alpha);
    State x = init;
    for (std::size_t n = 0; n < grid.n_steps; ++n) {
        const Lanes f = to_lanes(rhs(params, x), history_factor(n, grid, eta, options.first_node));
        history.push(f);
        const Lanes s = history.sum();
        State next;
        for (std::size_t c = 0; c < kNumCompartments; ++c) {
            next[c] = (init[c] + local_coeff * f[c]) + history_coeff * s[c];
        }
        if (!push_node(traj, next)) {
            break;
        }
        x = next;
    }
    return traj;
}

} // namespace

std::string_view to_string(Kernel kernel)
{
    switch (kernel) {
    case Kernel::Classical:
        return "classical";
    case Kernel::FFP:
        return "ffp";
    case Kernel::FFE:
        return "ffe";
    case Kernel::FFM:
        return "ffm";
    }
    return "unknown";
}

std::optional<Kernel> kernel_from_string(std::string_view name)
{
    for (auto k : {Kernel::Classical, Kernel::FFP, Kernel::FFE, Kernel::FFM}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

Grid Grid::covering(double t_end, double h)
{
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw DomainError("h must be finite and > 0");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw DomainError("t_end must be finite and > 0");
    }
    // tolerate t_end/h landing a few ulps above an integer
    const double steps = std::ceil(t_end / h * (1.0 - 4.0 * std::numeric_limits<double>::epsilon()));
    return Grid{h, static_cast<std::size_t>(std::max(1.0, steps))};
}

void validate(const Grid& grid)
{
    if (!(grid.h > 0.0) || !std::isfinite(grid.h)) {
        throw DomainError("grid step h must be finite and > 0");
    }
    if (grid.n_steps < 1) {
        throw DomainError("grid must have at least one step");
    }
}

SchemeWeights ff_weights(long n, long j, double alpha)
{
    if (j < 0 || j > n) {
        throw DomainError("ff_weights requires 0 <= j <= n");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0,1]");
    }
    return weights_for_offset(n - j, alpha);
}

double fractal_factor(double t, double eta, double h)
{
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw DomainError("eta must lie in (0,1]");
    }
    if (!(t >= 0.0)) {
        throw DomainError("fractal factor requires t >= 0");
    }
    if (eta == 1.0) {
        return 1.0;
    }
    if (t == 0.0) {
        if (!(h > 0.0)) {
            throw DomainError("first-node regularisation requires h > 0");
        }
        t = h;
    }
    return eta * std::pow(t, eta - 1.0);
}

Trajectory integrate_classical(const ModelParams& params, const State& init, const Grid& grid)
{
    Trajectory traj = start(params, init, grid, Kernel::Classical, 1.0, 1.0);
    const double h  = grid.h;
    const auto axpy = [](const State& x, double a, const StateDerivative& d) {
        State out;
        for (std::size_t c = 0; c < kNumCompartments; ++c) {
            out[c] = x[c] + a * d[c];
        }
        return out;
    };

    State x = init;
    for (std::size_t n = 0; n < grid.n_steps; ++n) {
        const auto k1 = rhs(params, x);
        const State x2 = axpy(x, 0.5 * h, k1);
        if (!x2.is_finite()) {
            traj.diverged_at = n + 1;
            break;
        }
        const auto k2 = rhs(params, x2);
        const State x3 = axpy(x, 0.5 * h, k2);
        if (!x3.is_finite()) {
            traj.diverged_at = n + 1;
            break;
        }
        const auto k3 = rhs(params, x3);
        const State x4 = axpy(x, h, k3);
        if (!x4.is_finite()) {
            traj.diverged_at = n + 1;
            break;
        }
        const auto k4 = rhs(params, x4);
        State next;
        for (std::size_t c = 0; c < kNumCompartments; ++c) {
            next[c] = x[c] + h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        if (!push_node(traj, next)) {
            break;
        }
        x = next;
    }
    return traj;
}

Trajectory integrate_ffp(const ModelParams& params, const State& init, const Grid& grid, double alpha, double eta,
                         const SchemeOptions& options)
{
    return integrate_with_memory(MemoryScheme::Power, params, init, grid, alpha, eta, options);
}

Trajectory integrate_ffm(const ModelParams& params, const State& init, const Grid& grid, double alpha, double eta,
                         const SchemeOptions& options)
{
    return integrate_with_memory(MemoryScheme::MittagLeffler, params, init, grid, alpha, eta, options);
}

Trajectory integrate_ffe(const ModelParams& params, const State& init, const Grid& grid, double alpha, double eta,
                         const SchemeOptions& options)
{
    check_orders(alpha, eta);
    if (!(options.cf_normalization > 0.0) || !std::isfinite(options.cf_normalization)) {
        throw DomainError("M(alpha) normalisation must be finite and > 0");
    }
    Trajectory traj = start(params, init, grid, Kernel::FFE, alpha, eta);
    const double m      = options.cf_normalization;
    const double jump   = (1.0 - alpha) / m;
    const double weight = alpha / m;
    const double h      = grid.h;

    State x = init;
    Lanes f_prev{};
    for (std::size_t n = 0; n < grid.n_steps; ++n) {
        const Lanes f = to_lanes(rhs(params, x), history_factor(n, grid, eta, options.first_node));
        if (n == 0) {
            f_prev = f;
        }
        State next;
        for (std::size_t c = 0; c < kNumCompartments; ++c) {
            next[c] = x[c] + jump * (f[c] - f_prev[c]) + weight * (1.5 * h * f[c] - 0.5 * h * f_prev[c]);
        }
        if (!push_node(traj, next)) {
            break;
        }
        x      = next;
        f_prev = f;
    }
    return traj;
}

Trajectory integrate(Kernel kernel, const ModelParams& params, const State& init, const Grid& grid, double alpha,
                     double eta, const SchemeOptions& options)
{
    switch (kernel) {
    case Kernel::Classical:
        return integrate_classical(params, init, grid);
    case Kernel::FFP:
        return integrate_ffp(params, init, grid, alpha, eta, options);
    case Kernel::FFE:
        return integrate_ffe(params, init, grid, alpha, eta, options);
    case Kernel::FFM:
        return integrate_ffm(params, init, grid, alpha, eta, options);
    }
    throw DomainError("unknown kernel");
}

} // namespace ffvax
