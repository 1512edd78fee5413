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
#include "ffvax/special_functions.hpp"
#include "ffvax/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace ffvax
{

namespace
{

// Lanczos approximation, g = 7, n = 9
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double z)
{
    double a = kLanczosCoef[0];
    for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) {
        a += kLanczosCoef[i] / (z + static_cast<double>(i));
    }
    return a;
}

// sin(pi*y) and cos(pi*y) with exact zeros at integers / half-integers
double sin_pi(double y)
{
    double r = std::fmod(y, 2.0);
    if (r < 0.0) {
        r += 2.0;
    }
    if (r == 0.0 || r == 1.0) {
        return 0.0;
    }
    if (r == 0.5) {
        return 1.0;
    }
    if (r == 1.5) {
        return -1.0;
    }
    return std::sin(std::numbers::pi * r);
}

double cos_pi(double y)
{
    return sin_pi(y + 0.5);
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw DomainError("Mittag-Leffler order alpha must lie in (0,2]");
    }
}

// E_alpha(z) for z > 0, alpha < 1 when the series does not converge within the cap:
// (1/alpha) exp(z^(1/alpha)) - sum_k z^-k / Gamma(1 - alpha k)
double exponential_expansion(double alpha, double z, int order)
{
    double algebraic = 0.0;
    const double log_z = std::log(z);
    for (int k = 1; k <= order; ++k) {
        const double ak  = alpha * k;
        const double mag = std::exp(log_gamma(ak) - k * log_z) / std::numbers::pi;
        algebraic += mag * sin_pi(ak);
        if (mag < kEps * kEps) {
            break;
        }
    }
    return std::exp(std::pow(z, 1.0 / alpha)) / alpha - algebraic;
}

// Globally adaptive Gauss-Kronrod: bisect the interval with the largest error
// estimate until the summed estimate drops below abs_tol.
template <class F>
double adaptive_gauss_kronrod(F f, double a, double b, double abs_tol)
{
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    struct Segment {
        double a, b, value, error;
        bool operator<(const Segment& other) const
        {
            return error < other.error;
        }
    };
    const auto evaluate = [&](double lo, double hi) {
        double error = 0.0;
        const double value = Rule::integrate(f, lo, hi, 0, 0.0, &error);
        return Segment{lo, hi, value, error};
    };
    constexpr int kMaxSegments = 1000;

    std::priority_queue<Segment> segments;
    segments.push(evaluate(a, b));
    double total = segments.top().value;
    double error = segments.top().error;
    for (int n = 1; n < kMaxSegments && error > abs_tol; ++n) {
        const Segment worst = segments.top();
        segments.pop();
        const double mid    = 0.5 * (worst.a + worst.b);
        const Segment left  = evaluate(worst.a, mid);
        const Segment right = evaluate(mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        segments.push(left);
        segments.push(right);
    }
    return total;
}

} // namespace

double gamma_fn(double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("gamma_fn requires a finite x > 0");
    }
    if (x < 0.5) {
        return gamma_fn(x + 1.0) / x;
    }
    if (x == std::floor(x) && x <= 171.0) {
        double factorial = 1.0;
        for (double k = 2.0; k < x; k += 1.0) {
            factorial *= k;
        }
        return factorial;
    }
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    // split the power so t^(z+1/2) does not overflow before exp(-t) is applied
    const double half_power = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half_power * (half_power * std::exp(-t)) * lanczos_sum(z);
}

double log_gamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("log_gamma requires a finite x > 0");
    }
    if (x < 0.5) {
        return log_gamma(x + 1.0) - std::log(x);
    }
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(lanczos_sum(z));
}

void validate(const MLEvalPolicy& policy)
{
    if (policy.series_term_cap < 1) {
        throw DomainError("series_term_cap must be >= 1");
    }
    if (!(policy.series_radius > 0.0)) {
        throw DomainError("series_radius must be > 0");
    }
    if (policy.asymptotic_order < 1) {
        throw DomainError("asymptotic_order must be >= 1");
    }
    if (!(policy.target_abs_tol > 0.0)) {
        throw DomainError("target_abs_tol must be > 0");
    }
}

namespace
{

// cancellation_budget caps the rounding error peak*eps*16 of an alternating sum.
std::optional<double> summed_series(double alpha, double z, const MLEvalPolicy& policy, double cancellation_budget)
{
    if (z == 0.0) {
        return 1.0;
    }
    const double log_abs = std::log(std::fabs(z));
    const bool alternating = z < 0.0;

    double sum       = 1.0;
    double peak      = 1.0;
    double previous  = 1.0;
    bool converged   = false;
    for (int k = 1; k <= policy.series_term_cap; ++k) {
        const double magnitude = std::exp(k * log_abs - log_gamma(1.0 + alpha * k));
        sum += (alternating && (k % 2 == 1)) ? -magnitude : magnitude;
        peak = std::max(peak, magnitude);
        // past the peak the terms decrease monotonically and bound the tail
        if (magnitude < previous && magnitude <= 1e-3 * kEps * std::max(1.0, std::fabs(sum))) {
            converged = true;
            break;
        }
        previous = magnitude;
    }
    if (!converged || !std::isfinite(sum)) {
        return std::nullopt;
    }
    if (alternating && peak * kEps * 16.0 > cancellation_budget) {
        return std::nullopt;
    }
    return sum;
}

} // namespace

namespace ml_branch
{

std::optional<double> series(double alpha, double z, const MLEvalPolicy& policy)
{
    check_alpha(alpha);
    // other branches exist for alpha <= 1, so demand a wide margin
    return summed_series(alpha, z, policy, 1e-3 * policy.target_abs_tol);
}

std::optional<double> asymptotic(double alpha, double z, const MLEvalPolicy& policy)
{
    check_alpha(alpha);
    if (!(z < 0.0) || !(alpha < 1.0)) {
        return std::nullopt;
    }
    const double log_x = std::log(-z);
    const double accept = 1e-5 * policy.target_abs_tol;

    double sum        = 0.0;
    double best_bound = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= policy.asymptotic_order; ++k) {
        const double ak = alpha * k;
        // |1/Gamma(1 - a k)| <= Gamma(a k)/pi by reflection
        const double bound = std::exp(log_gamma(ak) - k * log_x) / std::numbers::pi;
        if (bound > best_bound) {
            break; // divergent tail starts here
        }
        best_bound = bound;
        const double term = ((k % 2 == 0) ? bound : -bound) * sin_pi(ak);
        sum -= term;
        if (bound <= accept * 1e-3) {
            break;
        }
    }
    if (best_bound > accept) {
        return std::nullopt;
    }
    return sum;
}

double asymptotic_threshold(double alpha, const MLEvalPolicy& policy)
{
    check_alpha(alpha);
    if (!(alpha < 1.0)) {
        return std::numeric_limits<double>::infinity();
    }
    double lo = 1e-3;
    double hi = 1e6;
    if (!asymptotic(alpha, -hi, policy)) {
        return std::numeric_limits<double>::infinity();
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (asymptotic(alpha, -mid, policy)) {
            hi = mid;
        }
        else {
            lo = mid;
        }
    }
    return hi;
}

double laplace_integral(double alpha, double x, const MLEvalPolicy& policy)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("laplace_integral requires 0 < alpha < 1");
    }
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("laplace_integral requires a finite x > 0");
    }
    const double c = cos_pi(alpha);
    const double s = sin_pi(alpha);
    const double inv_alpha = 1.0 / alpha;
    auto integrand = [=](double v) {
        return x * std::exp(-std::pow(v, inv_alpha)) / (v * v + 2.0 * v * x * c + x * x);
    };
    // exp(-v^(1/alpha)) < 2e-22 beyond this point
    const double upper     = std::pow(50.0, alpha);
    const double prefactor = s / (alpha * std::numbers::pi);
    const double abs_tol   = 0.5e-3 * policy.target_abs_tol / prefactor;

    // the denominator peaks at v = -x cos(alpha pi) when alpha > 1/2
    const double peak = -x * c;
    double total      = 0.0;
    if (peak > 0.0 && peak < upper) {
        total = adaptive_gauss_kronrod(integrand, 0.0, peak, abs_tol) +
                adaptive_gauss_kronrod(integrand, peak, upper, abs_tol);
    }
    else {
        total = adaptive_gauss_kronrod(integrand, 0.0, upper, 2.0 * abs_tol);
    }
    return prefactor * total;
}

} // namespace ml_branch

MLEvaluation mittag_leffler_eval(double alpha, double z, const MLEvalPolicy& policy)
{
    check_alpha(alpha);
    if (!std::isfinite(z)) {
        throw DomainError("Mittag-Leffler argument must be finite");
    }
    validate(policy);

    if (z == 0.0) {
        return {1.0, MLBranch::Series};
    }
    if (alpha == 1.0) {
        return {std::exp(z), MLBranch::Exponential};
    }
    if (alpha > 1.0) {
        if (auto v = summed_series(alpha, z, policy, policy.target_abs_tol)) {
            return {*v, MLBranch::Series};
        }
        throw DomainError("Mittag-Leffler with alpha > 1 is only supported where the series is accurate");
    }
    if (z > 0.0) {
        if (auto v = ml_branch::series(alpha, z, policy)) {
            return {*v, MLBranch::Series};
        }
        return {exponential_expansion(alpha, z, policy.asymptotic_order), MLBranch::Asymptotic};
    }

    MLEvaluation out{0.0, MLBranch::LaplaceIntegral};
    std::optional<double> v;
    if (-z <= policy.series_radius && (v = ml_branch::series(alpha, z, policy))) {
        out = {*v, MLBranch::Series};
    }
    else if (-z > policy.series_radius && (v = ml_branch::asymptotic(alpha, z, policy))) {
        out = {*v, MLBranch::Asymptotic};
    }
    else {
        out.value = ml_branch::laplace_integral(alpha, -z, policy);
    }
    // completely monotone on the negative axis: 0 < E <= 1
    out.value = std::clamp(out.value, 0.0, 1.0);
    return out;
}

double mittag_leffler(double alpha, double z, const MLEvalPolicy& policy)
{
    return mittag_leffler_eval(alpha, z, policy).value;
}

} // namespace ffvax
