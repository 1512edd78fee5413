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
#include "ffvax/analysis.hpp"
#include "ffvax/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace ffvax
{

namespace
{

double max_abs(const StateDerivative& v)
{
    double m = 0.0;
    for (double x : v.values) {
        m = std::max(m, std::fabs(x));
    }
    return m;
}

void require_positive_nu(const ModelParams& p)
{
    if (!(p.nu > 0.0)) {
        throw DomainError("nu must be positive");
    }
}

void require_strictly_positive(const State& x, const char* what)
{
    for (std::size_t k = 0; k < kNumCompartments; ++k) {
        if (!(x[k] > 0.0) || !std::isfinite(x[k])) {
            throw DomainError(std::string(what) + " component " +
                              std::string(compartment_name(static_cast<Compartment>(k))) +
                              " must be strictly positive");
        }
    }
}

// Inflow and outflow of every compartment; rhs = inflow - outflow.
struct Flows {
    StateDerivative inflow;
    StateDerivative outflow;
};

Flows split_flows(const ModelParams& p, const State& x)
{
    const auto k = derived_rates(p);
    const double f = force_of_infection(p, x);
    Flows fl;
    fl.inflow.s_p()  = p.Pi;
    fl.outflow.s_p() = f + k.a1 * x.s_p();
    fl.inflow.i()    = f;
    fl.outflow.i()   = k.j1 * x.i();
    fl.inflow.i_p()  = p.gamma1 * x.i();
    fl.outflow.i_p() = k.j2 * x.i_p();
    fl.inflow.i_n()  = p.gamma2 * x.i();
    fl.outflow.i_n() = k.j3 * x.i_n();
    fl.inflow.i_c()  = p.gamma3 * x.i();
    fl.outflow.i_c() = k.j4 * x.i_c();
    fl.inflow.r()    = p.tau1 * x.i() + p.tau2 * x.i_n() + p.tau3 * x.i_p() + p.tau4 * x.i_c();
    fl.outflow.r()   = k.j5 * x.r();
    fl.inflow.d()    = p.sigma * x.s_p() + p.phi1 * x.i_n() + p.phi2 * x.i_c() + p.gamma4 * x.i() + p.tau * x.r();
    fl.outflow.d()   = p.nu * x.d();
    return fl;
}

} // namespace

// ---------------------------------------------------------------------------
// Equilibria

EquilibriumReport disease_free_equilibrium(const ModelParams& p)
{
    require_positive_nu(p);
    const double a1 = p.sigma + p.nu;
    State x;
    x.s_p() = p.Pi / a1;
    x.d()   = p.sigma * p.Pi / (a1 * p.nu);

    EquilibriumReport rep;
    rep.point         = x;
    rep.seed          = x;
    rep.residual_norm = max_abs(rhs(p, x));
    rep.kind          = EquilibriumKind::DiseaseFree;
    return rep;
}

State endemic_closed_form(const ModelParams& p)
{
    require_positive_nu(p);
    if (!(p.beta > 0.0)) {
        throw DomainError("endemic equilibrium requires beta > 0");
    }
    const auto k = derived_rates(p);
    const double population = p.Pi / p.nu;

    // Fractions of a population held at N* = 1, where the per-capita influx is nu.
    const double s = k.lambda / p.beta;
    const double i = p.nu / k.lambda - k.a1 / p.beta;
    if (!(i > 0.0)) {
        throw NoEndemicEquilibrium(i * population);
    }
    const double i_p = p.gamma1 * i / k.j2;
    const double i_n = p.gamma2 * i / k.j3;
    const double i_c = p.gamma3 * i / k.j4;
    const double r   = (p.tau1 * i + p.tau2 * i_n + p.tau3 * i_p + p.tau4 * i_c) / k.j5;
    const double d   = (p.sigma * s + p.phi1 * i_n + p.phi2 * i_c + p.gamma4 * i + p.tau * r) / p.nu;

    return State(s * population, i * population, i_p * population, i_n * population, i_c * population,
                 r * population, d * population);
}

EquilibriumReport endemic_equilibrium(const ModelParams& p)
{
    const State seed = endemic_closed_form(p);
    const double target = 1e-13 * std::max(1.0, p.Pi);

    State x = seed;
    double residual = max_abs(rhs(p, x));
    int iterations  = 0;
    constexpr int kMaxIterations = 50;
    while (residual > target && iterations < kMaxIterations) {
        const Matrix7 J = jacobian(p, x);
        const auto f    = rhs(p, x).to_eigen();
        const Eigen::Matrix<double, 7, 1> step = J.fullPivLu().solve(f);

        // backtrack until the residual decreases and the iterate stays positive
        double damping = 1.0;
        State trial;
        double trial_residual = residual;
        for (int halvings = 0; halvings < 30; ++halvings) {
            trial = State::from_eigen(x.to_eigen() - damping * step);
            if (is_admissible(trial) && total_population(trial) > 0.0) {
                trial_residual = max_abs(rhs(p, trial));
                if (trial_residual < residual) {
                    break;
                }
            }
            damping *= 0.5;
        }
        ++iterations;
        if (!(trial_residual < residual)) {
            break; // stalled at round-off level
        }
        x        = trial;
        residual = trial_residual;
    }
    if (!(x.i() > 0.0)) {
        throw NoEndemicEquilibrium(x.i());
    }

    EquilibriumReport rep;
    rep.point                 = x;
    rep.seed                  = seed;
    rep.residual_norm         = residual;
    rep.kind                  = EquilibriumKind::Endemic;
    rep.closed_form_used      = true;
    rep.refinement_iterations = iterations;
    return rep;
}

// ---------------------------------------------------------------------------
// Threshold quantities

NGMReport next_generation_matrices(const ModelParams& p)
{
    const auto k = derived_rates(p);
    if (!(k.a1 > 0.0)) {
        throw DomainError("sigma + nu must be positive");
    }
    if (!(k.j1 > 0.0 && k.j2 > 0.0 && k.j3 > 0.0 && k.j4 > 0.0)) {
        throw DomainError("transition matrix V is singular (some j_i = 0)");
    }

    NGMReport rep;
    rep.f_matrix.setZero();
    rep.f_matrix(0, 0) = p.beta * p.nu / k.a1;

    rep.v_matrix.setZero();
    rep.v_matrix(0, 0) = k.j1;
    rep.v_matrix(1, 0) = -p.gamma1;
    rep.v_matrix(1, 1) = k.j2;
    rep.v_matrix(2, 0) = -p.gamma2;
    rep.v_matrix(2, 2) = k.j3;
    rep.v_matrix(3, 0) = -p.gamma3;
    rep.v_matrix(3, 3) = k.j4;

    rep.v_inverse = rep.v_matrix.partialPivLu().solve(Eigen::Matrix4d::Identity());

    const Eigen::Matrix4d ngm = rep.f_matrix * rep.v_inverse;
    Eigen::EigenSolver<Eigen::Matrix4d> solver(ngm, false);
    rep.spectral_radius = solver.eigenvalues().cwiseAbs().maxCoeff();
    return rep;
}

double reproduction_number(const ModelParams& p)
{
    const auto k = derived_rates(p);
    const double denom = k.a1 * k.j1;
    if (!(denom > 0.0)) {
        throw DomainError("reproduction number undefined: (sigma+nu)*j1 = 0");
    }
    return p.beta * p.nu / denom;
}

double strength_number(const ModelParams& p)
{
    if (!(p.Pi > 0.0)) {
        throw DomainError("strength number requires Pi > 0");
    }
    require_positive_nu(p);
    const auto k = derived_rates(p);
    if (!(k.j1 > 0.0)) {
        throw DomainError("strength number requires j1 > 0");
    }
    const double ratio = 1.0 + p.sigma / p.nu;
    return -2.0 * p.beta * k.a1 / (p.Pi * ratio * ratio * k.j1);
}

// ---------------------------------------------------------------------------
// Stability

std::string_view to_string(StabilityClass c)
{
    switch (c) {
    case StabilityClass::LocallyStable:
        return "locally_stable";
    case StabilityClass::Unstable:
        return "unstable";
    case StabilityClass::Marginal:
        return "marginal";
    }
    return "unknown";
}

StabilityReport stability_spectrum(const ModelParams& p)
{
    const auto dfe = disease_free_equilibrium(p);
    if (!(total_population(dfe.point) > 0.0)) {
        throw DomainError("stability spectrum requires Pi > 0 (empty disease-free state)");
    }
    const Matrix7 J = jacobian(p, dfe.point);
    Eigen::EigenSolver<Matrix7> solver(J, false);
    if (solver.info() != Eigen::Success) {
        throw DomainError("eigenvalue computation did not converge");
    }

    StabilityReport rep;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        rep.eigenvalues.push_back(solver.eigenvalues()(k));
    }
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
    });

    const double leading = rep.eigenvalues.front().real();
    if (leading < 0.0) {
        rep.classification = StabilityClass::LocallyStable;
    }
    else if (leading > 0.0) {
        rep.classification = StabilityClass::Unstable;
    }
    else {
        rep.classification = StabilityClass::Marginal;
    }
    const auto k = derived_rates(p);
    rep.threshold_eigenvalue = p.beta * p.nu / k.a1 - k.j1;
    return rep;
}

// ---------------------------------------------------------------------------
// Lipschitz / growth constants

SupBounds sup_bounds_from(std::span<const State> states)
{
    SupBounds b;
    for (const auto& x : states) {
        b.sup_sp = std::max(b.sup_sp, std::fabs(x.s_p()));
        b.sup_i  = std::max(b.sup_i, std::fabs(x.i()));
        b.sup_ip = std::max(b.sup_ip, std::fabs(x.i_p()));
        b.sup_in = std::max(b.sup_in, std::fabs(x.i_n()));
        b.sup_ic = std::max(b.sup_ic, std::fabs(x.i_c()));
        b.sup_r  = std::max(b.sup_r, std::fabs(x.r()));
        b.sup_n  = std::max(b.sup_n, std::fabs(total_population(x)));
    }
    return b;
}

LipschitzReport lipschitz_constants(const ModelParams& p, const SupBounds& b, double epsilon1)
{
    const auto sq = [](double v) { return v * v; };
    const double sigma4 = sq(sq(p.sigma)); // sigma^4 in rho_1 and K_1, see notes
    const double gamma_sq = sq(p.gamma1) + sq(p.gamma2) + sq(p.gamma3) + sq(p.gamma4);

    LipschitzReport rep;
    rep.rho[0] = 2.0 * (sq(p.beta) * sq(b.sup_i) + sigma4 + sq(p.nu));
    rep.rho[1] = 2.0 * (sq(p.beta) * sq(b.sup_sp) + gamma_sq + sq(p.tau1) + sq(p.nu));
    rep.rho[2] = 2.0 * (sq(p.tau3) + sq(p.nu));
    rep.rho[3] = 2.0 * (sq(p.tau2) + sq(p.phi1) + sq(p.nu));
    rep.rho[4] = 2.0 * (sq(p.tau4) + sq(p.phi2) + sq(p.nu));
    rep.rho[5] = 2.0 * (sq(p.tau) + sq(p.nu));
    rep.rho[6] = 2.0 * (sq(p.nu) + epsilon1);

    rep.rho_bar[0] = 1.0;
    rep.rho_bar[1] = 2.0 * (sq(p.beta) * sq(b.sup_sp) + gamma_sq + sq(p.tau1) + sq(p.nu));
    rep.rho_bar[2] = 2.0 * sq(p.gamma1) * sq(b.sup_i);
    rep.rho_bar[3] = 2.0 * sq(p.gamma2) * sq(b.sup_i) * sq(b.sup_ic);
    rep.rho_bar[4] = 2.0 * sq(p.gamma3) * sq(b.sup_i);
    rep.rho_bar[5] = 2.0 * (sq(p.tau1) * sq(b.sup_i) + sq(p.tau2) * sq(b.sup_in) + sq(p.tau3) * sq(b.sup_ip) +
                            sq(p.tau4) * sq(b.sup_ic));
    rep.rho_bar[6] = 2.0 * (sq(p.sigma) * sq(b.sup_sp) + sq(p.phi1) * sq(b.sup_in) + sq(p.phi2) * sq(b.sup_ic) +
                            sq(p.gamma4) * sq(b.sup_i) + sq(p.tau) * sq(b.sup_r));

    const auto ratio = [](double num, double den, const char* name) {
        if (!(den != 0.0) || !std::isfinite(den)) {
            throw DomainError(std::string(name) + " has a zero denominator");
        }
        return num / den;
    };
    rep.k_conditions[0] = ratio(2.0 * (sq(p.beta) * sq(b.sup_i) + sigma4 + sq(p.nu)), 2.0 * sq(p.Pi), "K1 (Pi = 0)");
    rep.k_conditions[1] = ratio(2.0 * (sq(p.tau3) + sq(p.nu)), rep.rho_bar[2], "K2 (gamma1*sup_i = 0)");
    rep.k_conditions[2] = ratio(2.0 * (p.tau2 + p.phi1 + p.nu), rep.rho_bar[3], "K3 (gamma2*sup_i*sup_ic = 0)");
    rep.k_conditions[3] = ratio(2.0 * (sq(p.tau4) + sq(p.phi2) + p.nu), rep.rho_bar[4], "K4 (gamma3*sup_i = 0)");
    rep.k_conditions[4] = ratio(2.0 * (sq(p.tau) + sq(p.nu)), rep.rho_bar[5], "K5 (recovery inflow bound = 0)");
    rep.k_conditions[5] = ratio(2.0 * sq(p.nu), rep.rho_bar[6], "K6 (denial inflow bound = 0)");

    rep.feasible = *std::max_element(rep.k_conditions.begin(), rep.k_conditions.end()) <= 1.0;
    rep.notes.emplace_back("rho_1 and K_1 carry a sigma^4 term; sigma^2 may be intended");
    rep.notes.emplace_back("K_3 and K_4 use the unsquared rates tau2+phi1+nu and nu");
    return rep;
}

// ---------------------------------------------------------------------------
// Positivity bounds

std::string_view to_string(OperatorFamily f)
{
    switch (f) {
    case OperatorFamily::Classical:
        return "classical";
    case OperatorFamily::Caputo:
        return "caputo";
    case OperatorFamily::CaputoFabrizio:
        return "caputo_fabrizio";
    case OperatorFamily::AtanganaBaleanu:
        return "atangana_baleanu";
    case OperatorFamily::FFPower:
        return "ff_power";
    case OperatorFamily::FFExponential:
        return "ff_exponential";
    case OperatorFamily::FFMittagLeffler:
        return "ff_mittag_leffler";
    }
    return "unknown";
}

std::optional<OperatorFamily> operator_family_from_string(std::string_view name)
{
    for (auto f : {OperatorFamily::Classical, OperatorFamily::Caputo, OperatorFamily::CaputoFabrizio,
                   OperatorFamily::AtanganaBaleanu, OperatorFamily::FFPower, OperatorFamily::FFExponential,
                   OperatorFamily::FFMittagLeffler}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    return std::nullopt;
}

double ab_normalization(double alpha)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0,1]");
    }
    return 1.0 - alpha + alpha / gamma_fn(alpha);
}

double decay_rate(const ModelParams& p, const SupBounds& b, Compartment c)
{
    const auto k = derived_rates(p);
    switch (c) {
    case Compartment::Susceptible: {
        double pressure = 0.0;
        if (p.beta * b.sup_i != 0.0) {
            if (!(b.sup_n > 0.0)) {
                throw DomainError("sup_n must be positive in the S_p decay rate");
            }
            pressure = p.beta * b.sup_i / b.sup_n;
        }
        return pressure + p.sigma + p.nu;
    }
    case Compartment::Impacted:
        return k.j1;
    case Compartment::Positive:
        return k.j2;
    case Compartment::Negative:
        return k.j3;
    case Compartment::Confused:
        return k.j4;
    case Compartment::Recovered:
        return k.j5;
    case Compartment::Denial:
        return p.nu;
    }
    return 0.0;
}

double positivity_lower_bound(OperatorFamily family, const ModelParams& p, const SupBounds& b, Compartment c,
                              double x0, double t, double alpha, double eta, const BoundOptions& opt)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("bound time must be finite and >= 0");
    }
    if (!(alpha > 0.0 && alpha <= 1.0) || !(eta > 0.0 && eta <= 1.0)) {
        throw DomainError("alpha and eta must lie in (0,1]");
    }
    const double rate    = decay_rate(p, b, c);
    const double fractal = std::pow(opt.fractal_time_constant, 1.0 - eta);

    const auto normalized_denominator = [&](double normalization, const char* name) {
        const double den = normalization - (1.0 - alpha) * rate;
        if (!(den > 0.0)) {
            throw BoundInapplicable(std::string(name) + " - (1-alpha)*rate = " + std::to_string(den) +
                                    " is not positive for compartment " + std::string(compartment_name(c)));
        }
        return den;
    };
    const double t_alpha = std::pow(t, alpha);
    const double ab = opt.ab_normalization.value_or(ab_normalization(alpha));

    switch (family) {
    case OperatorFamily::Classical:
        return x0 * std::exp(-rate * t);
    case OperatorFamily::Caputo:
        return x0 * mittag_leffler(alpha, -rate * t_alpha, opt.ml_policy);
    case OperatorFamily::CaputoFabrizio:
        return x0 * std::exp(-alpha * rate * t / normalized_denominator(opt.cf_normalization, "M(alpha)"));
    case OperatorFamily::AtanganaBaleanu:
        return x0 * mittag_leffler(alpha, -alpha * rate * t_alpha / normalized_denominator(ab, "AB(alpha)"),
                                   opt.ml_policy);
    case OperatorFamily::FFPower:
        return x0 * mittag_leffler(alpha, -fractal * rate * t_alpha, opt.ml_policy);
    case OperatorFamily::FFExponential:
        return x0 *
               std::exp(-fractal * alpha * rate * t / normalized_denominator(opt.cf_normalization, "M(alpha)"));
    case OperatorFamily::FFMittagLeffler:
        return x0 * mittag_leffler(alpha, -fractal * alpha * rate * t_alpha / normalized_denominator(ab, "AB(alpha)"),
                                   opt.ml_policy);
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Lyapunov

double lyapunov_value(const State& x, const State& eq)
{
    require_strictly_positive(x, "state");
    require_strictly_positive(eq, "equilibrium");
    double sum = 0.0;
    for (std::size_t k = 0; k < kNumCompartments; ++k) {
        const double ratio = x[k] / eq[k];
        // x - x* - x* log(x/x*) = x* (r - 1 - log r)
        sum += eq[k] * ((ratio - 1.0) - std::log(ratio));
    }
    return sum;
}

LyapunovDerivative lyapunov_derivative(const ModelParams& p, const State& x, const State& eq)
{
    require_strictly_positive(x, "state");
    require_strictly_positive(eq, "equilibrium");
    const auto dx = rhs(p, x);
    const auto fl = split_flows(p, x);

    LyapunovDerivative out;
    for (std::size_t k = 0; k < kNumCompartments; ++k) {
        const double w = eq[k] / x[k];
        out.dl_dt += (1.0 - w) * dx[k];
        out.omega += fl.inflow[k] + w * fl.outflow[k];
        out.sigma_term += w * fl.inflow[k] + fl.outflow[k];
    }
    return out;
}

double lyapunov_second_derivative(const ModelParams& p, const State& x, const State& eq)
{
    require_strictly_positive(x, "state");
    require_strictly_positive(eq, "equilibrium");
    const auto dx  = rhs(p, x);
    const auto d2x = second_derivative_rhs(p, x);
    double sum     = 0.0;
    for (std::size_t k = 0; k < kNumCompartments; ++k) {
        sum += eq[k] / (x[k] * x[k]) * dx[k] * dx[k] + (1.0 - eq[k] / x[k]) * d2x[k];
    }
    return sum;
}

GlobalStabilityCheck global_stability_condition(const State& x, const State& eq)
{
    require_strictly_positive(x, "state");
    require_strictly_positive(eq, "equilibrium");
    const double n      = total_population(x);
    const double n_star = total_population(eq);
    const double value  = 5.0 - x.s_p() * n_star / (n * eq.s_p()) - eq.s_p() / x.s_p() + 2.0 * x.i() / eq.i() -
                         x.i_p() / eq.i_p() - x.i_n() / eq.i_n() - x.i_c() / eq.i_c() -
                         x.i() * eq.i_p() / (eq.i() * eq.i_p()) - x.i() * eq.i_n() / (eq.i() * eq.i_n()) -
                         x.i() * eq.i_c() / (eq.i() * eq.i_c()) + x.i() * n_star / (n * eq.i());
    return {value, value <= 0.0};
}

// ---------------------------------------------------------------------------
// Wave window

std::string_view to_string(Curvature c)
{
    switch (c) {
    case Curvature::LocalMaximum:
        return "local_maximum";
    case Curvature::LocalMinimum:
        return "local_minimum";
    case Curvature::Inflection:
        return "inflection";
    }
    return "unknown";
}

WaveWindowReport wave_window(const ModelParams& p, const State& x)
{
    if (!(p.beta > 0.0)) {
        throw DomainError("wave window requires beta > 0");
    }
    const double n = total_population(x);
    if (!(n > 0.0)) {
        throw DomainError("wave window requires N > 0");
    }
    const auto k = derived_rates(p);

    WaveWindowReport rep;
    rep.lower = k.j1 * k.j1 / (p.beta * p.sigma + 2.0 * p.beta * k.j1 + p.beta * p.beta);
    rep.upper = std::min({(k.j1 + k.j2) * n / p.beta, (k.j1 + k.j3) * n / p.beta, (k.j1 + k.j4) * n / p.beta});
    rep.s_p_current = x.s_p();
    rep.in_window   = rep.lower < x.s_p() && x.s_p() < rep.upper;
    rep.d2i_dt2     = second_derivative_rhs(p, x).i();
    rep.curvature   = rep.d2i_dt2 < 0.0   ? Curvature::LocalMaximum
                      : rep.d2i_dt2 > 0.0 ? Curvature::LocalMinimum
                                          : Curvature::Inflection;
    rep.assumptions_hold = n > x.s_p() && n > x.i();
    return rep;
}

} // namespace ffvax
