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
#include "ffvax/model.hpp"
#include "ffvax/error.hpp"

#include <string>

namespace ffvax
{

namespace
{

constexpr std::array<std::string_view, kNumCompartments> kNames = {"S_p", "I", "I_p", "I_n", "I_c", "R", "D"};

void require_finite(const State& state)
{
    if (!state.is_finite()) {
        throw DomainError("state contains a non-finite component");
    }
}

double require_positive_population(const State& state)
{
    require_finite(state);
    const double n = total_population(state);
    if (!(n > 0.0)) {
        throw DomainError("total population must be positive, got N = " + std::to_string(n));
    }
    return n;
}

} // namespace

std::string_view compartment_name(Compartment c)
{
    return kNames[static_cast<std::size_t>(c)];
}

std::optional<Compartment> compartment_from_name(std::string_view name)
{
    for (std::size_t k = 0; k < kNumCompartments; ++k) {
        if (kNames[k] == name) {
            return static_cast<Compartment>(k);
        }
    }
    return std::nullopt;
}

bool is_admissible(const State& state)
{
    for (double v : state.values) {
        if (!std::isfinite(v) || v < 0.0) {
            return false;
        }
    }
    return true;
}

void validate(const ModelParams& p)
{
    const std::pair<const char*, double> rates[] = {
        {"Pi", p.Pi},       {"beta", p.beta},     {"sigma", p.sigma},   {"nu", p.nu},     {"gamma1", p.gamma1},
        {"gamma2", p.gamma2}, {"gamma3", p.gamma3}, {"gamma4", p.gamma4}, {"tau", p.tau},   {"tau1", p.tau1},
        {"tau2", p.tau2},   {"tau3", p.tau3},     {"tau4", p.tau4},     {"phi1", p.phi1}, {"phi2", p.phi2}};
    for (const auto& [name, value] : rates) {
        if (!std::isfinite(value) || value < 0.0) {
            throw DomainError(std::string(name) + " must be a finite nonnegative rate");
        }
    }
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0,1]");
    }
    if (!(p.eta > 0.0 && p.eta <= 1.0)) {
        throw DomainError("eta must lie in (0,1]");
    }
}

DerivedRates derived_rates(const ModelParams& p)
{
    DerivedRates d{};
    d.j1     = p.gamma1 + p.gamma2 + p.gamma3 + p.gamma4 + p.tau1 + p.nu;
    d.j2     = p.tau3 + p.nu;
    d.j3     = p.tau2 + p.phi1 + p.nu;
    d.j4     = p.tau4 + p.phi2 + p.nu;
    d.j5     = p.tau + p.nu;
    d.a1     = p.sigma + p.nu;
    d.lambda = d.j1;
    return d;
}

double total_population(const State& state)
{
    return state.sum();
}

double force_of_infection(const ModelParams& p, const State& x)
{
    const double n = total_population(x);
    if (n == 0.0) {
        return 0.0;
    }
    return p.beta * x.s_p() * x.i() / n;
}

StateDerivative rhs(const ModelParams& p, const State& x)
{
    require_finite(x);
    const auto k = derived_rates(p);
    const double f = force_of_infection(p, x);

    StateDerivative dx;
    dx.s_p() = p.Pi - f - k.a1 * x.s_p();
    dx.i()   = f - k.j1 * x.i();
    dx.i_p() = p.gamma1 * x.i() - k.j2 * x.i_p();
    dx.i_n() = p.gamma2 * x.i() - k.j3 * x.i_n();
    dx.i_c() = p.gamma3 * x.i() - k.j4 * x.i_c();
    dx.r()   = p.tau1 * x.i() + p.tau2 * x.i_n() + p.tau3 * x.i_p() + p.tau4 * x.i_c() - k.j5 * x.r();
    dx.d()   = p.sigma * x.s_p() + p.phi1 * x.i_n() + p.phi2 * x.i_c() + p.gamma4 * x.i() + p.tau * x.r() -
             p.nu * x.d();
    return dx;
}

Matrix7 jacobian(const ModelParams& p, const State& x)
{
    const double n = require_positive_population(x);
    const auto k   = derived_rates(p);

    // gradient of beta*S_p*I/N; N depends on every slot
    const double common = -p.beta * x.s_p() * x.i() / (n * n);
    Eigen::Matrix<double, 1, kNumCompartments> grad_f;
    grad_f.setConstant(common);
    grad_f(0) += p.beta * x.i() / n;
    grad_f(1) += p.beta * x.s_p() / n;

    Matrix7 J = Matrix7::Zero();
    J.row(0) = -grad_f;
    J(0, 0) -= k.a1;
    J.row(1) = grad_f;
    J(1, 1) -= k.j1;

    J(2, 1) = p.gamma1;
    J(2, 2) = -k.j2;

    J(3, 1) = p.gamma2;
    J(3, 3) = -k.j3;

    J(4, 1) = p.gamma3;
    J(4, 4) = -k.j4;

    J(5, 1) = p.tau1;
    J(5, 2) = p.tau3;
    J(5, 3) = p.tau2;
    J(5, 4) = p.tau4;
    J(5, 5) = -k.j5;

    J(6, 0) = p.sigma;
    J(6, 1) = p.gamma4;
    J(6, 3) = p.phi1;
    J(6, 4) = p.phi2;
    J(6, 5) = p.tau;
    J(6, 6) = -p.nu;
    return J;
}

StateDerivative second_derivative_rhs(const ModelParams& p, const State& x)
{
    const double n = require_positive_population(x);
    const auto k   = derived_rates(p);
    const auto dx  = rhs(p, x);

    const double dn = p.Pi - p.nu * n;
    // d/dt (beta*S_p*I/N)
    const double df = p.beta * ((dx.s_p() * x.i() + dx.i() * x.s_p()) * n - dn * x.s_p() * x.i()) / (n * n);

    StateDerivative d2;
    d2.s_p() = -k.a1 * dx.s_p() - df;
    d2.i()   = df - k.j1 * dx.i();
    d2.i_p() = p.gamma1 * dx.i() - k.j2 * dx.i_p();
    d2.i_n() = p.gamma2 * dx.i() - k.j3 * dx.i_n();
    d2.i_c() = p.gamma3 * dx.i() - k.j4 * dx.i_c();
    d2.r()   = p.tau1 * dx.i() + p.tau2 * dx.i_n() + p.tau3 * dx.i_p() + p.tau4 * dx.i_c() - k.j5 * dx.r();
    d2.d()   = p.sigma * dx.s_p() + p.phi1 * dx.i_n() + p.phi2 * dx.i_c() + p.gamma4 * dx.i() + p.tau * dx.r() -
             p.nu * dx.d();
    return d2;
}

} // namespace ffvax
