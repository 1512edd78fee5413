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
#ifndef FFVAX_TESTS_GENERATORS_HPP
#define FFVAX_TESTS_GENERATORS_HPP

#include "ffvax/model.hpp"

#include <cstdint>
#include <random>

namespace ffvax::testing
{

/// Fixed seeds keep every property test reproducible.
inline std::mt19937_64 make_rng(std::uint64_t stream)
{
    return std::mt19937_64(0x5eed0000ULL + stream);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Strictly positive rates in [0.01, 0.7], beta in [0.05, 3], Pi in [0.1, 5].
inline ModelParams random_params(std::mt19937_64& rng)
{
    ModelParams p;
    p.Pi     = uniform(rng, 0.1, 5.0);
    p.beta   = uniform(rng, 0.05, 3.0);
    p.sigma  = uniform(rng, 0.01, 0.7);
    p.nu     = uniform(rng, 0.01, 0.7);
    p.gamma1 = uniform(rng, 0.01, 0.7);
    p.gamma2 = uniform(rng, 0.01, 0.7);
    p.gamma3 = uniform(rng, 0.01, 0.7);
    p.gamma4 = uniform(rng, 0.01, 0.7);
    p.tau    = uniform(rng, 0.01, 0.7);
    p.tau1   = uniform(rng, 0.01, 0.7);
    p.tau2   = uniform(rng, 0.01, 0.7);
    p.tau3   = uniform(rng, 0.01, 0.7);
    p.tau4   = uniform(rng, 0.01, 0.7);
    p.phi1   = uniform(rng, 0.01, 0.7);
    p.phi2   = uniform(rng, 0.01, 0.7);
    return p;
}

/// random_params with beta rescaled so that the reproduction number equals r0.
inline ModelParams random_params_with_r0(std::mt19937_64& rng, double r0)
{
    ModelParams p = random_params(rng);
    const auto k  = derived_rates(p);
    p.beta        = r0 * k.a1 * k.j1 / p.nu;
    return p;
}

/// Every compartment in [lo, hi].
inline State random_state(std::mt19937_64& rng, double lo = 0.05, double hi = 10.0)
{
    State x;
    for (auto& v : x.values) {
        v = uniform(rng, lo, hi);
    }
    return x;
}

/// Decoupled linear decay: beta = Pi = 0, only S_p -> D at rate sigma + nu = 0.2.
inline ModelParams decay_params()
{
    ModelParams p;
    p.sigma = 0.1;
    p.nu    = 0.1;
    return p;
}

inline State decay_state()
{
    return State(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
}

} // namespace ffvax::testing

#endif // FFVAX_TESTS_GENERATORS_HPP
