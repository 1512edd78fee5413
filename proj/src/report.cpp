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
#include "ffvax/report.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace ffvax
{

namespace
{

using nlohmann::json;

json inapplicable(const std::exception& e)
{
    return json{{"inapplicable", e.what()}};
}

// Non-finite doubles have no JSON form.
json number(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return json{{"inapplicable", "non-finite value"}};
}

template <class F>
json guarded(F&& compute)
{
    try {
        return compute();
    }
    catch (const std::exception& e) {
        return inapplicable(e);
    }
}

json state_json(const State& x)
{
    json out = json::object();
    for (auto c : kAllCompartments) {
        out[std::string(compartment_name(c))] = number(x[c]);
    }
    return out;
}

} // namespace

json to_json(const EquilibriumReport& r)
{
    return json{{"kind", r.kind == EquilibriumKind::DiseaseFree ? "disease_free" : "endemic"},
                {"point", state_json(r.point)},
                {"residual_norm", number(r.residual_norm)},
                {"closed_form_used", r.closed_form_used},
                {"refinement_iterations", r.refinement_iterations}};
}

json to_json(const StabilityReport& r)
{
    json eig = json::array();
    for (const auto& z : r.eigenvalues) {
        eig.push_back(json{{"re", number(z.real())}, {"im", number(z.imag())}});
    }
    return json{{"classification", std::string(to_string(r.classification))},
                {"eigenvalues", eig},
                {"threshold_eigenvalue", number(r.threshold_eigenvalue)}};
}

json to_json(const LipschitzReport& r)
{
    json rho = json::array(), rho_bar = json::array(), k = json::array();
    for (double v : r.rho) {
        rho.push_back(number(v));
    }
    for (double v : r.rho_bar) {
        rho_bar.push_back(number(v));
    }
    for (double v : r.k_conditions) {
        k.push_back(number(v));
    }
    return json{{"rho", rho}, {"rho_bar", rho_bar}, {"k_conditions", k}, {"feasible", r.feasible}, {"notes", r.notes}};
}

json to_json(const WaveWindowReport& r)
{
    return json{{"lower", number(r.lower)},
                {"upper", number(r.upper)},
                {"s_p", number(r.s_p_current)},
                {"in_window", r.in_window},
                {"d2I_dt2", number(r.d2i_dt2)},
                {"curvature", std::string(to_string(r.curvature))},
                {"assumptions_hold", r.assumptions_hold}};
}

json build_run_report(const ScenarioConfig& config, const Trajectory& traj, double wall_seconds,
                      std::size_t wave_samples)
{
    const ModelParams& p = config.params;
    json report;
    report["r0"]              = guarded([&] { return number(reproduction_number(p)); });
    report["strength_number"] = guarded([&] { return number(strength_number(p)); });
    report["equilibria"]      = {{"disease_free", guarded([&] { return to_json(disease_free_equilibrium(p)); })},
                                 {"endemic", guarded([&] { return to_json(endemic_equilibrium(p)); })}};
    report["stability"]       = guarded([&] { return to_json(stability_spectrum(p)); });
    report["lipschitz"]       = guarded([&] {
        return to_json(lipschitz_constants(p, sup_bounds_from(std::span<const State>(traj.states))));
    });

    json waves = json::array();
    if (!traj.states.empty() && wave_samples > 0) {
        const std::size_t last  = traj.states.size() - 1;
        const std::size_t count = std::min(wave_samples, last + 1);
        for (std::size_t s = 0; s < count; ++s) {
            const std::size_t k = count == 1 ? last : s * last / (count - 1);
            json sample = guarded([&] { return to_json(wave_window(p, traj.states[k])); });
            sample["t"] = traj.grid.time(k);
            waves.push_back(sample);
        }
    }
    report["wave_window"] = waves;

    json scheme = {{"kernel", std::string(to_string(traj.kernel))},
                   {"alpha", traj.alpha},
                   {"eta", traj.eta},
                   {"h", traj.grid.h},
                   {"n_steps", traj.grid.n_steps},
                   {"t_end", traj.grid.t_end()},
                   {"nodes_written", traj.states.size()}};
    if (traj.kernel == Kernel::FFE) {
        scheme["cf_normalization"] = config.cf_normalization;
    }
    if (traj.kernel == Kernel::FFM) {
        scheme["ab_normalization"] = guarded([&] {
            return number(config.ab_normalization.value_or(ab_normalization(traj.alpha)));
        });
    }
    if (traj.diverged_at) {
        scheme["diverged_at"] = *traj.diverged_at;
    }
    report["scheme"]      = scheme;
    report["wall_time_s"] = wall_seconds;
    return report;
}

} // namespace ffvax
