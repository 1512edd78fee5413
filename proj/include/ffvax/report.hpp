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
#ifndef FFVAX_REPORT_HPP
#define FFVAX_REPORT_HPP

#include "ffvax/config.hpp"

#include <json.hpp>

namespace ffvax
{

nlohmann::json to_json(const EquilibriumReport& report);
nlohmann::json to_json(const StabilityReport& report);
nlohmann::json to_json(const LipschitzReport& report);
nlohmann::json to_json(const WaveWindowReport& report);

/**
 * Summary of one run: threshold numbers, both equilibria, spectrum, constants
 * from the trajectory's sup bounds, wave-window samples and scheme metadata.
 * A quantity that cannot be computed is stored as {"inapplicable": message}.
 */
nlohmann::json build_run_report(const ScenarioConfig& config, const Trajectory& traj, double wall_seconds,
                                std::size_t wave_samples = 11);

} // namespace ffvax

#endif // FFVAX_REPORT_HPP
