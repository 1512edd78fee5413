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
#ifndef FFVAX_CONFIG_HPP
#define FFVAX_CONFIG_HPP

#include "ffvax/analysis.hpp"
#include "ffvax/solvers.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace ffvax
{

/// Illustrative rates with R0 ~ 2.86 (beta = 2); not fitted to any data.
ModelParams default_params();
/// default_params() with beta = 0.5, giving R0 ~ 0.71.
ModelParams subcritical_params();
/// (8, 1, 0.2, 0.2, 0.2, 0.2, 0.2)
State default_initial_state();

struct OutputPaths {
    std::string csv_path = "trajectory.csv";
    std::optional<std::string> svg_path;
    std::optional<std::string> report_path;

    friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

struct ScenarioConfig {
    ModelParams params = default_params();
    State initial      = default_initial_state();
    double h           = 0.01;
    double t_end       = 100.0;
    Kernel kernel      = Kernel::Classical;
    double alpha       = 1.0;
    double eta         = 1.0;
    OutputPaths outputs;
    std::optional<OperatorFamily> bound_check;
    MLEvalPolicy ml_policy;
    double cf_normalization = 1.0;
    std::optional<double> ab_normalization;
    double fractal_time_constant = 1.0;
    FirstNodeRule first_node_rule = FirstNodeRule::Regularize;

    Grid grid() const;
    SchemeOptions scheme_options() const;
    BoundOptions bound_options() const;
};

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

/// Range and consistency checks; throws ValidationError naming the field.
void validate(const ScenarioConfig& config);

/// Missing fields take defaults, unknown keys are rejected.
ScenarioConfig config_from_json(const nlohmann::json& doc);
ScenarioConfig parse_config_text(std::string_view text);
/// Throws IoError when the file cannot be read.
ScenarioConfig parse_config(const std::filesystem::path& path);

nlohmann::json to_json(const ScenarioConfig& config);
std::string serialize_config(const ScenarioConfig& config);

/// Mutable access to a rate by its config key ("beta", "tau3", ...); nullptr if unknown.
double* param_by_name(ModelParams& params, std::string_view name);

} // namespace ffvax

#endif // FFVAX_CONFIG_HPP
