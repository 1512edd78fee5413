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
#include "ffvax/config.hpp"
#include "ffvax/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace ffvax
{

namespace
{

using nlohmann::json;

constexpr double kMaxGridNodes = 1e7;

struct ParamField {
    const char* key;
    double ModelParams::*member;
};

constexpr ParamField kParamFields[] = {
    {"Pi", &ModelParams::Pi},         {"beta", &ModelParams::beta},     {"sigma", &ModelParams::sigma},
    {"nu", &ModelParams::nu},         {"gamma1", &ModelParams::gamma1}, {"gamma2", &ModelParams::gamma2},
    {"gamma3", &ModelParams::gamma3}, {"gamma4", &ModelParams::gamma4}, {"tau", &ModelParams::tau},
    {"tau1", &ModelParams::tau1},     {"tau2", &ModelParams::tau2},     {"tau3", &ModelParams::tau3},
    {"tau4", &ModelParams::tau4},     {"phi1", &ModelParams::phi1},     {"phi2", &ModelParams::phi2},
};

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed)
{
    for (const auto& item : obj.items()) {
        bool known = false;
        for (auto key : allowed) {
            known = known || item.key() == key;
        }
        if (!known) {
            throw ValidationError("unknown field '" + std::string(where) + item.key() + "'");
        }
    }
}

const json& require_object(const json& value, const std::string& field)
{
    if (!value.is_object()) {
        throw ValidationError("field '" + field + "' must be an object");
    }
    return value;
}

double read_number(const json& value, const std::string& field)
{
    if (!value.is_number()) {
        throw ValidationError("field '" + field + "' must be a number");
    }
    return value.get<double>();
}

int read_integer(const json& value, const std::string& field)
{
    if (!value.is_number_integer()) {
        throw ValidationError("field '" + field + "' must be an integer");
    }
    return value.get<int>();
}

std::string read_string(const json& value, const std::string& field)
{
    if (!value.is_string()) {
        throw ValidationError("field '" + field + "' must be a string");
    }
    return value.get<std::string>();
}

template <class F>
void if_present(const json& obj, const char* key, F&& apply)
{
    if (auto it = obj.find(key); it != obj.end() && !it->is_null()) {
        apply(*it);
    }
}

std::string_view to_string(FirstNodeRule rule)
{
    return rule == FirstNodeRule::Regularize ? "regularize" : "drop_term";
}

void require_range(bool ok, const char* field, const char* constraint)
{
    if (!ok) {
        throw ValidationError(std::string(field) + " " + constraint);
    }
}

} // namespace

ModelParams default_params()
{
    ModelParams p;
    p.Pi     = 1.0;
    p.beta   = 2.0;
    p.sigma  = 0.1;
    p.nu     = 0.1;
    p.gamma1 = 0.05;
    p.gamma2 = 0.05;
    p.gamma3 = 0.05;
    p.gamma4 = 0.05;
    p.tau    = 0.02;
    p.tau1   = 0.05;
    p.tau2   = 0.05;
    p.tau3   = 0.05;
    p.tau4   = 0.05;
    p.phi1   = 0.05;
    p.phi2   = 0.05;
    return p;
}

ModelParams subcritical_params()
{
    ModelParams p = default_params();
    p.beta        = 0.5;
    return p;
}

State default_initial_state()
{
    return State(8.0, 1.0, 0.2, 0.2, 0.2, 0.2, 0.2);
}

Grid ScenarioConfig::grid() const
{
    return Grid::covering(t_end, h);
}

SchemeOptions ScenarioConfig::scheme_options() const
{
    return SchemeOptions{cf_normalization, ab_normalization, first_node_rule};
}

BoundOptions ScenarioConfig::bound_options() const
{
    return BoundOptions{cf_normalization, ab_normalization, fractal_time_constant, ml_policy};
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b)
{
    return a.params == b.params && a.initial == b.initial && a.h == b.h && a.t_end == b.t_end &&
           a.kernel == b.kernel && a.alpha == b.alpha && a.eta == b.eta && a.outputs == b.outputs &&
           a.bound_check == b.bound_check && a.ml_policy.series_term_cap == b.ml_policy.series_term_cap &&
           a.ml_policy.series_radius == b.ml_policy.series_radius &&
           a.ml_policy.asymptotic_order == b.ml_policy.asymptotic_order &&
           a.ml_policy.target_abs_tol == b.ml_policy.target_abs_tol && a.cf_normalization == b.cf_normalization &&
           a.ab_normalization == b.ab_normalization && a.fractal_time_constant == b.fractal_time_constant &&
           a.first_node_rule == b.first_node_rule;
}

void validate(const ScenarioConfig& c)
{
    try {
        validate(c.params);
    }
    catch (const DomainError& e) {
        throw ValidationError(std::string("params: ") + e.what());
    }
    for (std::size_t k = 0; k < kNumCompartments; ++k) {
        if (!std::isfinite(c.initial[k]) || c.initial[k] < 0.0) {
            throw ValidationError("initial." + std::string(compartment_name(static_cast<Compartment>(k))) +
                                  " must be finite and >= 0");
        }
    }
    require_range(c.h > 0.0 && std::isfinite(c.h), "grid.h", "must be finite and > 0");
    require_range(c.t_end > 0.0 && std::isfinite(c.t_end), "grid.t_end", "must be finite and > 0");
    require_range(c.t_end / c.h <= kMaxGridNodes, "grid.t_end/grid.h", "must not exceed 1e7");
    require_range(c.alpha > 0.0 && c.alpha <= 1.0, "alpha", "must lie in (0,1]");
    require_range(c.eta > 0.0 && c.eta <= 1.0, "eta", "must lie in (0,1]");
    require_range(c.cf_normalization > 0.0 && std::isfinite(c.cf_normalization), "cf_normalization",
                  "must be finite and > 0");
    require_range(!c.ab_normalization || (*c.ab_normalization > 0.0 && std::isfinite(*c.ab_normalization)),
                  "ab_normalization", "must be finite and > 0");
    require_range(c.fractal_time_constant > 0.0 && std::isfinite(c.fractal_time_constant), "fractal_time_constant",
                  "must be finite and > 0");
    require_range(!c.outputs.csv_path.empty(), "outputs.csv_path", "must not be empty");
    try {
        validate(c.ml_policy);
    }
    catch (const DomainError& e) {
        throw ValidationError(std::string("ml_policy: ") + e.what());
    }
    if (c.params.alpha != c.alpha || c.params.eta != c.eta) {
        throw ValidationError("params.alpha/eta must mirror the top-level alpha/eta");
    }
}

ScenarioConfig config_from_json(const json& doc)
{
    require_object(doc, "<root>");
    reject_unknown(doc, "",
                   {"params", "initial", "grid", "kernel", "alpha", "eta", "outputs", "bound_check", "ml_policy",
                    "cf_normalization", "ab_normalization", "fractal_time_constant", "first_node_rule"});

    ScenarioConfig c;
    if_present(doc, "params", [&](const json& obj) {
        require_object(obj, "params");
        for (const auto& item : obj.items()) {
            bool known = false;
            for (const auto& field : kParamFields) {
                if (item.key() == field.key) {
                    c.params.*field.member = read_number(item.value(), "params." + item.key());
                    known = true;
                }
            }
            if (!known) {
                throw ValidationError("unknown field 'params." + item.key() + "'");
            }
        }
    });
    if_present(doc, "initial", [&](const json& obj) {
        require_object(obj, "initial");
        for (const auto& item : obj.items()) {
            const auto comp = compartment_from_name(item.key());
            if (!comp) {
                throw ValidationError("unknown field 'initial." + item.key() + "'");
            }
            c.initial[*comp] = read_number(item.value(), "initial." + item.key());
        }
    });
    if_present(doc, "grid", [&](const json& obj) {
        require_object(obj, "grid");
        reject_unknown(obj, "grid.", {"h", "t_end"});
        if_present(obj, "h", [&](const json& v) { c.h = read_number(v, "grid.h"); });
        if_present(obj, "t_end", [&](const json& v) { c.t_end = read_number(v, "grid.t_end"); });
    });
    if_present(doc, "kernel", [&](const json& v) {
        const auto name = read_string(v, "kernel");
        const auto k    = kernel_from_string(name);
        if (!k) {
            throw ValidationError("kernel must be one of classical|ffp|ffe|ffm, got '" + name + "'");
        }
        c.kernel = *k;
    });
    if_present(doc, "alpha", [&](const json& v) { c.alpha = read_number(v, "alpha"); });
    if_present(doc, "eta", [&](const json& v) { c.eta = read_number(v, "eta"); });
    if_present(doc, "outputs", [&](const json& obj) {
        require_object(obj, "outputs");
        reject_unknown(obj, "outputs.", {"csv_path", "svg_path", "report_path"});
        if_present(obj, "csv_path", [&](const json& v) { c.outputs.csv_path = read_string(v, "outputs.csv_path"); });
        if_present(obj, "svg_path", [&](const json& v) { c.outputs.svg_path = read_string(v, "outputs.svg_path"); });
        if_present(obj, "report_path",
                   [&](const json& v) { c.outputs.report_path = read_string(v, "outputs.report_path"); });
    });
    if_present(doc, "bound_check", [&](const json& v) {
        const auto name = read_string(v, "bound_check");
        const auto f    = operator_family_from_string(name);
        if (!f) {
            throw ValidationError("bound_check: unknown operator family '" + name + "'");
        }
        c.bound_check = *f;
    });
    if_present(doc, "ml_policy", [&](const json& obj) {
        require_object(obj, "ml_policy");
        reject_unknown(obj, "ml_policy.", {"series_term_cap", "series_radius", "asymptotic_order", "target_abs_tol"});
        if_present(obj, "series_term_cap",
                   [&](const json& v) { c.ml_policy.series_term_cap = read_integer(v, "ml_policy.series_term_cap"); });
        if_present(obj, "series_radius",
                   [&](const json& v) { c.ml_policy.series_radius = read_number(v, "ml_policy.series_radius"); });
        if_present(obj, "asymptotic_order", [&](const json& v) {
            c.ml_policy.asymptotic_order = read_integer(v, "ml_policy.asymptotic_order");
        });
        if_present(obj, "target_abs_tol",
                   [&](const json& v) { c.ml_policy.target_abs_tol = read_number(v, "ml_policy.target_abs_tol"); });
    });
    if_present(doc, "cf_normalization", [&](const json& v) { c.cf_normalization = read_number(v, "cf_normalization"); });
    if_present(doc, "ab_normalization", [&](const json& v) { c.ab_normalization = read_number(v, "ab_normalization"); });
    if_present(doc, "fractal_time_constant",
               [&](const json& v) { c.fractal_time_constant = read_number(v, "fractal_time_constant"); });
    if_present(doc, "first_node_rule", [&](const json& v) {
        const auto name = read_string(v, "first_node_rule");
        if (name == "regularize") {
            c.first_node_rule = FirstNodeRule::Regularize;
        }
        else if (name == "drop_term") {
            c.first_node_rule = FirstNodeRule::DropTerm;
        }
        else {
            throw ValidationError("first_node_rule must be regularize|drop_term, got '" + name + "'");
        }
    });

    c.params.alpha = c.alpha;
    c.params.eta   = c.eta;
    validate(c);
    return c;
}

ScenarioConfig parse_config_text(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    }
    catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
    return config_from_json(doc);
}

ScenarioConfig parse_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config_text(buffer.str());
    }
    catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

json to_json(const ScenarioConfig& c)
{
    json doc;
    json params = json::object();
    for (const auto& field : kParamFields) {
        params[field.key] = c.params.*field.member;
    }
    doc["params"] = params;
    json initial  = json::object();
    for (auto comp : kAllCompartments) {
        initial[std::string(compartment_name(comp))] = c.initial[comp];
    }
    doc["initial"] = initial;
    doc["grid"]    = {{"h", c.h}, {"t_end", c.t_end}};
    doc["kernel"]  = std::string(to_string(c.kernel));
    doc["alpha"]   = c.alpha;
    doc["eta"]     = c.eta;
    json outputs   = {{"csv_path", c.outputs.csv_path}};
    if (c.outputs.svg_path) {
        outputs["svg_path"] = *c.outputs.svg_path;
    }
    if (c.outputs.report_path) {
        outputs["report_path"] = *c.outputs.report_path;
    }
    doc["outputs"] = outputs;
    if (c.bound_check) {
        doc["bound_check"] = std::string(to_string(*c.bound_check));
    }
    doc["ml_policy"] = {{"series_term_cap", c.ml_policy.series_term_cap},
                        {"series_radius", c.ml_policy.series_radius},
                        {"asymptotic_order", c.ml_policy.asymptotic_order},
                        {"target_abs_tol", c.ml_policy.target_abs_tol}};
    doc["cf_normalization"] = c.cf_normalization;
    if (c.ab_normalization) {
        doc["ab_normalization"] = *c.ab_normalization;
    }
    doc["fractal_time_constant"] = c.fractal_time_constant;
    doc["first_node_rule"]       = std::string(to_string(c.first_node_rule));
    return doc;
}

std::string serialize_config(const ScenarioConfig& config)
{
    return to_json(config).dump(2) + "\n";
}

double* param_by_name(ModelParams& params, std::string_view name)
{
    for (const auto& field : kParamFields) {
        if (name == field.key) {
            return &(params.*field.member);
        }
    }
    return nullptr;
}

} // namespace ffvax
