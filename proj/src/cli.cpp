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
#include "ffvax/cli.hpp"
#include "ffvax/config.hpp"
#include "ffvax/error.hpp"
#include "ffvax/output.hpp"
#include "ffvax/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

namespace ffvax
{

namespace
{

/// Thrown for bad flag values detected after CLI11 has parsed the command line.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct SimulateOverrides {
    std::optional<std::string> kernel;
    std::optional<double> alpha;
    std::optional<double> eta;
    std::optional<double> h;
    std::optional<double> t_end;
    std::optional<std::string> csv;
    std::optional<std::string> svg;
    std::optional<std::string> report;
};

struct SweepOptions {
    std::string param;
    double from = 0.0;
    double to   = 0.0;
    int steps   = 0;
};

std::string format_complex(const std::complex<double>& z)
{
    std::string s = format_double(z.real());
    if (z.imag() != 0.0) {
        s += z.imag() < 0.0 ? " - " : " + ";
        s += format_double(std::fabs(z.imag())) + "i";
    }
    return s;
}

Trajectory run(const ScenarioConfig& cfg)
{
    return integrate(cfg.kernel, cfg.params, cfg.initial, cfg.grid(), cfg.alpha, cfg.eta, cfg.scheme_options());
}

void print_state(std::ostream& out, const std::string& prefix, const State& x)
{
    for (auto c : kAllCompartments) {
        out << prefix << compartment_name(c) << " = " << format_double(x[c]) << '\n';
    }
}

ScenarioConfig apply_overrides(ScenarioConfig cfg, const SimulateOverrides& o)
{
    if (o.kernel) {
        const auto k = kernel_from_string(*o.kernel);
        if (!k) {
            throw UsageError("--kernel must be one of classical|ffp|ffe|ffm");
        }
        cfg.kernel = *k;
    }
    if (o.alpha) {
        cfg.alpha = cfg.params.alpha = *o.alpha;
    }
    if (o.eta) {
        cfg.eta = cfg.params.eta = *o.eta;
    }
    if (o.h) {
        cfg.h = *o.h;
    }
    if (o.t_end) {
        cfg.t_end = *o.t_end;
    }
    if (o.csv) {
        cfg.outputs.csv_path = *o.csv;
    }
    if (o.svg) {
        cfg.outputs.svg_path = *o.svg;
    }
    if (o.report) {
        cfg.outputs.report_path = *o.report;
    }
    try {
        validate(cfg);
    }
    catch (const ValidationError& e) {
        throw UsageError(std::string("invalid override: ") + e.what());
    }
    return cfg;
}

int cmd_simulate(const ScenarioConfig& base, const SimulateOverrides& overrides, std::ostream& out,
                 std::ostream& err)
{
    const ScenarioConfig cfg = apply_overrides(base, overrides);
    const auto started       = std::chrono::steady_clock::now();
    const Trajectory traj    = run(cfg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    write_trajectory_csv(traj, cfg.outputs.csv_path);
    out << "kernel = " << to_string(traj.kernel) << '\n';
    out << "nodes = " << traj.states.size() << '\n';
    out << "csv = " << cfg.outputs.csv_path << '\n';
    if (cfg.outputs.svg_path) {
        emit_plot_svg(traj, *cfg.outputs.svg_path,
                      std::vector<Compartment>(kAllCompartments.begin(), kAllCompartments.end()));
        out << "svg = " << *cfg.outputs.svg_path << '\n';
    }
    if (cfg.outputs.report_path) {
        write_text_file(*cfg.outputs.report_path, build_run_report(cfg, traj, wall).dump(2) + "\n");
        out << "report = " << *cfg.outputs.report_path << '\n';
    }
    print_state(out, "final.", traj.states.back());
    if (traj.diverged_at) {
        err << "error: trajectory diverged at node " << *traj.diverged_at << '\n';
        return kExitComputation;
    }
    return kExitOk;
}

int cmd_equilibria(const ScenarioConfig& cfg, std::ostream& out)
{
    const auto dfe = disease_free_equilibrium(cfg.params);
    print_state(out, "disease_free.", dfe.point);
    out << "disease_free.residual = " << format_double(dfe.residual_norm) << '\n';
    try {
        const auto end = endemic_equilibrium(cfg.params);
        print_state(out, "endemic.", end.point);
        out << "endemic.residual = " << format_double(end.residual_norm) << '\n';
        out << "endemic.newton_iterations = " << end.refinement_iterations << '\n';
    }
    catch (const NoEndemicEquilibrium& e) {
        out << "endemic = none (" << e.what() << ")\n";
    }
    return kExitOk;
}

int cmd_r0(const ScenarioConfig& cfg, std::ostream& out)
{
    out << "R0 = " << format_summary_number(reproduction_number(cfg.params)) << '\n';
    out << "SN = " << format_summary_number(strength_number(cfg.params)) << '\n';
    out << "ngm_spectral_radius = " << format_summary_number(next_generation_matrices(cfg.params).spectral_radius)
        << '\n';
    return kExitOk;
}

int cmd_stability(const ScenarioConfig& cfg, std::ostream& out)
{
    const auto rep = stability_spectrum(cfg.params);
    out << "classification = " << to_string(rep.classification) << '\n';
    for (std::size_t k = 0; k < rep.eigenvalues.size(); ++k) {
        out << "eigenvalue[" << k << "] = " << format_complex(rep.eigenvalues[k]) << '\n';
    }
    out << "threshold_eigenvalue = " << format_double(rep.threshold_eigenvalue) << '\n';
    return kExitOk;
}

/// Writes the table to path when given, otherwise to out after the summary.
void emit_table(const std::optional<std::string>& path, const std::string& table, std::ostream& out)
{
    if (path) {
        write_text_file(*path, table);
        out << "table = " << *path << '\n';
    }
    else {
        out << table;
    }
}

int cmd_bounds(const ScenarioConfig& cfg, const std::optional<std::string>& table_path, std::ostream& out)
{
    const Trajectory traj = run(cfg);
    const auto family     = cfg.bound_check.value_or(OperatorFamily::Classical);
    const auto sup        = sup_bounds_from(std::span<const State>(traj.states));
    const auto options    = cfg.bound_options();

    std::array<std::size_t, kNumCompartments> violations{};
    std::array<std::optional<std::string>, kNumCompartments> inapplicable;
    std::ostringstream table;
    table << "t";
    for (auto c : kAllCompartments) {
        table << ',' << compartment_name(c) << ',' << compartment_name(c) << "_bound";
    }
    table << '\n';
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const double t = traj.grid.time(k);
        table << format_double(t);
        for (auto c : kAllCompartments) {
            const auto idx = static_cast<std::size_t>(c);
            const double x = traj.states[k][c];
            table << ',' << format_double(x) << ',';
            if (inapplicable[idx]) {
                table << "nan";
                continue;
            }
            try {
                const double bound = positivity_lower_bound(family, cfg.params, sup, c, traj.states[0][c], t,
                                                            cfg.alpha, cfg.eta, options);
                table << format_double(bound);
                if (x < bound - 1e-12 * std::max(1.0, std::fabs(bound))) {
                    ++violations[idx];
                }
            }
            catch (const BoundInapplicable& e) {
                inapplicable[idx] = e.what();
                table << "nan";
            }
        }
        table << '\n';
    }

    std::size_t total = 0;
    out << "family = " << to_string(family) << '\n';
    for (auto c : kAllCompartments) {
        const auto idx = static_cast<std::size_t>(c);
        if (inapplicable[idx]) {
            out << "violations." << compartment_name(c) << " = inapplicable (" << *inapplicable[idx] << ")\n";
        }
        else {
            out << "violations." << compartment_name(c) << " = " << violations[idx] << '\n';
            total += violations[idx];
        }
    }
    out << "violations = " << total << '\n';
    emit_table(table_path, table.str(), out);
    return kExitOk;
}

int cmd_lyapunov(const ScenarioConfig& cfg, const std::optional<std::string>& table_path, std::ostream& out)
{
    const State eq        = endemic_equilibrium(cfg.params).point;
    const Trajectory traj = run(cfg);
    std::ostringstream table;
    table << "t,S_p,I,I_p,I_n,I_c,R,D,N,L,dL_dt,d2L_dt2\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const State& x = traj.states[k];
        table << format_double(traj.grid.time(k));
        for (double v : x.values) {
            table << ',' << format_double(v);
        }
        table << ',' << format_double(total_population(x)) << ',' << format_double(lyapunov_value(x, eq)) << ','
              << format_double(lyapunov_derivative(cfg.params, x, eq).dl_dt) << ','
              << format_double(lyapunov_second_derivative(cfg.params, x, eq)) << '\n';
    }
    print_state(out, "equilibrium.", eq);
    emit_table(table_path, table.str(), out);
    return kExitOk;
}

struct SweepRow {
    double value = 0.0;
    double r0    = 0.0;
    double sn    = 0.0;
    double final_i = 0.0;
    StabilityClass stability = StabilityClass::Marginal;
};

SweepRow sweep_point(ScenarioConfig cfg, const std::string& param, double value)
{
    *param_by_name(cfg.params, param) = value;
    validate(cfg.params);
    SweepRow row;
    row.value     = value;
    row.r0        = reproduction_number(cfg.params);
    row.sn        = strength_number(cfg.params);
    row.stability = stability_spectrum(cfg.params).classification;
    const auto traj = run(cfg);
    if (traj.diverged_at) {
        throw DomainError("trajectory diverged at node " + std::to_string(*traj.diverged_at) + " for " + param +
                          " = " + format_double(value));
    }
    row.final_i = traj.states.back().i();
    return row;
}

int cmd_sweep(const ScenarioConfig& cfg, const SweepOptions& opt, std::ostream& out)
{
    if (ModelParams probe; param_by_name(probe, opt.param) == nullptr) {
        throw UsageError("--param must name a model rate, got '" + opt.param + "'");
    }
    if (opt.steps < 1) {
        throw UsageError("--steps must be >= 1");
    }
    std::vector<double> values(static_cast<std::size_t>(opt.steps));
    for (int k = 0; k < opt.steps; ++k) {
        values[static_cast<std::size_t>(k)] =
            opt.steps == 1 ? opt.from : opt.from + (opt.to - opt.from) * k / (opt.steps - 1);
    }

    // Points are independent; evaluate them in batches and keep input order.
    const std::size_t batch = std::max(1u, std::thread::hardware_concurrency());
    std::vector<SweepRow> rows;
    for (std::size_t begin = 0; begin < values.size(); begin += batch) {
        std::vector<std::future<SweepRow>> pending;
        for (std::size_t k = begin; k < std::min(values.size(), begin + batch); ++k) {
            pending.push_back(std::async(std::launch::async, sweep_point, cfg, opt.param, values[k]));
        }
        for (auto& f : pending) {
            rows.push_back(f.get());
        }
    }

    out << opt.param << ",R0,SN,final_I,stability\n";
    for (const auto& r : rows) {
        out << format_double(r.value) << ',' << format_double(r.r0) << ',' << format_double(r.sn) << ','
            << format_double(r.final_i) << ',' << to_string(r.stability) << '\n';
    }
    return kExitOk;
}

} // namespace

std::string format_summary_number(double v)
{
    std::string s = format_double(v, 12);
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";
    }
    return s;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Fractal-fractional information/vaccination model toolkit", "ffvax"};
    app.require_subcommand(1);

    std::string config_path;
    SimulateOverrides overrides;
    SweepOptions sweep;
    std::optional<std::string> table_path;

    const auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    };

    auto* simulate = app.add_subcommand("simulate", "Integrate the scenario and write CSV, SVG and report");
    add_config(simulate);
    simulate->set_help_flag("--help", "Print this help message and exit"); // -h would clash with --h
    simulate->add_option("--kernel", overrides.kernel, "classical|ffp|ffe|ffm");
    simulate->add_option("--alpha", overrides.alpha, "Fractional order in (0,1]");
    simulate->add_option("--eta", overrides.eta, "Fractal dimension in (0,1]");
    simulate->add_option("--h", overrides.h, "Step size");
    simulate->add_option("--t-end", overrides.t_end, "Final time");
    simulate->add_option("--csv", overrides.csv, "Trajectory CSV path");
    simulate->add_option("--svg", overrides.svg, "Plot SVG path");
    simulate->add_option("--report", overrides.report, "Run report JSON path");

    auto* equilibria = app.add_subcommand("equilibria", "Print the disease-free and endemic equilibria");
    add_config(equilibria);
    auto* r0 = app.add_subcommand("r0", "Print the reproduction and strength numbers");
    add_config(r0);
    auto* stability = app.add_subcommand("stability", "Print the spectrum at the disease-free equilibrium");
    add_config(stability);

    auto* bounds = app.add_subcommand("bounds", "Compare a trajectory with its positivity lower bounds");
    add_config(bounds);
    bounds->add_option("--out", table_path, "Write the per-node table here instead of standard output");

    auto* lyapunov = app.add_subcommand("lyapunov", "Lyapunov value and derivatives along a trajectory");
    add_config(lyapunov);
    lyapunov->add_option("--out", table_path, "Write the per-node table here instead of standard output");

    auto* sweep_cmd = app.add_subcommand("sweep", "Threshold summary over a range of one rate");
    add_config(sweep_cmd);
    sweep_cmd->add_option("--param", sweep.param, "Rate to vary, e.g. beta")->required();
    sweep_cmd->add_option("--from", sweep.from, "First value")->required();
    sweep_cmd->add_option("--to", sweep.to, "Last value")->required();
    sweep_cmd->add_option("--steps", sweep.steps, "Number of values, endpoints included")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        const ScenarioConfig cfg = parse_config(config_path);
        if (simulate->parsed()) {
            return cmd_simulate(cfg, overrides, out, err);
        }
        if (equilibria->parsed()) {
            return cmd_equilibria(cfg, out);
        }
        if (r0->parsed()) {
            return cmd_r0(cfg, out);
        }
        if (stability->parsed()) {
            return cmd_stability(cfg, out);
        }
        if (bounds->parsed()) {
            return cmd_bounds(cfg, table_path, out);
        }
        if (lyapunov->parsed()) {
            return cmd_lyapunov(cfg, table_path, out);
        }
        return cmd_sweep(cfg, sweep, out);
    }
    catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitComputation;
    }
}

int cli_main(int argc, const char* const* argv)
{
    return cli_main(argc, argv, std::cout, std::cerr);
}

} // namespace ffvax
