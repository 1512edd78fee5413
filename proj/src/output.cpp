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
#include "ffvax/output.hpp"
#include "ffvax/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <locale>
#include <sstream>

namespace ffvax
{

namespace
{

constexpr std::size_t kMaxPlotPoints = 2000;
constexpr double kWidth  = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft   = 70.0;
constexpr double kRight  = 150.0;
constexpr double kTop    = 20.0;
constexpr double kBottom = 50.0;

constexpr const char* kPalette[kNumCompartments] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                    "#9467bd", "#17becf", "#7f7f7f"};

std::string fixed2(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::vector<std::size_t> plot_nodes(std::size_t count)
{
    const std::size_t stride = (count + kMaxPlotPoints - 1) / kMaxPlotPoints;
    std::vector<std::size_t> nodes;
    for (std::size_t k = 0; k < count; k += std::max<std::size_t>(stride, 1)) {
        nodes.push_back(k);
    }
    if (nodes.back() != count - 1) {
        nodes.push_back(count - 1);
    }
    return nodes;
}

double parse_field(std::string_view text, const std::filesystem::path& path, std::size_t line)
{
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + std::string(text) + "'");
    }
    return v;
}

} // namespace

std::string format_double(double v, int significant_digits)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, significant_digits);
    return std::string(buf, res.ptr);
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

std::string render_trajectory_csv(const Trajectory& traj)
{
    std::string out = "t";
    for (auto c : kAllCompartments) {
        out += ',';
        out += compartment_name(c);
    }
    out += ",N\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const State& x = traj.states[k];
        out += format_double(traj.grid.time(k));
        for (double v : x.values) {
            out += ',';
            out += format_double(v);
        }
        out += ',';
        out += format_double(total_population(x));
        out += '\n';
    }
    return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path)
{
    write_text_file(path, render_trajectory_csv(traj));
}

std::vector<CsvRow> read_trajectory_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line) || line != "t,S_p,I,I_p,I_n,I_c,R,D,N") {
        throw IoError(path.string() + ": missing trajectory header");
    }
    std::vector<CsvRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        CsvRow row{};
        std::string_view rest(line);
        for (std::size_t col = 0; col < row.size(); ++col) {
            const auto comma = rest.find(',');
            if ((comma == std::string_view::npos) != (col + 1 == row.size())) {
                throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 9 columns");
            }
            row[col] = parse_field(rest.substr(0, comma), path, line_no);
            rest     = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        rows.push_back(row);
    }
    return rows;
}

std::string render_plot_svg(const Trajectory& traj, const std::vector<Compartment>& selection)
{
    if (selection.empty()) {
        throw ValidationError("plot selection must name at least one compartment");
    }
    if (traj.states.empty()) {
        throw ValidationError("cannot plot an empty trajectory");
    }
    const auto nodes   = plot_nodes(traj.states.size());
    const double t_max = std::max(traj.grid.time(traj.states.size() - 1), traj.grid.h);
    double y_max       = 0.0;
    for (auto k : nodes) {
        for (auto c : selection) {
            y_max = std::max(y_max, traj.states[k][c]);
        }
    }
    if (!(y_max > 0.0)) {
        y_max = 1.0;
    }
    y_max *= 1.05;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto px       = [&](double t) { return kLeft + plot_w * t / t_max; };
    const auto py       = [&](double y) { return kTop + plot_h * (1.0 - y / y_max); };

    std::ostringstream svg;
    svg.imbue(std::locale::classic());
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    svg << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
        << kTop + plot_h << "\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h
        << "\"/>\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = kLeft + plot_w * i / kTicks;
        const double fy = kTop + plot_h * (1.0 - static_cast<double>(i) / kTicks);
        svg << "<line x1=\"" << fixed2(fx) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << fixed2(fx) << "\" y2=\""
            << kTop + plot_h + 5 << "\"/>\n";
        svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fixed2(fy) << "\" x2=\"" << kLeft << "\" y2=\""
            << fixed2(fy) << "\"/>\n";
    }
    svg << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = kLeft + plot_w * i / kTicks;
        const double fy = kTop + plot_h * (1.0 - static_cast<double>(i) / kTicks);
        svg << "<text x=\"" << fixed2(fx) << "\" y=\"" << kTop + plot_h + 20
            << "\" text-anchor=\"middle\">" << format_double(t_max * i / kTicks, 4) << "</text>\n";
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fixed2(fy + 4) << "\" text-anchor=\"end\">"
            << format_double(y_max * i / kTicks, 4) << "</text>\n";
    }
    svg << "<text x=\"" << fixed2(kLeft + plot_w / 2) << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\">t</text>\n";
    svg << "</g>\n";

    for (std::size_t s = 0; s < selection.size(); ++s) {
        const auto c = selection[s];
        svg << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kPalette[static_cast<std::size_t>(c)]
            << "\" points=\"";
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const auto k = nodes[i];
            svg << (i ? " " : "") << fixed2(px(traj.grid.time(k))) << ',' << fixed2(py(traj.states[k][c]));
        }
        svg << "\"/>\n";
        const double ly = kTop + 15.0 + 20.0 * static_cast<double>(s);
        svg << "<line x1=\"" << kWidth - kRight + 15 << "\" y1=\"" << fixed2(ly) << "\" x2=\"" << kWidth - kRight + 40
            << "\" y2=\"" << fixed2(ly) << "\" stroke=\"" << kPalette[static_cast<std::size_t>(c)]
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << kWidth - kRight + 48 << "\" y=\"" << fixed2(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << compartment_name(c) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot_svg(const Trajectory& traj, const std::filesystem::path& path,
                   const std::vector<Compartment>& selection)
{
    write_text_file(path, render_plot_svg(traj, selection));
}

} // namespace ffvax
