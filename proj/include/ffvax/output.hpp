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
#ifndef FFVAX_OUTPUT_HPP
#define FFVAX_OUTPUT_HPP

#include "ffvax/solvers.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace ffvax
{

/// Locale-independent general-format text with the given significant digits.
std::string format_double(double v, int significant_digits = 17);

/// Header t,S_p,I,I_p,I_n,I_c,R,D,N then one row per node.
std::string render_trajectory_csv(const Trajectory& traj);
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

using CsvRow = std::array<double, kNumCompartments + 2>;
/// Rows of a file written by write_trajectory_csv (t, seven compartments, N).
std::vector<CsvRow> read_trajectory_csv(const std::filesystem::path& path);

std::string render_plot_svg(const Trajectory& traj, const std::vector<Compartment>& selection);
void emit_plot_svg(const Trajectory& traj, const std::filesystem::path& path,
                   const std::vector<Compartment>& selection);

/// Writes text to path, surfacing failures as IoError with the path.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace ffvax

#endif // FFVAX_OUTPUT_HPP
