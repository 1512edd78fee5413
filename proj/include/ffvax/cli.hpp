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
#ifndef FFVAX_CLI_HPP
#define FFVAX_CLI_HPP

#include <ostream>
#include <string>

namespace ffvax
{

inline constexpr int kExitOk          = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage       = 2;

/// Entry point of the ffvax tool; writes results to out and diagnostics to err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

/// 12 significant digits, with ".0" appended to integral values ("R0 = 1.0").
std::string format_summary_number(double v);

} // namespace ffvax

#endif // FFVAX_CLI_HPP
