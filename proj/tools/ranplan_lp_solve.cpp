// Copyright 2026 The ranplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference external solver: reads an LP file with HiGHS and writes the
// solution file format understood by the "external" backend.
//
//   ranplan_lp_solve <model.lp> <solution.txt> <time limit s>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "Highs.h"
#include "ranplan/milp.hpp"

int main(int argc, char** argv) {
  if (argc != 4) {
    std::fprintf(stderr, "usage: %s <model.lp> <solution.txt> <time limit s>\n", argv[0]);
    return 2;
  }
  const std::string model = argv[1], solution = argv[2];
  char* end = nullptr;
  const double time_limit = std::strtod(argv[3], &end);
  if (end == argv[3] || !(time_limit > 0.0)) {
    std::fprintf(stderr, "invalid time limit '%s'\n", argv[3]);
    return 2;
  }

  Highs h;
  h.setOptionValue("output_flag", false);
  h.setOptionValue("threads", 1);
  h.setOptionValue("time_limit", time_limit);
  h.setOptionValue("mip_rel_gap", 0.0);
  h.setOptionValue("mip_abs_gap", 1e-9);
  if (h.readModel(model) == HighsStatus::kError) {
    std::fprintf(stderr, "cannot read %s\n", model.c_str());
    return 1;
  }
  const bool ran = h.run() != HighsStatus::kError;

  std::string status = "error";
  const auto ms = h.getModelStatus();
  if (ran) {
    if (ms == HighsModelStatus::kOptimal) status = "optimal";
    else if (ms == HighsModelStatus::kInfeasible || ms == HighsModelStatus::kUnboundedOrInfeasible)
      status = "infeasible";
    else if (ms == HighsModelStatus::kTimeLimit || ms == HighsModelStatus::kIterationLimit ||
             ms == HighsModelStatus::kSolutionLimit)
      status = "time_limit";
  }
  const auto& info = h.getInfo();
  const bool has_point = ran && info.primal_solution_status == kSolutionStatusFeasible &&
                         (status == "optimal" || status == "time_limit");

  std::ofstream out(solution, std::ios::trunc);
  out << "status " << status << "\n";
  if (has_point) {
    out << "objective " << ranplan::detail::format_number(info.objective_function_value) << "\n";
    if (std::isfinite(info.mip_gap))
      out << "gap " << ranplan::detail::format_number(std::max(0.0, info.mip_gap)) << "\n";
    const auto& names = h.getLp().col_names_;
    const auto& values = h.getSolution().col_value;
    for (std::size_t j = 0; j < names.size(); ++j)
      if (values[j] != 0.0) out << names[j] << " " << ranplan::detail::format_number(values[j]) << "\n";
  }
  out.close();
  if (!out) {
    std::fprintf(stderr, "cannot write %s\n", solution.c_str());
    return 1;
  }
  return 0;
}
