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

// MILP backends.
//
//   highs     in-process HiGHS, model passed as a sparse column-wise matrix
//   highs-lp  in-process HiGHS reading the exported LP text, mapped back by
//             column name (exercises the LP writer end to end)
//   external  runs `<command> <model.lp> <solution.txt> <time limit s>`; the command comes
//             from SolveOptions::external_command or RANPLAN_EXTERNAL_SOLVER
//
// External solution files are plain text:
//
//   status optimal|infeasible|time_limit|error
//   objective <value>
//   gap <value>              (optional)
//   <variable name> <value>  (one line per nonzero variable)

#ifndef RANPLAN_SOLVER_HPP
#define RANPLAN_SOLVER_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <sys/wait.h>

#include "Highs.h"
#include "ranplan/milp.hpp"
#include "ranplan/scenario.hpp"

namespace ranplan {

enum class SolveStatus { optimal, infeasible, time_limit, error };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::error: return "error";
  }
  return "error";
}

inline SolveStatus parse_status(std::string_view s) {
  if (s == "optimal") return SolveStatus::optimal;
  if (s == "infeasible") return SolveStatus::infeasible;
  if (s == "time_limit") return SolveStatus::time_limit;
  if (s == "error") return SolveStatus::error;
  throw FormatError("unknown solve status '" + std::string(s) + "'");
}

struct SolveResult {
  SolveStatus status = SolveStatus::error;
  double objective_value = 0.0;
  std::vector<double> variable_values;  // model order; empty without incumbent
  double solve_time = 0.0;              // seconds
  double gap = 0.0;                     // relative MIP gap
  std::string message;

  bool has_solution() const { return !variable_values.empty(); }
};

struct SolveOptions {
  double time_limit = 600.0;  // seconds
  double rel_gap = 0.0;
  double abs_gap = 1e-9;
  int threads = 1;
  int seed = 0;
  bool verbose = false;
  std::string external_command;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual SolveResult solve(const MilpModel& model, const SolveOptions& opts) = 0;
};

namespace detail {

inline HighsLp to_highs_lp(const MilpModel& m) {
  HighsLp lp;
  const auto& vars = m.variables();
  lp.num_col_ = m.num_variables();
  lp.num_row_ = m.num_constraints();
  lp.sense_ = m.maximize() ? ObjSense::kMaximize : ObjSense::kMinimize;
  lp.col_cost_.assign(vars.size(), 0.0);
  for (const auto& t : m.objective()) lp.col_cost_[static_cast<std::size_t>(t.var)] += t.coef;
  lp.integrality_.reserve(vars.size());
  for (const auto& v : vars) {
    lp.col_lower_.push_back(v.lower == -kInf ? -kHighsInf : v.lower);
    lp.col_upper_.push_back(v.upper == kInf ? kHighsInf : v.upper);
    lp.integrality_.push_back(v.kind == VarKind::binary ? HighsVarType::kInteger
                                                        : HighsVarType::kContinuous);
    lp.col_names_.push_back(v.name);
  }
  // Column-wise storage: HiGHS' native layout.
  std::vector<HighsInt> count(vars.size() + 1, 0);
  for (const auto& c : m.constraints())
    for (const auto& t : c.terms) ++count[static_cast<std::size_t>(t.var) + 1];
  for (std::size_t j = 1; j < count.size(); ++j) count[j] += count[j - 1];
  lp.a_matrix_.format_ = MatrixFormat::kColwise;
  lp.a_matrix_.num_col_ = lp.num_col_;
  lp.a_matrix_.num_row_ = lp.num_row_;
  lp.a_matrix_.start_ = count;
  lp.a_matrix_.index_.resize(static_cast<std::size_t>(count.back()));
  lp.a_matrix_.value_.resize(static_cast<std::size_t>(count.back()));
  HighsInt row = 0;
  for (const auto& c : m.constraints()) {
    for (const auto& t : c.terms) {
      const auto at = static_cast<std::size_t>(count[static_cast<std::size_t>(t.var)]++);
      lp.a_matrix_.index_[at] = row;
      lp.a_matrix_.value_[at] = t.coef;
    }
    lp.row_lower_.push_back(c.sense == Sense::le ? -kHighsInf : c.rhs);
    lp.row_upper_.push_back(c.sense == Sense::ge ? kHighsInf : c.rhs);
    lp.row_names_.push_back(c.name);
    ++row;
  }
  return lp;
}

inline void configure(Highs& h, const SolveOptions& o) {
  h.setOptionValue("output_flag", o.verbose);
  h.setOptionValue("threads", o.threads);
  h.setOptionValue("random_seed", o.seed);
  h.setOptionValue("time_limit", o.time_limit);
  h.setOptionValue("mip_rel_gap", o.rel_gap);
  h.setOptionValue("mip_abs_gap", o.abs_gap);
}

/// Runs a configured Highs instance and collects the result. `column_map`
/// maps HiGHS column j to model variable column_map[j].
inline SolveResult run_highs(Highs& h, const MilpModel& m, const std::vector<int>& column_map) {
  SolveResult r;
  const auto start = std::chrono::steady_clock::now();
  const HighsStatus run = h.run();
  r.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (run == HighsStatus::kError) {
    r.message = "HiGHS run failed";
    return r;
  }
  const auto ms = h.getModelStatus();
  const auto& info = h.getInfo();
  const bool has_point = info.primal_solution_status == kSolutionStatusFeasible;
  switch (ms) {
    case HighsModelStatus::kOptimal: r.status = SolveStatus::optimal; break;
    case HighsModelStatus::kInfeasible:
    case HighsModelStatus::kUnboundedOrInfeasible: r.status = SolveStatus::infeasible; break;
    case HighsModelStatus::kTimeLimit:
    case HighsModelStatus::kIterationLimit:
    case HighsModelStatus::kSolutionLimit:
    case HighsModelStatus::kInterrupt: r.status = SolveStatus::time_limit; break;
    default:
      r.status = SolveStatus::error;
      r.message = "HiGHS model status: " + h.modelStatusToString(ms);
      return r;
  }
  if ((r.status == SolveStatus::optimal || r.status == SolveStatus::time_limit) && has_point) {
    const auto& col = h.getSolution().col_value;
    r.variable_values.assign(static_cast<std::size_t>(m.num_variables()), 0.0);
    for (std::size_t j = 0; j < column_map.size() && j < col.size(); ++j)
      if (column_map[j] >= 0) r.variable_values[static_cast<std::size_t>(column_map[j])] = col[j];
    r.objective_value = m.objective_value(r.variable_values);
    r.gap = r.status == SolveStatus::optimal ? std::max(0.0, info.mip_gap) : info.mip_gap;
    if (!std::isfinite(r.gap) || r.gap < 0.0) r.gap = r.status == SolveStatus::optimal ? 0.0 : kInf;
  } else if (r.status == SolveStatus::optimal) {
    r.status = SolveStatus::error;
    r.message = "HiGHS reported optimal without a primal solution";
  }
  return r;
}

inline std::filesystem::path unique_temp_dir(std::string_view tag) {
  static std::atomic<unsigned> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  auto dir = std::filesystem::temp_directory_path() /
             ("ranplan-" + std::string(tag) + "-" + std::to_string(stamp) + "-" +
              std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace detail

class HighsBackend : public Backend {
 public:
  std::string name() const override { return "highs"; }

  SolveResult solve(const MilpModel& m, const SolveOptions& opts) override {
    Highs h;
    detail::configure(h, opts);
    if (h.passModel(detail::to_highs_lp(m)) == HighsStatus::kError) {
      SolveResult r;
      r.message = "HiGHS rejected the model";
      return r;
    }
    std::vector<int> identity(static_cast<std::size_t>(m.num_variables()));
    for (int j = 0; j < m.num_variables(); ++j) identity[static_cast<std::size_t>(j)] = j;
    return detail::run_highs(h, m, identity);
  }
};

class HighsLpFileBackend : public Backend {
 public:
  std::string name() const override { return "highs-lp"; }

  SolveResult solve(const MilpModel& m, const SolveOptions& opts) override {
    const auto dir = detail::unique_temp_dir("lp");
    const auto path = dir / "model.lp";
    write_text_file(path.string(), export_lp(m));
    Highs h;
    detail::configure(h, opts);
    SolveResult r;
    if (h.readModel(path.string()) == HighsStatus::kError) {
      r.message = "HiGHS could not read " + path.string();
      std::filesystem::remove_all(dir);
      return r;
    }
    std::unordered_map<std::string, int> by_name;
    for (int j = 0; j < m.num_variables(); ++j)
      by_name.emplace(m.variables()[static_cast<std::size_t>(j)].name, j);
    const auto& names = h.getLp().col_names_;
    std::vector<int> map(names.size(), -1);
    for (std::size_t j = 0; j < names.size(); ++j)
      if (auto it = by_name.find(names[j]); it != by_name.end()) map[j] = it->second;
    r = detail::run_highs(h, m, map);
    std::filesystem::remove_all(dir);
    return r;
  }
};

inline constexpr const char* kExternalSolverEnv = "RANPLAN_EXTERNAL_SOLVER";

/// Parses the solution file format described at the top of this header.
inline SolveResult parse_solution_text(const std::string& text, const MilpModel& m) {
  SolveResult r;
  std::unordered_map<std::string, int> by_name;
  for (int j = 0; j < m.num_variables(); ++j)
    by_name.emplace(m.variables()[static_cast<std::size_t>(j)].name, j);
  std::istringstream in(text);
  std::string line;
  bool have_status = false, have_values = false;
  std::vector<double> values(static_cast<std::size_t>(m.num_variables()), 0.0);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key.front() == '#') continue;
    if (key == "status") {
      std::string s;
      ls >> s;
      r.status = parse_status(s);
      have_status = true;
      continue;
    }
    double value = 0.0;
    if (!(ls >> value)) throw FormatError("malformed solution line: " + line);
    if (key == "objective") continue;  // recomputed from the values below
    if (key == "gap") {
      r.gap = value;
      continue;
    }
    auto it = by_name.find(key);
    if (it == by_name.end()) throw FormatError("solution names unknown variable " + key);
    values[static_cast<std::size_t>(it->second)] = value;
    have_values = true;
  }
  if (!have_status) throw FormatError("solution file has no status line");
  const bool incumbent = r.status == SolveStatus::optimal ||
                         (r.status == SolveStatus::time_limit && have_values);
  if (incumbent) {
    r.variable_values = std::move(values);
    r.objective_value = m.objective_value(r.variable_values);
  }
  return r;
}

class ExternalBackend : public Backend {
 public:
  explicit ExternalBackend(std::string command = {}) : command_(std::move(command)) {}

  std::string name() const override { return "external"; }

  SolveResult solve(const MilpModel& m, const SolveOptions& opts) override {
    std::string cmd = !opts.external_command.empty() ? opts.external_command : command_;
    if (cmd.empty())
      if (const char* env = std::getenv(kExternalSolverEnv)) cmd = env;
    SolveResult r;
    if (cmd.empty()) {
      r.message = std::string("no external solver command (set ") + kExternalSolverEnv + ")";
      return r;
    }
    const auto dir = detail::unique_temp_dir("ext");
    const auto lp = dir / "model.lp", sol = dir / "solution.txt";
    write_text_file(lp.string(), export_lp(m));
    const std::string line = cmd + " " + detail::shell_quote(lp.string()) + " " +
                             detail::shell_quote(sol.string()) + " " +
                             detail::shell_quote(std::to_string(opts.time_limit));
    const auto start = std::chrono::steady_clock::now();
    const int rc = std::system(line.c_str());
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (rc != 0 || !std::filesystem::exists(sol)) {
      r.message = "external solver failed (exit " + std::to_string(WIFEXITED(rc) ? WEXITSTATUS(rc) : rc) + "): " + cmd;
      r.solve_time = elapsed;
      std::filesystem::remove_all(dir);
      return r;
    }
    try {
      r = parse_solution_text(read_text_file(sol.string()), m);
    } catch (const std::exception& e) {
      r = SolveResult{};
      r.message = e.what();
    }
    r.solve_time = elapsed;
    std::filesystem::remove_all(dir);
    return r;
  }

 private:
  std::string command_;
};

inline std::unique_ptr<Backend> make_backend(std::string_view id) {
  if (id == "highs") return std::make_unique<HighsBackend>();
  if (id == "highs-lp") return std::make_unique<HighsLpFileBackend>();
  if (id == "external") return std::make_unique<ExternalBackend>();
  throw SolverError("unknown backend '" + std::string(id) +
                    "' (expected highs, highs-lp or external)");
}

/// Solves `model` with the named backend. Any exception escaping the
/// backend becomes status=error. Incumbents are checked against the model;
/// a point violating a row by more than 1e-6 of the row's magnitude is
/// reported as an error.
inline SolveResult solve(const MilpModel& model, const SolveOptions& opts,
                         std::string_view backend = "highs") {
  auto b = make_backend(backend);
  SolveResult r;
  try {
    r = b->solve(model, opts);
  } catch (const std::exception& e) {
    r = SolveResult{};
    r.message = b->name() + ": " + e.what();
    return r;
  }
  if (r.has_solution()) {
    const double viol = model.max_violation(r.variable_values, true);
    if (viol > 1e-6) {
      r.message = b->name() + " returned a point violating the model by " + std::to_string(viol);
      r.status = SolveStatus::error;
      r.variable_values.clear();
    }
  }
  return r;
}

}  // namespace ranplan

#endif  // RANPLAN_SOLVER_HPP
