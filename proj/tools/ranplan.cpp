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

// ranplan command-line frontend.
//
// Exit codes: 0 ok, 2 invalid input or plan, 3 infeasible, 4 solver error.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ranplan/ranplan.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ranplan::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSolver = 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string digest_of(const json& j) { return content_digest(j.dump()); }

std::string scenario_digest(const Scenario& s) { return digest_of(to_json(s)); }

// Collects artifacts and timings; written last so it lists everything.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv)
      : start_(Clock::now()) {
    j_["command"] = std::move(command);
    j_["argv"] = std::move(argv);
    j_["version"] = std::string(kVersion);
    j_["outputs"] = json::array();
    j_["timings"] = json::object();
  }

  json& operator[](const char* key) { return j_[key]; }
  void timing(const std::string& name, double s) { j_["timings"][name] = s; }

  void write_output(const std::string& path, const std::string& text) {
    write_text_file(path, text);
    j_["outputs"].push_back({{"path", path}, {"digest", content_digest(text)}});
  }

  void save(const std::string& path, int exit_code) {
    j_["exit_code"] = exit_code;
    j_["timings"]["total_s"] = seconds_since(start_);
    write_text_file(path, j_.dump(2) + "\n");
  }

 private:
  Clock::time_point start_;
  json j_;
};

std::string default_manifest(const std::string& out) { return out + ".manifest.json"; }

// ---------------------------------------------------------------------------
// Planning configuration flags

struct ConfigFlags {
  double mu = 0, budget = 0, demand = 0, xi = 0, fov = 0, price_iab = 0, price_ris = 0;

  void add(CLI::App& app, bool with_mu_budget = true) {
    auto bind = [&](const char* flag, double& dst, double PlanningConfig::*field,
                    const char* help) { bound_.push_back({app.add_option(flag, dst, help), &dst, field}); };
    if (with_mu_budget) {
      bind("--mu", mu, &PlanningConfig::mu, "objective weight in [0,1] (default 0.5)");
      bind("--budget", budget, &PlanningConfig::budget, "budget in price units (default 5)");
    }
    bind("--demand", demand, &PlanningConfig::demand, "per-TP demand in Mbps (default 100)");
    bind("--xi", xi, &PlanningConfig::xi, "backup demand fraction (default 0.5)");
    bind("--fov", fov, &PlanningConfig::fov, "RIS field of view in radians (default 2*pi/3)");
    bind("--price-iab", price_iab, &PlanningConfig::price_iab, "IAB node price (default 1)");
    bind("--price-ris", price_ris, &PlanningConfig::price_ris, "RIS price (default 0.1)");
  }

  // Flags override `base`, which already holds any file-embedded block.
  PlanningConfig apply(PlanningConfig base) const {
    for (const auto& b : bound_)
      if (b.opt->count() > 0) base.*b.field = *b.value;
    base.validate();
    return base;
  }

 private:
  struct Bound {
    CLI::Option* opt;
    const double* value;
    double PlanningConfig::*field;
  };
  std::vector<Bound> bound_;
};

struct SolverFlags {
  std::string backend = "highs";
  double time_limit = 600.0;
  std::string solver_cmd;
  bool no_strengthen = false;

  void add(CLI::App& app) {
    app.add_option("--backend", backend, "highs, highs-lp or external")->capture_default_str();
    app.add_option("--time-limit", time_limit, "solver time limit in seconds")
        ->capture_default_str();
    app.add_option("--solver-cmd", solver_cmd,
                   std::string("external solver command (else $") + kExternalSolverEnv + ")");
    app.add_flag("--no-strengthen", no_strengthen, "omit the redundant valid inequalities");
  }

  SolveOptions options() const {
    SolveOptions o;
    o.time_limit = time_limit;
    o.external_command = solver_cmd;
    return o;
  }

  json to_json() const {
    return {{"backend", backend}, {"time_limit", time_limit}, {"strengthen", !no_strengthen}};
  }
};

// ---------------------------------------------------------------------------
// Shared plan pipeline

struct PlanOutcome {
  SolveResult result;
  std::optional<NetworkPlan> plan;
  std::vector<Violation> violations;
  std::string lp_text;
  std::string error;
  double tables_s = 0, build_s = 0;

  int exit_code() const {
    if (!error.empty()) return kExitSolver;
    if (result.status == SolveStatus::infeasible) return kExitInfeasible;
    if (!plan) return kExitSolver;
    if (!violations.empty()) return kExitInvalid;
    return kExitOk;
  }

  std::string status() const {
    if (!error.empty()) return "error";
    if (plan && !violations.empty()) return "invalid";
    return std::string(to_string(result.status));
  }
};

PlanOutcome run_plan(const Scenario& s, const PlanningConfig& cfg, PlanMode mode,
                     const SolverFlags& sf, bool keep_lp) {
  PlanOutcome o;
  auto t0 = Clock::now();
  const auto tab = build_link_tables(s, RadioConfig{});
  o.tables_s = seconds_since(t0);
  t0 = Clock::now();
  const auto model = build_model(mode, s, tab, cfg, ModelOptions{!sf.no_strengthen});
  o.build_s = seconds_since(t0);
  if (keep_lp) o.lp_text = export_lp(model);
  o.result = solve(model, sf.options(), sf.backend);
  if (o.result.status == SolveStatus::error) {
    o.error = o.result.message.empty() ? "solver error" : o.result.message;
    return o;
  }
  if (!o.result.has_solution()) {
    if (o.result.status == SolveStatus::time_limit) o.error = "no incumbent within the time limit";
    return o;
  }
  try {
    o.plan = extract_plan(model, o.result.variable_values, o.result.objective_value, s, tab, cfg,
                          o.result.status == SolveStatus::optimal);
  } catch (const PlanError& e) {
    o.error = std::string("cannot decode solution: ") + e.what();
    return o;
  }
  o.violations = validate_plan(*o.plan, s, tab, cfg);
  return o;
}

json plan_document(const NetworkPlan& p, const PlanningConfig& cfg, const std::string& run_digest,
                   const std::string& scen_digest) {
  auto j = to_json(p);
  j["planning"] = to_json(cfg);
  j["scenario_digest"] = scen_digest;
  j["run_digest"] = run_digest;
  return j;
}

void print_violations(const std::vector<Violation>& vs) {
  for (const auto& v : vs) std::cerr << "  " << describe(v) << "\n";
}

// Plans loaded from disk: config from flags > plan block > scenario block > defaults.
struct LoadedPlan {
  NetworkPlan plan;
  std::optional<PlanningConfig> planning;
  std::string digest;
};

LoadedPlan load_plan(const std::string& path) {
  const auto text = read_text_file(path);
  const auto j = parse_json_text(text, path);
  LoadedPlan lp{plan_from_json(j), std::nullopt, content_digest(text)};
  if (j.contains("planning")) lp.planning = planning_from_json(j.at("planning"));
  return lp;
}

PlanningConfig resolve_config(const ConfigFlags& flags, const ScenarioDocument& doc,
                              const std::optional<PlanningConfig>& from_plan = std::nullopt) {
  PlanningConfig base = from_plan ? *from_plan : doc.planning.value_or(PlanningConfig{});
  return flags.apply(base);
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  double width = 300, height = 400;
  int n_cs = 25, n_tp = 15;
  std::uint64_t seed = 1;
  std::string out = "scenario.json";
  std::string manifest;
};

int cmd_generate(const GenerateArgs& a, Manifest& m) {
  const auto t0 = Clock::now();
  const auto s = generate(a.width, a.height, a.n_cs, a.n_tp, a.seed);
  m.timing("generate_s", seconds_since(t0));
  const json params = {{"width", a.width}, {"height", a.height}, {"n_cs", a.n_cs},
                       {"n_tp", a.n_tp},   {"seed", a.seed}};
  const auto sd = scenario_digest(s);
  const auto run = digest_of({{"command", "generate"}, {"version", kVersion}, {"params", params}});
  auto j = to_json(s);
  j["run_digest"] = run;
  m["params"] = params;
  m["scenario_digest"] = sd;
  m["config_digest"] = digest_of(params);
  m["run_digest"] = run;
  m.write_output(a.out, j.dump(2) + "\n");
  std::cout << "wrote " << a.out << " (" << a.n_cs << " CS, " << a.n_tp << " TP, digest " << sd
            << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// plan

struct PlanArgs {
  std::string scenario, out = "plan.json", manifest, mode = "ris";
  bool export_lp = false;
  ConfigFlags cfg;
  SolverFlags solver;
};

int cmd_plan(const PlanArgs& a, Manifest& m) {
  const auto doc = load_document(a.scenario);
  const auto mode = parse_mode(a.mode);
  const auto cfg = resolve_config(a.cfg, doc);
  const auto sd = scenario_digest(doc.scenario);
  const auto cd = digest_of(to_json(cfg));
  const auto run = digest_of({{"command", "plan"},
                              {"version", kVersion},
                              {"scenario_digest", sd},
                              {"config", to_json(cfg)},
                              {"mode", a.mode},
                              {"solver", a.solver.to_json()}});
  m["scenario"] = a.scenario;
  m["scenario_digest"] = sd;
  m["config_digest"] = cd;
  m["run_digest"] = run;
  m["effective_config"] = to_json(cfg);
  m["mode"] = a.mode;
  m["solver"] = a.solver.to_json();

  const auto o = run_plan(doc.scenario, cfg, mode, a.solver, a.export_lp);
  m.timing("tables_s", o.tables_s);
  m.timing("build_s", o.build_s);
  m.timing("solve_s", o.result.solve_time);
  m["status"] = o.status();
  m["gap"] = o.result.gap;
  if (!o.result.message.empty()) m["solver_message"] = o.result.message;
  if (a.export_lp) {
    const auto lp = fs::path(a.out).replace_extension(".lp").string();
    m.write_output(lp, o.lp_text);
  }
  const int code = o.exit_code();
  switch (code) {
    case kExitInfeasible:
      std::cerr << "infeasible: no " << a.mode << " plan within budget " << cfg.budget << "\n";
      break;
    case kExitSolver:
      std::cerr << "solver error: " << o.error << "\n";
      break;
    case kExitInvalid:
      std::cerr << "decoded plan violates " << o.violations.size() << " constraint(s):\n";
      print_violations(o.violations);
      m["violations"] = o.violations.size();
      break;
    default:
      m.write_output(a.out, plan_document(*o.plan, cfg, run, sd).dump(2) + "\n");
      std::cout << a.mode << " plan: status " << o.status() << ", objective "
                << detail::format_number(o.plan->objective_value) << ", cost "
                << detail::format_number(o.plan->total_cost) << ", " << o.plan->iab_nodes.size()
                << " IAB, " << o.plan->ris_sites.size() << " RIS\n";
  }
  return code;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
  std::string plan, scenario, manifest;
  ConfigFlags cfg;
};

int cmd_validate(const ValidateArgs& a, Manifest& m) {
  const auto doc = load_document(a.scenario);
  const auto lp = load_plan(a.plan);
  const auto cfg = resolve_config(a.cfg, doc, lp.planning);
  const auto tab = build_link_tables(doc.scenario, RadioConfig{});
  const auto vs = validate_plan(lp.plan, doc.scenario, tab, cfg);
  m["plan_digest"] = lp.digest;
  m["scenario_digest"] = scenario_digest(doc.scenario);
  m["effective_config"] = to_json(cfg);
  m["violations"] = json::array();
  for (const auto& v : vs) m["violations"].push_back(describe(v));
  if (vs.empty()) {
    std::cout << "plan is valid\n";
    return kExitOk;
  }
  std::cerr << vs.size() << " violation(s):\n";
  print_violations(vs);
  return kExitInvalid;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string plan, scenario, out = "resilience", manifest;
  std::vector<int> counts{0, 10, 25, 50, 100, 200};
  int trials = 20;
  std::uint64_t seed = 1;
  bool no_sectors = false;
  int threads = 1;
  ConfigFlags cfg;
};

int cmd_simulate(const SimulateArgs& a, Manifest& m) {
  const auto doc = load_document(a.scenario);
  const auto lp = load_plan(a.plan);
  const auto cfg = resolve_config(a.cfg, doc, lp.planning);
  const auto tab = build_link_tables(doc.scenario, RadioConfig{});
  const auto vs = validate_plan(lp.plan, doc.scenario, tab, cfg);
  if (!vs.empty()) {
    std::cerr << "plan fails validation with " << vs.size() << " violation(s):\n";
    print_violations(vs);
    return kExitInvalid;
  }
  BlockageOptions bo;
  bo.self_blockage = !a.no_sectors;
  bo.threads = a.threads;
  const json params = {{"counts", a.counts},
                       {"trials", a.trials},
                       {"seed", a.seed},
                       {"self_blockage", bo.self_blockage}};
  const auto sd = scenario_digest(doc.scenario);
  const auto run = digest_of({{"command", "simulate"},
                              {"version", kVersion},
                              {"scenario_digest", sd},
                              {"plan_digest", lp.digest},
                              {"params", params}});
  m["plan_digest"] = lp.digest;
  m["scenario_digest"] = sd;
  m["config_digest"] = digest_of(params);
  m["run_digest"] = run;
  m["params"] = params;

  const auto t0 = Clock::now();
  ResilienceReport rep;
  try {
    rep = evaluate(lp.plan, doc.scenario, a.counts, a.trials, a.seed, bo);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  m.timing("evaluate_s", seconds_since(t0));
  const auto comment = "run_digest=" + run;
  m.write_output(a.out + "_per_trial.csv", per_trial_csv(rep, comment));
  m.write_output(a.out + "_summary.csv", summary_csv(rep, comment));
  auto j = to_json(rep, lp.digest);
  j["run_digest"] = run;
  m.write_output(a.out + ".json", j.dump(2) + "\n");
  for (std::size_t k = 0; k < rep.obstacle_counts.size(); ++k)
    std::cout << "obstacles " << rep.obstacle_counts[k] << ": served "
              << detail::format_number(rep.mean[k]) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  double width = 300, height = 400;
  int n_cs = 25, n_tp = 15;
  std::vector<std::uint64_t> seeds{1};
  std::vector<double> budgets{3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> mus{0.5};
  std::vector<std::string> modes{"ris", "baseline"};
  std::string out = "sweep.csv", cells_dir, manifest;
  int jobs = 1;
  int trials = 0;  // >0 also simulates every feasible cell
  std::vector<int> counts{0, 10, 25, 50, 100, 200};
  std::uint64_t sim_seed = 1;
  ConfigFlags cfg;
  SolverFlags solver;
};

struct Cell {
  std::uint64_t seed;
  double budget, mu;
  std::string mode;
};

const char* kSweepHeader = "seed,budget,mu,mode,status,objective,mean_theta,mean_len,n_iab,n_ris,cost";
const char* kSweepResilienceHeader = "seed,budget,mu,mode,obstacle_count,mean,std";

json run_cell(const Cell& c, const Scenario& s, PlanningConfig cfg, const SweepArgs& a) {
  cfg.budget = c.budget;
  cfg.mu = c.mu;
  json r = {{"seed", c.seed}, {"budget", c.budget}, {"mu", c.mu}, {"mode", c.mode}};
  try {
    const auto o = run_plan(s, cfg, parse_mode(c.mode), a.solver, false);
    r["status"] = o.status();
    r["solve_s"] = o.result.solve_time;
    if (!o.error.empty()) r["message"] = o.error;
    if (o.plan && o.violations.empty()) {
      const auto& p = *o.plan;
      r["objective"] = p.objective_value;
      r["mean_theta"] = p.mean_theta();
      r["mean_len"] = p.mean_len();
      r["n_iab"] = p.iab_nodes.size();
      r["n_ris"] = p.ris_sites.size();
      r["cost"] = p.total_cost;
      if (a.trials > 0) {
        const auto rep = evaluate(p, s, a.counts, a.trials, a.sim_seed);
        r["resilience"] = {{"counts", rep.obstacle_counts}, {"mean", rep.mean}, {"std", rep.stddev}};
      }
    }
  } catch (const std::exception& e) {
    r["status"] = "error";
    r["message"] = e.what();
  }
  return r;
}

std::string number_field(const json& r, const char* key) {
  if (!r.contains(key)) return "";
  const auto& v = r.at(key);
  return v.is_number_integer() ? std::to_string(v.get<long long>())
                               : detail::format_number(v.get<double>());
}

int cmd_sweep(const SweepArgs& a, Manifest& m) {
  for (const auto& mode : a.modes) parse_mode(mode);
  if (a.seeds.empty() || a.budgets.empty() || a.mus.empty() || a.modes.empty())
    throw ValidationError("sweep grids must be non-empty");
  if (a.jobs < 1) throw ValidationError("--jobs must be >= 1");
  const PlanningConfig base = a.cfg.apply(PlanningConfig{});

  std::map<std::uint64_t, Scenario> scenarios;
  for (auto seed : a.seeds) scenarios.emplace(seed, generate(a.width, a.height, a.n_cs, a.n_tp, seed));
  std::vector<Cell> cells;
  for (auto seed : a.seeds)
    for (double b : a.budgets)
      for (double mu : a.mus)
        for (const auto& mode : a.modes) cells.push_back({seed, b, mu, mode});

  const json sim = a.trials > 0 ? json{{"trials", a.trials}, {"counts", a.counts}, {"seed", a.sim_seed}}
                                : json(nullptr);
  const json grid = {{"width", a.width}, {"height", a.height}, {"n_cs", a.n_cs}, {"n_tp", a.n_tp},
                     {"seeds", a.seeds}, {"budgets", a.budgets}, {"mu", a.mus}, {"modes", a.modes}};
  const auto run = digest_of({{"command", "sweep"},
                              {"version", kVersion},
                              {"grid", grid},
                              {"config", to_json(base)},
                              {"solver", a.solver.to_json()},
                              {"simulate", sim}});
  const fs::path dir = a.cells_dir.empty() ? fs::path(a.out + ".cells") : fs::path(a.cells_dir);
  fs::create_directories(dir);

  // A cell is reused when its file exists and records the same digest.
  auto cell_digest = [&](const Cell& c) {
    PlanningConfig cfg = base;
    cfg.budget = c.budget;
    cfg.mu = c.mu;
    return digest_of({{"version", kVersion},
                      {"scenario_digest", scenario_digest(scenarios.at(c.seed))},
                      {"config", to_json(cfg)},
                      {"mode", c.mode},
                      {"solver", a.solver.to_json()},
                      {"simulate", sim}});
  };

  std::vector<json> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<int> reused{0};
  std::mutex log_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const auto& c = cells[i];
      const auto d = cell_digest(c);
      const auto path = (dir / (d + ".json")).string();
      if (fs::exists(path)) {
        try {
          auto j = json::parse(read_text_file(path));
          if (j.value("cell_digest", "") == d) {
            rows[i] = std::move(j);
            ++reused;
            continue;
          }
        } catch (const std::exception&) {
          // Unreadable cell files are recomputed.
        }
      }
      auto r = run_cell(c, scenarios.at(c.seed), base, a);
      r["cell_digest"] = d;
      write_text_file(path, r.dump(2) + "\n");
      {
        std::lock_guard<std::mutex> lk(log_mu);
        std::cerr << "cell " << i + 1 << "/" << cells.size() << " seed " << c.seed << " B "
                  << c.budget << " mu " << c.mu << " " << c.mode << ": "
                  << r["status"].get<std::string>() << "\n";
      }
      rows[i] = std::move(r);
    }
  };
  const auto t0 = Clock::now();
  std::vector<std::thread> pool;
  for (int k = 0; k < std::min<int>(a.jobs, static_cast<int>(cells.size())); ++k)
    pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  m.timing("cells_s", seconds_since(t0));

  std::string csv = "# run_digest=" + run + "\n" + kSweepHeader + "\n";
  std::string res_csv = "# run_digest=" + run + "\n" + kSweepResilienceHeader + "\n";
  int failed = 0;
  for (const auto& r : rows) {
    const auto status = r.at("status").get<std::string>();
    if (status != "optimal" && status != "time_limit") ++failed;
    const std::string key = std::to_string(r.at("seed").get<std::uint64_t>()) + "," +
                            detail::format_number(r.at("budget").get<double>()) + "," +
                            detail::format_number(r.at("mu").get<double>()) + "," +
                            r.at("mode").get<std::string>();
    csv += key + "," + status;
    for (const char* f : {"objective", "mean_theta", "mean_len", "n_iab", "n_ris", "cost"})
      csv += "," + number_field(r, f);
    csv += "\n";
    if (r.contains("resilience")) {
      const auto& rs = r.at("resilience");
      for (std::size_t k = 0; k < rs.at("counts").size(); ++k)
        res_csv += key + "," + std::to_string(rs["counts"][k].get<int>()) + "," +
                   detail::format_number(rs["mean"][k].get<double>()) + "," +
                   detail::format_number(rs["std"][k].get<double>()) + "\n";
    }
  }
  m["run_digest"] = run;
  m["config_digest"] = digest_of(to_json(base));
  m["effective_config"] = to_json(base);
  m["grid"] = grid;
  m["solver"] = a.solver.to_json();
  m["cells"] = cells.size();
  m["cells_reused"] = reused.load();
  m["cells_failed"] = failed;
  m["cells_dir"] = dir.string();
  m.write_output(a.out, csv);
  if (a.trials > 0)
    m.write_output(fs::path(a.out).replace_extension("").string() + "_resilience.csv", res_csv);
  std::cout << "sweep: " << cells.size() << " cells, " << reused.load() << " reused, " << failed
            << " without a plan\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report: per (budget, mu, mode) aggregates of a sweep CSV

struct ReportArgs {
  std::string sweep, out = "report.csv", manifest;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) f.push_back(cell);
  if (!line.empty() && line.back() == ',') f.emplace_back();
  return f;
}

int cmd_report(const ReportArgs& a, Manifest& m) {
  const auto text = read_text_file(a.sweep);
  std::istringstream in(text);
  std::string line, run;
  bool header = false;
  struct Acc {
    int cells = 0, feasible = 0;
    double objective = 0, theta = 0, len = 0, cost = 0;
  };
  std::map<std::tuple<double, double, std::string>, Acc> groups;
  while (std::getline(in, line)) {
    if (line.rfind("# run_digest=", 0) == 0) run = line.substr(13);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kSweepHeader) throw FormatError(a.sweep + ": unexpected sweep header");
      header = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw FormatError(a.sweep + ": malformed row '" + line + "'");
    auto& g = groups[{std::stod(f[1]), std::stod(f[2]), f[3]}];
    ++g.cells;
    if (f[5].empty()) continue;
    ++g.feasible;
    g.objective += std::stod(f[5]);
    g.theta += std::stod(f[6]);
    g.len += std::stod(f[7]);
    g.cost += std::stod(f[10]);
  }
  if (!header) throw FormatError(a.sweep + ": missing sweep header");
  const auto report_run = digest_of({{"command", "report"}, {"version", kVersion}, {"input", content_digest(text)}});
  std::string csv = "# run_digest=" + report_run + "\n" +
                    "budget,mu,mode,cells,feasible,feasible_fraction,mean_objective,mean_theta,"
                    "mean_len,mean_cost\n";
  auto fmt = detail::format_number;
  for (const auto& [k, g] : groups) {
    const auto& [b, mu, mode] = k;
    csv += fmt(b) + "," + fmt(mu) + "," + mode + "," + std::to_string(g.cells) + "," +
           std::to_string(g.feasible) + "," + fmt(static_cast<double>(g.feasible) / g.cells);
    if (g.feasible > 0) {
      const double n = g.feasible;
      csv += "," + fmt(g.objective / n) + "," + fmt(g.theta / n) + "," + fmt(g.len / n) + "," +
             fmt(g.cost / n) + "\n";
    } else {
      csv += ",,,,\n";
    }
  }
  m["input"] = a.sweep;
  m["input_digest"] = content_digest(text);
  m["input_run_digest"] = run;
  m["run_digest"] = report_run;
  m.write_output(a.out, csv);
  std::cout << "report: " << groups.size() << " groups\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

int dispatch(int argc, char** argv) {
  CLI::App app{"ranplan: RIS-aware IAB network planning"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "draw a random scenario");
  g->add_option("--width", gen.width, "area width in meters")->capture_default_str();
  g->add_option("--height", gen.height, "area height in meters")->capture_default_str();
  g->add_option("--n-cs", gen.n_cs, "candidate sites")->capture_default_str();
  g->add_option("--n-tp", gen.n_tp, "test points")->capture_default_str();
  g->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  g->add_option("-o,--out", gen.out, "scenario file")->capture_default_str();
  g->add_option("--manifest", gen.manifest, "manifest path (default <out>.manifest.json)");

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "build and solve a planning model");
  p->add_option("-s,--scenario", plan.scenario, "scenario file")->required();
  p->add_option("--mode", plan.mode, "ris or baseline")
      ->check(CLI::IsMember({"ris", "baseline"}))
      ->capture_default_str();
  plan.cfg.add(*p);
  plan.solver.add(*p);
  p->add_flag("--export-lp", plan.export_lp, "also write the model as <out>.lp");
  p->add_option("-o,--out", plan.out, "plan file")->capture_default_str();
  p->add_option("--manifest", plan.manifest, "manifest path (default <out>.manifest.json)");

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "check a plan against every constraint");
  v->add_option("--plan", val.plan, "plan file")->required();
  v->add_option("-s,--scenario", val.scenario, "scenario file")->required();
  val.cfg.add(*v);
  v->add_option("--manifest", val.manifest, "manifest path (default <plan>.validate.json)");

  SimulateArgs simu;
  auto* sm = app.add_subcommand("simulate", "Monte Carlo blockage evaluation of a plan");
  sm->add_option("--plan", simu.plan, "plan file")->required();
  sm->add_option("-s,--scenario", simu.scenario, "scenario file")->required();
  sm->add_option("--counts", simu.counts, "obstacle counts, ascending")
      ->delimiter(',')
      ->capture_default_str();
  sm->add_option("--trials", simu.trials, "trials per count")->capture_default_str();
  sm->add_option("--seed", simu.seed, "base seed")->capture_default_str();
  sm->add_flag("--no-sectors", simu.no_sectors, "disable self-blockage sectors");
  sm->add_option("--threads", simu.threads, "worker threads")->capture_default_str();
  simu.cfg.add(*sm);
  sm->add_option("-o,--out", simu.out, "output prefix")->capture_default_str();
  sm->add_option("--manifest", simu.manifest, "manifest path (default <out>.manifest.json)");

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "plan over seeds x budgets x mu x modes");
  s->add_option("--width", sw.width, "area width in meters")->capture_default_str();
  s->add_option("--height", sw.height, "area height in meters")->capture_default_str();
  s->add_option("--n-cs", sw.n_cs, "candidate sites")->capture_default_str();
  s->add_option("--n-tp", sw.n_tp, "test points")->capture_default_str();
  s->add_option("--scenario-seeds", sw.seeds, "scenario seeds")->delimiter(',')->capture_default_str();
  s->add_option("--budgets", sw.budgets, "budgets")->delimiter(',')->capture_default_str();
  s->add_option("--mu-list", sw.mus, "objective weights")->delimiter(',')->capture_default_str();
  s->add_option("--modes", sw.modes, "ris and/or baseline")
      ->delimiter(',')
      ->check(CLI::IsMember({"ris", "baseline"}))
      ->capture_default_str();
  sw.cfg.add(*s, false);
  sw.solver.add(*s);
  s->add_option("--jobs", sw.jobs, "parallel cells")->capture_default_str();
  s->add_option("--trials", sw.trials, "blockage trials per feasible cell (0 = off)")
      ->capture_default_str();
  s->add_option("--counts", sw.counts, "obstacle counts for --trials")->delimiter(',');
  s->add_option("--sim-seed", sw.sim_seed, "blockage base seed")->capture_default_str();
  s->add_option("-o,--out", sw.out, "long-format CSV")->capture_default_str();
  s->add_option("--cells-dir", sw.cells_dir, "per-cell results (default <out>.cells)");
  s->add_option("--manifest", sw.manifest, "manifest path (default <out>.manifest.json)");

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "aggregate a sweep CSV per budget, mu and mode");
  r->add_option("--sweep", rep.sweep, "sweep CSV")->required();
  r->add_option("-o,--out", rep.out, "report CSV")->capture_default_str();
  r->add_option("--manifest", rep.manifest, "manifest path (default <out>.manifest.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  auto* sub = app.get_subcommands().front();
  Manifest m(sub->get_name(), std::vector<std::string>(argv, argv + argc));
  std::string manifest_path;
  int code = kExitOk;
  try {
    if (sub == g) {
      manifest_path = gen.manifest.empty() ? default_manifest(gen.out) : gen.manifest;
      code = cmd_generate(gen, m);
    } else if (sub == p) {
      manifest_path = plan.manifest.empty() ? default_manifest(plan.out) : plan.manifest;
      code = cmd_plan(plan, m);
    } else if (sub == v) {
      manifest_path = val.manifest.empty() ? val.plan + ".validate.json" : val.manifest;
      code = cmd_validate(val, m);
    } else if (sub == sm) {
      manifest_path = simu.manifest.empty() ? default_manifest(simu.out) : simu.manifest;
      code = cmd_simulate(simu, m);
    } else if (sub == s) {
      manifest_path = sw.manifest.empty() ? default_manifest(sw.out) : sw.manifest;
      code = cmd_sweep(sw, m);
    } else {
      manifest_path = rep.manifest.empty() ? default_manifest(rep.out) : rep.manifest;
      code = cmd_report(rep, m);
    }
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    code = kExitInvalid;
  } catch (const FormatError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    code = kExitInvalid;
  } catch (const PlanError& e) {
    std::cerr << "invalid plan: " << e.what() << "\n";
    code = kExitInvalid;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    code = kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kExitSolver;
  }
  try {
    m.save(manifest_path, code);
  } catch (const std::exception& e) {
    std::cerr << "cannot write manifest: " << e.what() << "\n";
  }
  return code;
}

}  // namespace
}  // namespace ranplan::cli

int main(int argc, char** argv) { return ranplan::cli::dispatch(argc, argv); }
