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

// Solver-agnostic mixed-integer linear program plus a CPLEX-LP text writer.

#ifndef RANPLAN_MILP_HPP
#define RANPLAN_MILP_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace ranplan {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Decision variable families of the two planning models.
enum class Symbol {
  y_don,  // donor installed at CS c
  y_iab,  // IAB node installed at CS c
  y_ris,  // RIS installed at CS c
  x,      // ris mode: SRC (t, c, r); baseline: primary access (t, c)
  s,      // baseline backup access (t, c)
  z,      // backhaul link c -> d active
  f,      // backhaul flow c -> d
  t_tx,   // transmit time fraction of node c
  phi,    // RIS orientation at CS r
  l,      // mean access length of TP t
  theta,  // angular separation of TP t
  w,      // wired inflow into donor c
};

struct VarKey {
  Symbol symbol;
  std::array<int, 3> index{-1, -1, -1};

  friend auto operator<=>(const VarKey&, const VarKey&) = default;
};

inline std::string var_name(const VarKey& k) {
  auto i = [&](int n) { return std::to_string(k.index[n]); };
  switch (k.symbol) {
    case Symbol::y_don: return "y_don_c" + i(0);
    case Symbol::y_iab: return "y_iab_c" + i(0);
    case Symbol::y_ris: return "y_ris_c" + i(0);
    case Symbol::x:
      return k.index[2] >= 0 ? "x_t" + i(0) + "_c" + i(1) + "_r" + i(2)
                             : "x_t" + i(0) + "_c" + i(1);
    case Symbol::s: return "s_t" + i(0) + "_c" + i(1);
    case Symbol::z: return "z_c" + i(0) + "_c" + i(1);
    case Symbol::f: return "f_c" + i(0) + "_c" + i(1);
    case Symbol::t_tx: return "ttx_c" + i(0);
    case Symbol::phi: return "phi_r" + i(0);
    case Symbol::l: return "l_t" + i(0);
    case Symbol::theta: return "theta_t" + i(0);
    case Symbol::w: return "w_c" + i(0);
  }
  return "?";
}

enum class VarKind { binary, continuous };
enum class Sense { le, eq, ge };

struct Variable {
  std::string name;
  VarKind kind;
  double lower;
  double upper;
};

struct Term {
  int var;
  double coef;
};

struct Constraint {
  std::string family;  // e.g. "src_activation"; one family per model row type
  std::string name;
  std::vector<Term> terms;
  Sense sense;
  double rhs;
};

class ModelError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class MilpModel {
 public:
  int add_variable(const VarKey& key, VarKind kind, double lower, double upper) {
    if (index_.contains(key)) throw ModelError("duplicate variable " + var_name(key));
    if (kind == VarKind::binary) {
      lower = std::max(lower, 0.0);
      upper = std::min(upper, 1.0);
    }
    const int id = static_cast<int>(vars_.size());
    vars_.push_back({var_name(key), kind, lower, upper});
    keys_.push_back(key);
    index_.emplace(key, id);
    return id;
  }

  /// Adds a row; repeated variables in `terms` are merged and zero
  /// coefficients dropped.
  int add_constraint(std::string family, std::string name, std::vector<Term> terms,
                     Sense sense, double rhs) {
    int idx = static_cast<int>(cons_.size());
    cons_.push_back({std::move(family), std::move(name), normalize(std::move(terms)),
                     sense, rhs});
    return idx;
  }

  void set_objective(std::vector<Term> terms, bool maximize = true) {
    objective_ = normalize(std::move(terms));
    maximize_ = maximize;
  }

  std::optional<int> find(const VarKey& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  int at(const VarKey& key) const {
    auto id = find(key);
    if (!id) throw ModelError("unknown variable " + var_name(key));
    return *id;
  }

  void set_label(std::string label) { label_ = std::move(label); }
  const std::string& label() const { return label_; }

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<VarKey>& keys() const { return keys_; }
  const std::vector<Constraint>& constraints() const { return cons_; }
  const std::vector<Term>& objective() const { return objective_; }
  bool maximize() const { return maximize_; }
  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(cons_.size()); }

  std::size_t count_family(std::string_view family) const {
    return static_cast<std::size_t>(std::count_if(
        cons_.begin(), cons_.end(), [&](const Constraint& c) { return c.family == family; }));
  }

  double evaluate(const std::vector<Term>& terms, const std::vector<double>& values) const {
    double v = 0.0;
    for (const auto& t : terms) v += t.coef * values.at(static_cast<std::size_t>(t.var));
    return v;
  }
  double objective_value(const std::vector<double>& values) const {
    return evaluate(objective_, values);
  }

  /// Largest bound, row or integrality violation of `values`. With
  /// `relative`, each row residual is divided by the row's magnitude
  /// max(1, |rhs|, max_i |a_i v_i|).
  double max_violation(const std::vector<double>& values, bool relative = false) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < vars_.size(); ++j) {
      const double v = values.at(j);
      worst = std::max({worst, vars_[j].lower - v, v - vars_[j].upper});
      if (vars_[j].kind == VarKind::binary)
        worst = std::max(worst, std::fabs(v - std::round(v)));
    }
    for (const auto& c : cons_) {
      const double a = evaluate(c.terms, values);
      double r = 0.0;
      switch (c.sense) {
        case Sense::le: r = a - c.rhs; break;
        case Sense::ge: r = c.rhs - a; break;
        case Sense::eq: r = std::fabs(a - c.rhs); break;
      }
      if (relative) {
        double scale = std::max(1.0, std::fabs(c.rhs));
        for (const auto& t : c.terms)
          scale = std::max(scale, std::fabs(t.coef * values.at(static_cast<std::size_t>(t.var))));
        r /= scale;
      }
      worst = std::max(worst, r);
    }
    return worst;
  }

  /// Throws ModelError if a row references an undeclared variable or a
  /// binary has bounds outside [0, 1].
  void check() const {
    const int n = num_variables();
    auto check_terms = [&](const std::vector<Term>& ts, const std::string& where) {
      for (const auto& t : ts)
        if (t.var < 0 || t.var >= n)
          throw ModelError(where + " references undeclared variable " + std::to_string(t.var));
    };
    for (const auto& c : cons_) check_terms(c.terms, c.name);
    check_terms(objective_, "objective");
    for (const auto& v : vars_)
      if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0))
        throw ModelError("binary " + v.name + " has bounds outside [0,1]");
  }

 private:
  static std::vector<Term> normalize(std::vector<Term> terms) {
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> out;
    for (const auto& t : terms) {
      if (!out.empty() && out.back().var == t.var) out.back().coef += t.coef;
      else out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return t.coef == 0.0; });
    return out;
  }

  std::vector<Variable> vars_;
  std::vector<VarKey> keys_;
  std::map<VarKey, int> index_;
  std::vector<Constraint> cons_;
  std::vector<Term> objective_;
  bool maximize_ = true;
  std::string label_;
};

// ---------------------------------------------------------------------------
// LP format

namespace detail {

// Shortest representation that parses back to the same double.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

inline void append_terms(std::string& out, const std::vector<Term>& terms,
                         const std::vector<Variable>& vars) {
  constexpr int kTermsPerLine = 8;
  int on_line = 0;
  for (const auto& t : terms) {
    if (on_line == kTermsPerLine) {
      out += "\n   ";
      on_line = 0;
    }
    out += t.coef < 0.0 ? " - " : " + ";
    out += format_number(std::fabs(t.coef));
    out += ' ';
    out += vars[static_cast<std::size_t>(t.var)].name;
    ++on_line;
  }
}

}  // namespace detail

/// CPLEX LP text. Rows and columns appear in model order, so the output
/// is byte-stable for a given model.
inline std::string export_lp(const MilpModel& m) {
  const auto& vars = m.variables();
  std::string out;
  out += "\\ ranplan " + (m.label().empty() ? std::string("model") : m.label() + " model") + ": ";
  out += std::to_string(m.num_variables()) + " variables, ";
  out += std::to_string(m.num_constraints()) + " constraints\n";
  out += m.maximize() ? "Maximize\n" : "Minimize\n";
  out += " obj:";
  if (m.objective().empty() && !vars.empty()) out += " 0 " + vars.front().name;
  detail::append_terms(out, m.objective(), vars);
  out += "\nSubject To\n";
  for (const auto& c : m.constraints()) {
    out += ' ';
    out += c.name;
    out += ':';
    if (c.terms.empty()) out += " 0 " + (vars.empty() ? std::string("") : vars.front().name);
    detail::append_terms(out, c.terms, vars);
    switch (c.sense) {
      case Sense::le: out += " <= "; break;
      case Sense::ge: out += " >= "; break;
      case Sense::eq: out += " = "; break;
    }
    out += detail::format_number(c.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const auto& v : vars) {
    if (v.kind == VarKind::binary && v.lower == 0.0 && v.upper == 1.0) continue;
    const bool lo_inf = v.lower == -kInf, up_inf = v.upper == kInf;
    if (lo_inf && up_inf) {
      out += ' ' + v.name + " free\n";
    } else if (up_inf) {
      out += ' ' + v.name + " >= " + detail::format_number(v.lower) + '\n';
    } else {
      out += ' ' + (lo_inf ? std::string("-inf") : detail::format_number(v.lower)) +
             " <= " + v.name + " <= " + detail::format_number(v.upper) + '\n';
    }
  }
  bool any_binary = false;
  for (const auto& v : vars) {
    if (v.kind != VarKind::binary) continue;
    if (!any_binary) out += "Binaries\n";
    any_binary = true;
    out += ' ' + v.name + '\n';
  }
  out += "End\n";
  return out;
}

}  // namespace ranplan

#endif  // RANPLAN_MILP_HPP
