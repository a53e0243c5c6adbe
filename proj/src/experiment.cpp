#include "etdg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "etdg/dg_forms.hpp"
#include "etdg/embedding.hpp"
#include "etdg/solver.hpp"

namespace etdg {

namespace {

const std::vector<std::string> kMethodOrder = {"dg", "et", "etbox", "qt"};

int method_rank(const std::string& m) {
  const auto it = std::find(kMethodOrder.begin(), kMethodOrder.end(), m);
  return static_cast<int>(it - kMethodOrder.begin());
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("invalid integer '" + item + "' for " + key);
    }
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid number '" + text + "' for " + key);
  }
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "case") {
      c.case_name = value;
    } else if (key == "methods") {
      c.methods = split_list(value);
    } else if (key == "p") {
      c.p_list = parse_int_list(key, value);
    } else if (key == "n") {
      c.n_list = parse_int_list(key, value);
    } else if (key == "sigma") {
      c.sigma = parse_double(key, value);
    } else if (key == "box_scale" || key == "box-scale") {
      c.box_scale = parse_double(key, value);
    } else if (key == "out") {
      c.output = value;
    } else {
      throw UsageError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

OperatorKind operator_kind_for(const std::string& method, const PdeCoefficients& coeffs) {
  if (method == "et") return coeffs.diffusive ? OperatorKind::Dar : OperatorKind::Ar;
  if (method == "etbox") {
    if (!coeffs.diffusive) {
      throw UsageError("method etbox needs a diffusion problem (case " + coeffs.name + ")");
    }
    return OperatorKind::DarBox;
  }
  if (method == "qt") {
    if (!coeffs.pure_diffusion || !coeffs.alpha_derivative || !coeffs.source_derivative) {
      throw UsageError("method qt is implemented only for pure diffusion data (case " +
                       coeffs.name + ")");
    }
    return OperatorKind::QtDiffusion;
  }
  throw UsageError("method '" + method + "' has no local operator");
}

void validate(const ExperimentConfig& config) {
  PdeCoefficients coeffs;
  try {
    coeffs = builtin_case(config.case_name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (config.methods.empty() || config.p_list.empty() || config.n_list.empty()) {
    throw UsageError("methods, p and n lists must be nonempty");
  }
  for (const auto& m : config.methods) {
    if (method_rank(m) == static_cast<int>(kMethodOrder.size())) {
      throw UsageError("unknown method '" + m + "' (expected dg, et, etbox or qt)");
    }
    int min_p = 1;
    if (m != "dg") min_p = min_degree(operator_kind_for(m, coeffs));
    for (int p : config.p_list) {
      if (p < min_p || p > kMaxDegree) {
        throw UsageError("degree p=" + std::to_string(p) + " unsupported for method " + m +
                         " (range " + std::to_string(min_p) + ".." + std::to_string(kMaxDegree) +
                         ")");
      }
    }
  }
  for (int n : config.n_list) {
    if (n < 1 || n > kMaxSubdivisions) {
      throw UsageError("mesh subdivisions n=" + std::to_string(n) + " outside 1.." +
                       std::to_string(kMaxSubdivisions));
    }
  }
  if (config.sigma && !(*config.sigma > 0.0)) throw UsageError("sigma must be positive");
  if (!(config.box_scale > 0.0) || config.box_scale > 1.0) {
    throw UsageError("box scale must lie in (0, 1]");
  }
}

ExperimentRow run_single(const PdeCoefficients& coeffs, const std::string& method, int p, int n,
                         double sigma, double box_scale) {
  const auto space = make_space(n, p);
  DiscreteSolution sol;
  FormKind form = coeffs.diffusive ? FormKind::DarSip : FormKind::ArUpwind;
  try {
    const DgSystem sys = assemble_global_system(form, space, coeffs, sigma);
    if (method == "dg") {
      sol = solve_standard_dg(sys);
    } else {
      LocalOperatorOptions local;
      local.box_scale = box_scale;
      const auto ops =
          assemble_local_operators(*space, operator_kind_for(method, coeffs), coeffs, local);
      const GlobalEmbedding emb = compute_global_embedding(*space, ops);
      sol = solve_embedded_trefftz(sys, emb);
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw SolverError("method=" + method + " p=" + std::to_string(p) + " n=" + std::to_string(n) +
                      ": " + e.what());
  }
  const ErrorReport err = compute_errors(sol, coeffs, form, sigma);
  ExperimentRow row;
  row.method = method;
  row.p = p;
  row.n = n;
  row.h = err.h;
  row.ndof_full = err.ndof_full;
  row.ndof_trefftz = err.ndof_trefftz;
  row.l2error = err.l2_error;
  row.dgerror = err.vh_error;
  return row;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  validate(config);
  const PdeCoefficients coeffs = builtin_case(config.case_name);
  std::vector<std::string> methods = config.methods;
  std::sort(methods.begin(), methods.end(),
            [](const auto& a, const auto& b) { return method_rank(a) < method_rank(b); });
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  std::vector<int> ps = config.p_list;
  std::vector<int> ns = config.n_list;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::vector<ExperimentRow> rows;
  for (const auto& m : methods) {
    for (int p : ps) {
      const double sigma = config.sigma.value_or(default_sigma(p));
      for (int n : ns) rows.push_back(run_single(coeffs, m, p, n, sigma, config.box_scale));
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "method,p,h,ndof_full,ndof_trefftz,l2error,dgerror\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.p << ',' << format("%.12e", r.h) << ',' << r.ndof_full << ','
        << r.ndof_trefftz << ',' << format("%.12e", r.l2error) << ','
        << format("%.12e", r.dgerror) << '\n';
  }
}

void write_eoc_summary(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  std::map<std::pair<int, int>, std::vector<const ExperimentRow*>> groups;
  for (const auto& r : rows) groups[{method_rank(r.method), r.p}].push_back(&r);
  for (const auto& [key, group] : groups) {
    out << "method=" << group.front()->method << " p=" << key.second << '\n';
    out << "       n            h      l2error   eoc      dgerror   eoc\n";
    for (std::size_t i = 0; i < group.size(); ++i) {
      const auto& r = *group[i];
      char line[160];
      std::string l2_eoc = "     -";
      std::string dg_eoc = "     -";
      if (i > 0) {
        const auto& prev = *group[i - 1];
        const double lh = std::log(prev.h / r.h);
        l2_eoc = format("%6.2f", std::log(prev.l2error / r.l2error) / lh);
        dg_eoc = format("%6.2f", std::log(prev.dgerror / r.dgerror) / lh);
      }
      std::snprintf(line, sizeof line, "%8d %12.4e %12.4e %s %12.4e %s\n", r.n, r.h, r.l2error,
                    l2_eoc.c_str(), r.dgerror, dg_eoc.c_str());
      out << line;
    }
    if (group.size() >= 2) {
      std::vector<std::pair<double, double>> l2, dg;
      for (const auto* r : group) {
        l2.emplace_back(r->h, r->l2error);
        dg.emplace_back(r->h, r->dgerror);
      }
      try {
        out << "  least-squares eoc: l2 " << format("%.3f", estimate_eoc(l2).slope) << ", dg "
            << format("%.3f", estimate_eoc(dg).slope) << '\n';
      } catch (const std::invalid_argument&) {
        out << "  least-squares eoc: n/a\n";
      }
    }
  }
}

void write_diagnostics(std::ostream& out, const DiagnosticsReport& report) {
  out << "rho_max " << format("%.6e", report.rho_max) << '\n';
  out << "sigma_min_rel " << format("%.6e", report.sigma_min_rel) << '\n';
  out << "downgraded_elements " << report.downgraded_elements << '\n';
  out << "dim_table p n n_trefftz dim_test elements\n";
  for (const auto& row : report.dim_table) {
    out << "dim " << row.p << ' ' << row.n << ' ' << row.n_trefftz << ' ' << row.dim_test << ' '
        << row.elements << '\n';
  }
  out << "block_equivalence_gap " << format("%.6e", report.block_equivalence_gap) << '\n';
}

}  // namespace etdg
