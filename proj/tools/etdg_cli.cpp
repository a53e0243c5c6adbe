// Experiment runner for embedded Trefftz / quasi-Trefftz DG on the unit square.
//
//   etdg run --case AR_EXAMPLE --methods dg,et --p 3,4 --n 8,16,32 --out ar.csv
//   etdg diagnose --case DAR_EXAMPLE --p 3 --n 4
//   etdg dump-mesh --n 4 --out mesh.txt

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "etdg/analysis.hpp"
#include "etdg/experiment.hpp"
#include "etdg/mesh.hpp"
#include "etdg/solver.hpp"

namespace {

constexpr int kExitSolverFailure = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::string config_file;
  std::string case_name;
  std::string methods;
  std::string p;
  std::string n;
  std::optional<double> sigma;
  std::optional<double> box_scale;
  std::string out;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_file, "key=value configuration file (flags override)");
  cmd->add_option("--case", f.case_name,
                  "AR_EXAMPLE | DAR_EXAMPLE | BOX_DIFFUSION_2D | QT_DIFFUSION");
  cmd->add_option("--methods", f.methods, "comma list of dg, et, etbox, qt");
  cmd->add_option("--p", f.p, "comma list of polynomial degrees");
  cmd->add_option("--n", f.n, "comma list of mesh subdivisions per side");
  cmd->add_option("--sigma", f.sigma, "interior penalty parameter (default 50 p^2)");
  cmd->add_option("--box-scale", f.box_scale, "box side relative to h_K (default 0.25)");
  cmd->add_option("--out", f.out, "output path");
}

etdg::ExperimentConfig make_config(const Flags& f) {
  etdg::ExperimentConfig c;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw etdg::UsageError("cannot open config file " + f.config_file);
    c = etdg::parse_config(in);
  }
  if (!f.case_name.empty()) c.case_name = f.case_name;
  if (!f.methods.empty()) c.methods = etdg::split_list(f.methods);
  auto ints = [](const std::string& key, const std::string& text) {
    std::istringstream in(key + "=" + text);
    auto parsed = etdg::parse_config(in);
    return key == "p" ? parsed.p_list : parsed.n_list;
  };
  if (!f.p.empty()) c.p_list = ints("p", f.p);
  if (!f.n.empty()) c.n_list = ints("n", f.n);
  if (f.sigma) c.sigma = f.sigma;
  if (f.box_scale) c.box_scale = *f.box_scale;
  if (!f.out.empty()) c.output = f.out;
  return c;
}

int run(const Flags& f) {
  const etdg::ExperimentConfig config = make_config(f);
  etdg::validate(config);
  const auto rows = etdg::run_experiment(config);
  if (config.output.empty() || config.output == "-") {
    etdg::write_csv(std::cout, rows);
  } else {
    std::ofstream out(config.output, std::ios::binary);
    if (!out) throw etdg::UsageError("cannot write " + config.output);
    etdg::write_csv(out, rows);
  }
  etdg::write_eoc_summary(std::cout, rows);
  return 0;
}

int diagnose(const Flags& f) {
  etdg::ExperimentConfig config = make_config(f);
  if (config.methods.empty()) config.methods = {"et"};
  etdg::validate(config);
  if (config.methods.size() != 1 || config.methods.front() == "dg") {
    throw etdg::UsageError("diagnose takes exactly one Trefftz method (et, etbox or qt)");
  }
  const auto coeffs = etdg::builtin_case(config.case_name);
  const auto kind = etdg::operator_kind_for(config.methods.front(), coeffs);
  for (int p : config.p_list) {
    for (int n : config.n_list) {
      etdg::DiagnosticsOptions options;
      options.sigma = config.sigma.value_or(0.0);
      options.local.box_scale = config.box_scale;
      const auto report = etdg::run_diagnostics(etdg::make_space(n, p), kind, coeffs, options);
      std::cout << "case " << config.case_name << " kind " << etdg::to_string(kind) << " p " << p
                << " n " << n << '\n';
      etdg::write_diagnostics(std::cout, report);
    }
  }
  return 0;
}

int dump_mesh(const Flags& f) {
  const etdg::ExperimentConfig config = make_config(f);
  if (config.n_list.size() != 1) throw etdg::UsageError("dump-mesh takes a single --n");
  const int n = config.n_list.front();
  if (n < 1 || n > etdg::kMaxSubdivisions) throw etdg::UsageError("n outside 1..128");
  const auto mesh = etdg::build_structured_mesh(n);
  if (config.output.empty() || config.output == "-") {
    mesh.write_text(std::cout);
  } else {
    std::ofstream out(config.output, std::ios::binary);
    if (!out) throw etdg::UsageError("cannot write " + config.output);
    mesh.write_text(out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedded Trefftz DG experiment runner"};
  app.require_subcommand(1);
  Flags run_flags, diag_flags, mesh_flags;
  auto* run_cmd = app.add_subcommand("run", "convergence study, CSV + EOC summary");
  add_common(run_cmd, run_flags);
  auto* diag_cmd = app.add_subcommand("diagnose", "framework diagnostics");
  add_common(diag_cmd, diag_flags);
  auto* mesh_cmd = app.add_subcommand("dump-mesh", "write the structured mesh as text");
  add_common(mesh_cmd, mesh_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run_cmd) return run(run_flags);
    if (*diag_cmd) return diagnose(diag_flags);
    if (*mesh_cmd) return dump_mesh(mesh_flags);
  } catch (const etdg::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolverFailure;
  }
  return kExitUsage;
}
