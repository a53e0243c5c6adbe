#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "etdg/analysis.hpp"
#include "etdg/coefficients.hpp"
#include "etdg/local_ops.hpp"

namespace etdg {

/// Bad configuration (unknown case or method, unsupported parameter).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Methods: dg (standard DG), et (embedded Trefftz), etbox (embedded
/// Trefftz on boxes), qt (quasi-Trefftz).
struct ExperimentConfig {
  std::string case_name;
  std::vector<std::string> methods;
  std::vector<int> p_list;
  std::vector<int> n_list;
  /// Unset means 50 p^2 for each p.
  std::optional<double> sigma;
  double box_scale = 0.25;
  std::string output;
};

inline constexpr int kMaxDegree = 6;
inline constexpr int kMaxSubdivisions = 128;

/// Throws UsageError on any invalid entry.
void validate(const ExperimentConfig& config);

/// key=value lines (case, methods, p, n, sigma, box_scale, out); '#' starts a
/// comment. Lists are comma separated.
ExperimentConfig parse_config(std::istream& in);

/// Local operator kind used by a Trefftz method on the given data; throws
/// UsageError when the method does not apply (e.g. qt on advection data).
OperatorKind operator_kind_for(const std::string& method, const PdeCoefficients& coeffs);

struct ExperimentRow {
  std::string method;
  int p = 0;
  int n = 0;
  double h = 0.0;
  int ndof_full = 0;
  int ndof_trefftz = 0;
  double l2error = 0.0;
  double dgerror = 0.0;
};

ExperimentRow run_single(const PdeCoefficients& coeffs, const std::string& method, int p, int n,
                         double sigma, double box_scale);

/// Rows ordered by method (dg, et, etbox, qt), then p, then n.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

/// Header method,p,h,ndof_full,ndof_trefftz,l2error,dgerror; LF endings.
void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);

/// One EOC table per (method, p).
void write_eoc_summary(std::ostream& out, const std::vector<ExperimentRow>& rows);

void write_diagnostics(std::ostream& out, const DiagnosticsReport& report);

std::vector<std::string> split_list(const std::string& text);

}  // namespace etdg
