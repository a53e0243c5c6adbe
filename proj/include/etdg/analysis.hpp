#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "etdg/coefficients.hpp"
#include "etdg/dg_forms.hpp"
#include "etdg/embedding.hpp"
#include "etdg/local_ops.hpp"
#include "etdg/solver.hpp"

namespace etdg {

struct ErrorReport {
  double l2_error = 0.0;
  /// Mesh-dependent V_h norm of the error for the form kind.
  double vh_error = 0.0;
  double h = 0.0;
  int p = 0;
  Method method = Method::StandardDg;
  int ndof_full = 0;
  int ndof_trefftz = 0;
};

/// L2 and V_h norms of u_ex - u_h.
///
/// ArUpwind: ||e||^2 + sum_F || |beta_r . n|^{1/2} [e] ||_F^2 + sum_K h_K ||beta_r . grad e||_K^2
///           with beta_r = beta / ||beta||_inf.
/// DarSip:   (alpha grad e, grad e) + gamma_0 ||e||^2 + sum_F sigma alpha_F / h_F ||[e]||_F^2
///           + 1/2 sum_F || |beta . n|^{1/2} [e] ||_F^2, gamma_0 = max(0, inf(gamma - div beta / 2)).
/// On boundary facets [e] is the trace of e. Throws when coeffs has no exact solution.
ErrorReport compute_errors(const DiscreteSolution& uh, const PdeCoefficients& coeffs, FormKind kind,
                           double sigma);

struct EocResult {
  /// log(e_i / e_{i+1}) / log(h_i / h_{i+1})
  std::vector<double> steps;
  /// Least-squares slope of log e against log h.
  double slope = 0.0;
};

/// Needs at least two (h, e) pairs with h strictly decreasing and e > 0.
EocResult estimate_eoc(const std::vector<std::pair<double, double>>& samples);

FormKind form_kind_for(OperatorKind kind);

struct DimensionRow {
  int p = 0;
  int n = 0;          // dim V_h(K)
  int n_trefftz = 0;  // dim T_h(K)
  int dim_test = 0;   // dim Q_h(K)
  int elements = 0;   // elements sharing this row
};

struct DiagnosticsReport {
  /// max_K ||A_K T_K||_F / (1 + ||A_K||_F)
  double rho_max = 0.0;
  /// min_K sigma_rank / sigma_1
  double sigma_min_rel = 1.0;
  std::vector<DimensionRow> dim_table;
  /// ||u_embedded - u_block||_2 / ||u_embedded||_2 (negative when not computed)
  double block_equivalence_gap = -1.0;
  int downgraded_elements = 0;
};

struct DiagnosticsOptions {
  /// 0 selects 50 p^2.
  double sigma = 0.0;
  LocalOperatorOptions local;
  bool compute_block_gap = true;
  ComplementRule complement = ComplementRule::SvdComplement;
};

/// Computable witnesses of the framework hypotheses: coupling rho, local
/// stability (relative smallest used singular value), dimension counts and
/// the embedded-vs-block solution gap. Degeneracies are reported, not thrown.
DiagnosticsReport run_diagnostics(std::shared_ptr<const DgSpace> space, OperatorKind kind,
                                  const PdeCoefficients& coeffs,
                                  const DiagnosticsOptions& options = {});

}  // namespace etdg
