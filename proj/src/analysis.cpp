#include "etdg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "etdg/quadrature.hpp"

namespace etdg {

ErrorReport compute_errors(const DiscreteSolution& uh, const PdeCoefficients& c, FormKind kind,
                           double sigma) {
  if (!c.exact) throw std::invalid_argument("compute_errors: coefficients carry no exact solution");
  if (!uh.space) throw std::invalid_argument("compute_errors: solution has no space");
  const DgSpace& space = *uh.space;
  const Mesh2D& mesh = space.mesh();
  const int p = space.degree();
  const int n = space.dofs_per_element();
  const auto& exact = *c.exact;
  const Eigen::VectorXd& u = uh.coefficients;
  if (u.size() != space.num_dofs()) throw std::invalid_argument("compute_errors: size mismatch");
  const bool dar = kind == FormKind::DarSip;

  std::vector<QuadratureRule> rules;
  rules.reserve(mesh.num_elements());
  double beta_max = 0.0;
  double gamma0 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < mesh.num_elements(); ++k) {
    rules.push_back(triangle_rule(mesh.element_vertices(k), 2 * p + 4));
    for (const Vec2& x : rules.back().points) {
      beta_max = std::max(beta_max, c.beta(x).norm());
      if (dar) gamma0 = std::min(gamma0, c.gamma(x) - 0.5 * c.beta_divergence(x));
    }
  }
  gamma0 = dar ? std::max(0.0, gamma0) : 0.0;
  const double beta_scale = beta_max > 0.0 ? 1.0 / beta_max : 0.0;

  double l2 = 0.0;
  double vh = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const ElementBasis& basis = space.basis(k);
    const Eigen::VectorXd uk = u.segment(space.offset(k), n);
    const double hk = mesh.element_geometry(k).diameter;
    const QuadratureRule& quad = rules[k];
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Vec2& x = quad.points[q];
      const double w = quad.weights[q];
      const double e = exact.value(x) - basis.values(x).dot(uk);
      const Vec2 grad_h(basis.derivative({1, 0}, x).dot(uk), basis.derivative({0, 1}, x).dot(uk));
      const Vec2 grad_e = exact.gradient(x) - grad_h;
      l2 += w * e * e;
      if (dar) {
        vh += w * (c.alpha(x) * grad_e.squaredNorm() + gamma0 * e * e);
      } else {
        const double b = beta_scale * c.beta(x).dot(grad_e);
        vh += w * (e * e + hk * b * b);
      }
    }
  }

  const std::vector<double> alpha_f = dar ? facet_alpha(space, c) : std::vector<double>{};
  for (int fi = 0; fi < mesh.num_facets(); ++fi) {
    const Facet& f = mesh.facets()[fi];
    const auto quad =
        segment_rule(mesh.vertices()[f.vertices[0]], mesh.vertices()[f.vertices[1]], 2 * p + 4);
    const Eigen::VectorXd u1 = u.segment(space.offset(f.left), n);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Vec2& x = quad.points[q];
      const double w = quad.weights[q];
      double jump = 0.0;
      if (f.is_boundary()) {
        jump = exact.value(x) - space.basis(f.left).values(x).dot(u1);
      } else {
        const Eigen::VectorXd u2 = u.segment(space.offset(f.right), n);
        jump = space.basis(f.right).values(x).dot(u2) - space.basis(f.left).values(x).dot(u1);
      }
      const double bn = std::abs(c.beta(x).dot(f.normal));
      if (dar) {
        vh += w * (sigma * alpha_f[fi] / f.length + 0.5 * bn) * jump * jump;
      } else {
        vh += w * beta_scale * bn * jump * jump;
      }
    }
  }

  ErrorReport r;
  r.l2_error = std::sqrt(l2);
  r.vh_error = std::sqrt(std::max(0.0, vh));
  r.h = mesh.mesh_size();
  r.p = p;
  r.method = uh.method;
  r.ndof_full = uh.ndof_full;
  r.ndof_trefftz = uh.ndof_trefftz;
  return r;
}

EocResult estimate_eoc(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("estimate_eoc: need at least two samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].first > 0.0) || !(samples[i].second > 0.0)) {
      throw std::invalid_argument("estimate_eoc: mesh sizes and errors must be positive");
    }
    if (i > 0 && !(samples[i].first < samples[i - 1].first)) {
      throw std::invalid_argument("estimate_eoc: mesh sizes must be strictly decreasing");
    }
  }
  EocResult out;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    out.steps.push_back(std::log(samples[i].second / samples[i + 1].second) /
                        std::log(samples[i].first / samples[i + 1].first));
  }
  const double m = static_cast<double>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [h, e] : samples) {
    const double x = std::log(h);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

FormKind form_kind_for(OperatorKind kind) {
  return kind == OperatorKind::Ar ? FormKind::ArUpwind : FormKind::DarSip;
}

DiagnosticsReport run_diagnostics(std::shared_ptr<const DgSpace> space, OperatorKind kind,
                                  const PdeCoefficients& coeffs,
                                  const DiagnosticsOptions& options) {
  const int p = space->degree();
  const auto ops = assemble_local_operators(*space, kind, coeffs, options.local);
  const GlobalEmbedding emb = compute_global_embedding(*space, ops);

  DiagnosticsReport r;
  for (int k = 0; k < space->num_elements(); ++k) {
    const auto& e = emb.element(k);
    const double a_norm = ops[k].matrix.norm();
    const double rho = (ops[k].matrix * e.trefftz).norm() / (1.0 + a_norm);
    r.rho_max = std::max(r.rho_max, rho);
    if (e.rank_used > 0 && e.sigma[0] > 0.0) {
      r.sigma_min_rel = std::min(r.sigma_min_rel, e.sigma[e.rank_used - 1] / e.sigma[0]);
    }
    if (e.downgraded) ++r.downgraded_elements;
    const DimensionRow row{p, e.dim(), e.trefftz_dim(), ops[k].rows(), 1};
    auto it = std::find_if(r.dim_table.begin(), r.dim_table.end(), [&](const DimensionRow& d) {
      return d.n == row.n && d.n_trefftz == row.n_trefftz && d.dim_test == row.dim_test;
    });
    if (it == r.dim_table.end()) {
      r.dim_table.push_back(row);
    } else {
      ++it->elements;
    }
  }

  if (options.compute_block_gap) {
    try {
      const double sigma = options.sigma > 0.0 ? options.sigma : default_sigma(p);
      const DgSystem sys = assemble_global_system(form_kind_for(kind), space, coeffs, sigma);
      const auto et = solve_embedded_trefftz(sys, emb);
      const auto block = solve_block_coupled(ops, sys, emb, options.complement);
      const double denom = et.coefficients.norm();
      r.block_equivalence_gap = (et.coefficients - block.coefficients).norm() /
                                (denom > 0.0 ? denom : 1.0);
    } catch (const SolverError&) {
      r.block_equivalence_gap = std::numeric_limits<double>::infinity();
    }
  }
  return r;
}

}  // namespace etdg
