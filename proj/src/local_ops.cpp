#include "etdg/local_ops.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace etdg {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Ar: return "AR";
    case OperatorKind::Dar: return "DAR";
    case OperatorKind::DarBox: return "DAR_BOX";
    case OperatorKind::QtDiffusion: return "QT_DIFFUSION";
  }
  throw std::invalid_argument("unknown operator kind");
}

OperatorKind parse_operator_kind(std::string_view name) {
  if (name == "AR") return OperatorKind::Ar;
  if (name == "DAR") return OperatorKind::Dar;
  if (name == "DAR_BOX") return OperatorKind::DarBox;
  if (name == "QT_DIFFUSION") return OperatorKind::QtDiffusion;
  throw std::invalid_argument("unknown operator kind '" + std::string(name) + "'");
}

int min_degree(OperatorKind kind) { return kind == OperatorKind::Ar ? 1 : 2; }

int test_space_dim(OperatorKind kind, int p) {
  return kind == OperatorKind::Ar ? poly_dim(p - 1) : poly_dim(p - 2);
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_alpha(double alpha, const Vec2& x, int k) {
  if (!(alpha > 0.0)) {
    std::ostringstream msg;
    msg << "diffusion coefficient alpha = " << alpha << " <= 0 at (" << x.x() << ", " << x.y()
        << ") in element " << k;
    throw std::domain_error(msg.str());
  }
}

// Rows <A_K phi_j, q_i> integrated with `quad`, for the strong operator
//   scaling * (-div(alpha grad v) + beta . grad v + gamma v)
// (alpha terms skipped for non-diffusive data).
void integrate_strong_form(const ElementBasis& trial, const ElementBasis& test,
                           const QuadratureRule& quad, const PdeCoefficients& c, double scaling,
                           int k, LocalOperator& op) {
  const int m = test.dim();
  const int n = trial.dim();
  op.matrix = Eigen::MatrixXd::Zero(m, n);
  op.rhs = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd strong(n);
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Vec2& x = quad.points[q];
    const BasisEvaluation e = trial.evaluate(x);
    const Eigen::VectorXd qv = test.values(x);
    const Vec2 beta = c.beta(x);
    strong = e.gradients * beta + c.gamma(x) * e.values;
    if (c.diffusive) {
      const double alpha = c.alpha(x);
      check_alpha(alpha, x, k);
      const Vec2 grad_alpha = c.alpha_gradient(x);
      for (int j = 0; j < n; ++j) strong[j] -= alpha * e.hessians[j].trace();
      strong -= e.gradients * grad_alpha;
    }
    const double w = quad.weights[q] * scaling;
    op.matrix.noalias() += w * qv * strong.transpose();
    op.rhs.noalias() += (w * c.source(x)) * qv;
  }
}

}  // namespace

Eigen::VectorXd leibniz_point_derivatives(const MultiIndex& i, const ElementBasis& basis,
                                          const DerivativeOracle& alpha, const Vec2& x) {
  if (!alpha) throw std::invalid_argument("leibniz_point_derivatives: missing alpha oracle");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.dim());
  for (int la = 0; la <= i.a; ++la) {
    for (int lb = 0; lb <= i.b; ++lb) {
      const double weight = binomial(i.a, la) * binomial(i.b, lb);
      const MultiIndex rest{i.a - la, i.b - lb};
      const double d_alpha = alpha({la, lb}, x);
      const double d_alpha_x = alpha({la + 1, lb}, x);
      const double d_alpha_y = alpha({la, lb + 1}, x);
      const Eigen::VectorXd laplace =
          basis.derivative({rest.a + 2, rest.b}, x) + basis.derivative({rest.a, rest.b + 2}, x);
      out += weight * (d_alpha * laplace + d_alpha_x * basis.derivative({rest.a + 1, rest.b}, x) +
                       d_alpha_y * basis.derivative({rest.a, rest.b + 1}, x));
    }
  }
  return out;
}

double leibniz_point_derivative(const MultiIndex& i, const ElementBasis& basis,
                                const Eigen::VectorXd& w, const DerivativeOracle& alpha,
                                const Vec2& x) {
  if (w.size() != basis.dim()) {
    throw std::invalid_argument("leibniz_point_derivative: coefficient length mismatch");
  }
  return leibniz_point_derivatives(i, basis, alpha, x).dot(w);
}

Box compute_box(const Mesh2D& mesh, int k, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("compute_box: scale must be positive");
  const auto& g = mesh.element_geometry(k);
  const auto tri = mesh.element_vertices(k);
  double side = scale * g.diameter;
  for (int step = 0; step <= 50; ++step) {
    const Vec2 half(0.5 * side, 0.5 * side);
    const Box box{g.incenter - half, g.incenter + half};
    bool inside = true;
    for (const Vec2& corner : box.corners()) inside = inside && triangle_contains(tri, corner);
    if (inside) return box;
    side *= 0.9;
  }
  throw std::runtime_error("compute_box: no box fits element " + std::to_string(k) +
                           " after 50 shrink steps");
}

LocalOperator assemble_local_operator(OperatorKind kind, const Mesh2D& mesh, int k,
                                      const ElementBasis& basis, const PdeCoefficients& coeffs,
                                      const LocalOperatorOptions& options) {
  const int p = basis.degree();
  if (p < min_degree(kind)) {
    throw std::invalid_argument("assemble_local_operator: degree " + std::to_string(p) +
                                " too small for kind " + to_string(kind) + " (needs p >= " +
                                std::to_string(min_degree(kind)) + ")");
  }
  if (kind != OperatorKind::Ar && !coeffs.diffusive) {
    throw std::invalid_argument("assemble_local_operator: kind " + to_string(kind) +
                                " needs a diffusion coefficient");
  }
  const auto& g = mesh.element_geometry(k);
  const auto tri = mesh.element_vertices(k);
  const int quad_degree = 2 * p + options.extra_quadrature;

  LocalOperator op;
  op.kind = kind;
  op.element = k;
  op.degree = p;

  switch (kind) {
    case OperatorKind::Ar: {
      if (coeffs.diffusive) {
        throw std::invalid_argument("assemble_local_operator: AR kind needs advection-reaction data");
      }
      op.scaling = std::sqrt(g.diameter);
      const QuadratureRule quad = triangle_rule(tri, quad_degree);
      const ElementBasis test(p - 1, g.centroid, g.diameter, triangle_rule(tri, 2 * (p - 1)));
      integrate_strong_form(basis, test, quad, coeffs, op.scaling, k, op);
      break;
    }
    case OperatorKind::Dar: {
      op.scaling = g.diameter;
      const QuadratureRule quad = triangle_rule(tri, quad_degree);
      const ElementBasis test(p - 2, g.centroid, g.diameter, triangle_rule(tri, 2 * (p - 2)));
      integrate_strong_form(basis, test, quad, coeffs, op.scaling, k, op);
      break;
    }
    case OperatorKind::DarBox: {
      const Box box = compute_box(mesh, k, options.box_scale);
      op.box = box;
      op.scaling = box.diameter();
      const QuadratureRule quad = box_rule(box, quad_degree);
      const ElementBasis test(p - 2, box.center(), box.diameter(), box_rule(box, 2 * (p - 2)));
      integrate_strong_form(basis, test, quad, coeffs, op.scaling, k, op);
      break;
    }
    case OperatorKind::QtDiffusion: {
      if (!coeffs.alpha_derivative || !coeffs.source_derivative) {
        throw std::invalid_argument(
            "assemble_local_operator: QT_DIFFUSION needs derivative oracles for alpha and f");
      }
      op.scaling = g.diameter;
      const Vec2& xk = g.centroid;
      check_alpha(coeffs.alpha(xk), xk, k);
      const auto indices = graded_multi_indices(p - 2);
      op.matrix.resize(static_cast<Eigen::Index>(indices.size()), basis.dim());
      op.rhs.resize(static_cast<Eigen::Index>(indices.size()));
      for (std::size_t r = 0; r < indices.size(); ++r) {
        const double s = std::pow(g.diameter, 1.5 + indices[r].order());
        op.matrix.row(r) =
            -s * leibniz_point_derivatives(indices[r], basis, coeffs.alpha_derivative, xk).transpose();
        op.rhs[r] = s * coeffs.source_derivative(indices[r], xk);
      }
      break;
    }
  }
  return op;
}

}  // namespace etdg
