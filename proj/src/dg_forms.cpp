#include "etdg/dg_forms.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "etdg/quadrature.hpp"

namespace etdg {

DgSpace::DgSpace(Mesh2D mesh, int degree) : mesh_(std::move(mesh)), degree_(degree) {
  if (degree < 0) throw std::invalid_argument("DgSpace: negative degree");
  bases_.reserve(mesh_.num_elements());
  for (int k = 0; k < mesh_.num_elements(); ++k) {
    bases_.push_back(make_element_basis(mesh_, k, degree));
  }
}

double DgSpace::evaluate(const Eigen::VectorXd& u, int k, const Vec2& x) const {
  return basis(k).values(x).dot(u.segment(offset(k), dofs_per_element()));
}

Eigen::VectorXd DgSpace::project(const ScalarField& f) const {
  Eigen::VectorXd out(num_dofs());
  for (int k = 0; k < num_elements(); ++k) {
    const auto quad = triangle_rule(mesh_.element_vertices(k), 2 * degree_ + 4);
    out.segment(offset(k), dofs_per_element()) = l2_project(f, basis(k), quad);
  }
  return out;
}

std::shared_ptr<const DgSpace> make_space(int n, int degree) {
  return std::make_shared<const DgSpace>(build_structured_mesh(n), degree);
}

std::string to_string(FormKind kind) {
  return kind == FormKind::ArUpwind ? "AR_UPWIND" : "DAR_SIP";
}

std::vector<double> facet_alpha(const DgSpace& space, const PdeCoefficients& coeffs) {
  const Mesh2D& mesh = space.mesh();
  std::vector<double> element_mean(mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto quad = triangle_rule(mesh.element_vertices(k), 2 * space.degree() + 4);
    double integral = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      integral += quad.weights[q] * coeffs.alpha(quad.points[q]);
    }
    element_mean[k] = integral / mesh.element_geometry(k).area;
  }
  std::vector<double> out(mesh.num_facets());
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facets()[f];
    out[f] = facet.is_boundary()
                 ? element_mean[facet.left]
                 : 0.5 * (element_mean[facet.left] + element_mean[facet.right]);
  }
  return out;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void scatter(Triplets& t, const Eigen::MatrixXd& block, int row0, int col0) {
  for (Eigen::Index j = 0; j < block.cols(); ++j) {
    for (Eigen::Index i = 0; i < block.rows(); ++i) {
      t.emplace_back(row0 + static_cast<int>(i), col0 + static_cast<int>(j), block(i, j));
    }
  }
}

void require_positive_alpha(double alpha, const Vec2& x) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("diffusion coefficient alpha = " + std::to_string(alpha) +
                            " <= 0 at (" + std::to_string(x.x()) + ", " +
                            std::to_string(x.y()) + ")");
  }
}

}  // namespace

DgSystem assemble_global_system(FormKind kind, std::shared_ptr<const DgSpace> space_ptr,
                                const PdeCoefficients& c, double sigma) {
  if (!space_ptr) throw std::invalid_argument("assemble_global_system: null space");
  const DgSpace& space = *space_ptr;
  const bool diffusion = kind == FormKind::DarSip;
  if (diffusion && !(sigma > 0.0)) {
    throw std::invalid_argument("assemble_global_system: penalty sigma must be positive");
  }
  if (diffusion && !c.diffusive) {
    throw std::invalid_argument("assemble_global_system: DAR_SIP needs a diffusion coefficient");
  }
  const Mesh2D& mesh = space.mesh();
  const int p = space.degree();
  const int n = space.dofs_per_element();

  DgSystem sys;
  sys.kind = kind;
  sys.space = space_ptr;
  sys.sigma = sigma;
  sys.rhs = Eigen::VectorXd::Zero(space.num_dofs());
  if (diffusion) sys.facet_alpha = facet_alpha(space, c);

  Triplets triplets;
  triplets.reserve(static_cast<std::size_t>(n) * n *
                   (mesh.num_elements() + 4 * mesh.num_facets()));

  // element terms: (alpha grad u, grad v) + (beta . grad u, v) + (gamma u, v)
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const ElementBasis& basis = space.basis(k);
    const auto quad = triangle_rule(mesh.element_vertices(k), 2 * p + 4);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Vec2& x = quad.points[q];
      const double w = quad.weights[q];
      const BasisEvaluation e = basis.evaluate(x);
      block.noalias() += w * e.values * (e.gradients * c.beta(x)).transpose();
      block.noalias() += (w * c.gamma(x)) * e.values * e.values.transpose();
      if (diffusion) {
        const double alpha = c.alpha(x);
        require_positive_alpha(alpha, x);
        block.noalias() += (w * alpha) * e.gradients * e.gradients.transpose();
      }
      load.noalias() += (w * c.source(x)) * e.values;
    }
    scatter(triplets, block, space.offset(k), space.offset(k));
    sys.rhs.segment(space.offset(k), n) += load;
  }

  for (int fi = 0; fi < mesh.num_facets(); ++fi) {
    const Facet& f = mesh.facets()[fi];
    const Vec2& normal = f.normal;
    const auto quad =
        segment_rule(mesh.vertices()[f.vertices[0]], mesh.vertices()[f.vertices[1]], 2 * p + 2);
    const double penalty = diffusion ? sigma * sys.facet_alpha[fi] / f.length : 0.0;

    if (f.is_boundary()) {
      const int k = f.left;
      const ElementBasis& basis = space.basis(k);
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
      Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
      for (std::size_t q = 0; q < quad.size(); ++q) {
        const Vec2& x = quad.points[q];
        const double w = quad.weights[q];
        const Eigen::VectorXd v = basis.values(x);
        const double g = c.dirichlet(x);
        if (diffusion) {
          const double alpha = c.alpha(x);
          require_positive_alpha(alpha, x);
          Eigen::VectorXd flux = alpha * (basis.derivative({1, 0}, x) * normal.x() +
                                          basis.derivative({0, 1}, x) * normal.y());
          // -(alpha grad u . n, v) - (u, alpha grad v . n) + penalty (u, v)
          block.noalias() -= w * v * flux.transpose();
          block.noalias() -= w * flux * v.transpose();
          block.noalias() += (w * penalty) * v * v.transpose();
          load.noalias() += (w * g) * (penalty * v - flux);
        }
        const double bn = c.beta(x).dot(normal);
        if (bn < 0.0) {
          block.noalias() -= (w * bn) * v * v.transpose();
          load.noalias() -= (w * g * bn) * v;
        }
      }
      scatter(triplets, block, space.offset(k), space.offset(k));
      sys.rhs.segment(space.offset(k), n) += load;
      continue;
    }

    // interior facet: [u] = u|K1 - u|K2, {u} = (u|K1 + u|K2) / 2, n out of K1
    const ElementBasis& b1 = space.basis(f.left);
    const ElementBasis& b2 = space.basis(f.right);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    Eigen::VectorXd jump(2 * n), average(2 * n), flux_average(2 * n);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Vec2& x = quad.points[q];
      const double w = quad.weights[q];
      const Eigen::VectorXd v1 = b1.values(x);
      const Eigen::VectorXd v2 = b2.values(x);
      jump << v1, -v2;
      average << 0.5 * v1, 0.5 * v2;
      if (diffusion) {
        const double alpha = c.alpha(x);
        require_positive_alpha(alpha, x);
        flux_average << 0.5 * alpha *
                            (b1.derivative({1, 0}, x) * normal.x() +
                             b1.derivative({0, 1}, x) * normal.y()),
            0.5 * alpha *
                (b2.derivative({1, 0}, x) * normal.x() + b2.derivative({0, 1}, x) * normal.y());
        // -({alpha grad u . n}, [v]) - ([u], {alpha grad v . n}) + penalty ([u], [v])
        block.noalias() -= w * jump * flux_average.transpose();
        block.noalias() -= w * flux_average * jump.transpose();
        block.noalias() += (w * penalty) * jump * jump.transpose();
      }
      const double bn = c.beta(x).dot(normal);
      // -((beta . n) [u], {v}) + 1/2 (|beta . n| [u], [v])
      block.noalias() -= (w * bn) * average * jump.transpose();
      block.noalias() += (0.5 * w * std::abs(bn)) * jump * jump.transpose();
    }
    const int o1 = space.offset(f.left);
    const int o2 = space.offset(f.right);
    scatter(triplets, block.topLeftCorner(n, n), o1, o1);
    scatter(triplets, block.topRightCorner(n, n), o1, o2);
    scatter(triplets, block.bottomLeftCorner(n, n), o2, o1);
    scatter(triplets, block.bottomRightCorner(n, n), o2, o2);
  }

  sys.matrix.resize(space.num_dofs(), space.num_dofs());
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

void write_matrix_coo(std::ostream& out, const Eigen::SparseMatrix<double>& m) {
  char buf[64];
  for (int j = 0; j < m.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, j); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << it.row() << ' ' << it.col() << ' ' << buf << '\n';
    }
  }
}

}  // namespace etdg
