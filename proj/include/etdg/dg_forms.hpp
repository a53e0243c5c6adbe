#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "etdg/basis.hpp"
#include "etdg/coefficients.hpp"
#include "etdg/mesh.hpp"

namespace etdg {

/// Broken polynomial space P^p(T_h): one orthonormal basis per element,
/// element k owning dofs [k * dofs_per_element, (k + 1) * dofs_per_element).
class DgSpace {
 public:
  DgSpace(Mesh2D mesh, int degree);

  const Mesh2D& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  int num_elements() const { return mesh_.num_elements(); }
  int dofs_per_element() const { return poly_dim(degree_); }
  int num_dofs() const { return num_elements() * dofs_per_element(); }
  int offset(int k) const { return k * dofs_per_element(); }
  const ElementBasis& basis(int k) const { return bases_.at(k); }

  /// Value of the discrete function u at x, using element k's polynomial.
  double evaluate(const Eigen::VectorXd& u, int k, const Vec2& x) const;

  /// Element-wise L2 projection of f (volume quadrature of degree 2p + 4).
  Eigen::VectorXd project(const ScalarField& f) const;

 private:
  Mesh2D mesh_;
  int degree_;
  std::vector<ElementBasis> bases_;
};

std::shared_ptr<const DgSpace> make_space(int n, int degree);

enum class FormKind { ArUpwind, DarSip };

std::string to_string(FormKind kind);

/// Default penalty 50 p^2.
inline double default_sigma(int p) { return 50.0 * p * p; }

struct DgSystem {
  FormKind kind = FormKind::ArUpwind;
  std::shared_ptr<const DgSpace> space;
  /// A(i, j) = a_h(phi_j, phi_i).
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  double sigma = 0.0;
  /// alpha_F per facet (empty for ArUpwind).
  std::vector<double> facet_alpha;
};

/// alpha_F: arithmetic mean of the adjacent element means of alpha (the
/// single element mean on boundary facets).
std::vector<double> facet_alpha(const DgSpace& space, const PdeCoefficients& coeffs);

/// Upwind DG (ArUpwind) or SIP + upwind DG (DarSip) matrix and load vector,
/// term by term, with quadrature exactness 2p + 4 on elements and 2p + 2 on
/// facets. Inflow is decided pointwise by beta . n < 0.
DgSystem assemble_global_system(FormKind kind, std::shared_ptr<const DgSpace> space,
                                const PdeCoefficients& coeffs, double sigma);

/// Coordinate text format, one "row col value" per line (0-based).
void write_matrix_coo(std::ostream& out, const Eigen::SparseMatrix<double>& m);

}  // namespace etdg
