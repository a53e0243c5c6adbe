#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "etdg/mesh.hpp"
#include "etdg/quadrature.hpp"

namespace etdg {

/// Exponent pair (a, b) of x^a y^b.
struct MultiIndex {
  int a = 0;
  int b = 0;

  int order() const { return a + b; }
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// All (a, b) with a + b <= max_order, graded by total order and, within one
/// order, by decreasing a: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
std::vector<MultiIndex> graded_multi_indices(int max_order);

/// Dimension of P^p in two variables; zero for p < 0.
constexpr int poly_dim(int p) { return p < 0 ? 0 : (p + 1) * (p + 2) / 2; }

struct BasisEvaluation {
  Eigen::VectorXd values;
  Eigen::MatrixX2d gradients;  // row i = grad phi_i
  std::vector<Eigen::Matrix2d> hessians;
};

/// L2-orthonormal polynomial basis of degree p on one domain (triangle or
/// box).
///
/// phi_i = sum_j coefficients(i, j) m_j with m_j the monomials in the shifted
/// and scaled variable (x - center) / scale. The coefficient matrix is the
/// inverse Cholesky factor of the monomial Gram matrix, so it is lower
/// triangular and the first poly_dim(q) functions span P^q for every q <= p.
class ElementBasis {
 public:
  /// `domain_rule` must integrate degree 2p exactly over the domain.
  ElementBasis(int degree, const Vec2& center, double scale, const QuadratureRule& domain_rule);

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(exponents_.size()); }
  const Vec2& center() const { return center_; }
  double scale() const { return scale_; }
  const std::vector<MultiIndex>& exponents() const { return exponents_; }
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }
  /// Gram matrix of the raw scaled monomials (before orthonormalization).
  const Eigen::MatrixXd& monomial_gram() const { return monomial_gram_; }

  Eigen::VectorXd values(const Vec2& x) const;
  BasisEvaluation evaluate(const Vec2& x) const;

  /// D^k phi_i(x) for every basis function, computed from the monomial
  /// representation (exact for any k).
  Eigen::VectorXd derivative(const MultiIndex& k, const Vec2& x) const;

 private:
  Eigen::VectorXd monomial_derivative(const MultiIndex& k, const Vec2& x) const;

  int degree_;
  Vec2 center_;
  double scale_;
  std::vector<MultiIndex> exponents_;
  Eigen::MatrixXd coefficients_;
  Eigen::MatrixXd monomial_gram_;
};

/// Basis on mesh element k centered at its centroid and scaled by h_K.
ElementBasis make_element_basis(const Mesh2D& mesh, int k, int degree);

/// Coefficients of the L2(domain) projection of f onto the basis.
Eigen::VectorXd l2_project(const std::function<double(const Vec2&)>& f, const ElementBasis& basis,
                           const QuadratureRule& quad);

}  // namespace etdg
