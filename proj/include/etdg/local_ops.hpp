#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "etdg/basis.hpp"
#include "etdg/coefficients.hpp"
#include "etdg/mesh.hpp"
#include "etdg/quadrature.hpp"

namespace etdg {

/// Local strong-form operators that define the weak Trefftz constraints.
///
///   Ar          h_K^{1/2} (beta . grad v + gamma v)        tested on P^{p-1}(K)
///   Dar         h_K (-div(alpha grad v) + beta . grad v + gamma v)  on P^{p-2}(K)
///   DarBox      same as Dar with h_B, integrated on a box B_K in K, P^{p-2}(B_K)
///   QtDiffusion (h_K^{3/2+|i|} D^i (-div(alpha grad v))(x_K))_{|i| <= p-2}
enum class OperatorKind { Ar, Dar, DarBox, QtDiffusion };

std::string to_string(OperatorKind kind);
OperatorKind parse_operator_kind(std::string_view name);

/// Smallest polynomial degree for which the kind's test space is nontrivial.
int min_degree(OperatorKind kind);

/// dim Q_h(K): p(p+1)/2 for Ar, (p-1)p/2 otherwise.
int test_space_dim(OperatorKind kind, int p);

struct LocalOperatorOptions {
  /// Box side length relative to h_K (DarBox only).
  double box_scale = 0.25;
  /// Volume quadrature exactness is 2p + extra_quadrature.
  int extra_quadrature = 4;
};

/// Matrix (<A_K phi_j, q_i>)_{ij} against an L2-orthonormal test basis q_i
/// (or the scaled point derivatives for QtDiffusion) plus the matching load.
struct LocalOperator {
  OperatorKind kind = OperatorKind::Ar;
  int element = -1;
  int degree = 0;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  /// h_K^{1/2}, h_K, h_{B_K}, or h_K (QT rows carry an extra h_K^{1/2+|i|}).
  double scaling = 1.0;
  std::optional<Box> box;

  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }
};

/// `basis` must be the degree-p basis of element k. Throws when p is below
/// min_degree(kind), alpha <= 0 at a quadrature point, or a QT derivative
/// oracle is missing.
LocalOperator assemble_local_operator(OperatorKind kind, const Mesh2D& mesh, int k,
                                      const ElementBasis& basis, const PdeCoefficients& coeffs,
                                      const LocalOperatorOptions& options = {});

/// D^i div(alpha grad phi_j)(x) for every basis function phi_j, expanded by
/// Leibniz' rule
///   sum_{l <= i} C(i,l) [D^l alpha D^{i-l} Lap phi + sum_d D^l(d_d alpha) D^{i-l} d_d phi].
/// `alpha` must provide D^j alpha for all |j| <= |i| + 1.
Eigen::VectorXd leibniz_point_derivatives(const MultiIndex& i, const ElementBasis& basis,
                                          const DerivativeOracle& alpha, const Vec2& x);

/// Same as above for the single polynomial w = sum_j w_j phi_j.
double leibniz_point_derivative(const MultiIndex& i, const ElementBasis& basis,
                                const Eigen::VectorXd& w, const DerivativeOracle& alpha,
                                const Vec2& x);

/// Axis-aligned square centered at the incenter of element k with side
/// scale * h_K, shrunk by a factor 0.9 (at most 50 times) until it lies in
/// the closed element.
Box compute_box(const Mesh2D& mesh, int k, double scale);

}  // namespace etdg
