#include "etdg/basis.hpp"

#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

namespace etdg {

std::vector<MultiIndex> graded_multi_indices(int max_order) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= max_order; ++d) {
    for (int a = d; a >= 0; --a) out.push_back({a, d - a});
  }
  return out;
}

namespace {

// Falling factorial n (n-1) ... (n-k+1); zero when k > n.
double falling(int n, int k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

ElementBasis::ElementBasis(int degree, const Vec2& center, double scale,
                           const QuadratureRule& domain_rule)
    : degree_(degree), center_(center), scale_(scale), exponents_(graded_multi_indices(degree)) {
  if (degree < 0) throw std::invalid_argument("ElementBasis: negative degree");
  if (!(scale > 0.0)) throw std::invalid_argument("ElementBasis: scale must be positive");
  if (domain_rule.degree < 2 * degree) {
    throw std::invalid_argument("ElementBasis: quadrature of degree " +
                                std::to_string(domain_rule.degree) + " cannot build a degree " +
                                std::to_string(degree) + " basis");
  }
  const int n = dim();
  monomial_gram_ = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < domain_rule.size(); ++q) {
    const Eigen::VectorXd m = monomial_derivative({0, 0}, domain_rule.points[q]);
    monomial_gram_.noalias() += domain_rule.weights[q] * m * m.transpose();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(monomial_gram_);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("ElementBasis: monomial Gram matrix is not positive definite");
  }
  // phi = L^{-1} m  =>  <phi, phi^T> = L^{-1} M L^{-T} = I
  Eigen::MatrixXd l = llt.matrixL();
  coefficients_ = l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));

  // Second pass on the Gram matrix of the first-pass functions: one Cholesky
  // step loses ~cond(M) * eps, the repeat restores orthonormality to round-off.
  // Both factors are lower triangular, so the span of the first poly_dim(q)
  // functions stays P^q.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < domain_rule.size(); ++q) {
    const Eigen::VectorXd v = coefficients_ * monomial_derivative({0, 0}, domain_rule.points[q]);
    gram.noalias() += domain_rule.weights[q] * v * v.transpose();
  }
  Eigen::LLT<Eigen::MatrixXd> refine(gram);
  if (refine.info() != Eigen::Success) {
    throw std::runtime_error("ElementBasis: basis Gram matrix is not positive definite");
  }
  Eigen::MatrixXd l2 = refine.matrixL();
  coefficients_ = l2.triangularView<Eigen::Lower>().solve(coefficients_);
}

Eigen::VectorXd ElementBasis::monomial_derivative(const MultiIndex& k, const Vec2& x) const {
  const double t = (x.x() - center_.x()) / scale_;
  const double s = (x.y() - center_.y()) / scale_;
  const double chain = ipow(1.0 / scale_, k.order());
  Eigen::VectorXd out(dim());
  for (int j = 0; j < dim(); ++j) {
    const auto [a, b] = exponents_[j];
    if (k.a > a || k.b > b) {
      out[j] = 0.0;
      continue;
    }
    out[j] = falling(a, k.a) * falling(b, k.b) * ipow(t, a - k.a) * ipow(s, b - k.b) * chain;
  }
  return out;
}

Eigen::VectorXd ElementBasis::derivative(const MultiIndex& k, const Vec2& x) const {
  return coefficients_ * monomial_derivative(k, x);
}

Eigen::VectorXd ElementBasis::values(const Vec2& x) const { return derivative({0, 0}, x); }

BasisEvaluation ElementBasis::evaluate(const Vec2& x) const {
  BasisEvaluation e;
  e.values = derivative({0, 0}, x);
  e.gradients.resize(dim(), 2);
  e.gradients.col(0) = derivative({1, 0}, x);
  e.gradients.col(1) = derivative({0, 1}, x);
  const Eigen::VectorXd dxx = derivative({2, 0}, x);
  const Eigen::VectorXd dxy = derivative({1, 1}, x);
  const Eigen::VectorXd dyy = derivative({0, 2}, x);
  e.hessians.resize(dim());
  for (int i = 0; i < dim(); ++i) e.hessians[i] << dxx[i], dxy[i], dxy[i], dyy[i];
  return e;
}

ElementBasis make_element_basis(const Mesh2D& mesh, int k, int degree) {
  const auto& g = mesh.element_geometry(k);
  return ElementBasis(degree, g.centroid, g.diameter,
                      triangle_rule(mesh.element_vertices(k), 2 * degree));
}

Eigen::VectorXd l2_project(const std::function<double(const Vec2&)>& f, const ElementBasis& basis,
                           const QuadratureRule& quad) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(basis.dim());
  for (std::size_t q = 0; q < quad.size(); ++q) {
    c.noalias() += quad.weights[q] * f(quad.points[q]) * basis.values(quad.points[q]);
  }
  return c;
}

}  // namespace etdg
