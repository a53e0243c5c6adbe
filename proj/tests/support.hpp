#pragma once

// Independent oracles shared by the unit tests and the acceptance binary.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "etdg/basis.hpp"
#include "etdg/mesh.hpp"
#include "etdg/quadrature.hpp"

namespace etdg::testing {

/// Five-point central difference, applied recursively per direction.
inline double fd4(const std::function<double(const Vec2&)>& g, const MultiIndex& k, const Vec2& x,
                  double h = 1e-3) {
  if (k.order() == 0) return g(x);
  const bool along_x = k.a > 0;
  const MultiIndex lower = along_x ? MultiIndex{k.a - 1, k.b} : MultiIndex{k.a, k.b - 1};
  const Vec2 e = along_x ? Vec2(h, 0.0) : Vec2(0.0, h);
  auto d = [&](double s) { return fd4(g, lower, x + s * e, h); };
  return (-d(2) + 8 * d(1) - 8 * d(-1) + d(-2)) / (12 * h);
}

namespace detail {

// Coefficients of (sum_v c_v lambda_v)^n as a map (i, j) -> coefficient of
// lambda_0^i lambda_1^j lambda_2^{n-i-j}.
inline std::vector<long double> barycentric_power(const std::array<long double, 3>& c, int n) {
  std::vector<long double> out((n + 1) * (n + 1), 0.0L);
  std::vector<long double> fact(n + 1, 1.0L);
  for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      const int k = n - i - j;
      long double term = fact[n] / (fact[i] * fact[j] * fact[k]);
      for (int r = 0; r < i; ++r) term *= c[0];
      for (int r = 0; r < j; ++r) term *= c[1];
      for (int r = 0; r < k; ++r) term *= c[2];
      out[i * (n + 1) + j] = term;
    }
  }
  return out;
}

}  // namespace detail

/// Exact integral of x^a y^b over a triangle: expand x and y in barycentric
/// coordinates and use int_T l0^i l1^j l2^k = 2|T| i! j! k! / (i+j+k+2)!.
inline double monomial_triangle_integral(const std::array<Vec2, 3>& tri, int a, int b) {
  const long double area =
      0.5L * std::abs(static_cast<long double>((tri[1] - tri[0]).x()) * (tri[2] - tri[0]).y() -
                      static_cast<long double>((tri[1] - tri[0]).y()) * (tri[2] - tri[0]).x());
  const auto px = detail::barycentric_power({tri[0].x(), tri[1].x(), tri[2].x()}, a);
  const auto py = detail::barycentric_power({tri[0].y(), tri[1].y(), tri[2].y()}, b);
  const int n = a + b;
  std::vector<long double> fact(n + 3, 1.0L);
  for (int i = 1; i < n + 3; ++i) fact[i] = fact[i - 1] * i;
  long double total = 0.0L;
  for (int i1 = 0; i1 <= a; ++i1) {
    for (int j1 = 0; i1 + j1 <= a; ++j1) {
      const long double cx = px[i1 * (a + 1) + j1];
      const int k1 = a - i1 - j1;
      for (int i2 = 0; i2 <= b; ++i2) {
        for (int j2 = 0; i2 + j2 <= b; ++j2) {
          const int k2 = b - i2 - j2;
          total += cx * py[i2 * (b + 1) + j2] * fact[i1 + i2] * fact[j1 + j2] * fact[k1 + k2];
        }
      }
    }
  }
  return static_cast<double>(2.0L * area * total / fact[n + 2]);
}

/// Coefficients (in the element basis) of 1, Re z^m, Im z^m (m = 1..p) with
/// z = ((x - x_K) + i (y - y_K)) / h.
inline Eigen::MatrixXd harmonic_coefficients(const ElementBasis& basis, const QuadratureRule& quad) {
  const int p = basis.degree();
  const Vec2 c = basis.center();
  const double h = basis.scale();
  Eigen::MatrixXd out(basis.dim(), 2 * p + 1);
  out.col(0) = l2_project([](const Vec2&) { return 1.0; }, basis, quad);
  for (int m = 1; m <= p; ++m) {
    auto z = [=](const Vec2& x) {
      return std::pow(std::complex<double>((x.x() - c.x()) / h, (x.y() - c.y()) / h), m);
    };
    out.col(2 * m - 1) = l2_project([&](const Vec2& x) { return z(x).real(); }, basis, quad);
    out.col(2 * m) = l2_project([&](const Vec2& x) { return z(x).imag(); }, basis, quad);
  }
  return out;
}

inline Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
}

/// Sine of the largest principal angle between span(a) and span(b); both
/// must have the same column count and full column rank.
inline double max_principal_angle_sine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = orthonormal_columns(a);
  const Eigen::MatrixXd qb = orthonormal_columns(b);
  const Eigen::MatrixXd residual = qb - qa * (qa.transpose() * qb);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
  return svd.singularValues()(0);
}

inline double relative_asymmetry(const Eigen::SparseMatrix<double>& m) {
  const Eigen::SparseMatrix<double> mt = m.transpose();
  return (m - mt).norm() / m.norm();
}

/// Random nondegenerate triangle with vertices in [lo, hi]^2 and minimum
/// angle bounded away from zero.
inline std::array<Vec2, 3> random_triangle(std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  for (;;) {
    std::array<Vec2, 3> t{Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))};
    double min_sine = 1.0;
    for (int i = 0; i < 3; ++i) {
      const Vec2 e1 = t[(i + 1) % 3] - t[i];
      const Vec2 e2 = t[(i + 2) % 3] - t[i];
      const double s = std::abs(e1.x() * e2.y() - e1.y() * e2.x()) / (e1.norm() * e2.norm());
      min_sine = std::min(min_sine, s);
    }
    if (min_sine > 0.3) return t;
  }
}

inline Mesh2D single_triangle_mesh(const std::array<Vec2, 3>& t) {
  return Mesh2D({t[0], t[1], t[2]}, {{0, 1, 2}});
}

}  // namespace etdg::testing
