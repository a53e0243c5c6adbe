#include "etdg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace etdg {

namespace {

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree) {
    throw std::invalid_argument("quadrature: exactness degree " + std::to_string(degree) +
                                " unsupported (supported range 0.." +
                                std::to_string(kMaxQuadratureDegree) + ")");
  }
}

// Number of Gauss points integrating degree `degree` exactly in 1D.
int points_for(int degree) { return degree / 2 + 1; }

}  // namespace

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_unit: n must be >= 1");
  // P_n(x) and P_n'(x) by the three-term recurrence
  auto legendre = [n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // [-1, 1] -> [0, 1]
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = 0.5 * w;
    weights[n - 1 - i] = 0.5 * w;
  }
}

QuadratureRule triangle_rule(const std::array<Vec2, 3>& tri, int degree) {
  check_degree(degree);
  // Duffy map (u, w) -> (u (1 - w), w) carries a factor (1 - w) in the
  // Jacobian, so the w direction needs one extra degree.
  const int nu = points_for(degree);
  const int nw = points_for(degree + 1);
  std::vector<double> xu, wu, xw, ww;
  gauss_legendre_unit(nu, xu, wu);
  gauss_legendre_unit(nw, xw, ww);

  const Vec2 e1 = tri[1] - tri[0];
  const Vec2 e2 = tri[2] - tri[0];
  const double jac = std::abs(e1.x() * e2.y() - e1.y() * e2.x());

  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(static_cast<std::size_t>(nu) * nw);
  rule.weights.reserve(static_cast<std::size_t>(nu) * nw);
  for (int j = 0; j < nw; ++j) {
    for (int i = 0; i < nu; ++i) {
      const double xi = xu[i] * (1.0 - xw[j]);
      const double eta = xw[j];
      rule.points.push_back(tri[0] + xi * e1 + eta * e2);
      rule.weights.push_back(wu[i] * ww[j] * (1.0 - xw[j]) * jac);
    }
  }
  return rule;
}

QuadratureRule box_rule(const Box& box, int degree) {
  check_degree(degree);
  const int n = points_for(degree);
  std::vector<double> x, w;
  gauss_legendre_unit(n, x, w);
  const Vec2 size = box.upper - box.lower;
  QuadratureRule rule;
  rule.degree = degree;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      rule.points.emplace_back(box.lower.x() + x[i] * size.x(), box.lower.y() + x[j] * size.y());
      rule.weights.push_back(w[i] * w[j] * size.x() * size.y());
    }
  }
  return rule;
}

QuadratureRule segment_rule(const Vec2& a, const Vec2& b, int degree) {
  check_degree(degree);
  const int n = points_for(degree);
  std::vector<double> x, w;
  gauss_legendre_unit(n, x, w);
  const double length = (b - a).norm();
  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(a + x[i] * (b - a));
    rule.weights.push_back(w[i] * length);
  }
  return rule;
}

}  // namespace etdg
