#pragma once

#include <array>
#include <vector>

#include "etdg/mesh.hpp"

namespace etdg {

/// Highest polynomial exactness any rule constructor accepts.
inline constexpr int kMaxQuadratureDegree = 60;

/// Axis-aligned rectangle [lower.x, upper.x] x [lower.y, upper.y].
struct Box {
  Vec2 lower = Vec2::Zero();
  Vec2 upper = Vec2::Zero();

  Vec2 center() const { return 0.5 * (lower + upper); }
  double area() const { return (upper - lower).prod(); }
  double diameter() const { return (upper - lower).norm(); }
  std::array<Vec2, 4> corners() const {
    return {lower, Vec2(upper.x(), lower.y()), upper, Vec2(lower.x(), upper.y())};
  }
};

/// Points in physical coordinates with weights that sum to the measure of
/// the domain.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre nodes and weights on [0, 1] with `n` points.
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Collapsed Gauss product rule on a triangle, exact for polynomials of
/// total degree <= `degree`.
QuadratureRule triangle_rule(const std::array<Vec2, 3>& tri, int degree);

/// Tensor Gauss-Legendre rule on an axis-aligned box.
QuadratureRule box_rule(const Box& box, int degree);

/// Gauss-Legendre rule on the segment [a, b]; weights sum to |b - a|.
QuadratureRule segment_rule(const Vec2& a, const Vec2& b, int degree);

}  // namespace etdg
