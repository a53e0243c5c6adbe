#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace etdg {

using Vec2 = Eigen::Vector2d;

/// Marker for the missing neighbour of a boundary facet.
inline constexpr int kBoundary = -1;

struct ElementGeometry {
  double diameter = 0.0;  // h_K, longest edge
  double area = 0.0;
  Vec2 centroid = Vec2::Zero();
  Vec2 incenter = Vec2::Zero();
  double inradius = 0.0;
};

/// Edge of the triangulation.
///
/// `normal` is the unit normal pointing out of `left`. Interior facets have
/// `right >= 0`; boundary facets carry `right == kBoundary` and their normal
/// points out of the domain.
struct Facet {
  std::array<int, 2> vertices{};
  int left = kBoundary;
  int right = kBoundary;
  Vec2 normal = Vec2::Zero();
  double length = 0.0;

  bool is_boundary() const { return right == kBoundary; }
};

/// Immutable 2D simplicial mesh with facet topology.
class Mesh2D {
 public:
  /// Builds facets and geometry from a triangle list. Triangles are
  /// reoriented counterclockwise; zero-area triangles throw.
  Mesh2D(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Facet>& facets() const { return facets_; }

  int num_elements() const { return static_cast<int>(triangles_.size()); }
  int num_facets() const { return static_cast<int>(facets_.size()); }

  /// Facet indices bounding element k (three entries).
  const std::array<int, 3>& element_facets(int k) const;

  /// Throws std::out_of_range for an invalid index.
  const ElementGeometry& element_geometry(int k) const;

  std::array<Vec2, 3> element_vertices(int k) const;

  /// Largest element diameter.
  double mesh_size() const;

  /// Plain-text dump: "v x y" per vertex then "t i j k" per triangle.
  void write_text(std::ostream& out) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Facet> facets_;
  std::vector<std::array<int, 3>> element_facets_;
  std::vector<ElementGeometry> geometry_;
};

/// Uniform triangulation of the unit square with n cells per side, each cell
/// split along its lower-left to upper-right diagonal.
Mesh2D build_structured_mesh(int n);

ElementGeometry triangle_geometry(const Vec2& a, const Vec2& b, const Vec2& c);

/// Closed-triangle containment with a relative tolerance on the barycentric
/// coordinates.
bool triangle_contains(const std::array<Vec2, 3>& tri, const Vec2& x, double tol = 1e-12);

}  // namespace etdg
