#include "etdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace etdg {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

ElementGeometry triangle_geometry(const Vec2& a, const Vec2& b, const Vec2& c) {
  ElementGeometry g;
  // side lengths opposite to a, b, c
  const double la = (b - c).norm();
  const double lb = (c - a).norm();
  const double lc = (a - b).norm();
  g.diameter = std::max({la, lb, lc});
  g.area = std::abs(signed_area(a, b, c));
  g.centroid = (a + b + c) / 3.0;
  const double perimeter = la + lb + lc;
  g.incenter = (la * a + lb * b + lc * c) / perimeter;
  g.inradius = g.area / (0.5 * perimeter);
  return g;
}

bool triangle_contains(const std::array<Vec2, 3>& tri, const Vec2& x, double tol) {
  const double area = signed_area(tri[0], tri[1], tri[2]);
  const double l0 = signed_area(x, tri[1], tri[2]) / area;
  const double l1 = signed_area(tri[0], x, tri[2]) / area;
  const double l2 = signed_area(tri[0], tri[1], x) / area;
  return l0 >= -tol && l1 >= -tol && l2 >= -tol;
}

Mesh2D::Mesh2D(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = static_cast<int>(vertices_.size());
  geometry_.reserve(triangles_.size());
  for (std::size_t k = 0; k < triangles_.size(); ++k) {
    auto& t = triangles_[k];
    for (int v : t) {
      if (v < 0 || v >= nv) {
        throw std::invalid_argument("Mesh2D: triangle " + std::to_string(k) +
                                    " references vertex " + std::to_string(v));
      }
    }
    const double a = signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    const double scale = std::max({(vertices_[t[1]] - vertices_[t[0]]).squaredNorm(),
                                   (vertices_[t[2]] - vertices_[t[0]]).squaredNorm(), 1e-300});
    if (std::abs(a) <= 1e-14 * scale) {
      throw std::invalid_argument("Mesh2D: triangle " + std::to_string(k) + " has zero area");
    }
    if (a < 0) std::swap(t[1], t[2]);
    geometry_.push_back(triangle_geometry(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]));
  }

  // Facets are numbered in order of first appearance while sweeping the
  // triangles' local edges (v0v1, v1v2, v2v0).
  std::map<std::pair<int, int>, int> edge_to_facet;
  element_facets_.resize(triangles_.size());
  for (int k = 0; k < num_elements(); ++k) {
    const auto& t = triangles_[k];
    for (int e = 0; e < 3; ++e) {
      const int a = t[e];
      const int b = t[(e + 1) % 3];
      const auto key = std::minmax(a, b);
      auto it = edge_to_facet.find(key);
      if (it == edge_to_facet.end()) {
        Facet f;
        f.vertices = {a, b};
        f.left = k;
        const Vec2 d = vertices_[b] - vertices_[a];
        f.length = d.norm();
        // counterclockwise ordering: outward normal is the edge rotated clockwise
        f.normal = Vec2(d.y(), -d.x()) / f.length;
        edge_to_facet.emplace(key, num_facets());
        element_facets_[k][e] = num_facets();
        facets_.push_back(f);
      } else {
        Facet& f = facets_[it->second];
        if (f.right != kBoundary) {
          throw std::invalid_argument("Mesh2D: edge shared by more than two triangles");
        }
        f.right = k;
        element_facets_[k][e] = it->second;
      }
    }
  }
}

const std::array<int, 3>& Mesh2D::element_facets(int k) const {
  if (k < 0 || k >= num_elements()) throw std::out_of_range("element index out of range");
  return element_facets_[k];
}

const ElementGeometry& Mesh2D::element_geometry(int k) const {
  if (k < 0 || k >= num_elements()) {
    throw std::out_of_range("element index " + std::to_string(k) + " out of range");
  }
  return geometry_[k];
}

std::array<Vec2, 3> Mesh2D::element_vertices(int k) const {
  const auto& t = triangles_.at(k);
  return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

double Mesh2D::mesh_size() const {
  double h = 0.0;
  for (const auto& g : geometry_) h = std::max(h, g.diameter);
  return h;
}

void Mesh2D::write_text(std::ostream& out) const {
  const auto old_precision = out.precision(17);
  for (const auto& v : vertices_) out << "v " << v.x() << ' ' << v.y() << '\n';
  for (const auto& t : triangles_) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out.precision(old_precision);
}

Mesh2D build_structured_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_structured_mesh: n must be >= 1");
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh2D(std::move(vertices), std::move(triangles));
}

}  // namespace etdg
