// Exact-degree numerical integration on polygons (fan sub-triangulation of
// conical-product Gauss rules) and on segments (Gauss-Legendre), plus
// Gauss-Lobatto point sets used to place edge unknowns.

#ifndef POLYVEM_QUADRATURE_HPP
#define POLYVEM_QUADRATURE_HPP

#include "polyvem/types.hpp"

#include <vector>

namespace polyvem {

struct Cell;
struct PolyMesh;

/// Quadrature rule in physical coordinates. Weights sum to the region measure.
struct QuadRule {
  Matrix points;  // nPoints x 2
  Vector weights; // nPoints
  int exactDegree = 0;

  int size() const { return static_cast<int>(weights.size()); }
  Vector2 point(int q) const { return points.row(q).transpose(); }

  /// Apply the rule to a scalar field.
  Real integrate(const ScalarField& f) const;
};

/// Gauss-Legendre nodes/weights on [0, 1]; exact for degree 2n-1.
void gaussLegendre01(int n, Vector& nodes, Vector& weights);

/// Gauss-Lobatto nodes on [0, 1] (both endpoints included), m >= 2 points.
Vector gaussLobatto01(int m);

/// Rule on the reference triangle {(0,0),(1,0),(0,1)}, exact to `degree`.
/// All weights positive. Supported degrees: 1..20.
QuadRule triangleRule(int degree);

/// Rule on a polygonal cell, exact to `degree`, built by fanning triangle
/// rules from the centroid (or from a sampled kernel point when the centroid
/// does not see every edge).
QuadRule polygonRule(const PolyMesh& mesh, int cellIndex, int degree);

/// Same, on an explicit CCW vertex loop.
QuadRule polygonRule(const std::vector<Vector2>& loop, int degree);

/// Gauss rule on the segment a->b, exact to `degree`.
QuadRule edgeRule(const Vector2& a, const Vector2& b, int degree);

/// The k+1 Gauss-Lobatto points of the segment a->b (endpoints first/last).
std::vector<Vector2> edgeLobattoPoints(const Vector2& a, const Vector2& b, int k);

} // namespace polyvem

#endif
