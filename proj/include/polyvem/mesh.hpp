// Polygonal meshes of the unit square: representation, the four generator
// families used by the studies (structured quads, split-quad triangles,
// Lloyd-optimized and raw Voronoi tessellations), a shape-quality audit and a
// line-oriented interchange format.

#ifndef POLYVEM_MESH_HPP
#define POLYVEM_MESH_HPP

#include "polyvem/types.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyvem {

struct MeshIoError : std::runtime_error {
  explicit MeshIoError(const std::string& what) : std::runtime_error(what) {}
};

struct Vertex {
  Real x = 0;
  Real y = 0;
  Vector2 pos() const { return Vector2(x, y); }
};

/// Simple polygon stored as a CCW vertex loop, with cached measures.
struct Cell {
  std::vector<int> vertexIds;
  Real area = 0;      // |E|, shoelace
  Real diameter = 0;  // h_E, max pairwise vertex distance
  Vector2 centroid = Vector2::Zero();

  int nVertices() const { return static_cast<int>(vertexIds.size()); }
};

struct Edge {
  int v0 = -1; // v0 < v1
  int v1 = -1;
  int cellLeft = -1;
  int cellRight = -1; // -1 on the boundary
  bool boundary() const { return cellRight < 0; }
};

struct PolyMesh {
  std::vector<Vertex> vertices;
  std::vector<Cell> cells;
  std::vector<Edge> edges;
  std::vector<bool> boundaryVertex;
  std::map<std::pair<int, int>, int> edgeOfPair; // {min id, max id} -> edge
  Real h = 0; // max_E h_E

  int nVertices() const { return static_cast<int>(vertices.size()); }
  int nCells() const { return static_cast<int>(cells.size()); }
  int nEdges() const { return static_cast<int>(edges.size()); }

  Vector2 vertex(int v) const { return vertices[v].pos(); }

  /// Global edge index of the undirected pair {a, b}.
  int edgeIndex(int a, int b) const;

  /// Vertex loop of a cell as coordinates.
  std::vector<Vector2> cellLoop(int c) const;

  /// Outward unit normal of the i-th edge of cell c (from the CCW order).
  Vector2 outwardNormal(int c, int i) const;

  Real totalArea() const;
};

/// Build a mesh from raw vertices and CCW cell loops; derives edges and
/// boundary flags and validates orientation, simplicity and conformity.
PolyMesh buildMesh(std::vector<Vertex> vertices, std::vector<std::vector<int>> cellLoops);

// ---------------------------------------------------------------- generators

/// n x n structured quadrilaterals of (0,1)^2.
PolyMesh genQuad(int n);

/// Split-quad triangulation of (0,1)^2 with interior vertices jittered by
/// perturb/n (boundary vertices fixed). Throws if a perturbation flips or
/// degenerates a triangle. perturb in [0, 0.3).
PolyMesh genTria(int n, Real perturb = 0.0, std::uint64_t rngSeed = 0);

/// Voronoi tessellation of (0,1)^2 from nSeeds random seeds, clipped by
/// half-planes, with lloydIters centroidal relaxation sweeps.
PolyMesh genVoronoi(int nSeeds, int lloydIters, std::uint64_t rngSeed);

/// Same, from an explicit seed set (duplicates rejected).
PolyMesh genVoronoi(std::vector<Vector2> seeds, int lloydIters);

/// CVT energy  sum_s int_{cell(s)} |x - s|^2 dx  of a seed set (test hook for
/// the Lloyd descent property).
Real cvtEnergy(const std::vector<Vector2>& seeds);

/// One Lloyd sweep: replaces each seed by the centroid of its clipped cell.
std::vector<Vector2> lloydStep(const std::vector<Vector2>& seeds);

// --------------------------------------------------------------------- audit

struct MeshQualityReport {
  std::vector<Real> edgeRatio;  // per cell: min_e |e| / h_E
  std::vector<Real> starRatio;  // per cell: centroid kernel-ball radius / h_E
  Real minEdgeRatio = 1;
  Real minStarRatio = 1;
};

/// Report-only regularity audit (never a hard failure).
MeshQualityReport auditMesh(const PolyMesh& mesh);

// ------------------------------------------------------------------ exchange

/// Serialize to the interchange format (17 significant digits, so that a
/// read-back reproduces every coordinate bit-exactly).
std::string writeMesh(const PolyMesh& mesh);

/// Parse the interchange format. Throws MeshIoError on malformed headers,
/// out-of-range indices or non-CCW cells.
PolyMesh readMesh(const std::string& bytes);

} // namespace polyvem

#endif
