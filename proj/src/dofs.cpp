#include "polyvem/dofs.hpp"

#include "polyvem/basis.hpp"
#include "polyvem/quadrature.hpp"

#include <stdexcept>

namespace polyvem {

LocalDofLayout buildLocalLayout(const PolyMesh& mesh, int cellIndex, int k)
{
  if (k < 1) throw std::invalid_argument("buildLocalLayout: k must be >= 1");
  const Cell& cell = mesh.cells[cellIndex];
  const int m = cell.nVertices();

  LocalDofLayout layout;
  layout.k = k;
  layout.nVertexDofs = m;
  layout.nEdgeDofs = m * (k - 1);
  layout.nInternalDofs = polyDim(k - 2);
  layout.dofs.reserve(layout.nVertexDofs + layout.nEdgeDofs + layout.nInternalDofs);

  for (int i = 0; i < m; ++i)
    layout.dofs.push_back({DofKind::Vertex, mesh.vertex(cell.vertexIds[i]), -1, -1});
  for (int i = 0; i < m; ++i) {
    Vector2 a = mesh.vertex(cell.vertexIds[i]);
    Vector2 b = mesh.vertex(cell.vertexIds[(i + 1) % m]);
    auto pts = edgeLobattoPoints(a, b, k);
    for (int j = 1; j < k; ++j) layout.dofs.push_back({DofKind::EdgePoint, pts[j], i, -1});
  }
  for (int i = 0; i < layout.nInternalDofs; ++i)
    layout.dofs.push_back({DofKind::Moment, Vector2::Zero(), -1, i});
  return layout;
}

DofMap buildDofMap(const PolyMesh& mesh, int k)
{
  if (k < 1) throw std::invalid_argument("buildDofMap: k must be >= 1");
  const int nV = mesh.nVertices();
  const int nE = mesh.nEdges();
  const int nC = mesh.nCells();
  const int nInternal = polyDim(k - 2);

  DofMap map;
  map.k = k;
  map.nGlobal = nV + nE * (k - 1) + nC * nInternal;
  map.cellToGlobal.resize(nC);
  map.boundaryDof.assign(map.nGlobal, false);

  for (int v = 0; v < nV; ++v) map.boundaryDof[v] = mesh.boundaryVertex[v];
  for (int e = 0; e < nE; ++e)
    if (mesh.edges[e].boundary())
      for (int j = 0; j < k - 1; ++j) map.boundaryDof[nV + e * (k - 1) + j] = true;

  for (int c = 0; c < nC; ++c) {
    const Cell& cell = mesh.cells[c];
    const int m = cell.nVertices();
    std::vector<int>& g = map.cellToGlobal[c];
    g.reserve(m * k + nInternal);
    for (int i = 0; i < m; ++i) g.push_back(cell.vertexIds[i]);
    for (int i = 0; i < m; ++i) {
      int a = cell.vertexIds[i], b = cell.vertexIds[(i + 1) % m];
      int e = mesh.edgeIndex(a, b);
      bool canonical = a < b; // global points run from the low to the high vertex id
      for (int j = 0; j < k - 1; ++j) {
        int slot = canonical ? j : (k - 2 - j);
        g.push_back(nV + e * (k - 1) + slot);
      }
    }
    for (int i = 0; i < nInternal; ++i) g.push_back(nV + nE * (k - 1) + c * nInternal + i);
  }
  return map;
}

Vector interpolateDofs(const PolyMesh& mesh, int k, const ScalarField& f)
{
  DofMap map = buildDofMap(mesh, k);
  Vector dofs = Vector::Zero(map.nGlobal);
  const int nV = mesh.nVertices();

  for (int v = 0; v < nV; ++v) dofs[v] = f(mesh.vertex(v));
  for (int e = 0; e < mesh.nEdges(); ++e) {
    Vector2 a = mesh.vertex(mesh.edges[e].v0);
    Vector2 b = mesh.vertex(mesh.edges[e].v1);
    auto pts = edgeLobattoPoints(a, b, k);
    for (int j = 1; j < k; ++j) dofs[nV + e * (k - 1) + (j - 1)] = f(pts[j]);
  }

  const int nInternal = polyDim(k - 2);
  if (nInternal > 0) {
    const int base = nV + mesh.nEdges() * (k - 1);
    for (int c = 0; c < mesh.nCells(); ++c) {
      ScaledMonomialBasis basis(mesh, c, k - 2);
      QuadRule rule = polygonRule(mesh, c, 2 * k + 2);
      Matrix vals = basis.eval(rule.points);
      Vector fw(rule.size());
      for (int q = 0; q < rule.size(); ++q) fw[q] = rule.weights[q] * f(rule.point(q));
      Vector moments = vals.transpose() * fw / mesh.cells[c].area;
      for (int i = 0; i < nInternal; ++i) dofs[base + c * nInternal + i] = moments[i];
    }
  }
  return dofs;
}

} // namespace polyvem
