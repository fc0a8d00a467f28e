// Degrees of freedom of the enhanced space of order k: vertex values, values
// at the k-1 interior Gauss-Lobatto points of every edge, and cell moments
// (1/|E|) int_E v m_i against the scaled monomials of degree <= k-2.
// Local numbering: vertices (cell CCW order), edge points (per edge, along
// the cell's CCW direction), then moments (graded-lex). Global numbering:
// all vertices, then edges (points ordered along the low-to-high vertex-id
// direction), then cell moments.

#ifndef POLYVEM_DOFS_HPP
#define POLYVEM_DOFS_HPP

#include "polyvem/mesh.hpp"
#include "polyvem/types.hpp"

#include <vector>

namespace polyvem {

enum class DofKind { Vertex, EdgePoint, Moment };

struct LocalDof {
  DofKind kind;
  Vector2 point = Vector2::Zero(); // for Vertex / EdgePoint
  int edge = -1;                   // local edge index for EdgePoint
  int momentIndex = -1;            // graded-lex index for Moment
};

struct LocalDofLayout {
  int k = 1;
  int nVertexDofs = 0;
  int nEdgeDofs = 0;
  int nInternalDofs = 0;
  std::vector<LocalDof> dofs;

  int total() const { return static_cast<int>(dofs.size()); }
};

LocalDofLayout buildLocalLayout(const PolyMesh& mesh, int cellIndex, int k);

struct DofMap {
  int k = 1;
  int nGlobal = 0;
  std::vector<std::vector<int>> cellToGlobal;
  std::vector<bool> boundaryDof;

  int nCells() const { return static_cast<int>(cellToGlobal.size()); }
};

DofMap buildDofMap(const PolyMesh& mesh, int k);

/// DoF vector of a smooth function: point values at vertex/edge nodes and
/// quadrature moments on cells.
Vector interpolateDofs(const PolyMesh& mesh, int k, const ScalarField& f);

} // namespace polyvem

#endif
