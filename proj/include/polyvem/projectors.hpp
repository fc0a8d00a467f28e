// Per-element projector matrices of the enhanced space: the H1-seminorm
// projector onto P_k (fixed on constants by the boundary mean), the L2
// projector onto P_k made computable by the enhancement constraint, and the
// componentwise L2 projections of the gradient onto [P_{k-1}]^2 and [P_k]^2.
// Everything acts on local DoF vectors through small dense matrices.

#ifndef POLYVEM_PROJECTORS_HPP
#define POLYVEM_PROJECTORS_HPP

#include "polyvem/basis.hpp"
#include "polyvem/dofs.hpp"
#include "polyvem/quadrature.hpp"
#include "polyvem/types.hpp"

#include <vector>

namespace polyvem {

/// Trace of the local space on one edge: shared Gauss points, the outward
/// normal, and the matrix mapping local DoF vectors to trace values at the
/// Gauss points (edge restrictions are genuine degree-k polynomials).
struct EdgeTrace {
  Vector2 a, b;
  Vector2 normal;
  Matrix quadPoints; // nq x 2, physical
  Vector quadWeights;
  Matrix values; // nq x N
};

struct ElementProjectors {
  ElementProjectors(int order, int cell, LocalDofLayout lay, ScaledMonomialBasis bas)
      : k(order), cellIndex(cell), layout(std::move(lay)), basis(std::move(bas))
  {
  }

  int k = 1;
  int cellIndex = -1;
  LocalDofLayout layout;
  ScaledMonomialBasis basis; // degree k, graded-lex; P_n = leading columns

  QuadRule volume;  // degree 2k+2 fan rule
  Matrix phi;       // basis values at volume points, nq x dim P_k
  Matrix phiDx;     // d/dx values
  Matrix phiDy;     // d/dy values
  std::vector<EdgeTrace> edges;

  Matrix D;           // N x dim P_k, DoFs of the monomials
  Matrix G;           // grad-Gram, first row replaced by the boundary mean
  Matrix B;           // right-hand side of the Pi-nabla system
  Matrix H;           // mass matrix of P_k
  Matrix PiNablaStar; // dim P_k x N, monomial coefficients of the projection
  Matrix PiNablaDof;  // N x N, DoFs of the projection
  Matrix C;           // dim P_k x N, moments int_E v m_i (enhancement rows included)
  Matrix Pi0k;        // dim P_k x N
  Matrix Pi0GradKm1;  // 2 dim P_{k-1} x N, x-block over y-block
  Matrix Pi0GradK;    // 2 dim P_k x N

  int nDofs() const { return layout.total(); }
  int dimPk() const { return static_cast<int>(H.rows()); }

  Real cellArea() const { return m_area; }
  Real cellDiameter() const { return basis.diameter(); }
  Real boundaryLength() const { return m_perimeter; }

  Real m_area = 0;
  Real m_perimeter = 0;
};

ElementProjectors buildElementProjectors(const PolyMesh& mesh, int cellIndex, int k);

/// Inverse-estimate constant of the cell: the smallest gamma with
/// ||div p||^2 <= gamma h^-2 ||p||^2 over [P_{k-1}]^2 (zero when k = 1).
Real inverseEstimateConstant(const ElementProjectors& proj);

} // namespace polyvem

#endif
