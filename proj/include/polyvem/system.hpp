// Global sparse assembly of the discrete SUPG problem, Dirichlet elimination
// and the linear solve.

#ifndef POLYVEM_SYSTEM_HPP
#define POLYVEM_SYSTEM_HPP

#include "polyvem/dofs.hpp"
#include "polyvem/forms.hpp"
#include "polyvem/mesh.hpp"
#include "polyvem/types.hpp"

#include <Eigen/Sparse>

namespace polyvem {

using SparseMatrix = Eigen::SparseMatrix<Real>;

struct LinearSystem {
  SparseMatrix matrix;
  Vector rhs;
  std::vector<bool> dirichletMask;
  Vector dirichletValues;
  DofMap dofMap;
  std::vector<Real> tauPerCell;  // SUPG parameter actually used per cell
  std::vector<Real> betaPerCell; // sampled sup of |beta| per cell
  bool dirichletApplied = false;
};

struct SolveResult {
  Vector solution;
  Real residual = 0; // ||Ax - b|| / ||b||, re-verified after the solve
};

/// Scatter the element SUPG systems into a triplet-built sparse matrix.
LinearSystem assemble(const PolyMesh& mesh, int k, const ProblemSpec& spec);

/// Eliminate Dirichlet DoFs: values move to the right-hand side, the rows and
/// columns become identity.
void applyDirichlet(LinearSystem& system, const PolyMesh& mesh, const ScalarField& g);

/// Sparse LU with iterative refinement; throws if the verified relative
/// residual stays above tol.
SolveResult solve(const LinearSystem& system, Real tol = 1e-12);

/// Global matrix of the chosen convection form alone (no boundary treatment);
/// used to compare the discrete convection variants.
SparseMatrix assembleConvectionMatrix(const PolyMesh& mesh, int k, const VectorField& beta,
                                      ConvectionForm form);

} // namespace polyvem

#endif
