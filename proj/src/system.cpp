#include "polyvem/system.hpp"

#include "polyvem/parallel.hpp"
#include "polyvem/projectors.hpp"

#include <Eigen/SparseLU>

#include <stdexcept>

namespace polyvem {

LinearSystem assemble(const PolyMesh& mesh, int k, const ProblemSpec& spec)
{
  LinearSystem sys;
  sys.dofMap = buildDofMap(mesh, k);
  const int nC = mesh.nCells();

  std::vector<ElementForms> local(nC);
  parallelFor(nC, [&](int c) {
    ElementProjectors proj = buildElementProjectors(mesh, c, k);
    local[c] = elementSupg(proj, spec);
  });

  sys.tauPerCell.resize(nC);
  sys.betaPerCell.resize(nC);
  std::vector<Eigen::Triplet<Real>> triplets;
  size_t nnzEstimate = 0;
  for (int c = 0; c < nC; ++c) nnzEstimate += sys.dofMap.cellToGlobal[c].size() * sys.dofMap.cellToGlobal[c].size();
  triplets.reserve(nnzEstimate);

  sys.rhs = Vector::Zero(sys.dofMap.nGlobal);
  for (int c = 0; c < nC; ++c) {
    const auto& g = sys.dofMap.cellToGlobal[c];
    const int N = static_cast<int>(g.size());
    const ElementForms& ef = local[c];
    sys.tauPerCell[c] = ef.tauE;
    sys.betaPerCell[c] = ef.betaE;
    for (int i = 0; i < N; ++i) {
      sys.rhs[g[i]] += ef.Fsupg[i];
      for (int j = 0; j < N; ++j) triplets.emplace_back(g[i], g[j], ef.Asupg(i, j));
    }
  }
  sys.matrix.resize(sys.dofMap.nGlobal, sys.dofMap.nGlobal);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.dirichletMask = sys.dofMap.boundaryDof;
  sys.dirichletValues = Vector::Zero(sys.dofMap.nGlobal);
  return sys;
}

void applyDirichlet(LinearSystem& sys, const PolyMesh& mesh, const ScalarField& g)
{
  const int n = sys.dofMap.nGlobal;
  const int k = sys.dofMap.k;
  const int nV = mesh.nVertices();

  Vector values = Vector::Zero(n);
  for (int v = 0; v < nV; ++v)
    if (mesh.boundaryVertex[v]) values[v] = g(mesh.vertex(v));
  for (int e = 0; e < mesh.nEdges(); ++e) {
    if (!mesh.edges[e].boundary()) continue;
    auto pts = edgeLobattoPoints(mesh.vertex(mesh.edges[e].v0), mesh.vertex(mesh.edges[e].v1), k);
    for (int j = 1; j < k; ++j) values[nV + e * (k - 1) + (j - 1)] = g(pts[j]);
  }
  sys.dirichletValues = values;

  // move boundary columns to the right-hand side, then pin the boundary rows
  SparseMatrix filtered(n, n);
  std::vector<Eigen::Triplet<Real>> triplets;
  triplets.reserve(sys.matrix.nonZeros() + n);
  for (int col = 0; col < sys.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(sys.matrix, col); it; ++it) {
      const int row = static_cast<int>(it.row());
      bool rowB = sys.dirichletMask[row];
      bool colB = sys.dirichletMask[col];
      if (!rowB && !colB) {
        triplets.emplace_back(row, col, it.value());
      } else if (!rowB && colB) {
        sys.rhs[row] -= it.value() * values[col];
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (sys.dirichletMask[i]) {
      triplets.emplace_back(i, i, 1.0);
      sys.rhs[i] = values[i];
    }
  filtered.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.swap(filtered);
  sys.dirichletApplied = true;
}

SolveResult solve(const LinearSystem& sys, Real tol)
{
  SparseMatrix A = sys.matrix;
  A.makeCompressed();
  Eigen::SparseLU<SparseMatrix> lu(A);
  if (lu.info() != Eigen::Success) throw std::runtime_error("solve: factorization failed");

  SolveResult out;
  out.solution = lu.solve(sys.rhs);
  Real rhsNorm = sys.rhs.norm();
  Real scale = rhsNorm > 0 ? rhsNorm : 1.0;
  for (int pass = 0; pass < 3; ++pass) {
    Vector residual = sys.rhs - A * out.solution;
    out.residual = residual.norm() / scale;
    if (out.residual <= tol) break;
    out.solution += lu.solve(residual);
  }
  Vector residual = sys.rhs - A * out.solution;
  out.residual = residual.norm() / scale;
  if (!(out.residual <= tol))
    throw std::runtime_error("solve: residual " + std::to_string(out.residual) +
                             " above tolerance " + std::to_string(tol));
  return out;
}

SparseMatrix assembleConvectionMatrix(const PolyMesh& mesh, int k, const VectorField& beta,
                                      ConvectionForm form)
{
  DofMap map = buildDofMap(mesh, k);
  const int nC = mesh.nCells();
  std::vector<Matrix> local(nC);
  parallelFor(nC, [&](int c) {
    ElementProjectors proj = buildElementProjectors(mesh, c, k);
    Matrix Bh;
    switch (form) {
      case ConvectionForm::Orig: Bh = convectionMatrixOrig(proj, beta); break;
      case ConvectionForm::Boun: Bh = convectionMatrixBoun(proj, beta); break;
      case ConvectionForm::OrigSkew: Bh = skewSymmetrize(convectionMatrixOrig(proj, beta)); break;
      case ConvectionForm::BounSkew: Bh = skewSymmetrize(convectionMatrixBoun(proj, beta)); break;
    }
    local[c] = std::move(Bh);
  });
  std::vector<Eigen::Triplet<Real>> triplets;
  for (int c = 0; c < nC; ++c) {
    const auto& g = map.cellToGlobal[c];
    const int N = static_cast<int>(g.size());
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) triplets.emplace_back(g[i], g[j], local[c](i, j));
  }
  SparseMatrix out(map.nGlobal, map.nGlobal);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

} // namespace polyvem
