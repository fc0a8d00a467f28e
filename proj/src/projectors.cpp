#include "polyvem/projectors.hpp"

#include <Eigen/Eigenvalues>

namespace polyvem {

namespace {

// Diagonally equilibrated solves with one residual-correction sweep: sliver
// cells push the raw Gram conditioning to (aspect)^(2k), and the projector
// identities are required to hold to 1e-10.
Matrix solveEquilibratedSpd(const Matrix& A, const Matrix& rhs)
{
  Vector d = A.diagonal().cwiseAbs().cwiseSqrt().cwiseInverse();
  Matrix As = d.asDiagonal() * A * d.asDiagonal();
  Eigen::LDLT<Matrix> ldlt(As);
  Matrix X = d.asDiagonal() * ldlt.solve(d.asDiagonal() * rhs);
  X += d.asDiagonal() * ldlt.solve(d.asDiagonal() * (rhs - A * X));
  return X;
}

Matrix solveEquilibratedLu(const Matrix& A, const Matrix& rhs)
{
  Vector d = A.diagonal().cwiseAbs().cwiseSqrt().cwiseInverse();
  Matrix As = d.asDiagonal() * A * d.asDiagonal();
  Eigen::PartialPivLU<Matrix> lu(As);
  Matrix X = d.asDiagonal() * lu.solve(d.asDiagonal() * rhs);
  X += d.asDiagonal() * lu.solve(d.asDiagonal() * (rhs - A * X));
  return X;
}

// Lagrange cardinal values at parameters `at` for the node set `nodes`.
Matrix lagrangeValues(const Vector& nodes, const Vector& at)
{
  const int n = static_cast<int>(nodes.size());
  const int nq = static_cast<int>(at.size());
  Matrix out(nq, n);
  for (int q = 0; q < nq; ++q)
    for (int i = 0; i < n; ++i) {
      Real v = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) v *= (at[q] - nodes[j]) / (nodes[i] - nodes[j]);
      out(q, i) = v;
    }
  return out;
}

} // namespace

ElementProjectors buildElementProjectors(const PolyMesh& mesh, int cellIndex, int k)
{
  ElementProjectors P(k, cellIndex, buildLocalLayout(mesh, cellIndex, k),
                      ScaledMonomialBasis(mesh, cellIndex, k));
  const Cell& cell = mesh.cells[cellIndex];
  const int m = cell.nVertices();
  const int N = P.layout.total();
  const int nk = P.basis.dim();
  const int nkm2 = polyDim(k - 2);
  P.m_area = cell.area;

  P.volume = polygonRule(mesh, cellIndex, 2 * k + 2);
  P.phi = P.basis.eval(P.volume.points);
  P.basis.evalGrad(P.volume.points, P.phiDx, P.phiDy);

  const auto& w = P.volume.weights;
  P.H = P.phi.transpose() * w.asDiagonal() * P.phi;

  // --- edge traces -----------------------------------------------------
  Vector lobatto = gaussLobatto01(k + 1);
  P.edges.reserve(m);
  for (int i = 0; i < m; ++i) {
    EdgeTrace tr;
    tr.a = mesh.vertex(cell.vertexIds[i]);
    tr.b = mesh.vertex(cell.vertexIds[(i + 1) % m]);
    tr.normal = mesh.outwardNormal(cellIndex, i);
    Vector t, wq;
    gaussLegendre01(std::max((2 * k + 2 + 2) / 2, 1), t, wq);
    const int nq = static_cast<int>(t.size());
    tr.quadPoints.resize(nq, 2);
    for (int q = 0; q < nq; ++q)
      tr.quadPoints.row(q) = (tr.a + t[q] * (tr.b - tr.a)).transpose();
    Real len = (tr.b - tr.a).norm();
    tr.quadWeights = wq * len;
    P.m_perimeter += len;

    Matrix lag = lagrangeValues(lobatto, t); // nq x (k+1)
    tr.values = Matrix::Zero(nq, N);
    tr.values.col(i) = lag.col(0);                 // first vertex
    tr.values.col((i + 1) % m) = lag.col(k);       // second vertex
    for (int j = 1; j < k; ++j)                    // interior points of this edge
      tr.values.col(m + i * (k - 1) + (j - 1)) = lag.col(j);
    P.edges.push_back(std::move(tr));
  }

  // --- D: DoFs of the monomials ----------------------------------------
  P.D.resize(N, nk);
  {
    Matrix pointDofs(P.layout.nVertexDofs + P.layout.nEdgeDofs, 2);
    for (int i = 0; i < P.layout.nVertexDofs + P.layout.nEdgeDofs; ++i)
      pointDofs.row(i) = P.layout.dofs[i].point.transpose();
    P.D.topRows(pointDofs.rows()) = P.basis.eval(pointDofs);
    for (int j = 0; j < nkm2; ++j)
      P.D.row(P.layout.nVertexDofs + P.layout.nEdgeDofs + j) = P.H.row(j) / cell.area;
  }

  // --- B and the boundary-mean row -------------------------------------
  P.B = Matrix::Zero(nk, N);
  Vector meanRow = Vector::Zero(N);
  Eigen::RowVectorXd monomialMean = Eigen::RowVectorXd::Zero(nk);
  for (const EdgeTrace& tr : P.edges) {
    Matrix gx, gy;
    P.basis.evalGrad(tr.quadPoints, gx, gy);
    Matrix vals = P.basis.eval(tr.quadPoints);
    Matrix dn = gx * tr.normal.x() + gy * tr.normal.y(); // nq x nk
    P.B += dn.transpose() * tr.quadWeights.asDiagonal() * tr.values;
    meanRow += tr.values.transpose() * tr.quadWeights;
    monomialMean += tr.quadWeights.transpose() * vals;
  }
  meanRow /= P.m_perimeter;
  monomialMean /= P.m_perimeter;
  {
    // volume part by parts: -int_E (Lapl m_a) v reads the moment DoFs
    Matrix lc = P.basis.laplCoefficients(); // nkm2 x nk
    for (int a = 0; a < nk; ++a)
      for (int j = 0; j < nkm2; ++j)
        if (lc(j, a) != 0.0)
          P.B(a, P.layout.nVertexDofs + P.layout.nEdgeDofs + j) -= lc(j, a) * cell.area;
  }
  P.B.row(0) = meanRow.transpose();

  // --- G: grad-Gram with the mean condition in row 0 --------------------
  P.G = P.phiDx.transpose() * w.asDiagonal() * P.phiDx +
        P.phiDy.transpose() * w.asDiagonal() * P.phiDy;
  P.G.row(0) = monomialMean;

  // Gram conditioning on sliver cells compounds through the enhancement
  // rows; after each solve the polynomial-reproduction identity is
  // re-enforced through the least-squares left inverse of D, which moves the
  // operator by less than the solve's own error.
  Eigen::ColPivHouseholderQR<Matrix> dQr(P.D);
  Matrix pinvD = dQr.solve(Matrix::Identity(N, N)); // dim P_k x N
  auto enforceReproduction = [&](Matrix& op, const Matrix& expected) {
    op += (expected - op * P.D) * pinvD;
  };

  P.PiNablaStar = solveEquilibratedLu(P.G, P.B);
  enforceReproduction(P.PiNablaStar, Matrix::Identity(nk, nk));
  P.PiNablaDof = P.D * P.PiNablaStar;

  // --- C: moments of v against all monomials of P_k ---------------------
  P.C.resize(nk, N);
  Matrix enhanced = P.H * P.PiNablaStar;
  for (int a = 0; a < nk; ++a) {
    if (a < nkm2) {
      P.C.row(a).setZero();
      P.C(a, P.layout.nVertexDofs + P.layout.nEdgeDofs + a) = cell.area;
    } else {
      P.C.row(a) = enhanced.row(a); // enhancement constraint
    }
  }
  P.Pi0k = solveEquilibratedSpd(P.H, P.C);
  enforceReproduction(P.Pi0k, Matrix::Identity(nk, nk));

  // --- componentwise gradient projections -------------------------------
  Matrix gradX, gradY;
  P.basis.gradCoefficients(gradX, gradY);
  auto gradProjection = [&](int n) {
    const int nn = polyDim(n);
    ScaledMonomialBasis bn(P.basis.center(), P.basis.diameter(), n);
    Matrix rhsX = Matrix::Zero(nn, N), rhsY = Matrix::Zero(nn, N);
    for (const EdgeTrace& tr : P.edges) {
      Matrix vals = bn.eval(tr.quadPoints); // nq x nn
      Matrix weighted = vals.transpose() * tr.quadWeights.asDiagonal() * tr.values;
      rhsX += tr.normal.x() * weighted;
      rhsY += tr.normal.y() * weighted;
    }
    Matrix cx, cy; // divergence of the vector monomials, coefficients in P_{n-1}
    bn.gradCoefficients(cx, cy);
    rhsX -= cx.transpose() * P.C.topRows(polyDim(n - 1));
    rhsY -= cy.transpose() * P.C.topRows(polyDim(n - 1));

    Matrix mass = P.H.topLeftCorner(nn, nn);
    Matrix out(2 * nn, N);
    out.topRows(nn) = solveEquilibratedSpd(mass, rhsX);
    out.bottomRows(nn) = solveEquilibratedSpd(mass, rhsY);
    Matrix ex = Matrix::Zero(nn, nk), ey = Matrix::Zero(nn, nk);
    ex.topRows(gradX.rows()) = gradX;
    ey.topRows(gradY.rows()) = gradY;
    Matrix topBlock = out.topRows(nn);
    Matrix bottomBlock = out.bottomRows(nn);
    enforceReproduction(topBlock, ex);
    enforceReproduction(bottomBlock, ey);
    out.topRows(nn) = topBlock;
    out.bottomRows(nn) = bottomBlock;
    return out;
  };
  P.Pi0GradKm1 = gradProjection(k - 1);
  P.Pi0GradK = gradProjection(k);
  return P;
}

Real inverseEstimateConstant(const ElementProjectors& proj)
{
  const int k = proj.k;
  if (k < 2) return 0.0; // constant vector fields are divergence free
  const int nn = polyDim(k - 1);
  const int nd = polyDim(k - 2);
  ScaledMonomialBasis bn(proj.basis.center(), proj.basis.diameter(), k - 1);
  Matrix cx, cy;
  bn.gradCoefficients(cx, cy); // nd x nn

  Matrix divCoef = Matrix::Zero(nd, 2 * nn);
  divCoef.leftCols(nn) = cx;
  divCoef.rightCols(nn) = cy;

  const Matrix& H = proj.H;
  Matrix divGram = divCoef.transpose() * H.topLeftCorner(nd, nd) * divCoef;
  Matrix vecMass = Matrix::Zero(2 * nn, 2 * nn);
  vecMass.topLeftCorner(nn, nn) = H.topLeftCorner(nn, nn);
  vecMass.bottomRightCorner(nn, nn) = H.topLeftCorner(nn, nn);

  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(divGram, vecMass);
  Real lambdaMax = solver.eigenvalues().maxCoeff();
  Real h = proj.cellDiameter();
  return std::max<Real>(lambdaMax, 0) * h * h;
}

} // namespace polyvem
