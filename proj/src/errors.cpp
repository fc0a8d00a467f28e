#include "polyvem/errors.hpp"

#include "polyvem/parallel.hpp"
#include "polyvem/projectors.hpp"

#include <cmath>

namespace polyvem {

ScalarField ManufacturedCase::source() const
{
  Real eps = epsilon;
  ScalarField lap = laplU;
  VectorField b = beta;
  VectorField gu = gradU;
  return [eps, lap, b, gu](const Vector2& x) { return -eps * lap(x) + b(x).dot(gu(x)); };
}

ProblemSpec ManufacturedCase::problem(ConvectionForm form, bool supg, Real tauSafety,
                                      StabKind stab) const
{
  ProblemSpec spec;
  spec.epsilon = epsilon;
  spec.beta = beta;
  spec.source = source();
  spec.dirichlet = u;
  spec.convectionForm = form;
  spec.supgEnabled = supg;
  spec.stabKind = stab;
  spec.tauSafety = tauSafety;
  return spec;
}

ManufacturedCase sineCase(Real epsilon)
{
  const Real pi = M_PI;
  ManufacturedCase mc;
  mc.epsilon = epsilon;
  mc.u = [pi](const Vector2& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  mc.gradU = [pi](const Vector2& x) {
    return Vector2(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                   pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
  };
  mc.laplU = [pi](const Vector2& x) {
    return -2.0 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y());
  };
  mc.beta = [pi](const Vector2& x) {
    Real s = std::sin(pi * (x.x() + 2.0 * x.y()));
    return Vector2(-2.0 * pi * s, pi * s);
  };
  return mc;
}

ManufacturedCase patchCase(Real epsilon, int px, int py)
{
  ManufacturedCase mc;
  mc.epsilon = epsilon;
  mc.u = [px, py](const Vector2& x) { return std::pow(x.x(), px) * std::pow(x.y(), py); };
  mc.gradU = [px, py](const Vector2& x) {
    Real dx = px > 0 ? px * std::pow(x.x(), px - 1) * std::pow(x.y(), py) : 0.0;
    Real dy = py > 0 ? py * std::pow(x.x(), px) * std::pow(x.y(), py - 1) : 0.0;
    return Vector2(dx, dy);
  };
  mc.laplU = [px, py](const Vector2& x) {
    Real dxx = px > 1 ? px * (px - 1.0) * std::pow(x.x(), px - 2) * std::pow(x.y(), py) : 0.0;
    Real dyy = py > 1 ? py * (py - 1.0) * std::pow(x.x(), px) * std::pow(x.y(), py - 2) : 0.0;
    return dxx + dyy;
  };
  mc.beta = [](const Vector2&) { return Vector2(1.0, 2.0); };
  return mc;
}

namespace {

struct CellErrorTerms {
  Real gradError2 = 0;     // ||grad(u - PiNabla u_h)||^2
  Real betaGradError2 = 0; // ||beta . grad(u - PiNabla u_h)||^2
};

CellErrorTerms cellErrorTerms(const PolyMesh& mesh, int c, int k, const Vector& solution,
                              const DofMap& map, const ManufacturedCase& mc)
{
  ElementProjectors proj = buildElementProjectors(mesh, c, k);
  const auto& g = map.cellToGlobal[c];
  Vector local(g.size());
  for (size_t i = 0; i < g.size(); ++i) local[static_cast<int>(i)] = solution[g[i]];
  Vector coeffs = proj.PiNablaStar * local;

  CellErrorTerms terms;
  for (int q = 0; q < proj.volume.size(); ++q) {
    Vector2 x = proj.volume.point(q);
    Vector2 gradPoly(proj.phiDx.row(q).dot(coeffs), proj.phiDy.row(q).dot(coeffs));
    Vector2 diff = mc.gradU(x) - gradPoly;
    Real bd = mc.beta(x).dot(diff);
    terms.gradError2 += proj.volume.weights[q] * diff.squaredNorm();
    terms.betaGradError2 += proj.volume.weights[q] * bd * bd;
  }
  return terms;
}

} // namespace

Real errorH1(const PolyMesh& mesh, int k, const Vector& solution, const ManufacturedCase& mc)
{
  DofMap map = buildDofMap(mesh, k);
  std::vector<Real> per(mesh.nCells(), 0.0);
  parallelFor(mesh.nCells(), [&](int c) {
    per[c] = cellErrorTerms(mesh, c, k, solution, map, mc).gradError2;
  });
  Real sum = 0;
  for (Real v : per) sum += v;
  return std::sqrt(sum);
}

Real errorConvective(const PolyMesh& mesh, int k, const Vector& solution,
                     const ManufacturedCase& mc, const std::vector<Real>& tauPerCell)
{
  DofMap map = buildDofMap(mesh, k);
  std::vector<Real> per(mesh.nCells(), 0.0);
  parallelFor(mesh.nCells(), [&](int c) {
    CellErrorTerms terms = cellErrorTerms(mesh, c, k, solution, map, mc);
    per[c] = mc.epsilon * terms.gradError2 + tauPerCell[c] * terms.betaGradError2;
  });
  Real sum = 0;
  for (Real v : per) sum += v;
  return std::sqrt(sum);
}

Real supgNormLocalSquared(const ElementProjectors& proj, const Vector& localDofs,
                          const VectorField& beta, Real epsilon, Real tauE)
{
  const int k = proj.k;
  const int nn = polyDim(k - 1);
  Matrix gradX = proj.phi.leftCols(nn) * proj.Pi0GradKm1.topRows(nn);
  Matrix gradY = proj.phi.leftCols(nn) * proj.Pi0GradKm1.bottomRows(nn);
  Vector gx = gradX * localDofs, gy = gradY * localDofs;

  Real projGrad2 = 0, betaGrad2 = 0;
  for (int q = 0; q < proj.volume.size(); ++q) {
    Vector2 b = beta(proj.volume.point(q));
    Real bd = b.x() * gx[q] + b.y() * gy[q];
    projGrad2 += proj.volume.weights[q] * (gx[q] * gx[q] + gy[q] * gy[q]);
    betaGrad2 += proj.volume.weights[q] * bd * bd;
  }
  Vector comp = localDofs - proj.PiNablaDof * localDofs;
  Real stabEnergy = comp.squaredNorm(); // dofi-dofi surrogate of the complement energy
  Real betaE = computeBetaE(proj, beta);
  return epsilon * (projGrad2 + stabEnergy) + tauE * betaGrad2 +
         tauE * betaE * betaE * stabEnergy;
}

Real supgNorm(const PolyMesh& mesh, int k, const Vector& dofs, const VectorField& beta,
              Real epsilon, const std::vector<Real>& tauPerCell)
{
  DofMap map = buildDofMap(mesh, k);
  std::vector<Real> per(mesh.nCells(), 0.0);
  parallelFor(mesh.nCells(), [&](int c) {
    ElementProjectors proj = buildElementProjectors(mesh, c, k);
    const auto& g = map.cellToGlobal[c];
    Vector local(g.size());
    for (size_t i = 0; i < g.size(); ++i) local[static_cast<int>(i)] = dofs[g[i]];
    per[c] = supgNormLocalSquared(proj, local, beta, epsilon, tauPerCell[c]);
  });
  Real sum = 0;
  for (Real v : per) sum += v;
  return std::sqrt(sum);
}

std::vector<Real> methodTau(const PolyMesh& mesh, int k, const VectorField& beta, Real epsilon,
                            Real tauSafety)
{
  std::vector<Real> tau(mesh.nCells(), 0.0);
  parallelFor(mesh.nCells(), [&](int c) {
    ElementProjectors proj = buildElementProjectors(mesh, c, k);
    Real betaE = computeBetaE(proj, beta);
    tau[c] = computeTau(proj, epsilon, betaE, tauSafety);
  });
  return tau;
}

StudyErrors computeStudyErrors(const PolyMesh& mesh, int k, const Vector& solution,
                               const Vector& interpolant, const ManufacturedCase& mc,
                               Real tauSafety)
{
  DofMap map = buildDofMap(mesh, k);
  std::vector<Real> grad2(mesh.nCells()), conv2(mesh.nCells()), supg2(mesh.nCells());
  parallelFor(mesh.nCells(), [&](int c) {
    ElementProjectors proj = buildElementProjectors(mesh, c, k);
    Real betaE = computeBetaE(proj, mc.beta);
    Real tau = computeTau(proj, mc.epsilon, betaE, tauSafety);

    const auto& g = map.cellToGlobal[c];
    Vector local(g.size()), diff(g.size());
    for (size_t i = 0; i < g.size(); ++i) {
      local[static_cast<int>(i)] = solution[g[i]];
      diff[static_cast<int>(i)] = solution[g[i]] - interpolant[g[i]];
    }
    Vector coeffs = proj.PiNablaStar * local;
    Real gradError2 = 0, betaGradError2 = 0;
    for (int q = 0; q < proj.volume.size(); ++q) {
      Vector2 x = proj.volume.point(q);
      Vector2 gradPoly(proj.phiDx.row(q).dot(coeffs), proj.phiDy.row(q).dot(coeffs));
      Vector2 e = mc.gradU(x) - gradPoly;
      Real bd = mc.beta(x).dot(e);
      gradError2 += proj.volume.weights[q] * e.squaredNorm();
      betaGradError2 += proj.volume.weights[q] * bd * bd;
    }
    grad2[c] = gradError2;
    conv2[c] = mc.epsilon * gradError2 + tau * betaGradError2;
    supg2[c] = supgNormLocalSquared(proj, diff, mc.beta, mc.epsilon, tau);
  });
  StudyErrors out;
  for (int c = 0; c < mesh.nCells(); ++c) {
    out.eH1 += grad2[c];
    out.eC += conv2[c];
    out.supgErr += supg2[c];
  }
  out.eH1 = std::sqrt(out.eH1);
  out.eC = std::sqrt(out.eC);
  out.supgErr = std::sqrt(out.supgErr);
  return out;
}

} // namespace polyvem
