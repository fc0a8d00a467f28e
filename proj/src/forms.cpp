#include "polyvem/forms.hpp"

#include <cmath>
#include <stdexcept>

namespace polyvem {

ConvectionForm convectionFormFromString(const std::string& name)
{
  if (name == "orig") return ConvectionForm::Orig;
  if (name == "boun") return ConvectionForm::Boun;
  if (name == "origSkew") return ConvectionForm::OrigSkew;
  if (name == "bounSkew") return ConvectionForm::BounSkew;
  throw std::invalid_argument("unknown convection form: " + name);
}

std::string toString(ConvectionForm form)
{
  switch (form) {
    case ConvectionForm::Orig: return "orig";
    case ConvectionForm::Boun: return "boun";
    case ConvectionForm::OrigSkew: return "origSkew";
    case ConvectionForm::BounSkew: return "bounSkew";
  }
  return "?";
}

namespace {

// values of beta at the volume quadrature points, nq x 2
Matrix betaAtVolume(const ElementProjectors& proj, const VectorField& beta)
{
  const int nq = proj.volume.size();
  Matrix out(nq, 2);
  for (int q = 0; q < nq; ++q) out.row(q) = beta(proj.volume.point(q)).transpose();
  return out;
}

} // namespace

Real computeBetaE(const ElementProjectors& proj, const VectorField& beta)
{
  Real sup = 0;
  for (int q = 0; q < proj.volume.size(); ++q)
    sup = std::max(sup, beta(proj.volume.point(q)).norm());
  for (const EdgeTrace& tr : proj.edges)
    for (int q = 0; q < tr.quadPoints.rows(); ++q)
      sup = std::max(sup, beta(Vector2(tr.quadPoints(q, 0), tr.quadPoints(q, 1))).norm());
  return sup;
}

Real computeTau(const ElementProjectors& proj, Real epsilon, Real betaE, Real tauSafety)
{
  const Real h = proj.cellDiameter();
  Real tau = h * h / epsilon;
  if (betaE > 0) tau = std::min(tau, h / betaE);
  tau *= tauSafety;
  Real gammaHat = inverseEstimateConstant(proj);
  if (gammaHat > 0) tau = std::min(tau, h * h / (epsilon * gammaHat));
  return tau;
}

Matrix stabMatrix(const ElementProjectors& proj, StabKind kind, Real epsilon)
{
  const int N = proj.nDofs();
  Matrix complement = Matrix::Identity(N, N) - proj.PiNablaDof;
  if (kind == StabKind::DofiDofi) return complement.transpose() * complement;

  // D-recipe: diagonal weights from the consistency part of the diffusion form
  Matrix Ahc = diffusionConsistency(proj);
  Real floor = 1e-12 * Ahc.trace();
  Vector weights(N);
  for (int i = 0; i < N; ++i) weights[i] = std::max(epsilon * Ahc(i, i), floor);
  return complement.transpose() * weights.asDiagonal() * complement;
}

Matrix diffusionConsistency(const ElementProjectors& proj)
{
  const int nn = polyDim(proj.k - 1);
  const auto& P = proj.Pi0GradKm1;
  const Matrix& mass = proj.H.topLeftCorner(nn, nn);
  return P.topRows(nn).transpose() * mass * P.topRows(nn) +
         P.bottomRows(nn).transpose() * mass * P.bottomRows(nn);
}

Matrix diffusionMatrix(const ElementProjectors& proj, StabKind kind, Real epsilon)
{
  return diffusionConsistency(proj) + stabMatrix(proj, kind, epsilon);
}

Matrix convectionMatrixOrig(const ElementProjectors& proj, const VectorField& beta)
{
  const int nk = proj.dimPk();
  Matrix bq = betaAtVolume(proj, beta);
  Matrix values = proj.phi * proj.Pi0k;                          // nq x N
  Matrix gradX = proj.phi * proj.Pi0GradK.topRows(nk);           // nq x N
  Matrix gradY = proj.phi * proj.Pi0GradK.bottomRows(nk);        // nq x N
  Matrix betaDotGrad = bq.col(0).asDiagonal() * gradX + bq.col(1).asDiagonal() * gradY;
  return values.transpose() * proj.volume.weights.asDiagonal() * betaDotGrad;
}

Matrix convectionMatrixBoun(const ElementProjectors& proj, const VectorField& beta)
{
  Matrix bq = betaAtVolume(proj, beta);
  Matrix values = proj.phi * proj.Pi0k;
  Matrix gradX = proj.phiDx * proj.Pi0k; // gradient of the projected polynomial
  Matrix gradY = proj.phiDy * proj.Pi0k;
  Matrix betaDotGrad = bq.col(0).asDiagonal() * gradX + bq.col(1).asDiagonal() * gradY;
  Matrix out = values.transpose() * proj.volume.weights.asDiagonal() * betaDotGrad;

  // boundary correction: int_{dE} (beta.n) (u - Pi0 u) Pi0 v ds. Testing
  // against the projected trace keeps the form identical to the projection
  // form for constant beta.
  for (const EdgeTrace& tr : proj.edges) {
    const int nq = static_cast<int>(tr.quadPoints.rows());
    Matrix proj0 = proj.basis.eval(tr.quadPoints) * proj.Pi0k; // nq x N
    Vector betaDotN(nq);
    for (int q = 0; q < nq; ++q)
      betaDotN[q] = beta(Vector2(tr.quadPoints(q, 0), tr.quadPoints(q, 1))).dot(tr.normal);
    Matrix jump = tr.values - proj0;
    out += proj0.transpose() * (betaDotN.cwiseProduct(tr.quadWeights)).asDiagonal() * jump;
  }
  return out;
}

Matrix skewSymmetrize(const Matrix& Bh) { return 0.5 * (Bh - Bh.transpose()); }

namespace {

// beta . Pi0_{k-1} grad(phi_j) at the volume quadrature points, nq x N
Matrix betaDotProjectedGradient(const ElementProjectors& proj, const Matrix& bq)
{
  const int nn = polyDim(proj.k - 1);
  Matrix gradX = proj.phi.leftCols(nn) * proj.Pi0GradKm1.topRows(nn);
  Matrix gradY = proj.phi.leftCols(nn) * proj.Pi0GradKm1.bottomRows(nn);
  return bq.col(0).asDiagonal() * gradX + bq.col(1).asDiagonal() * gradY;
}

} // namespace

Matrix supgConvectionMatrix(const ElementProjectors& proj, const VectorField& beta, Real tauE,
                            Real betaE, const Matrix& stab)
{
  const int N = proj.nDofs();
  if (tauE == 0) return Matrix::Zero(N, N);
  Matrix bq = betaAtVolume(proj, beta);
  Matrix bg = betaDotProjectedGradient(proj, bq);
  Matrix out = tauE * (bg.transpose() * proj.volume.weights.asDiagonal() * bg);
  out += (tauE * betaE * betaE) * stab;
  return out;
}

Matrix supgDiffusionCoupling(const ElementProjectors& proj, const VectorField& beta, Real tauE,
                             Real epsilon)
{
  const int N = proj.nDofs();
  if (tauE == 0) return Matrix::Zero(N, N);
  const int nn = polyDim(proj.k - 1);
  Matrix bq = betaAtVolume(proj, beta);
  Matrix bg = betaDotProjectedGradient(proj, bq);
  // div Pi0_{k-1} grad(u) at the quadrature points
  ScaledMonomialBasis bn(proj.basis.center(), proj.basis.diameter(), proj.k - 1);
  Matrix dx, dy;
  bn.evalGrad(proj.volume.points, dx, dy);
  Matrix divergence =
      dx * proj.Pi0GradKm1.topRows(nn) + dy * proj.Pi0GradKm1.bottomRows(nn); // nq x N
  return (-tauE * epsilon) * (bg.transpose() * proj.volume.weights.asDiagonal() * divergence);
}

Vector elementLoad(const ElementProjectors& proj, const ScalarField& f, const VectorField& beta,
                   Real tauE)
{
  const int nq = proj.volume.size();
  Vector fw(nq);
  for (int q = 0; q < nq; ++q) fw[q] = proj.volume.weights[q] * f(proj.volume.point(q));
  Matrix values = proj.phi * proj.Pi0k;
  Vector out = values.transpose() * fw;
  if (tauE != 0) {
    Matrix bq = betaAtVolume(proj, beta);
    Matrix bg = betaDotProjectedGradient(proj, bq);
    out += tauE * (bg.transpose() * fw);
  }
  return out;
}

ElementForms elementSupg(const ElementProjectors& proj, const ProblemSpec& spec)
{
  ElementForms out;
  out.hE = proj.cellDiameter();
  out.betaE = computeBetaE(proj, spec.beta);
  out.tauE = spec.supgEnabled ? computeTau(proj, spec.epsilon, out.betaE, spec.tauSafety) : 0.0;

  Matrix stab = stabMatrix(proj, spec.stabKind, spec.epsilon);
  out.Ah = diffusionConsistency(proj) + stab;

  switch (spec.convectionForm) {
    case ConvectionForm::Orig: out.Bh = convectionMatrixOrig(proj, spec.beta); break;
    case ConvectionForm::Boun: out.Bh = convectionMatrixBoun(proj, spec.beta); break;
    case ConvectionForm::OrigSkew:
      out.Bh = skewSymmetrize(convectionMatrixOrig(proj, spec.beta));
      break;
    case ConvectionForm::BounSkew:
      out.Bh = skewSymmetrize(convectionMatrixBoun(proj, spec.beta));
      break;
  }

  out.BsupgH = supgConvectionMatrix(proj, spec.beta, out.tauE, out.betaE, stab);
  out.LsupgH = supgDiffusionCoupling(proj, spec.beta, out.tauE, spec.epsilon);
  out.Asupg = spec.epsilon * out.Ah + out.Bh + out.BsupgH + out.LsupgH;
  out.Fsupg = elementLoad(proj, spec.source, spec.beta, out.tauE);
  return out;
}

} // namespace polyvem
