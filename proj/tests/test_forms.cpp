#include "polyvem/forms.hpp"

#include "polyvem/errors.hpp"
#include "polyvem/system.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace polyvem;

TEST_SUITE_BEGIN("forms");

namespace {

VectorField constBeta(Real bx, Real by)
{
  return [bx, by](const Vector2&) { return Vector2(bx, by); };
}

VectorField studyBeta()
{
  return [](const Vector2& x) {
    Real s = std::sin(M_PI * (x.x() + 2.0 * x.y()));
    return Vector2(-2.0 * M_PI * s, M_PI * s);
  };
}

} // namespace

TEST_CASE("betaE sampling")
{
  PolyMesh mesh = genQuad(2);
  ElementProjectors proj = buildElementProjectors(mesh, 0, 2);
  CHECK(computeBetaE(proj, constBeta(1, 2)) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  CHECK(computeBetaE(proj, constBeta(0, 0)) == 0.0);

  // the trigonometric field peaks at pi*sqrt(5) where sin(pi(x+2y)) = +-1;
  // compare the sampled sup against a fine-grid sweep of the same cell
  PolyMesh one = genQuad(1);
  ElementProjectors whole = buildElementProjectors(one, 0, 3);
  Real sampled = computeBetaE(whole, studyBeta());
  Real fine = 0;
  for (int i = 0; i <= 400; ++i)
    for (int j = 0; j <= 400; ++j)
      fine = std::max(fine, studyBeta()(Vector2(i / 400.0, j / 400.0)).norm());
  CHECK(fine == doctest::Approx(M_PI * std::sqrt(5.0)).epsilon(1e-4));
  CHECK(sampled <= fine * (1 + 1e-12));
  CHECK(sampled >= 0.9 * fine); // quadrature points sample the sup well
}

TEST_CASE("tau branches and the supg-off reduction")
{
  PolyMesh mesh = genQuad(10); // h = sqrt(2)/10 ~ 0.14
  ElementProjectors proj = buildElementProjectors(mesh, 0, 1);
  Real h = proj.cellDiameter();

  // convection branch: h/betaE < h^2/eps
  Real tauConv = computeTau(proj, 1e-6, 1.0, 1.0);
  CHECK(tauConv == doctest::Approx(h).epsilon(1e-13));
  // diffusion branch (k=1 has no clamp: constant fields are divergence free)
  Real tauDiff = computeTau(proj, 1.0, 1.0, 1.0);
  CHECK(tauDiff == doctest::Approx(h * h).epsilon(1e-13));
  // safety factor scales linearly
  CHECK(computeTau(proj, 1e-6, 1.0, 0.5) == doctest::Approx(0.5 * h).epsilon(1e-13));

  ManufacturedCase mc = patchCase(1.0, 1, 0);
  ProblemSpec spec = mc.problem(ConvectionForm::Orig, /*supg=*/false);
  ElementForms ef = elementSupg(proj, spec);
  CHECK(ef.tauE == 0.0);
  CHECK(ef.BsupgH.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ef.LsupgH.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tau admissibility clamp uses the measured inverse constant")
{
  PolyMesh mesh = genQuad(4);
  ElementProjectors proj = buildElementProjectors(mesh, 0, 3);
  Real gamma = inverseEstimateConstant(proj);
  REQUIRE(gamma > 0);
  Real h = proj.cellDiameter();
  // epsilon large enough that the diffusion branch would exceed the clamp
  Real eps = 1.0, betaE = 1e-6;
  Real tau = computeTau(proj, eps, betaE, 1.0);
  CHECK(tau <= h * h / (eps * gamma) * (1 + 1e-13));
}

TEST_CASE("dofi-dofi stabilization on the unit square at k=1 is the rank-one checkerboard")
{
  PolyMesh mesh = genQuad(1);
  ElementProjectors proj = buildElementProjectors(mesh, 0, 1);
  Matrix S = stabMatrix(proj, StabKind::DofiDofi, 1.0);
  Vector z(4);
  z << 1, -1, 1, -1;
  Matrix expected = 0.25 * z * z.transpose();
  CHECK((S - expected).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("stabilization kernel is exactly the polynomial DoF space")
{
  PolyMesh mesh = genVoronoi(10, 25, 7);
  for (int k = 1; k <= 3; ++k) {
    ElementProjectors proj = buildElementProjectors(mesh, 5, k);
    for (StabKind kind : {StabKind::DofiDofi, StabKind::DRecipe}) {
      Matrix S = stabMatrix(proj, kind, 0.5);
      CHECK((S - S.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      // polynomial DoF vectors are annihilated
      CHECK((S * proj.D).cwiseAbs().maxCoeff() <= 1e-10);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
      int kernel = 0;
      Real top = eig.eigenvalues().maxCoeff();
      for (int i = 0; i < eig.eigenvalues().size(); ++i)
        if (eig.eigenvalues()[i] <= 1e-12 * top) ++kernel;
      CHECK(kernel == proj.dimPk());
      CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * top);
    }
  }
}

TEST_CASE("diffusion form: polynomial consistency, symmetry, constants kernel")
{
  PolyMesh mesh = genVoronoi(8, 20, 9);
  for (int k = 1; k <= 3; ++k) {
    ElementProjectors proj = buildElementProjectors(mesh, 3, k);
    Matrix Ah = diffusionMatrix(proj, StabKind::DofiDofi, 1.0);
    CHECK((Ah - Ah.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((Ah * proj.D.col(0)).cwiseAbs().maxCoeff() <= 1e-11); // constants

    // a_h(p, q) = int grad p . grad q for polynomials (consistency + vanished stab)
    QuadRule dense = polygonRule(mesh, 3, 2 * k + 2);
    Matrix dx, dy;
    proj.basis.evalGrad(dense.points, dx, dy);
    Matrix exact = dx.transpose() * dense.weights.asDiagonal() * dx +
                   dy.transpose() * dense.weights.asDiagonal() * dy;
    Matrix got = proj.D.transpose() * Ah * proj.D;
    CHECK((got - exact).cwiseAbs().maxCoeff() <= 1e-11);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(Ah);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * eig.eigenvalues().maxCoeff());
  }
}

TEST_CASE("k=1 unit square diffusion rows sum to zero")
{
  PolyMesh mesh = genQuad(1);
  ElementProjectors proj = buildElementProjectors(mesh, 0, 1);
  Matrix Ah = diffusionMatrix(proj, StabKind::DofiDofi, 1.0);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(Ah.row(i).sum()) <= 1e-13);
}

TEST_CASE("convection forms on polynomials with constant beta")
{
  PolyMesh mesh = genVoronoi(8, 20, 9);
  VectorField beta = constBeta(1.0, 2.0);
  for (int k = 1; k <= 3; ++k) {
    ElementProjectors proj = buildElementProjectors(mesh, 2, k);
    Matrix Borig = convectionMatrixOrig(proj, beta);
    Matrix Bboun = convectionMatrixBoun(proj, beta);
    CHECK((Borig - Bboun).norm() <= 1e-12); // forms coincide for constant beta

    // exactness on polynomial arguments: b(p, q) = int (beta . grad p) q
    QuadRule dense = polygonRule(mesh, 2, 2 * k + 2);
    Matrix vals = proj.basis.eval(dense.points);
    Matrix dx, dy;
    proj.basis.evalGrad(dense.points, dx, dy);
    Matrix exact = vals.transpose() * dense.weights.asDiagonal() * (dx * 1.0 + dy * 2.0);
    Matrix got = proj.D.transpose() * Borig * proj.D;
    CHECK((got - exact).cwiseAbs().maxCoeff() <= 1e-11);
  }
}

TEST_CASE("convection vanishes for beta = 0")
{
  PolyMesh mesh = genQuad(2);
  ElementProjectors proj = buildElementProjectors(mesh, 1, 2);
  CHECK(convectionMatrixOrig(proj, constBeta(0, 0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(convectionMatrixBoun(proj, constBeta(0, 0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("test function v = 1 row of the orig form equals the projected-gradient integral")
{
  PolyMesh mesh = genVoronoi(6, 10, 2);
  ElementProjectors proj = buildElementProjectors(mesh, 1, 2);
  VectorField beta = studyBeta();
  Matrix Borig = convectionMatrixOrig(proj, beta);
  Vector ones = proj.D.col(0); // DoFs of the constant 1
  Vector row = Borig.transpose() * ones;

  const int nk = proj.dimPk();
  for (int j = 0; j < proj.nDofs(); j += 3) {
    Real direct = 0;
    for (int q = 0; q < proj.volume.size(); ++q) {
      Vector2 b = beta(proj.volume.point(q));
      Real gx = proj.phi.row(q).dot(proj.Pi0GradK.topRows(nk).col(j));
      Real gy = proj.phi.row(q).dot(proj.Pi0GradK.bottomRows(nk).col(j));
      direct += proj.volume.weights[q] * (b.x() * gx + b.y() * gy);
    }
    CHECK(row[j] == doctest::Approx(direct).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("skew symmetrization algebra")
{
  std::mt19937_64 rng(6);
  Matrix B(5, 5);
  for (int i = 0; i < 25; ++i) B(i / 5, i % 5) = static_cast<Real>(rng() >> 11) * 0x1.0p-53;
  Matrix S = skewSymmetrize(B);
  CHECK((S + S.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((skewSymmetrize(S) - S).cwiseAbs().maxCoeff() == 0.0);
  Matrix sym = B + B.transpose();
  CHECK(skewSymmetrize(sym).cwiseAbs().maxCoeff() == 0.0);
  for (int trial = 0; trial < 5; ++trial) {
    Vector v(5);
    for (int i = 0; i < 5; ++i) v[i] = static_cast<Real>(rng() >> 11) * 0x1.0p-53 - 0.5;
    CHECK(std::abs(v.dot(S * v)) <= 1e-14);
  }
}

TEST_CASE("supg convection term: lower bound and polynomial value")
{
  PolyMesh mesh = genVoronoi(10, 15, 11);
  const int c = 4, k = 2;
  ElementProjectors proj = buildElementProjectors(mesh, c, k);
  VectorField beta = studyBeta();
  Real betaE = computeBetaE(proj, beta);
  Real tau = computeTau(proj, 1e-3, betaE, 0.5);
  Matrix S = stabMatrix(proj, StabKind::DofiDofi, 1e-3);
  Matrix BE = supgConvectionMatrix(proj, beta, tau, betaE, S);

  CHECK(supgConvectionMatrix(proj, beta, 0.0, betaE, S).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(3);
  const int nn = polyDim(k - 1);
  Matrix gradX = proj.phi.leftCols(nn) * proj.Pi0GradKm1.topRows(nn);
  Matrix gradY = proj.phi.leftCols(nn) * proj.Pi0GradKm1.bottomRows(nn);
  for (int trial = 0; trial < 20; ++trial) {
    Vector v(proj.nDofs());
    for (int i = 0; i < v.size(); ++i) v[i] = static_cast<Real>(rng() >> 11) * 0x1.0p-53 - 0.5;
    Real quad = v.dot(BE * v);
    Vector gx = gradX * v, gy = gradY * v;
    Real betaGrad2 = 0;
    for (int q = 0; q < proj.volume.size(); ++q) {
      Vector2 b = beta(proj.volume.point(q));
      Real bd = b.x() * gx[q] + b.y() * gy[q];
      betaGrad2 += proj.volume.weights[q] * bd * bd;
    }
    Real stab = v.dot(S * v);
    CHECK(quad >= tau * betaGrad2 + tau * betaE * betaE * stab - 1e-12);
    CHECK(quad == doctest::Approx(tau * betaGrad2 + tau * betaE * betaE * stab).epsilon(1e-11));
  }

  // constant beta, polynomial v: quadratic form is tau * int (beta.grad v)^2
  VectorField cb = constBeta(1, 2);
  Real cbE = computeBetaE(proj, cb);
  Matrix BEc = supgConvectionMatrix(proj, cb, tau, cbE, S);
  Vector p = proj.D.col(1); // m_(1,0)
  Real expected = tau * proj.cellArea() *
                  std::pow(1.0 / proj.cellDiameter(), 2); // (beta . grad m10)^2 = (1/h)^2
  CHECK(p.dot(BEc * p) == doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("supg diffusion coupling")
{
  PolyMesh mesh = genQuad(3);
  ElementProjectors p1 = buildElementProjectors(mesh, 0, 1);
  CHECK(supgDiffusionCoupling(p1, constBeta(1, 2), 0.3, 1.0).cwiseAbs().maxCoeff() == 0.0);

  // quadratic polynomial u, constant beta: L(u, v) = -tau eps int Lapl u (beta . Pi0 grad v)
  const int k = 2;
  ElementProjectors proj = buildElementProjectors(mesh, 4, k);
  VectorField beta = constBeta(1, 2);
  Real tau = 0.07, eps = 0.25;
  Matrix L = supgDiffusionCoupling(proj, beta, tau, eps);
  Vector u = proj.D.col(3); // m_(2,0), Lapl = 2/h^2
  Real lap = 2.0 / (proj.cellDiameter() * proj.cellDiameter());
  const int nn = polyDim(k - 1);
  Matrix gradX = proj.phi.leftCols(nn) * proj.Pi0GradKm1.topRows(nn);
  Matrix gradY = proj.phi.leftCols(nn) * proj.Pi0GradKm1.bottomRows(nn);
  for (int j = 0; j < proj.nDofs(); j += 2) {
    Real direct = 0;
    for (int q = 0; q < proj.volume.size(); ++q)
      direct += proj.volume.weights[q] * (-eps * lap) * (gradX(q, j) + 2.0 * gradY(q, j));
    direct *= tau;
    CHECK((L * u)[j] == doctest::Approx(direct).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("element load")
{
  PolyMesh mesh = genQuad(2);
  ElementProjectors proj = buildElementProjectors(mesh, 2, 2);
  VectorField beta = constBeta(1, 2);

  Vector zero = elementLoad(proj, [](const Vector2&) { return 0.0; }, beta, 0.1);
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

  // f = 1, tau = 0, tested against v = 1 gives |E|
  Vector loadOne = elementLoad(proj, [](const Vector2&) { return 1.0; }, beta, 0.0);
  Vector ones = proj.D.col(0);
  CHECK(ones.dot(loadOne) == doctest::Approx(proj.cellArea()).epsilon(1e-13));

  // f = m_(1,0): compare against a dense (degree 4k) quadrature oracle
  ScaledMonomialBasis basis = proj.basis;
  ScalarField f = [&basis](const Vector2& x) {
    return (x.x() - basis.center().x()) / basis.diameter();
  };
  Real tau = 0.05;
  Vector load = elementLoad(proj, f, beta, tau);
  QuadRule dense = polygonRule(mesh, 2, 8);
  Matrix vals = proj.basis.eval(dense.points);
  const int nn = polyDim(1);
  Matrix gradX = vals.leftCols(nn) * proj.Pi0GradKm1.topRows(nn);
  Matrix gradY = vals.leftCols(nn) * proj.Pi0GradKm1.bottomRows(nn);
  Matrix proj0 = vals * proj.Pi0k;
  for (int j = 0; j < proj.nDofs(); ++j) {
    Real direct = 0;
    for (int q = 0; q < dense.size(); ++q) {
      Vector2 x = dense.point(q);
      direct += dense.weights[q] * f(x) * (proj0(q, j) + tau * (gradX(q, j) + 2.0 * gradY(q, j)));
    }
    CHECK(load[j] == doctest::Approx(direct).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("elementSupg composition")
{
  PolyMesh mesh = genQuad(2);
  ElementProjectors proj = buildElementProjectors(mesh, 0, 2);

  ManufacturedCase mc = patchCase(0.7, 1, 1);
  mc.beta = constBeta(0, 0);
  ProblemSpec spec = mc.problem(ConvectionForm::Orig, /*supg=*/false);
  ElementForms ef = elementSupg(proj, spec);
  Matrix expected = 0.7 * diffusionMatrix(proj, StabKind::DofiDofi, 0.7);
  CHECK((ef.Asupg - expected).cwiseAbs().maxCoeff() <= 1e-13);

  // skew variant: the quadratic form sees only the symmetric pieces
  ManufacturedCase sine = sineCase(1e-3);
  ProblemSpec skewSpec = sine.problem(ConvectionForm::OrigSkew, true);
  ElementForms skew = elementSupg(proj, skewSpec);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    Vector v(proj.nDofs());
    for (int i = 0; i < v.size(); ++i) v[i] = static_cast<Real>(rng() >> 11) * 0x1.0p-53 - 0.5;
    Real whole = v.dot(skew.Asupg * v);
    Real parts = skewSpec.epsilon * v.dot(skew.Ah * v) + v.dot(skew.BsupgH * v) +
                 v.dot(skew.LsupgH * v);
    CHECK(whole == doctest::Approx(parts).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("elementwise coercivity in the supg norm (skew forms, admissible tau)")
{
  PolyMesh mesh = genVoronoi(10, 25, 13);
  std::mt19937_64 rng(5);
  ManufacturedCase sine = sineCase(1e-3);
  for (ConvectionForm form : {ConvectionForm::OrigSkew, ConvectionForm::BounSkew}) {
    ProblemSpec spec = sine.problem(form, true);
    for (int k = 1; k <= 2; ++k) {
      ElementProjectors proj = buildElementProjectors(mesh, 6, k);
      ElementForms ef = elementSupg(proj, spec);
      for (int trial = 0; trial < 50; ++trial) {
        Vector v(proj.nDofs());
        for (int i = 0; i < v.size(); ++i)
          v[i] = static_cast<Real>(rng() >> 11) * 0x1.0p-53 - 0.5;
        Real lhs = v.dot(ef.Asupg * v);
        Real norm2 = supgNormLocalSquared(proj, v, spec.beta, spec.epsilon, ef.tauE);
        CHECK(lhs >= 0.5 * norm2 - 1e-10);
      }
    }
  }
}

TEST_CASE("D-recipe coercivity with the measured stabilization eigenvalue")
{
  // alpha* = smallest generalized eigenvalue of the D-recipe stabilization
  // against the dofi-dofi energy on the (I - PiNabla) complement
  auto measureAlpha = [](const ElementProjectors& proj, const Matrix& stab) {
    const int N = proj.nDofs();
    Matrix complement = Matrix::Identity(N, N) - proj.PiNablaDof;
    Matrix sdd = complement.transpose() * complement;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sdd);
    Real top = eig.eigenvalues().maxCoeff();
    std::vector<int> keep;
    for (int i = 0; i < N; ++i)
      if (eig.eigenvalues()[i] > 1e-10 * top) keep.push_back(i);
    Matrix Q(N, keep.size());
    for (size_t i = 0; i < keep.size(); ++i) Q.col(i) = eig.eigenvectors().col(keep[i]);
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> gen(
        Matrix(Q.transpose() * stab * Q), Matrix(Q.transpose() * sdd * Q));
    return gen.eigenvalues().minCoeff();
  };

  PolyMesh mesh = genVoronoi(10, 25, 13);
  std::mt19937_64 rng(31);
  for (Real eps : {1.0, 1e-3}) {
    ManufacturedCase sine = sineCase(eps);
    ProblemSpec spec = sine.problem(ConvectionForm::BounSkew, true, 0.5, StabKind::DRecipe);
    for (int k = 1; k <= 2; ++k) {
      ElementProjectors proj = buildElementProjectors(mesh, 3, k);
      ElementForms ef = elementSupg(proj, spec);
      Matrix stab = stabMatrix(proj, StabKind::DRecipe, eps);
      Real alpha = measureAlpha(proj, stab);
      CHECK(alpha > 0);
      Real factor = std::min(0.5, alpha);
      for (int trial = 0; trial < 30; ++trial) {
        Vector v(proj.nDofs());
        for (int i = 0; i < v.size(); ++i)
          v[i] = static_cast<Real>(rng() >> 11) * 0x1.0p-53 - 0.5;
        Real lhs = v.dot(ef.Asupg * v);
        Real norm2 = supgNormLocalSquared(proj, v, spec.beta, eps, ef.tauE);
        CHECK(lhs >= factor * norm2 - 1e-10);
      }
    }
  }
}

TEST_CASE("global consistency: polynomial solutions satisfy the discrete equations")
{
  // interior rows of A * u_I - F vanish when u is a global polynomial of
  // degree <= k, beta constant, f from the strong equation
  PolyMesh mesh = genTria(2, 0.1, 3);
  for (ConvectionForm form : {ConvectionForm::Orig, ConvectionForm::Boun, ConvectionForm::OrigSkew,
                              ConvectionForm::BounSkew}) {
    for (int k = 1; k <= 2; ++k) {
      ManufacturedCase mc = patchCase(1.0, 1, k - 1);
      ProblemSpec spec = mc.problem(form, true);
      LinearSystem sys = assemble(mesh, k, spec);
      Vector interp = interpolateDofs(mesh, k, mc.u);
      Vector residual = sys.matrix * interp - sys.rhs;
      for (int i = 0; i < sys.dofMap.nGlobal; ++i)
        if (!sys.dofMap.boundaryDof[i]) CHECK(std::abs(residual[i]) <= 1e-10);
    }
  }
}

TEST_SUITE_END();
