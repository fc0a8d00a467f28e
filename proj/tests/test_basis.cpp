#include "polyvem/basis.hpp"

#include "polyvem/mesh.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace polyvem;

TEST_SUITE_BEGIN("basis");

TEST_CASE("graded-lex ordering and dimension")
{
  auto exps = monomialExponents(2);
  REQUIRE(exps.size() == 6);
  CHECK(exps[0] == std::array<int, 2>{0, 0});
  CHECK(exps[1] == std::array<int, 2>{1, 0});
  CHECK(exps[2] == std::array<int, 2>{0, 1});
  CHECK(exps[3] == std::array<int, 2>{2, 0});
  CHECK(exps[4] == std::array<int, 2>{1, 1});
  CHECK(exps[5] == std::array<int, 2>{0, 2});
  CHECK(polyDim(3) == 10);
}

TEST_CASE("pointwise values of the scaled monomials")
{
  Vector2 center(0.3, 0.7);
  Real h = 2.0;
  ScaledMonomialBasis basis(center, h, 3);

  Matrix pts(3, 2);
  pts.row(0) = center.transpose();
  pts.row(1) = (center + Vector2(h, 0)).transpose();
  pts.row(2) = (center + Vector2(h / 2, h / 2)).transpose();
  Matrix vals = basis.eval(pts);

  CHECK(vals(0, 0) == doctest::Approx(1.0));       // m_(0,0) anywhere
  CHECK(vals(1, 1) == doctest::Approx(1.0));       // m_(1,0) at x_E + (h,0)
  CHECK(vals(2, 7) == doctest::Approx(1.0 / 8.0)); // m_(2,1) at x_E + (h/2,h/2)
}

TEST_CASE("gradients and Laplacians of low monomials")
{
  Vector2 center(0, 0);
  Real h = 0.5;
  ScaledMonomialBasis basis(center, h, 2);
  Matrix pts(1, 2);
  pts << 0.1, -0.2;

  Matrix dx, dy;
  basis.evalGrad(pts, dx, dy);
  CHECK(dx(0, 0) == 0.0); // grad of the constant
  CHECK(dy(0, 0) == 0.0);
  CHECK(dx(0, 1) == doctest::Approx(1.0 / h)); // d/dx m_(1,0)
  CHECK(dy(0, 1) == 0.0);

  Matrix lap = basis.evalLapl(pts);
  CHECK(lap(0, 3) == doctest::Approx(2.0 / (h * h))); // Lapl m_(2,0)
}

TEST_CASE("gradient matches central differences at random points")
{
  std::mt19937_64 rng(3);
  auto uniform = [&rng]() { return static_cast<Real>(rng() >> 11) * 0x1.0p-53; };
  ScaledMonomialBasis basis(Vector2(0.4, 0.6), 0.8, 4);
  const Real step = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    Vector2 p(uniform(), uniform());
    Matrix pts(4, 2);
    pts.row(0) = (p + Vector2(step, 0)).transpose();
    pts.row(1) = (p - Vector2(step, 0)).transpose();
    pts.row(2) = (p + Vector2(0, step)).transpose();
    pts.row(3) = (p - Vector2(0, step)).transpose();
    Matrix vals = basis.eval(pts);
    Matrix dx, dy;
    Matrix point(1, 2);
    point << p.x(), p.y();
    basis.evalGrad(point, dx, dy);
    for (int i = 0; i < basis.dim(); ++i) {
      Real fdx = (vals(0, i) - vals(1, i)) / (2 * step);
      Real fdy = (vals(2, i) - vals(3, i)) / (2 * step);
      CHECK(dx(0, i) == doctest::Approx(fdx).epsilon(1e-6).scale(1.0));
      CHECK(dy(0, i) == doctest::Approx(fdy).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("mass matrix on the unit square")
{
  PolyMesh mesh = genQuad(1);

  ScaledMonomialBasis b0(mesh, 0, 0);
  Matrix H0 = massMatrix(b0, mesh, 0, 2);
  CHECK(H0(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

  ScaledMonomialBasis b1(mesh, 0, 1);
  Matrix H1 = massMatrix(b1, mesh, 0, 4);
  Real h = std::sqrt(2.0);
  CHECK(H1(1, 1) == doctest::Approx(1.0 / 12.0 / (h * h)).epsilon(1e-13));
  CHECK((H1 - H1.transpose()).norm() == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("mass matrix against the moment oracle on a Voronoi cell")
{
  PolyMesh mesh = genVoronoi(12, 4, 17);
  for (int c : {0, 3, 7}) {
    ScaledMonomialBasis basis(mesh, c, 2);
    Matrix H = massMatrix(basis, mesh, c, 6);
    auto loop = mesh.cellLoop(c);
    for (int i = 0; i < basis.dim(); ++i)
      for (int j = 0; j < basis.dim(); ++j) {
        int p = basis.exponents(i)[0] + basis.exponents(j)[0];
        int q = basis.exponents(i)[1] + basis.exponents(j)[1];
        Real expected = testing::polygonScaledMonomialIntegral(
            loop, basis.center(), basis.diameter(), p, q);
        CHECK(H(i, j) == doctest::Approx(expected).epsilon(1e-12).scale(1.0));
      }
  }
}

TEST_CASE("mass matrices stay SPD and well conditioned on the study families")
{
  auto worstCondition = [](const PolyMesh& mesh, int k) {
    Real worst = 0;
    for (int c = 0; c < mesh.nCells(); ++c) {
      ScaledMonomialBasis basis(mesh, c, k);
      Matrix H = massMatrix(basis, mesh, c, 2 * k);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
      Real lo = eig.eigenvalues().minCoeff();
      REQUIRE(lo > 0);
      worst = std::max(worst, eig.eigenvalues().maxCoeff() / lo);
    }
    return worst;
  };

  // every family at the solver orders
  auto families = {genQuad(8), genTria(8, 0.2, 21), genVoronoi(64, 100, 42),
                   genVoronoi(64, 0, 42)};
  for (const PolyMesh& mesh : families)
    for (int k = 1; k <= 3; ++k) CHECK(worstCondition(mesh, k) <= 1e8);

  // sliver cells of the jittered and raw-Voronoi families condition like
  // (aspect ratio)^(2k) and leave this envelope at k = 4; the plump families
  // stay inside it
  CHECK(worstCondition(genQuad(8), 4) <= 1e8);
  CHECK(worstCondition(genVoronoi(64, 100, 42), 4) <= 1e8);
}

TEST_SUITE_END();
