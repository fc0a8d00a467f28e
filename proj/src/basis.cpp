#include "polyvem/basis.hpp"

#include "polyvem/mesh.hpp"
#include "polyvem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace polyvem {

std::vector<std::array<int, 2>> monomialExponents(int n)
{
  std::vector<std::array<int, 2>> exps;
  exps.reserve(polyDim(n));
  for (int total = 0; total <= n; ++total)
    for (int j = 0; j <= total; ++j) exps.push_back({total - j, j});
  return exps;
}

namespace {

// index of (a1, a2) in graded-lex order
int monomialIndex(int a1, int a2)
{
  int total = a1 + a2;
  return total * (total + 1) / 2 + a2;
}

} // namespace

ScaledMonomialBasis::ScaledMonomialBasis(const Vector2& center, Real diameter, int degree)
    : m_center(center), m_diameter(diameter), m_degree(degree), m_exponents(monomialExponents(degree))
{
  if (degree < 0) throw std::invalid_argument("ScaledMonomialBasis: negative degree");
  if (!(diameter > 0)) throw std::invalid_argument("ScaledMonomialBasis: non-positive diameter");
}

ScaledMonomialBasis::ScaledMonomialBasis(const PolyMesh& mesh, int cellIndex, int degree)
    : ScaledMonomialBasis(mesh.cells[cellIndex].centroid, mesh.cells[cellIndex].diameter, degree)
{
}

Matrix ScaledMonomialBasis::eval(const Matrix& points) const
{
  const int nP = static_cast<int>(points.rows());
  // powers of the scaled coordinates up to the degree, reused per point
  Matrix px(nP, m_degree + 1), py(nP, m_degree + 1);
  px.col(0).setOnes();
  py.col(0).setOnes();
  for (int p = 0; p < nP; ++p) {
    Real sx = (points(p, 0) - m_center.x()) / m_diameter;
    Real sy = (points(p, 1) - m_center.y()) / m_diameter;
    for (int d = 1; d <= m_degree; ++d) {
      px(p, d) = px(p, d - 1) * sx;
      py(p, d) = py(p, d - 1) * sy;
    }
  }
  Matrix out(nP, dim());
  for (int i = 0; i < dim(); ++i)
    out.col(i) = px.col(m_exponents[i][0]).cwiseProduct(py.col(m_exponents[i][1]));
  return out;
}

Matrix ScaledMonomialBasis::eval(const std::vector<Vector2>& points) const
{
  Matrix pts(points.size(), 2);
  for (size_t p = 0; p < points.size(); ++p) pts.row(p) = points[p].transpose();
  return eval(pts);
}

void ScaledMonomialBasis::evalGrad(const Matrix& points, Matrix& dx, Matrix& dy) const
{
  const int nP = static_cast<int>(points.rows());
  Matrix px(nP, m_degree + 1), py(nP, m_degree + 1);
  px.col(0).setOnes();
  py.col(0).setOnes();
  for (int p = 0; p < nP; ++p) {
    Real sx = (points(p, 0) - m_center.x()) / m_diameter;
    Real sy = (points(p, 1) - m_center.y()) / m_diameter;
    for (int d = 1; d <= m_degree; ++d) {
      px(p, d) = px(p, d - 1) * sx;
      py(p, d) = py(p, d - 1) * sy;
    }
  }
  dx.resize(nP, dim());
  dy.resize(nP, dim());
  for (int i = 0; i < dim(); ++i) {
    int a1 = m_exponents[i][0], a2 = m_exponents[i][1];
    if (a1 == 0)
      dx.col(i).setZero();
    else
      dx.col(i) = (a1 / m_diameter) * px.col(a1 - 1).cwiseProduct(py.col(a2));
    if (a2 == 0)
      dy.col(i).setZero();
    else
      dy.col(i) = (a2 / m_diameter) * px.col(a1).cwiseProduct(py.col(a2 - 1));
  }
}

Matrix ScaledMonomialBasis::evalLapl(const Matrix& points) const
{
  const int nP = static_cast<int>(points.rows());
  Matrix out = Matrix::Zero(nP, dim());
  if (m_degree < 2) return out;
  ScaledMonomialBasis lower(m_center, m_diameter, m_degree - 2);
  Matrix lowVals = lower.eval(points);
  const Real h2 = m_diameter * m_diameter;
  for (int i = 0; i < dim(); ++i) {
    int a1 = m_exponents[i][0], a2 = m_exponents[i][1];
    if (a1 >= 2) out.col(i) += (a1 * (a1 - 1) / h2) * lowVals.col(monomialIndex(a1 - 2, a2));
    if (a2 >= 2) out.col(i) += (a2 * (a2 - 1) / h2) * lowVals.col(monomialIndex(a1, a2 - 2));
  }
  return out;
}

void ScaledMonomialBasis::gradCoefficients(Matrix& cx, Matrix& cy) const
{
  const int lowDim = polyDim(m_degree - 1);
  cx = Matrix::Zero(lowDim, dim());
  cy = Matrix::Zero(lowDim, dim());
  for (int i = 0; i < dim(); ++i) {
    int a1 = m_exponents[i][0], a2 = m_exponents[i][1];
    if (a1 >= 1) cx(monomialIndex(a1 - 1, a2), i) = a1 / m_diameter;
    if (a2 >= 1) cy(monomialIndex(a1, a2 - 1), i) = a2 / m_diameter;
  }
}

Matrix ScaledMonomialBasis::laplCoefficients() const
{
  const int lowDim = polyDim(m_degree - 2);
  Matrix c = Matrix::Zero(lowDim, dim());
  const Real h2 = m_diameter * m_diameter;
  for (int i = 0; i < dim(); ++i) {
    int a1 = m_exponents[i][0], a2 = m_exponents[i][1];
    if (a1 >= 2) c(monomialIndex(a1 - 2, a2), i) += a1 * (a1 - 1) / h2;
    if (a2 >= 2) c(monomialIndex(a1, a2 - 2), i) += a2 * (a2 - 1) / h2;
  }
  return c;
}

Matrix massMatrix(const ScaledMonomialBasis& basis, const PolyMesh& mesh, int cellIndex,
                  int quadDegree)
{
  QuadRule rule = polygonRule(mesh, cellIndex, quadDegree);
  Matrix vals = basis.eval(rule.points);
  return vals.transpose() * rule.weights.asDiagonal() * vals;
}

} // namespace polyvem
