// Scaled monomial bases m_a(x) = ((x - x_E)/h_E)^a1 ((y - y_E)/h_E)^a2 on a
// cell, with exact derivatives. The graded-lexicographic exponent order fixed
// here (1; x, y; x^2, xy, y^2; ...) is the single index convention every
// projector and form matrix in the library follows.

#ifndef POLYVEM_BASIS_HPP
#define POLYVEM_BASIS_HPP

#include "polyvem/types.hpp"

#include <array>
#include <vector>

namespace polyvem {

struct PolyMesh;

/// Exponent pairs (a1, a2) with a1 + a2 <= n, graded-lex order.
std::vector<std::array<int, 2>> monomialExponents(int n);

class ScaledMonomialBasis {
public:
  ScaledMonomialBasis(const Vector2& center, Real diameter, int degree);
  ScaledMonomialBasis(const PolyMesh& mesh, int cellIndex, int degree);

  int degree() const { return m_degree; }
  int dim() const { return static_cast<int>(m_exponents.size()); }
  const Vector2& center() const { return m_center; }
  Real diameter() const { return m_diameter; }
  const std::array<int, 2>& exponents(int i) const { return m_exponents[i]; }

  /// Values: (nPoints x dim), entry (p, i) = m_i(point_p).
  Matrix eval(const Matrix& points) const;
  Matrix eval(const std::vector<Vector2>& points) const;

  /// Partial derivatives, two (nPoints x dim) matrices.
  void evalGrad(const Matrix& points, Matrix& dx, Matrix& dy) const;

  /// Laplacians, (nPoints x dim).
  Matrix evalLapl(const Matrix& points) const;

  /// Coefficients of d/dx m_i and d/dy m_i in the basis of degree() - 1.
  /// Returned matrices are dim(n-1) x dim(n).
  void gradCoefficients(Matrix& cx, Matrix& cy) const;

  /// Coefficients of Laplacian(m_i) in the basis of degree() - 2.
  Matrix laplCoefficients() const;

private:
  Vector2 m_center;
  Real m_diameter;
  int m_degree;
  std::vector<std::array<int, 2>> m_exponents;
};

/// Mass matrix H with H_ij = int_E m_i m_j, by polygon quadrature of the
/// given degree (needs degree >= 2 * basis degree to be exact).
Matrix massMatrix(const ScaledMonomialBasis& basis, const PolyMesh& mesh, int cellIndex,
                  int quadDegree);

} // namespace polyvem

#endif
