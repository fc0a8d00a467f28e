// Common scalar and dense-algebra aliases used across the library.

#ifndef POLYVEM_TYPES_HPP
#define POLYVEM_TYPES_HPP

#include <Eigen/Dense>
#include <functional>

namespace polyvem {

using Real = double;

using Vector2 = Eigen::Vector2d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IndexVector = Eigen::VectorXi;

/// Scalar field sampled pointwise.
using ScalarField = std::function<Real(const Vector2&)>;
/// Vector field sampled pointwise.
using VectorField = std::function<Vector2(const Vector2&)>;

/// Dimension of the polynomial space of total degree <= n in two variables.
inline int polyDim(int n) { return n < 0 ? 0 : (n + 1) * (n + 2) / 2; }

} // namespace polyvem

#endif
