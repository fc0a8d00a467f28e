#include "polyvem/quadrature.hpp"

#include "polyvem/mesh.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace polyvem {

Real QuadRule::integrate(const ScalarField& f) const
{
  Real s = 0;
  for (int q = 0; q < size(); ++q) s += weights[q] * f(point(q));
  return s;
}

namespace {

// Golub-Welsch: nodes/weights on (-1,1) from the symmetric Jacobi matrix of a
// three-term recurrence with off-diagonals offdiag and zeroth moment mu0.
void golubWelsch(const Vector& diag, const Vector& offdiag, Real mu0, Vector& nodes,
                 Vector& weights)
{
  const int n = static_cast<int>(diag.size());
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  if (n == 1) {
    nodes = diag;
    weights = Vector::Constant(1, mu0);
    return;
  }
  Matrix J = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, i) = diag[i];
  for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = offdiag[i];
  solver.compute(J);
  nodes = solver.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    Real v0 = solver.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

// Gauss-Legendre on (-1,1), exact to 2n-1.
void gaussLegendreRef(int n, Vector& nodes, Vector& weights)
{
  Vector diag = Vector::Zero(n), off(std::max(n - 1, 0));
  for (int j = 1; j < n; ++j) off[j - 1] = j / std::sqrt(4.0 * j * j - 1.0);
  golubWelsch(diag, off, 2.0, nodes, weights);
}

// Gauss-Jacobi on (-1,1) for the weight (1-x): recurrence
//   a_k = -1 / ((2k+1)(2k+3)),  b_k = sqrt(k(k+1)) / (2k+1),  mu0 = 2.
void gaussJacobi10Ref(int n, Vector& nodes, Vector& weights)
{
  Vector diag(n), off(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag[k] = -1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k * (k + 1.0)) / (2.0 * k + 1.0);
  golubWelsch(diag, off, 2.0, nodes, weights);
}

// Gauss-Jacobi on (-1,1) for the weight (1-x^2): its nodes are the interior
// Gauss-Lobatto points.
void gaussJacobi11Ref(int n, Vector& nodes, Vector& weights)
{
  Vector diag = Vector::Zero(n), off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k)
    off[k - 1] = std::sqrt(k * (k + 2.0) / ((2.0 * k + 1.0) * (2.0 * k + 3.0)));
  golubWelsch(diag, off, 4.0 / 3.0, nodes, weights);
}

} // namespace

void gaussLegendre01(int n, Vector& nodes, Vector& weights)
{
  if (n < 1) throw std::invalid_argument("gaussLegendre01: n must be >= 1");
  Vector x, w;
  gaussLegendreRef(n, x, w);
  nodes = (x.array() + 1.0) / 2.0;
  weights = w / 2.0;
}

Vector gaussLobatto01(int m)
{
  if (m < 2) throw std::invalid_argument("gaussLobatto01: need at least 2 points");
  Vector nodes(m);
  nodes[0] = 0.0;
  nodes[m - 1] = 1.0;
  if (m > 2) {
    Vector x, w;
    gaussJacobi11Ref(m - 2, x, w);
    for (int i = 0; i < m - 2; ++i) nodes[1 + i] = (x[i] + 1.0) / 2.0;
  }
  return nodes;
}

QuadRule triangleRule(int degree)
{
  if (degree < 1 || degree > 20) throw std::invalid_argument("triangleRule: unsupported degree");
  // conical product: x = u, y = v (1-u), with u Gauss-Jacobi(1,0) and v
  // Gauss-Legendre, both mapped to [0,1]
  const int n = (degree + 2) / 2; // 2n-1 >= degree
  Vector uj, wj, vl, wl;
  gaussJacobi10Ref(n, uj, wj);
  gaussLegendre01(n, vl, wl);

  QuadRule rule;
  rule.exactDegree = degree;
  rule.points.resize(n * n, 2);
  rule.weights.resize(n * n);
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    Real u = (uj[i] + 1.0) / 2.0;
    Real wu = wj[i] / 4.0; // includes the (1-u) weight of the collapsed edge
    for (int j = 0; j < n; ++j, ++idx) {
      rule.points(idx, 0) = u;
      rule.points(idx, 1) = vl[j] * (1.0 - u);
      rule.weights[idx] = wu * wl[j];
    }
  }
  return rule;
}

namespace {

bool inKernel(const std::vector<Vector2>& loop, const Vector2& p, Real tol)
{
  int m = static_cast<int>(loop.size());
  for (int i = 0; i < m; ++i) {
    Vector2 a = loop[i], b = loop[(i + 1) % m];
    Real cross = (b - a).x() * (p - a).y() - (b - a).y() * (p - a).x();
    if (cross <= tol) return false;
  }
  return true;
}

Vector2 findFanPoint(const std::vector<Vector2>& loop, Real area)
{
  Real a = 0;
  Vector2 c = Vector2::Zero();
  int m = static_cast<int>(loop.size());
  for (int i = 0; i < m; ++i) {
    const Vector2& p = loop[i];
    const Vector2& q = loop[(i + 1) % m];
    Real cross = p.x() * q.y() - q.x() * p.y();
    a += cross;
    c += cross * (p + q);
  }
  Vector2 centroid = c / (3.0 * a);
  Real tol = 1e-14 * std::sqrt(area);
  if (inKernel(loop, centroid, tol)) return centroid;

  // centroid outside the kernel: intersect the inner half-planes of every
  // edge (the kernel is convex) and fan from its centroid
  std::vector<Vector2> kernel = loop;
  for (int i = 0; i < m && !kernel.empty(); ++i) {
    const Vector2& p = loop[i];
    const Vector2& q = loop[(i + 1) % m];
    Vector2 outwardDir(q.y() - p.y(), -(q.x() - p.x()));
    std::vector<Vector2> clipped;
    int n = static_cast<int>(kernel.size());
    clipped.reserve(n + 1);
    for (int j = 0; j < n; ++j) {
      const Vector2& r = kernel[j];
      const Vector2& s = kernel[(j + 1) % n];
      Real dr = (r - p).dot(outwardDir);
      Real ds = (s - p).dot(outwardDir);
      if (dr <= 0) clipped.push_back(r);
      if ((dr < 0 && ds > 0) || (dr > 0 && ds < 0)) clipped.push_back(r + dr / (dr - ds) * (s - r));
    }
    kernel = std::move(clipped);
  }
  if (kernel.size() >= 3) {
    Real ka = 0;
    Vector2 kc = Vector2::Zero();
    int n = static_cast<int>(kernel.size());
    for (int j = 0; j < n; ++j) {
      const Vector2& p = kernel[j];
      const Vector2& q = kernel[(j + 1) % n];
      Real cross = p.x() * q.y() - q.x() * p.y();
      ka += cross;
      kc += cross * (p + q);
    }
    if (std::abs(ka) > 0) {
      Vector2 candidate = kc / (3.0 * ka);
      if (inKernel(loop, candidate, 0.0)) return candidate;
    }
  }
  throw std::runtime_error("polygonRule: no fan point sees every edge");
}

} // namespace

QuadRule polygonRule(const std::vector<Vector2>& loop, int degree)
{
  QuadRule ref = triangleRule(std::max(degree, 1));
  const int m = static_cast<int>(loop.size());
  Real area = 0;
  for (int i = 0; i < m; ++i)
    area += loop[i].x() * loop[(i + 1) % m].y() - loop[(i + 1) % m].x() * loop[i].y();
  area *= 0.5;
  Vector2 apex = findFanPoint(loop, area);

  QuadRule rule;
  rule.exactDegree = std::max(degree, 1);
  rule.points.resize(m * ref.size(), 2);
  rule.weights.resize(m * ref.size());
  int idx = 0;
  for (int i = 0; i < m; ++i) {
    Vector2 a = loop[i], b = loop[(i + 1) % m];
    Vector2 e1 = a - apex, e2 = b - apex;
    Real jac = e1.x() * e2.y() - e1.y() * e2.x(); // = 2 * triangle area
    for (int q = 0; q < ref.size(); ++q, ++idx) {
      Vector2 p = apex + ref.points(q, 0) * e1 + ref.points(q, 1) * e2;
      rule.points.row(idx) = p.transpose();
      rule.weights[idx] = ref.weights[q] * jac; // ref weights sum to 1/2
    }
  }
  return rule;
}

QuadRule polygonRule(const PolyMesh& mesh, int cellIndex, int degree)
{
  return polygonRule(mesh.cellLoop(cellIndex), degree);
}

QuadRule edgeRule(const Vector2& a, const Vector2& b, int degree)
{
  const int n = std::max((degree + 2) / 2, 1);
  Vector t, w;
  gaussLegendre01(n, t, w);
  Real len = (b - a).norm();
  QuadRule rule;
  rule.exactDegree = degree;
  rule.points.resize(n, 2);
  rule.weights = w * len;
  for (int q = 0; q < n; ++q) rule.points.row(q) = (a + t[q] * (b - a)).transpose();
  return rule;
}

std::vector<Vector2> edgeLobattoPoints(const Vector2& a, const Vector2& b, int k)
{
  if (k < 1) throw std::invalid_argument("edgeLobattoPoints: k must be >= 1");
  Vector t = gaussLobatto01(k + 1);
  std::vector<Vector2> pts(k + 1);
  for (int i = 0; i <= k; ++i) pts[i] = a + t[i] * (b - a);
  return pts;
}

} // namespace polyvem
