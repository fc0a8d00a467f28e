// Error norms of the studies and the discrete SUPG energy norm, together
// with manufactured problems (exact solution, derived source and boundary
// data).

#ifndef POLYVEM_ERRORS_HPP
#define POLYVEM_ERRORS_HPP

#include "polyvem/forms.hpp"
#include "polyvem/mesh.hpp"
#include "polyvem/types.hpp"

#include <vector>

namespace polyvem {

struct ManufacturedCase {
  ScalarField u;
  VectorField gradU;
  ScalarField laplU;
  VectorField beta;
  Real epsilon = 1.0;

  /// f = -eps Lapl(u) + beta . grad(u)
  ScalarField source() const;
  ProblemSpec problem(ConvectionForm form, bool supg, Real tauSafety = 0.5,
                      StabKind stab = StabKind::DofiDofi) const;
};

/// The study problem: u = sin(pi x) sin(pi y) with the rotating trigonometric
/// transport field.
ManufacturedCase sineCase(Real epsilon);

/// Monomial solution x^px y^py with constant transport (1, 2).
ManufacturedCase patchCase(Real epsilon, int px, int py);

/// e_H1 = sqrt( sum_E || grad(u - PiNabla u_h) ||^2 ).
Real errorH1(const PolyMesh& mesh, int k, const Vector& solution, const ManufacturedCase& mc);

/// e_C = sqrt( sum_E eps ||grad(u - PiNabla u_h)||^2
///                   + tau_E ||beta . grad(u - PiNabla u_h)||^2 ).
/// tauPerCell carries the per-cell SUPG parameters defining the metric.
Real errorConvective(const PolyMesh& mesh, int k, const Vector& solution,
                     const ManufacturedCase& mc, const std::vector<Real>& tauPerCell);

/// Discrete SUPG norm of a DoF vector, using the computable surrogate
/// (projected gradient energy plus the dofi-dofi complement energy) for the
/// full H1 term; exact on polynomials.
Real supgNorm(const PolyMesh& mesh, int k, const Vector& dofs, const VectorField& beta,
              Real epsilon, const std::vector<Real>& tauPerCell);

/// Squared per-element SUPG norm of a local DoF vector (same surrogate and
/// the same quadrature the forms use).
Real supgNormLocalSquared(const ElementProjectors& proj, const Vector& localDofs,
                          const VectorField& beta, Real epsilon, Real tauE);

/// Per-cell tau values of the method definition (independent of whether a
/// particular assembly enabled the SUPG terms); defines the e_C metric.
std::vector<Real> methodTau(const PolyMesh& mesh, int k, const VectorField& beta, Real epsilon,
                            Real tauSafety);

struct StudyErrors {
  Real eH1 = 0;
  Real eC = 0;
  Real supgErr = 0; // supg norm of u_h - u_I
};

/// All study error measures in a single sweep over the elements; the e_C and
/// supg metrics use the method-definition tau.
StudyErrors computeStudyErrors(const PolyMesh& mesh, int k, const Vector& solution,
                               const Vector& interpolant, const ManufacturedCase& mc,
                               Real tauSafety);

} // namespace polyvem

#endif
