// Computable per-element forms: the projected diffusion form with its
// stabilization, the two discrete convection forms (projection-based and
// boundary-corrected) with optional skew-symmetrization, the SUPG residual
// terms, the stabilized load, and the SUPG parameter with its admissibility
// clamp from the local inverse estimate.

#ifndef POLYVEM_FORMS_HPP
#define POLYVEM_FORMS_HPP

#include "polyvem/projectors.hpp"
#include "polyvem/types.hpp"

#include <string>

namespace polyvem {

enum class ConvectionForm { Orig, Boun, OrigSkew, BounSkew };
enum class StabKind { DofiDofi, DRecipe };

ConvectionForm convectionFormFromString(const std::string& name);
std::string toString(ConvectionForm form);

struct ProblemSpec {
  Real epsilon = 1.0;
  VectorField beta;   // divergence-free transport field
  ScalarField source; // f
  ScalarField dirichlet;
  ConvectionForm convectionForm = ConvectionForm::BounSkew;
  bool supgEnabled = true;
  StabKind stabKind = StabKind::DofiDofi;
  Real tauSafety = 0.5;
};

struct ElementForms {
  Matrix Ah;     // diffusion: consistency + stabilization
  Matrix Bh;     // convection in the chosen variant (skew-symmetrized or not)
  Matrix BsupgH; // SUPG convection residual term
  Matrix LsupgH; // SUPG diffusion coupling term
  Matrix Asupg;  // epsilon*Ah + Bh + BsupgH + LsupgH
  Vector Fsupg;
  Real tauE = 0;
  Real betaE = 0;
  Real hE = 0;
};

/// Sampled sup of |beta| over the volume and edge quadrature points.
Real computeBetaE(const ElementProjectors& proj, const VectorField& beta);

/// tau_E = tauSafety * min{h/beta_E, h^2/eps}, clamped by the admissibility
/// bound h^2 / (eps * gammaHat) with gammaHat the measured inverse constant.
Real computeTau(const ElementProjectors& proj, Real epsilon, Real betaE, Real tauSafety);

/// Stabilization sandwich acting through (I - PiNabla) on both sides.
Matrix stabMatrix(const ElementProjectors& proj, StabKind kind, Real epsilon);

/// Consistency part of the diffusion form (no stabilization).
Matrix diffusionConsistency(const ElementProjectors& proj);

Matrix diffusionMatrix(const ElementProjectors& proj, StabKind kind, Real epsilon);

Matrix convectionMatrixOrig(const ElementProjectors& proj, const VectorField& beta);
Matrix convectionMatrixBoun(const ElementProjectors& proj, const VectorField& beta);

Matrix skewSymmetrize(const Matrix& Bh);

Matrix supgConvectionMatrix(const ElementProjectors& proj, const VectorField& beta, Real tauE,
                            Real betaE, const Matrix& stab);
Matrix supgDiffusionCoupling(const ElementProjectors& proj, const VectorField& beta, Real tauE,
                             Real epsilon);
Vector elementLoad(const ElementProjectors& proj, const ScalarField& f, const VectorField& beta,
                   Real tauE);

/// Assemble every piece of the local SUPG system.
ElementForms elementSupg(const ElementProjectors& proj, const ProblemSpec& spec);

} // namespace polyvem

#endif
