// Convergence-study orchestration: mesh ladders per family, solves, error
// rows, least-squares rates, CSV output and a minimal self-contained SVG
// log-log plot.

#ifndef POLYVEM_HARNESS_HPP
#define POLYVEM_HARNESS_HPP

#include "polyvem/errors.hpp"
#include "polyvem/mesh.hpp"
#include "polyvem/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace polyvem {

enum class MeshFamily { Quad, Tria, Voro, Rand };

MeshFamily meshFamilyFromString(const std::string& name);
std::string toString(MeshFamily family);

/// Default ladder parameter (n or seed count) per family.
std::vector<int> defaultLevels(MeshFamily family);

/// Generate one mesh of a family. `param` is n for quad/tria and the seed
/// count for voro/rand.
PolyMesh makeFamilyMesh(MeshFamily family, int param, std::uint64_t rngSeed);

struct StudyConfig {
  MeshFamily family = MeshFamily::Quad;
  std::vector<int> levels;
  int k = 1;
  Real epsilon = 1e-3;
  ConvectionForm form = ConvectionForm::BounSkew;
  bool supg = true;
  StabKind stab = StabKind::DofiDofi;
  Real tauSafety = 0.5;
  Real solverTol = 1e-12;
  std::uint64_t rngSeed = 42;
};

struct ConvergenceRow {
  int level = 0;
  Real h = 0;
  int nDofs = 0;
  Real eH1 = 0;
  Real eC = 0;
  Real supgErr = 0; // supg norm of u_h - u_I
  Real assembleMs = 0;
  Real solveMs = 0;
};

struct StudyResult {
  StudyConfig config;
  std::vector<ConvergenceRow> rows;
  Real rateH1 = 0; // least-squares slope over the finest three levels
  Real rateC = 0;
};

/// Least-squares slope of log(err) against log(h) over the trailing
/// `window` rows (uses all rows when fewer are available).
Real fitRate(const std::vector<ConvergenceRow>& rows, bool convective, int window = 3);

/// Run a ladder against the sine model problem. Meshes may be supplied to
/// share generation across studies; otherwise they are built on demand.
StudyResult runConvergence(const StudyConfig& config,
                           const std::vector<PolyMesh>* meshes = nullptr);

/// CSV with header level,h,ndofs,eH1,eC,assemble_ms,solve_ms.
std::string toCsv(const StudyResult& result);

/// Minimal log-log SVG plot of eH1 and eC against h.
std::string toSvg(const StudyResult& result);

} // namespace polyvem

#endif
