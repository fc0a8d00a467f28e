#include "polyvem/harness.hpp"

#include "polyvem/system.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace polyvem {

MeshFamily meshFamilyFromString(const std::string& name)
{
  if (name == "quad") return MeshFamily::Quad;
  if (name == "tria") return MeshFamily::Tria;
  if (name == "voro") return MeshFamily::Voro;
  if (name == "rand") return MeshFamily::Rand;
  throw std::invalid_argument("unknown mesh family: " + name);
}

std::string toString(MeshFamily family)
{
  switch (family) {
    case MeshFamily::Quad: return "quad";
    case MeshFamily::Tria: return "tria";
    case MeshFamily::Voro: return "voro";
    case MeshFamily::Rand: return "rand";
  }
  return "?";
}

std::vector<int> defaultLevels(MeshFamily family)
{
  switch (family) {
    case MeshFamily::Quad:
    case MeshFamily::Tria: return {8, 16, 32, 64};
    case MeshFamily::Voro:
    case MeshFamily::Rand: return {64, 256, 1024, 4096};
  }
  return {};
}

PolyMesh makeFamilyMesh(MeshFamily family, int param, std::uint64_t rngSeed)
{
  switch (family) {
    case MeshFamily::Quad: return genQuad(param);
    case MeshFamily::Tria: return genTria(param, 0.2, rngSeed);
    case MeshFamily::Voro: return genVoronoi(param, 100, rngSeed);
    case MeshFamily::Rand: return genVoronoi(param, 0, rngSeed);
  }
  throw std::logic_error("makeFamilyMesh: bad family");
}

Real fitRate(const std::vector<ConvergenceRow>& rows, bool convective, int window)
{
  std::vector<ConvergenceRow> valid;
  for (const ConvergenceRow& r : rows)
    if (std::isfinite(r.eH1) && std::isfinite(r.eC) && r.eH1 > 0 && r.eC > 0) valid.push_back(r);
  const int n = static_cast<int>(valid.size());
  const int use = std::min(window, n);
  if (use < 2) return 0.0;
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = n - use; i < n; ++i) {
    Real x = std::log(valid[i].h);
    Real y = std::log(convective ? valid[i].eC : valid[i].eH1);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (use * sxy - sx * sy) / (use * sxx - sx * sx);
}

StudyResult runConvergence(const StudyConfig& config, const std::vector<PolyMesh>* meshes)
{
  StudyResult result;
  result.config = config;
  std::vector<int> levels = config.levels.empty() ? defaultLevels(config.family) : config.levels;
  if (levels.empty()) throw std::invalid_argument("runConvergence: no levels");
  if (meshes && meshes->size() != levels.size())
    throw std::invalid_argument("runConvergence: mesh list does not match levels");

  ManufacturedCase mc = sineCase(config.epsilon);
  ProblemSpec spec = mc.problem(config.form, config.supg, config.tauSafety, config.stab);

  using Clock = std::chrono::steady_clock;
  for (size_t lvl = 0; lvl < levels.size(); ++lvl) {
    PolyMesh generated;
    const PolyMesh* mesh;
    if (meshes) {
      mesh = &(*meshes)[lvl];
    } else {
      generated = makeFamilyMesh(config.family, levels[lvl], config.rngSeed);
      mesh = &generated;
    }

    ConvergenceRow row;
    row.level = levels[lvl];
    row.h = mesh->h;
    try {
      auto t0 = Clock::now();
      LinearSystem sys = assemble(*mesh, config.k, spec);
      applyDirichlet(sys, *mesh, spec.dirichlet);
      auto t1 = Clock::now();
      SolveResult sol = solve(sys, config.solverTol);
      auto t2 = Clock::now();

      row.nDofs = sys.dofMap.nGlobal;
      // the e_C metric always carries the tau of the method definition, so
      // stabilized and unstabilized runs are measured on the same scale
      Vector interp = interpolateDofs(*mesh, config.k, mc.u);
      StudyErrors errs =
          computeStudyErrors(*mesh, config.k, sol.solution, interp, mc, config.tauSafety);
      row.eH1 = errs.eH1;
      row.eC = errs.eC;
      row.supgErr = errs.supgErr;
      row.assembleMs = std::chrono::duration<Real, std::milli>(t1 - t0).count();
      row.solveMs = std::chrono::duration<Real, std::milli>(t2 - t1).count();
    } catch (const std::exception&) {
      // solver failure recorded in the row, remaining levels still run
      row.eH1 = row.eC = row.supgErr = std::numeric_limits<Real>::quiet_NaN();
    }
    result.rows.push_back(row);
  }
  result.rateH1 = fitRate(result.rows, false);
  result.rateC = fitRate(result.rows, true);
  return result;
}

std::string toCsv(const StudyResult& result)
{
  std::string out = "level,h,ndofs,eH1,eC,assemble_ms,solve_ms\n";
  char buf[256];
  for (const ConvergenceRow& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%.16e,%.16e,%.3f,%.3f\n", r.level, r.h, r.nDofs,
                  r.eH1, r.eC, r.assembleMs, r.solveMs);
    out += buf;
  }
  return out;
}

std::string toSvg(const StudyResult& result)
{
  const int W = 640, Hgt = 480, margin = 60;
  Real lxMin = 1e300, lxMax = -1e300, lyMin = 1e300, lyMax = -1e300;
  for (const ConvergenceRow& r : result.rows) {
    Real lx = std::log10(r.h);
    lxMin = std::min(lxMin, lx);
    lxMax = std::max(lxMax, lx);
    for (Real e : {r.eH1, r.eC}) {
      if (e <= 0) continue;
      Real ly = std::log10(e);
      lyMin = std::min(lyMin, ly);
      lyMax = std::max(lyMax, ly);
    }
  }
  if (lxMax - lxMin < 1e-12) lxMax = lxMin + 1;
  if (lyMax - lyMin < 1e-12) lyMax = lyMin + 1;
  auto mapX = [&](Real lx) { return margin + (lx - lxMin) / (lxMax - lxMin) * (W - 2 * margin); };
  auto mapY = [&](Real ly) {
    return Hgt - margin - (ly - lyMin) / (lyMax - lyMin) * (Hgt - 2 * margin);
  };

  char buf[512];
  std::string svg;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n", W, Hgt);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"white\" "
                "stroke=\"black\"/>\n",
                margin, margin, W - 2 * margin, Hgt - 2 * margin);
  svg += buf;

  auto polyline = [&](bool convective, const char* color) {
    std::string pts;
    for (const ConvergenceRow& r : result.rows) {
      Real e = convective ? r.eC : r.eH1;
      if (e <= 0) continue;
      std::snprintf(buf, sizeof buf, "%.1f,%.1f ", mapX(std::log10(r.h)), mapY(std::log10(e)));
      pts += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"2\"/>\n",
                  pts.c_str(), color);
    svg += buf;
  };
  polyline(false, "#1f77b4");
  polyline(true, "#d62728");

  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-size=\"14\">log10 h</text>\n", W / 2 - 20, Hgt - 20);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"15\" y=\"%d\" font-size=\"14\" transform=\"rotate(-90 15 %d)\">log10 "
                "error</text>\n",
                Hgt / 2, Hgt / 2);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-size=\"13\" fill=\"#1f77b4\">eH1 (rate "
                "%.2f)</text>\n",
                margin + 10, margin + 20, result.rateH1);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-size=\"13\" fill=\"#d62728\">eC (rate %.2f)</text>\n",
                margin + 10, margin + 38, result.rateC);
  svg += buf;
  svg += "</svg>\n";
  return svg;
}

} // namespace polyvem
