#include "polyvem/cli.hpp"

#include "polyvem/system.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace polyvem::cli {

namespace {

std::string readFile(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::vector<std::string> splitList(const std::string& s)
{
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

} // namespace

StabKind stabKindFromString(const std::string& name)
{
  if (name == "dofiDofi") return StabKind::DofiDofi;
  if (name == "dRecipe") return StabKind::DRecipe;
  throw std::invalid_argument("unknown stabilization: " + name);
}

int runMeshGen(const MeshGenOptions& opts, std::string& message)
{
  PolyMesh mesh;
  if (opts.type == "quad") {
    mesh = genQuad(opts.n);
  } else if (opts.type == "tria") {
    mesh = genTria(opts.n, opts.perturb, opts.rng);
  } else if (opts.type == "voro") {
    mesh = genVoronoi(opts.seeds, opts.lloyd, opts.rng);
  } else if (opts.type == "rand") {
    mesh = genVoronoi(opts.seeds, 0, opts.rng);
  } else {
    throw std::invalid_argument("unknown mesh type: " + opts.type);
  }
  if (opts.output.empty()) throw std::invalid_argument("mesh gen: no output path");
  writeFile(opts.output, writeMesh(mesh));
  MeshQualityReport audit = auditMesh(mesh);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "wrote %s: %d vertices, %d cells, h=%.6g, min edge ratio %.4f, min star ratio "
                "%.4f\n",
                opts.output.c_str(), mesh.nVertices(), mesh.nCells(), mesh.h,
                audit.minEdgeRatio, audit.minStarRatio);
  message += buf;
  return 0;
}

int runSolve(const SolveOptions& opts, std::string& message)
{
  PolyMesh mesh = readMesh(readFile(opts.meshFile));
  ManufacturedCase mc = opts.problem == "patch" ? patchCase(opts.epsilon, opts.patchPx, opts.patchPy)
                                                : sineCase(opts.epsilon);
  if (opts.problem != "patch" && opts.problem != "sine")
    throw std::invalid_argument("unknown problem: " + opts.problem);
  ProblemSpec spec = mc.problem(convectionFormFromString(opts.form), opts.supg, opts.tauSafety,
                                stabKindFromString(opts.stab));

  LinearSystem sys = assemble(mesh, opts.k, spec);
  applyDirichlet(sys, mesh, spec.dirichlet);
  SolveResult sol = solve(sys, opts.tol);

  std::vector<Real> tau = methodTau(mesh, opts.k, spec.beta, opts.epsilon, opts.tauSafety);
  Real eH1 = errorH1(mesh, opts.k, sol.solution, mc);
  Real eC = errorConvective(mesh, opts.k, sol.solution, mc, tau);

  char buf[256];
  std::snprintf(buf, sizeof buf, "ndofs %d\neH1 %.12e\neC %.12e\nresidual %.3e\n",
                sys.dofMap.nGlobal, eH1, eC, sol.residual);
  message += buf;

  if (!opts.dumpDofs.empty()) {
    std::string dump;
    char line[64];
    for (int i = 0; i < sol.solution.size(); ++i) {
      std::snprintf(line, sizeof line, "%.17g\n", sol.solution[i]);
      dump += line;
    }
    writeFile(opts.dumpDofs, dump);
  }
  return 0;
}

std::map<std::string, std::string> parseConfig(const std::string& text)
{
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r");
      size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

int runConv(const ConvOptions& opts, std::string& message)
{
  if (opts.configFile.empty()) throw std::invalid_argument("conv: no config file");
  auto kv = parseConfig(readFile(opts.configFile));
  for (const auto& [key, value] : opts.overrides) kv[key] = value;
  if (kv.empty()) throw std::invalid_argument("conv: empty config");

  auto get = [&kv](const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };

  std::vector<std::string> families = splitList(get("families", "quad"));
  std::vector<std::string> ks = splitList(get("ks", "1"));
  std::vector<std::string> epss = splitList(get("epss", "1e-3"));
  std::vector<std::string> forms = splitList(get("forms", "bounSkew"));
  bool supg = get("supg", "on") == "on";
  StabKind stab = stabKindFromString(get("stab", "dofiDofi"));
  Real tauSafety = std::stod(get("tauSafety", "0.5"));
  Real tol = std::stod(get("tol", "1e-12"));
  std::uint64_t seed = std::stoull(get("seed", "42"));
  std::string outdir = get("outdir", ".");
  bool svg = get("svg", "off") == "on";

  std::filesystem::create_directories(outdir);

  for (const std::string& familyName : families) {
    MeshFamily family = meshFamilyFromString(familyName);
    std::vector<int> levels;
    std::string levelsKey =
        (family == MeshFamily::Quad || family == MeshFamily::Tria) ? "levels" : "seeds";
    for (const std::string& s : splitList(get(levelsKey, "")))
      levels.push_back(std::stoi(s));
    if (levels.empty()) levels = defaultLevels(family);

    // meshes are shared by every study on this family
    std::vector<PolyMesh> meshes;
    meshes.reserve(levels.size());
    for (int lvl : levels) meshes.push_back(makeFamilyMesh(family, lvl, seed));

    for (const std::string& ksName : ks) {
      for (const std::string& epsName : epss) {
        for (const std::string& formName : forms) {
          StudyConfig config;
          config.family = family;
          config.levels = levels;
          config.k = std::stoi(ksName);
          config.epsilon = std::stod(epsName);
          config.form = convectionFormFromString(formName);
          config.supg = supg;
          config.stab = stab;
          config.tauSafety = tauSafety;
          config.solverTol = tol;
          config.rngSeed = seed;

          StudyResult result = runConvergence(config, &meshes);
          std::string base = outdir + "/" + familyName + "_k" + ksName + "_eps" + epsName + "_" +
                             formName + (supg ? "" : "_none");
          writeFile(base + ".csv", toCsv(result));
          if (svg) writeFile(base + ".svg", toSvg(result));

          char buf[256];
          std::snprintf(buf, sizeof buf,
                        "%s k=%s eps=%s %s%s: rate(eH1)=%.3f rate(eC)=%.3f -> %s.csv\n",
                        familyName.c_str(), ksName.c_str(), epsName.c_str(), formName.c_str(),
                        supg ? "" : " NONE", result.rateH1, result.rateC, base.c_str());
          message += buf;
        }
      }
    }
  }
  return 0;
}

} // namespace polyvem::cli
