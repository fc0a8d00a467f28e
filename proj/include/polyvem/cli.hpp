// Command implementations behind the polyvem executable: mesh generation,
// single solves against manufactured problems, and enumerated convergence
// studies driven by a flat key=value config file.

#ifndef POLYVEM_CLI_HPP
#define POLYVEM_CLI_HPP

#include "polyvem/harness.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace polyvem::cli {

struct MeshGenOptions {
  std::string type = "quad";
  int n = 8;        // quad/tria resolution
  int seeds = 64;   // voro/rand seed count
  int lloyd = 100;  // voro Lloyd sweeps
  Real perturb = 0.2;
  std::uint64_t rng = 42;
  std::string output;
};

int runMeshGen(const MeshGenOptions& opts, std::string& message);

struct SolveOptions {
  std::string meshFile;
  int k = 1;
  Real epsilon = 1e-3;
  std::string form = "bounSkew";
  bool supg = true;
  std::string stab = "dofiDofi";
  Real tauSafety = 0.5;
  Real tol = 1e-12;
  std::string problem = "sine"; // sine | patch
  int patchPx = 1;
  int patchPy = 0;
  std::string dumpDofs; // optional path
};

int runSolve(const SolveOptions& opts, std::string& message);

struct ConvOptions {
  std::string configFile;
  std::map<std::string, std::string> overrides; // flag overrides of file keys
};

int runConv(const ConvOptions& opts, std::string& message);

/// Parse a flat key=value config (comments with '#', blank lines ignored).
std::map<std::string, std::string> parseConfig(const std::string& text);

StabKind stabKindFromString(const std::string& name);

} // namespace polyvem::cli

#endif
