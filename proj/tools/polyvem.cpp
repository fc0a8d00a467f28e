// polyvem: mesh generation, single solves and convergence studies for the
// SUPG-stabilized virtual element solver.

#include "polyvem/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
  CLI::App app{"SUPG-stabilized virtual element solver on polygonal meshes"};
  app.require_subcommand(1);

  polyvem::cli::MeshGenOptions meshOpts;
  CLI::App* mesh = app.add_subcommand("mesh", "mesh utilities");
  mesh->require_subcommand(1);
  CLI::App* gen = mesh->add_subcommand("gen", "generate a mesh file");
  gen->add_option("--type", meshOpts.type, "quad | tria | voro | rand")
      ->check(CLI::IsMember({"quad", "tria", "voro", "rand"}));
  gen->add_option("--n", meshOpts.n, "resolution for quad/tria")->check(CLI::PositiveNumber);
  gen->add_option("--seeds", meshOpts.seeds, "seed count for voro/rand")
      ->check(CLI::PositiveNumber);
  gen->add_option("--lloyd", meshOpts.lloyd, "Lloyd sweeps for voro")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--perturb", meshOpts.perturb, "tria jitter in [0, 0.3)");
  gen->add_option("--rng", meshOpts.rng, "random seed");
  gen->add_option("-o,--output", meshOpts.output, "output path")->required();

  polyvem::cli::SolveOptions solveOpts;
  CLI::App* solve = app.add_subcommand("solve", "solve a manufactured problem on a mesh file");
  solve->add_option("--mesh", solveOpts.meshFile, "interchange mesh file")->required();
  solve->add_option("--k", solveOpts.k, "polynomial order")->check(CLI::PositiveNumber);
  solve->add_option("--eps", solveOpts.epsilon, "diffusion coefficient");
  solve->add_option("--form", solveOpts.form, "orig | boun | origSkew | bounSkew");
  solve->add_option("--supg", solveOpts.supg, "SUPG stabilization on/off")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, bool>{{"on", true}, {"off", false}}, CLI::ignore_case));
  solve->add_option("--stab", solveOpts.stab, "dofiDofi | dRecipe");
  solve->add_option("--tau-safety", solveOpts.tauSafety, "SUPG parameter safety factor");
  solve->add_option("--tol", solveOpts.tol, "solver residual tolerance");
  solve->add_option("--case", solveOpts.problem, "sine | patch");
  solve->add_option("--patch-px", solveOpts.patchPx, "patch monomial x power");
  solve->add_option("--patch-py", solveOpts.patchPy, "patch monomial y power");
  solve->add_option("--dump-dofs", solveOpts.dumpDofs, "write the solution DoF vector");

  polyvem::cli::ConvOptions convOpts;
  std::map<std::string, std::string> convFlags;
  CLI::App* conv = app.add_subcommand("conv", "run convergence studies from a config file");
  conv->add_option("--config", convOpts.configFile, "flat key=value config")->required();
  for (const char* key : {"families", "levels", "seeds", "ks", "epss", "forms", "supg", "stab",
                          "tauSafety", "tol", "seed", "outdir", "svg"})
    conv->add_option(std::string("--") + key, convFlags[key], "override config key");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1; // usage errors exit 1
  }

  try {
    std::string message;
    int rc = 0;
    if (gen->parsed()) {
      rc = polyvem::cli::runMeshGen(meshOpts, message);
    } else if (solve->parsed()) {
      rc = polyvem::cli::runSolve(solveOpts, message);
    } else if (conv->parsed()) {
      for (const auto& [key, value] : convFlags)
        if (!value.empty()) convOpts.overrides[key] = value;
      rc = polyvem::cli::runConv(convOpts, message);
    }
    std::cout << message;
    return rc;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
