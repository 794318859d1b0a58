#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "circ4/report.hpp"
#include "circ4/specfile.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Classifies 4-dimensional Riemannian manifolds carrying a circulant "
      "structure into the basic almost-product classes W0..W3 and verifies "
      "the structure-tensor identities at sampled points."};

  std::string spec_path;
  app.add_option("specfile", spec_path, "manifold spec file")->required();

  int points = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::string format = "text";
  bool check_identities = true;
  auto* points_opt = app.add_option("--points", points, "number of sample points (default 50)");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (default 0)");
  auto* tol_opt = app.add_option("--tol", tol, "residual tolerance (default 1e-8)");
  app.add_option("--format", format, "output format (default text)")
      ->check(CLI::IsMember({"text", "machine"}));
  app.add_flag("--check-identities,!--no-check-identities", check_identities,
               "evaluate the identity suite at each point (default on)");

  CLI11_PARSE(app, argc, argv);

  try {
    circ4::LoadedSpec loaded = circ4::load_spec(spec_path);

    circ4::RunOptions options;
    if (points_opt->count() > 0)
      options.points = points;
    else if (loaded.points)
      options.points = *loaded.points;
    if (seed_opt->count() > 0)
      options.seed = seed;
    else if (loaded.seed)
      options.seed = *loaded.seed;
    if (tol_opt->count() > 0)
      options.tol = tol;
    else if (loaded.tol)
      options.tol = *loaded.tol;
    options.check_identities = check_identities;
    if (options.points < 1) {
      std::cerr << "error: --points must be >= 1\n";
      return 1;
    }
    if (!(options.tol > 0.0)) {
      std::cerr << "error: --tol must be positive\n";
      return 1;
    }

    const circ4::RunReport report = circ4::run(loaded.spec, options);
    std::cout << (format == "machine" ? circ4::format_machine(report)
                                      : circ4::format_text(report));
    return 0;
  } catch (const circ4::SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 1;
  } catch (const circ4::SamplingError& e) {
    std::cerr << "sampling error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
