// stiefel-cayley: demos, invariant checks, optimization benchmarks and cover
// verification for the Cayley transform on Stiefel manifolds.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "cli.hpp"

namespace sc = stiefel_cayley;

namespace {

void add_common(CLI::App* app, sc::cli::RunConfig& cfg, std::string& field) {
  app->add_option("--field", field, "Base ring")
      ->check(CLI::IsMember({"real", "complex", "quaternion"}));
  app->add_option("--n", cfg.n, "Ambient dimension n")->capture_default_str();
  app->add_option("--k", cfg.k, "Frame size k")->capture_default_str();
  app->add_option("--seed", cfg.seed, "Seed for all randomness")
      ->capture_default_str();
  app->add_option("--tol", cfg.tol, "Relative singularity tolerance")
      ->capture_default_str();
  app->add_option("--out", cfg.out, "Write output to this file");
  app->add_flag("--reproducible", cfg.reproducible,
                "Suppress the timestamp field");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cayley transform on real, complex and quaternionic Stiefel "
               "manifolds"};
  app.require_subcommand(1);
  sc::cli::RunConfig cfg;
  std::string field;

  auto* check = app.add_subcommand(
      "check", "Run the group/Stiefel invariant suites (default field real)");
  add_common(check, cfg, field);
  check->add_option("--samples", cfg.samples, "Samples per property (20)");

  auto* optimize = app.add_subcommand(
      "optimize", "Cayley curvilinear search on a builtin problem; writes a "
                  "JSON-lines trace");
  add_common(optimize, cfg, field);
  optimize->add_option("--problem", cfg.problem, "rayleigh | procrustes")
      ->capture_default_str();
  optimize->add_option("--matrix", cfg.matrix,
                       "Rayleigh matrix: random | identity")
      ->capture_default_str();
  optimize->add_option("--max-iters", cfg.max_iters, "Iteration cap")
      ->capture_default_str();
  optimize->add_option("--step", cfg.step, "Initial Armijo step")
      ->capture_default_str();
  optimize->add_flag("--csv", cfg.csv, "Write the trace as CSV");

  auto* cover = app.add_subcommand(
      "cover", "Empirical check of the theta-frame Cayley cover (default "
               "field quaternion)");
  add_common(cover, cfg, field);
  cover->add_option("--samples", cfg.samples, "Random samples (10000)");

  auto* demo = app.add_subcommand(
      "demo", "Worked round trip: lift, gamma, inverse, section, homotopy");
  add_common(demo, cfg, field);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sc::cli::kExitConfig;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (!field.empty()) cfg.field = sc::parse_field(field);
  try {
    return sc::cli::run(cfg, std::cout, std::cerr);
  } catch (const sc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sc::cli::kExitCheckFailed;
  }
}
