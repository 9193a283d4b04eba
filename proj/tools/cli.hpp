#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "stiefel_cayley/optim.hpp"

namespace stiefel_cayley::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitMaxIters = 3;
inline constexpr int kExitLineSearch = 4;

/// Raised by validate(); maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string subcommand;
  /// Unset means the subcommand default (quaternion for cover, real else).
  std::optional<Field> field;
  std::size_t n = 4;
  std::size_t k = 2;
  std::uint64_t seed = 0;
  double tol = kSingularTol;
  std::size_t max_iters = 5000;
  double step = 1.0;
  /// Unset means the subcommand default (20 for check, 10000 for cover).
  std::optional<std::size_t> samples;
  std::optional<std::string> out;
  bool reproducible = false;
  bool csv = false;
  /// optimize: rayleigh | procrustes
  std::string problem = "rayleigh";
  /// optimize/rayleigh: random | identity
  std::string matrix = "random";

  Field field_or(Field fallback) const { return field.value_or(fallback); }
};

/// Throws ConfigError on invalid combinations (k > n, n < 2k for cover, ...).
void validate(const RunConfig& config);

/// A builtin optimization problem, reproducible from the config seed.
struct BuiltinProblem {
  Objective objective;
  StiefelPoint x0;
  /// Rayleigh: M. Procrustes: the exact-fit frame x_hat.
  Mat data;
};
BuiltinProblem make_problem(const RunConfig& config);

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_optimize(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_cover(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_demo(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Validates and dispatches on config.subcommand; honours config.out.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace stiefel_cayley::cli
