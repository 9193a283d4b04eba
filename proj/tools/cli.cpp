#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "stiefel_cayley/cover.hpp"
#include "stiefel_cayley/serialize.hpp"

namespace stiefel_cayley::cli {

namespace {

constexpr std::size_t kDefaultCheckSamples = 20;
constexpr std::size_t kDefaultCoverSamples = 10000;

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void stamp(json& j, const RunConfig& config) {
  if (!config.reproducible) j["timestamp"] = utc_timestamp();
}

// One invariant of the check suite: the largest residual over all samples
// must stay at or below the threshold.
struct Property {
  std::string name;
  double threshold = 0.0;
  double max_residual = 0.0;
  std::size_t evaluated = 0;

  void record(double residual) {
    // NaN must fail the property, so compare the negation.
    if (!(residual <= max_residual)) max_residual = residual;
    ++evaluated;
  }
  bool pass() const { return max_residual <= threshold; }
};

class CheckSuite {
 public:
  CheckSuite(const RunConfig& config)
      : field_(config.field_or(Field::Real)),
        n_(config.n),
        k_(config.k),
        seed_(config.seed),
        tol_(config.tol) {}

  std::vector<Property> run(std::size_t samples) {
    std::vector<Property> props;
    auto add = [&](std::string name, double threshold,
                   const std::function<void(Property&, std::size_t)>& body) {
      Property p{std::move(name), threshold};
      for (std::size_t s = 0; s < samples; ++s) body(p, s);
      props.push_back(std::move(p));
    };

    add("inverse_residual", 1e-10, [&](Property& p, std::size_t s) {
      const Mat m = random_gaussian(n_, n_, field_, draw(s, 0));
      if (!is_invertible(m, tol_)) return;
      const Mat id = Mat::identity(field_, n_);
      p.record(frobenius_norm(m * mat_inverse(m, tol_) - id) /
               std::max(1.0, frobenius_norm(m)));
    });
    add("adjoint_antihomomorphism", 1e-12, [&](Property& p, std::size_t s) {
      const Mat a = random_gaussian(n_, k_, field_, draw(s, 1));
      const Mat b = random_gaussian(k_, n_, field_, draw(s, 2));
      p.record(frobenius_norm((a * b).adjoint() - b.adjoint() * a.adjoint()));
    });
    add("cayley_involution", 1e-9, [&](Property& p, std::size_t s) {
      const Mat m = random_skew(n_, draw(s, 3));
      p.record(frobenius_norm(
          cayley_at_identity(cayley_at_identity(m, tol_), tol_) - m));
    });
    add("cayley_group_membership", 1e-10, [&](Property& p, std::size_t s) {
      p.record(unitarity_residual(
          cayley_at_identity(random_skew(n_, draw(s, 3)), tol_)));
    });
    add("block_two_route", 1e-11, [&](Property& p, std::size_t s) {
      const SkewBlockTangent t(
          random_gaussian(n_ - k_, k_, field_, draw(s, 4)),
          random_skew(k_, draw(s, 5)));
      p.record(frobenius_norm(cayley_identity_block(t, tol_).matrix() -
                              cayley_at_identity(t.as_matrix(), tol_)));
    });
    add("cayley_inverse_pair", 1e-9, [&](Property& p, std::size_t s) {
      const GroupElement a = random_group_element(n_, field_, draw(s, 6));
      const Mat w = a.matrix() * random_skew(n_, draw(s, 7));
      const Mat image = cayley_at(a, w, tol_);
      p.record(frobenius_norm(cayley_at(a.inverse(), image, tol_) - w));
    });
    add("b_invertible_failures", 0.0, [&](Property& p, std::size_t s) {
      const Mat x = random_gaussian(n_ - k_, k_, field_, draw(s, 4));
      const Mat y = random_skew(k_, draw(s, 5));
      const Mat inner = Mat::identity(field_, k_) + x.adjoint() * x + y;
      p.record(is_invertible(inner, tol_) ? 0.0 : 1.0);
    });
    add("commuting_square", 1e-11, [&](Property& p, std::size_t s) {
      const TangentCoords t = random_config(s);
      const Mat via_group =
          cayley_at(t.lift().group_element(), t.horizontal(), tol_)
              .right_cols(k_);
      p.record(frobenius_norm(gamma(t, tol_).matrix() - via_group));
    });
    add("gamma_inverse_after_gamma", 1e-9, [&](Property& p, std::size_t s) {
      const TangentCoords t = random_config(s);
      if (!in_injectivity_domain(t, tol_)) return;
      const TangentCoords back = gamma_inverse(t.lift(), gamma(t, tol_), tol_);
      p.record(frobenius_norm(back.x() - t.x()) +
               frobenius_norm(back.y() - t.y()));
    });
    add("gamma_after_gamma_inverse", 1e-9, [&](Property& p, std::size_t s) {
      const Lift lift = random_lift(s);
      const StiefelPoint y = random_stiefel_point(n_, k_, field_, draw(s, 10));
      if (!in_cayley_open(lift.point(), y, tol_)) return;
      p.record(frobenius_norm(
          gamma(gamma_inverse(lift, y, tol_), tol_).matrix() - y.matrix()));
    });
    add("lift_equivariance", 1e-10, [&](Property& p, std::size_t s) {
      const TangentCoords t = random_config(s);
      const GroupElement e = random_group_element(n_ - k_, field_, draw(s, 11));
      p.record(lift_change_equivariance_check(t.lift(), e, t));
    });
    add("injectivity_lift_independence_mismatches", 0.0,
        [&](Property& p, std::size_t s) {
          const TangentCoords t = random_config(s);
          const GroupElement e =
              random_group_element(n_ - k_, field_, draw(s, 11));
          const TangentCoords moved(t.lift().right_translate(e),
                                    e.matrix().adjoint() * t.x(), t.y());
          p.record(in_injectivity_domain(t, tol_) ==
                           in_injectivity_domain(moved, tol_)
                       ? 0.0
                       : 1.0);
        });
    add("section_identity", 1e-9, [&](Property& p, std::size_t s) {
      const Lift lift = random_lift(s);
      const StiefelPoint y = random_stiefel_point(n_, k_, field_, draw(s, 10));
      if (!in_cayley_open(lift.point(), y, tol_)) return;
      const GroupElement sec = local_section(lift, y, tol_);
      p.record(std::max(
          frobenius_norm(sec.matrix().right_cols(k_) - y.matrix()),
          unitarity_residual(sec.matrix())));
    });
    add("homotopy_endpoints", 1e-9, [&](Property& p, std::size_t s) {
      const Lift lift = random_lift(s);
      const StiefelPoint y = random_stiefel_point(n_, k_, field_, draw(s, 10));
      if (!in_cayley_open(lift.point(), y, tol_)) return;
      const Mat base = lift.matrix().adjoint().right_cols(k_);
      p.record(std::max(
          frobenius_norm(contraction(lift, y, 0.0, tol_).matrix() - base),
          frobenius_norm(contraction(lift, y, 1.0, tol_).matrix() -
                         y.matrix())));
    });
    add("homotopy_orthonormality", 1e-10, [&](Property& p, std::size_t s) {
      const Lift lift = random_lift(s);
      const StiefelPoint y = random_stiefel_point(n_, k_, field_, draw(s, 10));
      if (!in_cayley_open(lift.point(), y, tol_)) return;
      for (double t : {0.25, 0.5, 0.75})
        p.record(orthonormality_residual(
            contraction(lift, y, t, tol_).matrix()));
    });
    add("differential_finite_difference", 1e-7,
        [&](Property& p, std::size_t s) {
          const TangentCoords t = random_config(s);
          const Mat m = random_gaussian(n_ - k_, k_, field_, draw(s, 12));
          const Mat nn = random_skew(k_, draw(s, 13));
          const Mat analytic = gamma_differential(t, m, nn, tol_);
          constexpr double h = 1e-5;
          const TangentCoords w(t.lift(), m, nn);
          const Mat fd = (1.0 / (2.0 * h)) *
                         (gamma(t + w.scaled(h), tol_).matrix() -
                          gamma(t + w.scaled(-h), tol_).matrix());
          p.record(frobenius_norm(analytic - fd) /
                   (1.0 + frobenius_norm(analytic)));
        });
    return props;
  }

 private:
  std::uint64_t draw(std::size_t sample, std::uint64_t stream) const {
    return derive_seed(seed_, sample * 64 + stream);
  }
  Mat random_skew(std::size_t k, std::uint64_t seed) const {
    return skew_hermitian_part(random_gaussian(k, k, field_, seed));
  }
  Lift random_lift(std::size_t s) const {
    return complete_lift(random_stiefel_point(n_, k_, field_, draw(s, 8)));
  }
  TangentCoords random_config(std::size_t s) const {
    return random_tangent(random_lift(s), draw(s, 9));
  }

  Field field_;
  std::size_t n_;
  std::size_t k_;
  std::uint64_t seed_;
  double tol_;
};

void write_json_document(std::ostream& os, const json& j) {
  os << j.dump(2) << '\n';
}

}  // namespace

void validate(const RunConfig& config) {
  const std::string& sub = config.subcommand;
  if (sub != "check" && sub != "optimize" && sub != "cover" && sub != "demo")
    throw ConfigError("unknown subcommand '" + sub + "'");
  if (config.n == 0) throw ConfigError("--n must be at least 1");
  if (config.k > config.n)
    throw ConfigError("--k must not exceed --n (got k = " +
                      std::to_string(config.k) +
                      ", n = " + std::to_string(config.n) + ")");
  if (!(config.tol > 0.0 && config.tol < 1.0))
    throw ConfigError("--tol must lie in (0, 1)");
  if (!(config.step > 0.0)) throw ConfigError("--step must be positive");
  if (sub == "cover") {
    if (config.n < 2 * config.k)
      throw ConfigError("cover needs n >= 2k (got n = " +
                        std::to_string(config.n) +
                        ", k = " + std::to_string(config.k) + ")");
  }
  if (sub == "optimize") {
    if (config.problem != "rayleigh" && config.problem != "procrustes")
      throw ConfigError("--problem must be rayleigh or procrustes");
    if (config.matrix != "random" && config.matrix != "identity")
      throw ConfigError("--matrix must be random or identity");
    if (config.k == 0) throw ConfigError("optimize needs k >= 1");
  }
  if (sub == "check" && config.samples && *config.samples == 0)
    throw ConfigError("check needs --samples >= 1");
}

BuiltinProblem make_problem(const RunConfig& config) {
  const Field field = config.field_or(Field::Real);
  const std::size_t n = config.n;
  const std::size_t k = config.k;
  StiefelPoint x0 =
      random_stiefel_point(n, k, field, derive_seed(config.seed, 1));
  if (config.problem == "procrustes") {
    // k x 3k keeps B B^* well conditioned, so the fit converges quickly.
    const Mat b = random_gaussian(k, 3 * k, field, derive_seed(config.seed, 2));
    const StiefelPoint target =
        random_stiefel_point(n, k, field, derive_seed(config.seed, 3));
    return {procrustes_objective(b, target.matrix() * b), std::move(x0),
            target.matrix()};
  }
  Mat m = config.matrix == "identity"
              ? Mat::identity(field, n)
              : hermitian_part(
                    random_gaussian(n, n, field, derive_seed(config.seed, 0)));
  return {rayleigh_objective(m), std::move(x0), m};
}

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::size_t samples = config.samples.value_or(kDefaultCheckSamples);
  std::vector<Property> props;
  try {
    props = CheckSuite(config).run(samples);
  } catch (const Error& e) {
    err << "check: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  bool all_pass = true;
  json list = json::array();
  for (const Property& p : props) {
    all_pass = all_pass && p.pass();
    list.push_back({{"name", p.name},
                    {"max_residual", p.max_residual},
                    {"threshold", p.threshold},
                    {"evaluated", p.evaluated},
                    {"pass", p.pass()}});
    if (!p.pass())
      err << "check: property " << p.name << " failed (" << p.max_residual
          << " > " << p.threshold << ")\n";
  }
  json doc{{"command", "check"},
           {"field", std::string(to_string(config.field_or(Field::Real)))},
           {"n", config.n},
           {"k", config.k},
           {"seed", config.seed},
           {"samples", samples},
           {"properties", std::move(list)},
           {"pass", all_pass}};
  stamp(doc, config);
  write_json_document(out, doc);
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_optimize(const RunConfig& config, std::ostream& out,
                 std::ostream& err) {
  const BuiltinProblem problem = make_problem(config);
  SearchParams params;
  params.initial_step = config.step;
  params.max_iters = config.max_iters;
  const OptimTrace trace =
      gradient_descent(problem.objective, problem.x0, params);
  if (config.csv) {
    write_trace_csv(out, trace);
  } else {
    write_trace_jsonl(out, trace);
  }
  switch (trace.reason) {
    case Termination::Converged: return kExitOk;
    case Termination::MaxIters:
      err << "optimize: max_iters reached, gnorm " << trace.final().gnorm
          << '\n';
      return kExitMaxIters;
    case Termination::LineSearchFailed:
      err << "optimize: line search failed at iteration "
          << trace.final().iter << '\n';
      return kExitLineSearch;
  }
  return kExitMaxIters;
}

int cmd_cover(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Field field = config.field_or(Field::Quaternion);
  const ThetaLadder ladder = ThetaLadder::evenly_spaced(config.k);
  const CoverReport report =
      verify_cover(config.n, config.k, field, ladder,
                   config.samples.value_or(kDefaultCoverSamples), config.seed,
                   config.tol);
  json doc = to_json(report);
  doc["exploratory"] = field != Field::Quaternion;
  stamp(doc, config);
  write_json_document(out, doc);
  if (field != Field::Quaternion) return kExitOk;
  if (report.uncovered != 0) {
    err << "cover: " << report.uncovered << " uncovered samples\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_demo(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Field field = config.field_or(Field::Real);
  const std::size_t n = config.n;
  const std::size_t k = config.k;
  try {
    const StiefelPoint x =
        random_stiefel_point(n, k, field, derive_seed(config.seed, 0));
    const Lift lift = complete_lift(x);
    const TangentCoords v = random_tangent(lift, derive_seed(config.seed, 1), 0.5);
    const Mat gamma_zero = gamma(TangentCoords::zero(lift), config.tol).matrix();
    const Mat anchor = vstack(lift.beta().adjoint(), lift.bottom().adjoint());
    const StiefelPoint y = gamma(v, config.tol);
    const bool injective = in_injectivity_domain(v, config.tol);

    json doc{{"command", "demo"},
             {"field", std::string(to_string(field))},
             {"n", n},
             {"k", k},
             {"seed", config.seed},
             {"x", to_json(x)},
             {"lift", to_json(lift)},
             {"tangent", {{"X", to_json(v.x())}, {"Y", to_json(v.y())}}},
             {"gamma_zero", to_json(gamma_zero)},
             {"gamma_zero_anchor_residual",
              frobenius_norm(gamma_zero - anchor)},
             {"gamma", to_json(y)},
             {"in_injectivity_domain", injective}};

    out << "Cayley transform demo over " << to_string(field) << ", n = " << n
        << ", k = " << k << ", seed = " << config.seed << "\n";
    out << "  lift residual ||AA* - I||         "
        << unitarity_residual(lift.matrix()) << "\n";
    out << "  ||gamma(0) - [beta*; P*]||         "
        << frobenius_norm(gamma_zero - anchor) << "\n";
    if (injective && in_cayley_open(x, y, config.tol)) {
      const TangentCoords back = gamma_inverse(lift, y, config.tol);
      const double round_trip =
          frobenius_norm(back.x() - v.x()) + frobenius_norm(back.y() - v.y());
      const GroupElement sec = local_section(lift, y, config.tol);
      const double section_res =
          frobenius_norm(sec.matrix().right_cols(k) - y.matrix());
      const double h0 = frobenius_norm(
          contraction(lift, y, 0.0, config.tol).matrix() - anchor);
      const double h1 = frobenius_norm(
          contraction(lift, y, 1.0, config.tol).matrix() - y.matrix());
      doc["round_trip_residual"] = round_trip;
      doc["section_residual"] = section_res;
      doc["homotopy_t0_residual"] = h0;
      doc["homotopy_t1_residual"] = h1;
      out << "  gamma_inverse(gamma(v)) - v        " << round_trip << "\n";
      out << "  ||rho(s(y)) - y||                  " << section_res << "\n";
      out << "  ||H(y,0) - [beta*; P*]||           " << h0 << "\n";
      out << "  ||H(y,1) - y||                     " << h1 << "\n";
    } else {
      out << "  v lies outside the injectivity domain; no inverse shown\n";
    }
    stamp(doc, config);
    write_json_document(out, doc);
  } catch (const Error& e) {
    err << "demo: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  std::ofstream file;
  std::ostream* sink = &out;
  if (config.out) {
    file.open(*config.out);
    if (!file) {
      err << "error: cannot open " << *config.out << " for writing\n";
      return kExitConfig;
    }
    sink = &file;
  }
  const std::string& sub = config.subcommand;
  if (sub == "check") return cmd_check(config, *sink, err);
  if (sub == "optimize") return cmd_optimize(config, *sink, err);
  if (sub == "cover") return cmd_cover(config, *sink, err);
  return cmd_demo(config, *sink, err);
}

}  // namespace stiefel_cayley::cli
