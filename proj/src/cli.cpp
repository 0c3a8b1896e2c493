#include "qvi/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "qvi/analysis.hpp"
#include "qvi/errors.hpp"
#include "qvi/problem_io.hpp"
#include "qvi/rate.hpp"
#include "qvi/solvers.hpp"

namespace qvi::cli {
namespace {

using nlohmann::json;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QVI_SEED")) {
    std::uint64_t seed = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec == std::errc() && ptr == s.data() + s.size()) return seed;
    throw ConfigError("QVI_SEED must be a non-negative integer, got '" + std::string(s) + "'");
  }
  return 42;
}

Vector parse_point(const std::string& text, std::size_t dim) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string_view piece(text.data() + start, (comma == std::string::npos ? text.size() : comma) - start);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    if (!piece.empty() && piece.front() == '+') piece.remove_prefix(1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), x);
    if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size()) {
      throw ConfigError("--x0: '" + std::string(piece) + "' is not a number");
    }
    values.push_back(x);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (values.size() != dim) {
    throw ConfigError("--x0 has " + std::to_string(values.size()) + " entries but the problem has dimension " +
                      std::to_string(dim));
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json point_json(const Vector& x) {
  json out = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x[i]);
  return out;
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Converged: return "converged";
    case Status::Diverged: return "diverged";
    case Status::IterationCap: return "iteration_cap";
  }
  return "unknown";
}

int exit_code(Status s) {
  switch (s) {
    case Status::Converged: return kExitConverged;
    case Status::Diverged: return kExitDiverged;
    case Status::IterationCap: return kExitIterationCap;
  }
  return kExitError;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

std::string header(const char* first, std::size_t dim, const char* last) {
  std::string h = first;
  for (std::size_t i = 1; i <= dim; ++i) h += ",x" + std::to_string(i);
  return h + "," + last;
}

void write_row(std::ostream& os, const std::string& lead, const Vector& x, double last) {
  os << lead;
  for (Eigen::Index i = 0; i < x.size(); ++i) os << ',' << format_number(x[i]);
  os << ',' << format_number(last) << '\n';
}

void write_iterates_csv(const std::string& path, const SolveReport& r, std::size_t dim) {
  auto os = open_output(path);
  os << header("iter", dim, "residual") << '\n';
  for (std::size_t k = 0; k < r.iterates.size(); ++k) {
    write_row(os, std::to_string(k), r.iterates[k], k < r.residuals.size() ? r.residuals[k] : r.final_residual);
  }
}

json summary_json(const SolveReport& r, const std::string& problem, const std::string& algorithm) {
  json s;
  s["problem"] = problem;
  s["algorithm"] = algorithm;
  s["status"] = status_name(r.status());
  s["converged"] = r.converged;
  s["diverged"] = r.diverged;
  s["iterations"] = r.iterations;
  s["x_final"] = point_json(r.x_final);
  s["h_used"] = r.h_used;
  s["final_residual"] = r.final_residual;
  s["rate_estimate"] = r.rate_estimate ? json(*r.rate_estimate) : json(nullptr);
  return s;
}

int finish_solve(const SolveReport& r, const std::string& problem, const std::string& algorithm, std::size_t dim,
                 const std::string& out_path, const std::string& summary_path, std::ostream& out) {
  if (!out_path.empty()) write_iterates_csv(out_path, r, dim);
  const json s = summary_json(r, problem, algorithm);
  if (!summary_path.empty()) open_output(summary_path) << s.dump(2) << '\n';
  out << s.dump(2) << '\n';
  return exit_code(r.status());
}

std::optional<double> parse_step(const std::string& text) {
  if (text == "auto") return std::nullopt;
  double h = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), h);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("--h must be 'auto' or a number, got '" + text + "'");
  }
  return h;
}

const QviProblem& expect_qvi(const AnyProblem& p, const std::string& command) {
  if (const auto* q = std::get_if<QviProblem>(&p)) return *q;
  throw ConfigError(command + " needs a QVI problem; '" + std::get<ZeroProblem>(p).name() +
                    "' is a zero problem (use the zero command)");
}

const ZeroProblem& expect_zero(const AnyProblem& p) {
  if (const auto* z = std::get_if<ZeroProblem>(&p)) return *z;
  throw ConfigError("'" + std::get<QviProblem>(p).name() + "' is a QVI problem, not a zero problem");
}

struct Common {
  std::string problem;
  std::string x0;
  std::string out_path;
  std::string summary_path;
  double tol = 0.0;
  std::size_t max_iter = 10000;
  std::uint64_t seed = 0;
  std::size_t samples = 10000;

  SamplingPlan plan() const {
    SamplingPlan p;
    p.seed = seed;
    p.count = samples;
    return p;
  }
};

void add_problem_option(CLI::App* app, Common& c) {
  app->add_option("problem,--problem", c.problem, "problem file or builtin:NAME")->required();
}

void add_seed_options(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "sampling seed (default: $QVI_SEED or 42)");
  app->add_option("--samples", c.samples, "number of sampled pairs");
}

void print_estimate(std::ostream& out, const std::string& label, const std::optional<Estimate>& e) {
  out << label << " = ";
  if (!e) {
    out << "unavailable\n";
    return;
  }
  out << format_number(e->value) << " (" << to_string(e->source) << ", " << to_string(e->bias) << ")\n";
}

int analyze_qvi(const QviProblem& p, const std::string& which, const SamplingPlan& plan, std::ostream& out) {
  const bool all = which == "all";
  const ConstantEstimates est = estimate_constants(p, plan, /*use_declared=*/false);
  out << "problem " << p.name() << " (dim " << p.dim() << ", seed " << plan.seed << ", " << plan.count
      << " pairs)\n";
  if (all || which == "L") print_estimate(out, "L", est.L);
  if (all || which == "l") print_estimate(out, "l", est.l);
  if (all || which == "ltilde") print_estimate(out, "l_tilde", est.l_tilde);
  if (all || which == "gamma") {
    print_estimate(out, "gamma", est.gamma);
    if (p.f().is_split() && p.v().is_split() && !(p.f().is_linear() && p.v().is_linear())) {
      const Matrix w = Matrix::Identity(static_cast<Eigen::Index>(p.dim()), static_cast<Eigen::Index>(p.dim())) -
                       p.v().linear_part();
      out << "gamma[linear parts] = " << format_number(pair_modulus_linear(p.f().linear_part(), w))
          << " (spectral, linear parts only)\n";
    }
    if (est.gamma && est.l) {
      out << "gamma/(1+l)^2 = " << format_number(composition_modulus_bound(std::max(est.gamma->value, 1e-300), est.l->value))
          << " (modulus of f o (Id-v)^-1)\n";
    }
  }
  if (all || which == "pseudo") {
    const PseudoPairReport r = check_pseudo_pair(p.f(), VectorField::identity_minus(p.v()), plan);
    out << "pseudo-monotone pair: " << (r.violations == 0 ? "no violation found" : "violated") << " ("
        << r.violations << " violations, premise held on " << r.premise_held << " of " << r.pairs_checked
        << " ordered pairs)\n";
  }
  const ProblemConstants& d = p.constants();
  std::ostringstream declared;
  if (d.L) declared << " L=" << format_number(*d.L);
  if (d.l) declared << " l=" << format_number(*d.l);
  if (d.l_tilde) declared << " l_tilde=" << format_number(*d.l_tilde);
  if (d.gamma) declared << " gamma=" << format_number(*d.gamma);
  if (d.mu) declared << " mu=" << format_number(*d.mu);
  if (!declared.str().empty()) out << "declared:" << declared.str() << '\n';
  return kExitConverged;
}

int analyze_zero(const ZeroProblem& z, const std::string& which, const SamplingPlan& plan, std::ostream& out) {
  const bool all = which == "all";
  out << "problem " << z.name() << " (zero problem, dim " << z.dim() << ", seed " << plan.seed << ", " << plan.count
      << " pairs)\n";
  const VectorField w = VectorField::identity_minus(z.w_spec().displacement());
  if (all || which == "L") {
    out << "L = " << format_number(sample_lipschitz(z.f(), plan)) << " (sampled, lower bound)\n";
  }
  if (all || which == "gamma") {
    out << "gamma = " << format_number(sample_pair_modulus(z.f(), w, plan)) << " (sampled, upper bound)\n";
  }
  if (const auto a = z.w_matrix(); a && z.f().is_split() && (all || which == "l")) {
    const double inv_norm = operator_norm(a->inverse());
    const VectorField g = VectorField::split(z.f().linear_part() - *a, z.f().expressions());
    const double lg = sample_lipschitz(g, plan);
    out << "norm(A^-1) = " << format_number(inv_norm) << " (spectral, exact)\n";
    out << "L_g = " << format_number(lg) << " (sampled, lower bound) for g = f - A\n";
    out << "alpha = norm(A^-1)*L_g = " << format_number(inv_norm * lg) << " (sampled, lower bound)\n";
  }
  if (all || which == "pseudo") {
    const PseudoPairReport r = check_pseudo_pair(z.f(), w, plan);
    out << "pseudo-monotone pair: " << (r.violations == 0 ? "no violation found" : "violated") << " ("
        << r.violations << " violations)\n";
  }
  return kExitConverged;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solvers for quasi-variational inequalities with moving sets"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");
  app.set_help_all_flag("--help-all");

  Common c;
  std::string h_text = "auto";
  std::string algorithm = "alg1";
  std::string variant = "standard";
  std::string scheme = "modified";
  std::string estimate = "all";
  std::string path = "general";
  double t_end = 10.0;
  double zero_h = 1.0;
  std::string show_name;

  auto* solve = app.add_subcommand("solve", "solve a QVI (or a zero problem with --algorithm alg3)");
  add_problem_option(solve, c);
  solve->add_option("--algorithm", algorithm)->check(CLI::IsMember({"alg1", "tseng", "catchup", "alg3"}));
  solve->add_option("--tseng-variant", variant)->check(CLI::IsMember({"standard", "literal"}));
  solve->add_option("--x0", c.x0, "comma-separated start point")->required()->allow_extra_args(false);
  solve->add_option("--h", h_text, "step size or 'auto'");
  solve->add_option("--tol", c.tol, "stopping tolerance (default 1e-8)");
  solve->add_option("--max-iter", c.max_iter);
  solve->add_option("--out", c.out_path, "CSV trace of the iterates");
  solve->add_option("--summary", c.summary_path, "summary JSON file");
  add_seed_options(solve, c);

  auto* sweep = app.add_subcommand("sweep", "time-stepping of the sweeping process");
  add_problem_option(sweep, c);
  sweep->add_option("--x0", c.x0)->required();
  sweep->add_option("--h", zero_h, "time step (default 0.01)");
  sweep->add_option("--T", t_end, "final time");
  sweep->add_option("--scheme", scheme)->check(CLI::IsMember({"modified", "catchup"}));
  sweep->add_option("--out", c.out_path, "CSV trajectory");

  auto* analyze = app.add_subcommand("analyze", "estimate problem constants");
  add_problem_option(analyze, c);
  analyze->add_option("--estimate", estimate)
      ->check(CLI::IsMember({"L", "l", "ltilde", "gamma", "pseudo", "all"}));
  add_seed_options(analyze, c);

  auto* zero = app.add_subcommand("zero", "derivative-free root finding for f(x) = 0");
  add_problem_option(zero, c);
  zero->add_option("--x0", c.x0)->required();
  zero->add_option("--h", zero_h, "step size (default 1)");
  zero->add_option("--tol", c.tol, "tolerance on |f(x)| (default 1e-10)");
  zero->add_option("--max-iter", c.max_iter);
  zero->add_option("--path", path)->check(CLI::IsMember({"general", "matrix"}));
  zero->add_option("--out", c.out_path, "CSV trace of the iterates");
  zero->add_option("--summary", c.summary_path, "summary JSON file");

  auto* list = app.add_subcommand("list", "list built-in problems");
  auto* show = app.add_subcommand("show", "print a built-in problem as a problem file");
  show->add_option("name", show_name)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitConverged;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitConverged;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (solve->count("--seed") == 0 && analyze->count("--seed") == 0) c.seed = default_seed();

    if (*list) {
      for (const auto& name : builtin_names()) {
        const json doc = json::parse(builtin_text(name));
        out << name << '\t' << doc.value("description", "") << '\n';
      }
      return kExitConverged;
    }
    if (*show) {
      const std::string ref = show_name.rfind("builtin:", 0) == 0 ? show_name : "builtin:" + show_name;
      out << to_json(load_problem(ref)).dump(2) << '\n';
      return kExitConverged;
    }

    const AnyProblem problem = load_problem(c.problem);

    if (*solve) {
      SolverConfig cfg;
      cfg.h = parse_step(h_text);
      if (solve->count("--tol") != 0) cfg.tol = c.tol;
      cfg.max_iter = c.max_iter;
      cfg.record = c.out_path.empty() ? Record::Residuals : Record::Iterates;
      cfg.plan = c.plan();
      cfg.tseng_variant = variant == "literal" ? TsengVariant::Literal : TsengVariant::Standard;
      if (algorithm == "alg3") {
        const ZeroProblem& z = expect_zero(problem);
        const Vector x0 = parse_point(c.x0, z.dim());
        const SolveReport r = solve_zero_alg3(z, x0, cfg.h.value_or(1.0), cfg);
        return finish_solve(r, z.name(), algorithm, z.dim(), c.out_path, c.summary_path, out);
      }
      const QviProblem& p = expect_qvi(problem, "solve --algorithm " + algorithm);
      const Vector x0 = parse_point(c.x0, p.dim());
      SolveReport r;
      if (algorithm == "alg1") r = solve_alg1(p, x0, cfg);
      else if (algorithm == "catchup") r = solve_catching_up(p, x0, cfg);
      else r = solve_tseng(p, x0, cfg);
      return finish_solve(r, p.name(), algorithm, p.dim(), c.out_path, c.summary_path, out);
    }

    if (*sweep) {
      const QviProblem& p = expect_qvi(problem, "sweep");
      const double h = sweep->count("--h") != 0 ? zero_h : 0.01;
      const Vector x0 = parse_point(c.x0, p.dim());
      const Trajectory tr =
          sweep_trajectory(p, x0, h, t_end, scheme == "catchup" ? SweepScheme::CatchingUp : SweepScheme::Modified);
      if (!c.out_path.empty()) {
        auto os = open_output(c.out_path);
        os << header("t", p.dim(), "speed") << '\n';
        for (std::size_t k = 0; k < tr.states.size(); ++k) {
          write_row(os, format_number(tr.times[k]), tr.states[k], tr.speeds[k]);
        }
      }
      json s;
      s["problem"] = p.name();
      s["scheme"] = scheme;
      s["steps"] = tr.states.empty() ? 0 : tr.states.size() - 1;
      s["t_final"] = tr.times.empty() ? 0.0 : tr.times.back();
      s["x_final"] = point_json(tr.states.back());
      s["diverged"] = tr.diverged;
      s["final_residual"] = tr.residuals.back();
      try {
        const RateFit fit = fit_linear_rate(tr.residuals);
        s["decay_rate"] = continuous_rate(fit, h);
        s["r_squared"] = fit.r_squared;
        s["fit_points"] = fit.points;
      } catch (const DiagnosticsError& e) {
        s["decay_rate"] = nullptr;
        s["decay_note"] = e.what();
      }
      out << s.dump(2) << '\n';
      return tr.diverged ? kExitDiverged : kExitConverged;
    }

    if (*analyze) {
      SamplingPlan plan = c.plan();
      if (analyze->count("--seed") == 0) plan.seed = default_seed();
      if (const auto* q = std::get_if<QviProblem>(&problem)) return analyze_qvi(*q, estimate, plan, out);
      return analyze_zero(std::get<ZeroProblem>(problem), estimate, plan, out);
    }

    if (*zero) {
      const ZeroProblem& z = expect_zero(problem);
      SolverConfig cfg;
      cfg.tol = zero->count("--tol") != 0 ? c.tol : 1e-10;
      cfg.max_iter = c.max_iter;
      cfg.record = c.out_path.empty() ? Record::Residuals : Record::Iterates;
      const Vector x0 = parse_point(c.x0, z.dim());
      const SolveReport r =
          solve_zero_alg3(z, x0, zero_h, cfg, path == "matrix" ? Alg3Path::Matrix : Alg3Path::General);
      return finish_solve(r, z.name(), "alg3", z.dim(), c.out_path, c.summary_path, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace qvi::cli
