// cvxorder: convex-order tests, V estimates, parameter sweeps and calendar
// spread construction for discrete measures.
//
// Exit codes: 0 ordered / success, 2 not ordered, 3 inconclusive,
// 64 usage or input errors, 70 solver failures.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvxorder/arbitrage.hpp"
#include "cvxorder/convex_order.hpp"
#include "cvxorder/errors.hpp"
#include "cvxorder/io.hpp"
#include "cvxorder/oracles.hpp"
#include "cvxorder/ot.hpp"
#include "cvxorder/svg.hpp"

namespace {

using namespace cvxorder;
using io::Json;

constexpr int kExitOrdered = 0;
constexpr int kExitNotOrdered = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitUsage = 64;
constexpr int kExitSolver = 70;

struct InputArgs {
  std::string mu_path, nu_path;
  std::string example;
  double param = 0.0;
  std::size_t n = 500;
  std::size_t dim = 1;
  bool independent = false;
  bool no_center = false;
};

struct SearchArgs {
  std::string method = "indirect-hist";
  std::size_t g = 21;
  std::size_t budget = 100;
  std::size_t atoms = 20;
  std::optional<double> epsilon;
  bool no_oracle = false;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CVXORDER_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidInput("CVXORDER_SEED is not an unsigned integer");
    }
  }
  return 0;
}

ExampleFamily parse_family(const std::string& name) {
  if (name == "gauss" || name == "gauss_sampled") return ExampleFamily::GaussSampled;
  if (name == "two_point") return ExampleFamily::TwoPoint;
  if (name == "four_point") return ExampleFamily::FourPoint;
  throw InvalidInput("unknown example family '" + name + "' (gauss, two_point, four_point)");
}

Method parse_method(const std::string& name) {
  if (name == "indirect-hist") return Method::IndirectHistogram;
  if (name == "indirect-samples") return Method::IndirectSamples;
  if (name == "direct") return Method::Direct;
  throw InvalidInput("unknown method '" + name + "' (indirect-hist, indirect-samples, direct)");
}

void check_param_range(ExampleFamily f, double p) {
  if (f == ExampleFamily::GaussSampled && !(p >= 0.0 && p <= 2.0)) {
    throw InvalidInput("sigma must lie in [0, 2]");
  }
  if (f != ExampleFamily::GaussSampled && !(p >= -1.0 && p <= 1.0)) {
    throw InvalidInput("s must lie in [-1, 1]");
  }
}

ExampleSpec example_spec(const InputArgs& in, double param, std::uint64_t seed) {
  ExampleSpec spec;
  spec.family = parse_family(in.example);
  spec.param = param;
  spec.n = in.n;
  spec.dim = spec.family == ExampleFamily::FourPoint ? 2 : in.dim;
  spec.seed = seed;
  spec.center = !in.no_center;
  spec.shared_draws = !in.independent;
  check_param_range(spec.family, param);
  return spec;
}

std::pair<DiscreteMeasure, DiscreteMeasure> load_inputs(const InputArgs& in, std::uint64_t seed) {
  if (!in.example.empty()) return make_example(example_spec(in, in.param, seed));
  if (in.mu_path.empty() || in.nu_path.empty()) {
    throw InvalidInput("provide --mu and --nu files, or --example");
  }
  return {io::load_measure(in.mu_path), io::load_measure(in.nu_path)};
}

EstimateOptions estimate_options(const SearchArgs& s, std::uint64_t seed) {
  EstimateOptions o;
  o.grid_size = s.g;
  o.budget = s.budget;
  o.atoms = s.atoms;
  o.seed = seed;
  o.epsilon = s.epsilon;
  o.use_oracle = !s.no_oracle;
  return o;
}

void add_input_options(CLI::App* cmd, InputArgs& in) {
  cmd->add_option("--mu", in.mu_path, "Measure file for mu (.json or .csv)");
  cmd->add_option("--nu", in.nu_path, "Measure file for nu (.json or .csv)");
  cmd->add_option("--example", in.example, "Example family: gauss, two_point, four_point");
  cmd->add_option("--param", in.param, "sigma (gauss) or s (two_point, four_point)");
  cmd->add_option("-n,--n,--samples", in.n, "Sample count for gauss")->check(CLI::PositiveNumber);
  cmd->add_option("--dim", in.dim, "Dimension for gauss")->check(CLI::PositiveNumber);
  cmd->add_flag("--independent", in.independent, "gauss: draw mu and nu independently");
  cmd->add_flag("--no-center", in.no_center, "gauss: keep raw (uncentered) draws");
}

void add_search_options(CLI::App* cmd, SearchArgs& s) {
  cmd->add_option("--method", s.method, "indirect-hist, indirect-samples or direct");
  cmd->add_option("-g,--grid", s.g, "Grid points of the unit ball (indirect methods)");
  cmd->add_option("-N,--budget", s.budget, "Cap on objective evaluations");
  cmd->add_option("-m,--atoms", s.atoms, "Atoms per candidate (direct method)");
  cmd->add_option("--epsilon", s.epsilon, "Decision threshold; default 1e-6 (1 + M2(mu) + M2(nu))");
  cmd->add_flag("--no-oracle", s.no_oracle, "Do not consult an exact oracle for the verdict");
}

std::string oracle_name(const ConvexOrderReport& r) {
  if (!r.oracle) return "n/a";
  return r.oracle->ordered ? "ordered" : "not_ordered";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Ordered:
      return kExitOrdered;
    case Verdict::NotOrdered:
      return kExitNotOrdered;
    case Verdict::Inconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

int run_check(const InputArgs& in, const SearchArgs& s, std::uint64_t seed, bool json) {
  const auto [mu, nu] = load_inputs(in, seed);
  const auto rep = estimate_v(mu, nu, parse_method(s.method), estimate_options(s, seed));
  const double easy = check_easy_bound(mu, nu);
  if (json) {
    Json j = io::report_to_json(rep);
    j["easy_bound_slack"] = easy;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "verdict: " << to_string(rep.verdict) << "\n"
              << "v_hat: " << io::format_double(rep.v_hat) << "\n"
              << "epsilon: " << io::format_double(rep.epsilon) << "\n"
              << "method: " << to_string(rep.method) << "\n"
              << "evaluations: " << rep.budget_used << "\n"
              << "oracle: " << oracle_name(rep) << "\n"
              << "easy_bound_slack: " << io::format_double(easy) << "\n";
  }
  return verdict_exit(rep.verdict);
}

int run_estimate(const InputArgs& in, const SearchArgs& s, std::uint64_t seed, bool json) {
  const auto [mu, nu] = load_inputs(in, seed);
  SearchArgs quiet = s;
  quiet.no_oracle = true;
  const auto rep = estimate_v(mu, nu, parse_method(s.method), estimate_options(quiet, seed));
  if (json) {
    std::cout << io::report_to_json(rep).dump() << "\n";
  } else {
    std::cout << io::format_double(rep.v_hat) << "\n";
  }
  return 0;
}

struct SweepArgs {
  double from = 0.0, to = 1.0;
  std::size_t steps = 9;
  std::string methods = "all";
  std::string out;
  std::string svg;
};

std::vector<Method> parse_methods(const std::string& list) {
  if (list == "all") return {Method::IndirectHistogram, Method::IndirectSamples, Method::Direct};
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_method(item));
  if (out.empty()) throw InvalidInput("--methods is empty");
  return out;
}

std::string column_name(Method m) {
  std::string name = "v_hat_" + std::string(to_string(m));
  std::replace(name.begin(), name.end(), '-', '_');
  return name;
}

int run_sweep(const InputArgs& in, const SearchArgs& s, const SweepArgs& sw, std::uint64_t seed) {
  if (in.example.empty()) throw InvalidInput("sweep requires --example");
  if (sw.steps < 1) throw InvalidInput("--steps must be positive");
  if (sw.steps > 1 && !(sw.from < sw.to)) throw InvalidInput("--from must be below --to");
  const auto methods = parse_methods(sw.methods);
  const ExampleFamily family = parse_family(in.example);
  check_param_range(family, sw.from);
  check_param_range(family, sw.to);

  std::ostringstream csv;
  csv << "param";
  for (Method m : methods) csv << "," << column_name(m);
  csv << ",oracle\n";

  std::vector<svg::Series> series;
  for (Method m : methods) series.push_back({std::string(to_string(m)), {}, {}});

  SearchArgs quiet = s;
  quiet.no_oracle = true;
  const EstimateOptions opts = estimate_options(quiet, seed);
  for (std::size_t k = 0; k < sw.steps; ++k) {
    const double p = sw.steps == 1 ? sw.from
                                   : sw.from + (sw.to - sw.from) * static_cast<double>(k) /
                                                   static_cast<double>(sw.steps - 1);
    const auto [mu, nu] = make_example(example_spec(in, p, seed));
    csv << io::format_double(p);
    for (std::size_t i = 0; i < methods.size(); ++i) {
      const double v = estimate_v(mu, nu, methods[i], opts).v_hat;
      csv << "," << io::format_double(v);
      series[i].x.push_back(p);
      series[i].y.push_back(v);
    }
    const OracleKind kind = applicable_oracle(mu, nu);
    csv << "," << (kind == OracleKind::None ? "n/a" : run_oracle(kind, mu, nu).ordered ? "ordered" : "not_ordered")
        << "\n";
  }

  if (sw.out.empty() || sw.out == "-") {
    std::cout << csv.str();
  } else {
    write_text(sw.out, csv.str());
  }
  if (!sw.svg.empty()) {
    const std::string x_label = family == ExampleFamily::GaussSampled ? "sigma" : "s";
    write_text(sw.svg, svg::line_chart("V(mu, nu) estimates, " + in.example, x_label, series));
  }
  return 0;
}

int run_arbitrage(const InputArgs& in, const SearchArgs& s, const std::string& out,
                  const std::string& svg_path, std::uint64_t seed, bool json) {
  const auto [mu, nu] = load_inputs(in, seed);
  SearchArgs quiet = s;
  quiet.no_oracle = true;
  const auto rep = detect_arbitrage(mu, nu, parse_method(s.method), estimate_options(quiet, seed));
  if (rep.spread && !out.empty()) write_text(out, io::spread_to_json(*rep.spread).dump(2) + "\n");
  if (rep.spread && !svg_path.empty() && rep.spread->dim() == 1) {
    double lo = mu.point(0)[0], hi = lo;
    for (const auto* m : {&mu, &nu}) {
      for (const auto& p : m->points()) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
      }
    }
    svg::Series f{"f", {}, {}}, df{"grad f", {}, {}};
    for (int k = 0; k <= 200; ++k) {
      const double x = lo + (hi - lo) * k / 200.0;
      f.x.push_back(x);
      f.y.push_back(rep.spread->value(std::vector<double>{x}));
      df.x.push_back(x);
      df.y.push_back(rep.spread->gradient(std::vector<double>{x})[0]);
    }
    write_text(svg_path, svg::line_chart("calendar spread payoff", "x", {f, df}));
  }
  if (json) {
    Json j{{"found", rep.found}, {"gap", rep.gap}, {"v_hat", rep.search.v_hat},
           {"pieces", rep.spread ? rep.spread->pieces().size() : 0}, {"fallback", rep.used_fallback}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "found: " << (rep.found ? "true" : "false") << "\n"
              << "gap: " << io::format_double(rep.gap) << "\n"
              << "v_hat: " << io::format_double(rep.search.v_hat) << "\n";
  }
  return 0;
}

int run_ot(const InputArgs& in, std::uint64_t seed, bool json) {
  const auto [mu, nu] = load_inputs(in, seed);
  const double c = max_covariance(mu, nu);
  const double w1 = wasserstein1(mu, nu);
  const double w2 = wasserstein2_sq(mu, nu);
  if (json) {
    std::cout << Json{{"C", c}, {"W1", w1}, {"W2_sq", w2}}.dump() << "\n";
  } else {
    std::cout << "C: " << io::format_double(c) << "\n"
              << "W1: " << io::format_double(w1) << "\n"
              << "W2_sq: " << io::format_double(w2) << "\n";
  }
  return 0;
}

void report_error(bool json, const std::string& kind, const std::string& message) {
  if (json) {
    std::cerr << Json{{"error", kind}, {"message", message}}.dump() << "\n";
  } else {
    std::cerr << "error: " << message << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex order testing via optimal transport"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  std::optional<std::uint64_t> seed_arg;
  app.add_flag("--json", json, "Structured JSON output (errors as a JSON line on stderr)");
  app.add_option("--seed", seed_arg, "Random seed (default: $CVXORDER_SEED or 0)");

  InputArgs in;
  SearchArgs search;
  SweepArgs sweep;
  std::string spread_out, spread_svg;

  auto* check = app.add_subcommand("check", "Decide mu <=_c nu; exit 0 ordered, 2 not, 3 inconclusive");
  auto* estimate = app.add_subcommand("estimate-v", "Print the estimate of V(mu, nu)");
  auto* sweep_cmd = app.add_subcommand("sweep", "Estimate V along an example family parameter");
  auto* arb = app.add_subcommand("arbitrage", "Build a calendar-spread arbitrage when order fails");
  auto* ot = app.add_subcommand("ot", "Print C(mu, nu), W1 and W2^2");
  for (auto* cmd : {check, estimate, sweep_cmd, arb, ot}) add_input_options(cmd, in);
  for (auto* cmd : {check, estimate, sweep_cmd, arb}) add_search_options(cmd, search);
  sweep_cmd->add_option("--from", sweep.from, "First parameter value");
  sweep_cmd->add_option("--to", sweep.to, "Last parameter value");
  sweep_cmd->add_option("--steps", sweep.steps, "Number of parameter values");
  sweep_cmd->add_option("--methods", sweep.methods, "all, or a comma list of methods");
  sweep_cmd->add_option("-o,--out", sweep.out, "CSV output path (default stdout)");
  sweep_cmd->add_option("--svg", sweep.svg, "Optional SVG plot of V against the parameter");
  arb->add_option("-o,--out", spread_out, "Spread JSON output path");
  arb->add_option("--svg", spread_svg, "Optional SVG plot of f and its gradient (d = 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error(json, "usage", e.what());
    return kExitUsage;
  }

  try {
    const std::uint64_t seed = seed_arg ? *seed_arg : default_seed();
    if (check->parsed()) return run_check(in, search, seed, json);
    if (estimate->parsed()) return run_estimate(in, search, seed, json);
    if (sweep_cmd->parsed()) return run_sweep(in, search, sweep, seed);
    if (arb->parsed()) return run_arbitrage(in, search, spread_out, spread_svg, seed, json);
    if (ot->parsed()) return run_ot(in, seed, json);
  } catch (const SolverError& e) {
    report_error(json, "solver", e.what());
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    report_error(json, "input", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    report_error(json, "solver", e.what());
    return kExitSolver;
  }
  return kExitUsage;
}
