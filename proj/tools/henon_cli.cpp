// henon: command-line front end for the spectral / bifurcation toolkit.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "henon.hpp"

namespace {

using nlohmann::ordered_json;
using namespace henon;

enum ExitCode { kOk = 0, kIoError = 1, kValidation = 2, kNumerical = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- value lists -----------------------------------------------------------

/// "x", "a,b,c" or "min:max:steps" (inclusive, evenly spaced).
std::vector<double> parse_real_list(const std::string& text, const std::string& flag) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
      throw DomainError(flag + ": cannot parse '" + s + "' as a number");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw DomainError(flag + ": range must be min:max:steps");
    const double lo = number(parts[0]);
    const double hi = number(parts[1]);
    const double steps = number(parts[2]);
    if (steps < 2 || steps != std::floor(steps) || steps > 100000)
      throw DomainError(flag + ": range needs an integer step count in [2, 100000]");
    if (!(hi > lo)) throw DomainError(flag + ": range needs max > min");
    const int n = static_cast<int>(steps);
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
  }
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(number(item));
  if (out.empty()) throw DomainError(flag + ": empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  for (double v : parse_real_list(text, flag)) {
    if (v != std::floor(v) || std::abs(v) > 1e6) throw DomainError(flag + ": expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// ---- output tables ---------------------------------------------------------

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Check {
  std::string name;
  double lhs;
  double rhs;
  double rel_error;
  bool pass;
};

Check make_check(const std::string& name, double lhs, double rhs, double tol) {
  const double err = relative_error(lhs, rhs);
  return {name, lhs, rhs, err, err <= tol};
}

Check exact_check(const std::string& name, std::int64_t lhs, std::int64_t rhs) {
  return {name, static_cast<double>(lhs), static_cast<double>(rhs), lhs == rhs ? 0.0 : 1.0, lhs == rhs};
}

Check bool_check(const std::string& name, bool ok, double lhs = 0.0, double rhs = 0.0) {
  return {name, lhs, rhs, ok ? 0.0 : 1.0, ok};
}

// Short form for check names; values themselves keep full precision.
std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const Cell& c) {
  struct {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  } visit;
  return std::visit(visit, c);
}

ordered_json json_value(const Cell& c) {
  struct {
    ordered_json operator()(std::int64_t v) const { return v; }
    ordered_json operator()(double v) const {
      if (std::isfinite(v)) return v;
      return format_double(v);  // JSON has no inf / nan
    }
    ordered_json operator()(const std::string& s) const { return s; }
    ordered_json operator()(bool b) const { return b; }
  } visit;
  return std::visit(visit, c);
}

ordered_json json_double(double v) { return json_value(Cell{v}); }

// ---- configuration ---------------------------------------------------------

struct RunConfig {
  std::string command;
  int n_dim = 3;
  std::string alpha_text = "2";
  std::string k_text;
  int k_max = 3;
  std::string radius_text;
  std::string eps_text;
  std::size_t nodes = kDefaultNodes;
  std::string out_path;
  std::string format;
  std::optional<double> tol;
  unsigned threads = 1;
  std::string form = "lambda";
  int count = 1;
  bool quick = false;
  bool richardson = false;
  std::string lambda_text = "1";
  double p = 3.0;
  std::string d_text = "0.5,1,2,4";
  std::string pohozaev = "consistent";

  std::vector<double> alphas() const { return parse_real_list(alpha_text, "--alpha"); }

  std::vector<int> ks(const std::string& fallback) const {
    return parse_int_list(k_text.empty() ? fallback : k_text, "--k");
  }

  /// --radius wins; --eps is converted with R = 1/eps.
  std::vector<double> radii(const std::string& fallback) const {
    if (!radius_text.empty() && !eps_text.empty()) throw DomainError("give either --radius or --eps, not both");
    if (!eps_text.empty()) {
      std::vector<double> out;
      for (double e : parse_real_list(eps_text, "--eps")) {
        if (!(e > 0.0 && e < 1.0)) throw DomainError("--eps values must lie in (0, 1)");
        out.push_back(1.0 / e);
      }
      return out;
    }
    auto out = parse_real_list(radius_text.empty() ? fallback : radius_text, "--radius");
    for (double r : out)
      if (!(r > 0.0)) throw DomainError("--radius values must be positive");
    return out;
  }

  ordered_json echo() const {
    ordered_json j;
    j["command"] = command;
    j["n"] = n_dim;
    j["alpha"] = alpha_text;
    j["k"] = k_text;
    j["kmax"] = k_max;
    j["radius"] = radius_text;
    j["eps"] = eps_text;
    j["nodes"] = nodes;
    j["form"] = form;
    j["count"] = count;
    j["quick"] = quick;
    j["richardson"] = richardson;
    j["lambda"] = lambda_text;
    j["p"] = p;
    j["d"] = d_text;
    j["tol"] = tol ? json_double(*tol) : ordered_json();
    j["threads"] = threads;
    return j;
  }
};

struct Output {
  Table results;
  std::vector<Check> checks;
  ordered_json extra;  // command-specific JSON blocks (e.g. Morse jumps)
};

void validate_common(const RunConfig& c) {
  detail::require(c.n_dim >= 3 && c.n_dim <= 64, "--n must lie in [3, 64]");
  detail::require(c.nodes >= kMinSpectralNodes && c.nodes <= 2'000'000, "--nodes must lie in [200, 2000000]");
  detail::require(c.threads >= 1 && c.threads <= 256, "--threads must lie in [1, 256]");
  if (c.tol) detail::require(*c.tol > 0.0 && std::isfinite(*c.tol), "--tol must be positive");
  for (double a : c.alphas()) detail::require(a >= 0.0, "--alpha values must be >= 0");
}

double tol_or(const RunConfig& c, double fallback) { return c.tol.value_or(fallback); }

// ---- commands --------------------------------------------------------------

Output run_spectrum(const RunConfig& c) {
  detail::require(c.form == "lambda" || c.form == "weighted" || c.form == "transformed",
                  "--form must be lambda, weighted or transformed");
  detail::require(c.count >= 1 && c.count <= 50, "--count must lie in [1, 50]");
  struct Task {
    double alpha;
    int k;
    double radius;
  };
  std::vector<Task> tasks;
  for (double a : c.alphas())
    for (int k : c.ks("0"))
      for (double r : c.radii(c.form == "transformed" ? "50" : "200")) {
        detail::require(k >= 0, "--k must be >= 0");
        tasks.push_back({a, k, r});
      }
  const double tol = tol_or(c, 1e-3);
  struct Row {
    Task t;
    std::vector<EigenPair> pairs;
    double reference;
  };
  auto rows = parallel_map(
      tasks,
      [&](const Task& t) {
        const auto p = ProblemParams::make(c.n_dim, t.alpha);
        Row row{t, {}, std::numeric_limits<double>::quiet_NaN()};
        if (c.form == "lambda") {
          row.pairs = solve_eigen(SpectralProblem::lambda(p, t.k, t.radius, c.nodes), c.count);
          row.reference = lambda_first_closed(p, t.k);
        } else if (c.form == "weighted") {
          row.pairs = solve_eigen(SpectralProblem::weighted(p, t.radius, c.nodes), c.count);
          row.reference = lambda_limit(p);
        } else {
          row.pairs = solve_transformed(p, 1.0, t.radius, c.count, c.nodes);
          row.reference = transformed_beta(p, t.k);
        }
        return row;
      },
      c.threads);
  Output out;
  out.results.columns = {"form", "n", "alpha", "k", "radius", "h", "value", "reference", "rel_error", "sign_changes",
                         "pencil_residual"};
  for (const auto& row : rows) {
    for (const auto& e : row.pairs) {
      const bool first = e.index == 1;
      const double ref = first ? row.reference : std::numeric_limits<double>::quiet_NaN();
      out.results.rows.push_back({c.form, std::int64_t{c.n_dim}, row.t.alpha, std::int64_t{row.t.k}, row.t.radius,
                                  std::int64_t{e.index}, e.value, ref, first ? relative_error(e.value, ref) : ref,
                                  std::int64_t{e.sign_changes}, e.pencil_residual});
      if (first && c.form != "transformed") {
        std::ostringstream name;
        name << c.form << "_first_eigenvalue(N=" << c.n_dim << ",alpha=" << label(row.t.alpha)
             << ",k=" << row.t.k << ",R=" << format_double(row.t.radius) << ")";
        out.checks.push_back(make_check(name.str(), e.value, ref, c.form == "weighted" ? tol_or(c, 1e-2) : tol));
      }
    }
  }
  return out;
}

Output run_morse(const RunConfig& c) {
  const auto alphas = c.alphas();
  Output out;
  out.results.columns = {"n", "alpha", "morse_index", "kernel_dimension", "degenerate_mode"};
  for (double a : alphas) {
    const auto p = ProblemParams::make(c.n_dim, a);
    out.results.rows.push_back({std::int64_t{c.n_dim}, a, morse_index(p).total, kernel_dimension(p),
                                std::int64_t{degenerate_mode(p)}});
  }
  if (alphas.size() >= 2) {
    const auto table = morse_jump_table(c.n_dim, alphas);
    ordered_json jumps = ordered_json::array();
    for (const auto& j : table.jumps) {
      jumps.push_back({{"k", j.k},
                       {"alpha_location", j.alpha_location},
                       {"alpha_before", j.alpha_before},
                       {"alpha_after", j.alpha_after},
                       {"expected_size", j.expected_size},
                       {"observed_size", j.observed_size},
                       {"matches", j.matches}});
    }
    out.extra["morse_jumps"] = std::move(jumps);
    out.checks.push_back(bool_check("morse_non_decreasing", table.non_decreasing));
    out.checks.push_back(bool_check("morse_jumps_at_even_alpha", table.jumps_at_even_integers));
  }
  return out;
}

RootOptions root_options(const RunConfig& c) {
  RootOptions o;
  o.nodes = c.nodes;
  o.richardson = c.richardson;
  return o;
}

Output run_bifurcate(const RunConfig& c) {
  struct Task {
    int k;
    double radius;
  };
  std::vector<Task> tasks;
  for (int k : c.ks("2"))
    for (double r : c.radii("200")) {
      detail::require(k >= 1, "--k must be >= 1 for bifurcate");
      detail::require(r > 1.0, "--radius must exceed 1");
      tasks.push_back({k, r});
    }
  const auto opts = root_options(c);
  auto points = parallel_map(
      tasks, [&](const Task& t) { return find_alpha_k(c.n_dim, t.k, 1.0 / t.radius, {}, opts); }, c.threads);
  Output out;
  out.results.columns = {"n",          "k",          "radius",     "eps",        "alpha_root", "residual",
                         "limit_gap",  "bracket_lo", "bracket_hi", "iterations", "evaluations", "monotone",
                         "slope"};
  const double tol = tol_or(c, 2e-2);
  for (const auto& bp : points) {
    out.results.rows.push_back({std::int64_t{c.n_dim}, std::int64_t{bp.k}, bp.radius(), bp.eps, bp.alpha_root,
                                bp.residual, bp.limit_gap, bp.bracket_lo, bp.bracket_hi, std::int64_t{bp.iterations},
                                std::int64_t{bp.evaluations}, bp.monotone_on_bracket, bp.slope});
    std::ostringstream name;
    name << "alpha_k(N=" << c.n_dim << ",k=" << bp.k << ",R=" << label(bp.radius()) << ")";
    out.checks.push_back(make_check(name.str(), bp.alpha_root, 2.0 * (bp.k - 1), tol));
  }
  return out;
}

Output run_diagram(const RunConfig& c) {
  detail::require(c.k_max >= 2 && c.k_max <= 20, "--kmax must lie in [2, 20]");
  std::vector<std::pair<int, double>> tasks;
  const auto radii = c.radii("100,200,400");
  for (int k = 2; k <= c.k_max; ++k)
    for (double r : radii) {
      detail::require(r > 1.0, "--radius must exceed 1");
      tasks.push_back({k, r});
    }
  const auto opts = root_options(c);
  auto points = parallel_map(
      tasks, [&](const auto& t) { return find_alpha_k(c.n_dim, t.first, 1.0 / t.second, {}, opts); }, c.threads);
  Output out;
  out.results.columns = {"k", "radius", "alpha_root", "limit_gap", "branch_labels", "conjectured_vertical"};
  for (const auto& bp : points) {
    std::string labels;
    for (const auto& l : branch_labels(c.n_dim, bp.k)) labels += (labels.empty() ? "" : ";") + l;
    out.results.rows.push_back({std::int64_t{bp.k}, bp.radius(), bp.alpha_root, bp.limit_gap, labels, true});
  }
  return out;
}

Output run_sobolev(const RunConfig& c) {
  const auto lambdas = parse_real_list(c.lambda_text, "--lambda");
  for (double l : lambdas) detail::require(l > 0.0, "--lambda values must be positive");
  Output out;
  out.results.columns = {"n", "alpha", "lambda", "quotient", "constant", "rel_error"};
  const double tol = tol_or(c, 1e-4);
  for (double a : c.alphas()) {
    const auto p = ProblemParams::make(c.n_dim, a);
    const double constant = sobolev_constant(p);
    for (double l : lambdas) {
      const double q = sobolev_quotient(l == 1.0 ? RadialProfile::bubble(p) : RadialProfile::scaled_bubble(p, l));
      out.results.rows.push_back({std::int64_t{c.n_dim}, a, l, q, constant, relative_error(q, constant)});
      std::ostringstream name;
      name << "sobolev_quotient(N=" << c.n_dim << ",alpha=" << label(a) << ",lambda=" << label(l)
           << ")";
      out.checks.push_back(make_check(name.str(), q, constant, tol));
    }
  }
  return out;
}

Output run_bvp(const RunConfig& c) {
  const auto alphas = c.alphas();
  detail::require(alphas.size() == 1, "bvp takes a single --alpha");
  const auto p = ProblemParams::make(c.n_dim, alphas.front());
  const auto ds = parse_real_list(c.d_text, "--d");
  Output out;
  out.results.columns = {"n", "alpha", "p", "d", "zero_radius", "scaling_prediction", "rel_error"};
  const double tol = tol_or(c, 1e-2);
  const double z1 = shooting_zero(p, c.p, 1.0);
  for (double d : ds) {
    const double z = shooting_zero(p, c.p, d);
    const double pred = z1 * std::pow(d, -(c.p - 1.0) / 2.0);
    out.results.rows.push_back({std::int64_t{c.n_dim}, p.alpha(), c.p, d, z, pred, relative_error(z, pred)});
  }
  if (ds.size() >= 2) {
    const double slope = std::log(shooting_zero(p, c.p, ds.back()) / shooting_zero(p, c.p, ds.front())) /
                         std::log(ds.back() / ds.front());
    out.checks.push_back(make_check("zero_radius_scaling_exponent", slope, -(c.p - 1.0) / 2.0, tol));
  }
  const auto sol = solve_unit_ball(p, c.p);
  out.checks.push_back(make_check("unit_ball_height_scaling_vs_direct", sol.d_scaling, sol.d_direct, 5e-3));
  out.extra["unit_ball"] = {{"d_scaling", sol.d_scaling},
                            {"d_direct", sol.d_direct},
                            {"zero_radius_at_one", sol.zero_radius_at_one}};
  return out;
}

Output run_identities(const RunConfig& c) {
  const auto lambdas = parse_real_list(c.lambda_text, "--lambda");
  const auto eps_list = c.eps_text.empty() ? std::vector<double>{0.1} : parse_real_list(c.eps_text, "--eps");
  detail::require(c.pohozaev == "consistent" || c.pohozaev == "literal", "--pohozaev must be consistent or literal");
  const auto form = c.pohozaev == "consistent" ? PohozaevForm::consistent : PohozaevForm::literal;
  Output out;
  out.results.columns = {"name", "n", "alpha", "parameter", "lhs", "rhs", "rel_error"};
  const double tol = tol_or(c, kIdentityTolerance);
  auto add = [&](const IdentityReport& r, double a, double param) {
    out.results.rows.push_back({r.name, std::int64_t{c.n_dim}, a, param, r.lhs, r.rhs, r.rel_error});
    std::ostringstream name;
    name << r.name << "(N=" << c.n_dim << ",alpha=" << label(a) << ",param=" << label(param) << ")";
    out.checks.push_back({name.str(), r.lhs, r.rhs, r.rel_error, r.rel_error <= tol});
  };
  for (double a : c.alphas()) {
    const auto p = ProblemParams::make(c.n_dim, a);
    for (double l : lambdas) add(integral_identity_615(p, l), a, l);
    add(integral_identity_633(p), a, std::numeric_limits<double>::quiet_NaN());
    for (double e : eps_list) add(pohozaev_check(p, e, form), a, e);
  }
  return out;
}

// ---- verification suite ----------------------------------------------------

std::vector<Check> verification_suite(bool quick, unsigned threads) {
  std::vector<std::function<std::vector<Check>()>> jobs;

  // Closed-form eigenvalues of the mode-k problems.
  {
    const std::vector<int> dims = quick ? std::vector<int>{4} : std::vector<int>{3, 4, 5};
    const std::vector<double> alphas = quick ? std::vector<double>{1.0, 2.0} : std::vector<double>{0.5, 1, 2, 3};
    for (int n : dims)
      for (double a : alphas)
        for (int k : {0, 1, 2})
          jobs.push_back([=] {
            const auto p = ProblemParams::make(n, a);
            const double lam = first_eigenvalue(SpectralProblem::lambda(p, k, 200.0, 8000));
            std::ostringstream name;
            name << "lambda_1k(N=" << n << ",alpha=" << label(a) << ",k=" << k << ")";
            return std::vector<Check>{make_check(name.str(), lam, lambda_first_closed(p, k), 1e-3)};
          });
  }
  // Limit eigenvalue of the weighted problem.
  for (int n : quick ? std::vector<int>{3} : std::vector<int>{3, 4})
    jobs.push_back([=] {
      const auto p = ProblemParams::make(n, 2.0);
      const double lam = first_eigenvalue(SpectralProblem::weighted(p, 100.0));
      return std::vector<Check>{make_check("weighted_limit(N=" + std::to_string(n) + ")", lam, lambda_limit(p), 1e-2)};
    });
  // Bifurcation values and slopes.
  for (int n : quick ? std::vector<int>{3} : std::vector<int>{3, 4})
    for (int k : quick ? std::vector<int>{2} : std::vector<int>{2, 3})
      jobs.push_back([=] {
        const auto bp = find_alpha_k(n, k, 1.0 / 200.0);
        std::ostringstream name;
        name << "alpha_k(N=" << n << ",k=" << k << ")";
        return std::vector<Check>{make_check(name.str(), bp.alpha_root, 2.0 * (k - 1), 2e-2)};
      });
  for (auto [n, a] : quick ? std::vector<std::pair<int, double>>{{3, 2.0}}
                           : std::vector<std::pair<int, double>>{{3, 2.0}, {4, 2.0}, {3, 1.0}})
    jobs.push_back([=] {
      const auto s = eigen_slope(ProblemParams::make(n, a), 0.01, 0.01);
      std::ostringstream name;
      name << "eigen_slope(N=" << n << ",alpha=" << label(a) << ")";
      return std::vector<Check>{make_check(name.str(), s.finite_difference, s.limit, 5e-2)};
    });
  // Sign pattern.
  for (double eps : quick ? std::vector<double>{0.1} : std::vector<double>{0.05, 0.1, 0.5})
    jobs.push_back([=] {
      const auto s = first_eigen_sign_check(ProblemParams::make(3, 2.0), eps);
      return std::vector<Check>{
          bool_check("sign_pattern(N=3,alpha=2,eps=" + label(eps) + ")", s.holds(), s.lambda1, s.lambda2)};
    });
  // Integer arithmetic.
  jobs.push_back([] {
    std::vector<Check> out;
    for (int n = 3; n <= 8; ++n)
      for (int k = 1; k <= 6; ++k) {
        const auto p = ProblemParams::make(n, 2.0 * (k - 1));
        out.push_back(exact_check("kernel_dimension(N=" + std::to_string(n) + ",k=" + std::to_string(k) + ")",
                                  kernel_dimension(p), 1 + harmonic_multiplicity(n, k)));
      }
    return out;
  });
  // Identities.
  jobs.push_back([] {
    std::vector<Check> out;
    auto add = [&](const IdentityReport& r, const std::string& tag) {
      out.push_back({r.name + tag, r.lhs, r.rhs, r.rel_error, r.passes()});
    };
    add(integral_identity_615(ProblemParams::make(3, 1.0), 1.0), "(N=3,alpha=1)");
    add(integral_identity_633(ProblemParams::make(3, 1.0)), "(N=3,alpha=1)");
    add(pohozaev_check(ProblemParams::make(3, 1.0), 0.1), "(N=3,alpha=1,eps=0.1)");
    add(pohozaev_check(ProblemParams::make(4, 2.0), 0.05), "(N=4,alpha=2,eps=0.05)");
    return out;
  });
  for (double a : quick ? std::vector<double>{1.0} : std::vector<double>{0.0, 1.0, 2.0})
    jobs.push_back([=] {
      const auto p = ProblemParams::make(3, a);
      const double q = sobolev_quotient(RadialProfile::bubble(p));
      return std::vector<Check>{make_check("sobolev_quotient(N=3,alpha=" + label(a) + ")", q,
                                           sobolev_constant(p), 1e-4)};
    });
  // Explicit nonradial family and the unit ball problem.
  jobs.push_back([] {
    const auto p = ProblemParams::make(4, 2.0);
    auto u = [&](double s, double t) { return eval_nonradial_explicit(p, 0.5, {s, t}); };
    const double r1 = residual_biradial(u, p, {0.02, 2.0}).max_abs;
    const double r2 = residual_biradial(u, p, {0.01, 2.0}).max_abs;
    const double ratio = r1 / r2;
    return std::vector<Check>{bool_check("biradial_second_order(N=4,a=0.5)", ratio >= 3.5 && ratio <= 4.5, ratio, 4.0)};
  });
  jobs.push_back([] {
    const auto sol = solve_unit_ball(ProblemParams::make(3, 1.0), 3.0);
    return std::vector<Check>{make_check("unit_ball_height(N=3,alpha=1,p=3)", sol.d_scaling, sol.d_direct, 5e-3)};
  });

  auto parts = parallel_map(jobs, [](const auto& job) { return job(); }, threads);
  std::vector<Check> all;
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  return all;
}

Output run_verify(const RunConfig& c) {
  Output out;
  out.checks = verification_suite(c.quick, c.threads);
  out.results.columns = {"name", "lhs", "rhs", "rel_error", "pass"};
  for (const auto& ch : out.checks) out.results.rows.push_back({ch.name, ch.lhs, ch.rhs, ch.rel_error, ch.pass});
  return out;
}

// ---- emission --------------------------------------------------------------

std::string render(const RunConfig& c, const Output& o) {
  std::ostringstream os;
  if (c.format == "csv") {
    for (std::size_t i = 0; i < o.results.columns.size(); ++i) os << (i ? "," : "") << o.results.columns[i];
    os << '\n';
    for (const auto& row : o.results.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
      os << '\n';
    }
    return os.str();
  }
  ordered_json j;
  j["config"] = c.echo();
  ordered_json results = ordered_json::array();
  for (const auto& row : o.results.rows) {
    ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[o.results.columns[i]] = json_value(row[i]);
    results.push_back(std::move(obj));
  }
  j["results"] = std::move(results);
  ordered_json checks = ordered_json::array();
  for (const auto& ch : o.checks)
    checks.push_back({{"name", ch.name},
                      {"lhs", json_double(ch.lhs)},
                      {"rhs", json_double(ch.rhs)},
                      {"rel_error", json_double(ch.rel_error)},
                      {"pass", ch.pass}});
  j["checks"] = std::move(checks);
  for (const auto& [key, value] : o.extra.items()) j[key] = value;
  return j.dump(2) + "\n";
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out_path.empty() || c.out_path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file '" + c.out_path + "'");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing output file '" + c.out_path + "'");
}

void print_verify_table(const Output& o) {
  for (const auto& ch : o.checks)
    std::fprintf(stderr, "%-4s %-48s rel_error=%.3e\n", ch.pass ? "pass" : "FAIL", ch.name.c_str(), ch.rel_error);
}

int fail(const std::string& kind, const std::string& message, int code) {
  ordered_json j;
  j["error"] = {{"type", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Spectral and bifurcation toolkit for the Henon equation"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", c.n_dim, "dimension N >= 3");
    sub->add_option("--out", c.out_path, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", c.threads, "worker threads for sweeps");
    sub->add_option("--tol", c.tol, "tolerance override for checks");
  };
  auto add_alpha = [&](CLI::App* sub) { sub->add_option("--alpha", c.alpha_text, "value, list a,b,c or min:max:steps"); };
  auto add_radius = [&](CLI::App* sub) {
    sub->add_option("--radius", c.radius_text, "outer radius R (value or list)");
    sub->add_option("--eps", c.eps_text, "eps = 1/R (value or list)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the radial problems");
  add_common(spectrum);
  add_alpha(spectrum);
  add_radius(spectrum);
  spectrum->add_option("--k", c.k_text, "spherical harmonic mode(s)");
  spectrum->add_option("--nodes", c.nodes, "grid nodes");
  spectrum->add_option("--form", c.form, "lambda, weighted or transformed");
  spectrum->add_option("--count", c.count, "number of eigenvalues");

  auto* morse = app.add_subcommand("morse", "Morse index and kernel dimension");
  add_common(morse);
  add_alpha(morse);

  auto* bifurcate = app.add_subcommand("bifurcate", "degeneracy values alpha_k^eps");
  add_common(bifurcate);
  add_radius(bifurcate);
  bifurcate->add_option("--k", c.k_text, "mode(s) k >= 1");
  bifurcate->add_option("--nodes", c.nodes, "grid nodes");
  bifurcate->add_flag("--richardson", c.richardson, "two-grid extrapolated eigenvalues");

  auto* diagram = app.add_subcommand("diagram", "bifurcation points with symmetry labels");
  add_common(diagram);
  add_radius(diagram);
  diagram->add_option("--kmax", c.k_max, "largest mode");
  diagram->add_option("--nodes", c.nodes, "grid nodes");
  diagram->add_flag("--richardson", c.richardson, "two-grid extrapolated eigenvalues");

  auto* verify = app.add_subcommand("verify", "bundled verification suite");
  add_common(verify);
  verify->add_flag("--quick", c.quick, "reduced suite");

  auto* sobolev = app.add_subcommand("sobolev", "Sobolev quotient of the bubble against the constant");
  add_common(sobolev);
  add_alpha(sobolev);
  sobolev->add_option("--lambda", c.lambda_text, "scaling(s) of the bubble");

  auto* bvp = app.add_subcommand("bvp", "radial Dirichlet problem on the unit ball");
  add_common(bvp);
  add_alpha(bvp);
  bvp->add_option("--p", c.p, "exponent 1 < p < p_alpha");
  bvp->add_option("--d", c.d_text, "initial heights");

  auto* identities = app.add_subcommand("identities", "integral and Pohozaev identities");
  add_common(identities);
  add_alpha(identities);
  identities->add_option("--lambda", c.lambda_text, "scaling(s) for the mass identity");
  identities->add_option("--eps", c.eps_text, "eps for the Pohozaev check");
  identities->add_option("--pohozaev", c.pohozaev, "consistent or literal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("validation", e.what(), kValidation);
  }

  c.command = app.get_subcommands().front()->get_name();
  if (c.format.empty()) c.format = c.command == "diagram" ? "csv" : "json";
  try {
    validate_common(c);
    Output out;
    if (c.command == "spectrum") out = run_spectrum(c);
    else if (c.command == "morse") out = run_morse(c);
    else if (c.command == "bifurcate") out = run_bifurcate(c);
    else if (c.command == "diagram") out = run_diagram(c);
    else if (c.command == "verify") out = run_verify(c);
    else if (c.command == "sobolev") out = run_sobolev(c);
    else if (c.command == "bvp") out = run_bvp(c);
    else out = run_identities(c);
    emit(c, render(c, out));
    if (c.command == "verify") {
      print_verify_table(out);
      for (const auto& ch : out.checks)
        if (!ch.pass) return kNumerical;
    }
    return kOk;
  } catch (const IoError& e) {
    return fail("io", e.what(), kIoError);
  } catch (const DomainError& e) {
    return fail("validation", e.what(), kValidation);
  } catch (const NumericalError& e) {
    return fail("numerical", e.what(), kNumerical);
  } catch (const std::exception& e) {
    return fail("numerical", e.what(), kNumerical);
  }
}
