// suris_lab: command-line front end for the Suris standard-map laboratory.
//
// Subcommands route to the library modules; every artifact is written
// atomically (temp file + rename) and is byte-identical across runs with the
// same configuration.  Exit codes: 0 success, 2 threshold failure, 1 error.

#include <cmath>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "suris/action_angle.hpp"
#include "suris/deformed_basis.hpp"
#include "suris/errors.hpp"
#include "suris/invariant_geometry.hpp"
#include "suris/map_dynamics.hpp"
#include "suris/orbit_solver.hpp"
#include "suris/parallel.hpp"
#include "suris/potentials.hpp"
#include "suris/rigidity_lab.hpp"
#include "suris/serialization.hpp"
#include "suris/version.hpp"

namespace {

using Json = nlohmann::json;
using suris::Potential;
using suris::SurisParams;

struct CommonOpts {
  std::string potential_path;
  std::string out_path;
  std::string format = "csv";
  int grid = 2048;
  double tol = 1e-10;
  int threads = 0;
  bool schema = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--potential", o.potential_path,
                  "Potential JSON file (absent = zero potential)");
  cmd->add_option("--out", o.out_path, "Artifact path (written atomically)");
  cmd->add_option("--format", o.format, "Artifact format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--grid", o.grid, "Quadrature / chart grid size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--tol", o.tol, "Diagnostic gate (exit 2 when exceeded)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--threads", o.threads,
                  "Worker threads (0 = $SURIS_LAB_THREADS, else hardware)")
      ->capture_default_str();
  cmd->add_flag("--schema", o.schema, "Print the output schema and exit");
}

Potential load_or_zero(const CommonOpts& o) {
  if (o.potential_path.empty()) return Potential::zero();
  return suris::load_potential(o.potential_path);
}

/// Base Suris parameters + trig perturbation of a potential document.
struct SplitPotential {
  SurisParams base;
  suris::TrigPerturbation trig;
};

SplitPotential split_parts(const Potential& v) {
  const auto parts = v.canonical_parts();
  if (!parts)
    throw suris::DomainError(
        "this subcommand needs a potential that flattens to suris+trig parts");
  SplitPotential s;
  s.base = parts->suris.value_or(SurisParams{});
  s.trig = parts->trig;
  return s;
}

/// The fixed generic parameter direction used when only an eccentricity is
/// given: eps * (0.6, -0.3, 0.5, 0.4)/sqrt(0.86).
SurisParams canonical_direction(double eps) {
  const double n = std::sqrt(0.86);
  return SurisParams(0.6 * eps / n, -0.3 * eps / n, 0.5 * eps / n, 0.4 * eps / n);
}

using Echo = std::map<std::string, std::string>;

Echo base_echo(const CommonOpts& o, const std::string& sub) {
  return {{"subcommand", sub},
          {"potential", o.potential_path.empty() ? "(zero)" : o.potential_path},
          {"format", o.format},
          {"grid", std::to_string(o.grid)},
          {"tol", suris::format_double(o.tol)},
          {"threads", std::to_string(o.threads)}};
}

std::string csv_header(const Echo& echo) {
  std::ostringstream os;
  os << "# suris_lab " << suris::kToolVersion << "\n";
  for (const auto& [k, v] : echo) os << "# " << k << "=" << v << "\n";
  return os.str();
}

Json json_base(const Echo& echo) {
  Json doc;
  doc["tool_version"] = suris::kToolVersion;
  doc["config"] = echo;
  return doc;
}

void emit(const CommonOpts& o, const std::string& csv, const Json& json_doc) {
  if (o.out_path.empty()) return;
  if (o.format == "csv")
    suris::write_text_atomic(o.out_path, csv);
  else
    suris::write_text_atomic(o.out_path, json_doc.dump(2) + "\n");
}

int emit_report(const CommonOpts& o, const Echo& echo,
                const suris::EstimateReport& rep) {
  std::ostringstream csv;
  csv << csv_header(echo);
  csv << "# id=" << rep.id << "\n";
  csv << "# pass=" << (rep.pass ? "true" : "false")
      << " tolerance=" << suris::format_double(rep.tolerance) << "\n";
  csv << "# fitted_constant=" << suris::format_double(rep.fitted_constant)
      << " fitted_exponent=" << suris::format_double(rep.fitted_exponent)
      << " r_squared=" << suris::format_double(rep.r_squared) << "\n";
  for (const auto& [k, v] : rep.config)
    csv << "# " << k << "=" << suris::format_double(v) << "\n";
  csv << "sweep,measured\n";
  for (size_t i = 0; i < rep.sweep.size(); ++i)
    csv << suris::format_double(rep.sweep[i]) << ","
        << suris::format_double(rep.measured[i]) << "\n";

  Json doc = json_base(echo);
  doc["report"] = Json::parse(suris::report_to_json(rep));
  emit(o, csv.str(), doc);

  std::cout << rep.id << ": " << (rep.pass ? "PASS" : "FAIL")
            << " (sup=" << suris::format_double(rep.fitted_constant)
            << ", exponent=" << suris::format_double(rep.fitted_exponent) << ")"
            << std::endl;
  return rep.pass ? 0 : 2;
}

void print_schema(const std::string& text) { std::cout << text; }

// ---------------------------------------------------------------------------

int run_phase_portrait(const CommonOpts& o, long seeds, long iters,
                       unsigned long long seed) {
  if (o.schema) {
    print_schema(
        "phase-portrait: orbit cloud of the standard map.\n"
        "csv columns: seed,iter,x,y,integral\n"
        "  integral = first integral I(x,y) (empty unless the potential is pure"
        " Suris)\n"
        "json: {tool_version, config, pure_suris, max_integral_drift, rows:"
        "[[seed,iter,x,y,integral?],..]}\n"
        "seeds drawn uniformly on [0,1)^2 from mt19937_64(--seed); the seed is"
        " echoed in the header.\n"
        "exit: 0; 1 on error (no threshold gate).\n");
    return 0;
  }
  const Potential v = load_or_zero(o);
  const auto parts = v.canonical_parts();
  const bool pure_suris = parts && parts->suris && parts->trig.is_zero();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<suris::PhasePoint> z0(seeds);
  for (auto& z : z0) {
    z.x = unif(rng);
    z.y = unif(rng);
  }
  std::vector<suris::OrbitSegment> segs(seeds);
  suris::parallel_for(
      seeds, [&](long i) { segs[i] = suris::iterate(v, z0[i], iters); },
      o.threads);

  double max_drift = 0.0;
  Echo echo = base_echo(o, "phase-portrait");
  echo["seeds"] = std::to_string(seeds);
  echo["iters"] = std::to_string(iters);
  echo["seed"] = std::to_string(seed);

  std::ostringstream csv;
  csv << csv_header(echo) << "seed,iter,x,y,integral\n";
  Json rows = Json::array();
  for (long s = 0; s < seeds; ++s) {
    double i0 = 0.0;
    for (long n = 0; n <= iters; ++n) {
      const auto& z = segs[s].points[static_cast<size_t>(n)];
      csv << s << "," << n << "," << suris::format_double(z.x) << ","
          << suris::format_double(z.y) << ",";
      Json row = Json::array({s, n, z.x, z.y});
      if (pure_suris) {
        const double ii = suris::first_integral(*parts->suris, z);
        if (n == 0) i0 = ii;
        max_drift = std::max(max_drift, std::fabs(ii - i0));
        csv << suris::format_double(ii);
        row.push_back(ii);
      }
      csv << "\n";
      rows.push_back(std::move(row));
    }
  }
  Json doc = json_base(echo);
  doc["pure_suris"] = pure_suris;
  if (pure_suris) doc["max_integral_drift"] = max_drift;
  doc["rows"] = std::move(rows);
  emit(o, csv.str(), doc);

  std::cout << "phase-portrait: " << seeds << " seeds x " << iters
            << " iterations";
  if (pure_suris)
    std::cout << ", max |I - I0| = " << suris::format_double(max_drift);
  std::cout << std::endl;
  return 0;
}

int run_orbit(const CommonOpts& o, long p, long q, std::optional<double> pin) {
  if (o.schema) {
    print_schema(
        "orbit: minimal (p,q)-periodic configuration of the discrete action.\n"
        "csv columns: i,x\n"
        "json: {tool_version, config, p, q, pinned, pin?, points, action,"
        " residual, newton_iterations, gradient_steps}\n"
        "stdout: line 1 = the q points (comma separated); line 2 = action and"
        " residual.\n"
        "exit: 0; 2 when the Euler-Lagrange residual exceeds --tol.\n");
    return 0;
  }
  const Potential v = load_or_zero(o);
  const auto cfg = suris::minimize_action(v, p, q, pin);
  const auto act = suris::action(v, cfg);

  Echo echo = base_echo(o, "orbit");
  echo["p"] = std::to_string(p);
  echo["q"] = std::to_string(q);
  if (pin) echo["pin"] = suris::format_double(*pin);

  std::ostringstream csv;
  csv << csv_header(echo) << "i,x\n";
  for (long i = 0; i < q; ++i)
    csv << i << "," << suris::format_double(cfg.points[static_cast<size_t>(i)])
        << "\n";
  Json doc = json_base(echo);
  doc["p"] = p;
  doc["q"] = q;
  doc["pinned"] = cfg.pinned;
  if (cfg.pinned) doc["pin"] = cfg.pin;
  doc["points"] = cfg.points;
  doc["action"] = act.value;
  doc["residual"] = cfg.residual;
  doc["newton_iterations"] = cfg.newton_iterations;
  doc["gradient_steps"] = cfg.gradient_steps;
  emit(o, csv.str(), doc);

  for (long i = 0; i < q; ++i)
    std::cout << (i ? ", " : "")
              << suris::format_double(cfg.points[static_cast<size_t>(i)]);
  std::cout << "\n"
            << "action " << suris::format_double(act.value) << " residual "
            << suris::format_double(cfg.residual) << std::endl;
  return cfg.residual <= o.tol ? 0 : 2;
}

int run_curve(const CommonOpts& o, std::optional<double> eta,
              std::optional<double> rho, int sigma, int k) {
  if (o.schema) {
    print_schema(
        "curve: invariant graph y = psi(x) of the Suris map.\n"
        "one of --eta (level of the first integral) or --rho (rotation number,"
        " solved by bisection) is required.\n"
        "csv columns: x,psi\n"
        "json: {tool_version, config, eta, sigma, k, rho, invariance_residual,"
        " level_residual, rows:[[x,psi],..]}\n"
        "exit: 0; 2 when the invariance residual exceeds --tol.\n");
    return 0;
  }
  if (eta.has_value() == rho.has_value())
    throw suris::DomainError("curve: give exactly one of --eta, --rho");
  const SplitPotential s = split_parts(load_or_zero(o));
  if (!s.trig.is_zero())
    throw suris::DomainError("curve: invariant graphs need a pure Suris potential");

  const suris::InvariantCurve curve =
      rho ? suris::curve_for_rotation_number(s.base, *rho, sigma, k)
          : suris::InvariantCurve(s.base, {*eta, sigma, k}, o.grid);
  const double omega = suris::rotation_number_exact(s.base, curve.curve_params());
  const double inv = curve.invariance_residual(256);
  const double lvl = curve.level_residual(256);

  Echo echo = base_echo(o, "curve");
  if (eta) echo["eta"] = suris::format_double(*eta);
  if (rho) echo["rho"] = suris::format_double(*rho);
  echo["sigma"] = std::to_string(sigma);
  echo["k"] = std::to_string(k);

  std::ostringstream csv;
  csv << csv_header(echo) << "x,psi\n";
  Json rows = Json::array();
  for (int i = 0; i < o.grid; ++i) {
    const double x = static_cast<double>(i) / o.grid;
    const double y = curve.psi(x);
    csv << suris::format_double(x) << "," << suris::format_double(y) << "\n";
    rows.push_back(Json::array({x, y}));
  }
  Json doc = json_base(echo);
  doc["eta"] = curve.curve_params().eta;
  doc["sigma"] = curve.curve_params().sigma;
  doc["k"] = curve.curve_params().k;
  doc["rho"] = omega;
  doc["invariance_residual"] = inv;
  doc["level_residual"] = lvl;
  doc["rows"] = std::move(rows);
  emit(o, csv.str(), doc);

  std::cout << "eta " << suris::format_double(curve.curve_params().eta) << " rho "
            << suris::format_double(omega) << " invariance_residual "
            << suris::format_double(inv) << " level_residual "
            << suris::format_double(lvl) << std::endl;
  return inv <= o.tol ? 0 : 2;
}

int run_chart(const CommonOpts& o, std::optional<double> eta,
              std::optional<double> rho) {
  if (o.schema) {
    print_schema(
        "chart: angle coordinate theta on one invariant curve (the restricted"
        " map becomes the rigid rotation by rho).\n"
        "one of --eta or --rho is required.\n"
        "csv columns: x,theta,theta_prime\n"
        "json: {tool_version, config, eta, rho, conjugacy_defect, rows:"
        "[[x,theta,theta_prime],..]}\n"
        "exit: 0; 2 when the conjugacy defect exceeds --tol.\n");
    return 0;
  }
  if (eta.has_value() == rho.has_value())
    throw suris::DomainError("chart: give exactly one of --eta, --rho");
  const SplitPotential s = split_parts(load_or_zero(o));
  if (!s.trig.is_zero())
    throw suris::DomainError("chart: angle charts need a pure Suris potential");

  const suris::AngleChart chart =
      rho ? suris::build_chart(s.base, *rho, o.grid)
          : suris::AngleChart(suris::InvariantCurve(s.base, {*eta, +1, 0}, o.grid),
                              o.grid);
  const double defect = chart.conjugacy_defect(256);

  Echo echo = base_echo(o, "chart");
  if (eta) echo["eta"] = suris::format_double(*eta);
  if (rho) echo["rho"] = suris::format_double(*rho);

  std::ostringstream csv;
  csv << csv_header(echo) << "x,theta,theta_prime\n";
  Json rows = Json::array();
  for (int i = 0; i < o.grid; ++i) {
    const double x = static_cast<double>(i) / o.grid;
    const double t = chart.theta(x);
    const double tp = chart.theta_prime(x);
    csv << suris::format_double(x) << "," << suris::format_double(t) << ","
        << suris::format_double(tp) << "\n";
    rows.push_back(Json::array({x, t, tp}));
  }
  Json doc = json_base(echo);
  doc["eta"] = chart.eta();
  doc["rho"] = chart.rho();
  doc["conjugacy_defect"] = defect;
  doc["rows"] = std::move(rows);
  emit(o, csv.str(), doc);

  std::cout << "eta " << suris::format_double(chart.eta()) << " rho "
            << suris::format_double(chart.rho()) << " conjugacy_defect "
            << suris::format_double(defect) << std::endl;
  return defect <= o.tol ? 0 : 2;
}

int run_coeffs(const CommonOpts& o, long qmin, long qmax) {
  if (o.schema) {
    print_schema(
        "coeffs: coefficients <W, f_q> of the trig part W of the potential"
        " document against the deformed basis of its Suris part.\n"
        "csv columns: q,re,im,abs\n"
        "json: {tool_version, config, rows:[[q,re,im,abs],..], max_abs}\n"
        "exit: 0; 1 on error (no threshold gate).\n");
    return 0;
  }
  if (qmin > qmax) throw suris::DomainError("coeffs: qmin must be <= qmax");
  const SplitPotential s = split_parts(load_or_zero(o));
  const Potential w = Potential::trig(s.trig);
  const suris::InnerProductContext ctx(s.base, o.grid);

  const long count = qmax - qmin + 1;
  std::vector<suris::Complex> coeffs(static_cast<size_t>(count));
  suris::parallel_for(
      count,
      [&](long i) {
        coeffs[static_cast<size_t>(i)] = suris::coefficient(ctx, w, qmin + i);
      },
      o.threads);

  Echo echo = base_echo(o, "coeffs");
  echo["qmin"] = std::to_string(qmin);
  echo["qmax"] = std::to_string(qmax);

  std::ostringstream csv;
  csv << csv_header(echo) << "q,re,im,abs\n";
  Json rows = Json::array();
  double max_abs = 0.0;
  for (long i = 0; i < count; ++i) {
    const auto c = coeffs[static_cast<size_t>(i)];
    max_abs = std::max(max_abs, std::abs(c));
    csv << (qmin + i) << "," << suris::format_double(c.real()) << ","
        << suris::format_double(c.imag()) << ","
        << suris::format_double(std::abs(c)) << "\n";
    rows.push_back(Json::array({qmin + i, c.real(), c.imag(), std::abs(c)}));
  }
  Json doc = json_base(echo);
  doc["rows"] = std::move(rows);
  doc["max_abs"] = max_abs;
  emit(o, csv.str(), doc);

  std::cout << "coeffs: q in [" << qmin << ", " << qmax << "], max |<W,f_q>| = "
            << suris::format_double(max_abs) << std::endl;
  return 0;
}

int run_beta(const CommonOpts& o, long p, long q) {
  if (o.schema) {
    print_schema(
        "beta: minimal average action beta(p/q) of the potential.\n"
        "stdout: the value alone.\n"
        "csv columns: p,q,beta\n"
        "json: {tool_version, config, p, q, beta}\n"
        "exit: 0; 2 when the orbit solve misses its residual target.\n");
    return 0;
  }
  const Potential v = load_or_zero(o);
  const double b = suris::beta(v, p, q);

  Echo echo = base_echo(o, "beta");
  echo["p"] = std::to_string(p);
  echo["q"] = std::to_string(q);
  std::ostringstream csv;
  csv << csv_header(echo) << "p,q,beta\n"
      << p << "," << q << "," << suris::format_double(b) << "\n";
  Json doc = json_base(echo);
  doc["p"] = p;
  doc["q"] = q;
  doc["beta"] = b;
  emit(o, csv.str(), doc);

  std::cout << suris::format_double(b) << std::endl;
  return 0;
}

int run_spectrum(const CommonOpts& o, long qmax) {
  if (o.schema) {
    print_schema(
        "spectrum: minimal actions over every reduced rational p/q in"
        " [1/6, 1/3] with q <= qmax.\n"
        "csv columns: p,q,rho,action,beta,converged,residual\n"
        "json: {tool_version, config, rows:[[p,q,rho,action,beta,converged,"
        "residual],..]}\n"
        "exit: 0; 2 when any entry failed to converge.\n");
    return 0;
  }
  const Potential v = load_or_zero(o);
  const auto rationals = suris::reduced_rationals_in_window(qmax);
  std::vector<suris::SpectrumEntry> entries(rationals.size());
  suris::parallel_for(
      static_cast<long>(rationals.size()),
      [&](long i) {
        const auto [p, q] = rationals[static_cast<size_t>(i)];
        suris::SpectrumEntry e;
        e.p = p;
        e.q = q;
        try {
          const auto cfg = suris::minimize_action(v, p, q);
          e.action = suris::action(v, cfg).value;
          e.residual = cfg.residual;
          e.converged = true;
        } catch (const suris::NoConvergenceError& err) {
          e.converged = false;
          e.residual = err.best_residual();
        }
        entries[static_cast<size_t>(i)] = e;
      },
      o.threads);

  Echo echo = base_echo(o, "spectrum");
  echo["qmax"] = std::to_string(qmax);
  std::ostringstream csv;
  csv << csv_header(echo) << "p,q,rho,action,beta,converged,residual\n";
  Json rows = Json::array();
  long failures = 0;
  for (const auto& e : entries) {
    const double rho = static_cast<double>(e.p) / static_cast<double>(e.q);
    const double b = e.converged ? e.action / static_cast<double>(e.q) : 0.0;
    if (!e.converged) ++failures;
    csv << e.p << "," << e.q << "," << suris::format_double(rho) << ","
        << suris::format_double(e.action) << "," << suris::format_double(b) << ","
        << (e.converged ? 1 : 0) << "," << suris::format_double(e.residual)
        << "\n";
    rows.push_back(
        Json::array({e.p, e.q, rho, e.action, b, e.converged, e.residual}));
  }
  Json doc = json_base(echo);
  doc["rows"] = std::move(rows);
  emit(o, csv.str(), doc);

  std::cout << "spectrum: " << entries.size() << " rationals, " << failures
            << " failures" << std::endl;
  return failures == 0 ? 0 : 2;
}

// --- rigidity subcommands ---------------------------------------------------

const char* kReportSchema =
    "report artifact --\n"
    "csv: '# key=value' header lines, then columns: sweep,measured\n"
    "json: {tool_version, config, report:{id, sweep, measured, fit:{constant,"
    " exponent, r_squared}, tolerance, pass, config}}\n"
    "exit: 0 when the report passes, 2 otherwise.\n";

int run_rigidity_orthogonality(const CommonOpts& o, double eps, long qmax,
                               double threshold) {
  if (o.schema) {
    print_schema(std::string(
                     "rigidity orthogonality: sup |<f_q, f_j>| over 3 <= |q| <="
                     " qmax, j in {+-1,+-2}; the sup must sit below the"
                     " threshold and shrink under quadrature doubling.\n"
                     "the potential's Suris part is used when --potential is"
                     " given, else the generic direction at --eps.\n") +
                 kReportSchema);
    return 0;
  }
  const SurisParams base = o.potential_path.empty()
                               ? canonical_direction(eps)
                               : split_parts(load_or_zero(o)).base;
  const auto rep = suris::verify_orthogonality(base, qmax, o.grid, threshold);
  Echo echo = base_echo(o, "rigidity orthogonality");
  echo["eps"] = suris::format_double(base.eccentricity());
  echo["qmax"] = std::to_string(qmax);
  echo["threshold"] = suris::format_double(threshold);
  return emit_report(o, echo, rep);
}

int run_rigidity_tail(const CommonOpts& o, long qmax) {
  if (o.schema) {
    print_schema(std::string(
                     "rigidity tail: max over 9 <= q <= qmax of"
                     " q |<W, f_q>| / ||W||_C1 for the trig part W of the"
                     " potential document; must be stable under grid"
                     " doubling.\n") +
                 kReportSchema);
    return 0;
  }
  const SplitPotential s = split_parts(load_or_zero(o));
  const auto rep =
      suris::verify_tail_bound(s.base, Potential::trig(s.trig), qmax, o.grid);
  Echo echo = base_echo(o, "rigidity tail");
  echo["qmax"] = std::to_string(qmax);
  return emit_report(o, echo, rep);
}

int run_rigidity_action_coefficient(const CommonOpts& o, long qmax, int halvings,
                                    double delta_norm,
                                    std::vector<double> delta_abcd) {
  if (o.schema) {
    print_schema(std::string(
                     "rigidity action-coefficient: for the Suris increment"
                     " W_s = V(params + s*delta) - V(params), checks that"
                     " max_q |<W_s, f_q>| / (q^4 ||W_s||_1^2) holds steady"
                     " while s halves (the coefficient is quadratic in the"
                     " increment).  q runs over 3..qmax.\n"
                     "--delta gives the increment explicitly (A B C D); else"
                     " the generic direction scaled to --delta-norm.\n") +
                 kReportSchema);
    return 0;
  }
  const SplitPotential s = split_parts(load_or_zero(o));
  SurisParams delta = canonical_direction(delta_norm);
  if (!delta_abcd.empty()) {
    if (delta_abcd.size() != 4)
      throw suris::DomainError("--delta needs exactly four values: A B C D");
    delta = SurisParams(delta_abcd[0], delta_abcd[1], delta_abcd[2], delta_abcd[3]);
  }
  std::vector<long> qset;
  for (long q = 3; q <= qmax; ++q) qset.push_back(q);
  const auto rep =
      suris::verify_action_coefficient_bound(s.base, delta, qset, halvings, o.grid);
  Echo echo = base_echo(o, "rigidity action-coefficient");
  echo["qmax"] = std::to_string(qmax);
  echo["halvings"] = std::to_string(halvings);
  echo["delta"] = suris::format_double(delta.A) + " " +
                  suris::format_double(delta.B) + " " +
                  suris::format_double(delta.C) + " " +
                  suris::format_double(delta.D);
  return emit_report(o, echo, rep);
}

int run_rigidity_beta_consistency(const CommonOpts& o, long qmax) {
  if (o.schema) {
    print_schema(std::string(
                     "rigidity beta-consistency: beta(V_S + W) - beta(V_S) on"
                     " every reduced rational in [1/6, 1/3] with q <= qmax,"
                     " where the document's Suris part is V_S and its trig"
                     " part is W.\n") +
                 kReportSchema);
    return 0;
  }
  const SplitPotential s = split_parts(load_or_zero(o));
  const auto rep =
      suris::beta_consistency(s.base, Potential::trig(s.trig), qmax);
  Echo echo = base_echo(o, "rigidity beta-consistency");
  echo["qmax"] = std::to_string(qmax);
  return emit_report(o, echo, rep);
}

int run_rigidity_obstruction(const CommonOpts& o, long r, long k) {
  if (o.schema) {
    print_schema(
        "rigidity obstruction: sup |V'| = the Euler-Lagrange defect of the"
        " rigid rotation orbit with rotation number r/k; the potential must be"
        " (r/k)-periodic.  Zero iff a k-periodic rigid invariant curve can"
        " exist.\n"
        "stdout: the value alone.\n"
        "csv columns: r,k,obstruction\n"
        "json: {tool_version, config, r, k, obstruction}\n"
        "exit: 0; 1 on error (e.g. the periodicity check fails).\n");
    return 0;
  }
  const Potential v = load_or_zero(o);
  const double ob = suris::periodic_rigidity_obstruction(v, r, k);

  Echo echo = base_echo(o, "rigidity obstruction");
  echo["r"] = std::to_string(r);
  echo["k"] = std::to_string(k);
  std::ostringstream csv;
  csv << csv_header(echo) << "r,k,obstruction\n"
      << r << "," << k << "," << suris::format_double(ob) << "\n";
  Json doc = json_base(echo);
  doc["r"] = r;
  doc["k"] = k;
  doc["obstruction"] = ob;
  emit(o, csv.str(), doc);

  std::cout << suris::format_double(ob) << std::endl;
  return 0;
}

int run_project(const CommonOpts& o, int iterations) {
  if (o.schema) {
    print_schema(
        "project: iterated projection of the document's trig part W onto the"
        " Suris family, starting from its Suris part.  Each step moves the"
        " parameters by the low-mode projection and replaces W by"
        " V_S + W - V_S~.\n"
        "csv columns: step,residual_norm\n"
        "json: {tool_version, config, params_out:{A,B,C,D}, residual_norms,"
        " trust_halvings}\n"
        "exit: 0; 1 on error (no threshold gate).\n");
    return 0;
  }
  const SplitPotential s = split_parts(load_or_zero(o));
  const auto res =
      suris::project_to_suris(s.base, Potential::trig(s.trig), iterations, o.grid);

  Echo echo = base_echo(o, "project");
  echo["iterations"] = std::to_string(iterations);
  std::ostringstream csv;
  csv << csv_header(echo) << "step,residual_norm\n";
  for (size_t i = 0; i < res.residual_norms.size(); ++i)
    csv << i << "," << suris::format_double(res.residual_norms[i]) << "\n";
  Json doc = json_base(echo);
  doc["params_out"] = {{"A", res.params_out.A},
                       {"B", res.params_out.B},
                       {"C", res.params_out.C},
                       {"D", res.params_out.D}};
  doc["residual_norms"] = res.residual_norms;
  doc["trust_halvings"] = res.trust_halvings;
  emit(o, csv.str(), doc);

  std::cout << "project: ||W||_1 "
            << suris::format_double(res.residual_norms.front()) << " -> "
            << suris::format_double(res.residual_norms.back()) << " in "
            << (res.residual_norms.size() - 1) << " steps (trust halvings "
            << res.trust_halvings << ")" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"suris_lab: numerical laboratory for the Suris standard map"};
  app.set_version_flag("--version", suris::kToolVersion);
  app.require_subcommand(1);
  int rc = 0;

  {
    auto o = std::make_shared<CommonOpts>();
    auto seeds = std::make_shared<long>(20);
    auto iters = std::make_shared<long>(1000);
    auto seed = std::make_shared<unsigned long long>(12345);
    auto* cmd = app.add_subcommand("phase-portrait",
                                   "Orbit cloud from random seeds");
    add_common(cmd, *o);
    cmd->add_option("--seeds", *seeds, "Number of random seeds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--iters", *iters, "Iterations per seed")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", *seed, "RNG seed (recorded in the header)")
        ->capture_default_str();
    cmd->callback(
        [=, &rc] { rc = run_phase_portrait(*o, *seeds, *iters, *seed); });
  }
  {
    auto o = std::make_shared<CommonOpts>();
    auto p = std::make_shared<long>(1);
    auto q = std::make_shared<long>(4);
    auto pin = std::make_shared<double>(0.0);
    auto* cmd = app.add_subcommand("orbit", "Minimal (p,q)-periodic orbit");
    add_common(cmd, *o);
    cmd->add_option("--p", *p, "Winding number p")->capture_default_str();
    cmd->add_option("--q", *q, "Period q")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    auto* pin_opt =
        cmd->add_option("--pin", *pin, "Pin x_0 at this value (else free orbit)");
    cmd->callback([=, &rc] {
      rc = run_orbit(*o, *p, *q,
                     *pin_opt ? std::optional<double>(*pin) : std::nullopt);
    });
  }
  {
    auto o = std::make_shared<CommonOpts>();
    auto eta = std::make_shared<double>(0.0);
    auto rho = std::make_shared<double>(0.0);
    auto sigma = std::make_shared<int>(+1);
    auto k = std::make_shared<int>(0);
    auto* cmd = app.add_subcommand("curve", "Invariant graph y = psi(x)");
    add_common(cmd, *o);
    auto* eta_opt = cmd->add_option("--eta", *eta, "Level of the first integral");
    auto* rho_opt = cmd->add_option("--rho", *rho, "Target rotation number");
    cmd->add_option("--sigma", *sigma, "Branch sign (+1/-1)")
        ->check(CLI::IsMember({-1, 1}))
        ->capture_default_str();
    cmd->add_option("--k", *k, "Momentum sheet")->capture_default_str();
    cmd->callback([=, &rc] {
      rc = run_curve(*o, *eta_opt ? std::optional<double>(*eta) : std::nullopt,
                     *rho_opt ? std::optional<double>(*rho) : std::nullopt,
                     *sigma, *k);
    });
  }
  {
    auto o = std::make_shared<CommonOpts>();
    auto eta = std::make_shared<double>(0.0);
    auto rho = std::make_shared<double>(0.0);
    auto* cmd = app.add_subcommand("chart", "Angle coordinate on one curve");
    add_common(cmd, *o);
    auto* eta_opt = cmd->add_option("--eta", *eta, "Level of the first integral");
    auto* rho_opt = cmd->add_option("--rho", *rho, "Target rotation number");
    cmd->callback([=, &rc] {
      rc = run_chart(*o, *eta_opt ? std::optional<double>(*eta) : std::nullopt,
                     *rho_opt ? std::optional<double>(*rho) : std::nullopt);
    });
  }
  {
    auto o = std::make_shared<CommonOpts>();
    auto qmin = std::make_shared<long>(0);
    auto qmax = std::make_shared<long>(32);
    auto* cmd =
        app.add_subcommand("coeffs", "Deformed-basis coefficients <W, f_q>");
    add_common(cmd, *o);
    cmd->add_option("--qmin", *qmin, "Lowest mode")->capture_default_str();
    cmd->add_option("--qmax", *qmax, "Highest mode")->capture_default_str();
    cmd->callback([=, &rc] { rc = run_coeffs(*o, *qmin, *qmax); });
  }
  {
    auto o = std::make_shared<CommonOpts>();
    auto p = std::make_shared<long>(1);
    auto q = std::make_shared<long>(4);
    auto* cmd = app.add_subcommand("beta", "Minimal average action beta(p/q)");
    add_common(cmd, *o);
    cmd->add_option("--p", *p, "Winding number p")->capture_default_str();
    cmd->add_option("--q", *q, "Period q")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->callback([=, &rc] { rc = run_beta(*o, *p, *q); });
  }
  {
    auto o = std::make_shared<CommonOpts>();
    auto qmax = std::make_shared<long>(12);
    auto* cmd =
        app.add_subcommand("spectrum", "Action spectrum over window rationals");
    add_common(cmd, *o);
    cmd->add_option("--qmax", *qmax, "Largest denominator")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->callback([=, &rc] { rc = run_spectrum(*o, *qmax); });
  }
  {
    auto* rig = app.add_subcommand("rigidity", "Estimate verification drivers");
    rig->require_subcommand(1);
    {
      auto o = std::make_shared<CommonOpts>();
      auto eps = std::make_shared<double>(0.02);
      auto qmax = std::make_shared<long>(32);
      auto threshold = std::make_shared<double>(1e-6);
      auto* cmd = rig->add_subcommand("orthogonality",
                                      "Chart modes vs derivative modes");
      add_common(cmd, *o);
      cmd->add_option("--eps", *eps, "Eccentricity (generic direction)")
          ->capture_default_str();
      cmd->add_option("--qmax", *qmax, "Highest chart mode")
          ->capture_default_str();
      cmd->add_option("--threshold", *threshold, "Orthogonality threshold")
          ->capture_default_str();
      cmd->callback([=, &rc] {
        rc = run_rigidity_orthogonality(*o, *eps, *qmax, *threshold);
      });
    }
    {
      auto o = std::make_shared<CommonOpts>();
      auto qmax = std::make_shared<long>(32);
      auto* cmd = rig->add_subcommand("tail", "High-mode coefficient decay");
      add_common(cmd, *o);
      cmd->add_option("--qmax", *qmax, "Highest mode")->capture_default_str();
      cmd->callback([=, &rc] { rc = run_rigidity_tail(*o, *qmax); });
    }
    {
      auto o = std::make_shared<CommonOpts>();
      auto qmax = std::make_shared<long>(16);
      auto halvings = std::make_shared<int>(4);
      auto dnorm = std::make_shared<double>(1e-3);
      auto delta = std::make_shared<std::vector<double>>();
      auto* cmd = rig->add_subcommand("action-coefficient",
                                      "Quadratic coefficient bound");
      add_common(cmd, *o);
      cmd->add_option("--qmax", *qmax, "Highest mode")->capture_default_str();
      cmd->add_option("--halvings", *halvings, "Sweep points")
          ->capture_default_str();
      cmd->add_option("--delta-norm", *dnorm,
                      "Increment size (generic direction)")
          ->capture_default_str();
      cmd->add_option("--delta", *delta, "Explicit increment: A B C D")
          ->expected(4);
      cmd->callback([=, &rc] {
        rc = run_rigidity_action_coefficient(*o, *qmax, *halvings, *dnorm,
                                             *delta);
      });
    }
    {
      auto o = std::make_shared<CommonOpts>();
      auto qmax = std::make_shared<long>(10);
      auto* cmd = rig->add_subcommand("beta-consistency",
                                      "beta differences on window rationals");
      add_common(cmd, *o);
      cmd->add_option("--qmax", *qmax, "Largest denominator")
          ->capture_default_str();
      cmd->callback([=, &rc] { rc = run_rigidity_beta_consistency(*o, *qmax); });
    }
    {
      auto o = std::make_shared<CommonOpts>();
      auto r = std::make_shared<long>(1);
      auto k = std::make_shared<long>(2);
      auto* cmd = rig->add_subcommand("obstruction",
                                      "Rigid-rotation obstruction sup |V'|");
      add_common(cmd, *o);
      cmd->add_option("--r", *r, "Rotation numerator")->capture_default_str();
      cmd->add_option("--k", *k, "Rotation denominator")->capture_default_str();
      cmd->callback([=, &rc] { rc = run_rigidity_obstruction(*o, *r, *k); });
    }
  }
  {
    auto o = std::make_shared<CommonOpts>();
    auto iterations = std::make_shared<int>(5);
    auto* cmd =
        app.add_subcommand("project", "Project the trig part onto the Suris family");
    add_common(cmd, *o);
    cmd->add_option("--iterations", *iterations, "Projection steps")
        ->capture_default_str();
    cmd->callback([=, &rc] { rc = run_project(*o, *iterations); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const suris::NoConvergenceError& e) {
    std::cerr << "threshold failure: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return rc;
}
