#include "commands.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qsector/fan.hpp"
#include "qsector/fourier.hpp"
#include "qsector/io.hpp"
#include "qsector/solver.hpp"

namespace qsector::cli {

namespace {

using io::Json;

struct LoadedInput {
  std::string path;
  std::vector<MassSpec> masses;
};

std::vector<LoadedInput> load_inputs(const RunConfig& cfg) {
  std::vector<LoadedInput> out;
  for (const auto& path : cfg.measures) out.push_back({path, io::load_masses(path)});
  return out;
}

std::vector<MassSpec> all_masses(const std::vector<LoadedInput>& inputs) {
  std::vector<MassSpec> out;
  for (const auto& in : inputs) out.insert(out.end(), in.masses.begin(), in.masses.end());
  return out;
}

void write_manifest(const RunConfig& cfg, const std::vector<LoadedInput>& inputs, const Json& summary,
                    const std::vector<std::string>& outputs) {
  if (cfg.out.empty()) return;
  Json in = Json::array();
  for (const auto& input : inputs) {
    Json masses = Json::array();
    for (const auto& m : input.masses) masses.push_back(io::to_json(m));
    in.push_back(Json{{"path", input.path}, {"masses", masses}});
  }
  Json manifest{{"tool", "qsector"},
                {"version", QSECTOR_VERSION},
                {"subcommand", cfg.subcommand},
                {"argv", cfg.argv},
                {"q", cfg.q},
                {"grid", cfg.grid},
                {"starts", cfg.starts},
                {"tol", cfg.tol},
                {"bound_slack", cfg.bound_slack},
                {"exponents", cfg.exponents},
                {"n", cfg.n}};
  manifest["seed"] = cfg.seed ? Json(*cfg.seed) : Json(nullptr);
  manifest["inputs"] = in;
  manifest["outputs"] = outputs;
  manifest["summary"] = summary;
  io::write_text(cfg.out + ".manifest.json", manifest.dump(2) + "\n");
}

std::string format(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

Configuration scan_configuration(const RunConfig& cfg, int dim) {
  if (cfg.apex) {
    if (dim != 1) throw std::invalid_argument("--apex is only valid for dim = 1 masses");
    return Configuration::from_apex(*cfg.apex);
  }
  if (cfg.a.empty() || !cfg.b) throw std::invalid_argument("scan needs --apex or both --a and --b");
  if (static_cast<int>(cfg.a.size()) != dim) throw std::invalid_argument("--a must have one entry per dimension");
  return Configuration(cfg.a, *cfg.b);
}

struct Check {
  std::size_t mass;
  std::string name;
  double value;
  double bound;
  std::string status;
};

}  // namespace

Complex parse_complex(const std::string& text) {
  std::istringstream is(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(is >> re)) throw std::invalid_argument("cannot parse complex number '" + text + "'");
  if (is >> comma) {
    if (comma != ',' || !(is >> im)) throw std::invalid_argument("cannot parse complex number '" + text + "'");
  }
  std::string rest;
  if (is >> rest) throw std::invalid_argument("cannot parse complex number '" + text + "'");
  return {re, im};
}

void validate(const RunConfig& cfg) {
  const auto& sc = cfg.subcommand;
  const bool needs_out = sc != "tailsum";
  if (needs_out && cfg.out.empty()) throw std::invalid_argument(sc + ": --out is required");
  if ((sc == "solve" || sc == "verify" || sc == "adversarial") && !cfg.seed)
    throw std::invalid_argument(sc + ": --seed is required for stochastic steps");
  if ((sc == "solve" || sc == "verify" || sc == "scan" || sc == "fan6" || sc == "certify") && cfg.measures.empty())
    throw std::invalid_argument(sc + ": at least one measure file is required");
  if (cfg.q < 2) throw std::invalid_argument("--q must be at least 2");
  if (sc == "solve") {
    if (cfg.exponents.empty()) throw std::invalid_argument("solve: --exponents is required");
    for (int m : cfg.exponents)
      if (m <= 0) throw std::invalid_argument("solve: exponents must be positive (m_j > 0)");
  }
  if (sc == "verify" && cfg.n < 1) throw std::invalid_argument("verify: --n must be at least 1");
  if (sc == "certify" && cfg.q < 3) throw std::invalid_argument("certify: --q must be at least 3");
  if (cfg.grid < 8 || (cfg.grid & (cfg.grid - 1)) != 0)
    throw std::invalid_argument("--grid must be a power of two >= 8");
  if (sc == "tailsum" && (cfg.n < 0 || cfg.terms < 1)) throw std::invalid_argument("tailsum: need n >= 0 and terms >= 1");
  if (cfg.starts < 1) throw std::invalid_argument("--starts must be at least 1");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const auto inputs = load_inputs(cfg);
  SolveProblem p;
  p.masses = all_masses(inputs);
  p.exponents = cfg.exponents;
  p.q = cfg.q;
  p.grid = cfg.grid;
  p.tol = cfg.tol;
  p.starts = cfg.starts;
  p.seed = *cfg.seed;
  p.validate();
  const SolveResult r = solve(p);
  io::write_text(cfg.out, io::to_json(r, p).dump(2) + "\n");
  write_manifest(cfg, inputs, Json{{"converged", r.converged}, {"residual", r.residual}}, {cfg.out});
  out << (r.converged ? "converged" : "not converged") << " residual=" << format(r.residual)
      << " threshold=" << format(r.threshold);
  if (r.hyperplane.apex) out << " apex=" << format(r.hyperplane.apex->real()) << "," << format(r.hyperplane.apex->imag());
  out << "\n";
  return r.converged ? kOk : kNotConverged;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto inputs = load_inputs(cfg);
  const std::vector<MassSpec> distinct = all_masses(inputs);
  const int dim = distinct.front().dim();
  const int expected = static_cast<int>(distinct.size()) * cfg.n;
  if (dim != expected) {
    std::ostringstream os;
    os << "verify: " << distinct.size() << " masses with n = " << cfg.n << " need dim " << expected << " (got "
       << dim << ")";
    throw std::invalid_argument(os.str());
  }
  SolveProblem p;
  for (const auto& m : distinct) {
    for (int k = 1; k <= cfg.n; ++k) {
      p.masses.push_back(m);
      p.exponents.push_back(k);
    }
  }
  p.q = cfg.q;
  p.grid = cfg.grid;
  p.tol = cfg.tol;
  p.starts = cfg.starts;
  p.seed = *cfg.seed;
  p.validate();
  const SolveResult r = solve(p);

  std::vector<Check> checks;
  const double slack = cfg.bound_slack;
  for (std::size_t j = 0; j < distinct.size(); ++j) {
    const DeviationReport& d = r.per_mass[j * static_cast<std::size_t>(cfg.n)];
    const double total = distinct[j].total_mass();
    const std::string gated = r.converged ? "" : "skip";
    auto status = [&](bool ok) { return gated.empty() ? (ok ? "pass" : "fail") : gated; };
    const double l2_bound = l2_bound_fraction(cfg.q, cfg.n) * total;
    checks.push_back({j, "l2_deviation", d.l2, l2_bound, status(d.l2 <= l2_bound + slack)});
    const double chain = std::sqrt(2.0 * tail_sum(cfg.q, cfg.n)) * d.variation;
    checks.push_back({j, "l2_variation_chain", d.l2, chain, status(d.l2 <= chain + slack)});
    const double v_bound = total / kPi + 1e-3 * total;
    checks.push_back({j, "variation", d.variation, v_bound, d.variation <= v_bound ? "pass" : "fail"});
    double linf = d.linf, linf_bound_value = d.bound_linf;
    bool reliable = d.acceleration_reliable;
    if (!reliable && !distinct[j].has_disks() && r.converged) {
      const FourierProfile fine = resolved_profile(distinct[j], r.x, cfg.q, cfg.grid);
      const AccelerationEstimate a = acceleration(fine);
      reliable = a.reliable;
      linf = linf_deviation(fine);
      linf_bound_value = linf_bound(a.value, cfg.q, cfg.n);
    }
    checks.push_back({j, "linf_acceleration", linf, linf_bound_value,
                      reliable ? status(linf <= linf_bound_value + slack) : "skip"});
  }

  std::ostringstream csv;
  csv << "mass,check,value,bound,status\n";
  bool violated = false;
  for (const auto& c : checks) {
    csv << c.mass << "," << c.name << "," << format(c.value) << "," << format(c.bound) << "," << c.status << "\n";
    violated = violated || c.status == "fail";
  }
  io::write_text(cfg.out, csv.str());
  write_manifest(cfg, inputs,
                 Json{{"converged", r.converged}, {"residual", r.residual}, {"violation", violated},
                      {"solution", io::to_json(r, p)}},
                 {cfg.out});
  out << csv.str();
  out << (r.converged ? "converged" : "not converged") << " residual=" << format(r.residual) << "\n";
  if (violated) return kBoundViolation;
  return r.converged ? kOk : kNotConverged;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const auto inputs = load_inputs(cfg);
  const std::vector<MassSpec> masses = all_masses(inputs);
  const int dim = masses.front().dim();
  for (const auto& m : masses)
    if (m.dim() != dim) throw std::invalid_argument("scan: all masses must share one dimension");
  const Configuration x = scan_configuration(cfg, dim);
  std::vector<FourierProfile> profiles;
  for (const auto& m : masses) profiles.push_back(profile(m, x, cfg.q, cfg.grid));

  std::ostringstream csv;
  csv << "theta";
  if (profiles.size() == 1) {
    csv << ",f_theta";
  } else {
    for (std::size_t j = 0; j < profiles.size(); ++j) csv << ",f_theta_" << j;
  }
  csv << "\n";
  for (int k = 0; k < cfg.grid; ++k) {
    csv << format(profiles.front().theta(k));
    for (const auto& p : profiles) csv << "," << format(p.samples[static_cast<std::size_t>(k)]);
    csv << "\n";
  }
  io::write_text(cfg.out, csv.str());
  std::vector<std::string> outputs{cfg.out};

  if (!cfg.coeffs_out.empty()) {
    std::ostringstream cc;
    if (profiles.size() > 1) cc << "mass,";
    cc << "m,re_c,im_c,abs_c\n";
    for (std::size_t j = 0; j < profiles.size(); ++j) {
      for (int m = 0; m <= cfg.grid / 2; ++m) {
        const Complex c = profiles[j].coefficient(m);
        if (profiles.size() > 1) cc << j << ",";
        cc << m << "," << format(c.real()) << "," << format(c.imag()) << "," << format(std::abs(c)) << "\n";
      }
    }
    io::write_text(cfg.coeffs_out, cc.str());
    outputs.push_back(cfg.coeffs_out);
  }
  Json summary = Json::array();
  for (const auto& p : profiles)
    summary.push_back(Json{{"l2", l2_deviation(p)}, {"linf", linf_deviation(p)}, {"variation", total_variation(p)}});
  write_manifest(cfg, inputs, Json{{"configuration", io::to_json(x)}, {"profiles", summary}}, outputs);
  out << "wrote " << cfg.grid << " samples for " << profiles.size() << " mass(es)\n";
  return kOk;
}

int cmd_fan6(const RunConfig& cfg, std::ostream& out) {
  const auto inputs = load_inputs(cfg);
  const MassSpec m = all_masses(inputs).front();
  const PlanarMassSpec planar = planar_from_mass(m);
  const SixFan fan = regular_six_fan(planar, cfg.scan_points);
  Json j = io::to_json(fan);
  io::write_text(cfg.out, j.dump(2) + "\n");
  write_manifest(cfg, inputs, j, {cfg.out});
  const double tol = 1e-8 * planar.total_mass();
  bool ok = !fan.discontinuous;
  for (double e : fan.bisection_errors) ok = ok && e <= tol;
  out << "center=" << format(fan.center.real()) << "," << format(fan.center.imag())
      << " base_angle=" << format(fan.base_angle) << (ok ? " ok" : " bisection check failed") << "\n";
  return ok ? kOk : kBoundViolation;
}

int cmd_adversarial(const RunConfig& cfg, std::ostream& out) {
  AdversarialSpec spec{cfg.q, cfg.n, cfg.r, cfg.delta};
  const PlanarMassSpec p = adversarial_mass(spec, *cfg.seed);
  Json j = io::to_json(p);
  j["adversarial"] = Json{{"q", spec.q}, {"n", spec.n}, {"r", spec.r}, {"delta", spec.delta}, {"seed", *cfg.seed}};
  io::write_text(cfg.out, j.dump(2) + "\n");
  write_manifest(cfg, {}, j["adversarial"], {cfg.out});
  out << "wrote " << 2 * spec.n << " disks to " << cfg.out << "\n";
  return kOk;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  const auto inputs = load_inputs(cfg);
  const MassSpec m = all_masses(inputs).front();
  const PlanarMassSpec planar = planar_from_mass(m);
  const double total = planar.total_mass();
  const CertificateReport rep = centerpoint_certificate(planar, cfg.q, cfg.grid);

  std::ostringstream csv;
  csv << "quantity,value,bound,status\n";
  bool violated = !rep.pass;
  csv << "six_fan_linf," << format(rep.linf) << "," << format(rep.bound) << "," << (rep.pass ? "pass" : "fail") << "\n";
  const bool half_ok = rep.max_sector <= 0.5 * total + 1e-6;
  violated = violated || !half_ok;
  csv << "max_sector," << format(rep.max_sector) << "," << format(0.5 * total) << "," << (half_ok ? "pass" : "fail")
      << "\n";
  Json summary{{"center", io::to_json(rep.fan.center)}, {"linf", rep.linf}, {"bound", rep.bound},
               {"worst_theta", rep.worst_theta}};
  if (cfg.sweep_points > 1) {
    const double extent = cfg.sweep_extent > 0.0 ? cfg.sweep_extent : 1.1 * (cfg.r + 1.0);
    const int n = std::max(1, static_cast<int>(planar.components().size()) / 2);
    const CenterSweep sweep = sweep_centers(planar, cfg.q, extent, cfg.sweep_points, cfg.grid);
    const double lower = (adversarial_lower_bound(cfg.q, n) - 1e-3) * total;
    const bool ok = sweep.min_deviation >= lower;
    violated = violated || !ok;
    csv << "center_sweep_min_linf," << format(sweep.min_deviation) << "," << format(lower) << ","
        << (ok ? "pass" : "fail") << "\n";
    summary["sweep"] = Json{{"extent", extent}, {"points", cfg.sweep_points}, {"min", sweep.min_deviation},
                            {"argmin", io::to_json(sweep.argmin)}, {"lower_bound", lower}};
  }
  io::write_text(cfg.out, csv.str());
  std::vector<std::string> outputs{cfg.out};
  if (!cfg.profile_out.empty()) {
    std::ostringstream prof;
    prof << "theta,f_theta,deviation\n";
    for (std::size_t k = 0; k < rep.thetas.size(); ++k)
      prof << format(rep.thetas[k]) << "," << format(rep.values[k]) << ","
           << format(std::abs(rep.values[k] - total / cfg.q)) << "\n";
    io::write_text(cfg.profile_out, prof.str());
    outputs.push_back(cfg.profile_out);
  }
  write_manifest(cfg, inputs, summary, outputs);
  out << csv.str();
  return violated ? kBoundViolation : kOk;
}

int cmd_tailsum(const RunConfig& cfg, std::ostream& out) {
  const double closed = tail_sum(cfg.q, cfg.n);
  const double direct = tail_sum_direct(cfg.q, cfg.n, cfg.terms);
  std::ostringstream csv;
  csv << "q,n,closed_form,direct,difference\n";
  csv << cfg.q << "," << cfg.n << "," << format(closed) << "," << format(direct) << "," << format(closed - direct)
      << "\n";
  if (!cfg.out.empty()) {
    io::write_text(cfg.out, csv.str());
    write_manifest(cfg, {}, Json{{"closed_form", closed}, {"direct", direct}, {"terms", cfg.terms}}, {cfg.out});
  }
  out << csv.str();
  // Terms past `terms` contribute at most (1 - 1/q) / terms.
  const double remainder = (1.0 - 1.0 / cfg.q) / static_cast<double>(cfg.terms);
  return std::abs(closed - direct) <= 1e-6 + remainder ? kOk : kBoundViolation;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    const auto& sc = cfg.subcommand;
    if (sc == "solve") return cmd_solve(cfg, out);
    if (sc == "verify") return cmd_verify(cfg, out);
    if (sc == "scan") return cmd_scan(cfg, out);
    if (sc == "fan6") return cmd_fan6(cfg, out);
    if (sc == "adversarial") return cmd_adversarial(cfg, out);
    if (sc == "certify") return cmd_certify(cfg, out);
    if (sc == "tailsum") return cmd_tailsum(cfg, out);
    err << "error: unknown subcommand '" << sc << "'\n";
    return kInputError;
  } catch (const io::SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const DegenerateConfiguration& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier analysis of regular q-sector measures and centering hyperplanes"};
  app.require_subcommand(1);
  RunConfig cfg;
  for (int i = 0; i < argc; ++i) cfg.argv.emplace_back(argv[i]);

  std::uint64_t seed = 0;
  std::string apex;
  std::vector<std::string> a_parts;
  std::string b_part;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "number of sectors")->capture_default_str();
    sub->add_option("--grid", cfg.grid, "angular grid size (power of two)")->capture_default_str();
    sub->add_option("--out", cfg.out, "output path");
  };
  auto measures = [&](CLI::App* sub, const char* flag) {
    sub->add_option(flag, cfg.measures, "measure specification file(s)")->delimiter(',')->required();
  };
  auto solver_opts = [&](CLI::App* sub) {
    sub->add_option("--starts", cfg.starts, "multistart count")->capture_default_str();
    sub->add_option("--seed", seed, "random seed")->required();
    sub->add_option("--tol", cfg.tol, "residual tolerance relative to the largest total mass")->capture_default_str();
    sub->add_option("--bound-slack", cfg.bound_slack, "absolute slack on bound checks")->capture_default_str();
  };

  auto* solve_cmd = app.add_subcommand("solve", "find a hyperplane annihilating the prescribed coefficients");
  measures(solve_cmd, "--measures");
  common(solve_cmd);
  solver_opts(solve_cmd);
  solve_cmd->add_option("--exponents", cfg.exponents, "one positive exponent per mass")->delimiter(',')->required();

  auto* verify_cmd = app.add_subcommand("verify", "annihilate m = 1..n and check the deviation bounds");
  measures(verify_cmd, "--measures");
  common(verify_cmd);
  solver_opts(verify_cmd);
  verify_cmd->add_option("--n", cfg.n, "annihilate c_1..c_n per mass")->capture_default_str();

  auto* scan_cmd = app.add_subcommand("scan", "sample the sector-measure profile and its coefficients");
  measures(scan_cmd, "--measure");
  common(scan_cmd);
  scan_cmd->add_option("--apex", apex, "apex re,im (dim 1)");
  scan_cmd->add_option("--a", a_parts, "a coordinates, one re,im per dimension");
  scan_cmd->add_option("--b", b_part, "b as re,im");
  scan_cmd->add_option("--coeffs-out", cfg.coeffs_out, "CSV of Fourier coefficients");

  auto* fan_cmd = app.add_subcommand("fan6", "regular 6-fan of three bisecting lines");
  measures(fan_cmd, "--measure");
  common(fan_cmd);
  fan_cmd->add_option("--scan-points", cfg.scan_points, "directions scanned on the half circle")->capture_default_str();

  auto* adv_cmd = app.add_subcommand("adversarial", "two far clusters of small disks");
  common(adv_cmd);
  adv_cmd->add_option("--n", cfg.n, "disks per cluster")->capture_default_str();
  adv_cmd->add_option("--r", cfg.r, "cluster separation scale")->capture_default_str();
  adv_cmd->add_option("--delta", cfg.delta, "disk radius")->capture_default_str();
  adv_cmd->add_option("--seed", seed, "random seed")->required();

  auto* cert_cmd = app.add_subcommand("certify", "uniform deviation at the 6-fan center");
  measures(cert_cmd, "--measure");
  common(cert_cmd);
  cert_cmd->add_option("--profile-out", cfg.profile_out, "per-angle CSV");
  cert_cmd->add_option("--sweep-points", cfg.sweep_points, "center grid points per axis (0 = no sweep)");
  cert_cmd->add_option("--sweep-extent", cfg.sweep_extent, "half-width of the center grid");
  cert_cmd->add_option("--r", cfg.r, "support scale used for the default sweep extent");

  auto* tail_cmd = app.add_subcommand("tailsum", "sum of m^-2 over m > n, m not divisible by q");
  tail_cmd->add_option("--q", cfg.q)->capture_default_str();
  tail_cmd->add_option("--n", cfg.n)->capture_default_str();
  tail_cmd->add_option("--terms", cfg.terms, "terms in the direct cross-check")->capture_default_str();
  tail_cmd->add_option("--out", cfg.out, "optional CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInputError;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.subcommand == "solve" || cfg.subcommand == "verify" || cfg.subcommand == "adversarial") cfg.seed = seed;
  try {
    if (!apex.empty()) cfg.apex = parse_complex(apex);
    for (const auto& s : a_parts) cfg.a.push_back(parse_complex(s));
    if (!b_part.empty()) cfg.b = parse_complex(b_part);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return run(cfg, out, err);
}

}  // namespace qsector::cli
