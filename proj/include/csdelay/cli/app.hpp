#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "csdelay/analysis/certificate.hpp"
#include "csdelay/analysis/classify.hpp"
#include "csdelay/analysis/halanay.hpp"
#include "csdelay/analysis/monitors.hpp"
#include "csdelay/analysis/report.hpp"
#include "csdelay/core/initial_history.hpp"
#include "csdelay/core/scenario_io.hpp"
#include "csdelay/dynamics/integrator.hpp"
#include "csdelay/dynamics/trajectory_csv.hpp"

#ifndef CSDELAY_VERSION
#define CSDELAY_VERSION "0.0.0"
#endif

namespace csdelay::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kBadInput = 2,
  kDiverged = 3,
  kInfeasible = 4,
  kMonitorFailed = 5,
};

struct Streams {
  std::ostream& out = std::cout;
  std::ostream& err = std::cerr;
};

namespace detail {

inline std::string command_line(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

inline void write_doc(const KeyValueDoc& doc, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("", "cannot write '" + path.string() + "'");
  doc.write(f);
}

/// Manifest: the scenario sections plus [run], [artifacts] and [outcome].
inline void write_manifest(const std::filesystem::path& path, const ScenarioConfig& cfg,
                           const std::vector<std::string>& args,
                           const std::vector<std::pair<std::string, std::string>>& artifacts,
                           const std::vector<std::pair<std::string, std::string>>& outcome,
                           double wall_seconds) {
  KeyValueDoc doc = scenario_to_doc(cfg);
  doc.set("run", "command", command_line(args));
  doc.set("run", "version", CSDELAY_VERSION);
  doc.set("run", "wall_time", wall_seconds);
  for (const auto& [k, v] : artifacts) doc.set("artifacts", k, v);
  for (const auto& [k, v] : outcome) doc.set("outcome", k, v);
  write_doc(doc, path);
}

/// Scenario echoed in a manifest, ignoring the run bookkeeping sections.
inline ScenarioConfig manifest_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open manifest '" + path.string() + "'");
  const KeyValueDoc doc = KeyValueDoc::parse(in);
  KeyValueDoc scenario;
  for (const auto& s : doc.sections()) {
    if (s == "run" || s == "artifacts" || s == "outcome") continue;
    for (const auto& k : doc.keys(s)) scenario.set(s, k, doc.get(s, k));
  }
  return scenario_from_doc(scenario, path.parent_path());
}

inline ScenarioConfig load(const std::string& path, std::optional<long long> seed_override) {
  ScenarioConfig cfg = load_scenario(path);
  if (seed_override) {
    if (*seed_override < 0) throw ConfigError("--seed-override", "must be nonnegative");
    if (std::holds_alternative<RandomHistory>(cfg.initial))
      cfg.rng_seed = static_cast<std::uint64_t>(*seed_override);
  }
  return cfg;
}

inline CertificateVariant parse_variant(const std::string& s) {
  if (s == "general") return CertificateVariant::General;
  if (s == "constant_velocity" || s == "constant-velocity") return CertificateVariant::ConstantVelocity;
  throw ConfigError("--variant", "expected general or constant_velocity");
}

/// Scale all velocity differences by `s` (velocities and their derivatives taken about the
/// per-frame mean), which scales d_v on the initial interval by exactly `s`.
inline HistoryBuffer scale_velocity_spread(const HistoryBuffer& hist, double s) {
  const long m = hist.steps_per_delay();
  const std::size_t n = hist.agents(), d = hist.dim();
  std::vector<Frame> frames;
  std::vector<std::vector<double>> rates;
  auto rescale = [&](std::vector<double>& v) {
    for (std::size_t c = 0; c < d; ++c) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += v[i * d + c];
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) v[i * d + c] = mean + s * (v[i * d + c] - mean);
    }
  };
  for (long k = -m; k <= 0; ++k) {
    Frame f = hist.frame(k);
    rescale(f.velocities);
    rescale(f.accelerations);
    rates.push_back(hist.position_rate_left(k));
    frames.push_back(std::move(f));
  }
  HistoryBuffer out(hist.tau(), hist.steps_per_delay(), n, d);
  out.set_initial(std::move(frames), std::move(rates));
  return out;
}

inline ConditionInputs condition_inputs(const ScenarioConfig& cfg, const HistoryBuffer& hist) {
  const auto d0 = initial_diameters(hist);
  return {d0.d_x, d0.d_v, cfg.tau, cfg.influence};
}

struct VerifyResult {
  int code = kOk;
  KeyValueDoc report;
  std::optional<Trajectory> trajectory;
};

inline VerifyResult verify(const ScenarioConfig& base, CertificateVariant variant,
                           double rate_multiplier) {
  VerifyResult res;
  const auto hist = build_initial_history(base);
  const auto outcome = find_certificate(condition_inputs(base, hist), variant);
  add_certificate(res.report, outcome);
  const auto* cert = std::get_if<Certificate>(&outcome);
  if (cert == nullptr) {
    res.report.set("verify", "status", "infeasible; monitors skipped");
    res.code = kInfeasible;
    return res;
  }
  if (!base.scheme.influence_based())
    throw ScopeError("verify needs classical or normalized weights; constant coupling is outside "
                     "the certificate's hypotheses");

  ScenarioConfig cfg = base;
  cfg.horizon = std::max(base.horizon, 20.0 * cfg.tau + 10.0 / cert->rate);
  Trajectory traj = integrate(cfg, hist);
  res.report.set("verify", "horizon", cfg.horizon);
  res.report.set("verify", "rate_multiplier", rate_multiplier);

  bool ok = !traj.diverged;
  if (traj.diverged) {
    res.report.set("verify", "diverged_at", traj.blowup_time);
  }
  const auto env = monitor_envelope(traj, *cert, rate_multiplier);
  add_monitor(res.report, env);
  ok = ok && env.pass;
  const auto start = monitor_startup_bound(traj);
  add_monitor(res.report, start);
  ok = ok && start.pass;
  const double h = traj.step;
  const double t_lo = cfg.tau + 2.0 * h;
  const double t_hi = traj.end_time() - 3.0 * h;
  if (t_hi > t_lo) {
    const auto ineq = monitor_dv_inequality(traj, t_lo, t_hi);
    add_monitor(res.report, ineq);
    ok = ok && ineq.pass;
  }

  const double gamma = halanay_gamma(4.0 * cfg.tau, cert->psi_bound, cfg.tau);
  const bool ordered = gamma >= cert->rate - 1e-9;
  res.report.set("rate_ordering", "gamma", gamma);
  res.report.set("rate_ordering", "C", cert->rate);
  res.report.set("rate_ordering", "pass", ordered);
  ok = ok && ordered;

  const auto th = flocking_thresholds(*cert);
  const auto verdict = classify_flocking(traj, th);
  res.report.set("flocking", "verdict", verdict_name(verdict));
  res.report.set("flocking", "dx_cap", th.dx_cap);
  res.report.set("flocking", "dv_floor", th.dv_floor);
  double dx_max = 0.0;
  for (const auto& nd : traj.nodes) dx_max = std::max(dx_max, nd.d_x);
  res.report.set("flocking", "dx_max", dx_max);
  res.report.set("flocking", "dv_final", traj.nodes.back().d_v);
  ok = ok && verdict == FlockingVerdict::Flocking;

  res.report.set("verify", "status", ok ? "pass" : "monitor failure");
  res.code = ok ? kOk : kMonitorFailed;
  res.trajectory = std::move(traj);
  return res;
}

struct SweepRow {
  double value = 0.0;
  bool feasible = false;
  double rate = 0.0;
  double margin = 0.0;
  std::string classification = "skipped";
  std::string error;
};

inline SweepRow sweep_point(const ScenarioConfig& base, const std::string& param, double value,
                            CertificateVariant variant, bool simulate) {
  SweepRow row;
  row.value = value;
  ScenarioConfig cfg = base;
  double scale = 1.0;
  if (param == "tau") {
    cfg.tau = value;
    if (!(cfg.horizon > cfg.tau)) cfg.horizon = 2.0 * cfg.tau;
  } else if (param == "beta") {
    cfg.influence = InfluenceSpec::inverse_power(value);
  } else {
    scale = value;
  }
  HistoryBuffer hist = build_initial_history(cfg);
  if (param == "dv0_scale") hist = scale_velocity_spread(hist, scale);
  const auto outcome = find_certificate(condition_inputs(cfg, hist), variant);
  std::optional<Certificate> cert;
  if (const auto* c = std::get_if<Certificate>(&outcome)) {
    cert = *c;
    row.feasible = true;
    row.rate = c->rate;
    row.margin = c->margin;
  } else {
    const auto& inf = std::get<Infeasible>(outcome);
    row.rate = inf.best_rate;
    row.margin = inf.best_margin;
  }
  if (simulate) {
    if (cert) cfg.horizon = std::max(cfg.horizon, 20.0 * cfg.tau + 10.0 / cert->rate);
    const Trajectory traj = integrate(cfg, std::move(hist));
    const auto th = cert ? flocking_thresholds(*cert) : flocking_thresholds(traj);
    row.classification = verdict_name(classify_flocking(traj, th));
  }
  return row;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. `args[0]` is the program name.
inline int run(const std::vector<std::string>& args, Streams io = {}) {
  CLI::App app{"Delayed Cucker-Smale flocking: simulate, certify, verify, sweep"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CSDELAY_VERSION);

  std::string config_path, out_path, report_path, variant_name_opt = "general";
  std::optional<long long> seed_override;
  int threads = 1;
  double rate_multiplier = 1.0;
  std::string param, range;
  int points = 11;
  bool simulate = false;
  double demo_tau = 0.1, demo_coupling = 1.0, demo_horizon = 0.0;
  int demo_steps = 64;

  auto common = [&](CLI::App* sub, bool with_config) {
    if (with_config) sub->add_option("config", config_path, "Scenario file")->required();
    sub->add_option("--seed-override", seed_override, "Replace the random-initial-data seed");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* sim = app.add_subcommand("simulate", "Integrate a scenario and write the trajectory CSV");
  common(sim, true);
  sim->add_option("--out", out_path, "Trajectory CSV")->required();
  sim->add_option("--report", report_path, "Manifest path (default: <out>.manifest)");

  auto* cer = app.add_subcommand("certify", "Search for a flocking certificate");
  common(cer, true);
  cer->add_option("--report", report_path, "Write the report here as well as to stdout");
  cer->add_option("--variant", variant_name_opt, "general | constant_velocity");

  auto* ver = app.add_subcommand("verify", "Certify, simulate and run every monitor");
  common(ver, true);
  ver->add_option("--report", report_path, "Write the report here as well as to stdout");
  ver->add_option("--out", out_path, "Optional trajectory CSV");
  ver->add_option("--variant", variant_name_opt, "general | constant_velocity");
  ver->add_option("--envelope-rate-multiplier", rate_multiplier,
                  "Steepen the checked envelope (non-vacuity check)")
      ->check(CLI::PositiveNumber);

  auto* swp = app.add_subcommand("sweep", "Certify over a range of one parameter");
  common(swp, true);
  swp->add_option("--param", param, "tau | beta | dv0_scale")
      ->required()
      ->check(CLI::IsMember({"tau", "beta", "dv0_scale"}));
  swp->add_option("--range", range, "lo:hi")->required();
  swp->add_option("--points", points, "Number of sample points")->check(CLI::PositiveNumber);
  swp->add_option("--out", out_path, "Sweep CSV")->required();
  swp->add_option("--variant", variant_name_opt, "general | constant_velocity");
  swp->add_flag("--simulate", simulate, "Also simulate and classify each point");

  auto* demo = app.add_subcommand("demo-oscillation",
                                  "Two agents, constant coupling: classify w = v1 - v2");
  common(demo, false);
  demo->add_option("--tau", demo_tau, "Delay")->check(CLI::PositiveNumber);
  demo->add_option("--coupling", demo_coupling, "Coupling kappa")->check(CLI::PositiveNumber);
  demo->add_option("--horizon", demo_horizon, "End time (default 40 tau)");
  demo->add_option("--steps", demo_steps, "Steps per delay")->check(CLI::PositiveNumber);
  demo->add_option("--out", out_path, "Optional CSV of t, w");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    io.out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    io.out << CSDELAY_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    io.err << "error: " << e.what() << '\n';
    return kBadInput;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  try {
    const auto variant = detail::parse_variant(variant_name_opt);

    if (*sim) {
      const auto cfg = detail::load(config_path, seed_override);
      const Trajectory traj = integrate(cfg);
      {
        std::ofstream f(out_path);
        if (!f) throw ConfigError("--out", "cannot write '" + out_path + "'");
        write_trajectory_csv(f, traj);
      }
      const std::string manifest = report_path.empty() ? out_path + ".manifest" : report_path;
      std::vector<std::pair<std::string, std::string>> outcome{
          {"diverged", traj.diverged ? "true" : "false"},
          {"frames", std::to_string(traj.frames.size())}};
      if (traj.diverged) {
        outcome.emplace_back("blowup_time", format_double(traj.blowup_time));
        outcome.emplace_back("note", traj.divergence_reason + "; CSV truncated at the guard time");
      }
      detail::write_manifest(manifest, cfg, args, {{"csv", out_path}, {"manifest", manifest}},
                             outcome, elapsed());
      if (traj.diverged) {
        io.err << "divergence guard tripped at t = " << format_double(traj.blowup_time) << '\n';
        return kDiverged;
      }
      return kOk;
    }

    if (*cer) {
      const auto cfg = detail::load(config_path, seed_override);
      const auto hist = build_initial_history(cfg);
      const auto outcome = find_certificate(detail::condition_inputs(cfg, hist), variant);
      KeyValueDoc doc;
      add_certificate(doc, outcome);
      doc.set("scenario", "scheme", cfg.scheme.name());
      doc.set("scenario", "theorem_scope",
              cfg.scheme.influence_based() ? "inside" : "outside (constant coupling)");
      doc.write(io.out);
      if (!report_path.empty()) detail::write_doc(doc, report_path);
      return std::holds_alternative<Certificate>(outcome) ? kOk : kInfeasible;
    }

    if (*ver) {
      const auto cfg = detail::load(config_path, seed_override);
      auto res = detail::verify(cfg, variant, rate_multiplier);
      res.report.write(io.out);
      if (!report_path.empty()) detail::write_doc(res.report, report_path);
      if (!out_path.empty() && res.trajectory) {
        std::ofstream f(out_path);
        if (!f) throw ConfigError("--out", "cannot write '" + out_path + "'");
        write_trajectory_csv(f, *res.trajectory);
        f.close();
        std::vector<std::pair<std::string, std::string>> artifacts{{"csv", out_path}};
        if (!report_path.empty()) artifacts.emplace_back("report", report_path);
        detail::write_manifest(out_path + ".manifest", cfg, args, artifacts,
                               {{"exit_code", std::to_string(res.code)}}, elapsed());
      }
      return res.code;
    }

    if (*swp) {
      const auto cfg = detail::load(config_path, seed_override);
      const auto colon = range.find_first_of(":,");
      if (colon == std::string::npos) throw ConfigError("--range", "expected lo:hi");
      const double lo = KeyValueDoc::parse_double(range.substr(0, colon), "--range");
      const double hi = KeyValueDoc::parse_double(range.substr(colon + 1), "--range");
      if (param == "beta" && !cfg.influence.is_inverse_power())
        throw ConfigError("--param", "beta sweeps need an inverse_power influence");
      if (!(lo > 0.0) || !(hi >= lo)) throw ConfigError("--range", "need 0 < lo <= hi");
      std::vector<double> values(static_cast<std::size_t>(points));
      for (int k = 0; k < points; ++k)
        values[static_cast<std::size_t>(k)] =
            points == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (points - 1);

      std::vector<detail::SweepRow> rows(values.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t j; (j = next++) < values.size();) {
          try {
            rows[j] = detail::sweep_point(cfg, param, values[j], variant, simulate);
          } catch (const std::exception& e) {
            rows[j].value = values[j];
            rows[j].error = e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      const int nthreads = std::max(1, std::min<int>(threads, points));
      for (int k = 1; k < nthreads; ++k) pool.emplace_back(worker);
      worker();
      for (auto& th : pool) th.join();

      for (const auto& r : rows)
        if (!r.error.empty()) throw ConfigError("sweep", "at " + format_double(r.value) + ": " + r.error);

      std::ofstream f(out_path);
      if (!f) throw ConfigError("--out", "cannot write '" + out_path + "'");
      f << "param,value,feasible,C,margin,classification\n";
      for (const auto& r : rows)
        f << param << ',' << format_double(r.value) << ',' << (r.feasible ? 1 : 0) << ','
          << format_double(r.rate) << ',' << format_double(r.margin) << ',' << r.classification
          << '\n';
      f.close();
      detail::write_manifest(out_path + ".manifest", cfg, args, {{"csv", out_path}},
                             {{"points", std::to_string(points)}}, elapsed());
      return kOk;
    }

    if (*demo) {
      ScenarioConfig cfg;
      cfg.agents = 2;
      cfg.dim = 1;
      cfg.tau = demo_tau;
      cfg.scheme = WeightScheme::constant_coupling(demo_coupling);
      cfg.influence = InfluenceSpec::constant(1.0);
      cfg.initial = ConstantHistory{{0.0, 0.0}, {1.0, 0.0}};
      cfg.steps_per_delay = demo_steps;
      cfg.horizon = demo_horizon > 0.0 ? demo_horizon : 40.0 * demo_tau;
      const Trajectory traj = integrate(cfg);
      std::vector<double> t, w;
      t.reserve(traj.frames.size());
      w.reserve(traj.frames.size());
      for (const auto& f : traj.frames) {
        t.push_back(f.t);
        w.push_back(f.velocities[0] - f.velocities[1]);
      }
      const auto cls = classify_oscillation(t, w, cfg.tau);
      const double a_tau = 2.0 * demo_coupling * demo_tau;
      const double inv_e = std::exp(-1.0);
      const double half_pi = std::acos(0.0);
      const OscillationClass predicted = a_tau < inv_e     ? OscillationClass::MonotoneDecay
                                         : a_tau < half_pi ? OscillationClass::OscillatoryDecay
                                                           : OscillationClass::OscillatoryGrowth;
      KeyValueDoc doc;
      doc.set("oscillation", "tau", demo_tau);
      doc.set("oscillation", "coupling", demo_coupling);
      doc.set("oscillation", "a_tau", a_tau);
      doc.set("oscillation", "threshold_oscillation", inv_e);
      doc.set("oscillation", "threshold_growth", half_pi);
      doc.set("oscillation", "classification", oscillation_name(cls));
      doc.set("oscillation", "predicted", oscillation_name(predicted));
      doc.set("oscillation", "matches_prediction", cls == predicted);
      doc.set("oscillation", "diverged", traj.diverged);
      doc.write(io.out);
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw ConfigError("--out", "cannot write '" + out_path + "'");
        f << "t,w\n";
        for (std::size_t k = 0; k < t.size(); ++k)
          f << format_double(t[k]) << ',' << format_double(w[k]) << '\n';
      }
      return kOk;
    }
  } catch (const ConfigError& e) {
    io.err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ScopeError& e) {
    io.err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ArgumentError& e) {
    io.err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const DegenerateWeightsError& e) {
    io.err << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}

inline int run(int argc, char** argv, Streams io = {}) {
  return run(std::vector<std::string>(argv, argv + argc), io);
}

}  // namespace csdelay::cli
