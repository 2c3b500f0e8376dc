#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "csdelay/core/errors.hpp"
#include "csdelay/core/format.hpp"
#include "csdelay/core/keyvalue.hpp"
#include "csdelay/core/scenario.hpp"

namespace csdelay {

// Scenario file layout:
//
//   [agents]      count, dimension
//   [influence]   kind = constant | inverse_power | table
//                 value (constant), beta (inverse_power), samples = "s:psi, s:psi, ..." (table)
//   [scheme]      kind = classical | normalized | constant_coupling; kappa (constant_coupling)
//   [initial]     kind = constant | analytic | samples | random
//                 constant:  positions, velocities
//                 analytic:  family = linear | sinusoidal, positions, velocities, rates, frequency
//                 samples:   samples_file (CSV: t, x<i>_<c>..., v<i>_<c>...; relative to the scenario)
//                 random:    seed, position_box, velocity_radius,
//                            perturbation = none | sinusoidal, perturbation_amplitude,
//                            perturbation_frequency
//   [integrator]  tau, steps_per_delay, horizon, divergence_guard
//   [output]      record_stride
//
// Agent vectors are written one agent per ';'-separated group, components separated by
// blanks, e.g. "0 0; 1 0.5".

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<double> parse_numbers(std::string_view text, const std::string& field) {
  std::string s(text);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(KeyValueDoc::parse_double(tok, field));
  return out;
}

/// Agent-major vector, N groups of d numbers separated by ';' (or a flat list of N*d numbers).
inline std::vector<double> parse_agent_vectors(const std::string& text, std::size_t agents,
                                               std::size_t dim, const std::string& field) {
  std::vector<double> out;
  if (text.find(';') != std::string::npos) {
    const auto groups = split(text, ';');
    if (groups.size() != agents)
      throw ConfigError(field, "expected " + std::to_string(agents) + " agent groups, got " +
                                   std::to_string(groups.size()));
    for (const auto& g : groups) {
      const auto xs = parse_numbers(g, field);
      if (xs.size() != dim)
        throw ConfigError(field, "each agent needs " + std::to_string(dim) + " components");
      out.insert(out.end(), xs.begin(), xs.end());
    }
  } else {
    out = parse_numbers(text, field);
    if (out.size() != agents * dim)
      throw ConfigError(field, "expected " + std::to_string(agents * dim) + " numbers");
  }
  return out;
}

inline std::string format_agent_vectors(const std::vector<double>& v, std::size_t dim) {
  std::string out;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j > 0) out += (j % dim == 0) ? "; " : " ";
    out += format_double(v[j]);
  }
  return out;
}

inline void reject_unknown(const KeyValueDoc& doc, const std::string& section,
                           std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& k : doc.keys(section))
    if (!ok.count(k)) throw ConfigError(section + "." + k, "unknown key");
}

inline SampledHistory read_samples_csv(const std::filesystem::path& path, std::size_t agents,
                                       std::size_t dim, double tau, int steps) {
  std::ifstream in(path);
  if (!in) throw ConfigError("initial.samples_file", "cannot open '" + path.string() + "'");
  SampledHistory out;
  out.source = path.string();
  const std::size_t nd = agents * dim;
  const double h = tau / steps;
  std::string line;
  bool header = true;
  long row = 0;
  while (std::getline(in, line)) {
    if (KeyValueDoc::trim(line).empty()) continue;
    if (header) {
      header = false;
      if (line.find_first_of("tTxXvV") != std::string::npos) continue;
    }
    const auto xs = parse_numbers(line, "initial.samples_file");
    if (xs.size() != 1 + 2 * nd)
      throw ConfigError("initial.samples_file",
                        "row " + std::to_string(row + 1) + " needs " + std::to_string(1 + 2 * nd) +
                            " columns");
    const double expected = -tau + static_cast<double>(row) * h;
    if (std::abs(xs[0] - expected) > 1e-9 * std::max(1.0, tau))
      throw ConfigError("initial.samples_file", "row " + std::to_string(row + 1) +
                                                    " is not on the grid t = -tau + k*tau/steps_per_delay");
    out.positions.emplace_back(xs.begin() + 1, xs.begin() + 1 + static_cast<long>(nd));
    out.velocities.emplace_back(xs.begin() + 1 + static_cast<long>(nd), xs.end());
    ++row;
  }
  return out;
}

}  // namespace detail

/// Build a scenario from parsed key/value text. Relative sample paths resolve against `base_dir`.
inline ScenarioConfig scenario_from_doc(const KeyValueDoc& doc,
                                        const std::filesystem::path& base_dir = {}) {
  for (const auto& s : doc.sections()) {
    static const std::set<std::string> known{"agents", "influence", "scheme",
                                             "initial", "integrator", "output"};
    if (!known.count(s)) throw ConfigError(s, "unknown section");
  }
  detail::reject_unknown(doc, "agents", {"count", "dimension"});
  detail::reject_unknown(doc, "influence", {"kind", "value", "beta", "samples"});
  detail::reject_unknown(doc, "scheme", {"kind", "kappa"});
  detail::reject_unknown(doc, "initial",
                         {"kind", "positions", "velocities", "family", "rates", "frequency",
                          "samples_file", "seed", "position_box", "velocity_radius",
                          "perturbation", "perturbation_amplitude", "perturbation_frequency"});
  detail::reject_unknown(doc, "integrator",
                         {"tau", "steps_per_delay", "horizon", "divergence_guard"});
  detail::reject_unknown(doc, "output", {"record_stride"});

  ScenarioConfig cfg;
  const auto count = doc.get_int("agents", "count");
  const auto dim = doc.get_int_or("agents", "dimension", 1);
  if (count < 1) throw ConfigError("agents.count", "need at least one agent");
  if (dim < 1) throw ConfigError("agents.dimension", "need at least one dimension");
  cfg.agents = static_cast<std::size_t>(count);
  cfg.dim = static_cast<std::size_t>(dim);

  try {
    const auto kind = doc.get("influence", "kind");
    if (kind == "constant") {
      cfg.influence = InfluenceSpec::constant(doc.get_double_or("influence", "value", 1.0));
    } else if (kind == "inverse_power") {
      cfg.influence = InfluenceSpec::inverse_power(doc.get_double("influence", "beta"));
    } else if (kind == "table") {
      std::vector<InfluenceSample> samples;
      for (const auto& pair : detail::split(doc.get("influence", "samples"), ',')) {
        const auto parts = detail::split(pair, ':');
        if (parts.size() != 2) throw ConfigError("influence.samples", "expected s:psi pairs");
        samples.push_back({KeyValueDoc::parse_double(parts[0], "influence.samples"),
                           KeyValueDoc::parse_double(parts[1], "influence.samples")});
      }
      cfg.influence = InfluenceSpec::table(std::move(samples));
    } else {
      throw ConfigError("influence.kind", "unknown influence kind '" + kind + "'");
    }
  } catch (const ArgumentError& e) {
    throw ConfigError("influence", e.what());
  }

  const auto scheme = doc.get_or("scheme", "kind", "classical");
  if (scheme == "classical") {
    cfg.scheme = WeightScheme::classical();
  } else if (scheme == "normalized") {
    cfg.scheme = WeightScheme::normalized();
  } else if (scheme == "constant_coupling") {
    try {
      cfg.scheme = WeightScheme::constant_coupling(doc.get_double("scheme", "kappa"));
    } catch (const ArgumentError& e) {
      throw ConfigError("scheme.kappa", e.what());
    }
  } else {
    throw ConfigError("scheme.kind", "unknown scheme '" + scheme + "'");
  }

  cfg.tau = doc.get_double("integrator", "tau");
  cfg.steps_per_delay = static_cast<int>(doc.get_int_or("integrator", "steps_per_delay", 32));
  cfg.horizon = doc.get_double("integrator", "horizon");
  cfg.divergence_guard = doc.get_double_or("integrator", "divergence_guard", 1e12);
  cfg.record_stride = static_cast<int>(doc.get_int_or("output", "record_stride", 1));
  if (!(cfg.tau > 0.0)) throw ConfigError("integrator.tau", "must be positive");
  if (cfg.steps_per_delay < 1) throw ConfigError("integrator.steps_per_delay", "must be at least 1");

  const auto ikind = doc.get("initial", "kind");
  const auto N = cfg.agents, D = cfg.dim;
  if (ikind == "constant") {
    cfg.initial = ConstantHistory{
        detail::parse_agent_vectors(doc.get("initial", "positions"), N, D, "initial.positions"),
        detail::parse_agent_vectors(doc.get("initial", "velocities"), N, D, "initial.velocities")};
  } else if (ikind == "analytic") {
    AnalyticHistory a;
    const auto fam = doc.get_or("initial", "family", "linear");
    if (fam == "linear")
      a.family = AnalyticHistory::Family::Linear;
    else if (fam == "sinusoidal")
      a.family = AnalyticHistory::Family::Sinusoidal;
    else
      throw ConfigError("initial.family", "unknown family '" + fam + "'");
    a.positions = detail::parse_agent_vectors(doc.get("initial", "positions"), N, D, "initial.positions");
    a.velocities =
        detail::parse_agent_vectors(doc.get("initial", "velocities"), N, D, "initial.velocities");
    a.rates = detail::parse_agent_vectors(doc.get("initial", "rates"), N, D, "initial.rates");
    a.frequency = doc.get_double_or("initial", "frequency", 1.0);
    cfg.initial = std::move(a);
  } else if (ikind == "samples") {
    std::filesystem::path p = doc.get("initial", "samples_file");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    cfg.initial = detail::read_samples_csv(p, N, D, cfg.tau, cfg.steps_per_delay);
  } else if (ikind == "random") {
    RandomHistory r;
    const auto seed = doc.get_int("initial", "seed");
    if (seed < 0) throw ConfigError("initial.seed", "must be nonnegative");
    cfg.rng_seed = static_cast<std::uint64_t>(seed);
    r.position_box = doc.get_double_or("initial", "position_box", 1.0);
    r.velocity_radius = doc.get_double_or("initial", "velocity_radius", 1.0);
    const auto pert = doc.get_or("initial", "perturbation", "none");
    if (pert == "sinusoidal")
      r.perturbation = true;
    else if (pert != "none")
      throw ConfigError("initial.perturbation", "expected none or sinusoidal");
    r.perturbation_amplitude = doc.get_double_or("initial", "perturbation_amplitude", 0.0);
    r.perturbation_frequency = doc.get_double_or("initial", "perturbation_frequency", 1.0);
    cfg.initial = r;
  } else {
    throw ConfigError("initial.kind", "unknown initial history kind '" + ikind + "'");
  }

  cfg.validate();
  return cfg;
}

inline ScenarioConfig parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {}) {
  return scenario_from_doc(KeyValueDoc::parse(in), base_dir);
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open scenario file '" + path.string() + "'");
  return parse_scenario(in, path.parent_path());
}

inline KeyValueDoc scenario_to_doc(const ScenarioConfig& cfg) {
  KeyValueDoc doc;
  doc.set_int("agents", "count", static_cast<long long>(cfg.agents));
  doc.set_int("agents", "dimension", static_cast<long long>(cfg.dim));

  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConstantInfluence>) {
          doc.set("influence", "kind", "constant");
          doc.set("influence", "value", k.value);
        } else if constexpr (std::is_same_v<T, InversePowerInfluence>) {
          doc.set("influence", "kind", "inverse_power");
          doc.set("influence", "beta", k.beta);
        } else {
          doc.set("influence", "kind", "table");
          std::string s;
          for (std::size_t j = 0; j < k.samples.size(); ++j) {
            if (j > 0) s += ", ";
            s += format_double(k.samples[j].s) + ":" + format_double(k.samples[j].psi);
          }
          doc.set("influence", "samples", s);
        }
      },
      cfg.influence.kind());

  doc.set("scheme", "kind", cfg.scheme.name());
  if (cfg.scheme.kind == WeightScheme::Kind::ConstantCoupling)
    doc.set("scheme", "kappa", cfg.scheme.kappa);

  const auto D = cfg.dim;
  std::visit(
      [&](const auto& init) {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, ConstantHistory>) {
          doc.set("initial", "kind", "constant");
          doc.set("initial", "positions", detail::format_agent_vectors(init.positions, D));
          doc.set("initial", "velocities", detail::format_agent_vectors(init.velocities, D));
        } else if constexpr (std::is_same_v<T, AnalyticHistory>) {
          doc.set("initial", "kind", "analytic");
          doc.set("initial", "family",
                  init.family == AnalyticHistory::Family::Linear ? "linear" : "sinusoidal");
          doc.set("initial", "positions", detail::format_agent_vectors(init.positions, D));
          doc.set("initial", "velocities", detail::format_agent_vectors(init.velocities, D));
          doc.set("initial", "rates", detail::format_agent_vectors(init.rates, D));
          doc.set("initial", "frequency", init.frequency);
        } else if constexpr (std::is_same_v<T, SampledHistory>) {
          doc.set("initial", "kind", "samples");
          doc.set("initial", "samples_file", init.source);
        } else {
          doc.set("initial", "kind", "random");
          doc.set_int("initial", "seed", static_cast<long long>(cfg.rng_seed.value_or(0)));
          doc.set("initial", "position_box", init.position_box);
          doc.set("initial", "velocity_radius", init.velocity_radius);
          doc.set("initial", "perturbation", init.perturbation ? "sinusoidal" : "none");
          doc.set("initial", "perturbation_amplitude", init.perturbation_amplitude);
          doc.set("initial", "perturbation_frequency", init.perturbation_frequency);
        }
      },
      cfg.initial);

  doc.set("integrator", "tau", cfg.tau);
  doc.set_int("integrator", "steps_per_delay", cfg.steps_per_delay);
  doc.set("integrator", "horizon", cfg.horizon);
  doc.set("integrator", "divergence_guard", cfg.divergence_guard);
  doc.set_int("output", "record_stride", cfg.record_stride);
  return doc;
}

inline void write_scenario(std::ostream& out, const ScenarioConfig& cfg) {
  scenario_to_doc(cfg).write(out);
}

}  // namespace csdelay
