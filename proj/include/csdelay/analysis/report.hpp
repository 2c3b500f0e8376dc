#pragma once

#include <string>
#include <variant>

#include "csdelay/analysis/certificate.hpp"
#include "csdelay/analysis/monitors.hpp"
#include "csdelay/core/influence.hpp"
#include "csdelay/core/keyvalue.hpp"

namespace csdelay {

// Report sections and fields:
//
//   [certificate]  feasible, variant, tau, d_x0, d_v0, influence,
//                  C, margin, psi_bound, position_bound, feasible_lo, feasible_hi,
//                  feasible_lo_is_grid_floor                         (feasible)
//                  best_C, best_margin                               (infeasible)
//   [monitor_<kind>]  pass, worst_violation, time_of_worst, tolerance, checked,
//                     excused, worst_excused, note

inline void add_certificate(KeyValueDoc& doc, const CertificateOutcome& outcome) {
  const std::string s = "certificate";
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        doc.set(s, "feasible", std::is_same_v<T, Certificate>);
        doc.set(s, "variant", variant_name(r.variant));
        doc.set(s, "tau", r.inputs.tau);
        doc.set(s, "d_x0", r.inputs.d_x0);
        doc.set(s, "d_v0", r.inputs.d_v0);
        doc.set(s, "influence", describe(r.inputs.influence));
        if constexpr (std::is_same_v<T, Certificate>) {
          doc.set(s, "C", r.rate);
          doc.set(s, "margin", r.margin);
          doc.set(s, "psi_bound", r.psi_bound);
          doc.set(s, "position_bound", r.position_bound());
          doc.set(s, "feasible_lo", r.feasible_lo);
          doc.set(s, "feasible_hi", r.feasible_hi);
          doc.set(s, "feasible_lo_is_grid_floor", r.lower_is_grid_floor);
        } else {
          doc.set(s, "best_C", r.best_rate);
          doc.set(s, "best_margin", r.best_margin);
        }
      },
      outcome);
}

inline void add_monitor(KeyValueDoc& doc, const MonitorReport& r) {
  const std::string s = "monitor_" + r.kind;
  doc.set(s, "pass", r.pass);
  doc.set(s, "worst_violation", r.worst_violation);
  doc.set(s, "time_of_worst", r.time_of_worst);
  doc.set(s, "tolerance", r.tolerance_used);
  doc.set_int(s, "checked", static_cast<long long>(r.checked));
  doc.set_int(s, "excused", static_cast<long long>(r.excused));
  doc.set(s, "worst_excused", r.worst_excused);
  if (!r.note.empty()) doc.set(s, "note", r.note);
}

}  // namespace csdelay
