#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "polyreg/generator.hpp"
#include "polyreg/io.hpp"
#include "polyreg/regularity.hpp"

namespace polyreg {

struct SweepEntry {
  GeneratorConfig config;
  GeneratedInstance instance;
  RegularityReport report;
};

/// Audits instances sweep_config(seed, 0..count-1) in order.
inline std::vector<SweepEntry> audit_sweep(std::uint64_t seed, std::size_t count, std::size_t samples) {
  std::vector<SweepEntry> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    GeneratorConfig cfg = sweep_config(seed, i);
    GeneratedInstance g = generate_instance(cfg);
    AVIInstance inst(g.a, g.c);
    out.push_back({cfg, g, equivalence_audit(inst, {samples, seed + i})});
  }
  return out;
}

inline Json audit_report_json(const AVIInstance& inst, const RegularityReport& r) {
  FaceLattice k_lat = enumerate_faces(HPolyhedron::from_cone(localize(inst.c, inst.lattice, r.base_face)));
  return to_json(r, inst.lattice, k_lat);
}

inline Json sweep_json(std::uint64_t seed, std::size_t samples, const std::vector<SweepEntry>& entries) {
  Json list = Json::array();
  std::size_t inconsistent = 0, regular = 0, unwitnessed = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    AVIInstance inst(e.instance.a, e.instance.c);
    inconsistent += !e.report.consistent();
    regular += e.report.coherent.coherent;
    unwitnessed += e.report.unwitnessed_irregularity;
    list.push_back({{"index", i},
                    {"family", family_name(e.config.family)},
                    {"seed", e.config.seed},
                    {"n", e.config.n},
                    {"k", e.config.k},
                    {"instance", to_json(InstanceFile{e.instance.a, e.instance.c, std::nullopt, std::nullopt})},
                    {"report", audit_report_json(inst, e.report)}});
  }
  return {{"seed", seed},
          {"samples", samples},
          {"count", entries.size()},
          {"regular", regular},
          {"irregular", entries.size() - regular},
          {"unwitnessed_irregularity", unwitnessed},
          {"inconsistent", inconsistent},
          {"instances", list}};
}

}  // namespace polyreg
