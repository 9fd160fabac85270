#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyreg/avi_solver.hpp"
#include "polyreg/complementarity.hpp"
#include "polyreg/generator.hpp"
#include "polyreg/regularity.hpp"

namespace polyreg {

using Json = nlohmann::ordered_json;

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw UsageError("expected a rational as \"p/q\" or an integer, got " + j.dump());
}

inline RatVector vector_from_json(const Json& j, std::optional<std::size_t> n = std::nullopt) {
  if (!j.is_array()) throw UsageError("expected an array of rationals");
  RatVector v;
  for (const auto& e : j) v.push_back(rational_from_json(e));
  if (n && v.size() != *n) throw UsageError("vector has length " + std::to_string(v.size()) + ", expected " + std::to_string(*n));
  return v;
}

inline Json to_json(const Rational& r) { return to_string(r); }

inline Json to_json(const RatVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

inline Json to_json(const std::vector<RatVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

inline Json to_json(const RatMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

inline Json to_json(const IndexSet& s) { return Json(s); }

/// "p/q,p/q,..." as used by --z.
inline RatVector parse_vector_list(const std::string& s) {
  RatVector v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_rational(item));
  if (v.empty()) throw UsageError("empty vector");
  return v;
}

inline std::size_t dimension_from_json(const Json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long long>() <= 0)
    throw UsageError("\"n\" must be a positive integer");
  return static_cast<std::size_t>(j["n"].get<long long>());
}

inline HPolyhedron polyhedron_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("polyhedron must be an object");
  std::size_t n = dimension_from_json(j);
  std::vector<Halfspace> rows;
  if (j.contains("inequalities")) {
    for (const auto& row : j["inequalities"]) {
      if (!row.contains("y")) throw UsageError("inequality without \"y\"");
      rows.push_back({vector_from_json(row["y"], n), row.contains("alpha") ? rational_from_json(row["alpha"]) : Rational(0)});
    }
  }
  return HPolyhedron(n, std::move(rows));
}

inline Json to_json(const HPolyhedron& c) {
  Json rows = Json::array();
  for (const auto& h : c.rows()) rows.push_back({{"y", to_json(h.normal)}, {"alpha", to_json(h.offset)}});
  if (c.trivially_empty()) rows.push_back({{"y", to_json(zeros(c.dim()))}, {"alpha", "-1"}});
  return {{"n", c.dim()}, {"inequalities", rows}};
}

/// Cone schema: inequalities with alphas omitted (nonzero alphas rejected),
/// optional "generators" and "lineality". With both forms present they must agree.
inline PolyCone cone_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("cone must be an object");
  std::size_t n = dimension_from_json(j);
  std::optional<PolyCone> from_rows, from_gens;
  if (j.contains("inequalities")) {
    std::vector<RatVector> rows;
    for (const auto& row : j["inequalities"]) {
      if (row.contains("alpha") && rational_from_json(row["alpha"]) != 0) throw UsageError("cone inequality with nonzero alpha");
      rows.push_back(vector_from_json(row.at("y"), n));
    }
    from_rows = PolyCone::from_inequalities(n, rows);
  }
  if (j.contains("generators") || j.contains("lineality")) {
    std::vector<RatVector> gens, lin;
    if (j.contains("generators"))
      for (const auto& g : j["generators"]) gens.push_back(vector_from_json(g, n));
    if (j.contains("lineality"))
      for (const auto& l : j["lineality"]) lin.push_back(vector_from_json(l, n));
    from_gens = PolyCone::from_generators(n, gens, lin);
  }
  if (from_rows && from_gens && !from_rows->same_set(*from_gens))
    throw UsageError("cone generators and inequalities describe different sets");
  if (from_rows) return *from_rows;
  if (from_gens) return *from_gens;
  return PolyCone::full(n);
}

inline Json to_json(const PolyCone& k) {
  Json rows = Json::array();
  for (const auto& r : k.inequalities()) rows.push_back({{"y", to_json(r)}});
  return {{"n", k.ambient_dim()}, {"inequalities", rows}, {"generators", to_json(k.rays())}, {"lineality", to_json(k.lineality())}};
}

inline ComplementarityRelation relation_from_json(const Json& j, const HPolyhedron& c, const FaceLattice& lat) {
  if (!j.contains("faces") || !j["faces"].is_array()) throw UsageError("relation needs a \"faces\" array");
  std::map<IndexSet, PolyCone> table;
  for (const auto& f : j["faces"]) {
    IndexSet key = f.at("active_set").get<IndexSet>();
    std::sort(key.begin(), key.end());
    table[key] = cone_from_json(f.at("lambda"));
  }
  return relation_from_table(c, lat, table);
}

inline Json to_json(const ComplementarityRelation& rel) {
  Json faces = Json::array();
  for (std::size_t i = 0; i < rel.lattice.size(); ++i)
    faces.push_back({{"active_set", rel.lattice.faces[i].active_set}, {"lambda", to_json(rel.lambda[i])}});
  return {{"faces", faces}};
}

struct InstanceFile {
  RatMatrix a;
  HPolyhedron c;
  std::optional<RatVector> base_point;
  std::optional<Json> relation;
};

inline InstanceFile instance_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("instance must be an object");
  std::size_t n = dimension_from_json(j);
  if (!j.contains("A") || !j["A"].is_array() || j["A"].size() != n) throw UsageError("\"A\" must be an n x n array");
  InstanceFile f;
  f.a = RatMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    RatVector row = vector_from_json(j["A"][i], n);
    for (std::size_t c = 0; c < n; ++c) f.a(i, c) = row[c];
  }
  if (!j.contains("C")) throw UsageError("instance needs \"C\"");
  f.c = polyhedron_from_json(j["C"]);
  if (f.c.dim() != n) throw UsageError("C has a different dimension than A");
  if (j.contains("base_point")) f.base_point = vector_from_json(j["base_point"], n);
  if (j.contains("relation")) f.relation = j["relation"];
  return f;
}

inline Json to_json(const InstanceFile& f) {
  Json j{{"n", f.a.rows()}, {"A", to_json(f.a)}, {"C", to_json(f.c)}};
  if (f.base_point) j["base_point"] = to_json(*f.base_point);
  if (f.relation) j["relation"] = *f.relation;
  return j;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

inline Json to_json(const FaceLattice& lat) {
  Json faces = Json::array();
  for (const auto& f : lat.faces)
    faces.push_back({{"active_set", f.active_set}, {"dim", f.dim}, {"ri_point", to_json(f.ri_point)}, {"span_basis", to_json(f.span_basis)}});
  Json cover = Json::array();
  for (auto [a, b] : lat.covering_pairs) cover.push_back({lat.faces[a].active_set, lat.faces[b].active_set});
  return {{"n", lat.n}, {"faces", faces}, {"covering_pairs", cover}};
}

inline Json to_json(const SolutionPiece& p) {
  return {{"face_active_set", p.face_active_set}, {"witness", to_json(p.witness)}, {"single_point", p.single_point}, {"piece", to_json(p.piece)}};
}

inline Json real_to_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline Json face_pair_json(const FaceLattice& lat, std::optional<std::pair<std::size_t, std::size_t>> p) {
  if (!p) return nullptr;
  return Json::array({lat.faces[p->first].active_set, lat.faces[p->second].active_set});
}

inline Json to_json(const CoherentOrientation& r, const FaceLattice& lat) {
  Json dets = Json::array();
  for (std::size_t i = 0; i < r.determinants.size(); ++i)
    dets.push_back({{"active_set", lat.faces[i].active_set}, {"det", to_string(r.determinants[i])}});
  Json j{{"verdict", r.coherent}, {"determinants", dets}, {"bad_pair", face_pair_json(lat, r.bad_pair)}};
  j["non_complementary_face"] = r.non_complementary_face ? Json(lat.faces[*r.non_complementary_face].active_set) : Json(nullptr);
  j["singular_face"] = r.singular_face ? Json(lat.faces[*r.singular_face].active_set) : Json(nullptr);
  return j;
}

inline Json to_json(const FaceSeparation& r, const FaceLattice& lat) {
  Json j{{"verdict", r.holds}, {"nonsingular", r.nonsingular}, {"violating_pair", face_pair_json(lat, r.violating_pair)}};
  j["reason"] = r.reason.empty() ? Json(nullptr) : Json(r.reason);
  return j;
}

inline Json to_json(const CriticalFace& r, const FaceLattice& lat) {
  return {{"verdict", r.holds}, {"pair", face_pair_json(lat, r.pair)}, {"witness", r.witness ? to_json(*r.witness) : Json(nullptr)}};
}

inline Json to_json(const ModulusResult& m, const FaceLattice& lat) {
  Json j{{"positive", m.positive}, {"lower", real_to_json(m.lower)}, {"upper", real_to_json(m.upper)}, {"pair", face_pair_json(lat, m.argmin)}};
  for (const auto& p : m.pairs)
    if (!p.positive) {
      j["witness"] = to_json(*p.witness);
      break;
    }
  return j;
}

inline Json to_json(const SingleValuedVerdict& v) {
  return {{"single_valued", v.single_valued},
          {"covering", v.covering},
          {"samples", v.samples},
          {"gap", v.gap ? to_json(*v.gap) : Json(nullptr)},
          {"multiple", v.multiple ? to_json(*v.multiple) : Json(nullptr)}};
}

inline Json to_json(const RegularityReport& r, const FaceLattice& lat, const FaceLattice& k_lat) {
  return {{"coherent_orientation", to_json(r.coherent, lat)},
          {"face_separation", to_json(r.separation, lat)},
          {"nonsingular", r.nonsingular},
          {"cone_separation", {{"verdict", r.cone_separation.holds},
                               {"face", r.cone_separation.face ? Json(lat.faces[*r.cone_separation.face].active_set) : Json(nullptr)}}},
          {"stress", to_json(r.stress)},
          {"base_face", lat.faces[r.base_face].active_set},
          {"cone", {{"coherent_orientation", to_json(r.coherent_k, k_lat)},
                    {"critical_face", to_json(r.critical_k, k_lat)},
                    {"modulus_positive", r.modulus_k.positive},
                    {"stress", to_json(r.stress_k)}}},
          {"unwitnessed_irregularity", r.unwitnessed_irregularity},
          {"inconsistencies", r.inconsistencies}};
}

}  // namespace polyreg
