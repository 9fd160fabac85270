#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyreg/avi_solver.hpp"
#include "polyreg/complementarity.hpp"
#include "polyreg/modulus.hpp"

namespace polyreg {

/// det T_F for T_F = A on L(F), identity on L(N): det([A B | N]) / det([B | N]).
/// nullopt when L(F) and L(N) are not complementary.
inline std::optional<Rational> t_face_determinant(const RatMatrix& a, const std::vector<RatVector>& face_basis,
                                                  const std::vector<RatVector>& normal_basis) {
  const std::size_t n = a.rows();
  if (face_basis.size() + normal_basis.size() != n) return std::nullopt;
  std::vector<RatVector> plain = face_basis, mapped = apply_all(a, face_basis);
  plain.insert(plain.end(), normal_basis.begin(), normal_basis.end());
  mapped.insert(mapped.end(), normal_basis.begin(), normal_basis.end());
  Rational base = det(RatMatrix::from_columns(plain, n));
  if (base == 0) return std::nullopt;
  return det(RatMatrix::from_columns(mapped, n)) / base;
}

inline int sign_of(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

struct CoherentOrientation {
  bool coherent = true;
  std::vector<Rational> determinants;
  std::optional<std::size_t> non_complementary_face;
  std::optional<std::size_t> singular_face;
  std::optional<std::pair<std::size_t, std::size_t>> bad_pair;
};

/// Sign comparison over covering pairs; all_pairs compares every pair of faces.
inline CoherentOrientation check_coherent_orientation(const RatMatrix& a, const HPolyhedron& c, const FaceLattice& lat,
                                                      bool all_pairs = false) {
  CoherentOrientation r;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    auto d = t_face_determinant(a, lat.faces[i].span_basis, normal_cone(c, lat.faces[i]).span_basis());
    if (!d) {
      r.determinants.emplace_back(0);
      if (!r.non_complementary_face) r.non_complementary_face = i;
      r.coherent = false;
      continue;
    }
    if (*d == 0 && !r.singular_face) r.singular_face = i;
    if (*d == 0) r.coherent = false;
    r.determinants.push_back(*d);
  }
  auto check = [&](std::size_t i, std::size_t j) {
    if (r.bad_pair || r.determinants[i] == 0 || r.determinants[j] == 0) return;
    if (sign_of(r.determinants[i]) != sign_of(r.determinants[j])) {
      r.bad_pair = std::make_pair(i, j);
      r.coherent = false;
    }
  };
  if (all_pairs) {
    for (std::size_t i = 0; i < lat.size(); ++i)
      for (std::size_t j = i + 1; j < lat.size(); ++j) check(i, j);
  } else {
    for (auto [i, j] : lat.covering_pairs) check(i, j);
  }
  return r;
}

struct FaceSeparation {
  bool holds = true;
  bool nonsingular = true;
  std::optional<std::size_t> singular_face;
  std::optional<std::pair<std::size_t, std::size_t>> violating_pair;
  std::string reason;
};

/// For every covering pair F ⊂ F': E = L(F) + L(Λ(F')) is a hyperplane through
/// F that properly separates F + Λ(F) from F'.
inline FaceSeparation check_face_separation(const ComplementarityRelation& rel) {
  FaceSeparation r;
  const std::size_t n = rel.ambient_dim();
  auto ns = check_nonsingular(rel);
  if (!ns.nonsingular) {
    r.holds = r.nonsingular = false;
    r.singular_face = ns.face;
    r.reason = "relation is singular";
    return r;
  }
  const auto& lat = rel.lattice;
  for (auto [f, g] : lat.covering_pairs) {
    auto fail = [&](const char* why) {
      r.holds = false;
      r.violating_pair = std::make_pair(f, g);
      r.reason = why;
    };
    std::vector<RatVector> e = lat.faces[f].span_basis;
    auto lg = rel.lambda[g].span_basis();
    e.insert(e.end(), lg.begin(), lg.end());
    auto normal = orthogonal_complement(e, n);
    if (normal.size() != 1) {
      fail("L(F) + L(Λ(F')) is not a hyperplane");
      return r;
    }
    RatVector nv = normal[0];
    Rational side = dot(nv, lat.faces[g].ri_point - lat.faces[f].ri_point);
    if (side == 0) {
      fail("F' lies in the hyperplane");
      return r;
    }
    if (side < 0) nv = -nv;
    bool strict = false;
    for (const auto& y : rel.lambda[f].rays()) {
      Rational v = dot(nv, y);
      if (v > 0) {
        fail("L(F) + Λ(F) and F' lie on the same side");
        return r;
      }
      strict = strict || v < 0;
    }
    for (const auto& l : rel.lambda[f].lineality())
      if (dot(nv, l) != 0) {
        fail("L(F) + Λ(F) crosses the hyperplane");
        return r;
      }
    if (!strict) {
      fail("L(F) + Λ(F) lies in the hyperplane");
      return r;
    }
  }
  return r;
}

/// A' = A P + (I - P) with P the orthogonal projector onto L(C); A' agrees with
/// A on L(C), so it induces the same T_F for every face.
inline RatMatrix extend_off_span(const RatMatrix& a, const FaceLattice& lat) {
  const std::size_t n = a.rows();
  const auto& basis = lat.faces[lat.top()].span_basis;
  RatMatrix p(n, n);
  if (!basis.empty()) {
    RatMatrix b = RatMatrix::from_columns(basis, n);
    RatMatrix bt = b.transpose();
    p = b * *inverse(bt * b) * bt;
  }
  RatMatrix id = RatMatrix::identity(n);
  return a * p + (id - p);
}

/// (A'(C), F ↦ N(C,F)) keyed by the faces of C; nullopt when A' is singular.
inline std::optional<ComplementarityRelation> image_relation(const RatMatrix& a, const HPolyhedron& c, const FaceLattice& lat) {
  RatMatrix ext = extend_off_span(a, lat);
  auto inv = inverse(ext);
  if (!inv) return std::nullopt;
  HPolyhedron image = c.image_under(inv->transpose());
  FaceLattice ilat = enumerate_faces(image);
  if (ilat.size() != lat.size()) throw std::logic_error("image_relation: lattice size changed under a bijection");
  std::map<IndexSet, PolyCone> table;
  for (const auto& f : lat.faces) table[f.active_set] = normal_cone(c, f);
  return relation_from_table(image, ilat, table);
}

/// Face separation of the relation induced by x ↦ Ax.
inline FaceSeparation check_face_separation(const RatMatrix& a, const HPolyhedron& c, const FaceLattice& lat) {
  auto rel = image_relation(a, c, lat);
  if (!rel) {
    FaceSeparation r;
    r.holds = r.nonsingular = false;
    r.singular_face = lat.top();
    r.reason = "A is not one-to-one on L(C)";
    return r;
  }
  return check_face_separation(*rel);
}

struct CriticalFace {
  bool holds = true;
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  std::optional<RatVector> witness;
};

/// No z != 0 with z ∈ F2 - F1 and A^T z ∈ (F2 - F1)°, over nested faces of the cone K.
inline CriticalFace check_critical_face(const RatMatrix& a, const ConeFaces& k) {
  CriticalFace r;
  const std::size_t n = k.cone.ambient_dim();
  for (auto [f1, f2] : k.lattice.nested_pairs()) {
    PolyCone q = cone_minus(k.faces[f2], k.faces[f1]);
    std::vector<RatVector> rows = q.inequalities();
    for (const auto& g : q.conic_generators()) rows.push_back(a * g);
    PolyCone w = PolyCone::from_inequalities(n, rows);
    if (w.is_zero_cone()) continue;
    r.holds = false;
    r.pair = std::make_pair(f1, f2);
    r.witness = w.rays().empty() ? w.lineality().front() : w.rays().front();
    return r;
  }
  return r;
}

/// (F2 - F1)° computed directly.
inline PolyCone polar_difference(const ConeFaces& k, std::size_t f1, std::size_t f2) {
  if (!k.lattice.contained.at(f1).at(f2)) throw UsageError("polar_difference: F1 is not contained in F2");
  return polar(cone_minus(k.faces[f2], k.faces[f1]));
}

/// K ∩ H = {0}.
inline bool check_cone_separation(const PolyCone& k, const PolyCone& h) { return cone_intersect(k, h).is_zero_cone(); }
inline bool check_cone_separation(const ConePair& p) { return check_cone_separation(p.k.cone, p.h.cone); }

struct ConeSeparationAudit {
  bool holds = true;
  std::optional<std::size_t> face;
};

/// A·T(C,F) ∩ N(C,F) = {0} for every face: the extension pairs of the
/// relation x ↦ Ax + N(C,x).
inline ConeSeparationAudit check_cone_separation(const RatMatrix& a, const HPolyhedron& c, const FaceLattice& lat) {
  ConeSeparationAudit r;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    PolyCone k = linear_image(a, tangent_cone(c, lat.faces[i]));
    if (!check_cone_separation(k, normal_cone(c, lat.faces[i]))) {
      r.holds = false;
      r.face = i;
      return r;
    }
  }
  return r;
}

/// Face used for localization: the face of the base point when given, else the
/// first vertex, else the first face of least dimension.
inline std::size_t base_face(const HPolyhedron& c, const FaceLattice& lat, const std::optional<RatVector>& base_point) {
  if (base_point) return minimal_face_index(c, lat, *base_point);
  std::size_t best = 0;
  for (std::size_t i = 1; i < lat.size(); ++i)
    if (lat.faces[i].dim < lat.faces[best].dim) best = i;
  return best;
}

/// K = T(C, F̄).
inline PolyCone localize(const HPolyhedron& c, const FaceLattice& lat, std::size_t fbar) {
  return tangent_cone(c, lat.faces.at(fbar));
}

struct AuditOptions {
  std::size_t samples = 100;
  std::uint64_t seed = 0;
};

struct RegularityReport {
  // on C
  CoherentOrientation coherent;
  FaceSeparation separation;
  bool nonsingular = true;
  ConeSeparationAudit cone_separation;
  SingleValuedVerdict stress;
  // on K = T(C, F̄)
  std::size_t base_face = 0;
  CoherentOrientation coherent_k;
  CriticalFace critical_k;
  ModulusResult modulus_k;
  SingleValuedVerdict stress_k;

  std::vector<std::string> inconsistencies;
  /// An irregular instance where the stress samples show neither a gap nor a multiplicity.
  bool unwitnessed_irregularity = false;

  [[nodiscard]] bool consistent() const { return inconsistencies.empty(); }
};

/// Every certificate plus solver observations, with each implication the
/// theory predicts checked and any failure recorded.
inline RegularityReport equivalence_audit(const AVIInstance& inst, const AuditOptions& opt = {}) {
  RegularityReport r;
  const auto& a = inst.a;
  const auto& c = inst.c;
  const auto& lat = inst.lattice;
  auto note = [&](bool ok, const std::string& msg) {
    if (!ok) r.inconsistencies.push_back(msg);
  };

  r.coherent = check_coherent_orientation(a, c, lat);
  r.separation = check_face_separation(a, c, lat);
  r.nonsingular = check_nonsingular(canonical_normal_relation(c, lat)).nonsingular;
  r.cone_separation = check_cone_separation(a, c, lat);
  AviSolver solver(inst);
  r.stress = is_single_valued(solver, stress_samples(inst, opt.samples, opt.seed));

  r.base_face = base_face(c, lat, inst.base_point);
  PolyCone k = localize(c, lat, r.base_face);
  AVIInstance cone_inst(a, HPolyhedron::from_cone(k));
  r.coherent_k = check_coherent_orientation(a, cone_inst.c, cone_inst.lattice);
  ModulusQuery q = canonical_modulus_query(a, k);
  r.critical_k = check_critical_face(a, q.k);
  ModulusOptions mopt;
  mopt.numeric = false;
  r.modulus_k = surjection_modulus(q, mopt);
  r.stress_k = is_single_valued(AviSolver(cone_inst), stress_samples(cone_inst, opt.samples, opt.seed + 1));

  note(r.coherent.coherent == r.separation.holds, "coherent orientation and face separation disagree on C");
  note(r.coherent_k.coherent == r.critical_k.holds, "coherent orientation and critical face condition disagree on K");
  note(r.critical_k.holds == r.modulus_k.positive, "critical face condition and modulus positivity disagree on K");
  note(r.nonsingular, "canonical normal relation is singular");
  if (r.coherent.coherent) {
    note(r.coherent_k.coherent, "coherent on C but not on the localized cone");
    note(r.cone_separation.holds, "regular instance with A T(C,F) ∩ N(C,F) != {0}");
    note(r.stress.covering, "regular instance with a sampled z without solution");
    note(r.stress.single_valued, "regular instance with a sampled z with several solutions");
  } else {
    r.unwitnessed_irregularity = r.stress.single_valued;
  }
  if (r.coherent_k.coherent) note(r.stress_k.single_valued, "regular cone instance with a sampled z with 0 or several solutions");
  return r;
}

}  // namespace polyreg
