#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyreg/cone.hpp"
#include "polyreg/errors.hpp"
#include "polyreg/faces.hpp"
#include "polyreg/linalg.hpp"

namespace polyreg {

/// Λ_C: one polyhedral cone per face of C, indexed like the lattice.
struct ComplementarityRelation {
  HPolyhedron base;
  FaceLattice lattice;
  std::vector<PolyCone> lambda;

  [[nodiscard]] std::size_t ambient_dim() const { return base.dim(); }
  [[nodiscard]] const PolyCone& at(const IndexSet& key) const {
    auto idx = lattice.find(key);
    if (!idx) throw MalformedRelationError("relation has no face with this active set");
    return lambda[*idx];
  }
};

/// F ↦ N(C,F).
inline ComplementarityRelation canonical_normal_relation(const HPolyhedron& c, const FaceLattice& lat) {
  ComplementarityRelation rel{c, lat, {}};
  rel.lambda.reserve(lat.size());
  for (const auto& f : lat.faces) rel.lambda.push_back(normal_cone(c, f));
  return rel;
}

inline ComplementarityRelation canonical_normal_relation(const HPolyhedron& c) {
  return canonical_normal_relation(c, enumerate_faces(c));
}

/// Relation given as an explicit face-key table; every face of C must be listed.
inline ComplementarityRelation relation_from_table(const HPolyhedron& c, const FaceLattice& lat,
                                                   const std::map<IndexSet, PolyCone>& table) {
  ComplementarityRelation rel{c, lat, {}};
  for (const auto& [key, cone] : table)
    if (!lat.find(key)) throw MalformedRelationError("relation lists an active set that is not a face key");
  for (const auto& f : lat.faces) {
    auto it = table.find(f.active_set);
    if (it == table.end()) throw MalformedRelationError("relation is missing a face of C");
    if (it->second.ambient_dim() != c.dim()) throw MalformedRelationError("relation cone has wrong dimension");
    rel.lambda.push_back(it->second);
  }
  return rel;
}

/// Faces of a cone, each also as a PolyCone.
struct ConeFaces {
  PolyCone cone;
  HPolyhedron poly;
  FaceLattice lattice;
  std::vector<PolyCone> faces;

  explicit ConeFaces(PolyCone k) : cone(std::move(k)), poly(HPolyhedron::from_cone(cone)), lattice(enumerate_faces(poly)) {
    for (const auto& f : lattice.faces) faces.push_back(face_cone(lattice, f));
  }

  /// Index of the face equal to g, or nullopt when g is not a face.
  [[nodiscard]] std::optional<std::size_t> find_face(const PolyCone& g) const {
    RatVector ri = g.relative_interior_point();
    if (!poly.contains(ri)) return std::nullopt;
    std::size_t idx = minimal_face_index(poly, lattice, ri);
    if (!faces[idx].same_set(g)) return std::nullopt;
    return idx;
  }
};

/// (K, H, Λ) with Λ given as a map from face indices of K to face indices of H.
struct ConePair {
  ConeFaces k;
  ConeFaces h;
  std::vector<std::size_t> lambda;
};

/// Builds a pair from one cone per face of K; each must be a face of H.
inline ConePair make_cone_pair(const PolyCone& k, const PolyCone& h, const std::vector<PolyCone>& lambda_cones) {
  ConePair p{ConeFaces(k), ConeFaces(h), {}};
  if (lambda_cones.size() != p.k.lattice.size()) throw MalformedRelationError("one cone per face of K is required");
  for (const auto& g : lambda_cones) {
    auto idx = p.h.find_face(g);
    if (!idx) throw MalformedRelationError("assigned cone is not a face of H");
    p.lambda.push_back(*idx);
  }
  return p;
}

/// (K, K°, N(K,·)).
inline ConePair normal_cone_pair(const PolyCone& k) {
  ConeFaces kf(k);
  std::vector<PolyCone> lambda;
  for (const auto& f : kf.lattice.faces) lambda.push_back(normal_cone(kf.poly, f));
  return make_cone_pair(k, polar(k), lambda);
}

struct ComplementarityReport {
  std::size_t n = 0;
  /// dim L(F) + dim L(Λ(F)) per face of K.
  std::vector<std::size_t> dimension_sums;
  bool dimensions_ok = true;
  /// Face pairs (i, j) of K where F_i ⊆ F_j and Λ(F_j) ⊆ Λ(F_i) disagree.
  std::vector<std::pair<std::size_t, std::size_t>> order_violations;

  [[nodiscard]] bool ok() const { return dimensions_ok && order_violations.empty(); }
};

inline ComplementarityReport verify_face_complementarity(const ConePair& p) {
  const std::size_t nk = p.k.lattice.size();
  if (p.lambda.size() != nk || nk != p.h.lattice.size())
    throw MalformedRelationError("lambda is not a bijection between the face lattices");
  std::vector<bool> hit(nk, false);
  for (auto j : p.lambda) {
    if (j >= nk || hit[j]) throw MalformedRelationError("lambda is not a bijection between the face lattices");
    hit[j] = true;
  }
  ComplementarityReport r;
  r.n = p.k.cone.ambient_dim();
  for (std::size_t i = 0; i < nk; ++i) {
    std::size_t s = p.k.lattice.faces[i].dim + p.h.lattice.faces[p.lambda[i]].dim;
    r.dimension_sums.push_back(s);
    if (s != r.n) r.dimensions_ok = false;
  }
  for (std::size_t a = 0; a < nk; ++a)
    for (std::size_t b = 0; b < nk; ++b)
      if (p.k.lattice.contained[a][b] != p.h.lattice.contained[p.lambda[b]][p.lambda[a]]) r.order_violations.emplace_back(a, b);
  return r;
}

struct NonsingularityCheck {
  bool nonsingular = true;
  std::optional<std::size_t> face;
};

/// L(F) ⊕ L(Λ(F)) = R^n for every face.
inline NonsingularityCheck check_nonsingular(const ComplementarityRelation& rel) {
  const std::size_t n = rel.ambient_dim();
  for (std::size_t i = 0; i < rel.lattice.size(); ++i) {
    std::vector<RatVector> all = rel.lattice.faces[i].span_basis;
    auto m = rel.lambda[i].span_basis();
    const std::size_t total = all.size() + m.size();
    all.insert(all.end(), m.begin(), m.end());
    if (total != n || rank(all, n) != n) return {false, i};
  }
  return {};
}

/// Face indices of C containing F̄.
inline std::vector<std::size_t> faces_containing(const FaceLattice& lat, std::size_t fbar) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < lat.size(); ++j)
    if (lat.contained[fbar][j]) out.push_back(j);
  return out;
}

/// Tangential extension along F̄: K = T(C,F̄), H = Λ(F̄), F + L(F̄) ↦ Λ(F).
inline ConePair tangential_extension(const ComplementarityRelation& rel, std::size_t fbar) {
  const auto& c = rel.base;
  const auto& lat = rel.lattice;
  const Face& bar = lat.faces.at(fbar);
  PolyCone k = tangent_cone(c, bar);
  ConePair p{ConeFaces(k), ConeFaces(rel.lambda[fbar]), {}};
  p.lambda.assign(p.k.lattice.size(), 0);
  std::vector<bool> set(p.k.lattice.size(), false);
  for (auto j : faces_containing(lat, fbar)) {
    // rows of K are the normals of I(F̄) in order; F ⊇ F̄ is cut out by I(F) ⊆ I(F̄)
    IndexSet key;
    for (std::size_t pos = 0; pos < bar.active_set.size(); ++pos)
      if (std::binary_search(lat.faces[j].active_set.begin(), lat.faces[j].active_set.end(), bar.active_set[pos]))
        key.push_back(pos);
    auto kidx = p.k.lattice.find(key);
    if (!kidx) throw std::logic_error("tangential_extension: face of C has no image face in T(C,F)");
    auto hidx = p.h.find_face(rel.lambda[j]);
    if (!hidx) throw MalformedRelationError("Λ(F) is not a face of Λ(F̄)");
    p.lambda[*kidx] = *hidx;
    set[*kidx] = true;
  }
  for (bool s : set)
    if (!s) throw std::logic_error("tangential_extension: face of T(C,F) without a face of C");
  return p;
}

/// Cone pair in M = L(Λ(F̄)) expressed in coordinates of a basis of M,
/// together with the coordinate map R^n → R^{dim M} of π_ML.
struct Factorization {
  ConePair pair;
  std::vector<RatVector> m_basis;
  RatMatrix coordinates;
};

inline Factorization factorization(const ComplementarityRelation& rel, std::size_t fbar) {
  if (!check_nonsingular(rel).nonsingular) throw SingularRelationError("factorization requires a non-singular relation");
  const std::size_t n = rel.ambient_dim();
  const auto& l_basis = rel.lattice.faces.at(fbar).span_basis;
  auto m_basis = rel.lambda[fbar].span_basis();
  std::vector<RatVector> cols = l_basis;
  cols.insert(cols.end(), m_basis.begin(), m_basis.end());
  RatMatrix inv = *inverse(RatMatrix::from_columns(cols, n));
  const std::size_t m = m_basis.size();
  RatMatrix coords(m, n);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) coords(r, c) = inv(l_basis.size() + r, c);

  ConePair ext = tangential_extension(rel, fbar);
  ConePair p{ConeFaces(linear_image(coords, ext.k.cone)), ConeFaces(linear_image(coords, ext.h.cone)), {}};
  p.lambda.assign(p.k.lattice.size(), 0);
  std::vector<bool> set(p.k.lattice.size(), false);
  for (std::size_t i = 0; i < ext.k.lattice.size(); ++i) {
    auto kidx = p.k.find_face(linear_image(coords, ext.k.faces[i]));
    auto hidx = p.h.find_face(linear_image(coords, ext.h.faces[ext.lambda[i]]));
    if (!kidx || !hidx) throw std::logic_error("factorization: projected face is not a face");
    if (set[*kidx]) throw MalformedRelationError("factorization: two faces collapse under the projection");
    p.lambda[*kidx] = *hidx;
    set[*kidx] = true;
  }
  return {std::move(p), std::move(m_basis), std::move(coords)};
}

/// Φ(x) = Tx + S(Λ(F_min(x))).
struct ComplementarityMap {
  const ComplementarityRelation* relation = nullptr;
  RatMatrix t;
  RatMatrix s;

  explicit ComplementarityMap(const ComplementarityRelation& rel)
      : relation(&rel), t(RatMatrix::identity(rel.ambient_dim())), s(RatMatrix::identity(rel.ambient_dim())) {}
  ComplementarityMap(const ComplementarityRelation& rel, RatMatrix t_, RatMatrix s_)
      : relation(&rel), t(std::move(t_)), s(std::move(s_)) {}
};

/// z ∈ Φ(x).
inline bool phi_membership(const ComplementarityMap& phi, const RatVector& x, const RatVector& z) {
  const auto& rel = *phi.relation;
  std::size_t f = minimal_face_index(rel.base, rel.lattice, x);
  return linear_image(phi.s, rel.lambda[f]).contains(z - phi.t * x);
}

/// F_max^H(x) = Λ(F_min^K(x)), as a face index of H.
inline std::size_t fmax_pair(const ConePair& p, const RatVector& x) {
  return p.lambda[minimal_face_index(p.k.poly, p.k.lattice, x)];
}

/// F_max^K(y) = Λ^{-1}(F_min^H(y)), as a face index of K.
inline std::size_t fmax_pair_dual(const ConePair& p, const RatVector& y) {
  std::size_t g = minimal_face_index(p.h.poly, p.h.lattice, y);
  for (std::size_t i = 0; i < p.lambda.size(); ++i)
    if (p.lambda[i] == g) return i;
  throw MalformedRelationError("lambda is not onto the faces of H");
}

}  // namespace polyreg
