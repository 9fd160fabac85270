#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "polyreg/cone.hpp"
#include "polyreg/errors.hpp"
#include "polyreg/linalg.hpp"
#include "polyreg/polyhedron.hpp"

namespace polyreg {

using FaceMask = std::uint64_t;

inline FaceMask to_mask(const IndexSet& s) {
  FaceMask m = 0;
  for (auto i : s) m |= FaceMask{1} << i;
  return m;
}

inline IndexSet to_index_set(FaceMask m) {
  IndexSet s;
  for (std::size_t i = 0; i < 64; ++i)
    if (m & (FaceMask{1} << i)) s.push_back(i);
  return s;
}

/// A nonempty face F of C, keyed by its maximal active set I(F).
struct Face {
  IndexSet active_set;
  FaceMask mask = 0;
  std::size_t dim = 0;
  std::vector<RatVector> span_basis;  // basis of L(F) = span(F - F)
  RatVector ri_point;
  std::vector<std::size_t> points;      // indices into the lattice generators
  std::vector<std::size_t> directions;  // indices into the lattice generators
};

struct FaceLattice {
  std::size_t n = 0;
  std::vector<Face> faces;  // sorted by active set, lexicographically
  /// (i, j): F_i ⊂ F_j with dim F_j = dim F_i + 1.
  std::vector<std::pair<std::size_t, std::size_t>> covering_pairs;
  /// contained[i][j] is true iff F_i ⊆ F_j.
  std::vector<std::vector<bool>> contained;
  PolyhedronGenerators generators;
  std::map<FaceMask, std::size_t> index;

  [[nodiscard]] std::optional<std::size_t> find(const IndexSet& active) const {
    auto it = index.find(to_mask(active));
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] std::size_t size() const { return faces.size(); }
  /// Index of C itself (the face with the smallest active set).
  [[nodiscard]] std::size_t top() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < faces.size(); ++i)
      if (faces[i].dim > faces[best].dim) best = i;
    return best;
  }
  /// Pairs (i, j) with F_i ⊆ F_j, including i == j.
  [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> nested_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < faces.size(); ++i)
      for (std::size_t j = 0; j < faces.size(); ++j)
        if (contained[i][j]) out.emplace_back(i, j);
    return out;
  }
};

namespace detail {

inline Face make_face(FaceMask mask, const PolyhedronGenerators& g, const std::vector<FaceMask>& point_z,
                      const std::vector<FaceMask>& dir_z, std::size_t n) {
  Face f;
  f.mask = mask;
  f.active_set = to_index_set(mask);
  for (std::size_t i = 0; i < point_z.size(); ++i)
    if ((point_z[i] & mask) == mask) f.points.push_back(i);
  for (std::size_t i = 0; i < dir_z.size(); ++i)
    if ((dir_z[i] & mask) == mask) f.directions.push_back(i);

  RatVector ri = zeros(n);
  for (auto p : f.points) ri = ri + g.points[p];
  ri = Rational(1, static_cast<long>(f.points.size())) * ri;
  for (auto d : f.directions) ri = ri + g.directions[d];
  f.ri_point = std::move(ri);

  std::vector<RatVector> spanning;
  const RatVector& base = g.points[f.points.front()];
  for (std::size_t i = 1; i < f.points.size(); ++i) spanning.push_back(g.points[f.points[i]] - base);
  for (auto d : f.directions) spanning.push_back(g.directions[d]);
  spanning.insert(spanning.end(), g.lineality.begin(), g.lineality.end());
  f.span_basis = span_basis(spanning, n);
  f.dim = f.span_basis.size();
  return f;
}

}  // namespace detail

/// Enumerates every nonempty face of C exactly once, keyed by its maximal
/// active set. Faces are discovered breadth-first from C by tightening one
/// inequality at a time; each candidate is closed to its maximal active set
/// through the generator/constraint incidence of a double description of C.
inline FaceLattice enumerate_faces(const HPolyhedron& c) {
  const std::size_t n = c.dim();
  const std::size_t k = c.size();
  if (k > 64) throw UsageError("enumerate_faces: at most 64 inequalities are supported");
  FaceLattice lat;
  lat.n = n;
  lat.generators = polyhedron_generators(c);
  const auto& g = lat.generators;
  if (g.points.empty()) throw EmptySetError();

  auto incidence = [&](const RatVector& v, bool is_point) {
    FaceMask z = 0;
    for (std::size_t i = 0; i < k; ++i) {
      Rational val = dot(c.row(i).normal, v);
      if (is_point ? val == c.row(i).offset : val == 0) z |= FaceMask{1} << i;
    }
    return z;
  };
  std::vector<FaceMask> point_z, dir_z;
  for (const auto& p : g.points) point_z.push_back(incidence(p, true));
  for (const auto& d : g.directions) dir_z.push_back(incidence(d, false));
  const FaceMask all = k == 64 ? ~FaceMask{0} : ((FaceMask{1} << k) - 1);

  // Maximal active set of F_J, or nullopt when F_J is empty.
  auto closure = [&](FaceMask j) -> std::optional<FaceMask> {
    FaceMask closed = all;
    bool has_point = false;
    for (auto z : point_z)
      if ((z & j) == j) {
        closed &= z;
        has_point = true;
      }
    if (!has_point) return std::nullopt;
    for (auto z : dir_z)
      if ((z & j) == j) closed &= z;
    return closed;
  };

  std::vector<FaceMask> found;
  std::deque<FaceMask> queue;
  auto root = closure(0);
  found.push_back(*root);
  queue.push_back(*root);
  std::map<FaceMask, bool> seen{{*root, true}};
  while (!queue.empty()) {
    FaceMask j = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < k; ++i) {
      if (j & (FaceMask{1} << i)) continue;
      auto next = closure(j | (FaceMask{1} << i));
      if (!next || seen.count(*next)) continue;
      seen[*next] = true;
      found.push_back(*next);
      queue.push_back(*next);
    }
  }

  std::vector<std::pair<IndexSet, FaceMask>> keyed;
  for (auto m : found) keyed.emplace_back(to_index_set(m), m);
  std::sort(keyed.begin(), keyed.end());
  for (const auto& [key, m] : keyed) {
    lat.index[m] = lat.faces.size();
    lat.faces.push_back(detail::make_face(m, g, point_z, dir_z, n));
  }

  const std::size_t f = lat.faces.size();
  lat.contained.assign(f, std::vector<bool>(f, false));
  for (std::size_t a = 0; a < f; ++a)
    for (std::size_t b = 0; b < f; ++b) {
      // F_a ⊆ F_b iff I(F_b) ⊆ I(F_a)
      lat.contained[a][b] = (lat.faces[a].mask & lat.faces[b].mask) == lat.faces[b].mask;
      if (a != b && lat.contained[a][b] && lat.faces[b].dim == lat.faces[a].dim + 1)
        lat.covering_pairs.emplace_back(a, b);
    }
  return lat;
}

/// F_min(x): the face whose relative interior contains x.
inline const Face& minimal_face(const HPolyhedron& c, const FaceLattice& lat, const RatVector& x) {
  if (!c.contains(x)) throw NotInSetError("minimal_face: point is not in C");
  auto idx = lat.find(c.active_set(x));
  if (!idx) throw std::logic_error("minimal_face: active set of a point of C is not a face key");
  return lat.faces[*idx];
}

inline std::size_t minimal_face_index(const HPolyhedron& c, const FaceLattice& lat, const RatVector& x) {
  if (!c.contains(x)) throw NotInSetError("minimal_face: point is not in C");
  auto idx = lat.find(c.active_set(x));
  if (!idx) throw std::logic_error("minimal_face: active set of a point of C is not a face key");
  return *idx;
}

/// T(C, F) = {h : <y_i, h> <= 0, i in I(F)}.
inline PolyCone tangent_cone(const HPolyhedron& c, const Face& f) {
  return PolyCone::from_inequalities(c.dim(), c.normals(f.active_set));
}

/// N(C, F) = cone{y_i : i in I(F)}.
inline PolyCone normal_cone(const HPolyhedron& c, const Face& f) {
  return PolyCone::from_generators(c.dim(), c.normals(f.active_set));
}

/// Face F of C as a polyhedron in its own right: the constraints of C with
/// those in I(F) turned into equalities.
inline HPolyhedron face_polyhedron(const HPolyhedron& c, const Face& f) {
  std::vector<Halfspace> rows = c.rows();
  for (auto i : f.active_set) rows.push_back({-c.row(i).normal, -c.row(i).offset});
  return HPolyhedron(c.dim(), std::move(rows));
}

/// lin K for a cone.
inline std::vector<RatVector> lineality(const PolyCone& k) { return k.lineality(); }

/// Basis of L(F).
inline std::vector<RatVector> span(const Face& f) { return f.span_basis; }
inline std::vector<RatVector> span(const PolyCone& k) { return k.span_basis(); }

/// Generator form of a face of a cone C (all offsets zero).
inline PolyCone face_cone(const FaceLattice& lat, const Face& f) {
  std::vector<RatVector> rays;
  for (auto d : f.directions) rays.push_back(lat.generators.directions[d]);
  // Points of a cone's faces are the apex modulo lineality, i.e. zero.
  return PolyCone::from_generators(lat.n, rays, lat.generators.lineality);
}

}  // namespace polyreg
