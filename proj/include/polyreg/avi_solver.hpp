#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "polyreg/errors.hpp"
#include "polyreg/faces.hpp"
#include "polyreg/linalg.hpp"
#include "polyreg/parallel.hpp"
#include "polyreg/projection.hpp"

namespace polyreg {

/// z ∈ Ax + N(C,x).
struct AVIInstance {
  RatMatrix a;
  HPolyhedron c;
  FaceLattice lattice;
  std::optional<RatVector> base_point;

  AVIInstance(RatMatrix a_, HPolyhedron c_) : a(std::move(a_)), c(std::move(c_)) {
    if (!a.is_square() || a.rows() != c.dim()) throw UsageError("AVIInstance: A must be n x n with n = dim C");
    lattice = enumerate_faces(c);
  }

  [[nodiscard]] std::size_t dim() const { return c.dim(); }
};

/// Solutions lying on one face: witness is a point of the piece, piece is the
/// whole solution set restricted to the face that produced it.
struct SolutionPiece {
  IndexSet face_active_set;
  RatVector witness;
  HPolyhedron piece;
  bool single_point = true;
};

namespace detail {

inline HPolyhedron point_polyhedron(const RatVector& x) {
  std::vector<Halfspace> rows;
  for (std::size_t i = 0; i < x.size(); ++i) {
    rows.push_back({unit_vector(x.size(), i), x[i]});
    rows.push_back({-unit_vector(x.size(), i), -x[i]});
  }
  return HPolyhedron(x.size(), std::move(rows));
}

inline bool generators_inside(const PolyhedronGenerators& g, const HPolyhedron& p) {
  for (const auto& x : g.points)
    if (!p.contains(x)) return false;
  auto recession = [&](const RatVector& d) {
    for (const auto& h : p.rows())
      if (dot(h.normal, d) > 0) return false;
    return true;
  };
  for (const auto& d : g.directions)
    if (!recession(d)) return false;
  for (const auto& l : g.lineality)
    if (!recession(l) || !recession(-l)) return false;
  return true;
}

}  // namespace detail

/// All-solutions solver with per-face data precomputed once per instance.
class AviSolver {
 public:
  explicit AviSolver(const AVIInstance& inst) : inst_(&inst) {
    const std::size_t n = inst.dim();
    for (const auto& f : inst.lattice.faces) {
      FaceData d;
      d.normal = normal_cone(inst.c, f);
      auto nb = d.normal.span_basis();
      std::vector<RatVector> cols = apply_all(inst.a, f.span_basis);
      cols.insert(cols.end(), nb.begin(), nb.end());
      if (cols.size() == n) {
        if (auto inv = inverse(RatMatrix::from_columns(cols, n))) {
          // x(z) = x0 + G z from the top rows of the inverse; y(z) = z - A x(z)
          const std::size_t k = f.span_basis.size();
          RatMatrix top(k, n);
          for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < n; ++c) top(r, c) = (*inv)(r, c);
          RatMatrix g = k == 0 ? RatMatrix(n, n) : RatMatrix::from_columns(f.span_basis, n) * top;
          d.x_offset = f.ri_point - g * (inst.a * f.ri_point);
          d.x_map = g;
          d.regular = true;
        }
      }
      if (!d.regular) d.reach = reachable_set(inst, f, d.normal);
      faces_.push_back(std::move(d));
    }
  }

  [[nodiscard]] const AVIInstance& instance() const { return *inst_; }

  /// Every solution of z ∈ Ax + N(C,x), grouped into distinct pieces.
  [[nodiscard]] std::vector<SolutionPiece> solve_all(const RatVector& z) const {
    const auto& inst = *inst_;
    if (z.size() != inst.dim()) throw UsageError("solve_all: z has wrong dimension");
    std::vector<SolutionPiece> out;
    std::vector<PolyhedronGenerators> gens;
    for (std::size_t i = 0; i < faces_.size(); ++i) {
      const FaceData& d = faces_[i];
      if (d.regular) {
        RatVector x = d.x_offset + d.x_map * z;
        if (!inst.c.contains(x) || !d.normal.contains(z - inst.a * x)) continue;
        add_point(out, gens, x);
        continue;
      }
      if (!d.reach.contains(z)) continue;
      HPolyhedron piece = face_piece(i, z);
      PolyhedronGenerators g = polyhedron_generators(piece);
      if (g.points.empty()) continue;
      if (g.points.size() == 1 && g.directions.empty() && g.lineality.empty()) {
        add_point(out, gens, g.points[0]);
        continue;
      }
      bool duplicate = false;
      for (std::size_t j = 0; j < out.size() && !duplicate; ++j)
        duplicate = detail::generators_inside(g, out[j].piece) && detail::generators_inside(gens[j], piece);
      if (duplicate) continue;
      RatVector w = zeros(inst.dim());
      for (const auto& p : g.points) w = w + p;
      w = Rational(1, static_cast<long>(g.points.size())) * w;
      for (const auto& dir : g.directions) w = w + dir;
      out.push_back({inst.c.active_set(w), w, std::move(piece), false});
      gens.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(), [](const SolutionPiece& a, const SolutionPiece& b) {
      return std::tie(a.face_active_set, a.witness) < std::tie(b.face_active_set, b.witness);
    });
    return out;
  }

  /// 0, 1, or 2 meaning "two or more".
  [[nodiscard]] std::size_t solution_count(const RatVector& z) const { return count_of(solve_all(z)); }

  static std::size_t count_of(const std::vector<SolutionPiece>& pieces) {
    if (pieces.empty()) return 0;
    if (pieces.size() == 1 && pieces[0].single_point) return 1;
    return 2;
  }

 private:
  struct FaceData {
    PolyCone normal;
    bool regular = false;
    RatVector x_offset;
    RatMatrix x_map;
    HPolyhedron reach;
  };

  /// A F + N(C,F): the right-hand sides with a solution on F.
  static HPolyhedron reachable_set(const AVIInstance& inst, const Face& f, const PolyCone& normal) {
    const std::size_t n = inst.dim();
    const auto& g = inst.lattice.generators;
    auto lift = [&](const RatVector& v, long t) {
      RatVector out = v;
      out.push_back(t);
      return out;
    };
    std::vector<RatVector> rays, lin;
    for (auto p : f.points) rays.push_back(lift(inst.a * g.points[p], 1));
    for (auto d : f.directions) rays.push_back(lift(inst.a * g.directions[d], 0));
    for (const auto& l : g.lineality) lin.push_back(lift(inst.a * l, 0));
    for (const auto& r : normal.rays()) rays.push_back(lift(r, 0));
    for (const auto& l : normal.lineality()) lin.push_back(lift(l, 0));
    PolyCone hom = PolyCone::from_generators(n + 1, rays, lin);
    std::vector<Halfspace> rows;
    for (const auto& r : hom.inequalities()) rows.push_back({RatVector(r.begin(), r.end() - 1), -r[n]});
    return HPolyhedron(n, std::move(rows));
  }

  /// {x ∈ F : z - Ax ∈ N(C,F)} in x-space.
  [[nodiscard]] HPolyhedron face_piece(std::size_t i, const RatVector& z) const {
    const auto& inst = *inst_;
    std::vector<Halfspace> rows = inst.c.rows();
    for (auto r : inst.lattice.faces[i].active_set) rows.push_back({-inst.c.row(r).normal, -inst.c.row(r).offset});
    RatMatrix at = inst.a.transpose();
    for (const auto& g : faces_[i].normal.inequalities()) rows.push_back({-(at * g), -dot(g, z)});
    return HPolyhedron(inst.dim(), std::move(rows));
  }

  void add_point(std::vector<SolutionPiece>& out, std::vector<PolyhedronGenerators>& gens, const RatVector& x) const {
    for (std::size_t j = 0; j < out.size(); ++j)
      if (out[j].single_point && out[j].witness == x) return;
    out.push_back({inst_->c.active_set(x), x, detail::point_polyhedron(x), true});
    gens.push_back({{x}, {}, {}});
  }

  const AVIInstance* inst_;
  std::vector<FaceData> faces_;
};

inline std::vector<SolutionPiece> solve_all(const AVIInstance& inst, const RatVector& z) {
  return AviSolver(inst).solve_all(z);
}

/// Right-hand sides concentrated where solution pieces meet: A x̄ + ȳ for every
/// face, the shared boundary point of each covering pair and small pushes to
/// both sides of it, then seeded grid points up to min_count.
inline std::vector<RatVector> stress_samples(const AVIInstance& inst, std::size_t min_count, std::uint64_t seed) {
  const std::size_t n = inst.dim();
  const auto& lat = inst.lattice;
  std::vector<RatVector> ybar;
  for (const auto& f : lat.faces) ybar.push_back(normal_cone(inst.c, f).relative_interior_point());
  std::vector<RatVector> out;
  std::set<RatVector> seen;
  auto push = [&](RatVector z) {
    if (seen.insert(z).second) out.push_back(std::move(z));
  };
  for (std::size_t i = 0; i < lat.size(); ++i) push(inst.a * lat.faces[i].ri_point + ybar[i]);
  const Rational eps[] = {Rational(1, 4), Rational(1, 32), Rational(1, 256), Rational(1, 4096)};
  for (auto [f, g] : lat.covering_pairs) {
    RatVector z0 = inst.a * lat.faces[f].ri_point + ybar[g];
    push(z0);
    std::vector<RatVector> e = apply_all(inst.a, lat.faces[f].span_basis);
    auto ng = normal_cone(inst.c, lat.faces[g]).span_basis();
    e.insert(e.end(), ng.begin(), ng.end());
    auto normal = orthogonal_complement(e, n);
    if (normal.size() != 1) continue;
    RatVector d = primitive(normal[0]);
    for (const auto& t : eps) {
      push(z0 + t * d);
      push(z0 - t * d);
    }
  }
  // grid points of [-6,6]^n with denominator d, d refined until the grid is large enough
  long d = 4;
  auto grid_size = [&](long den) {
    double size = 1;
    for (std::size_t i = 0; i < n; ++i) size *= static_cast<double>(12 * den + 1);
    return size;
  };
  while (grid_size(d) < 4.0 * static_cast<double>(min_count + out.size())) d *= 2;
  const auto span = static_cast<std::uint64_t>(12 * d + 1);
  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 0; out.size() < min_count && attempt < 50 * min_count; ++attempt) {
    RatVector z(n);
    for (auto& v : z) v = Rational(static_cast<long>(rng() % span) - 6 * d, d);
    push(std::move(z));
  }
  return out;
}

struct SingleValuedVerdict {
  bool single_valued = true;
  bool covering = true;
  std::size_t samples = 0;
  /// First sample with no solution and first with several, in sample order.
  std::optional<RatVector> gap;
  std::optional<RatVector> multiple;

  [[nodiscard]] std::optional<RatVector> counterexample() const { return gap ? gap : multiple; }
};

inline SingleValuedVerdict is_single_valued(const AviSolver& solver, const std::vector<RatVector>& samples) {
  std::vector<std::size_t> counts(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) { counts[i] = solver.solution_count(samples[i]); });
  SingleValuedVerdict v;
  v.samples = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (counts[i] == 0 && !v.gap) v.gap = samples[i];
    if (counts[i] >= 2 && !v.multiple) v.multiple = samples[i];
  }
  v.covering = !v.gap;
  v.single_valued = !v.gap && !v.multiple;
  return v;
}

inline SingleValuedVerdict is_single_valued(const AVIInstance& inst, const std::vector<RatVector>& samples) {
  return is_single_valued(AviSolver(inst), samples);
}

/// The unique solution for z, or NonUniqueError.
inline RatVector unique_solution(const AviSolver& solver, const RatVector& z) {
  auto pieces = solver.solve_all(z);
  if (AviSolver::count_of(pieces) != 1) throw NonUniqueError("right-hand side " + to_string(z) + " does not have exactly one solution");
  return pieces[0].witness;
}

/// max ‖x(z) - x(z')‖² / ‖z - z'‖² over the given pairs (pairs with z = z' skipped).
inline Rational lipschitz_estimate(const AviSolver& solver, const std::vector<std::pair<RatVector, RatVector>>& pairs) {
  std::vector<Rational> ratios(pairs.size(), Rational(0));
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& [z, w] = pairs[i];
    Rational dz = squared_norm(z - w);
    RatVector x = unique_solution(solver, z), y = unique_solution(solver, w);
    if (dz != 0) ratios[i] = squared_norm(x - y) / dz;
  });
  Rational best = 0;
  for (const auto& r : ratios) best = std::max(best, r);
  return best;
}

inline Rational lipschitz_estimate(const AVIInstance& inst, const std::vector<std::pair<RatVector, RatVector>>& pairs) {
  return lipschitz_estimate(AviSolver(inst), pairs);
}

/// A Π_C(y) + y - Π_C(y).
inline RatVector normal_map_eval(const AVIInstance& inst, const Projector& proj, const RatVector& y) {
  RatVector p = proj(y);
  return inst.a * p + y - p;
}

inline RatVector normal_map_eval(const AVIInstance& inst, const RatVector& y) {
  return normal_map_eval(inst, Projector(inst.c, inst.lattice), y);
}

}  // namespace polyreg
