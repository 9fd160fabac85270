#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "polyreg/linalg.hpp"
#include "polyreg/rational.hpp"

namespace polyreg {

/// Generator description of a polyhedral cone: cone(rays) + span(lineality).
struct ConeGenerators {
  std::vector<RatVector> rays;
  std::vector<RatVector> lineality;
};

namespace detail {

/// Orthogonal projection of v onto the complement of span(basis) (basis independent).
inline RatVector project_out(const RatVector& v, const std::vector<RatVector>& basis) {
  if (basis.empty()) return v;
  const std::size_t k = basis.size();
  RatMatrix gram(k, k);
  RatVector rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) gram(i, j) = dot(basis[i], basis[j]);
    rhs[i] = dot(basis[i], v);
  }
  auto coef = solve_linear(gram, rhs);
  RatVector out = v;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < v.size(); ++c) out[c] -= coef->particular[i] * basis[i][c];
  return out;
}

/// Canonical basis of a subspace: the nonzero rows of the reduced echelon form.
inline std::vector<RatVector> canonical_subspace_basis(const std::vector<RatVector>& vectors, std::size_t n) {
  if (vectors.empty()) return {};
  RowEchelon e = row_reduce(RatMatrix::from_rows(vectors, n));
  std::vector<RatVector> basis;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) basis.push_back(primitive(e.reduced.row(r)));
  return basis;
}

}  // namespace detail

/// Double description (Motzkin) conversion of {x : <a, x> <= 0 for a in rows}
/// into extreme rays and a lineality basis. Rays are returned as primitive
/// integer vectors orthogonal to the lineality space, sorted.
inline ConeGenerators double_description(const std::vector<RatVector>& rows, std::size_t n) {
  std::vector<RatVector> lin;
  for (std::size_t i = 0; i < n; ++i) lin.push_back(unit_vector(n, i));
  std::vector<RatVector> rays;
  std::vector<const RatVector*> processed;

  for (const RatVector& a : rows) {
    if (a.size() != n) throw UsageError("double_description: row has wrong dimension");
    if (is_zero(a)) continue;
    std::size_t pick = lin.size();
    Rational a_l0;
    for (std::size_t i = 0; i < lin.size(); ++i) {
      a_l0 = dot(a, lin[i]);
      if (a_l0 != 0) {
        pick = i;
        break;
      }
    }
    if (pick < lin.size()) {
      RatVector l0 = lin[pick];
      if (a_l0 > 0) {
        l0 = -l0;
        a_l0 = -a_l0;
      }
      std::vector<RatVector> new_lin;
      for (std::size_t i = 0; i < lin.size(); ++i) {
        if (i == pick) continue;
        Rational f = dot(a, lin[i]) / a_l0;
        new_lin.push_back(f == 0 ? lin[i] : lin[i] - f * l0);
      }
      for (auto& r : rays) {
        Rational f = dot(a, r) / a_l0;
        if (f != 0) r = primitive(r - f * l0);
      }
      rays.push_back(primitive(l0));
      lin = std::move(new_lin);
      processed.push_back(&a);
      continue;
    }

    std::vector<Rational> val(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) val[i] = dot(a, rays[i]);
    std::vector<RatVector> next;
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (val[i] <= 0) next.push_back(rays[i]);

    const std::size_t pointed_dim = n - lin.size();
    for (std::size_t p = 0; p < rays.size(); ++p) {
      if (val[p] <= 0) continue;
      for (std::size_t q = 0; q < rays.size(); ++q) {
        if (val[q] >= 0) continue;
        std::vector<RatVector> common;
        for (const RatVector* row : processed)
          if (dot(*row, rays[p]) == 0 && dot(*row, rays[q]) == 0) common.push_back(*row);
        if (pointed_dim < 2 || common.size() + 2 < pointed_dim) continue;
        if (rank(common, n) != pointed_dim - 2) continue;
        RatVector combo(n);
        for (std::size_t c = 0; c < n; ++c) combo[c] = val[p] * rays[q][c] - val[q] * rays[p][c];
        next.push_back(primitive(combo));
      }
    }
    rays = std::move(next);
    processed.push_back(&a);
  }

  ConeGenerators out;
  out.lineality = detail::canonical_subspace_basis(lin, n);
  for (const auto& r : rays) {
    RatVector p = primitive(detail::project_out(r, out.lineality));
    if (!is_zero(p)) out.rays.push_back(std::move(p));
  }
  std::sort(out.rays.begin(), out.rays.end());
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
  return out;
}

/// Polyhedral cone kept in both inequality form {x : <a_i, x> <= 0} and
/// generator form cone(rays) + span(lineality). The two forms always
/// describe the same set.
class PolyCone {
 public:
  PolyCone() = default;

  static PolyCone from_inequalities(std::size_t n, std::vector<RatVector> rows) {
    PolyCone k;
    k.n_ = n;
    for (auto& r : rows) {
      if (r.size() != n) throw UsageError("PolyCone: inequality has wrong dimension");
      if (!is_zero(r)) k.rows_.push_back(std::move(r));
    }
    ConeGenerators g = double_description(k.rows_, n);
    k.rays_ = std::move(g.rays);
    k.lineality_ = std::move(g.lineality);
    return k;
  }

  static PolyCone from_generators(std::size_t n, const std::vector<RatVector>& rays,
                                  const std::vector<RatVector>& lineality = {}) {
    std::vector<RatVector> polar_rows;
    for (const auto& g : rays) {
      if (g.size() != n) throw UsageError("PolyCone: generator has wrong dimension");
      if (!is_zero(g)) polar_rows.push_back(g);
    }
    for (const auto& l : lineality) {
      if (l.size() != n) throw UsageError("PolyCone: lineality vector has wrong dimension");
      if (is_zero(l)) continue;
      polar_rows.push_back(l);
      polar_rows.push_back(-l);
    }
    ConeGenerators polar = double_description(polar_rows, n);
    std::vector<RatVector> rows = polar.rays;
    for (const auto& l : polar.lineality) {
      rows.push_back(l);
      rows.push_back(-l);
    }
    return from_inequalities(n, std::move(rows));
  }

  static PolyCone zero(std::size_t n) { return from_generators(n, {}); }
  static PolyCone full(std::size_t n) { return from_inequalities(n, {}); }

  [[nodiscard]] std::size_t ambient_dim() const { return n_; }
  [[nodiscard]] const std::vector<RatVector>& inequalities() const { return rows_; }
  [[nodiscard]] const std::vector<RatVector>& rays() const { return rays_; }
  [[nodiscard]] const std::vector<RatVector>& lineality() const { return lineality_; }

  /// Rays plus both signs of every lineality vector; their conic hull is the cone.
  [[nodiscard]] std::vector<RatVector> conic_generators() const {
    std::vector<RatVector> g = rays_;
    for (const auto& l : lineality_) {
      g.push_back(l);
      g.push_back(-l);
    }
    return g;
  }

  [[nodiscard]] bool contains(const RatVector& x) const {
    if (x.size() != n_) throw UsageError("PolyCone::contains: dimension mismatch");
    for (const auto& r : rows_)
      if (dot(r, x) > 0) return false;
    return true;
  }

  [[nodiscard]] bool contains(const PolyCone& other) const {
    if (other.n_ != n_) throw UsageError("PolyCone::contains: dimension mismatch");
    for (const auto& g : other.rays_)
      if (!contains(g)) return false;
    for (const auto& l : other.lineality_)
      if (!contains(l) || !contains(RatVector(-l))) return false;
    return true;
  }

  /// Set equality by mutual containment.
  [[nodiscard]] bool same_set(const PolyCone& other) const { return contains(other) && other.contains(*this); }

  /// Basis of L(K), the linear span of the cone.
  [[nodiscard]] std::vector<RatVector> span_basis() const {
    std::vector<RatVector> all = rays_;
    all.insert(all.end(), lineality_.begin(), lineality_.end());
    return span_basis_of(all);
  }

  [[nodiscard]] std::size_t dim() const { return rank(conic_generators(), n_); }

  [[nodiscard]] bool is_zero_cone() const { return rays_.empty() && lineality_.empty(); }
  [[nodiscard]] bool is_subspace() const { return rays_.empty(); }

  /// A point of the relative interior: the sum of the extreme rays.
  [[nodiscard]] RatVector relative_interior_point() const {
    RatVector p = zeros(n_);
    for (const auto& r : rays_) p = p + r;
    return p;
  }

 private:
  std::vector<RatVector> span_basis_of(const std::vector<RatVector>& v) const { return polyreg::span_basis(v, n_); }

  std::size_t n_ = 0;
  std::vector<RatVector> rows_;
  std::vector<RatVector> rays_;
  std::vector<RatVector> lineality_;
};

/// K° = {y : <y, x> <= 0 for all x in K}.
inline PolyCone polar(const PolyCone& k) { return PolyCone::from_inequalities(k.ambient_dim(), k.conic_generators()); }

inline PolyCone cone_sum(const PolyCone& a, const PolyCone& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw UsageError("cone_sum: dimension mismatch");
  std::vector<RatVector> rays = a.rays();
  rays.insert(rays.end(), b.rays().begin(), b.rays().end());
  std::vector<RatVector> lin = a.lineality();
  lin.insert(lin.end(), b.lineality().begin(), b.lineality().end());
  return PolyCone::from_generators(a.ambient_dim(), rays, lin);
}

inline PolyCone cone_intersect(const PolyCone& a, const PolyCone& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw UsageError("cone_intersect: dimension mismatch");
  std::vector<RatVector> rows = a.inequalities();
  rows.insert(rows.end(), b.inequalities().begin(), b.inequalities().end());
  return PolyCone::from_inequalities(a.ambient_dim(), rows);
}

inline PolyCone negate(const PolyCone& k) {
  std::vector<RatVector> rays;
  for (const auto& r : k.rays()) rays.push_back(-r);
  return PolyCone::from_generators(k.ambient_dim(), rays, k.lineality());
}

/// a - b = a + (-b).
inline PolyCone cone_difference(const PolyCone& a, const PolyCone& b) { return cone_sum(a, negate(b)); }

/// F2 - F1 for faces F1 ⊆ F2 of a cone, which equals F2 + L(F1).
inline PolyCone cone_minus(const PolyCone& f2, const PolyCone& f1) {
  if (!f2.contains(f1)) throw UsageError("cone_minus: F1 is not contained in F2");
  std::vector<RatVector> lin = f2.lineality();
  auto span1 = f1.span_basis();
  lin.insert(lin.end(), span1.begin(), span1.end());
  return PolyCone::from_generators(f2.ambient_dim(), f2.rays(), lin);
}

/// M(K) for a linear map given by a matrix with K's ambient dimension as column count.
inline PolyCone linear_image(const RatMatrix& m, const PolyCone& k) {
  if (m.cols() != k.ambient_dim()) throw UsageError("linear_image: dimension mismatch");
  return PolyCone::from_generators(m.rows(), apply_all(m, k.rays()), apply_all(m, k.lineality()));
}

/// {x : M x ∈ K}.
inline PolyCone linear_preimage(const RatMatrix& m, const PolyCone& k) {
  if (m.rows() != k.ambient_dim()) throw UsageError("linear_preimage: dimension mismatch");
  return PolyCone::from_inequalities(m.cols(), apply_all(m.transpose(), k.inequalities()));
}

inline PolyCone subspace_cone(std::size_t n, const std::vector<RatVector>& basis) {
  return PolyCone::from_generators(n, {}, basis);
}

}  // namespace polyreg
