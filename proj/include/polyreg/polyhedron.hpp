#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "polyreg/cone.hpp"
#include "polyreg/lp.hpp"
#include "polyreg/rational.hpp"

namespace polyreg {

/// Sorted list of constraint indices.
using IndexSet = std::vector<std::size_t>;

/// <normal, x> <= offset
struct Halfspace {
  RatVector normal;
  Rational offset;
};

/// {x in R^n : <y_i, x> <= alpha_i, i = 0..k-1}. Zero rows are never stored:
/// 0 <= alpha with alpha >= 0 is dropped, alpha < 0 marks the set empty.
class HPolyhedron {
 public:
  HPolyhedron() = default;
  HPolyhedron(std::size_t n, std::vector<Halfspace> rows) : n_(n) {
    for (auto& h : rows) {
      if (h.normal.size() != n) throw UsageError("HPolyhedron: inequality has wrong dimension");
      if (is_zero(h.normal)) {
        if (h.offset < 0) trivially_empty_ = true;
        continue;
      }
      rows_.push_back(std::move(h));
    }
  }

  static HPolyhedron from_cone(const PolyCone& k) {
    std::vector<Halfspace> rows;
    for (const auto& r : k.inequalities()) rows.push_back({r, 0});
    return HPolyhedron(k.ambient_dim(), std::move(rows));
  }

  /// The nonnegative orthant R^n_+.
  static HPolyhedron orthant(std::size_t n) {
    std::vector<Halfspace> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back({-unit_vector(n, i), 0});
    return HPolyhedron(n, std::move(rows));
  }

  static HPolyhedron box(std::size_t n, const Rational& lo, const Rational& hi) {
    std::vector<Halfspace> rows;
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back({-unit_vector(n, i), -lo});
      rows.push_back({unit_vector(n, i), hi});
    }
    return HPolyhedron(n, std::move(rows));
  }

  [[nodiscard]] std::size_t dim() const { return n_; }
  [[nodiscard]] std::size_t size() const { return rows_.size(); }
  [[nodiscard]] const std::vector<Halfspace>& rows() const { return rows_; }
  [[nodiscard]] const Halfspace& row(std::size_t i) const { return rows_.at(i); }
  [[nodiscard]] bool trivially_empty() const { return trivially_empty_; }

  [[nodiscard]] bool is_cone() const {
    for (const auto& h : rows_)
      if (h.offset != 0) return false;
    return true;
  }

  [[nodiscard]] bool contains(const RatVector& x) const {
    if (x.size() != n_) throw UsageError("HPolyhedron::contains: dimension mismatch");
    if (trivially_empty_) return false;
    for (const auto& h : rows_)
      if (dot(h.normal, x) > h.offset) return false;
    return true;
  }

  /// I(x): indices of the constraints tight at x.
  [[nodiscard]] IndexSet active_set(const RatVector& x) const {
    IndexSet s;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (dot(rows_[i].normal, x) == rows_[i].offset) s.push_back(i);
    return s;
  }

  [[nodiscard]] std::vector<LinearConstraint> constraints() const {
    std::vector<LinearConstraint> cs;
    cs.reserve(rows_.size() + 1);
    for (const auto& h : rows_) cs.push_back({h.normal, h.offset, Relation::LessEqual});
    if (trivially_empty_) cs.push_back({zeros(n_), -1, Relation::LessEqual});
    return cs;
  }

  [[nodiscard]] std::optional<RatVector> feasible_point() const {
    if (trivially_empty_) return std::nullopt;
    return lp_feasible(constraints(), n_);
  }

  [[nodiscard]] bool is_empty() const { return !feasible_point().has_value(); }

  [[nodiscard]] std::vector<RatVector> normals(const IndexSet& idx) const {
    std::vector<RatVector> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(rows_.at(i).normal);
    return out;
  }

  /// Image under an invertible linear map M: {M x : x in C} = {u : <M^{-T} y_i, u> <= alpha_i}.
  [[nodiscard]] HPolyhedron image_under(const RatMatrix& m_inverse_transpose) const {
    std::vector<Halfspace> rows;
    for (const auto& h : rows_) rows.push_back({m_inverse_transpose * h.normal, h.offset});
    HPolyhedron out(n_, std::move(rows));
    out.trivially_empty_ = trivially_empty_;
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Halfspace> rows_;
  bool trivially_empty_ = false;
};

/// Minkowski-Weyl description conv(points) + cone(directions) + span(lineality).
struct PolyhedronGenerators {
  std::vector<RatVector> points;
  std::vector<RatVector> directions;
  std::vector<RatVector> lineality;
};

/// Generator form of C via double description on its homogenization
/// {(x, t) : <y_i, x> - alpha_i t <= 0, t >= 0}. Empty C yields no points.
inline PolyhedronGenerators polyhedron_generators(const HPolyhedron& c) {
  PolyhedronGenerators out;
  if (c.trivially_empty()) return out;
  const std::size_t n = c.dim();
  std::vector<RatVector> rows;
  for (const auto& h : c.rows()) {
    RatVector r = h.normal;
    r.push_back(-h.offset);
    rows.push_back(std::move(r));
  }
  rows.push_back(-unit_vector(n + 1, n));
  ConeGenerators g = double_description(rows, n + 1);
  for (const auto& l : g.lineality) out.lineality.emplace_back(l.begin(), l.end() - 1);
  for (const auto& r : g.rays) {
    const Rational t = r[n];
    RatVector x(r.begin(), r.end() - 1);
    if (t == 0) {
      out.directions.push_back(std::move(x));
    } else {
      Rational inv = 1 / t;
      out.points.push_back(inv * x);
    }
  }
  return out;
}

}  // namespace polyreg
