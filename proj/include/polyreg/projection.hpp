#pragma once

#include <utility>
#include <vector>

#include "polyreg/faces.hpp"
#include "polyreg/linalg.hpp"

namespace polyreg {

/// Exact Euclidean projection onto C. One KKT system per face: the closest
/// point of aff F, accepted when it lies in F and the residual lies in N(C,F).
class Projector {
 public:
  explicit Projector(HPolyhedron c) : c_(std::move(c)), lat_(enumerate_faces(c_)) { build(); }
  Projector(HPolyhedron c, FaceLattice lat) : c_(std::move(c)), lat_(std::move(lat)) { build(); }

  [[nodiscard]] const HPolyhedron& set() const { return c_; }
  [[nodiscard]] const FaceLattice& lattice() const { return lat_; }

  [[nodiscard]] RatVector operator()(const RatVector& z) const {
    if (z.size() != c_.dim()) throw UsageError("project: dimension mismatch");
    if (c_.contains(z)) return z;
    for (const auto& p : pieces_) {
      RatVector x = p.base;
      if (!p.basis.empty()) {
        RatVector rhs(p.basis.size());
        RatVector d = z - p.base;
        for (std::size_t i = 0; i < p.basis.size(); ++i) rhs[i] = dot(p.basis[i], d);
        RatVector nu = p.gram_inverse * rhs;
        for (std::size_t i = 0; i < p.basis.size(); ++i) x = x + nu[i] * p.basis[i];
      }
      if (c_.contains(x) && p.normal.contains(z - x)) return x;
    }
    throw std::logic_error("project: no face produced the projection");
  }

 private:
  struct Piece {
    RatVector base;
    std::vector<RatVector> basis;
    RatMatrix gram_inverse;
    PolyCone normal;
  };

  void build() {
    for (const auto& f : lat_.faces) {
      Piece p{f.ri_point, f.span_basis, {}, normal_cone(c_, f)};
      const std::size_t d = p.basis.size();
      RatMatrix gram(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) gram(i, j) = dot(p.basis[i], p.basis[j]);
      p.gram_inverse = *inverse(gram);
      pieces_.push_back(std::move(p));
    }
  }

  HPolyhedron c_;
  FaceLattice lat_;
  std::vector<Piece> pieces_;
};

/// Π_C(z).
inline RatVector project(const HPolyhedron& c, const RatVector& z) { return Projector(c)(z); }

}  // namespace polyreg
