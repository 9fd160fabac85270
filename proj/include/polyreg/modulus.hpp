#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "polyreg/complementarity.hpp"
#include "polyreg/cone.hpp"
#include "polyreg/parallel.hpp"

namespace polyreg {

/// Φ(x) = Tx + S(Λ(F_min(x))) on a cone K; lambda holds one cone per face of K.
struct ModulusQuery {
  RatMatrix t;
  RatMatrix s;
  ConeFaces k;
  std::vector<PolyCone> lambda;
};

/// T = A, S = I, Λ = N(K,·).
inline ModulusQuery canonical_modulus_query(const RatMatrix& a, const PolyCone& k) {
  ModulusQuery q{a, RatMatrix::identity(k.ambient_dim()), ConeFaces(k), {}};
  for (const auto& f : q.k.lattice.faces) q.lambda.push_back(normal_cone(q.k.poly, f));
  return q;
}

struct ModulusOptions {
  std::size_t samples_per_pair = 20000;
  std::size_t descent_steps = 100;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  /// When false only exact positivity is decided.
  bool numeric = true;
};

struct PairModulus {
  std::size_t f1 = 0, f2 = 0;
  /// The constraint cone for z is {0}, so r(F1,F2) = +inf.
  bool unconstrained = false;
  bool positive = true;
  std::optional<RatVector> witness;
  double lower = std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

struct ModulusResult {
  bool positive = true;
  double lower = std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  std::optional<std::pair<std::size_t, std::size_t>> argmin;
  std::vector<PairModulus> pairs;
};

namespace detail {

inline Eigen::VectorXd to_eigen(const RatVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = to_double(v[i]);
  return out;
}

inline Eigen::MatrixXd to_eigen(const RatMatrix& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(i, j));
  return out;
}

inline Eigen::MatrixXd columns(const std::vector<RatVector>& vs, std::size_t n) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = to_eigen(vs[j]);
  return out;
}

/// Orthonormal basis (columns) of span(vs).
inline Eigen::MatrixXd orthonormal_basis(const std::vector<RatVector>& vs, std::size_t n) {
  auto basis = span_basis(vs, n);
  if (basis.empty()) return Eigen::MatrixXd(static_cast<Eigen::Index>(n), 0);
  Eigen::MatrixXd b = columns(basis, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
  return qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
}

/// Lawson-Hanson: argmin ‖G λ - v‖ over λ >= 0, returned as G λ.
inline Eigen::VectorXd nnls_fit(const Eigen::MatrixXd& g, const Eigen::VectorXd& v) {
  const Eigen::Index m = g.cols();
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(m);
  if (m == 0) return Eigen::VectorXd::Zero(v.size());
  std::vector<bool> passive(static_cast<std::size_t>(m), false);
  const double tol = 1e-12 * (1.0 + v.norm()) * (1.0 + g.norm());
  for (int outer = 0; outer < 3 * m + 10; ++outer) {
    Eigen::VectorXd w = g.transpose() * (v - g * lam);
    Eigen::Index t = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < m; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        t = j;
      }
    if (t < 0) break;
    passive[static_cast<std::size_t>(t)] = true;
    for (int inner = 0; inner < 3 * m + 10; ++inner) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index j = 0; j < m; ++j)
        if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
      Eigen::MatrixXd gp(g.rows(), static_cast<Eigen::Index>(idx.size()));
      for (std::size_t c = 0; c < idx.size(); ++c) gp.col(static_cast<Eigen::Index>(c)) = g.col(idx[c]);
      Eigen::VectorXd sp = gp.colPivHouseholderQr().solve(v);
      Eigen::VectorXd s = Eigen::VectorXd::Zero(m);
      for (std::size_t c = 0; c < idx.size(); ++c) s(idx[c]) = sp(static_cast<Eigen::Index>(c));
      bool all_positive = true;
      for (auto j : idx)
        if (s(j) <= 0) all_positive = false;
      if (all_positive) {
        lam = s;
        break;
      }
      double alpha = 1.0;
      for (auto j : idx)
        if (s(j) <= 0) alpha = std::min(alpha, lam(j) / (lam(j) - s(j)));
      lam += alpha * (s - lam);
      for (auto j : idx)
        if (lam(j) <= 1e-15) {
          lam(j) = 0;
          passive[static_cast<std::size_t>(j)] = false;
        }
    }
  }
  return g * lam;
}

/// Floating-point view of a cone for Euclidean projection: lineality handled
/// by an orthogonal projector, rays (orthogonal to it) by NNLS.
struct NumericCone {
  Eigen::MatrixXd rays;
  Eigen::MatrixXd lin_basis;
  Eigen::MatrixXd rows;

  NumericCone(const PolyCone& k) {
    const std::size_t n = k.ambient_dim();
    rays = columns(k.rays(), n);
    lin_basis = orthonormal_basis(k.lineality(), n);
    rows = columns(k.inequalities(), n).transpose();
    for (Eigen::Index r = 0; r < rows.rows(); ++r) rows.row(r).normalize();
  }

  [[nodiscard]] Eigen::VectorXd project(const Eigen::VectorXd& v) const {
    Eigen::VectorXd on_lin = lin_basis * (lin_basis.transpose() * v);
    return on_lin + nnls_fit(rays, v - on_lin);
  }

  [[nodiscard]] double violation(const Eigen::VectorXd& z) const {
    if (rows.rows() == 0) return 0;
    return std::max(0.0, (rows * z).maxCoeff());
  }
};

/// span(space) ∩ K != {0} up to rounding: false only when the inequality rows of
/// K, restricted to span(space), positively span it.
inline bool meets_cone(const NumericCone& k, const Eigen::MatrixXd& space) {
  const Eigen::Index m = space.cols();
  if (k.rows.rows() == 0) return true;
  Eigen::MatrixXd b = (k.rows * space).transpose();
  for (Eigen::Index j = 0; j < m; ++j)
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
      e(j) = sign;
      if ((nnls_fit(b, e) - e).norm() > 1e-9) return true;
    }
  return false;
}

}  // namespace detail

/// r(F1,F2) for one pair: exact positivity, then a certified-in-structure
/// value by enumerating the regions where Π_Q is linear and, on each, the
/// faces of the region (the minimum of a quadratic form over a polyhedral cone
/// intersected with the sphere is an eigenvalue of its restriction to the span
/// of some face), cross-checked by sampling plus projected descent.
inline PairModulus pair_modulus(const ModulusQuery& q, std::size_t f1, std::size_t f2, const ModulusOptions& opt,
                                std::uint64_t seed) {
  const std::size_t n = q.k.cone.ambient_dim();
  PairModulus pm;
  pm.f1 = f1;
  pm.f2 = f2;
  PolyCone cone_q = cone_minus(q.k.faces[f2], q.k.faces[f1]);
  PolyCone z_cone = polar(linear_image(q.s, cone_difference(q.lambda[f1], q.lambda[f2])));
  if (z_cone.is_zero_cone()) {
    pm.unconstrained = true;
    return pm;
  }
  // r = 0 iff some z != 0 in Z has T^T z ∈ Q°, i.e. <T g, z> <= 0 for all generators g of Q
  std::vector<RatVector> rows = z_cone.inequalities();
  for (const auto& g : cone_q.conic_generators()) rows.push_back(q.t * g);
  PolyCone w = PolyCone::from_inequalities(n, rows);
  if (!w.is_zero_cone()) {
    pm.positive = false;
    pm.witness = w.rays().empty() ? w.lineality().front() : w.rays().front();
    pm.lower = pm.upper = 0;
    return pm;
  }
  if (!opt.numeric) {
    pm.lower = pm.upper = std::numeric_limits<double>::quiet_NaN();
    return pm;
  }

  const Eigen::MatrixXd t = detail::to_eigen(q.t);
  detail::NumericCone nq(cone_q), nz(z_cone);
  auto value = [&](const Eigen::VectorXd& z) { return nq.project(t.transpose() * z).norm(); };
  auto normalize_into_z = [&](const Eigen::VectorXd& z) -> std::optional<Eigen::VectorXd> {
    Eigen::VectorXd p = nz.project(z);
    double len = p.norm();
    if (len < 1e-12) return std::nullopt;
    return Eigen::VectorXd(p / len);
  };

  double lower_sq = std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_z;
  auto offer = [&](const Eigen::VectorXd& z) {
    auto u = normalize_into_z(z);
    if (!u) return;
    double v = value(*u);
    if (v < upper) {
      upper = v;
      best_z = *u;
    }
  };

  RatMatrix tt = q.t.transpose();
  ConeFaces qf(cone_q);
  for (std::size_t gi = 0; gi < qf.lattice.size(); ++gi) {
    PolyCone piece = cone_sum(qf.faces[gi], normal_cone(qf.poly, qf.lattice.faces[gi]));
    PolyCone region = cone_intersect(z_cone, linear_preimage(tt, piece));
    if (region.is_zero_cone()) continue;
    Eigen::MatrixXd pg = detail::orthonormal_basis(qf.lattice.faces[gi].span_basis, n);
    Eigen::MatrixXd tp = t * pg;
    Eigen::MatrixXd quad = tp * tp.transpose();
    detail::NumericCone nr(region);
    ConeFaces rf(region);
    for (std::size_t fi = 0; fi < rf.lattice.size(); ++fi) {
      const auto& span = rf.lattice.faces[fi].span_basis;
      if (span.empty()) continue;
      Eigen::MatrixXd u = detail::orthonormal_basis(span, n);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(u.transpose() * quad * u);
      const auto& ev = es.eigenvalues();
      // eigenvalues come sorted; group near-equal ones and keep a cluster when its eigenspace meets the region
      for (Eigen::Index lo = 0; lo < ev.size();) {
        Eigen::Index hi = lo + 1;
        while (hi < ev.size() && ev(hi) - ev(hi - 1) <= 1e-6 * std::max(1.0, std::abs(ev(hi)))) ++hi;
        Eigen::MatrixXd space = u * es.eigenvectors().middleCols(lo, hi - lo);
        if (detail::meets_cone(nr, space)) {
          lower_sq = std::min(lower_sq, ev(lo));
          for (Eigen::Index c = 0; c < space.cols(); ++c) {
            offer(space.col(c));
            offer(-space.col(c));
          }
        }
        lo = hi;
      }
    }
  }

  // sampling inside Z plus projected descent on the sphere
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::MatrixXd zr = nz.rays, zl = nz.lin_basis;
  for (std::size_t s = 0; s < opt.samples_per_pair; ++s) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < zr.cols(); ++j) z += expo(rng) * zr.col(j).normalized();
    for (Eigen::Index j = 0; j < zl.cols(); ++j) z += gauss(rng) * zl.col(j);
    offer(z);
  }
  if (best_z.size() > 0) {
    Eigen::VectorXd z = best_z;
    double step = 0.1;
    for (std::size_t it = 0; it < opt.descent_steps; ++it) {
      Eigen::VectorXd grad = t * nq.project(t.transpose() * z);
      auto cand = normalize_into_z(z - step * grad);
      if (cand && value(*cand) < value(z)) {
        z = *cand;
        offer(z);
      } else {
        step *= 0.5;
      }
    }
  }

  double lower = std::sqrt(std::max(0.0, lower_sq)) - opt.tolerance;
  pm.upper = upper + opt.tolerance;
  pm.lower = std::max(0.0, std::min(lower, upper));
  return pm;
}

/// sur Φ(0|0) = min over nested face pairs of r(F1,F2), Euclidean norm.
inline ModulusResult surjection_modulus(const ModulusQuery& q, const ModulusOptions& opt = {}) {
  const auto& lat = q.k.lattice;
  if (q.lambda.size() != lat.size()) throw MalformedRelationError("modulus: one cone per face of K is required");
  auto pairs = lat.nested_pairs();
  ModulusResult out;
  out.pairs.resize(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    out.pairs[i] = pair_modulus(q, pairs[i].first, pairs[i].second, opt, opt.seed * 1000003ULL + i);
  });
  for (const auto& p : out.pairs) {
    if (p.unconstrained) continue;
    if (!p.positive) {
      if (out.positive) out.argmin = std::make_pair(p.f1, p.f2);
      out.positive = false;
      out.lower = out.upper = 0;
      continue;
    }
    if (!out.positive || !opt.numeric) continue;
    if (p.upper < out.upper) {
      out.upper = p.upper;
      out.argmin = std::make_pair(p.f1, p.f2);
    }
    out.lower = std::min(out.lower, p.lower);
  }
  if (out.positive && !opt.numeric) out.lower = out.upper = std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace polyreg
