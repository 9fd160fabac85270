#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "polyreg/errors.hpp"
#include "polyreg/polyhedron.hpp"
#include "polyreg/rational.hpp"

namespace polyreg {

enum class Family {
  Orthant,
  Box,
  RandomCone,
  RandomPolyhedron,
  PMatrix,
  IdentityPerturbation,
  NegatedDiagonal,
  Singular,
  LowerDimensional,
};

inline const std::vector<std::pair<Family, std::string>>& family_names() {
  static const std::vector<std::pair<Family, std::string>> names{
      {Family::Orthant, "orthant"},
      {Family::Box, "box"},
      {Family::RandomCone, "random_cone"},
      {Family::RandomPolyhedron, "random_polyhedron"},
      {Family::PMatrix, "p_matrix"},
      {Family::IdentityPerturbation, "identity_perturbation"},
      {Family::NegatedDiagonal, "negated_diagonal"},
      {Family::Singular, "singular"},
      {Family::LowerDimensional, "lower_dimensional"},
  };
  return names;
}

inline Family parse_family(const std::string& s) {
  for (const auto& [f, name] : family_names())
    if (name == s) return f;
  throw UsageError("unknown family: " + s);
}

inline const std::string& family_name(Family f) {
  for (const auto& [g, name] : family_names())
    if (g == f) return name;
  throw UsageError("unknown family");
}

struct GeneratorConfig {
  std::uint64_t seed = 0;
  std::size_t n = 2;
  std::size_t k = 4;
  long entry_bound = 3;
  Family family = Family::RandomPolyhedron;
};

struct GeneratedInstance {
  RatMatrix a;
  HPolyhedron c;
};

namespace detail {

/// Draws through raw mt19937_64 output only, so instances are identical on every platform.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  long uniform(long lo, long hi) { return lo + static_cast<long>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  RatVector vector(std::size_t n, long bound) {
    RatVector v(n);
    for (auto& x : v) x = uniform(-bound, bound);
    return v;
  }
  RatVector nonzero_vector(std::size_t n, long bound) {
    for (;;) {
      RatVector v = vector(n, bound);
      if (!is_zero(v)) return v;
    }
  }
  RatMatrix matrix(std::size_t n, long bound) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(-bound, bound);
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

inline HPolyhedron polyhedron_around(Draw& d, std::size_t n, std::size_t k, long bound, bool force_equality) {
  RatVector x0 = d.vector(n, 2);
  std::vector<Halfspace> rows;
  bool equality_done = false;
  while (rows.size() < k) {
    RatVector y = d.nonzero_vector(n, bound);
    bool eq = rows.size() + 1 < k && ((force_equality && !equality_done) || d.uniform(0, 7) == 0);
    if (eq) {
      rows.push_back({y, dot(y, x0)});
      rows.push_back({-y, -dot(y, x0)});
      equality_done = true;
      continue;
    }
    rows.push_back({y, dot(y, x0) + Rational(d.uniform(0, 2))});
  }
  return HPolyhedron(n, std::move(rows));
}

inline HPolyhedron cone_around(Draw& d, std::size_t n, std::size_t k, long bound) {
  RatVector dir = d.nonzero_vector(n, 2);
  std::vector<Halfspace> rows;
  while (rows.size() < k) {
    RatVector y = d.nonzero_vector(n, bound);
    if (dot(y, dir) > 0) y = -y;
    rows.push_back({y, 0});
  }
  return HPolyhedron(n, std::move(rows));
}

}  // namespace detail

/// Seeded instance; the same config always yields the same instance.
inline GeneratedInstance generate_instance(const GeneratorConfig& cfg) {
  if (cfg.n == 0) throw UsageError("generate: n must be positive");
  if (cfg.entry_bound <= 0) throw UsageError("generate: entry bound must be positive");
  detail::Draw d(cfg.seed);
  const std::size_t n = cfg.n;
  const long b = cfg.entry_bound;
  switch (cfg.family) {
    case Family::Orthant:
      return {d.matrix(n, b), HPolyhedron::orthant(n)};
    case Family::Box:
      return {d.matrix(n, b), HPolyhedron::box(n, 0, 1)};
    case Family::RandomCone:
      return {d.matrix(n, b), detail::cone_around(d, n, cfg.k, b)};
    case Family::RandomPolyhedron:
      return {d.matrix(n, b), detail::polyhedron_around(d, n, cfg.k, b, false)};
    case Family::LowerDimensional:
      return {d.matrix(n, b), detail::polyhedron_around(d, n, std::max<std::size_t>(cfg.k, 3), b, true)};
    case Family::PMatrix: {
      // strictly diagonally dominant with positive diagonal
      RatMatrix a = d.matrix(n, b);
      for (std::size_t i = 0; i < n; ++i) {
        Rational off = 0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) off += abs(a(i, j));
        a(i, i) = off + d.uniform(1, b);
      }
      return {a, HPolyhedron::orthant(n)};
    }
    case Family::IdentityPerturbation: {
      // I + E with |E_ij| <= 1/(2n), so x·Ax >= |x|²/2
      RatMatrix a = RatMatrix::identity(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) += Rational(d.uniform(-b, b), 2 * static_cast<long>(n) * b);
      return {a, detail::polyhedron_around(d, n, cfg.k, b, false)};
    }
    case Family::NegatedDiagonal: {
      RatMatrix a(n, n);
      for (std::size_t i = 0; i < n; ++i) a(i, i) = -d.uniform(1, b);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) a(i, j) = Rational(d.uniform(-1, 1), 4 * static_cast<long>(n));
      return {a, d.uniform(0, 1) == 0 ? HPolyhedron::orthant(n) : detail::polyhedron_around(d, n, cfg.k, b, false)};
    }
    case Family::Singular: {
      RatMatrix a = d.matrix(n, b);
      std::size_t r = static_cast<std::size_t>(d.uniform(0, static_cast<long>(n) - 1));
      for (std::size_t j = 0; j < n; ++j) a(r, j) = 0;
      return {a, detail::polyhedron_around(d, n, cfg.k, b, false)};
    }
  }
  throw UsageError("generate: unknown family");
}

/// Instance i of a sweep: families cycle, n in 1..max_n, k in n..max_k.
inline GeneratorConfig sweep_config(std::uint64_t seed, std::size_t i, std::size_t max_n = 4, std::size_t max_k = 8) {
  const auto& fams = family_names();
  GeneratorConfig cfg;
  cfg.family = fams[i % fams.size()].first;
  cfg.seed = seed * 0x9E3779B97F4A7C15ULL + i;
  cfg.n = 1 + (i / fams.size()) % max_n;
  std::size_t span = max_k > cfg.n ? max_k - cfg.n + 1 : 1;
  cfg.k = cfg.n + (i / (fams.size() * max_n)) % span;
  cfg.entry_bound = 3;
  return cfg;
}

}  // namespace polyreg
