#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polyreg/regularity.hpp"

using namespace polyreg;

namespace {

RatMatrix random_matrix(std::mt19937_64& rng, std::size_t n, int bound) {
  RatMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = static_cast<long>(rng() % (2 * bound + 1)) - bound;
  return a;
}

RatMatrix random_invertible(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    RatMatrix m = random_matrix(rng, n, 3);
    if (det(m) != 0) return m;
  }
}

ModulusOptions quick_modulus() {
  ModulusOptions o;
  o.samples_per_pair = 300;
  o.descent_steps = 40;
  return o;
}

}  // namespace

TEST(CoherentOrientation, ScalarSignDecides) {
  for (long a : {-2, -1, 0, 1, 3}) {
    HPolyhedron c = HPolyhedron::orthant(1);
    auto lat = enumerate_faces(c);
    auto r = check_coherent_orientation(RatMatrix{{a}}, c, lat);
    EXPECT_EQ(r.coherent, a > 0) << a;
    // faces sorted by key: R+ (key {}) then {0} (key {0})
    ASSERT_EQ(r.determinants.size(), 2u);
    EXPECT_EQ(r.determinants[0], a);
    EXPECT_EQ(r.determinants[1], 1);
  }
}

TEST(CoherentOrientation, IdentityAlwaysCoherent) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 1 + t % 4;
    HPolyhedron c = oracle::random_polyhedron(rng, n, n + 2);
    auto lat = enumerate_faces(c);
    auto r = check_coherent_orientation(RatMatrix::identity(n), c, lat);
    EXPECT_TRUE(r.coherent);
    for (const auto& d : r.determinants) EXPECT_EQ(d, 1);
    EXPECT_TRUE(check_face_separation(canonical_normal_relation(c, lat)).holds);
  }
}

TEST(CoherentOrientation, OrthantMatchesPrincipalMinors) {
  std::mt19937_64 rng(2);
  HPolyhedron c[5];
  FaceLattice lat[5];
  for (std::size_t n = 1; n <= 4; ++n) {
    c[n] = HPolyhedron::orthant(n);
    lat[n] = enumerate_faces(c[n]);
  }
  int p_count = 0;
  for (int t = 0; t < 120; ++t) {
    std::size_t n = 1 + t % 4;
    RatMatrix a = random_matrix(rng, n, 3);
    if (t % 3 == 0)
      for (std::size_t i = 0; i < n; ++i) a(i, i) = 10;
    bool p = oracle::is_p_matrix(a);
    p_count += p;
    EXPECT_EQ(check_coherent_orientation(a, c[n], lat[n]).coherent, p);
    EXPECT_EQ(check_coherent_orientation(a, c[n], lat[n], true).coherent, p);
  }
  EXPECT_GT(p_count, 20);
  EXPECT_LT(p_count, 100);
}

TEST(CoherentOrientation, DeterminantIndependentOfBases) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = 2 + t % 3;
    HPolyhedron c = oracle::random_polyhedron(rng, n, n + 2);
    auto lat = enumerate_faces(c);
    RatMatrix a = random_matrix(rng, n, 3);
    for (const auto& f : lat.faces) {
      auto nb = normal_cone(c, f).span_basis();
      auto d = t_face_determinant(a, f.span_basis, nb);
      if (!d) continue;
      for (int rep = 0; rep < 2; ++rep) {
        auto remix = [&](const std::vector<RatVector>& basis) {
          if (basis.empty()) return basis;
          RatMatrix m = random_invertible(rng, basis.size());
          RatMatrix b = RatMatrix::from_columns(basis, n) * m;
          std::vector<RatVector> out;
          RatMatrix bt = b.transpose();
          for (std::size_t j = 0; j < bt.rows(); ++j) out.push_back(bt.row(j));
          return out;
        };
        EXPECT_EQ(t_face_determinant(a, remix(f.span_basis), remix(nb)), d);
      }
    }
  }
}

TEST(CoherentOrientation, CoveringPairsAgreeWithAllPairs) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 1 + t % 3;
    HPolyhedron c = oracle::random_polyhedron(rng, n, n + 1 + t % 3);
    auto lat = enumerate_faces(c);
    RatMatrix a = random_matrix(rng, n, 2);
    EXPECT_EQ(check_coherent_orientation(a, c, lat).coherent, check_coherent_orientation(a, c, lat, true).coherent);
  }
}

TEST(FaceSeparation, ConstructedViolation) {
  HPolyhedron k = HPolyhedron::orthant(1);
  auto lat = enumerate_faces(k);
  std::map<IndexSet, PolyCone> table{{IndexSet{}, PolyCone::zero(1)},
                                     {IndexSet{0}, PolyCone::from_generators(1, {make_vector({1})})}};
  auto r = check_face_separation(relation_from_table(k, lat, table));
  EXPECT_FALSE(r.holds);
  EXPECT_TRUE(r.nonsingular);
  ASSERT_TRUE(r.violating_pair);
  // the canonical relation passes
  EXPECT_TRUE(check_face_separation(canonical_normal_relation(k, lat)).holds);
}

TEST(FaceSeparation, SingularRelationFails) {
  HPolyhedron k = HPolyhedron::orthant(2);
  auto lat = enumerate_faces(k);
  std::map<IndexSet, PolyCone> table;
  for (const auto& f : lat.faces) table[f.active_set] = PolyCone::zero(2);
  auto r = check_face_separation(relation_from_table(k, lat, table));
  EXPECT_FALSE(r.holds);
  EXPECT_FALSE(r.nonsingular);
}

TEST(FaceSeparation, EquivalentToCoherentOrientation) {
  std::mt19937_64 rng(5);
  int coherent = 0;
  for (int t = 0; t < 120; ++t) {
    std::size_t n = 1 + t % 3;
    HPolyhedron c = t % 4 == 0 ? HPolyhedron::from_cone(oracle::random_cone(rng, n)) : oracle::random_polyhedron(rng, n, n + 1 + t % 4);
    auto lat = enumerate_faces(c);
    RatMatrix a = random_matrix(rng, n, 2);
    if (t % 2 == 0)
      for (std::size_t i = 0; i < n; ++i) a(i, i) = 5;
    bool co = check_coherent_orientation(a, c, lat).coherent;
    coherent += co;
    EXPECT_EQ(check_face_separation(a, c, lat).holds, co) << t;
  }
  EXPECT_GT(coherent, 30);
  EXPECT_LT(coherent, 110);
}

TEST(CriticalFace, IdentityAndScalarFailure) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    std::size_t n = 1 + t % 3;
    EXPECT_TRUE(check_critical_face(RatMatrix::identity(n), ConeFaces(oracle::random_cone(rng, n))).holds);
  }
  ConeFaces k(PolyCone::from_generators(1, {make_vector({1})}));
  auto r = check_critical_face(RatMatrix{{-1}}, k);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(*r.witness, make_vector({1}));
}

TEST(CriticalFace, MatchesCoherentOrientationOnCones) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 80; ++t) {
    std::size_t n = 1 + t % 3;
    PolyCone k = oracle::random_cone(rng, n);
    ConeFaces kf(k);
    RatMatrix a = random_matrix(rng, n, 2);
    if (t % 2 == 0)
      for (std::size_t i = 0; i < n; ++i) a(i, i) = 4;
    bool co = check_coherent_orientation(a, kf.poly, kf.lattice).coherent;
    EXPECT_EQ(check_critical_face(a, kf).holds, co) << t;
  }
}

TEST(PolarDifference, Examples) {
  ConeFaces k(PolyCone::from_inequalities(2, {make_vector({-1, 0}), make_vector({0, -1})}));
  auto zero = *k.lattice.find({0, 1});
  auto top = *k.lattice.find({});
  auto neg = PolyCone::from_generators(2, {make_vector({-1, 0}), make_vector({0, -1})});
  EXPECT_TRUE(polar_difference(k, zero, top).same_set(neg));
  // F1 = F2 = K gives L(K)^⊥ = {0}
  EXPECT_TRUE(polar_difference(k, top, top).is_zero_cone());
  EXPECT_THROW(polar_difference(k, top, zero), UsageError);
}

TEST(PolarDifference, IdentityWithNormalCones) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    ConeFaces k(oracle::random_cone(rng, 1 + t % 4));
    for (auto [f1, f2] : k.lattice.nested_pairs()) {
      PolyCone n1 = normal_cone(k.poly, k.lattice.faces[f1]);
      PolyCone n2 = normal_cone(k.poly, k.lattice.faces[f2]);
      EXPECT_TRUE(oracle::lp_cone_equal(polar_difference(k, f1, f2), cone_difference(n1, n2)));
    }
  }
}

TEST(ConeSeparation, Examples) {
  auto pos = PolyCone::from_generators(2, {make_vector({1, 0}), make_vector({0, 1})});
  EXPECT_TRUE(check_cone_separation(pos, negate(pos)));
  auto upper = PolyCone::from_inequalities(2, {make_vector({0, -1})});
  EXPECT_FALSE(check_cone_separation(upper, upper));
  EXPECT_TRUE(check_cone_separation(normal_cone_pair(pos)));
}

TEST(Modulus, IdentityIsOne) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 8; ++t) {
    std::size_t n = 1 + t % 3;
    auto q = canonical_modulus_query(RatMatrix::identity(n), oracle::random_cone(rng, n));
    auto m = surjection_modulus(q, quick_modulus());
    EXPECT_TRUE(m.positive);
    EXPECT_LE(m.lower, 1.0);
    EXPECT_GE(m.upper, 1.0);
    EXPECT_LE(m.upper - m.lower, 1e-6);
  }
}

TEST(Modulus, ScalingByC) {
  auto half_line = PolyCone::from_generators(1, {make_vector({1})});
  for (Rational c : {Rational(2), Rational(1, 3), Rational(5, 2)}) {
    RatMatrix t(1, 1);
    t(0, 0) = c;
    auto q = canonical_modulus_query(t, half_line);
    auto m = surjection_modulus(q, quick_modulus());
    EXPECT_TRUE(m.positive);
    EXPECT_LE(m.lower, to_double(c) + 1e-9);
    EXPECT_GE(m.upper, to_double(c) - 1e-9);
    EXPECT_LE(m.upper - m.lower, 1e-6);
  }
  auto q = canonical_modulus_query(RatMatrix{{-1}}, half_line);
  auto m = surjection_modulus(q, quick_modulus());
  EXPECT_FALSE(m.positive);
  EXPECT_EQ(m.upper, 0);
}

TEST(Modulus, PositivityMatchesCriticalFace) {
  std::mt19937_64 rng(10);
  ModulusOptions exact;
  exact.numeric = false;
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 1 + t % 3;
    PolyCone k = oracle::random_cone(rng, n);
    RatMatrix a = random_matrix(rng, n, 2);
    if (t % 2 == 0)
      for (std::size_t i = 0; i < n; ++i) a(i, i) = 4;
    auto q = canonical_modulus_query(a, k);
    EXPECT_EQ(surjection_modulus(q, exact).positive, check_critical_face(a, q.k).holds) << t;
  }
}

TEST(Modulus, MoreauDistanceOnConeIsNorm) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 1 + t % 3;
    PolyCone q = oracle::random_cone(rng, n);
    Projector onto_polar(HPolyhedron::from_cone(polar(q)));
    for (const auto& g : q.conic_generators()) EXPECT_TRUE(is_zero(onto_polar(g)));
    RatVector z = q.relative_interior_point();
    EXPECT_TRUE(is_zero(onto_polar(z)));
  }
}

TEST(Modulus, BoundsBracketSampledLipschitz) {
  std::mt19937_64 rng(12);
  int checked = 0;
  for (int t = 0; t < 30 && checked < 10; ++t) {
    std::size_t n = 1 + t % 3;
    PolyCone k = oracle::random_cone(rng, n);
    RatMatrix a = random_matrix(rng, n, 2);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = 4;
    AVIInstance inst(a, HPolyhedron::from_cone(k));
    if (!check_coherent_orientation(a, inst.c, inst.lattice).coherent) continue;
    auto m = surjection_modulus(canonical_modulus_query(a, k), quick_modulus());
    ASSERT_TRUE(m.positive);
    EXPECT_GT(m.lower, 0);
    EXPECT_LE(m.lower, m.upper);
    auto samples = stress_samples(inst, 40, t);
    std::vector<std::pair<RatVector, RatVector>> pairs;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) pairs.emplace_back(samples[i], samples[i + 1]);
    double lip = std::sqrt(to_double(lipschitz_estimate(inst, pairs)));
    EXPECT_LE(lip, 1.10 / m.lower);
    ++checked;
  }
  EXPECT_GE(checked, 5);
}

TEST(Audit, IdentityIsGreen) {
  std::mt19937_64 rng(13);
  AuditOptions opt;
  opt.samples = 30;
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 1 + t % 3;
    AVIInstance inst(RatMatrix::identity(n), oracle::random_polyhedron(rng, n, n + 1 + t % 3));
    auto r = equivalence_audit(inst, opt);
    EXPECT_TRUE(r.consistent());
    EXPECT_TRUE(r.coherent.coherent);
    EXPECT_TRUE(r.separation.holds);
    EXPECT_TRUE(r.critical_k.holds);
    EXPECT_TRUE(r.modulus_k.positive);
    EXPECT_TRUE(r.stress.single_valued);
  }
}

TEST(Audit, NegativeScalarIsRedEverywhere) {
  AVIInstance inst(RatMatrix{{-1}}, HPolyhedron::orthant(1));
  auto r = equivalence_audit(inst);
  EXPECT_TRUE(r.consistent());
  EXPECT_FALSE(r.coherent.coherent);
  EXPECT_FALSE(r.separation.holds);
  EXPECT_FALSE(r.critical_k.holds);
  EXPECT_FALSE(r.modulus_k.positive);
  EXPECT_FALSE(r.stress.single_valued);
  EXPECT_FALSE(r.unwitnessed_irregularity);
}
