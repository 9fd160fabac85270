#include <gtest/gtest.h>

#include <random>

#include "polyreg/linalg.hpp"

using namespace polyreg;

namespace {

RatMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int bound = 4) {
  std::uniform_int_distribution<int> d(-bound, bound);
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST(RationalParse, AcceptsFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(parse_rational(" 4/-8 "), Rational(-1, 2));
  EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
  EXPECT_EQ(to_string(Rational(-6, 4)), "-3/2");
  EXPECT_EQ(to_string(Rational(5)), "5");
  EXPECT_THROW(parse_rational("1/0"), UsageError);
  EXPECT_THROW(parse_rational("abc"), UsageError);
}

TEST(SolveLinear, IdentityHasUniqueSolution) {
  auto sol = solve_linear(RatMatrix::identity(2), make_vector({1, 2}));
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->particular, make_vector({1, 2}));
  EXPECT_TRUE(sol->kernel.empty());
}

TEST(SolveLinear, SingleHomogeneousEquation) {
  auto sol = solve_linear(RatMatrix{{1, 1}}, make_vector({0}));
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->particular, make_vector({0, 0}));
  ASSERT_EQ(sol->kernel.size(), 1u);
  // the kernel is spanned by (1, -1)
  EXPECT_EQ(sol->kernel[0][0], -sol->kernel[0][1]);
  EXPECT_NE(sol->kernel[0][0], 0);
}

TEST(SolveLinear, InconsistentRows) {
  EXPECT_FALSE(solve_linear(RatMatrix{{1, 0}, {1, 0}}, make_vector({1, 2})));
}

TEST(SolveLinear, DimensionMismatchIsUsageError) {
  EXPECT_THROW(solve_linear(RatMatrix::identity(2), make_vector({1, 2, 3})), UsageError);
}

TEST(Rank, ZeroMatrix) {
  RatMatrix z(3, 3);
  EXPECT_EQ(rank(z), 0u);
  EXPECT_EQ(kernel_basis(z).size(), 3u);
}

TEST(Det, SmallCases) {
  EXPECT_EQ(det(RatMatrix{{2, 0}, {0, 3}}), 6);
  EXPECT_EQ(det(RatMatrix{{0, 1}, {1, 0}}), -1);
  EXPECT_THROW(det(RatMatrix(2, 3)), UsageError);
}

TEST(LinalgProperties, SolutionsSatisfySystemAndRankNullity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    RatMatrix m = random_matrix(rng, r, c, trial % 3 == 0 ? 1 : 4);
    RatVector x0(c);
    for (auto& v : x0) v = static_cast<long>(rng() % 7) - 3;
    RatVector b = m * x0;
    auto sol = solve_linear(m, b);
    ASSERT_TRUE(sol);
    EXPECT_EQ(m * sol->particular, b);
    for (const auto& k : sol->kernel) EXPECT_TRUE(is_zero(m * k));
    EXPECT_EQ(rank(m) + kernel_basis(m).size(), c);
    EXPECT_EQ(column_space_basis(m).size(), rank(m));
  }
}

TEST(LinalgProperties, DeterminantIsMultiplicative) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 4;
    RatMatrix a = random_matrix(rng, n, n), b = random_matrix(rng, n, n);
    EXPECT_EQ(det(a * b), det(a) * det(b));
  }
}

TEST(LinalgProperties, InverseIsTwoSided) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + rng() % 4;
    RatMatrix a = random_matrix(rng, n, n);
    auto inv = inverse(a);
    EXPECT_EQ(inv.has_value(), det(a) != 0);
    if (inv) EXPECT_EQ(a * *inv, RatMatrix::identity(n));
  }
}
