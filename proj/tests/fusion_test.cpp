#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "verlinde/fusion.hpp"
#include "verlinde/verlinde.hpp"

using namespace verlinde;

namespace {

// N_ab^c from the modular S matrix.
int verlinde_formula_N(int k, int a, int b, int c) {
  auto S = [k](int x, int y) {
    return std::sqrt(2.0 / (k + 2)) * std::sin((x + 1) * (y + 1) * std::numbers::pi / (k + 2));
  };
  double s = 0;
  for (int n = 0; n <= k; ++n) s += S(a, n) * S(b, n) * S(c, n) / S(0, n);
  return static_cast<int>(std::lround(s));
}

long long v2_closed(int k) { return static_cast<long long>(k + 2) * ((k + 2) * (k + 2) - 1) / 6; }

}  // namespace

TEST(ClebschGordan, Examples) {
  EXPECT_EQ(clebsch_gordan(1, 1), (std::vector<int>{2, 0}));
  EXPECT_EQ(clebsch_gordan(2, 1), (std::vector<int>{3, 1}));
  for (int n = 0; n < 6; ++n) EXPECT_EQ(clebsch_gordan(0, n), (std::vector<int>{n}));
  EXPECT_THROW(clebsch_gordan(-1, 2), DomainError);
}

TEST(Fuse, Examples) {
  EXPECT_EQ(fuse(1, 1, 1), (std::vector<int>{0}));
  EXPECT_EQ(fuse(2, 1, 1), (std::vector<int>{2, 0}));
  EXPECT_EQ(fuse(2, 2, 2), (std::vector<int>{0}));
  EXPECT_THROW(fuse(2, 3, 0), DomainError);
}

TEST(Fuse, AgreesWithModularOracle) {
  for (int k = 1; k <= 10; ++k) {
    FusionRing R(k);
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= k; ++b)
        for (int c = 0; c <= k; ++c) EXPECT_EQ(R.N(a, b, c), verlinde_formula_N(k, a, b, c));
  }
}

TEST(Fuse, FullySymmetricStructureConstants) {
  for (int k = 1; k <= 8; ++k) {
    FusionRing R(k);
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= k; ++b)
        for (int c = 0; c <= k; ++c) {
          EXPECT_EQ(R.N(a, b, c), R.N(b, a, c));
          EXPECT_EQ(R.N(a, b, c), R.N(a, c, b));
          EXPECT_EQ(R.N(a, b, c), R.N(c, b, a));
        }
  }
}

TEST(Rank, Examples) {
  FusionRing R1(1);
  EXPECT_EQ(R1.rk(0), 1);
  EXPECT_EQ(R1.rk(2), 4);
  for (int k = 1; k <= 6; ++k) {
    FusionRing R(k);
    for (int n = 0; n <= k; ++n) EXPECT_EQ(R.rk(0, {n, n}), 1);
    for (int n = 1; n <= k; ++n) EXPECT_EQ(R.rk(0, {n}), 0);
    EXPECT_EQ(R.rk(1), k + 1);
  }
}

TEST(Rank, LiteralRecursionMatchesPowers) {
  std::mt19937 rng(5);
  for (int k = 1; k <= 6; ++k) {
    FusionRing R(k);
    for (int g = 0; g <= 3; ++g) {
      EXPECT_EQ(R.rk(g), R.rk_recursive(g));
      for (int t = 0; t < 3; ++t) {
        LabelVector N;
        int m = rng() % 3;
        for (int i = 0; i < m; ++i) N.push_back(rng() % (k + 1));
        EXPECT_EQ(R.rk(g, N), R.rk_recursive(g, N));
      }
    }
  }
}

TEST(Rank, SplittingRuleOnRandomSplits) {
  std::mt19937 rng(9);
  for (int k = 1; k <= 6; ++k) {
    FusionRing R(k);
    for (int trial = 0; trial < 20; ++trial) {
      int g1 = rng() % 3, g2 = rng() % 3;
      LabelVector N1, N2;
      for (int i = rng() % 3; i > 0; --i) N1.push_back(rng() % (k + 1));
      for (int i = rng() % 3; i > 0; --i) N2.push_back(rng() % (k + 1));
      LabelVector all = N1;
      all.insert(all.end(), N2.begin(), N2.end());
      BigInt split = 0;
      for (int n = 0; n <= k; ++n) {
        LabelVector a = N1, b = N2;
        a.push_back(n);
        b.push_back(n);
        split += R.rk(g1, a) * R.rk(g2, b);
      }
      EXPECT_EQ(R.rk(g1 + g2, all), split);
    }
  }
}

TEST(Characters, Values) {
  for (int k = 1; k <= 8; ++k)
    for (int n = 1; n <= k + 1; ++n) {
      EXPECT_NEAR(character(k, n, 0), 1.0, 1e-14);
      EXPECT_NEAR(chi_c(k, n), chi_c_direct(k, n), 1e-12 * chi_c(k, n));
    }
  EXPECT_NEAR(character(1, 1, 1), 1.0, 1e-14);
  EXPECT_THROW(character(2, 0, 0), DomainError);
  EXPECT_THROW(character(2, 4, 0), DomainError);
}

TEST(Characters, VanishOnLabelKPlusOne) {
  // sin((k+2) n pi / (k+2)) = 0 for every character index
  for (int k = 1; k <= 8; ++k)
    for (int n = 1; n <= k + 1; ++n)
      EXPECT_NEAR(std::sin((k + 2) * n * std::numbers::pi / (k + 2)), 0.0, 1e-12);
}

TEST(Verlinde, SpotValues) {
  EXPECT_EQ(verlinde::verlinde(2, 1, VerlindeRoute::Characters), 4);
  EXPECT_EQ(verlinde::verlinde(2, 2, VerlindeRoute::Characters), 10);
  EXPECT_EQ(verlinde::verlinde(2, 3, VerlindeRoute::Characters), 20);
  EXPECT_EQ(verlinde::verlinde(3, 1, VerlindeRoute::Characters), 8);
  EXPECT_EQ(verlinde::verlinde(3, 2, VerlindeRoute::Characters), 36);
  EXPECT_EQ(verlinde::verlinde(1, 5, VerlindeRoute::Characters), 6);
}

TEST(Verlinde, GenusTwoClosedForm) {
  for (int k = 1; k <= 40; ++k) {
    EXPECT_EQ(verlinde::verlinde(2, k, VerlindeRoute::Closed), v2_closed(k));
    EXPECT_EQ(verlinde::verlinde(2, k, VerlindeRoute::Recursion), v2_closed(k));
  }
}

TEST(Verlinde, AllRoutesAgree) {
  for (int g = 2; g <= 3; ++g)
    for (int k = 1; k <= 8; ++k) {
      BigInt r = verlinde::verlinde(g, k, VerlindeRoute::Recursion);
      EXPECT_EQ(verlinde::verlinde(g, k, VerlindeRoute::Characters), r);
      EXPECT_EQ(verlinde::verlinde(g, k, VerlindeRoute::Closed), r);
      EXPECT_EQ(verlinde::verlinde(g, k, VerlindeRoute::Weights), r);
    }
}

TEST(Verlinde, RecursionMatchesWeightEnumerationOnEveryGraph) {
  for (int g = 2; g <= 3; ++g)
    for (int k = 1; k <= 6; ++k) {
      BigInt r = FusionRing(k).rk_recursive(g);
      for (const auto& gr : enumerate_trivalent(g)) EXPECT_EQ(BigInt(count_weights(gr, k)), r);
    }
}

TEST(Verlinde, RejectsBadInput) {
  EXPECT_THROW(verlinde::verlinde(0, 2, VerlindeRoute::Closed), DomainError);
  EXPECT_THROW(verlinde::verlinde(2, 0, VerlindeRoute::Closed), DomainError);
  EXPECT_THROW(parse_route("bogus"), UsageError);
}

TEST(IdealCheck, ReductionAssociativityDiagonalization) {
  for (int k = 1; k <= 12; ++k) {
    auto rep = ideal_check(k);
    EXPECT_EQ(rep.mismatches, 0) << "k=" << k;
    EXPECT_TRUE(rep.commutative);
    if (k <= 8) EXPECT_TRUE(rep.associative);
    EXPECT_LT(rep.character_residual, 1e-10);
  }
  EXPECT_THROW(ideal_check(13), DomainError);
}

TEST(IdealCheck, UnitUntouched) {
  for (int k = 1; k <= 6; ++k) {
    FusionRing R(k);
    for (int a = 0; a <= k; ++a) EXPECT_EQ(fuse(k, 0, a), (std::vector<int>{a}));
  }
}
