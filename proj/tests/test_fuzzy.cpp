#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "fuzzy_ettp/fuzzy.hpp"
#include "fuzzy_ettp/random.hpp"

using namespace fuzzy_ettp;

namespace {

Tfn random_tfn(Rng& rng, double scale = 100.0) {
  double a = (rng.unit() - 0.5) * scale, b = (rng.unit() - 0.5) * scale, c = (rng.unit() - 0.5) * scale;
  double v[] = {a, b, c};
  std::sort(v, v + 3);
  return {v[0], v[1], v[2]};
}

// Numeric centroid of the membership function, trapezoid rule on a fine grid.
double integrated_centroid(const Tfn& f) {
  const int steps = 200000;
  const double h = (f.upper - f.lower) / steps;
  double num = 0, den = 0;
  for (int i = 0; i <= steps; ++i) {
    const double x = f.lower + i * h;
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    num += w * x * membership(f, x);
    den += w * membership(f, x);
  }
  return num / den;
}

}  // namespace

TEST(Membership, TriangleBreakpointsAndInterpolation) {
  const Tfn f{0, 2, 4};
  EXPECT_DOUBLE_EQ(membership(f, 2), 1.0);
  EXPECT_DOUBLE_EQ(membership(f, 1), 0.5);
  EXPECT_DOUBLE_EQ(membership(f, 3), 0.5);
  EXPECT_DOUBLE_EQ(membership(f, 0), 0.0);
  EXPECT_DOUBLE_EQ(membership(f, 4), 0.0);
  EXPECT_DOUBLE_EQ(membership(f, -7), 0.0);
}

TEST(Membership, DegenerateTriangleIsIndicator) {
  const auto f = Tfn::crisp(5);
  EXPECT_DOUBLE_EQ(membership(f, 5), 1.0);
  EXPECT_DOUBLE_EQ(membership(f, 5.0001), 0.0);
  EXPECT_DOUBLE_EQ(membership(f, 4.9999), 0.0);
}

TEST(Membership, TrapezoidCoreAndShoulders) {
  EXPECT_DOUBLE_EQ(membership(TrapezoidalInterval{10, 12, 0}, 13), 0.0);
  EXPECT_DOUBLE_EQ(membership(TrapezoidalInterval{10, 12, 0}, 11), 1.0);
  const TrapezoidalInterval g{10, 12, 2};
  EXPECT_DOUBLE_EQ(membership(g, 9), 0.5);
  EXPECT_DOUBLE_EQ(membership(g, 13), 0.5);
  EXPECT_DOUBLE_EQ(membership(g, 14), 0.0);
  EXPECT_DOUBLE_EQ(membership(g, 8), 0.0);
}

TEST(Membership, AlwaysWithinUnitInterval) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto f = random_tfn(rng);
    const double x = (rng.unit() - 0.5) * 150;
    const double mu = membership(f, x);
    EXPECT_GE(mu, 0.0);
    EXPECT_LE(mu, 1.0);
  }
}

TEST(Construction, InvariantsEnforced) {
  EXPECT_NO_THROW(make_tfn(1, 2, 3));
  EXPECT_THROW(make_tfn(3, 2, 1), FuzzyInvariantError);
  EXPECT_THROW(make_interval(5, 4), FuzzyInvariantError);
  EXPECT_THROW(make_interval(1, 4, -1), FuzzyInvariantError);
  EXPECT_TRUE(Tfn::crisp(7).is_crisp());
}

TEST(Arithmetic, AdditionExamples) {
  EXPECT_EQ(tfn_add({1, 2, 3}, {0, 0, 0}), (Tfn{1, 2, 3}));
  EXPECT_EQ(tfn_add({1, 2, 3}, {1, 1, 1}), (Tfn{2, 3, 4}));
  EXPECT_EQ(tfn_add({0, 1, 2}, {0, 1, 2}), (Tfn{0, 2, 4}));
}

TEST(Arithmetic, ScalingExamples) {
  EXPECT_EQ(tfn_scale(1, {1, 2, 3}), (Tfn{1, 2, 3}));
  EXPECT_EQ(tfn_scale(0, {1, 2, 3}), (Tfn{0, 0, 0}));
  EXPECT_EQ(tfn_scale(-1, {1, 2, 3}), (Tfn{-3, -2, -1}));
  EXPECT_TRUE(tfn_scale(-2.5, {1, 2, 3}).valid());
}

TEST(Arithmetic, AdditionCommutativeAssociativeWithIdentity) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_tfn(rng), b = random_tfn(rng), c = random_tfn(rng);
    EXPECT_EQ(a + b, b + a);
    const auto l = (a + b) + c, r = a + (b + c);
    EXPECT_NEAR(l.lower, r.lower, 1e-9);
    EXPECT_NEAR(l.modal, r.modal, 1e-9);
    EXPECT_NEAR(l.upper, r.upper, 1e-9);
    EXPECT_EQ(a + Tfn::crisp(0), a);
  }
}

TEST(Ranking, Examples) {
  EXPECT_DOUBLE_EQ(rank(Tfn{2, 2, 2}), 2.0);
  EXPECT_DOUBLE_EQ(rank(Tfn{0, 3, 6}), 3.0);
  EXPECT_DOUBLE_EQ(rank(Tfn{45, 50, 55}), 50.0);
  EXPECT_DOUBLE_EQ(rank(Tfn{1, 2, 6}), 3.0);
  EXPECT_DOUBLE_EQ(rank(Tfn{1, 2, 6}, {RankingMethod::ModalValue}), 2.0);
  EXPECT_DOUBLE_EQ(rank(TrapezoidalInterval{4, 12, 0}, {RankingMethod::ModalValue}), 8.0);
  EXPECT_DOUBLE_EQ(rank(TrapezoidalInterval{4, 12, 3}), 8.0);
}

TEST(Ranking, CentroidMatchesNumericIntegration) {
  Rng rng(17);
  for (const Tfn f : {Tfn{0, 3, 6}, Tfn{1, 2, 6}, Tfn{-4, 0, 1}, Tfn{10, 30, 31}}) {
    EXPECT_NEAR(rank(f), integrated_centroid(f), 1e-6) << to_string(f);
  }
  for (int i = 0; i < 20; ++i) {
    auto f = random_tfn(rng);
    if (f.upper - f.lower < 1e-3) continue;
    EXPECT_NEAR(rank(f), integrated_centroid(f), 1e-5 * (1 + std::abs(rank(f))));
  }
}

TEST(Ranking, CrispRanksToItselfUnderEveryMethod) {
  for (double c : {-3.5, 0.0, 1.0, 1e6})
    for (auto m : {RankingMethod::Centroid, RankingMethod::ModalValue}) EXPECT_DOUBLE_EQ(rank(Tfn::crisp(c), {m}), c);
}

TEST(Ranking, Monotone) {
  Rng rng(23);
  for (int i = 0; i < 2000; ++i) {
    const auto b = random_tfn(rng);
    const Tfn a{b.lower + rng.unit(), b.modal + 1 + rng.unit(), b.upper + 2 + rng.unit()};
    for (auto m : {RankingMethod::Centroid, RankingMethod::ModalValue}) EXPECT_GE(rank(a, {m}), rank(b, {m}));
  }
}

TEST(Ranking, ParseMethod) {
  EXPECT_EQ(parse_ranking_method("centroid"), RankingMethod::Centroid);
  EXPECT_EQ(parse_ranking_method("modal"), RankingMethod::ModalValue);
  EXPECT_THROW(parse_ranking_method("median"), std::invalid_argument);
}

TEST(Compare, Examples) {
  EXPECT_EQ(compare(Tfn{1, 2, 3}, Tfn{1, 2, 3}), std::strong_ordering::equal);
  EXPECT_EQ(compare(Tfn{0, 1, 2}, Tfn{2, 3, 4}), std::strong_ordering::less);
  // Equal centroids; lower endpoint decides.
  EXPECT_DOUBLE_EQ(rank(Tfn{0, 3, 6}), rank(Tfn{1, 3, 5}));
  EXPECT_EQ(compare(Tfn{0, 3, 6}, Tfn{1, 3, 5}), std::strong_ordering::less);
  EXPECT_EQ(compare(Tfn{1, 3, 5}, Tfn{0, 3, 6}), std::strong_ordering::greater);
}

TEST(Compare, TieBreakByModal) {
  const RankingFunction r{RankingMethod::Centroid, TieBreak::ByModal};
  // centroid 3 for both; modal 2 < 4
  EXPECT_EQ(compare(Tfn{1, 2, 6}, Tfn{0, 4, 5}, r), std::strong_ordering::less);
  EXPECT_EQ(compare(Tfn{1, 2, 6}, Tfn{0, 4, 5}), std::strong_ordering::greater);
}

TEST(Compare, TotalOrderOnRandomSets) {
  Rng rng(31);
  std::vector<Tfn> v;
  for (int i = 0; i < 60; ++i) {
    // Integer endpoints make rank ties common.
    int a = rng.uniform_int(0, 6), b = rng.uniform_int(0, 6), c = rng.uniform_int(0, 6);
    int s[] = {a, b, c};
    std::sort(s, s + 3);
    v.push_back({double(s[0]), double(s[1]), double(s[2])});
  }
  for (const auto& r : {RankingFunction{}, RankingFunction{RankingMethod::ModalValue, TieBreak::ByModal}}) {
    for (const auto& a : v)
      for (const auto& b : v) {
        const auto ab = compare(a, b, r), ba = compare(b, a, r);
        EXPECT_EQ(ab == 0, ba == 0);
        EXPECT_EQ(ab < 0, ba > 0);
        EXPECT_EQ(ab == 0, a == b);  // antisymmetric: only identical numbers tie
        for (const auto& c : v)
          if (ab < 0 && compare(b, c, r) < 0) {
            EXPECT_TRUE(compare(a, c, r) < 0);
          }
      }
  }
}

TEST(Compare, TrapezoidTotalOrder) {
  EXPECT_EQ(compare(TrapezoidalInterval{0, 4, 0}, TrapezoidalInterval{1, 3, 0}), std::strong_ordering::less);
  EXPECT_EQ(compare(TrapezoidalInterval{1, 3, 1}, TrapezoidalInterval{1, 3, 1}), std::strong_ordering::equal);
  EXPECT_EQ(compare(TrapezoidalInterval{1, 3, 0}, TrapezoidalInterval{1, 3, 1}), std::strong_ordering::less);
}

TEST(Properties, RankLinearityOnTenThousandNumbers) {
  Rng rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const auto a = random_tfn(rng), b = random_tfn(rng);
    const double c = (rng.unit() - 0.5) * 20;
    EXPECT_NEAR(rank(a + b), rank(a) + rank(b), 1e-12 * (1 + std::abs(rank(a)) + std::abs(rank(b))));
    EXPECT_NEAR(rank(tfn_scale(c, a)), c * rank(a), 1e-12 * (1 + std::abs(c * rank(a))));
    EXPECT_NEAR(rank(tfn_scale(c, a), {RankingMethod::ModalValue}), c * a.modal, 1e-12 * (1 + std::abs(c * a.modal)));
  }
}

TEST(Properties, ArgminInvariantUnderPositiveScaling) {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Tfn> set;
    const int n = 2 + static_cast<int>(rng.below(8));
    for (int i = 0; i < n; ++i) set.push_back(random_tfn(rng));
    const double c = 0.01 + rng.unit() * 50;
    for (const auto& r : {RankingFunction{}, RankingFunction{RankingMethod::ModalValue}}) {
      auto less = [&](const Tfn& a, const Tfn& b) { return compare(a, b, r) < 0; };
      const auto before = std::min_element(set.begin(), set.end(), less) - set.begin();
      std::vector<Tfn> scaled;
      for (const auto& f : set) scaled.push_back(tfn_scale(c, f));
      const auto after = std::min_element(scaled.begin(), scaled.end(), less) - scaled.begin();
      EXPECT_EQ(before, after);
    }
  }
}
