#include <gtest/gtest.h>

#include <cmath>

#include "denjoy/strategy.hpp"
#include "support.hpp"

namespace denjoy {
namespace {

using testing::Rng;

// Weights read at the golden ratio (root index 1 of x^2 - x - 1).
GammaVector golden_weights(std::vector<mpq_class> w) {
  GammaVector g;
  g.field = NumberField::create(IntPolynomial{-1, -1, 1});
  g.root_index = 1;
  for (const auto& q : w) g.values.push_back(g.field->from_rational(q));
  return g;
}

const Substitution& canonical_sigma() { return testing::canonical_loop().sigma; }

double real_of(const GammaVector& g, const FieldElement& e) { return static_cast<double>(e.value_at(g.root_index)); }

TEST(GammaWord, Examples) {
  const auto f = NumberField::create(IntPolynomial{-1, -1, 1});
  GammaVector g{f, 0, {f->theta(), f->one()}};
  EXPECT_TRUE(gamma_word(g, {}).is_zero());
  EXPECT_EQ(gamma_word(g, {0, 1}), f->theta() + f->one());
  // (θ, 1) is an eigenvector of the Fibonacci matrix
  const Substitution fib = testing::fibonacci();
  for (Symbol a = 0; a < 2; ++a) EXPECT_EQ(gamma_word(g, fib.image(a)), f->theta() * g[a]);
}

TEST(GammaWord, SubstitutionScalesByTheta) {
  const GammaVector& g = testing::canonical_gamma();
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    Word w = testing::random_word(rng, 4, 1 + trial % 6);
    FieldElement expected = gamma_word(g, w);
    for (int m = 1; m <= (trial % 5 == 0 ? 5 : 2); ++m) {
      w = substitute(canonical_sigma(), w);
      expected *= g.theta();
      EXPECT_EQ(gamma_word(g, w), expected);
    }
  }
}

TEST(GammaWord, EigenIdentity) {
  const GammaVector& g = testing::canonical_gamma();
  const auto lhs = multiply(incidence_matrix(canonical_sigma()), g.values);
  for (std::size_t a = 0; a < g.size(); ++a) EXPECT_EQ(lhs[a], g.theta() * g[a]);
  EXPECT_NEAR(static_cast<double>(g.field->root_value(g.root_index)), 1.4618186516, 1e-9);
}

TEST(PartialSums, NegativeIndicesSubtract) {
  const GammaVector g = GammaVector::from_rationals({2, -1});
  const BrokenLine line = partial_sums(g, DottedWord{{0, 1}, 1});
  EXPECT_EQ(line.first_n(), -1);
  EXPECT_EQ(line.last_n(), 1);
  EXPECT_EQ(line.at(-1), g.field->from_rational(-2));
  EXPECT_TRUE(line.at(0).is_zero());
  EXPECT_EQ(line.at(1), g.field->from_rational(-1));
  EXPECT_EQ(line.min_n, -1);
}

TEST(PartialSums, FullSumIsGammaOfWord) {
  const GammaVector& g = testing::canonical_gamma();
  Rng rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const Word w = testing::random_word(rng, 4, 1 + trial);
    const BrokenLine line = partial_sums(g, DottedWord{w, 0});
    EXPECT_EQ(line.at(static_cast<std::int64_t>(w.size())), gamma_word(g, w));
  }
}

TEST(BestOccurrence, Examples) {
  const GammaVector g = GammaVector::from_rationals({2, -1});
  EXPECT_EQ(best_occurrence(g, {0, 0, 1}, 0), 0u);
  EXPECT_EQ(best_occurrence(g, {1, 0}, 0), 1u);
  EXPECT_THROW(best_occurrence(g, {1, 1}, 0), SymbolAbsent);
  EXPECT_THROW(best_occurrence(GammaVector::from_rationals({0, 1}), {0, 0}, 0), TieDetected);
}

TEST(BestOccurrence, MatchesLinearScanOnCanonicalImages) {
  const GammaVector& g = testing::canonical_gamma();
  for (Symbol a = 0; a < 4; ++a) {
    const Word& w = canonical_sigma().image(a);
    for (Symbol b = 0; b < 4; ++b) {
      std::optional<std::size_t> best;
      double best_value = 0;
      double running = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        running += real_of(g, g[w[i]]);
        if (w[i] == b && (!best || running < best_value)) {
          best = i;
          best_value = running;
        }
      }
      ASSERT_TRUE(best.has_value());
      EXPECT_EQ(best_occurrence(g, w, b), *best);
    }
  }
}

TEST(SplitArgmin, Examples) {
  const Substitution fib = testing::fibonacci();
  EXPECT_EQ(split_argmin(GammaVector::from_rationals({-1, 2}), fib, 0), (SplitTriple{{0}, 1, {}, 0}));
  EXPECT_EQ(split_argmin(GammaVector::from_rationals({2, -1}), fib, 0), (SplitTriple{{}, 0, {1}, 0}));
}

TEST(SplitArgmin, CanonicalPrefixesAreNonPositive) {
  const GammaVector& g = testing::canonical_gamma();
  for (Symbol a = 0; a < 4; ++a) {
    const SplitTriple t = split_argmin(g, canonical_sigma(), a);
    EXPECT_LE(g.sign(gamma_word(g, t.prefix)), 0);
    const BrokenLine line = partial_sums(g, DottedWord{canonical_sigma().image(a), 0});
    for (std::int64_t n = 0; n < static_cast<std::int64_t>(canonical_sigma().image(a).size()); ++n)
      EXPECT_GE(g.compare(line.at(n), gamma_word(g, t.prefix)), 0);
  }
}

// The global minimum of Γ(σ(w)) sits inside some block σ(w_i) at that
// block's own argmin split.
TEST(SplitArgmin, GlobalMinimumOfImageIsABlockSplit) {
  const GammaVector& g = testing::canonical_gamma();
  Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const Word w = testing::random_word(rng, 4, 1 + trial % 6);
    const Word image = substitute(canonical_sigma(), w);
    const BrokenLine line = partial_sums(g, DottedWord{image, 0});
    std::int64_t best = 0;
    for (std::int64_t n = 1; n < static_cast<std::int64_t>(image.size()); ++n)
      if (g.compare(line.at(n), line.at(best)) < 0) best = n;
    std::size_t offset = 0;
    std::size_t block = 0;
    while (offset + canonical_sigma().image(w[block]).size() <= static_cast<std::size_t>(best))
      offset += canonical_sigma().image(w[block++]).size();
    EXPECT_EQ(static_cast<std::size_t>(best) - offset, split_argmin(g, canonical_sigma(), w[block]).prefix.size());
  }
}

TEST(BestStrategy, HorizonZeroIsSplitArgmin) {
  const GammaVector& g = testing::canonical_gamma();
  const BestStrategy bs = best_strategy(g, canonical_sigma(), 0);
  for (Symbol a = 0; a < 4; ++a) {
    const auto chain = bs.chain(canonical_sigma(), a, 0);
    ASSERT_EQ(chain.size(), 1u);
    EXPECT_EQ(chain[0], split_argmin(g, canonical_sigma(), a));
  }
}

TEST(BestStrategy, CentralWordsHaveMinimumZeroAtOrigin) {
  const GammaVector& g = testing::canonical_gamma();
  const BestStrategy bs = best_strategy(g, canonical_sigma(), 4);
  for (int n = 0; n <= 4; ++n)
    for (Symbol a = 0; a < 4; ++a) {
      const DottedWord w = bs.central_word(canonical_sigma(), a, n);
      EXPECT_EQ(w.symbols, iterate(canonical_sigma(), {a}, n + 1));
      const BrokenLine line = partial_sums(g, w);
      EXPECT_EQ(line.min_n, 0);
      EXPECT_TRUE(line.min_value.is_zero());
      for (std::int64_t k = line.first_n(); k <= line.last_n(); ++k)
        if (k != 0) EXPECT_EQ(g.sign(line.at(k)), 1) << "n=" << n << " a=" << a << " k=" << k;
    }
}

TEST(BestStrategy, ChainsSatisfyTheSplitCondition) {
  const GammaVector& g = testing::canonical_gamma();
  const BestStrategy bs = best_strategy(g, canonical_sigma(), 6);
  for (Symbol a = 0; a < 4; ++a) {
    const auto chain = bs.chain(canonical_sigma(), a, 6);
    ASSERT_EQ(chain.size(), 7u);
    EXPECT_EQ(chain.back().parent, a);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) EXPECT_EQ(chain[i].parent, chain[i + 1].center);
    EXPECT_EQ(reverse_chain(reverse_chain(chain)), chain);
  }
}

TEST(BestStrategy, ValuesConvergeGeometrically) {
  const GammaVector& g = testing::canonical_gamma();
  const BestStrategy bs = best_strategy(g, canonical_sigma(), 12);
  const ValueTable vt = solve_value(g, canonical_sigma());
  const double theta2 = static_cast<double>(g.field->root_value(g.root_index));
  for (Symbol a = 0; a < 4; ++a) {
    const double k = std::abs(real_of(g, bs.values[1][a] - vt.v[a])) * theta2;
    for (int n = 0; n <= 12; ++n) {
      if (n > 0) EXPECT_LE(g.compare(bs.values[n][a], bs.values[n - 1][a]), 0);
      EXPECT_GE(g.compare(bs.values[n][a], vt.v[a]), 0);
      if (n >= 1) EXPECT_LE(std::abs(real_of(g, bs.values[n][a] - vt.v[a])), k * std::pow(theta2, -n) * (1 + 1e-9));
    }
  }
}

TEST(BestStrategy, SameCentreTieThrows) {
  const GammaVector g = golden_weights({0, 1});
  const Substitution s = Substitution::parse("a -> a a\nb -> a b\n");
  EXPECT_THROW(best_strategy(g, s, 2), TieDetected);
}

TEST(BestStrategy, CrossLetterTieWarns) {
  const GammaVector g = golden_weights({0, 1});
  const Substitution s = Substitution::parse("a -> a b\nb -> b a\n");
  Warnings warnings;
  best_strategy(g, s, 2, &warnings);
  bool saw = false;
  for (const auto& w : warnings) saw = saw || w.kind == "TieDetected";
  EXPECT_TRUE(saw);
}

TEST(SolveValue, BellmanIdentity) {
  const GammaVector& g = testing::canonical_gamma();
  const ValueTable vt = solve_value(g, canonical_sigma());
  const FieldElement inv = g.theta().inverse();
  for (Symbol a = 0; a < 4; ++a) {
    const auto all = splits(canonical_sigma(), a);
    ASSERT_EQ(vt.q[a].size(), all.size());
    for (std::size_t j = 0; j < all.size(); ++j) {
      EXPECT_EQ(vt.q[a][j], inv * (gamma_word(g, all[j].prefix) + vt.v[all[j].center]));
      if (j == vt.policy[a])
        EXPECT_EQ(vt.q[a][j], vt.v[a]);
      else
        EXPECT_GT(g.compare(vt.q[a][j], vt.v[a]), 0);
    }
    EXPECT_LE(g.sign(vt.v[a]), 0);
  }
}

TEST(SolveValue, FrozenCanonicalValues) {
  // Frozen from a double-precision value iteration on the numeric eigenvector.
  const GammaVector& g = testing::canonical_gamma();
  const ValueTable vt = solve_value(g, canonical_sigma());
  const double expected[] = {-20.2627, -26.6642, -14.9682, -14.9682};
  const std::size_t policy[] = {3, 6, 2, 2};
  for (Symbol a = 0; a < 4; ++a) {
    EXPECT_NEAR(real_of(g, vt.v[a]), expected[a], 1e-3);
    EXPECT_EQ(vt.policy[a], policy[a]);
  }
}

TEST(SolveValue, ZeroOnEmptyPrefixCycle) {
  const ValueTable vt = solve_value(golden_weights({1, 1}), testing::fibonacci());
  for (const auto& v : vt.v) EXPECT_TRUE(v.is_zero());
}

// Changing the first triple of an optimal sequence changes its value.
TEST(SolveValue, OptimalFirstTripleIsUnique) {
  const GammaVector& g = testing::canonical_gamma();
  const ValueTable vt = solve_value(g, canonical_sigma());
  for (Symbol a = 0; a < 4; ++a) {
    std::size_t achieving = 0;
    for (const auto& q : vt.q[a]) achieving += q == vt.v[a] ? 1 : 0;
    EXPECT_EQ(achieving, 1u);
  }
}

// For positive γ(a), the part of σⁿ(a) from its lowest prefix sum on carries
// at least θ₂ⁿγ(a): the lowest prefix sum is at most γ(ε) = 0.
TEST(Growth, SuffixFromLowestPrefix) {
  const GammaVector& g = testing::canonical_gamma();
  std::vector<double> weight;
  for (Symbol a = 0; a < 4; ++a) weight.push_back(real_of(g, g[a]));
  for (Symbol a = 0; a < 4; ++a) {
    if (g.sign(g[a]) <= 0) continue;
    for (int n = 1; n <= 6; ++n) {
      const Word w = iterate(canonical_sigma(), {a}, n);
      std::vector<long> counts(4, 0), best_counts(4, 0);
      double running = 0, best = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        running += weight[w[i]];
        ++counts[w[i]];
        if (running < best) {
          best = running;
          best_counts = counts;
        }
      }
      FieldElement prefix = g.field->zero();
      for (Symbol b = 0; b < 4; ++b) prefix += g[b] * mpq_class(best_counts[b]);
      EXPECT_LE(g.sign(prefix), 0) << "a=" << a << " n=" << n;
      const FieldElement suffix = g.theta().pow(n) * g[a] - prefix;
      EXPECT_GE(g.sign(suffix - g.theta().pow(n) * g[a]), 0) << "a=" << a << " n=" << n;
      // exact counts of the whole image reproduce θ₂ⁿγ(a)
      FieldElement total = g.field->zero();
      for (Symbol b = 0; b < 4; ++b) total += g[b] * mpq_class(counts[b]);
      EXPECT_EQ(total, g.theta().pow(n) * g[a]);
    }
  }
}

TEST(MinimalPoints, CanonicalCandidates) {
  const GammaVector& g = testing::canonical_gamma();
  const MinimalPointsResult r = minimal_points(g, canonical_sigma(), 400);
  ASSERT_FALSE(r.candidates.empty());
  EXPECT_LE(r.candidates.size(), 4u);
  for (const auto& c : r.candidates) {
    EXPECT_TRUE(c.verified);
    EXPECT_TRUE(verify_minimal_window(g, c.window).ok);
    EXPECT_TRUE(satisfies_chain(canonical_sigma(), c.decomposition));
  }
  // Frozen from an independent scan of the brute-force oracle at radius 1600.
  EXPECT_EQ(format_dotted(canonical_sigma().alphabet(), r.candidates[0].window.restrict(10)),
            "3 1 4 1 3 2 2 3 2 2 . 3 1 4 1 3 2 3 1 3 2 3");
}

TEST(MinimalPoints, CandidatesAreAmongBruteForceWindows) {
  const GammaVector& g = testing::canonical_gamma();
  const auto oracle = brute_force_minimal(g, canonical_sigma(), 120);
  const MinimalPointsResult r = minimal_points(g, canonical_sigma(), 400);
  for (const auto& c : r.candidates) EXPECT_TRUE(oracle.count(c.window.restrict(120)));
}

TEST(BruteForce, RadiusZeroAndMonotone) {
  const GammaVector& g = testing::canonical_gamma();
  EXPECT_EQ(brute_force_minimal(g, canonical_sigma(), 0).size(), 4u);
  std::set<DottedWord> previous = brute_force_minimal(g, canonical_sigma(), 0);
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto current = brute_force_minimal(g, canonical_sigma(), n);
    for (const auto& w : current) EXPECT_TRUE(previous.count(w.restrict(static_cast<std::int64_t>(n) - 1)));
    previous = current;
  }
}

TEST(TailSums, EmptyAndIncreasing) {
  const GammaVector& g = testing::canonical_gamma();
  const MinimalCandidate& c = testing::canonical_analysis().minimal.candidates.at(0);
  EXPECT_EQ(tail_sums(g, c.window, 0).k, Real(1));
  Real previous = 1;
  for (std::size_t n = 1; n <= 60; ++n) {
    const Real k = tail_sums(g, c.window, n).k;
    EXPECT_GT(k, previous);
    previous = k;
  }
}

TEST(TailSums, WeightsFollowThePartialSums) {
  const GammaVector& g = testing::canonical_gamma();
  const MinimalCandidate& c = testing::canonical_analysis().minimal.candidates.at(0);
  const TailSums t = tail_sums(g, c.window, 30);
  const auto sums = numeric_partial_sums(g, c.window.restrict(30));
  Real k = 0;
  for (const auto& s : sums) k += exp(-s);
  // numeric_partial_sums also covers n = 31
  k -= exp(-sums.back());
  EXPECT_LT(abs(k - t.k), Real(1e-60));
  EXPECT_LT(abs(t.k - (1 + t.forward + t.backward)), Real(1e-60));
}

}  // namespace
}  // namespace denjoy
