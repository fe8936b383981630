#include <gtest/gtest.h>

#include "denjoy/substitution.hpp"
#include "support.hpp"

namespace denjoy {
namespace {

using testing::Rng;

IntMatrix power(const IntMatrix& m, int n) {
  IntMatrix out = IntMatrix::identity(m.rows());
  for (int i = 0; i < n; ++i) out = out * m;
  return out;
}

TEST(Parse, RoundTrip) {
  const Substitution s = Substitution::parse(testing::read_file(testing::data_path("canonical_sigma.txt")));
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.alphabet().format(s.image(1)), "1 3 2 2 3 2 2 3 1 4");
  EXPECT_EQ(Substitution::parse(s.print()), s);
}

TEST(Parse, CommentsAndBlankLines) {
  const Substitution s = Substitution::parse("# rules\n\na -> a b  # first\nb -> a\n");
  EXPECT_EQ(s, testing::fibonacci());
}

TEST(Parse, MalformedRuleNamesLine) {
  try {
    Substitution::parse(testing::read_file(testing::data_path("malformed.txt")));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos) << e.what();
  }
}

TEST(Parse, Rejections) {
  EXPECT_THROW(Substitution::parse("a -> a c\nb -> a\n"), ParseError);
  EXPECT_THROW(Substitution::parse("a -> a\na -> b\n"), ParseError);
  EXPECT_THROW(Substitution::parse("a ->\n"), ParseError);
  EXPECT_THROW(Substitution::parse(""), ParseError);
}

TEST(Incidence, Examples) {
  EXPECT_EQ(incidence_matrix(testing::fibonacci()), (IntMatrix{{1, 1}, {1, 0}}));
  const Substitution trib = Substitution::parse(testing::read_file(testing::data_path("tribonacci.txt")));
  EXPECT_EQ(incidence_matrix(trib), (IntMatrix{{1, 1, 0}, {1, 0, 1}, {1, 0, 0}}));
}

TEST(Incidence, CompositionIsMultiplicative) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t letters = 2 + trial % 3;
    const Substitution s = testing::random_primitive(rng, letters, 4);
    const Substitution t = testing::random_primitive(rng, letters, 4);
    const IntMatrix ms = incidence_matrix(s);
    EXPECT_EQ(incidence_matrix(compose(s, s)), ms * ms);
    EXPECT_EQ(incidence_matrix(compose(s, t)), incidence_matrix(t) * ms);
  }
}

TEST(Primitivity, Examples) {
  const Primitivity fib = is_primitive(testing::fibonacci());
  EXPECT_TRUE(fib.primitive);
  EXPECT_EQ(fib.exponent, 2);
  EXPECT_FALSE(is_primitive(Substitution::parse("a -> a b\nb -> b\n")).primitive);
}

TEST(Iterate, Fibonacci) {
  const Substitution fib = testing::fibonacci();
  const Alphabet& ab = fib.alphabet();
  EXPECT_EQ(ab.format(iterate(fib, ab.parse("a"), 2)), "a b a");
  EXPECT_EQ(ab.format(iterate(fib, ab.parse("a"), 3)), "a b a a b");
  EXPECT_EQ(iterate(fib, ab.parse("a"), 10).size(), 144u);
  EXPECT_THROW(iterate(fib, ab.parse("a"), 40, 1000), LengthBudgetExceeded);
}

TEST(Iterate, LengthsMatchMatrixPowers) {
  Rng rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const Substitution s = testing::random_primitive(rng, 2 + trial % 3, 3);
    const IntMatrix m = incidence_matrix(s);
    const auto table = length_table(s, 6);
    for (int n = 0; n <= 6; ++n) {
      const IntMatrix mn = power(m, n);
      for (Symbol a = 0; a < s.size(); ++a) {
        mpz_class row = 0;
        for (std::size_t b = 0; b < s.size(); ++b) row += mn(a, b);
        EXPECT_EQ(mpz_class(static_cast<unsigned long>(table[n][a])), row);
        if (n <= 4) EXPECT_EQ(mpz_class(static_cast<unsigned long>(iterate(s, {a}, n).size())), row);
      }
    }
  }
}

TEST(Iterate, PrefixAndSuffixWithoutBuilding) {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Substitution s = testing::random_primitive(rng, 3, 4);
    const Word w = testing::random_word(rng, 3, 3);
    const Word full = iterate(s, w, 5);
    const std::size_t k = std::min<std::size_t>(full.size(), 17);
    EXPECT_EQ(prefix_of_iterate(s, w, 5, k), Word(full.begin(), full.begin() + k));
    EXPECT_EQ(suffix_of_iterate(s, w, 5, k), Word(full.end() - k, full.end()));
  }
}

TEST(Splits, Fibonacci) {
  const Substitution fib = testing::fibonacci();
  const auto sa = splits(fib, 0);
  ASSERT_EQ(sa.size(), 2u);
  EXPECT_EQ(sa[0], (SplitTriple{{}, 0, {1}, 0}));
  EXPECT_EQ(sa[1], (SplitTriple{{0}, 1, {}, 0}));
  const auto sb = splits(fib, 1);
  ASSERT_EQ(sb.size(), 1u);
  EXPECT_EQ(sb[0], (SplitTriple{{}, 0, {}, 1}));
}

TEST(Splits, Reassemble) {
  const Substitution& s = testing::canonical_loop().sigma;
  for (Symbol a = 0; a < s.size(); ++a) {
    const auto all = splits(s, a);
    EXPECT_EQ(all.size(), s.image(a).size());
    for (const auto& t : all) {
      Word w = t.prefix;
      w.push_back(t.center);
      w.insert(w.end(), t.suffix.begin(), t.suffix.end());
      EXPECT_EQ(w, s.image(a));
    }
  }
}

TEST(Language, FibonacciSmallLengths) {
  const Substitution fib = testing::fibonacci();
  const Alphabet& ab = fib.alphabet();
  EXPECT_EQ(language(fib, 1).size(), 2u);
  const std::set<Word> two{ab.parse("a b"), ab.parse("b a"), ab.parse("a a")};
  EXPECT_EQ(language(fib, 2), two);
  EXPECT_EQ(language(fib, 3).size(), 4u);
  for (std::size_t n = 1; n <= 12; ++n) EXPECT_EQ(language(fib, n).size(), n + 1);
}

TEST(Language, MatchesFactorsOfLongIterates) {
  Rng rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const Substitution s = testing::random_primitive(rng, 2 + trial % 3, 3);
    std::vector<Word> words;
    for (Symbol a = 0; a < s.size(); ++a) {
      Word w{a};
      while (w.size() < 40000) w = substitute(s, w);
      words.push_back(w);
    }
    for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(language(s, n), testing::factors(words, n)) << s.print();
  }
}

PrefixSuffixSeq fibonacci_fixed_point() {
  PrefixSuffixSeq seq;
  seq.period = {SplitTriple{{}, 0, {1}, 0}};
  return seq;
}

TEST(Expand, RightSideOfFibonacciFixedPointNeedsAnchor) {
  const Substitution fib = testing::fibonacci();
  EXPECT_THROW(expand(fib, fibonacci_fixed_point(), 10), InsufficientGrowth);
}

TEST(Expand, FibonacciFixedPoint) {
  const Substitution fib = testing::fibonacci();
  const Word right = iterate(fib, {0}, 12);
  std::set<DottedWord> windows;
  for (const std::vector<Symbol>& anchor : {std::vector<Symbol>{1, 0}, std::vector<Symbol>{0, 1}}) {
    PrefixSuffixSeq seq = fibonacci_fixed_point();
    seq.left_anchor.period = anchor;
    ASSERT_TRUE(satisfies_chain(fib, seq));
    ExpandInfo info;
    const DottedWord w = expand(fib, seq, 50, &info);
    EXPECT_TRUE(info.left_completed_by_anchor);
    EXPECT_FALSE(info.right_completed_by_anchor);
    ASSERT_EQ(w.origin, 50);
    for (std::int64_t n = 0; n <= 50; ++n) EXPECT_EQ(w.at(n), right[static_cast<std::size_t>(n)]);
    EXPECT_EQ(w.at(-1), anchor[0]);
    const auto legal = language(fib, 6);
    for (const auto& f : testing::factors({w.symbols}, 6)) EXPECT_TRUE(legal.count(f));
    windows.insert(w);
  }
  EXPECT_EQ(windows.size(), 2u);
}

TEST(Expand, ChainViolationsAreDetected) {
  const Substitution fib = testing::fibonacci();
  PrefixSuffixSeq seq = fibonacci_fixed_point();
  seq.left_anchor.period = {0};
  EXPECT_FALSE(satisfies_chain(fib, seq));
  seq.left_anchor.period.clear();
  seq.period = {SplitTriple{{0}, 1, {}, 0}};
  EXPECT_FALSE(satisfies_chain(fib, seq));
}

TEST(Normalize, ShortensPeriodAndAbsorbsHead) {
  const SplitTriple t{{}, 0, {1}, 0};
  PrefixSuffixSeq seq;
  seq.head = {t, t};
  seq.period = {t, t, t};
  const PrefixSuffixSeq n = normalize(seq);
  EXPECT_TRUE(n.head.empty());
  EXPECT_EQ(n.period.size(), 1u);
}

TEST(DottedWordFormat, RestrictAndPrint) {
  const Alphabet ab({"a", "b"});
  const DottedWord w{ab.parse("a b a a b a b"), 3};
  EXPECT_EQ(format_dotted(ab, w), "a b a . a b a b");
  EXPECT_EQ(format_dotted(ab, w.restrict(1)), "a . a b");
}

}  // namespace
}  // namespace denjoy
