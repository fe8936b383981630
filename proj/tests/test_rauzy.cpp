#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <utility>
#include <nlohmann/json.hpp>

#include "denjoy/rauzy.hpp"
#include "denjoy/serialize.hpp"
#include "support.hpp"

namespace denjoy {
namespace {

using testing::Rng;

FieldPtr rationals() { return NumberField::rationals(); }

std::vector<FieldElement> rational_lengths(const std::vector<mpq_class>& q) {
  std::vector<FieldElement> out;
  for (const auto& x : q) out.push_back(rationals()->from_rational(x));
  return out;
}

// Moves written out directly on (top, bottom) pairs.
std::pair<std::vector<int>, std::vector<int>> oracle_move(std::vector<int> top, std::vector<int> bottom, bool t) {
  auto& row = t ? bottom : top;
  const int winner = t ? top.back() : bottom.back();
  const int loser = t ? bottom.back() : top.back();
  row.erase(std::find(row.begin(), row.end(), loser));
  row.insert(std::find(row.begin(), row.end(), winner) + 1, loser);
  return {top, bottom};
}

std::size_t oracle_closure_size(const Permutation& pi) {
  const RauzyState base = RauzyState::from_permutation(pi);
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen{{base.top, base.bottom}};
  std::deque<std::pair<std::vector<int>, std::vector<int>>> queue{{base.top, base.bottom}};
  while (!queue.empty()) {
    const auto [top, bottom] = queue.front();
    queue.pop_front();
    for (bool t : {true, false}) {
      auto next = oracle_move(top, bottom, t);
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return seen.size();
}

TEST(Permutation, ParseAndIrreducibility) {
  EXPECT_EQ(Permutation::parse("4 3 2 1").to_string(), "4 3 2 1");
  EXPECT_TRUE(Permutation::parse("3 1 2").irreducible());
  EXPECT_FALSE(Permutation::parse("1 2 3").irreducible());
  EXPECT_FALSE(Permutation::parse("2 1 3").irreducible());
  EXPECT_THROW(Permutation::parse("1 1"), ParseError);
  EXPECT_THROW(RauzyState::from_permutation(Permutation::parse("1 2")), ReduciblePermutation);
}

TEST(RauzyState, BaseStateRoundTrip) {
  for (const char* text : {"2 1", "3 2 1", "4 3 2 1", "3 1 2", "2 4 1 3"}) {
    const Permutation pi = Permutation::parse(text);
    const RauzyState s = RauzyState::from_permutation(pi);
    EXPECT_EQ(s.permutation(), pi);
  }
}

TEST(RauzyStep, RationalLengthsEndInKeaneTie) {
  const RauzyState s = RauzyState::from_permutation(Permutation::parse("2 1"));
  const StepResult first = rauzy_step(rational_lengths({mpq_class(2, 3), mpq_class(1, 3)}), s, 0);
  EXPECT_EQ(first.lambda[0], rationals()->from_rational(mpq_class(1, 3)));
  EXPECT_EQ(first.lambda[1], rationals()->from_rational(mpq_class(1, 3)));
  EXPECT_EQ(first.state, s);
  EXPECT_THROW(rauzy_step(first.lambda, first.state, 0), KeaneTie);
}

TEST(RauzyStep, QuadraticLengthsDecidedBySign) {
  const PerronData p = perron_field(IntMatrix{{2, 1}, {1, 1}});
  const RauzyState s = RauzyState::from_permutation(Permutation::parse("2 1"));
  const int root = p.field->perron_index();
  // λ ≈ (0.618, 0.382): the image's last interval (label 1) is longer
  const StepResult step = rauzy_step(p.eigenvector, s, root);
  EXPECT_EQ(step.record.type, 'b');
  EXPECT_EQ(step.record.winner, 1);
  EXPECT_EQ(step.record.loser, 2);
  EXPECT_EQ(step.lambda[0], p.eigenvector[0] - p.eigenvector[1]);
  EXPECT_EQ(multiply(step.record.matrix, step.lambda), p.eigenvector);
}

TEST(RauzyStep, ElementaryMatrixInvertsTheStep) {
  Rng rng(41);
  const RauzyState s = RauzyState::from_permutation(Permutation::parse("4 3 2 1"));
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<mpq_class> q;
    for (int i = 0; i < 4; ++i) q.emplace_back(testing::uniform(rng, 1, 1000));
    std::vector<FieldElement> lambda = rational_lengths(q);
    RauzyState state = s;
    for (int k = 0; k < 6; ++k) {
      StepResult step;
      try {
        step = rauzy_step(lambda, state, 0);
      } catch (const KeaneTie&) {
        break;
      }
      EXPECT_EQ(multiply(step.record.matrix, step.lambda), lambda);
      lambda = step.lambda;
      state = step.state;
    }
  }
}

TEST(RauzyDiagram, TwoIntervals) {
  const RauzyDiagram d = rauzy_diagram(Permutation::parse("2 1"));
  ASSERT_EQ(d.vertices.size(), 1u);
  EXPECT_EQ(d.edges[0][0], 0u);
  EXPECT_EQ(d.edges[0][1], 0u);
}

TEST(RauzyDiagram, MatchesClosureOracle) {
  for (const char* text : {"3 2 1", "3 1 2", "4 3 2 1", "2 4 1 3", "5 4 3 2 1"}) {
    const Permutation pi = Permutation::parse(text);
    const RauzyDiagram d = rauzy_diagram(pi);
    EXPECT_EQ(d.vertices.size(), oracle_closure_size(pi)) << text;
    for (std::size_t v = 0; v < d.vertices.size(); ++v) {
      EXPECT_TRUE(d.vertices[v].permutation().irreducible());
      EXPECT_EQ(d.vertices[d.edges[v][0]], rauzy_move(d.vertices[v], 't'));
      EXPECT_EQ(d.vertices[d.edges[v][1]], rauzy_move(d.vertices[v], 'b'));
    }
  }
}

TEST(Loops, TwoStepLoop) {
  const Permutation pi = Permutation::parse("2 1");
  const LoopResult bt = make_loop(pi, "bt");
  EXPECT_EQ(bt.r, (IntMatrix{{2, 1}, {1, 1}}));
  const LoopResult tb = make_loop(pi, "tb");
  EXPECT_EQ(tb.r, (IntMatrix{{1, 1}, {1, 2}}));
  EXPECT_EQ(charpoly(tb.r), (IntPolynomial{1, -3, 1}));
  for (const LoopResult* loop : {&bt, &tb}) {
    EXPECT_EQ(incidence_matrix(loop->sigma), loop->r.transpose());
    const auto lhs = multiply(loop->r, loop->perron.eigenvector);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(lhs[i], loop->perron.field->theta() * loop->perron.eigenvector[i]);
    EXPECT_FALSE(loop->hypotheses.passed);
  }
}

void check_loop_invariants(const LoopResult& loop) {
  const FieldPtr& f = loop.perron.field;
  const int root = f->perron_index();
  IntMatrix product = IntMatrix::identity(loop.r.rows());
  for (const auto& s : loop.steps) product = product * s.matrix;
  EXPECT_EQ(product, loop.r);
  const auto lhs = multiply(loop.r, loop.perron.eigenvector);
  for (std::size_t i = 0; i < lhs.size(); ++i) EXPECT_EQ(lhs[i], f->theta() * loop.perron.eigenvector[i]);
  EXPECT_EQ(incidence_matrix(loop.sigma), loop.r.transpose());
  EXPECT_EQ(loop_substitution(loop.base, loop.path), loop.sigma);

  // Inducing along the path rescales the lengths by 1/θ₁ and returns to the base.
  std::vector<FieldElement> lambda = loop.perron.eigenvector;
  RauzyState state = loop.base;
  for (std::size_t k = 0; k < loop.path.size(); ++k) {
    const StepResult step = rauzy_step(lambda, state, root);
    EXPECT_EQ(step.record.type, loop.path[k]);
    EXPECT_EQ(multiply(step.record.matrix, step.lambda), lambda);
    lambda = step.lambda;
    state = step.state;
  }
  EXPECT_EQ(state, loop.base);
  const FieldElement inv = f->theta().inverse();
  for (std::size_t i = 0; i < lambda.size(); ++i) EXPECT_EQ(lambda[i], loop.perron.eigenvector[i] * inv);

  const Primitivity prim = is_primitive(loop.sigma);
  EXPECT_TRUE(prim.primitive);
  ASSERT_TRUE(prim.exponent.has_value());
  EXPECT_LE(*prim.exponent, static_cast<int>(loop.path.size()) + loop.r.rows());
}

TEST(Loops, InvariantsOverSmallSearches) {
  // (4 3 2 1) has no positive loop shorter than 11
  for (const auto& [text, max_len] : {std::pair{"2 1", 7}, std::pair{"3 2 1", 7}, std::pair{"4 3 2 1", 11}}) {
    const auto loops = loop_search(Permutation::parse(text), max_len, LoopFilter::Positive);
    EXPECT_FALSE(loops.empty()) << text;
    for (const auto& loop : loops) check_loop_invariants(loop);
  }
}

TEST(Loops, SortedByLengthThenPath) {
  const auto loops = loop_search(Permutation::parse("3 2 1"), 8, LoopFilter::Positive);
  for (std::size_t i = 1; i < loops.size(); ++i) {
    const auto& a = loops[i - 1].path;
    const auto& b = loops[i].path;
    EXPECT_TRUE(a.size() < b.size() || (a.size() == b.size() && a < b));
  }
}

TEST(Loops, QuadraticFieldsNeverPass) {
  for (const auto& loop : loop_search(Permutation::parse("2 1"), 10, LoopFilter::Positive)) {
    EXPECT_EQ(loop.perron.field->degree(), 2);
    EXPECT_FALSE(loop.hypotheses.passed);
    EXPECT_EQ(loop.hypotheses.failing_condition, 3);
  }
  EXPECT_TRUE(loop_search(Permutation::parse("2 1"), 10).empty());
}

TEST(Loops, CanonicalLoopMatchesGoldenFile) {
  const auto loops = loop_search(testing::canonical_permutation(), 12);
  ASSERT_FALSE(loops.empty());
  const LoopResult& first = loops.front();
  EXPECT_EQ(first.path, testing::canonical_path());
  check_loop_invariants(first);
  const auto golden = nlohmann::json::parse(testing::read_file(testing::golden_path("canonical_loop.json")));
  EXPECT_EQ(loop_json(first), golden);
  EXPECT_EQ(first.sigma, Substitution::parse(testing::read_file(testing::data_path("canonical_sigma.txt"))));
}

TEST(Loops, EmptyPathIsRejected) {
  const RauzyState base = RauzyState::from_permutation(testing::canonical_permutation());
  EXPECT_THROW(loop_substitution(base, ""), ParseError);
  EXPECT_THROW(make_loop(testing::canonical_permutation(), "t"), Error);
}

IETExact fibonacci_rotation() {
  const auto f = NumberField::create(IntPolynomial{-1, -1, 1});
  const FieldElement t = f->theta();
  const FieldElement denom = (t + f->one()).inverse();
  return IETExact{{t * denom, denom}, RauzyState::from_permutation(Permutation::parse("2 1")), 1};
}

TEST(Iet, ApplyAndInverse) {
  const LoopResult& loop = testing::canonical_loop();
  const IETExact iet{loop.perron.eigenvector, loop.base, loop.perron.field->perron_index()};
  const auto f = loop.perron.field;
  FieldElement x = f->from_rational(mpq_class(1, 7));
  for (int k = 0; k < 50; ++k) {
    const FieldElement y = iet.apply(x);
    EXPECT_EQ(iet.apply_inverse(y), x);
    EXPECT_EQ(iet.locate_image(y), iet.locate(x));
    x = y;
  }
  EXPECT_EQ(iet.top_start(1), f->zero());
  EXPECT_EQ(iet.bottom_start(4), f->zero());
}

TEST(Coding, StartsInTheFirstInterval) {
  const IETExact iet = fibonacci_rotation();
  const CodingResult c = coding(iet, iet.lambda[0].field()->zero(), 5);
  EXPECT_EQ(c.word.at(0), 0u);
}

TEST(Coding, RotationCodingsAreFibonacciFactors) {
  const IETExact iet = fibonacci_rotation();
  const auto f = iet.lambda[0].field();
  const auto legal = language(testing::fibonacci(), 17);
  for (int k = 0; k < 40; ++k) {
    const CodingResult c = coding(iet, f->from_rational(mpq_class(k, 41)), 8);
    EXPECT_EQ(c.word.symbols.size(), 17u);
    EXPECT_TRUE(legal.count(c.word.symbols)) << k;
  }
}

}  // namespace
}  // namespace denjoy
