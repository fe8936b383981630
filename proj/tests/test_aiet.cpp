#include <gtest/gtest.h>

#include "denjoy/aiet.hpp"
#include "denjoy/pipeline.hpp"
#include "support.hpp"

namespace denjoy {
namespace {

constexpr std::size_t kAtoms = 2000;

const LoopAnalysis& analysis() { return testing::canonical_analysis(); }
const MinimalCandidate& candidate() { return analysis().minimal.candidates.at(0); }

const AtomicMeasure& measure() {
  static const AtomicMeasure mu =
      build_measure(*analysis().substitution.gamma, candidate(), analysis().loop.sigma, analysis().iet, kAtoms);
  return mu;
}

const AIETBuild& aiet() {
  static const AIETBuild b = build_aiet(measure(), analysis().iet);
  return b;
}

TEST(LocatePoint, CodingOfLocatedPointReproducesTheWindow) {
  const DottedWord window = candidate().window.restrict(200);
  const LocatedPoint p = locate_point(analysis().iet, window);
  EXPECT_FALSE(p.endpoint_orbit);
  EXPECT_EQ(coding(analysis().iet, p.t, 200).word, window);
  EXPECT_EQ(p.t.sign_at(analysis().iet.root_index), 1);
}

TEST(LocatePoint, IllegalWindowIsRejected) {
  // "3 3" never occurs in the canonical subshift
  const DottedWord bad{Word(11, 2), 5};
  EXPECT_THROW(locate_point(analysis().iet, bad), CodingMismatch);
}

TEST(Measure, SingleAtomWithoutTruncation) {
  const AtomicMeasure mu =
      build_measure(*analysis().substitution.gamma, candidate(), analysis().loop.sigma, analysis().iet, 0);
  ASSERT_EQ(mu.atoms.size(), 1u);
  EXPECT_EQ(mu.k, Real(1));
  EXPECT_EQ(mu.atoms[0].weight, Real(1));
  EXPECT_THROW(build_aiet(mu, analysis().iet), DegenerateInterval);
}

TEST(Measure, MassAndWeightRatios) {
  const AtomicMeasure& mu = measure();
  ASSERT_EQ(mu.atoms.size(), 2 * kAtoms + 1);
  EXPECT_LT(abs(mu.total_mass() - 1), Real(1e-60));
  for (std::int64_t n = -static_cast<std::int64_t>(kAtoms); n < static_cast<std::int64_t>(kAtoms); ++n) {
    const Atom& a = mu.at(n);
    EXPECT_EQ(a.label, static_cast<int>(candidate().window.at(n)) + 1);
    const Real expected = exp(-mu.gamma_values[static_cast<std::size_t>(a.label - 1)]);
    EXPECT_LT(abs(mu.at(n + 1).weight / a.weight / expected - 1), Real(1e-60)) << n;
  }
}

TEST(Measure, PushforwardWithinBoundaryBound) {
  const auto residuals = pushforward_residual(measure(), analysis().iet);
  ASSERT_EQ(residuals.size(), 4u);
  for (const auto& r : residuals) {
    EXPECT_LE(r.residual, r.bound * (1 + Real(1e-30)));
    EXPECT_LT(r.interior_residual, Real(1e-60));
  }
}

TEST(Aiet, PartitionsAndSlopes) {
  const AIETMap& f = aiet().map;
  ASSERT_EQ(f.breakpoints.size(), 5u);
  EXPECT_EQ(f.breakpoints.front(), Real(0));
  EXPECT_LT(abs(f.breakpoints.back() - 1), Real(1e-60));
  EXPECT_LT(abs(f.image_breakpoints.back() - 1), Real(1e-60));
  for (std::size_t i = 1; i < f.breakpoints.size(); ++i) {
    EXPECT_LT(f.breakpoints[i - 1], f.breakpoints[i]);
    EXPECT_LT(f.image_breakpoints[i - 1], f.image_breakpoints[i]);
  }
  for (std::size_t j = 0; j < 4; ++j) {
    const Real expected = exp(-measure().gamma_values[j]);
    EXPECT_LT(abs(f.slopes[j] / expected - 1), Real(1e-6));
    EXPECT_LT(abs(f.image_length[j] - f.slopes[j] * f.domain_length[j]), Real(1e-60));
  }
}

TEST(Aiet, MapsDomainPiecesOntoImagePieces) {
  const AIETMap& f = aiet().map;
  for (int label = 1; label <= 4; ++label) {
    const auto j = static_cast<std::size_t>(label - 1);
    const Real mid = f.domain_start[j] + f.domain_length[j] / 2;
    EXPECT_EQ(f.locate(mid), label);
    EXPECT_LT(abs(f.apply(mid) - (f.image_start[j] + f.image_length[j] / 2)), Real(1e-60));
  }
}

TEST(Aiet, AtomsMoveToTheirSuccessorGaps) {
  const AIETBuild& b = aiet();
  const AtomicMeasure& mu = measure();
  for (std::int64_t n = -100; n < 100; ++n) {
    const Real left = b.conj.g_left(mu.at(n).position);
    const Real right = b.conj.g(mu.at(n).position);
    EXPECT_LT(abs(right - left - mu.at(n).weight), Real(1e-60));
    EXPECT_LT(abs(b.map.apply(left) - b.conj.g_left(mu.at(n + 1).position)), Real(1e-10));
  }
}

TEST(Aiet, SemiConjugacyInverseIsMonotone) {
  const SemiConjugacy& c = aiet().conj;
  Real previous = -1;
  for (int k = 0; k < 2000; ++k) {
    const Real v = (Real(k) + Real(0.5)) / 2000;
    const Real u = c.h(v);
    EXPECT_GE(u, previous);
    EXPECT_LE(c.g_left(u), v);
    EXPECT_GE(c.g(u), v);
    previous = u;
  }
}

TEST(Wandering, ForwardImagesAreDisjoint) {
  const WanderingReport w = verify_wandering(aiet(), measure(), 200);
  EXPECT_TRUE(w.disjoint);
  EXPECT_FALSE(w.overlap.has_value());
  EXPECT_LT(w.total_length, Real(1));
  EXPECT_LT(w.max_ratio_error, Real(1e-6));
  EXPECT_EQ(w.lengths.size(), 201u);
  for (std::size_t k = 1; k < w.lengths.size(); ++k) EXPECT_LT(w.lengths[k], w.lengths[0]);
}

TEST(SemiConjugacy, ResidualIsSmall) {
  const SemiConjugacyReport r = verify_semiconjugacy(aiet(), measure(), analysis().iet, 20000);
  EXPECT_LE(r.residual, Real(1e-6));
  EXPECT_EQ(r.monotonicity_violations, 0u);
  EXPECT_GT(r.samples, 0u);
}

TEST(Pipeline, RunDenjoyAgreesWithPieces) {
  Warnings warnings;
  const DenjoyRun run = run_denjoy(analysis(), kAtoms, 50, 5000, &warnings);
  EXPECT_EQ(run.measure.k, measure().k);
  EXPECT_TRUE(run.wandering.disjoint);
  EXPECT_EQ(run.aiet.map.slopes, aiet().map.slopes);
}

}  // namespace
}  // namespace denjoy
