#pragma once

#include <optional>

#include "denjoy/aiet.hpp"
#include "denjoy/rauzy.hpp"
#include "denjoy/strategy.hpp"

namespace denjoy {

// Weights γ for a primitive substitution: the eigenvector of its incidence
// matrix for the Perron field, read at the chosen conjugate θ₂.
struct SubstitutionAnalysis {
  IntMatrix incidence;
  Primitivity primitivity;
  std::optional<PerronData> perron;
  HypothesisReport hypotheses;
  std::optional<GammaVector> gamma;
};

// Never throws for a non-primitive input; the report says so instead.
SubstitutionAnalysis analyze_substitution(const Substitution& sigma, Theta2Choice choice = {});

struct LoopAnalysis {
  LoopResult loop;
  IETExact iet;
  SubstitutionAnalysis substitution;
  MinimalPointsResult minimal;
};

// Throws HypothesisFailure when the loop does not satisfy the hypotheses and
// NoCandidate when no verified minimal point is found.
LoopAnalysis analyze_loop(const LoopResult& loop, std::size_t radius, Theta2Choice choice = {},
                          Warnings* warnings = nullptr);

struct DenjoyRun {
  AtomicMeasure measure;
  std::vector<PushforwardResidual> pushforward;
  AIETBuild aiet;
  WanderingReport wandering;
  SemiConjugacyReport semiconjugacy;
};

// μ_t, f, h and the checks for the first verified minimal point.
DenjoyRun run_denjoy(const LoopAnalysis& analysis, std::size_t atoms, std::size_t n_iter, std::size_t samples,
                     Warnings* warnings = nullptr);

}  // namespace denjoy
