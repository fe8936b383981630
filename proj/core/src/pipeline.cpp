#include "denjoy/pipeline.hpp"

#include "denjoy/error.hpp"

namespace denjoy {

SubstitutionAnalysis analyze_substitution(const Substitution& sigma, Theta2Choice choice) {
  SubstitutionAnalysis out;
  out.incidence = incidence_matrix(sigma);
  out.primitivity = is_primitive(sigma);
  if (!out.primitivity.primitive) {
    out.hypotheses.message = "substitution is not primitive";
    return out;
  }
  out.perron = perron_field(out.incidence);
  out.hypotheses = check_hypotheses(*out.perron->field, choice);
  if (out.hypotheses.passed)
    out.gamma = GammaVector::from_eigenvector(out.perron->eigenvector, *out.hypotheses.conj_index);
  return out;
}

LoopAnalysis analyze_loop(const LoopResult& loop, std::size_t radius, Theta2Choice choice, Warnings* warnings) {
  LoopAnalysis out;
  out.loop = loop;
  out.iet = IETExact{loop.perron.eigenvector, loop.base, loop.perron.field->perron_index()};
  out.substitution = analyze_substitution(loop.sigma, choice);
  if (!out.substitution.gamma) throw HypothesisFailure("loop " + loop.path + ": " + out.substitution.hypotheses.message);
  out.minimal = minimal_points(*out.substitution.gamma, loop.sigma, radius, warnings);
  if (out.minimal.candidates.empty()) throw NoCandidate("no verified minimal point for loop " + loop.path);
  return out;
}

DenjoyRun run_denjoy(const LoopAnalysis& analysis, std::size_t atoms, std::size_t n_iter, std::size_t samples,
                     Warnings* warnings) {
  DenjoyRun run;
  run.measure = build_measure(*analysis.substitution.gamma, analysis.minimal.candidates.front(), analysis.loop.sigma,
                              analysis.iet, atoms, warnings);
  run.pushforward = pushforward_residual(run.measure, analysis.iet);
  run.aiet = build_aiet(run.measure, analysis.iet);
  run.wandering = verify_wandering(run.aiet, run.measure, n_iter);
  run.semiconjugacy = verify_semiconjugacy(run.aiet, run.measure, analysis.iet, samples);
  return run;
}

}  // namespace denjoy
