#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "denjoy/aiet.hpp"
#include "denjoy/numfield.hpp"
#include "denjoy/rauzy.hpp"
#include "denjoy/strategy.hpp"

namespace denjoy {

using nlohmann::json;

// "p/q", always with a denominator.
std::string rational_string(const mpq_class& q);
// 30 significant digits.
std::string real_string(const Real& x);

json to_json(const FieldElement& e);
json to_json(const IntPolynomial& p);
json to_json(const IntMatrix& m);
json to_json(const HypothesisReport& report);
json to_json(const Warnings& warnings);

json triple_json(const Alphabet& alphabet, const SplitTriple& t);
json candidate_json(const Alphabet& alphabet, const GammaVector& gamma, const MinimalCandidate& c);
json value_table_json(const Alphabet& alphabet, const GammaVector& gamma, const ValueTable& vt);
json growth_json(const GrowthFit& fit);

// Golden-file record of a loop.
json loop_json(const LoopResult& loop);

json aiet_json(const AIETBuild& aiet, const AtomicMeasure& mu, const WanderingReport& wandering,
               const SemiConjugacyReport& semi);

// "n,gamma_n" for n in [-n_max, n_max].
std::string broken_line_csv(const GammaVector& gamma, const DottedWord& window, std::size_t n_max);
// "k,left,right,length" per forward image (hull of the pieces).
std::string orbit_csv(const WanderingReport& wandering);

}  // namespace denjoy
