#include "denjoy/serialize.hpp"

#include <sstream>

#include "denjoy/error.hpp"

namespace denjoy {

std::string rational_string(const mpq_class& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

std::string real_string(const Real& x) { return to_decimal(x, 30); }

json to_json(const FieldElement& e) {
  json coords = json::array();
  for (const auto& c : e.coords()) coords.push_back(rational_string(c));
  return {{"coords", coords}};
}

json to_json(const IntPolynomial& p) {
  json coeffs = json::array();
  for (const auto& c : p.coefficients()) coeffs.push_back(c.get_str());
  return {{"coefficients", coeffs}, {"text", p.to_string()}};
}

json to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_si());
    rows.push_back(row);
  }
  return rows;
}

json to_json(const HypothesisReport& report) {
  json conj = json::array();
  for (const auto& c : report.conjugates)
    conj.push_back({{"root_index", c.root_index}, {"value", real_string(c.approx)}, {"in_range", c.in_range}});
  json out = {{"passed", report.passed},
              {"failing_condition", report.failing_condition},
              {"real_conjugates", conj},
              {"message", report.message}};
  out["conj_index"] = report.conj_index ? json(*report.conj_index) : json(nullptr);
  return out;
}

json to_json(const Warnings& warnings) {
  json out = json::array();
  for (const auto& w : warnings) out.push_back({{"kind", w.kind}, {"message", w.message}});
  return out;
}

json triple_json(const Alphabet& alphabet, const SplitTriple& t) {
  return {{"p", alphabet.format(t.prefix)}, {"c", alphabet.name(t.center)}, {"s", alphabet.format(t.suffix)}};
}

json candidate_json(const Alphabet& alphabet, const GammaVector& gamma, const MinimalCandidate& c) {
  json head = json::array();
  json period = json::array();
  for (const auto& t : c.decomposition.head) head.push_back(triple_json(alphabet, t));
  for (const auto& t : c.decomposition.period) period.push_back(triple_json(alphabet, t));
  const std::int64_t shown = std::min<std::int64_t>(c.radius, 20);
  json out = {{"head", head},
              {"period", period},
              {"verified", c.verified},
              {"status", c.status},
              {"verification_radius", c.radius},
              {"central_window", format_dotted(alphabet, c.window.restrict(shown))},
              {"left_completed_by_anchor", c.expand_info.left_completed_by_anchor},
              {"right_completed_by_anchor", c.expand_info.right_completed_by_anchor}};
  const auto sums = numeric_partial_sums(gamma, c.window.restrict(shown));
  json gammas = json::array();
  for (std::int64_t n = -shown; n <= shown; ++n)
    gammas.push_back({{"n", n}, {"gamma_n", real_string(sums[static_cast<std::size_t>(n + shown)])}});
  out["broken_line_sample"] = gammas;
  return out;
}

json value_table_json(const Alphabet& alphabet, const GammaVector& gamma, const ValueTable& vt) {
  json rows = json::array();
  for (std::size_t a = 0; a < vt.v.size(); ++a)
    rows.push_back({{"letter", alphabet.name(static_cast<Symbol>(a))},
                    {"v", to_json(vt.v[a])},
                    {"v_decimal", real_string(vt.v[a].value_at(gamma.root_index))},
                    {"policy", triple_json(alphabet, vt.triples[a])}});
  return {{"rows", rows}, {"policy_iterations", vt.iterations}};
}

json growth_json(const GrowthFit& fit) {
  return {{"target", fit.target},
          {"slope_forward", fit.slope_forward},
          {"slope_backward", fit.slope_backward},
          {"liminf_forward", fit.liminf_forward},
          {"liminf_backward", fit.liminf_backward},
          {"n_max", fit.n_max}};
}

json loop_json(const LoopResult& loop) {
  const auto& field = *loop.perron.field;
  json out = {{"permutation", loop.base.permutation().to_string()},
              {"path", loop.path},
              {"R", to_json(loop.r)},
              {"min_poly", to_json(field.min_poly())},
              {"theta1", real_string(field.root_value(field.perron_index()))},
              {"hypotheses", to_json(loop.hypotheses)},
              {"substitution", loop.sigma.print()}};
  out["theta2"] = loop.hypotheses.conj_index ? json(real_string(field.root_value(*loop.hypotheses.conj_index)))
                                             : json(nullptr);
  json lambda = json::array();
  for (const auto& x : loop.perron.eigenvector) lambda.push_back(to_json(x));
  out["lambda"] = lambda;
  return out;
}

json aiet_json(const AIETBuild& aiet, const AtomicMeasure& mu, const WanderingReport& wandering,
               const SemiConjugacyReport& semi) {
  auto reals = [](const std::vector<Real>& xs) {
    json a = json::array();
    for (const auto& x : xs) a.push_back(real_string(x));
    return a;
  };
  json lengths = json::array();
  for (std::size_t k = 0; k < wandering.lengths.size(); ++k)
    lengths.push_back({{"k", k},
                       {"length", real_string(wandering.lengths[k])},
                       {"expected_ratio", real_string(wandering.expected_ratio[k])}});
  json out = {{"breakpoints", reals(aiet.map.breakpoints)},
              {"image_breakpoints", reals(aiet.map.image_breakpoints)},
              {"slopes", reals(aiet.map.slopes)},
              {"gamma", reals(mu.gamma_values)},
              {"K_N", real_string(mu.k)},
              {"atoms_per_side", mu.truncation},
              {"t", to_json(mu.t)},
              {"t_decimal", real_string(mu.atoms.at(mu.truncation).position)}};
  json w = {{"disjoint", wandering.disjoint},
            {"total_length", real_string(wandering.total_length)},
            {"max_ratio_error", real_string(wandering.max_ratio_error)},
            {"lengths", lengths}};
  w["overlap"] = wandering.overlap ? json({wandering.overlap->first, wandering.overlap->second}) : json(nullptr);
  out["wandering"] = w;
  out["semiconjugacy"] = {{"sample_residual", real_string(semi.sample_residual)},
                          {"edge_residual", real_string(semi.edge_residual)},
                          {"residual", real_string(semi.residual)},
                          {"samples", semi.samples},
                          {"excluded", semi.excluded},
                          {"monotonicity_violations", semi.monotonicity_violations}};
  return out;
}

std::string broken_line_csv(const GammaVector& gamma, const DottedWord& window, std::size_t n_max) {
  const auto radius = static_cast<std::int64_t>(n_max);
  if (window.origin < radius || window.max_index() + 1 < radius)
    throw LengthBudgetExceeded("window too small for the broken line export");
  const auto sums = numeric_partial_sums(gamma, window);
  std::ostringstream out;
  out << "n,gamma_n\n";
  for (std::int64_t n = -radius; n <= radius; ++n)
    out << n << ',' << real_string(sums[static_cast<std::size_t>(n - window.min_index())]) << '\n';
  return out.str();
}

std::string orbit_csv(const WanderingReport& wandering) {
  std::ostringstream out;
  out << "k,left,right,length\n";
  for (std::size_t k = 0; k < wandering.images.size(); ++k) {
    const auto& pieces = wandering.images[k];
    if (pieces.empty()) continue;
    Real lo = pieces.front().left;
    Real hi = pieces.front().right;
    for (const auto& p : pieces) {
      lo = std::min(lo, p.left);
      hi = std::max(hi, p.right);
    }
    out << k << ',' << real_string(lo) << ',' << real_string(hi) << ',' << real_string(wandering.lengths[k]) << '\n';
  }
  return out.str();
}

}  // namespace denjoy
