#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "denjoy/error.hpp"
#include "denjoy/strategy.hpp"

namespace denjoy {
namespace {

// Letter contexts (left neighbour, letter, right neighbour) at one level.
using Context = std::tuple<Symbol, Symbol, Symbol>;

// Image of a level-(i+1) context under the level-i triple choice of its
// middle letter.
Context descend(const Substitution& sigma, const Context& ctx, const SplitTriple& t) {
  const auto& [d, c, e] = ctx;
  (void)c;
  const Symbol left = t.prefix.empty() ? sigma.image(d).back() : t.prefix.back();
  const Symbol right = t.suffix.empty() ? sigma.image(e).front() : t.suffix.front();
  return {left, t.center, right};
}

std::vector<Interval> gamma_enclosures(const GammaVector& gamma) {
  std::vector<Interval> enc;
  for (const auto& g : gamma.values) enc.push_back(g.enclose(gamma.root_index));
  return enc;
}

int exact_sign_of_counts(const GammaVector& gamma, const std::vector<long>& counts) {
  FieldElement acc = gamma.field->zero();
  for (std::size_t a = 0; a < counts.size(); ++a)
    if (counts[a]) acc += gamma.values[a] * mpq_class(counts[a]);
  return gamma.sign(acc);
}

double to_double(const Real& x) { return x.convert_to<double>(); }

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  return den == 0 ? 0 : (n * sxy - sx * sy) / den;
}

}  // namespace

WindowCheck verify_minimal_window(const GammaVector& gamma, const DottedWord& w) {
  const auto enc = gamma_enclosures(gamma);
  std::vector<long> counts(gamma.size(), 0);
  WindowCheck out;
  // Forward: γ_n = γ(x_0 ... x_{n-1}).
  Interval acc;
  for (std::int64_t n = 1; n <= w.max_index(); ++n) {
    const Symbol s = w.at(n - 1);
    acc += enc[s];
    ++counts[s];
    int sign = acc.sign();
    if (sign == 0) sign = exact_sign_of_counts(gamma, counts);
    if (sign <= 0) {
      out.violation = n;
      return out;
    }
  }
  // Backward: γ_{-n} = -γ(x_{-n} ... x_{-1}).
  std::fill(counts.begin(), counts.end(), 0);
  acc = Interval();
  for (std::int64_t n = -1; n >= w.min_index(); --n) {
    const Symbol s = w.at(n);
    acc += enc[s];
    ++counts[s];
    int sign = acc.sign();
    if (sign == 0) sign = exact_sign_of_counts(gamma, counts);
    if (sign >= 0) {
      out.violation = n;
      return out;
    }
  }
  out.ok = true;
  return out;
}

std::vector<Real> numeric_partial_sums(const GammaVector& gamma, const DottedWord& w) {
  std::vector<Real> g;
  for (const auto& e : gamma.values) g.push_back(e.value_at(gamma.root_index));
  const std::int64_t lo = w.min_index();
  const std::int64_t hi = w.max_index() + 1;
  std::vector<Real> sums(static_cast<std::size_t>(hi - lo + 1), Real(0));
  for (std::int64_t n = 1; n <= hi; ++n)
    sums[static_cast<std::size_t>(n - lo)] = sums[static_cast<std::size_t>(n - 1 - lo)] + g[w.at(n - 1)];
  for (std::int64_t n = -1; n >= lo; --n)
    sums[static_cast<std::size_t>(n - lo)] = sums[static_cast<std::size_t>(n + 1 - lo)] - g[w.at(n)];
  return sums;
}

MinimalPointsResult minimal_points(const GammaVector& gamma, const Substitution& sigma, std::size_t radius,
                                   Warnings* warnings) {
  MinimalPointsResult result;
  const std::size_t r = sigma.size();
  result.values = solve_value(gamma, sigma, warnings);
  const ValueTable& vt = result.values;

  // Finite-horizon policies agree with the optimal one from the level where
  // the value error bound 2 θ₂^{-(i+1)} ‖v‖ drops below the smallest gap
  // between the best and second-best split values.
  const Real theta2 = gamma.field->root_value(gamma.root_index);
  Real norm_v = 0;
  for (const auto& v : vt.v) norm_v = std::max(norm_v, Real(abs(v.value_at(gamma.root_index))));
  std::optional<Real> gap;
  for (Symbol a = 0; a < r; ++a) {
    for (std::size_t j = 0; j < vt.q[a].size(); ++j) {
      if (j == vt.policy[a]) continue;
      const Real g = (vt.q[a][j] - vt.q[a][vt.policy[a]]).value_at(gamma.root_index);
      if (!gap || g < *gap) gap = g;
    }
  }
  const int cap = static_cast<int>(10 * r);
  int level = 0;
  if (gap && norm_v > 0) {
    const Real slack = Real(1) + pow(Real(2), -64);
    Real bound = 2 * norm_v / theta2;
    while (!(bound * slack < *gap)) {
      ++level;
      bound /= theta2;
      if (level >= cap) break;
    }
    if (!(bound * slack < *gap)) {
      result.level_cap_hit = true;
      if (warnings)
        warnings->push_back({"LevelCapHit", "policy stabilization level exceeds the cap of " +
                                                std::to_string(cap) + " levels"});
    }
  }
  result.stabilization_level = level;
  const BestStrategy bs = best_strategy(gamma, sigma, std::max(level, 0), warnings);
  if (bs.policy.back() != vt.policy && warnings)
    warnings->push_back({"PolicyMismatch", "finite-horizon policy at the stabilization level differs "
                                           "from the optimal policy"});

  // Legal contexts and the optimal-policy map between them.
  const auto three = language(sigma, 3);
  std::vector<Context> contexts;
  std::map<Context, std::size_t> index;
  for (const auto& w : three) {
    index.emplace(Context{w[0], w[1], w[2]}, contexts.size());
    contexts.emplace_back(w[0], w[1], w[2]);
  }
  std::vector<std::size_t> next(contexts.size());
  for (std::size_t k = 0; k < contexts.size(); ++k) {
    const Context img = descend(sigma, contexts[k], vt.triples[std::get<1>(contexts[k])]);
    const auto it = index.find(img);
    if (it == index.end()) throw ConventionMismatch("context image is not a legal factor");
    next[k] = it->second;
  }
  // Contexts on cycles of the map.
  std::vector<char> on_cycle(contexts.size(), 0);
  for (std::size_t k = 0; k < contexts.size(); ++k) {
    std::size_t x = k;
    for (std::size_t step = 0; step < contexts.size(); ++step) x = next[x];
    on_cycle[x] = 1;  // x is now on the cycle reached from k
  }
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t k = 0; k < contexts.size(); ++k)
      if (on_cycle[k] && !on_cycle[next[k]]) on_cycle[next[k]] = grew = true;
  }
  std::vector<std::size_t> prev(contexts.size(), SIZE_MAX);
  for (std::size_t k = 0; k < contexts.size(); ++k)
    if (on_cycle[k]) prev[next[k]] = k;

  std::set<DottedWord> seen;
  for (std::size_t start = 0; start < contexts.size(); ++start) {
    if (!on_cycle[start]) continue;
    // Levels L, L+1, ... walk backwards along the cycle.
    std::vector<std::size_t> cycle{start};
    for (std::size_t x = prev[start]; x != start; x = prev[x]) cycle.push_back(x);

    PrefixSuffixSeq seq;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const std::size_t parent = cycle[(k + 1) % cycle.size()];
      seq.period.push_back(vt.triples[std::get<1>(contexts[parent])]);
      seq.left_anchor.period.push_back(std::get<0>(contexts[cycle[k]]));
      seq.right_anchor.period.push_back(std::get<2>(contexts[cycle[k]]));
    }
    // Levels below L follow the finite-horizon policies.
    std::vector<SplitTriple> head(static_cast<std::size_t>(level));
    std::vector<Symbol> left(static_cast<std::size_t>(level)), right(static_cast<std::size_t>(level));
    Context ctx = contexts[start];
    for (int i = level - 1; i >= 0; --i) {
      const Symbol c = std::get<1>(ctx);
      SplitTriple t = splits(sigma, c)[bs.policy[static_cast<std::size_t>(i)][c]];
      ctx = descend(sigma, ctx, t);
      head[static_cast<std::size_t>(i)] = std::move(t);
      left[static_cast<std::size_t>(i)] = std::get<0>(ctx);
      right[static_cast<std::size_t>(i)] = std::get<2>(ctx);
    }
    seq.head = std::move(head);
    seq.left_anchor.head = std::move(left);
    seq.right_anchor.head = std::move(right);
    seq = normalize(std::move(seq));

    MinimalCandidate cand;
    cand.radius = static_cast<std::int64_t>(radius);
    cand.window = expand(sigma, seq, radius, &cand.expand_info);
    cand.decomposition = std::move(seq);
    if (!seen.insert(cand.window).second) continue;
    const WindowCheck check = verify_minimal_window(gamma, cand.window);
    cand.verified = check.ok;
    if (check.ok) {
      cand.status = "verified on [-" + std::to_string(radius) + ", " + std::to_string(radius) + "]";
      result.candidates.push_back(std::move(cand));
    } else {
      cand.status = "partial sum not positive at n = " + std::to_string(*check.violation);
      result.rejected.push_back(std::move(cand));
    }
  }
  auto by_window = [](const MinimalCandidate& a, const MinimalCandidate& b) { return a.window < b.window; };
  std::sort(result.candidates.begin(), result.candidates.end(), by_window);
  std::sort(result.rejected.begin(), result.rejected.end(), by_window);
  if (result.candidates.empty())
    throw NoCandidate("no policy cycle yields a window with non-negative partial sums (" +
                      std::to_string(result.rejected.size()) + " rejected)");
  return result;
}

std::set<DottedWord> brute_force_minimal(const GammaVector& gamma, const Substitution& sigma, std::size_t radius) {
  std::set<DottedWord> out;
  for (const auto& w : language(sigma, 2 * radius + 1)) {
    DottedWord d{w, static_cast<std::int64_t>(radius)};
    if (verify_minimal_window(gamma, d).ok) out.insert(std::move(d));
  }
  return out;
}

GrowthFit growth_exponent(const GammaVector& gamma, const Substitution& sigma, const MinimalCandidate& candidate,
                          std::size_t n_max) {
  GrowthFit fit;
  fit.n_max = n_max;
  const FieldPtr& field = gamma.field;
  const double theta1 = to_double(field->root_value(field->perron_index()));
  const double theta2 = to_double(field->root_value(gamma.root_index));
  fit.target = std::log(theta2) / std::log(theta1);

  DottedWord window = candidate.window;
  if (window.origin < static_cast<std::int64_t>(n_max) || window.max_index() + 1 < static_cast<std::int64_t>(n_max))
    window = expand(sigma, candidate.decomposition, n_max);
  const auto sums = numeric_partial_sums(gamma, window);
  auto at = [&](std::int64_t n) { return to_double(sums[static_cast<std::size_t>(n - window.min_index())]); };

  const std::size_t n_min = std::max<std::size_t>(1, n_max / 10);
  std::vector<double> xs, fwd, bwd;
  fit.liminf_forward = fit.liminf_backward = INFINITY;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const double f = at(static_cast<std::int64_t>(n));
    const double b = at(-static_cast<std::int64_t>(n));
    xs.push_back(static_cast<double>(n));
    fwd.push_back(f);
    bwd.push_back(b);
    const double scale = std::pow(static_cast<double>(n), fit.target);
    fit.liminf_forward = std::min(fit.liminf_forward, f / scale);
    fit.liminf_backward = std::min(fit.liminf_backward, b / scale);
  }
  fit.slope_forward = loglog_slope(xs, fwd);
  fit.slope_backward = loglog_slope(xs, bwd);
  return fit;
}

TailSums tail_sums(const GammaVector& gamma, const DottedWord& window, std::size_t n) {
  if (window.origin < static_cast<std::int64_t>(n) || window.max_index() < static_cast<std::int64_t>(n))
    throw LengthBudgetExceeded("window too small for the requested tail sums");
  const auto sums = numeric_partial_sums(gamma, window);
  auto at = [&](std::int64_t k) -> const Real& { return sums[static_cast<std::size_t>(k - window.min_index())]; };
  TailSums t;
  t.n = n;
  t.forward = 0;
  t.backward = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    t.forward += exp(-at(static_cast<std::int64_t>(k)));
    t.backward += exp(-at(-static_cast<std::int64_t>(k)));
  }
  t.k = t.forward + 1 + t.backward;
  return t;
}

TailSums tail_sums(const GammaVector& gamma, const Substitution& sigma, const MinimalCandidate& candidate,
                   std::size_t n) {
  if (candidate.window.origin >= static_cast<std::int64_t>(n) && candidate.window.max_index() >= static_cast<std::int64_t>(n))
    return tail_sums(gamma, candidate.window, n);
  return tail_sums(gamma, expand(sigma, candidate.decomposition, n), n);
}

}  // namespace denjoy
