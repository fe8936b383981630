#include "denjoy/strategy.hpp"

#include <algorithm>

#include "denjoy/error.hpp"

namespace denjoy {
namespace {

void warn(Warnings* warnings, const std::string& kind, const std::string& message) {
  if (!warnings) return;
  for (const auto& w : *warnings)
    if (w.kind == kind && w.message == message) return;
  warnings->push_back({kind, message});
}

// Leftmost argmin of values[j] at the γ embedding. Equal values for two
// splits with the same centre contradict the algebraic hypothesis; equal
// values across different centres are resolved leftmost and reported.
std::size_t argmin_splits(const GammaVector& gamma, const std::vector<FieldElement>& values,
                          const std::vector<SplitTriple>& split_list, Warnings* warnings,
                          const std::string& context) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < values.size(); ++j)
    if (gamma.compare(values[j], values[best]) < 0) best = j;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j == best || values[j] != values[best]) continue;
    if (split_list[j].center == split_list[best].center)
      throw TieDetected(context + ": two splits with the same centre have equal value");
    if (j < best) best = j;
    warn(warnings, "TieDetected", context + ": equal values for splits with different centres, leftmost kept");
  }
  return best;
}

}  // namespace

GammaVector GammaVector::from_rationals(const std::vector<mpq_class>& weights) {
  GammaVector g;
  g.field = NumberField::rationals();
  g.root_index = 0;
  for (const auto& w : weights) g.values.push_back(g.field->from_rational(w));
  return g;
}

GammaVector GammaVector::from_eigenvector(const std::vector<FieldElement>& lambda, int root_index) {
  if (lambda.empty()) throw FieldMismatch("empty eigenvector");
  GammaVector g;
  g.field = lambda.front().field();
  g.root_index = root_index;
  g.values = lambda;
  return g;
}

FieldElement gamma_word(const GammaVector& gamma, const Word& w) {
  std::vector<long> counts(gamma.size(), 0);
  for (Symbol a : w) ++counts.at(a);
  FieldElement acc = gamma.field->zero();
  for (std::size_t a = 0; a < counts.size(); ++a)
    if (counts[a]) acc += gamma.values[a] * mpq_class(counts[a]);
  return acc;
}

BrokenLine partial_sums(const GammaVector& gamma, const DottedWord& w) {
  BrokenLine line;
  line.base = w;
  const std::int64_t lo = w.min_index();
  const std::int64_t hi = w.max_index() + 1;
  line.sums.assign(static_cast<std::size_t>(hi - lo + 1), gamma.field->zero());
  for (std::int64_t n = 1; n <= hi; ++n)
    line.sums[static_cast<std::size_t>(n - lo)] = line.sums[static_cast<std::size_t>(n - 1 - lo)] + gamma[w.at(n - 1)];
  for (std::int64_t n = -1; n >= lo; --n)
    line.sums[static_cast<std::size_t>(n - lo)] = line.sums[static_cast<std::size_t>(n + 1 - lo)] - gamma[w.at(n)];
  std::size_t best = 0;
  for (std::size_t k = 1; k < line.sums.size(); ++k)
    if (gamma.compare(line.sums[k], line.sums[best]) < 0) best = k;
  line.min_n = static_cast<std::int64_t>(best) + lo;
  line.min_value = line.sums[best];
  return line;
}

std::size_t best_occurrence(const GammaVector& gamma, const Word& w, Symbol a) {
  std::optional<std::size_t> best;
  FieldElement best_value;
  FieldElement acc = gamma.field->zero();
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += gamma[w[i]];
    if (w[i] != a) continue;
    if (!best) {
      best = i;
      best_value = acc;
      continue;
    }
    const int c = gamma.compare(acc, best_value);
    if (c == 0) throw TieDetected("two occurrences of the symbol have equal partial sums");
    if (c < 0) {
      best = i;
      best_value = acc;
    }
  }
  if (!best) throw SymbolAbsent("symbol does not occur in the word");
  return *best;
}

SplitTriple split_argmin(const GammaVector& gamma, const Substitution& sigma, Symbol a) {
  const Word& img = sigma.image(a);
  std::size_t best = 0;
  FieldElement best_value = gamma.field->zero();
  FieldElement acc = gamma.field->zero();
  for (std::size_t i = 1; i < img.size(); ++i) {
    acc += gamma[img[i - 1]];
    if (gamma.compare(acc, best_value) < 0) {
      best = i;
      best_value = acc;
    }
  }
  return splits(sigma, a)[best];
}

std::vector<SplitTriple> BestStrategy::chain(const Substitution& sigma, Symbol a, int n) const {
  std::vector<SplitTriple> out(static_cast<std::size_t>(n + 1));
  Symbol parent = a;
  for (int level = n; level >= 0; --level) {
    const auto& choice = policy.at(static_cast<std::size_t>(level));
    SplitTriple t = splits(sigma, parent)[choice[parent]];
    parent = t.center;
    out[static_cast<std::size_t>(level)] = std::move(t);
  }
  return out;
}

DottedWord BestStrategy::central_word(const Substitution& sigma, Symbol a, int n) const {
  const auto triples = chain(sigma, a, n);
  DottedWord out;
  out.symbols = iterate(sigma, Word{a}, n + 1);
  const auto lengths = length_table(sigma, n);
  std::uint64_t origin = 0;
  for (int i = 0; i <= n; ++i)
    for (Symbol b : triples[static_cast<std::size_t>(i)].prefix) origin += lengths[static_cast<std::size_t>(i)][b];
  out.origin = static_cast<std::int64_t>(origin);
  return out;
}

BestStrategy best_strategy(const GammaVector& gamma, const Substitution& sigma, int horizon, Warnings* warnings) {
  BestStrategy bs;
  const std::size_t r = sigma.size();
  const FieldElement theta_inv = gamma.theta().inverse();
  std::vector<std::vector<SplitTriple>> all_splits;
  std::vector<std::vector<FieldElement>> prefix_gamma;
  for (Symbol a = 0; a < r; ++a) {
    all_splits.push_back(splits(sigma, a));
    std::vector<FieldElement> g;
    for (const auto& t : all_splits.back()) g.push_back(gamma_word(gamma, t.prefix));
    prefix_gamma.push_back(std::move(g));
  }
  std::vector<FieldElement> prev(r, gamma.field->zero());  // v_{-1}
  for (int n = 0; n <= horizon; ++n) {
    std::vector<std::size_t> choice(r);
    std::vector<FieldElement> values(r);
    for (Symbol a = 0; a < r; ++a) {
      std::vector<FieldElement> q;
      for (std::size_t j = 0; j < all_splits[a].size(); ++j)
        q.push_back(theta_inv * (prefix_gamma[a][j] + prev[all_splits[a][j].center]));
      choice[a] = argmin_splits(gamma, q, all_splits[a], warnings,
                                "horizon " + std::to_string(n) + ", letter " + sigma.alphabet().name(a));
      values[a] = q[choice[a]];
    }
    bs.policy.push_back(choice);
    bs.values.push_back(values);
    prev = std::move(values);
  }
  return bs;
}

std::vector<SplitTriple> reverse_chain(const std::vector<SplitTriple>& chain) {
  return std::vector<SplitTriple>(chain.rbegin(), chain.rend());
}

ValueTable solve_value(const GammaVector& gamma, const Substitution& sigma, Warnings* warnings) {
  const std::size_t r = sigma.size();
  const FieldPtr& field = gamma.field;
  const FieldElement theta = gamma.theta();
  const FieldElement theta_inv = theta.inverse();
  std::vector<std::vector<SplitTriple>> all_splits;
  std::vector<std::vector<FieldElement>> prefix_gamma;
  for (Symbol a = 0; a < r; ++a) {
    all_splits.push_back(splits(sigma, a));
    std::vector<FieldElement> g;
    for (const auto& t : all_splits.back()) g.push_back(gamma_word(gamma, t.prefix));
    prefix_gamma.push_back(std::move(g));
  }

  // Solves (θ I - P) v = g for the policy's transition P and reward g.
  auto evaluate = [&](const std::vector<std::size_t>& policy) {
    std::vector<std::vector<FieldElement>> a(r, std::vector<FieldElement>(r + 1, field->zero()));
    for (Symbol x = 0; x < r; ++x) {
      a[x][x] += theta;
      a[x][all_splits[x][policy[x]].center] -= field->one();
      a[x][r] = prefix_gamma[x][policy[x]];
    }
    for (std::size_t c = 0; c < r; ++c) {
      std::size_t piv = c;
      while (piv < r && a[piv][c].is_zero()) ++piv;
      if (piv == r) throw DivisionByZero("policy evaluation system is singular");
      std::swap(a[c], a[piv]);
      const FieldElement inv = a[c][c].inverse();
      for (std::size_t k = c; k <= r; ++k) a[c][k] *= inv;
      for (std::size_t row = 0; row < r; ++row) {
        if (row == c || a[row][c].is_zero()) continue;
        const FieldElement f = a[row][c];
        for (std::size_t k = c; k <= r; ++k) a[row][k] -= f * a[c][k];
      }
    }
    std::vector<FieldElement> v;
    for (std::size_t x = 0; x < r; ++x) v.push_back(a[x][r]);
    return v;
  };

  auto q_values = [&](const std::vector<FieldElement>& v) {
    std::vector<std::vector<FieldElement>> q(r);
    for (Symbol x = 0; x < r; ++x)
      for (std::size_t j = 0; j < all_splits[x].size(); ++j)
        q[x].push_back(theta_inv * (prefix_gamma[x][j] + v[all_splits[x][j].center]));
    return q;
  };

  ValueTable vt;
  vt.policy.assign(r, 0);  // empty prefix everywhere: v = 0
  for (;;) {
    ++vt.iterations;
    vt.v = evaluate(vt.policy);
    vt.q = q_values(vt.v);
    bool improved = false;
    for (Symbol x = 0; x < r; ++x) {
      std::size_t best = vt.policy[x];
      for (std::size_t j = 0; j < vt.q[x].size(); ++j)
        if (gamma.compare(vt.q[x][j], vt.q[x][best]) < 0) best = j;
      if (best != vt.policy[x]) {
        vt.policy[x] = best;
        improved = true;
      }
    }
    if (!improved) break;
  }
  // Canonical representative among optimal splits: the leftmost.
  for (Symbol x = 0; x < r; ++x)
    vt.policy[x] = argmin_splits(gamma, vt.q[x], all_splits[x], warnings,
                                 "value table, letter " + sigma.alphabet().name(x));
  for (Symbol x = 0; x < r; ++x) vt.triples.push_back(all_splits[x][vt.policy[x]]);
  return vt;
}

}  // namespace denjoy
