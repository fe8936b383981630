#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "denjoy/numfield.hpp"
#include "denjoy/real.hpp"
#include "denjoy/substitution.hpp"

namespace denjoy {

// Non-fatal events surfaced to reports (ties, cap hits, endpoint orbits).
struct Warning {
  std::string kind;
  std::string message;
};
using Warnings = std::vector<Warning>;

// Letter weights γ(a) as field elements, read at the embedding `root_index`.
// For a Perron field, the coordinates are those of λ and the embedding is θ₂,
// so the field generator θ evaluates to θ₂ there.
struct GammaVector {
  FieldPtr field;
  int root_index = 0;
  std::vector<FieldElement> values;

  const FieldElement& operator[](Symbol a) const { return values.at(a); }
  std::size_t size() const { return values.size(); }
  // θ as a field element (θ₂ at the chosen embedding).
  FieldElement theta() const { return field->theta(); }
  int sign(const FieldElement& e) const { return e.sign_at(root_index); }
  int compare(const FieldElement& a, const FieldElement& b) const { return compare_at(a, b, root_index); }

  static GammaVector from_rationals(const std::vector<mpq_class>& weights);
  static GammaVector from_eigenvector(const std::vector<FieldElement>& lambda, int root_index);
};

FieldElement gamma_word(const GammaVector& gamma, const Word& w);

// Partial sums γ_n of a dotted word for n in [min_index, max_index + 1]:
// γ_0 = 0 and γ_{n+1} - γ_n = γ(x_n), so γ_n = -γ(x_n ... x_{-1}) for n < 0.
struct BrokenLine {
  DottedWord base;
  std::vector<FieldElement> sums;  // sums[k] = γ_{k + base.min_index()}
  std::int64_t min_n = 0;          // leftmost index of the minimum
  FieldElement min_value;

  std::int64_t first_n() const { return base.min_index(); }
  std::int64_t last_n() const { return base.max_index() + 1; }
  const FieldElement& at(std::int64_t n) const { return sums.at(static_cast<std::size_t>(n - first_n())); }
};

BrokenLine partial_sums(const GammaVector& gamma, const DottedWord& w);

// Index i with w_i = a minimizing γ_{i+1}(w).
std::size_t best_occurrence(const GammaVector& gamma, const Word& w, Symbol a);

// Split of σ(a) at the leftmost global minimum of its partial sums
// γ_0, ..., γ_{|σ(a)|-1}.
SplitTriple split_argmin(const GammaVector& gamma, const Substitution& sigma, Symbol a);

// Finite-horizon optimal strategies: v_{-1} = 0 and
// v_n(a) = min_j θ₂^{-1} (γ(p_j) + v_{n-1}(c_j)) over the splits j of σ(a).
struct BestStrategy {
  // policy[n][a]: index of the split of σ(a) chosen at horizon n.
  std::vector<std::vector<std::size_t>> policy;
  // values[n][a] = v_n(a).
  std::vector<std::vector<FieldElement>> values;

  int horizon() const { return static_cast<int>(policy.size()) - 1; }
  // Triples (p_i, c_i, s_i), i = 0..n, with σ(c_{i+1}) = p_i c_i s_i and c_{n+1} = a.
  std::vector<SplitTriple> chain(const Substitution& sigma, Symbol a, int n) const;
  // σ^{n+1}(a) with the dot at the position selected by the chain.
  DottedWord central_word(const Substitution& sigma, Symbol a, int n) const;
};

BestStrategy best_strategy(const GammaVector& gamma, const Substitution& sigma, int horizon,
                           Warnings* warnings = nullptr);

// Reverses a finite chain between the descending orientation
// σ(c_i) = p_{i+1} c_{i+1} s_{i+1} and the level orientation
// σ(c_{i+1}) = p_i c_i s_i. The map is an involution.
std::vector<SplitTriple> reverse_chain(const std::vector<SplitTriple>& chain);

struct ValueTable {
  std::vector<FieldElement> v;
  std::vector<std::size_t> policy;  // optimal split index per letter
  std::vector<SplitTriple> triples;
  // q[a][j] = θ₂^{-1}(γ(p_j) + v(c_j)).
  std::vector<std::vector<FieldElement>> q;
  int iterations = 0;
};

// Exact v and an optimal policy by policy iteration.
ValueTable solve_value(const GammaVector& gamma, const Substitution& sigma, Warnings* warnings = nullptr);

// ----------------------------------------------------------- minimal points

struct WindowCheck {
  bool ok = false;
  std::optional<std::int64_t> violation;  // index with γ_n < 0, or γ_n = 0 for n ≠ 0
};

// Checks γ_n ≥ 0 for n in [min_index, max_index] (that is [-N, N] for a
// radius-N window) with equality only at n = 0. The last letter x_N enters
// only γ_{N+1} and is not used.
WindowCheck verify_minimal_window(const GammaVector& gamma, const DottedWord& w);

struct MinimalCandidate {
  PrefixSuffixSeq decomposition;
  DottedWord window;
  std::int64_t radius = 0;
  bool verified = false;
  std::string status;
  ExpandInfo expand_info;
};

struct MinimalPointsResult {
  std::vector<MinimalCandidate> candidates;  // verified, sorted by window
  std::vector<MinimalCandidate> rejected;
  int stabilization_level = 0;
  bool level_cap_hit = false;
  ValueTable values;
};

MinimalPointsResult minimal_points(const GammaVector& gamma, const Substitution& sigma, std::size_t radius,
                                   Warnings* warnings = nullptr);

// All length-(2N+1) factors of the subshift, dotted in the middle, whose
// partial sums are non-negative with minimum 0 at the dot.
std::set<DottedWord> brute_force_minimal(const GammaVector& gamma, const Substitution& sigma, std::size_t radius);

// Real values of γ_n along a window, n in [min_index, max_index + 1].
std::vector<Real> numeric_partial_sums(const GammaVector& gamma, const DottedWord& w);

struct GrowthFit {
  double target = 0;  // log θ₂ / log θ₁
  double slope_forward = 0;
  double slope_backward = 0;
  double liminf_forward = 0;   // min of γ_n / n^target over the fit range
  double liminf_backward = 0;  // same for n → -∞
  std::size_t n_max = 0;
};

GrowthFit growth_exponent(const GammaVector& gamma, const Substitution& sigma, const MinimalCandidate& candidate,
                          std::size_t n_max);

struct TailSums {
  Real k;         // K_N
  Real forward;   // Σ_{n=1}^{N} e^{-γ_n}
  Real backward;  // Σ_{n=1}^{N} e^{-γ_{-n}}
  std::size_t n = 0;
};

TailSums tail_sums(const GammaVector& gamma, const Substitution& sigma, const MinimalCandidate& candidate,
                   std::size_t n);
// Same, from an already expanded window (radius ≥ n).
TailSums tail_sums(const GammaVector& gamma, const DottedWord& window, std::size_t n);

}  // namespace denjoy
