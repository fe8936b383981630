#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "denjoy/rauzy.hpp"
#include "denjoy/real.hpp"
#include "denjoy/strategy.hpp"

namespace denjoy {

// Left endpoint of ∩_{|i| ≤ N} T^{-i}(I_{x_i}) for the window x of radius N.
struct LocatedPoint {
  FieldElement t;
  FieldElement right;  // right end of the intersection
  bool endpoint_orbit = false;
};

LocatedPoint locate_point(const IETExact& iet, const DottedWord& window);

struct Atom {
  Real position;
  Real weight;
  std::int64_t n = 0;  // orbit index: position = T^n(t)
  int label = 0;       // domain interval containing the atom
};

// μ_t truncated to |n| ≤ N: the atom at T^n(t) has mass e^{-γ_n} / K_N.
struct AtomicMeasure {
  std::vector<Atom> atoms;  // by orbit index, atoms[n + N]
  Real k;                   // K_N
  std::size_t truncation = 0;
  FieldElement t;
  bool endpoint_orbit = false;
  // Label j with T^{-N}(t) ∈ T(I_j): where the first atom enters from.
  int entry_label = 0;
  std::vector<Real> gamma_values;  // γ(j) at θ₂, indexed by label - 1

  const Atom& at(std::int64_t n) const { return atoms.at(static_cast<std::size_t>(n + static_cast<std::int64_t>(truncation))); }
  Real total_mass() const;
};

AtomicMeasure build_measure(const GammaVector& gamma, const MinimalCandidate& candidate, const Substitution& sigma,
                            const IETExact& iet, std::size_t n, Warnings* warnings = nullptr);

struct PushforwardResidual {
  int label = 0;
  Real measure;      // μ(I_j)
  Real image_measure;  // μ(T(I_j))
  Real residual;     // |μ(T(I_j)) - e^{-γ_j} μ(I_j)|
  Real bound;        // mass carried across the truncation: w_{-N} + e^{-γ_j} w_N
  Real interior_residual;  // same identity with the two boundary atoms dropped
};

std::vector<PushforwardResidual> pushforward_residual(const AtomicMeasure& mu, const IETExact& iet);

// Affine interval exchange: label j maps [domain_start, +domain_length) onto
// [image_start, +image_length) with slope image_length / domain_length.
struct AIETMap {
  std::vector<Real> breakpoints;        // b_0 = 0 < ... < b_r = 1, in domain order
  std::vector<Real> image_breakpoints;  // b'_0 = 0 < ... < b'_r = 1, in image order
  std::vector<Real> domain_start;       // by label - 1
  std::vector<Real> domain_length;
  std::vector<Real> image_start;
  std::vector<Real> image_length;
  std::vector<Real> slopes;  // by label - 1
  RauzyState state;

  // Label whose domain piece contains u (right-continuous, u in [0, 1)).
  int locate(const Real& u) const;
  Real apply(const Real& u) const;
};

// g(s) = μ([0, s]) as a step function and its plateau-collapsing inverse h.
struct SemiConjugacy {
  std::vector<Real> positions;   // atom positions, increasing
  std::vector<Real> cumulative;  // cumulative[k] = g(positions[k])
  std::vector<std::int64_t> orbit_index;

  Real g(const Real& s) const;
  // Left limit g(s^-).
  Real g_left(const Real& s) const;
  // h(v) = u with g(u^-) ≤ v ≤ g(u).
  Real h(const Real& v) const;
};

struct AIETBuild {
  AIETMap map;
  SemiConjugacy conj;
};

AIETBuild build_aiet(const AtomicMeasure& mu, const IETExact& iet);

struct IntervalPiece {
  Real left;
  Real right;
};

struct WanderingReport {
  // f^k(I) for k = 0..n_iter, each a union of pieces (f may cut at a breakpoint).
  std::vector<std::vector<IntervalPiece>> images;
  std::vector<Real> lengths;
  std::vector<Real> expected_ratio;  // e^{-γ_k}
  Real max_ratio_error;              // relative, over k ≤ min(n_iter, 100)
  Real total_length;
  bool disjoint = true;
  std::optional<std::pair<std::size_t, std::size_t>> overlap;
};

// I = (g(t^-), g(t)], iterated n_iter times. Reports (does not throw) overlaps.
WanderingReport verify_wandering(const AIETBuild& aiet, const AtomicMeasure& mu, std::size_t n_iter);

struct SemiConjugacyReport {
  // max |h(f(u)) - T(h(u))| over the retained grid samples.
  Real sample_residual;
  std::size_t samples = 0;
  std::size_t excluded = 0;
  // max over interior atoms of |f(g(p_n^-)) - g(p_{n+1}^-)|: how far f
  // moves the left edge of a gap from the left edge of the next gap.
  Real edge_residual;
  // max(sample_residual, edge_residual).
  Real residual;
  std::size_t monotonicity_violations = 0;
};

SemiConjugacyReport verify_semiconjugacy(const AIETBuild& aiet, const AtomicMeasure& mu, const IETExact& iet,
                                         std::size_t samples, std::size_t grid = 100000);

}  // namespace denjoy
