#include "denjoy/aiet.hpp"

#include <algorithm>
#include <numeric>

#include "denjoy/error.hpp"

namespace denjoy {
namespace {

struct HalfOpen {
  FieldElement lo;
  FieldElement hi;
};

HalfOpen intersect(const HalfOpen& a, const HalfOpen& b, int root) {
  HalfOpen out{compare_at(a.lo, b.lo, root) >= 0 ? a.lo : b.lo, compare_at(a.hi, b.hi, root) <= 0 ? a.hi : b.hi};
  if (compare_at(out.lo, out.hi, root) >= 0) throw CodingMismatch("the window is not the coding of any point");
  return out;
}

// T(x) = x + shifts[j - 1] on the domain interval of label j.
std::vector<FieldElement> translation_vector(const IETExact& iet) {
  std::vector<FieldElement> shift;
  for (std::size_t l = 1; l <= iet.lambda.size(); ++l)
    shift.push_back(iet.bottom_start(static_cast<int>(l)) - iet.top_start(static_cast<int>(l)));
  return shift;
}

HalfOpen domain_interval(const IETExact& iet, int label) {
  FieldElement lo = iet.top_start(label);
  FieldElement hi = lo + iet.lambda[static_cast<std::size_t>(label - 1)];
  return {std::move(lo), std::move(hi)};
}

std::int64_t window_radius(const DottedWord& w) { return std::min(w.origin, w.max_index()); }

}  // namespace

LocatedPoint locate_point(const IETExact& iet, const DottedWord& window) {
  const std::int64_t radius = window_radius(window);
  if (radius < 0) throw CodingMismatch("empty window");
  const int root = iet.root_index;
  const auto shift = translation_vector(iet);
  auto label = [&](std::int64_t n) { return static_cast<int>(window.at(n)) + 1; };

  // Forward: points whose orbit follows x_0 ... x_radius.
  HalfOpen s = domain_interval(iet, label(radius));
  for (std::int64_t i = radius - 1; i >= 0; --i) {
    const auto& sh = shift[static_cast<std::size_t>(label(i) - 1)];
    s = intersect(domain_interval(iet, label(i)), {s.lo - sh, s.hi - sh}, root);
  }
  // Backward: points whose preimages follow x_{-1} ... x_{-radius}.
  if (radius >= 1) {
    HalfOpen u = domain_interval(iet, label(-radius));
    for (std::int64_t i = radius; i >= 1; --i) {
      if (i != radius) u = intersect(domain_interval(iet, label(-i)), u, root);
      const auto& sh = shift[static_cast<std::size_t>(label(-i) - 1)];
      u = {u.lo + sh, u.hi + sh};
    }
    s = intersect(s, u, root);
  }
  LocatedPoint out;
  out.t = s.lo;
  out.right = s.hi;
  return out;
}

Real AtomicMeasure::total_mass() const {
  Real sum = 0;
  for (const auto& a : atoms) sum += a.weight;
  return sum;
}

AtomicMeasure build_measure(const GammaVector& gamma, const MinimalCandidate& candidate, const Substitution& sigma,
                            const IETExact& iet, std::size_t n, Warnings* warnings) {
  const auto radius = static_cast<std::int64_t>(n);
  const DottedWord window = window_radius(candidate.window) >= radius
                                ? candidate.window.restrict(radius)
                                : expand(sigma, candidate.decomposition, n);
  const LocatedPoint located = locate_point(iet, window);
  const auto shift = translation_vector(iet);

  AtomicMeasure mu;
  mu.truncation = n;
  mu.t = located.t;
  for (const auto& g : gamma.values) mu.gamma_values.push_back(g.value_at(gamma.root_index));

  std::vector<FieldElement> exact(2 * n + 1);
  exact[n] = located.t;
  for (std::int64_t i = 0; i < radius; ++i)
    exact[static_cast<std::size_t>(radius + i + 1)] =
        exact[static_cast<std::size_t>(radius + i)] + shift[window.at(i)];
  for (std::int64_t i = -1; i >= -radius; --i)
    exact[static_cast<std::size_t>(radius + i)] = exact[static_cast<std::size_t>(radius + i + 1)] - shift[window.at(i)];
  mu.entry_label = iet.locate_image(exact.front());

  const auto sums = numeric_partial_sums(gamma, window);
  auto gamma_n = [&](std::int64_t k) -> const Real& { return sums[static_cast<std::size_t>(k + radius)]; };
  Real k_sum = 0;
  for (std::int64_t i = -radius; i <= radius; ++i) k_sum += exp(-gamma_n(i));
  mu.k = k_sum;

  for (std::int64_t i = -radius; i <= radius; ++i) {
    const auto& x = exact[static_cast<std::size_t>(i + radius)];
    Atom a;
    a.position = x.value_at(iet.root_index);
    a.weight = exp(-gamma_n(i)) / k_sum;
    a.n = i;
    a.label = static_cast<int>(window.at(i)) + 1;
    mu.atoms.push_back(std::move(a));
  }
  // The left end of a cylinder is an orbit point of a breakpoint, so a hit
  // here is expected; only an intersection of zero length is reported.
  if (compare_at(located.t, located.right, iet.root_index) == 0) {
    mu.endpoint_orbit = true;
    if (warnings) warnings->push_back({"EndpointOrbit", "the coding cylinder of t has zero length"});
  }

  std::vector<std::size_t> order(mu.atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return mu.atoms[a].position < mu.atoms[b].position; });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (mu.atoms[order[k]].position == mu.atoms[order[k - 1]].position &&
        exact[order[k]] == exact[order[k - 1]])
      throw AtomCollision("orbit points " + std::to_string(mu.atoms[order[k - 1]].n) + " and " +
                          std::to_string(mu.atoms[order[k]].n) + " coincide");
  return mu;
}

std::vector<PushforwardResidual> pushforward_residual(const AtomicMeasure& mu, const IETExact& iet) {
  const std::size_t r = iet.lambda.size();
  const auto radius = static_cast<std::int64_t>(mu.truncation);
  std::vector<PushforwardResidual> out(r);
  std::vector<Real> interior_image(r, Real(0)), interior_domain(r, Real(0));
  for (std::size_t j = 0; j < r; ++j) {
    out[j].label = static_cast<int>(j) + 1;
    out[j].measure = 0;
    out[j].image_measure = 0;
  }
  for (std::int64_t i = -radius; i <= radius; ++i) {
    const Atom& a = mu.at(i);
    const auto j = static_cast<std::size_t>(a.label - 1);
    out[j].measure += a.weight;
    if (i < radius) {
      interior_domain[j] += a.weight;
      const Atom& next = mu.at(i + 1);
      out[j].image_measure += next.weight;
      interior_image[j] += next.weight;
    }
  }
  out[static_cast<std::size_t>(mu.entry_label - 1)].image_measure += mu.at(-radius).weight;
  for (std::size_t j = 0; j < r; ++j) {
    const Real slope = exp(-mu.gamma_values[j]);
    out[j].residual = abs(out[j].image_measure - slope * out[j].measure);
    out[j].bound = mu.at(-radius).weight + slope * mu.at(radius).weight;
    out[j].interior_residual = abs(interior_image[j] - slope * interior_domain[j]);
  }
  return out;
}

int AIETMap::locate(const Real& u) const {
  std::size_t pos = 0;
  while (pos + 1 < state.top.size() && breakpoints[pos + 1] <= u) ++pos;
  return state.top[pos];
}

Real AIETMap::apply(const Real& u) const {
  const auto j = static_cast<std::size_t>(locate(u) - 1);
  return image_start[j] + slopes[j] * (u - domain_start[j]);
}

Real SemiConjugacy::g(const Real& s) const {
  const auto it = std::upper_bound(positions.begin(), positions.end(), s);
  if (it == positions.begin()) return Real(0);
  return cumulative[static_cast<std::size_t>(it - positions.begin()) - 1];
}

Real SemiConjugacy::g_left(const Real& s) const {
  const auto it = std::lower_bound(positions.begin(), positions.end(), s);
  if (it == positions.begin()) return Real(0);
  return cumulative[static_cast<std::size_t>(it - positions.begin()) - 1];
}

Real SemiConjugacy::h(const Real& v) const {
  const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), v);
  if (it == cumulative.end()) return positions.back();
  return positions[static_cast<std::size_t>(it - cumulative.begin())];
}

AIETBuild build_aiet(const AtomicMeasure& mu, const IETExact& iet) {
  const auto residuals = pushforward_residual(mu, iet);
  const std::size_t r = iet.lambda.size();
  AIETBuild out;
  AIETMap& f = out.map;
  f.state = iet.state;
  f.domain_start.assign(r, Real(0));
  f.image_start.assign(r, Real(0));
  f.domain_length.assign(r, Real(0));
  f.image_length.assign(r, Real(0));
  f.slopes.assign(r, Real(0));
  for (std::size_t j = 0; j < r; ++j) {
    f.domain_length[j] = residuals[j].measure;
    f.image_length[j] = residuals[j].image_measure;
    if (f.domain_length[j] == 0 || f.image_length[j] == 0)
      throw DegenerateInterval("interval " + std::to_string(j + 1) + " carries no atom; increase the truncation");
    f.slopes[j] = f.image_length[j] / f.domain_length[j];
  }
  f.breakpoints.push_back(Real(0));
  for (int label : iet.state.top) {
    const auto j = static_cast<std::size_t>(label - 1);
    f.domain_start[j] = f.breakpoints.back();
    f.breakpoints.push_back(f.breakpoints.back() + f.domain_length[j]);
  }
  f.image_breakpoints.push_back(Real(0));
  for (int label : iet.state.bottom) {
    const auto j = static_cast<std::size_t>(label - 1);
    f.image_start[j] = f.image_breakpoints.back();
    f.image_breakpoints.push_back(f.image_breakpoints.back() + f.image_length[j]);
  }

  SemiConjugacy& c = out.conj;
  std::vector<const Atom*> sorted;
  for (const auto& a : mu.atoms) sorted.push_back(&a);
  std::sort(sorted.begin(), sorted.end(), [](const Atom* a, const Atom* b) { return a->position < b->position; });
  Real acc = 0;
  for (const Atom* a : sorted) {
    acc += a->weight;
    c.positions.push_back(a->position);
    c.cumulative.push_back(acc);
    c.orbit_index.push_back(a->n);
  }
  return out;
}

namespace {

std::vector<IntervalPiece> apply_to_pieces(const AIETMap& f, const std::vector<IntervalPiece>& pieces) {
  std::vector<IntervalPiece> out;
  for (const auto& p : pieces) {
    Real lo = p.left;
    for (std::size_t pos = 0; pos < f.state.top.size(); ++pos) {
      const Real& b0 = f.breakpoints[pos];
      const Real& b1 = f.breakpoints[pos + 1];
      const Real l = std::max(lo, b0);
      const Real r = std::min(p.right, b1);
      if (!(l < r)) continue;
      const auto j = static_cast<std::size_t>(f.state.top[pos] - 1);
      const Real fl = f.image_start[j] + f.slopes[j] * (l - f.domain_start[j]);
      out.push_back({fl, fl + f.slopes[j] * (r - l)});
    }
  }
  std::sort(out.begin(), out.end(), [](const IntervalPiece& a, const IntervalPiece& b) { return a.left < b.left; });
  return out;
}

}  // namespace

WanderingReport verify_wandering(const AIETBuild& aiet, const AtomicMeasure& mu, std::size_t n_iter) {
  const SemiConjugacy& c = aiet.conj;
  const auto it = std::find(c.orbit_index.begin(), c.orbit_index.end(), 0);
  const auto k0 = static_cast<std::size_t>(it - c.orbit_index.begin());
  WanderingReport rep;
  rep.images.push_back({{k0 == 0 ? Real(0) : c.cumulative[k0 - 1], c.cumulative[k0]}});
  for (std::size_t k = 1; k <= n_iter; ++k) rep.images.push_back(apply_to_pieces(aiet.map, rep.images.back()));

  rep.total_length = 0;
  rep.max_ratio_error = 0;
  const Real& weight0 = mu.at(0).weight;
  for (std::size_t k = 0; k <= n_iter; ++k) {
    Real len = 0;
    for (const auto& p : rep.images[k]) len += p.right - p.left;
    rep.lengths.push_back(len);
    rep.total_length += len;
    const auto kk = static_cast<std::int64_t>(k);
    const Real expected = kk <= static_cast<std::int64_t>(mu.truncation) ? mu.at(kk).weight / weight0 : Real(0);
    rep.expected_ratio.push_back(expected);
    if (k <= 100 && expected > 0) {
      const Real err = abs(len / rep.lengths.front() - expected) / expected;
      rep.max_ratio_error = std::max(rep.max_ratio_error, err);
    }
  }

  struct Tagged {
    IntervalPiece piece;
    std::size_t k;
  };
  std::vector<Tagged> all;
  for (std::size_t k = 0; k <= n_iter; ++k)
    for (const auto& p : rep.images[k]) all.push_back({p, k});
  std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.piece.left < b.piece.left; });
  // Pieces are half-open (left, right]; touching endpoints do not overlap.
  Real max_right = 0;
  std::size_t max_k = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i > 0 && all[i].piece.left < max_right && all[i].k != max_k) {
      rep.disjoint = false;
      if (!rep.overlap) rep.overlap = std::make_pair(std::min(max_k, all[i].k), std::max(max_k, all[i].k));
    }
    if (i == 0 || all[i].piece.right > max_right) {
      max_right = all[i].piece.right;
      max_k = all[i].k;
    }
  }
  return rep;
}

SemiConjugacyReport verify_semiconjugacy(const AIETBuild& aiet, const AtomicMeasure& mu, const IETExact& iet,
                                         std::size_t samples, std::size_t grid) {
  (void)iet;
  const SemiConjugacy& c = aiet.conj;
  const AIETMap& f = aiet.map;
  const auto radius = static_cast<std::int64_t>(mu.truncation);
  SemiConjugacyReport rep;
  rep.sample_residual = 0;
  rep.edge_residual = 0;
  rep.samples = samples;

  auto sorted_index = [&](const Real& v) {
    const auto it = std::lower_bound(c.cumulative.begin(), c.cumulative.end(), v);
    return it == c.cumulative.end() ? c.cumulative.size() - 1 : static_cast<std::size_t>(it - c.cumulative.begin());
  };
  for (std::size_t s = 0; s < samples; ++s) {
    const Real u = (Real(s) + Real(0.5)) / Real(samples);
    const std::size_t k = sorted_index(u);
    const std::int64_t n = c.orbit_index[k];
    // T of the last atom is not an atom of the truncated measure.
    if (n == radius) {
      ++rep.excluded;
      continue;
    }
    const Real lhs = c.h(f.apply(u));
    const Real& rhs = mu.at(n + 1).position;
    rep.sample_residual = std::max(rep.sample_residual, Real(abs(lhs - rhs)));
  }

  std::vector<Real> left_edge(mu.atoms.size());
  for (std::size_t k = 0; k < c.positions.size(); ++k)
    left_edge[static_cast<std::size_t>(c.orbit_index[k] + radius)] = k == 0 ? Real(0) : c.cumulative[k - 1];
  for (std::int64_t n = -radius; n < radius; ++n) {
    const Atom& a = mu.at(n);
    const auto j = static_cast<std::size_t>(a.label - 1);
    const Real& u = left_edge[static_cast<std::size_t>(n + radius)];
    const Real fu = f.image_start[j] + f.slopes[j] * (u - f.domain_start[j]);
    rep.edge_residual = std::max(rep.edge_residual, Real(abs(fu - left_edge[static_cast<std::size_t>(n + 1 + radius)])));
  }
  rep.residual = std::max(rep.sample_residual, rep.edge_residual);

  Real prev = c.h(Real(0));
  for (std::size_t s = 1; s <= grid; ++s) {
    const Real cur = c.h(Real(s) / Real(grid));
    if (cur < prev) ++rep.monotonicity_violations;
    prev = cur;
  }
  return rep;
}

}  // namespace denjoy
