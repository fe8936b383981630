#include "denjoy/polynomial.hpp"

#include <mpfr.h>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace denjoy {
namespace {

using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly to_q(const IntPolynomial& p) {
  QPoly q;
  q.reserve(p.coefficients().size());
  for (const auto& c : p.coefficients()) q.emplace_back(c);
  return q;
}

QPoly derivative(const QPoly& p) {
  QPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

// Remainder of a by b (b nonzero).
QPoly remainder(QPoly a, const QPoly& b) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (!a.empty() && a.size() - 1 >= db) {
    const mpq_class factor = a.back() / b.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

QPoly quotient(QPoly a, const QPoly& b) {
  trim(a);
  if (a.size() < b.size()) return {};
  const std::size_t db = b.size() - 1;
  QPoly q(a.size() - db);
  while (!a.empty() && a.size() - 1 >= db) {
    const mpq_class factor = a.back() / b.back();
    const std::size_t shift = a.size() - 1 - db;
    q[shift] = factor;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return q;
}

QPoly gcd(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    QPoly r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

mpq_class eval_q(const QPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int sgn(const mpq_class& x) { return mpq_sgn(x.get_mpq_t()); }

// Primitive integer polynomial with positive leading coefficient, from
// rational coefficients.
IntPolynomial primitive_integer(const QPoly& p) {
  mpz_class den = 1;
  for (const auto& c : p) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> z;
  z.reserve(p.size());
  for (const auto& c : p) z.push_back(mpz_class(c * den));
  mpz_class g = 0;
  for (const auto& c : z) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g != 0)
    for (auto& c : z) c /= g;
  if (!z.empty() && z.back() < 0)
    for (auto& c : z) c = -c;
  return IntPolynomial(std::move(z));
}

class SturmSequence {
 public:
  explicit SturmSequence(const IntPolynomial& p) {
    seq_.push_back(to_q(p));
    seq_.push_back(derivative(seq_[0]));
    while (seq_.back().size() > 1) {
      QPoly r = remainder(seq_[seq_.size() - 2], seq_.back());
      if (r.empty()) break;
      for (auto& c : r) c = -c;
      seq_.push_back(std::move(r));
    }
  }

  int sign_changes(const mpq_class& x) const {
    int changes = 0;
    int last = 0;
    for (const auto& q : seq_) {
      const int s = sgn(eval_q(q, x));
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  // Number of distinct roots in (a, b].
  int count(const mpq_class& a, const mpq_class& b) const {
    return sign_changes(a) - sign_changes(b);
  }

 private:
  std::vector<QPoly> seq_;
};

// Floating Newton iteration from the midpoint, certified by exact signs at
// the ends of a dyadic interval of width 2^-bits around the result.
std::optional<IsolatingInterval> newton_refine(const IntPolynomial& p, const IsolatingInterval& iv, long bits) {
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits) + 64;
  mpfr_t x, f, df, t;
  mpfr_inits2(prec, x, f, df, t, static_cast<mpfr_ptr>(nullptr));
  const mpq_class mid = (iv.lo + iv.hi) / 2;
  mpfr_set_q(x, mid.get_mpq_t(), MPFR_RNDN);
  const auto& c = p.coefficients();
  bool ok = true;
  for (int iter = 0; iter < 200; ++iter) {
    mpfr_set_z(f, c.back().get_mpz_t(), MPFR_RNDN);
    mpfr_set_ui(df, 0, MPFR_RNDN);
    for (std::size_t i = c.size() - 1; i-- > 0;) {
      mpfr_mul(df, df, x, MPFR_RNDN);
      mpfr_add(df, df, f, MPFR_RNDN);
      mpfr_mul(f, f, x, MPFR_RNDN);
      mpfr_add_z(f, f, c[i].get_mpz_t(), MPFR_RNDN);
    }
    if (mpfr_zero_p(df) || !mpfr_number_p(f)) {
      ok = false;
      break;
    }
    mpfr_div(t, f, df, MPFR_RNDN);
    mpfr_sub(x, x, t, MPFR_RNDN);
    if (mpfr_zero_p(t) || mpfr_zero_p(x)) break;
    if (mpfr_get_exp(t) < mpfr_get_exp(x) - static_cast<mpfr_exp_t>(bits) - 48) break;
  }
  std::optional<IsolatingInterval> out;
  if (ok && mpfr_number_p(x)) {
    // round x to a multiple of 2^-(bits+1)
    mpfr_mul_2si(t, x, bits + 1, MPFR_RNDN);
    mpfr_rint(t, t, MPFR_RNDN);
    mpz_class k;
    mpfr_get_z(k.get_mpz_t(), t, MPFR_RNDN);
    mpq_class centre(k);
    mpq_div_2exp(centre.get_mpq_t(), centre.get_mpq_t(), static_cast<mp_bitcnt_t>(bits + 1));
    mpq_class half(1);
    mpq_div_2exp(half.get_mpq_t(), half.get_mpq_t(), static_cast<mp_bitcnt_t>(bits + 1));
    const mpq_class lo = centre - half;
    const mpq_class hi = centre + half;
    if (lo >= iv.lo && hi <= iv.hi) {
      const int s_lo = p.sign_at(lo);
      const int s_hi = p.sign_at(hi);
      if (s_hi == 0)
        out = IsolatingInterval{hi, hi};
      else if (s_lo != 0 && s_lo != s_hi)
        out = IsolatingInterval{lo, hi};
    }
  }
  mpfr_clears(x, f, df, t, static_cast<mpfr_ptr>(nullptr));
  return out;
}

// Disjoint intervals around floating root approximations. Each must show a
// sign change; together with the exact Sturm count of all real roots this
// certifies one root per interval.
std::optional<std::vector<IsolatingInterval>> guided_isolation(const IntPolynomial& p, const SturmSequence& sturm,
                                                                const mpq_class& bound) {
  const int total = sturm.count(-bound, bound);
  std::vector<double> approx;
  for (const auto& z : approximate_roots(p))
    if (std::abs(z.imag()) <= 1e-9 * std::max(1.0, std::abs(z.real()))) approx.push_back(z.real());
  if (static_cast<int>(approx.size()) != total) return std::nullopt;
  std::sort(approx.begin(), approx.end());
  std::vector<IsolatingInterval> roots;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    double delta = 1e-6 * std::max(1.0, std::abs(approx[i]));
    if (i > 0) delta = std::min(delta, (approx[i] - approx[i - 1]) / 4);
    if (i + 1 < approx.size()) delta = std::min(delta, (approx[i + 1] - approx[i]) / 4);
    if (!(delta > 0)) return std::nullopt;
    const mpq_class lo(approx[i] - delta);
    const mpq_class hi(approx[i] + delta);
    if (!(lo < hi) || lo <= -bound || hi >= bound) return std::nullopt;
    if (!roots.empty() && roots.back().hi >= lo) return std::nullopt;
    const int s_lo = p.sign_at(lo);
    const int s_hi = p.sign_at(hi);
    if (s_lo == 0 || s_hi == 0 || s_lo == s_hi) return std::nullopt;
    roots.push_back({lo, hi});
  }
  return roots;
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<mpz_class> coefficients) : coeffs_(std::move(coefficients)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPolynomial::IntPolynomial(std::initializer_list<long> coefficients) {
  for (long c : coefficients) coeffs_.emplace_back(c);
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

mpq_class IntPolynomial::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int IntPolynomial::sign_at(const mpq_class& x) const { return sgn(eval(x)); }

Interval IntPolynomial::eval(const Interval& x) const {
  Interval acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + Interval(mpq_class(*it));
  return acc;
}

IntPolynomial IntPolynomial::derivative() const {
  std::vector<mpz_class> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * static_cast<unsigned long>(i));
  return IntPolynomial(std::move(d));
}

std::string IntPolynomial::to_string(const std::string& var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    mpz_class mag = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool show_coeff = (mag != 1) || i == 0;
    if (show_coeff) out << mag.get_str();
    if (i > 0) {
      if (show_coeff) out << "*";
      out << var;
      if (i > 1) out << "^" << i;
    }
  }
  return out.str();
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpz_class> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return IntPolynomial(std::move(c));
}

IntPolynomial charpoly(const IntMatrix& m) {
  assert(m.square());
  const std::size_t n = m.rows();
  std::vector<mpz_class> c(n + 1, 0);
  c[n] = 1;
  IntMatrix mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix next = m * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    IntMatrix amk = m * mk;
    mpz_class trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += amk(i, i);
    // The trace is divisible by k (Newton identities over Z).
    mpz_class q;
    mpz_divexact_ui(q.get_mpz_t(), trace.get_mpz_t(), static_cast<unsigned long>(k));
    c[n - k] = -q;
  }
  return IntPolynomial(std::move(c));
}

IntMatrix evaluate_at_matrix(const IntPolynomial& p, const IntMatrix& m) {
  const std::size_t n = m.rows();
  IntMatrix acc(n, n);
  for (auto it = p.coefficients().rbegin(); it != p.coefficients().rend(); ++it) {
    acc = acc * m;
    for (std::size_t i = 0; i < n; ++i) acc(i, i) += *it;
  }
  return acc;
}

std::optional<IntPolynomial> exact_quotient(const IntPolynomial& num, const IntPolynomial& den) {
  if (den.is_zero()) return std::nullopt;
  if (num.is_zero()) return IntPolynomial{};
  if (num.degree() < den.degree()) return std::nullopt;
  std::vector<mpz_class> a = num.coefficients();
  const auto& b = den.coefficients();
  const std::size_t db = b.size() - 1;
  std::vector<mpz_class> q(a.size() - db, 0);
  for (std::size_t top = a.size(); top-- > db;) {
    if (a[top] == 0) continue;
    if (!mpz_divisible_p(a[top].get_mpz_t(), b.back().get_mpz_t())) return std::nullopt;
    const mpz_class factor = a[top] / b.back();
    const std::size_t shift = top - db;
    q[shift] = factor;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
  }
  for (std::size_t i = 0; i < db; ++i)
    if (a[i] != 0) return std::nullopt;
  return IntPolynomial(std::move(q));
}

IntPolynomial squarefree_part(const IntPolynomial& p) {
  const QPoly q = to_q(p);
  const QPoly g = gcd(q, derivative(q));
  if (g.size() <= 1) return primitive_integer(q);
  return primitive_integer(quotient(q, g));
}

std::vector<IsolatingInterval> isolate_real_roots(const IntPolynomial& p) {
  std::vector<IsolatingInterval> roots;
  if (p.degree() < 1) return roots;
  if (p.degree() == 1) {
    const mpq_class r(-p.coeff(0), p.coeff(1));
    roots.push_back({r, r});
    return roots;
  }
  // Cauchy bound: every root has |z| < 1 + max |a_i / a_n|.
  mpq_class bound = 0;
  for (int i = 0; i < p.degree(); ++i) {
    const mpq_class ratio(abs(p.coeff(i)), abs(p.leading()));
    if (ratio > bound) bound = ratio;
  }
  bound += 1;
  const SturmSequence sturm(p);
  if (auto guided = guided_isolation(p, sturm, bound)) return *guided;

  struct Pending {
    mpq_class lo, hi;
  };
  std::vector<Pending> stack{{-bound, bound}};
  while (!stack.empty()) {
    Pending cur = stack.back();
    stack.pop_back();
    const int n = sturm.count(cur.lo, cur.hi);
    if (n == 0) continue;
    if (n == 1) {
      roots.push_back({cur.lo, cur.hi});
      continue;
    }
    mpq_class mid = (cur.lo + cur.hi) / 2;
    if (p.sign_at(mid) == 0) {
      // Rational root at the midpoint: isolate it in its own tiny interval.
      mpq_class delta = (cur.hi - cur.lo) / 4;
      while (sturm.count(mid - delta, mid + delta) != 1 || p.sign_at(mid - delta) == 0 ||
             p.sign_at(mid + delta) == 0)
        delta /= 2;
      roots.push_back({mid, mid});
      stack.push_back({cur.lo, mid - delta});
      stack.push_back({mid + delta, cur.hi});
      continue;
    }
    stack.push_back({cur.lo, mid});
    stack.push_back({mid, cur.hi});
  }
  std::sort(roots.begin(), roots.end(),
            [](const IsolatingInterval& a, const IsolatingInterval& b) { return a.lo < b.lo; });
  // Tighten intervals that still share an endpoint with a neighbour so the
  // isolating intervals are pairwise disjoint as closed sets.
  for (std::size_t i = 0; i < roots.size(); ++i) {
    IsolatingInterval& r = roots[i];
    if (r.lo == r.hi) continue;
    const bool shared = (i > 0 && roots[i - 1].hi == r.lo) || (i + 1 < roots.size() && roots[i + 1].lo == r.hi);
    if (!shared || p.sign_at(r.lo) == 0 || p.sign_at(r.hi) == 0) continue;
    const int sign_lo = p.sign_at(r.lo);
    for (int step = 0; step < 2 && r.lo != r.hi; ++step) {
      const mpq_class mid = (r.lo + r.hi) / 2;
      const int s = p.sign_at(mid);
      if (s == 0)
        r = {mid, mid};
      else if (s == sign_lo)
        r.lo = mid;
      else
        r.hi = mid;
    }
  }
  return roots;
}

IsolatingInterval refine_root(const IntPolynomial& p, IsolatingInterval iv, const mpq_class& width) {
  if (iv.lo == iv.hi) return iv;
  // An interval of the form (lo, hi] may carry the root at hi.
  if (p.sign_at(iv.hi) == 0) return {iv.hi, iv.hi};
  const int sign_lo = p.sign_at(iv.lo);
  // Target widths of the form 2^-bits take the floating fast path first.
  if (width > 0 && mpz_popcount(width.get_num_mpz_t()) == 1 && width.get_num() == 1 &&
      mpz_popcount(width.get_den_mpz_t()) == 1 && iv.hi - iv.lo > width) {
    const long bits = static_cast<long>(mpz_sizeinbase(width.get_den_mpz_t(), 2)) - 1;
    if (bits >= 8 && sign_lo != 0)
      if (auto r = newton_refine(p, iv, bits)) return *r;
  }
  const IntPolynomial dp = p.derivative();
  // Quadratic interval refinement: guess the root by a Newton step from the
  // midpoint, then test the grid cell of width (hi - lo)/n around the guess.
  // Success squares n, failure falls back to bisection.
  mpz_class n = 4;
  while (iv.hi - iv.lo > width) {
    const mpq_class mid = (iv.lo + iv.hi) / 2;
    const mpq_class d = dp.eval(mid);
    if (d != 0) {
      const mpq_class x = mid - p.eval(mid) / d;
      if (x > iv.lo && x < iv.hi) {
        const mpq_class step = (iv.hi - iv.lo) / n;
        mpq_class cells = (x - iv.lo) / step;
        mpz_class k;
        mpz_fdiv_q(k.get_mpz_t(), cells.get_num_mpz_t(), cells.get_den_mpz_t());
        const mpq_class a = iv.lo + step * k;
        const mpq_class b = a + step;
        const int sa = p.sign_at(a);
        const int sb = p.sign_at(b);
        if (sa == 0) return {a, a};
        if (sb == 0) return {b, b};
        if (sa != sb) {
          iv = {a, b};
          n *= n;
          continue;
        }
      }
    }
    const int s = p.sign_at(mid);
    if (s == 0) return {mid, mid};
    if (s == sign_lo)
      iv.lo = mid;
    else
      iv.hi = mid;
    if (n > 4) n = sqrt(n);
  }
  return iv;
}

std::vector<std::complex<double>> approximate_roots(const IntPolynomial& p) {
  std::vector<std::complex<double>> out;
  if (p.degree() < 1) return out;
  if (p.degree() == 1) {
    out.emplace_back(-p.coeff(0).get_d() / p.coeff(1).get_d(), 0.0);
    return out;
  }
  Eigen::VectorXd coeffs(p.degree() + 1);
  for (int i = 0; i <= p.degree(); ++i) coeffs[i] = p.coeff(i).get_d();
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
  for (Eigen::Index i = 0; i < solver.roots().size(); ++i) out.push_back(solver.roots()[i]);
  return out;
}

std::vector<ComplexReal> polish_roots(const IntPolynomial& p,
                                      const std::vector<std::complex<double>>& guesses, int iterations) {
  std::vector<Real> coeffs;
  for (const auto& c : p.coefficients()) coeffs.push_back(to_real(c));
  const IntPolynomial dp = p.derivative();
  std::vector<Real> dcoeffs;
  for (const auto& c : dp.coefficients()) dcoeffs.push_back(to_real(c));

  auto horner = [](const std::vector<Real>& cs, const Real& re, const Real& im) {
    Real ar = 0;
    Real ai = 0;
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
      Real nr = ar * re - ai * im + *it;
      Real ni = ar * im + ai * re;
      ar = std::move(nr);
      ai = std::move(ni);
    }
    return std::pair<Real, Real>(ar, ai);
  };

  const Real tolerance = ldexp(Real(1), -static_cast<int>(working_precision()) + 4);
  std::vector<ComplexReal> out;
  for (const auto& g : guesses) {
    Real re = g.real();
    Real im = g.imag();
    for (int it = 0; it < iterations; ++it) {
      auto [fr, fi] = horner(coeffs, re, im);
      auto [dr, di] = horner(dcoeffs, re, im);
      const Real den = dr * dr + di * di;
      if (den == 0) break;
      const Real qr = (fr * dr + fi * di) / den;
      const Real qi = (fi * dr - fr * di) / den;
      re -= qr;
      im -= qi;
      // converged to the working precision
      if (abs(qr) + abs(qi) <= (abs(re) + abs(im) + 1) * tolerance) break;
    }
    out.push_back({re, im});
  }
  return out;
}

}  // namespace denjoy
