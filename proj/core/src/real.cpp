#include "denjoy/real.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mpfr.h>

namespace denjoy {
namespace {

mpfr_ptr raw(Real& x) { return x.backend().data(); }
mpfr_srcptr raw(const Real& x) { return x.backend().data(); }

unsigned g_bits = 0;

const bool kDefaultPrecision = (set_working_precision(256), true);

}  // namespace

void set_working_precision(unsigned bits) {
  // boost counts precision in decimal digits; round up so we never get less
  // than the requested number of bits.
  const auto digits10 = static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
  Real::default_precision(digits10);
  g_bits = bits;
}

// The requested precision; actual Real values may carry a few more bits.
unsigned working_precision() { return g_bits; }

Real to_real(const mpq_class& q) {
  Real x;
  mpfr_set_q(raw(x), q.get_mpq_t(), MPFR_RNDN);
  return x;
}

Real to_real(const mpz_class& z) {
  Real x;
  mpfr_set_z(raw(x), z.get_mpz_t(), MPFR_RNDN);
  return x;
}

mpz_class round_to_mpz(const Real& x) {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), raw(x), MPFR_RNDN);
  return z;
}

std::string to_decimal(const Real& x, int significant_digits) {
  if (x == 0) {
    std::string s = "0.";
    s.append(static_cast<std::size_t>(std::max(1, significant_digits - 1)), '0');
    return s;
  }
  mpfr_exp_t exponent = 0;
  char* digits = mpfr_get_str(nullptr, &exponent, 10, static_cast<std::size_t>(significant_digits),
                              raw(x), MPFR_RNDN);
  std::string mantissa(digits);
  mpfr_free_str(digits);
  std::string sign;
  if (!mantissa.empty() && mantissa.front() == '-') {
    sign = "-";
    mantissa.erase(0, 1);
  }
  // Value is 0.<mantissa> * 10^exponent.
  std::string out;
  if (exponent > 0 && exponent <= 40) {
    const auto e = static_cast<std::size_t>(exponent);
    if (e >= mantissa.size()) {
      out = mantissa + std::string(e - mantissa.size(), '0') + ".0";
    } else {
      out = mantissa.substr(0, e) + "." + mantissa.substr(e);
    }
  } else if (exponent <= 0 && exponent > -40) {
    out = "0." + std::string(static_cast<std::size_t>(-exponent), '0') + mantissa;
  } else {
    out = mantissa.substr(0, 1) + "." + mantissa.substr(1) + "e" + std::to_string(exponent - 1);
  }
  return sign + out;
}

Interval::Interval() = default;

Interval::Interval(const mpq_class& q) : Interval(q, q) {}

Interval::Interval(const mpq_class& lo, const mpq_class& hi) {
  mpfr_set_q(raw(lo_), lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(raw(hi_), hi.get_mpq_t(), MPFR_RNDU);
}

Interval Interval::from_bounds(const Real& lo, const Real& hi) {
  Interval r;
  r.lo_ = lo;
  r.hi_ = hi;
  return r;
}

Real Interval::mid() const {
  Real m;
  mpfr_add(raw(m), raw(lo_), raw(hi_), MPFR_RNDN);
  mpfr_div_2ui(raw(m), raw(m), 1, MPFR_RNDN);
  return m;
}

Real Interval::width() const {
  Real w;
  mpfr_sub(raw(w), raw(hi_), raw(lo_), MPFR_RNDU);
  return w;
}

bool Interval::contains_zero() const { return lo_ <= 0 && hi_ >= 0; }

int Interval::sign() const {
  if (lo_ > 0) return 1;
  if (hi_ < 0) return -1;
  return 0;
}

Interval& Interval::operator+=(const Interval& other) {
  mpfr_add(raw(lo_), raw(lo_), raw(other.lo_), MPFR_RNDD);
  mpfr_add(raw(hi_), raw(hi_), raw(other.hi_), MPFR_RNDU);
  return *this;
}

Interval& Interval::operator-=(const Interval& other) {
  Real lo;
  Real hi;
  mpfr_sub(raw(lo), raw(lo_), raw(other.hi_), MPFR_RNDD);
  mpfr_sub(raw(hi), raw(hi_), raw(other.lo_), MPFR_RNDU);
  lo_ = std::move(lo);
  hi_ = std::move(hi);
  return *this;
}

Interval Interval::operator-() const { return from_bounds(-hi_, -lo_); }

Interval operator*(const Interval& a, const Interval& b) {
  // Four endpoint products, each rounded both ways.
  Real down[4];
  Real up[4];
  const Real* xs[2] = {&a.lo_, &a.hi_};
  const Real* ys[2] = {&b.lo_, &b.hi_};
  int k = 0;
  for (const Real* x : xs) {
    for (const Real* y : ys) {
      mpfr_mul(raw(down[k]), raw(*x), raw(*y), MPFR_RNDD);
      mpfr_mul(raw(up[k]), raw(*x), raw(*y), MPFR_RNDU);
      ++k;
    }
  }
  Interval r;
  r.lo_ = *std::min_element(std::begin(down), std::end(down));
  r.hi_ = *std::max_element(std::begin(up), std::end(up));
  return r;
}

}  // namespace denjoy
