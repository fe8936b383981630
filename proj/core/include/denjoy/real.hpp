#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>
#include <string>

namespace denjoy {

// High-precision binary floating point. The precision of new values is the
// process-wide working precision (256 bits unless changed).
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

void set_working_precision(unsigned bits);
unsigned working_precision();

Real to_real(const mpq_class& q);
Real to_real(const mpz_class& z);
// Nearest integer.
mpz_class round_to_mpz(const Real& x);

// Decimal rendering with the given number of significant digits, in plain
// (non-scientific) notation when the exponent is moderate.
std::string to_decimal(const Real& x, int significant_digits = 30);

// Closed interval [lo, hi] with endpoints rounded outward after every
// operation, so the exact result of the operation is always enclosed.
class Interval {
 public:
  Interval();
  explicit Interval(const mpq_class& q);
  Interval(const mpq_class& lo, const mpq_class& hi);

  static Interval from_bounds(const Real& lo, const Real& hi);

  const Real& lo() const { return lo_; }
  const Real& hi() const { return hi_; }
  Real mid() const;
  Real width() const;

  bool contains_zero() const;
  // -1 or +1 when the interval excludes zero, 0 otherwise.
  int sign() const;

  Interval& operator+=(const Interval& other);
  Interval& operator-=(const Interval& other);
  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(const Interval& a, const Interval& b);
  Interval operator-() const;

 private:
  Real lo_;
  Real hi_;
};

}  // namespace denjoy
