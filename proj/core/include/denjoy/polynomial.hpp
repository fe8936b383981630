#pragma once

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "denjoy/matrix.hpp"
#include "denjoy/real.hpp"

namespace denjoy {

// Polynomial with arbitrary-precision integer coefficients, constant term
// first. The representation is always trimmed: the leading coefficient is
// nonzero unless the polynomial is zero (empty coefficient vector).
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<mpz_class> coefficients);
  IntPolynomial(std::initializer_list<long> coefficients);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }
  const std::vector<mpz_class>& coefficients() const { return coeffs_; }
  const mpz_class& coeff(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  const mpz_class& leading() const { return coeffs_.back(); }

  mpq_class eval(const mpq_class& x) const;
  int sign_at(const mpq_class& x) const;
  Interval eval(const Interval& x) const;

  IntPolynomial derivative() const;

  // "x^2 - 3*x + 1"
  std::string to_string(const std::string& var = "x") const;

  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);

 private:
  std::vector<mpz_class> coeffs_;
};

// Monic characteristic polynomial det(xI - M) by the Faddeev-LeVerrier
// recursion over the integers.
IntPolynomial charpoly(const IntMatrix& m);

// p(M) for a square integer matrix.
IntMatrix evaluate_at_matrix(const IntPolynomial& p, const IntMatrix& m);

// num / den when den divides num exactly over the integers.
std::optional<IntPolynomial> exact_quotient(const IntPolynomial& num, const IntPolynomial& den);

// p / gcd(p, p'), made primitive with positive leading coefficient.
IntPolynomial squarefree_part(const IntPolynomial& p);

struct IsolatingInterval {
  mpq_class lo;
  mpq_class hi;
};

// Real roots of a squarefree polynomial, ascending, each in an interval with
// rational endpoints where the polynomial is nonzero and changes sign. A
// rational root r is reported as the degenerate interval [r, r].
std::vector<IsolatingInterval> isolate_real_roots(const IntPolynomial& squarefree);

// Bisects an isolating interval until its width is at most `width`.
IsolatingInterval refine_root(const IntPolynomial& p, IsolatingInterval iv, const mpq_class& width);

// Approximate complex roots (double precision, companion-matrix eigenvalues).
std::vector<std::complex<double>> approximate_roots(const IntPolynomial& p);

struct ComplexReal {
  Real re;
  Real im;
};

// Newton refinement of approximate simple roots at the working precision.
std::vector<ComplexReal> polish_roots(const IntPolynomial& p,
                                      const std::vector<std::complex<double>>& guesses,
                                      int iterations = 60);

}  // namespace denjoy
