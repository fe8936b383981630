#pragma once

#include <gmpxx.h>

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "denjoy/matrix.hpp"
#include "denjoy/polynomial.hpp"
#include "denjoy/real.hpp"

namespace denjoy {

class FieldElement;

// ℚ[θ] for θ a root of a monic irreducible integer polynomial, together with
// isolating intervals for all real roots of that polynomial. Elements refer
// to the field by shared pointer; two fields with the same min_poly are
// interchangeable.
class NumberField {
 public:
  // `min_poly` must be monic and irreducible over ℚ (not re-checked here).
  static std::shared_ptr<const NumberField> create(IntPolynomial min_poly);
  // ℚ itself, presented as ℚ[θ] with θ = 0.
  static std::shared_ptr<const NumberField> rationals();

  const IntPolynomial& min_poly() const { return min_poly_; }
  int degree() const { return min_poly_.degree(); }
  int real_root_count() const { return static_cast<int>(roots_->intervals.size()); }
  const std::vector<IsolatingInterval>& real_roots() const { return roots_->intervals; }
  int perron_index() const { return real_root_count() - 1; }
  std::optional<int> conj_index() const { return conj_index_; }

  // Same field with a different designated conjugate root. Shares the root
  // refinement cache with this field.
  std::shared_ptr<const NumberField> with_conj_index(std::optional<int> index) const;

  bool same_field(const NumberField& other) const;

  // Enclosure of the i-th real root, of width about 2^-bits.
  Interval root_enclosure(int root_index, unsigned bits) const;
  // Rational isolating interval refined to width at most 2^-bits.
  IsolatingInterval refined_root(int root_index, unsigned bits) const;
  // Midpoint approximation at the working precision.
  Real root_value(int root_index) const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement theta() const;
  FieldElement from_rational(const mpq_class& q) const;

 private:
  struct RootCache {
    std::vector<IsolatingInterval> intervals;
    std::mutex mutex;
    // Best rational refinement reached so far, per root.
    std::vector<IsolatingInterval> refined;
    std::vector<unsigned> refined_bits;
  };

  NumberField() = default;

  IntPolynomial min_poly_;
  std::shared_ptr<RootCache> roots_;
  std::optional<int> conj_index_;
  std::weak_ptr<const NumberField> self_;

  friend class FieldElement;
};

using FieldPtr = std::shared_ptr<const NumberField>;

// Element of a NumberField in the power basis 1, θ, ..., θ^{d-1}.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldPtr field, std::vector<mpq_class> coords);

  const FieldPtr& field() const { return field_; }
  const std::vector<mpq_class>& coords() const { return coords_; }
  bool is_zero() const;

  FieldElement& operator+=(const FieldElement& other);
  FieldElement& operator-=(const FieldElement& other);
  FieldElement& operator*=(const FieldElement& other);
  FieldElement& operator*=(const mpq_class& q);
  FieldElement& operator/=(const FieldElement& other);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator*(FieldElement a, const mpq_class& q) { return a *= q; }
  friend FieldElement operator*(const mpq_class& q, FieldElement a) { return a *= q; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
  FieldElement operator-() const;

  FieldElement inverse() const;
  FieldElement pow(long n) const;

  friend bool operator==(const FieldElement& a, const FieldElement& b);
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  // Exact sign of the image under θ ↦ (real root `root_index`).
  int sign_at(int root_index) const;
  // Outward-rounded enclosure of the image at the given root.
  Interval enclose(int root_index, unsigned bits = 0) const;
  // Approximation at the working precision.
  Real value_at(int root_index) const;

  std::string to_string() const;

 private:
  void require_same_field(const FieldElement& other) const;

  FieldPtr field_;
  std::vector<mpq_class> coords_;
};

// Sign comparison a - b at a root.
int compare_at(const FieldElement& a, const FieldElement& b, int root_index);

// Perron root field of a primitive nonnegative integer matrix and the
// positive eigenvector normalized to sum 1.
struct PerronData {
  FieldPtr field;
  IntPolynomial charpoly;
  std::vector<FieldElement> eigenvector;
};

// True with the smallest N ≤ n² such that M^N > 0, or nullopt.
std::optional<int> primitivity_exponent(const IntMatrix& m);

// Monic irreducible factor of charpoly(m) vanishing at the Perron root.
IntPolynomial perron_min_poly(const IntMatrix& m);

PerronData perron_field(const IntMatrix& m);

// Solves m·v = θ·v over the field for θ the generator; returns a nonzero
// solution normalized so that its coordinates sum to 1 (or to the last
// nonzero component 1 when the sum vanishes).
std::vector<FieldElement> eigenvector_for_generator(const IntMatrix& m, const FieldPtr& field);

// Matrix-vector product with an integer matrix.
std::vector<FieldElement> multiply(const IntMatrix& m, const std::vector<FieldElement>& v);

enum class Theta2Policy { Largest, Smallest, Index };

struct Theta2Choice {
  Theta2Policy policy = Theta2Policy::Largest;
  int index = 0;  // for Theta2Policy::Index: index into NumberField::real_roots()
};

Theta2Choice parse_theta2_policy(const std::string& text);

struct RootReport {
  int root_index = 0;
  Real approx;
  bool in_range = false;  // strictly between 1 and θ₁
};

struct HypothesisReport {
  bool passed = false;
  // 0 when passed; otherwise the first failing hypothesis: 1 (no conjugate
  // other than θ₁), 2 (no real conjugate), 3 (no real conjugate in (1, θ₁)).
  int failing_condition = 0;
  std::vector<RootReport> conjugates;
  std::optional<int> conj_index;
  std::string message;
};

HypothesisReport check_hypotheses(const NumberField& field, Theta2Choice choice = {});

}  // namespace denjoy
