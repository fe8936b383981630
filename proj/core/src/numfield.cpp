#include "denjoy/numfield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "denjoy/error.hpp"

namespace denjoy {
namespace {

mpq_class pow2_inverse(unsigned bits) {
  mpq_class w(1);
  mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), bits);
  return w;
}

// Exact rational interval arithmetic, used when the floating enclosures are
// too coarse to separate a value from zero.
struct QInterval {
  mpq_class lo;
  mpq_class hi;

  QInterval operator*(const QInterval& o) const {
    mpq_class p[4] = {lo * o.lo, lo * o.hi, hi * o.lo, hi * o.hi};
    return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
  }
};

int sign_of_qinterval(const QInterval& iv) {
  if (iv.lo > 0) return 1;
  if (iv.hi < 0) return -1;
  return 0;
}

class ScopedPrecision {
 public:
  explicit ScopedPrecision(unsigned bits) : saved_(working_precision()) { set_working_precision(bits); }
  ~ScopedPrecision() { set_working_precision(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  unsigned saved_;
};

}  // namespace

// ---------------------------------------------------------------- NumberField

std::shared_ptr<const NumberField> NumberField::create(IntPolynomial min_poly) {
  if (min_poly.degree() < 1 || !min_poly.is_monic())
    throw FactorizationFailure("number field needs a monic polynomial of degree >= 1, got " +
                               min_poly.to_string());
  std::shared_ptr<NumberField> f(new NumberField());
  f->min_poly_ = std::move(min_poly);
  f->roots_ = std::make_shared<RootCache>();
  f->roots_->intervals = isolate_real_roots(f->min_poly_);
  f->roots_->refined = f->roots_->intervals;
  f->roots_->refined_bits.assign(f->roots_->intervals.size(), 0);
  f->self_ = f;
  return f;
}

std::shared_ptr<const NumberField> NumberField::rationals() {
  static const auto q = create(IntPolynomial{0, 1});
  return q;
}

std::shared_ptr<const NumberField> NumberField::with_conj_index(std::optional<int> index) const {
  std::shared_ptr<NumberField> f(new NumberField());
  f->min_poly_ = min_poly_;
  f->roots_ = roots_;
  f->conj_index_ = index;
  f->self_ = f;
  return f;
}

bool NumberField::same_field(const NumberField& other) const {
  return this == &other || roots_ == other.roots_ || min_poly_ == other.min_poly_;
}

IsolatingInterval NumberField::refined_root(int root_index, unsigned bits) const {
  const auto i = static_cast<std::size_t>(root_index);
  std::lock_guard<std::mutex> lock(roots_->mutex);
  if (roots_->refined_bits[i] < bits) {
    roots_->refined[i] = refine_root(min_poly_, roots_->refined[i], pow2_inverse(bits));
    roots_->refined_bits[i] = bits;
  }
  return roots_->refined[i];
}

Interval NumberField::root_enclosure(int root_index, unsigned bits) const {
  const IsolatingInterval iv = refined_root(root_index, bits);
  return Interval(iv.lo, iv.hi);
}

Real NumberField::root_value(int root_index) const {
  return root_enclosure(root_index, working_precision() + 8).mid();
}

FieldElement NumberField::zero() const {
  return FieldElement(self_.lock(), std::vector<mpq_class>(static_cast<std::size_t>(degree()), 0));
}

FieldElement NumberField::one() const { return from_rational(1); }

FieldElement NumberField::theta() const {
  if (degree() == 1) return from_rational(mpq_class(-min_poly_.coeff(0)));
  std::vector<mpq_class> c(static_cast<std::size_t>(degree()), 0);
  c[1] = 1;
  return FieldElement(self_.lock(), std::move(c));
}

FieldElement NumberField::from_rational(const mpq_class& q) const {
  std::vector<mpq_class> c(static_cast<std::size_t>(degree()), 0);
  c[0] = q;
  return FieldElement(self_.lock(), std::move(c));
}

// --------------------------------------------------------------- FieldElement

FieldElement::FieldElement(FieldPtr field, std::vector<mpq_class> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
  coords_.resize(static_cast<std::size_t>(field_->degree()), 0);
  // callers may pass unreduced fractions such as mpq_class(2, 4)
  for (auto& c : coords_) c.canonicalize();
}

bool FieldElement::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const mpq_class& q) { return q == 0; });
}

void FieldElement::require_same_field(const FieldElement& other) const {
  if (!field_ || !other.field_ || !field_->same_field(*other.field_))
    throw FieldMismatch("operands belong to different number fields");
}

FieldElement& FieldElement::operator+=(const FieldElement& other) {
  require_same_field(other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& other) {
  require_same_field(other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

FieldElement& FieldElement::operator*=(const mpq_class& q) {
  for (auto& c : coords_) c *= q;
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& other) {
  require_same_field(other);
  const std::size_t d = coords_.size();
  std::vector<mpq_class> prod(2 * d - 1, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (coords_[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j)
      if (other.coords_[j] != 0) prod[i + j] += coords_[i] * other.coords_[j];
  }
  // Reduce with θ^d = -(c_0 + ... + c_{d-1} θ^{d-1}).
  const auto& mp = field_->min_poly().coefficients();
  for (std::size_t k = prod.size(); k-- > d;) {
    if (prod[k] == 0) continue;
    const mpq_class t = prod[k];
    for (std::size_t j = 0; j < d; ++j)
      if (mp[j] != 0) prod[k - d + j] -= t * mp[j];
    prod[k] = 0;
  }
  prod.resize(d);
  coords_ = std::move(prod);
  return *this;
}

FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero field element");
  const std::size_t d = coords_.size();
  // Column j of the multiplication matrix is this·θ^j.
  std::vector<std::vector<mpq_class>> a(d, std::vector<mpq_class>(d + 1, 0));
  FieldElement col = *this;
  const FieldElement th = field_->theta();
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) a[i][j] = col.coords_[i];
    if (j + 1 < d) col *= th;
  }
  a[0][d] = 1;
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t piv = c;
    while (piv < d && a[piv][c] == 0) ++piv;
    if (piv == d) throw DivisionByZero("singular multiplication matrix (min_poly not irreducible?)");
    std::swap(a[c], a[piv]);
    const mpq_class inv = 1 / a[c][c];
    for (std::size_t k = c; k <= d; ++k) a[c][k] *= inv;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const mpq_class f = a[r][c];
      for (std::size_t k = c; k <= d; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<mpq_class> x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = a[i][d];
  return FieldElement(field_, std::move(x));
}

FieldElement& FieldElement::operator/=(const FieldElement& other) {
  require_same_field(other);
  return *this *= other.inverse();
}

FieldElement FieldElement::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  FieldElement result = field_->one();
  FieldElement base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  a.require_same_field(b);
  return a.coords_ == b.coords_;
}

Interval FieldElement::enclose(int root_index, unsigned bits) const {
  if (bits == 0) bits = working_precision() - 8;
  const Interval x = field_->root_enclosure(root_index, bits);
  Interval acc;
  for (auto it = coords_.rbegin(); it != coords_.rend(); ++it) acc = acc * x + Interval(*it);
  return acc;
}

Real FieldElement::value_at(int root_index) const { return enclose(root_index).mid(); }

int FieldElement::sign_at(int root_index) const {
  if (is_zero()) return 0;
  if (coords_.size() == 1) return mpq_sgn(coords_[0].get_mpq_t());
  const unsigned cap = working_precision() > 24 ? working_precision() - 16 : 8;
  for (unsigned bits = 64; bits <= cap; bits *= 2) {
    const int s = enclose(root_index, bits).sign();
    if (s != 0) return s;
  }
  if (const int s = enclose(root_index, cap).sign(); s != 0) return s;
  // Exact fallback: rational interval Horner on ever finer root intervals.
  for (unsigned bits = 2 * cap;; bits *= 2) {
    const IsolatingInterval r = field_->refined_root(root_index, bits);
    const QInterval x{r.lo, r.hi};
    QInterval acc{0, 0};
    for (auto it = coords_.rbegin(); it != coords_.rend(); ++it) {
      acc = acc * x;
      acc.lo += *it;
      acc.hi += *it;
    }
    if (const int s = sign_of_qinterval(acc); s != 0) return s;
  }
}

std::string FieldElement::to_string() const {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < coords_.size(); ++i) out << (i ? ", " : "") << coords_[i].get_str();
  out << "]";
  return out.str();
}

int compare_at(const FieldElement& a, const FieldElement& b, int root_index) {
  return (a - b).sign_at(root_index);
}

// ---------------------------------------------------------- Perron machinery

std::optional<int> primitivity_exponent(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0 || !m.square()) return std::nullopt;
  std::vector<std::vector<char>> pattern(n, std::vector<char>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) < 0) return std::nullopt;
      pattern[i][j] = m(i, j) > 0;
    }
  auto power = pattern;
  const std::size_t limit = n * n;
  for (std::size_t k = 1; k <= limit; ++k) {
    bool positive = true;
    for (const auto& row : power)
      for (char c : row) positive = positive && c;
    if (positive) return static_cast<int>(k);
    std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        if (power[i][l])
          for (std::size_t j = 0; j < n; ++j) next[i][j] |= pattern[l][j];
    power = std::move(next);
  }
  return std::nullopt;
}

namespace {

// Tries every conjugation-closed subset of roots containing the Perron root,
// by increasing degree, and returns the first rounded product that divides
// `cp` exactly.
std::optional<IntPolynomial> extract_factor(const IntPolynomial& cp, const IntPolynomial& sf) {
  const auto guesses = approximate_roots(sf);
  const auto roots = polish_roots(sf, guesses);
  const std::size_t n = roots.size();
  if (n == 0) return std::nullopt;

  std::size_t perron = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (roots[i].re > roots[perron].re) perron = i;

  const Real tiny = pow(Real(2), -static_cast<int>(working_precision() / 3));
  // Clusters: a real root alone, or a complex pair.
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<char> used(n, 0);
  std::size_t perron_cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    used[i] = 1;
    std::vector<std::size_t> cl{i};
    if (abs(roots[i].im) > tiny * (1 + abs(roots[i].re))) {
      std::size_t best = n;
      Real best_dist = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (used[j]) continue;
        const Real dist = abs(roots[j].re - roots[i].re) + abs(roots[j].im + roots[i].im);
        if (best == n || dist < best_dist) {
          best = j;
          best_dist = dist;
        }
      }
      if (best == n) return std::nullopt;
      used[best] = 1;
      cl.push_back(best);
    }
    if (i == perron) perron_cluster = clusters.size();
    clusters.push_back(std::move(cl));
  }
  std::vector<std::size_t> others;
  for (std::size_t c = 0; c < clusters.size(); ++c)
    if (c != perron_cluster) others.push_back(c);
  if (others.size() > 24) return std::nullopt;

  std::vector<unsigned long> masks(1ul << others.size());
  std::iota(masks.begin(), masks.end(), 0ul);
  auto degree_of = [&](unsigned long mask) {
    std::size_t deg = 1;
    for (std::size_t k = 0; k < others.size(); ++k)
      if (mask & (1ul << k)) deg += clusters[others[k]].size();
    return deg;
  };
  std::stable_sort(masks.begin(), masks.end(),
                   [&](unsigned long a, unsigned long b) { return degree_of(a) < degree_of(b); });

  for (unsigned long mask : masks) {
    std::vector<std::size_t> members{perron};
    for (std::size_t k = 0; k < others.size(); ++k)
      if (mask & (1ul << k))
        for (std::size_t r : clusters[others[k]]) members.push_back(r);
    // Product of (x - r) with complex coefficients, constant term first.
    std::vector<Real> re{Real(1)};
    std::vector<Real> im{Real(0)};
    for (std::size_t r : members) {
      std::vector<Real> nre(re.size() + 1, Real(0));
      std::vector<Real> nim(im.size() + 1, Real(0));
      for (std::size_t k = 0; k < re.size(); ++k) {
        nre[k + 1] += re[k];
        nim[k + 1] += im[k];
        nre[k] -= re[k] * roots[r].re - im[k] * roots[r].im;
        nim[k] -= re[k] * roots[r].im + im[k] * roots[r].re;
      }
      re = std::move(nre);
      im = std::move(nim);
    }
    std::vector<mpz_class> coeffs;
    bool integral = true;
    for (std::size_t k = 0; k < re.size() && integral; ++k) {
      const Real rounded = round(re[k]);
      const Real scale = 1 + abs(re[k]);
      if (abs(re[k] - rounded) > tiny * scale || abs(im[k]) > tiny * scale) integral = false;
      coeffs.push_back(round_to_mpz(rounded));
    }
    if (!integral) continue;
    IntPolynomial candidate(std::move(coeffs));
    if (exact_quotient(cp, candidate)) return candidate;
  }
  return std::nullopt;
}

}  // namespace

namespace {

IntPolynomial min_poly_from_charpoly(const IntPolynomial& cp) {
  if (cp.degree() == 1) return cp;
  if (cp.degree() == 2) {
    const mpz_class disc = cp.coeff(1) * cp.coeff(1) - 4 * cp.coeff(0);
    if (disc < 0 || !mpz_perfect_square_p(disc.get_mpz_t())) return cp;
  }
  const IntPolynomial sf = squarefree_part(cp);
  for (unsigned bits = std::max(256u, working_precision()); bits <= 4096; bits *= 2) {
    ScopedPrecision scope(bits);
    if (auto f = extract_factor(cp, sf)) return *f;
  }
  throw FactorizationFailure("could not certify an integer factor of " + cp.to_string() +
                             " containing the Perron root");
}

}  // namespace

IntPolynomial perron_min_poly(const IntMatrix& m) { return min_poly_from_charpoly(charpoly(m)); }

std::vector<FieldElement> multiply(const IntMatrix& m, const std::vector<FieldElement>& v) {
  std::vector<FieldElement> out;
  out.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    FieldElement acc = v.at(0).field()->zero();
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) acc += v[j] * mpq_class(m(i, j));
    out.push_back(std::move(acc));
  }
  return out;
}

namespace {

// Columns of adj(θI - m) are eigenvectors for θ whenever the eigenspace is a
// line. With adj(xI - m) = sum_j x^j C_j, C_{n-1} = I and
// C_{j-1} = m C_j + c_j I, where c is the characteristic polynomial.
std::optional<std::vector<FieldElement>> adjugate_eigenvector(const IntMatrix& m, const IntPolynomial& cp,
                                                              const FieldPtr& field) {
  const std::size_t n = m.rows();
  if (!exact_quotient(cp, field->min_poly())) return std::nullopt;
  std::vector<IntMatrix> c(n, IntMatrix(n, n));
  c[n - 1] = IntMatrix::identity(n);
  for (std::size_t j = n - 1; j > 0; --j) {
    c[j - 1] = m * c[j];
    for (std::size_t i = 0; i < n; ++i) c[j - 1](i, i) += cp.coeff(static_cast<int>(j));
  }
  const IntPolynomial& mp = field->min_poly();
  const auto d = static_cast<std::size_t>(field->degree());
  auto reduce = [&](std::vector<mpz_class> poly) {
    for (std::size_t top = poly.size(); top-- > d;) {
      if (poly[top] == 0) continue;
      const mpz_class f = poly[top];
      for (std::size_t i = 0; i <= d; ++i) poly[top - d + i] -= f * mp.coeff(static_cast<int>(i));
    }
    poly.resize(d);
    return FieldElement(field, std::vector<mpq_class>(poly.begin(), poly.end()));
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<FieldElement> v;
    bool nonzero = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<mpz_class> poly(std::max(n, d + 1), 0);
      for (std::size_t j = 0; j < n; ++j) poly[j] = c[j](i, k);
      v.push_back(reduce(std::move(poly)));
      nonzero = nonzero || !v.back().is_zero();
    }
    if (!nonzero) continue;
    FieldElement sum = field->zero();
    for (const auto& x : v) sum += x;
    if (sum.is_zero()) return std::nullopt;
    const FieldElement inv = sum.inverse();
    for (auto& x : v) x *= inv;
    return v;
  }
  return std::nullopt;
}

}  // namespace

std::vector<FieldElement> eigenvector_for_generator(const IntMatrix& m, const FieldPtr& field) {
  const std::size_t n = m.rows();
  if (auto v = adjugate_eigenvector(m, charpoly(m), field)) return std::move(*v);
  const FieldElement theta = field->theta();
  std::vector<std::vector<FieldElement>> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i].push_back(field->from_rational(mpq_class(m(i, j))));
    a[i][i] -= theta;
  }
  // Reduced row echelon form.
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < n; ++c) {
    std::size_t piv = row;
    while (piv < n && a[piv][c].is_zero()) ++piv;
    if (piv == n) continue;
    std::swap(a[row], a[piv]);
    const FieldElement inv = a[row][c].inverse();
    for (std::size_t k = c; k < n; ++k) a[row][k] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || a[r][c].is_zero()) continue;
      const FieldElement f = a[r][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[row][k];
    }
    pivot_col.push_back(c);
    ++row;
  }
  std::vector<char> is_pivot(n, 0);
  for (std::size_t c : pivot_col) is_pivot[c] = 1;
  std::size_t free_col = n;
  for (std::size_t c = n; c-- > 0;)
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  if (free_col == n) throw ConventionMismatch("generator is not an eigenvalue of the matrix");
  std::vector<FieldElement> v(n, field->zero());
  v[free_col] = field->one();
  for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -a[r][free_col];

  FieldElement sum = field->zero();
  for (const auto& x : v) sum += x;
  if (!sum.is_zero()) {
    const FieldElement inv = sum.inverse();
    for (auto& x : v) x *= inv;
  }
  return v;
}

PerronData perron_field(const IntMatrix& m) {
  if (!primitivity_exponent(m))
    throw NotPrimitive("matrix is not primitive (no power up to n^2 is strictly positive)");
  PerronData out;
  out.charpoly = charpoly(m);
  out.field = NumberField::create(min_poly_from_charpoly(out.charpoly));
  if (auto v = adjugate_eigenvector(m, out.charpoly, out.field))
    out.eigenvector = std::move(*v);
  else
    out.eigenvector = eigenvector_for_generator(m, out.field);
  const int perron = out.field->perron_index();
  for (const auto& x : out.eigenvector)
    if (x.sign_at(perron) <= 0)
      throw ConventionMismatch("Perron eigenvector has a non-positive coordinate");
  return out;
}

// ---------------------------------------------------------------- hypotheses

Theta2Choice parse_theta2_policy(const std::string& text) {
  if (text == "largest") return {Theta2Policy::Largest, 0};
  if (text == "smallest") return {Theta2Policy::Smallest, 0};
  if (text.rfind("index:", 0) == 0) {
    const std::string num = text.substr(6);
    if (!num.empty() && std::all_of(num.begin(), num.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return {Theta2Policy::Index, std::stoi(num)};
  }
  throw ParseError("invalid theta2 policy '" + text + "' (expected largest, smallest or index:k)");
}

HypothesisReport check_hypotheses(const NumberField& field, Theta2Choice choice) {
  HypothesisReport report;
  const int perron = field.perron_index();
  const mpq_class one(1);
  for (int i = 0; i < field.real_root_count(); ++i) {
    if (i == perron) continue;
    RootReport rr;
    rr.root_index = i;
    rr.approx = field.root_value(i);
    // 1 is never a root of an irreducible polynomial of degree >= 2, so the
    // refinement separates the root from 1 after finitely many steps.
    for (unsigned bits = 8;; bits *= 2) {
      const IsolatingInterval iv = field.refined_root(i, bits);
      if (iv.lo > one) {
        rr.in_range = true;
        break;
      }
      if (iv.hi < one) break;
      if (iv.lo == iv.hi) break;  // rational root equal to 1 (degree 1 only)
    }
    report.conjugates.push_back(rr);
  }

  if (field.degree() < 2) {
    report.failing_condition = 1;
    report.message = "the Perron root is rational and has no other conjugate";
    return report;
  }
  if (report.conjugates.empty()) {
    report.failing_condition = 2;
    report.message = "no conjugate of the Perron root is real";
    return report;
  }
  std::vector<int> admissible;
  for (const auto& rr : report.conjugates)
    if (rr.in_range) admissible.push_back(rr.root_index);
  if (admissible.empty()) {
    report.failing_condition = 3;
    report.message = "no real conjugate lies strictly between 1 and the Perron root";
    return report;
  }
  switch (choice.policy) {
    case Theta2Policy::Largest:
      report.conj_index = admissible.back();
      break;
    case Theta2Policy::Smallest:
      report.conj_index = admissible.front();
      break;
    case Theta2Policy::Index:
      if (std::find(admissible.begin(), admissible.end(), choice.index) == admissible.end()) {
        report.failing_condition = 3;
        report.message = "requested root index " + std::to_string(choice.index) +
                         " is not a real conjugate in (1, theta1)";
        return report;
      }
      report.conj_index = choice.index;
      break;
  }
  report.passed = true;
  report.message = "hypotheses hold";
  return report;
}

}  // namespace denjoy
