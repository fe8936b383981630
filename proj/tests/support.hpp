#pragma once

#include <gmpxx.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "denjoy/error.hpp"
#include "denjoy/pipeline.hpp"
#include "denjoy/polynomial.hpp"
#include "denjoy/rauzy.hpp"
#include "denjoy/substitution.hpp"

namespace denjoy::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(DENJOY_TEST_DIR) / "data" / name;
}

inline std::filesystem::path golden_path(const std::string& name) {
  return std::filesystem::path(DENJOY_TEST_DIR) / "golden" / name;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Substitution fibonacci() { return Substitution::parse("a -> a b\nb -> a\n"); }

inline const Permutation& canonical_permutation() {
  static const Permutation pi({4, 3, 2, 1});
  return pi;
}

inline const char* canonical_path() { return "btbtbtbttbt"; }

inline const LoopResult& canonical_loop() {
  static const LoopResult loop = make_loop(canonical_permutation(), canonical_path());
  return loop;
}

inline const LoopAnalysis& canonical_analysis() {
  static const LoopAnalysis analysis = analyze_loop(canonical_loop(), 2000);
  return analysis;
}

inline const GammaVector& canonical_gamma() { return *canonical_analysis().substitution.gamma; }

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline IntMatrix random_matrix(Rng& rng, std::size_t n, int lo, int hi) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(rng, lo, hi);
  return m;
}

// Images of length 1..max_len over `letters` symbols; retried until primitive.
inline Substitution random_primitive(Rng& rng, std::size_t letters, int max_len) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < letters; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  for (;;) {
    std::vector<Word> images(letters);
    for (auto& w : images) {
      const int len = uniform(rng, 1, max_len);
      for (int k = 0; k < len; ++k) w.push_back(static_cast<Symbol>(uniform(rng, 0, static_cast<int>(letters) - 1)));
    }
    Substitution s(Alphabet(names), images);
    if (is_primitive(s).primitive) return s;
  }
}

inline Word random_word(Rng& rng, std::size_t letters, std::size_t len) {
  Word w;
  for (std::size_t k = 0; k < len; ++k) w.push_back(static_cast<Symbol>(uniform(rng, 0, static_cast<int>(letters) - 1)));
  return w;
}

// Integer determinant by fraction-free elimination.
inline mpz_class bareiss_det(IntMatrix m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// det(xI - M) recovered by Lagrange interpolation at x = 0..n.
inline IntPolynomial charpoly_by_interpolation(const IntMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<mpq_class> coeffs(n + 1, 0);
  for (std::size_t k = 0; k <= n; ++k) {
    IntMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = (i == j ? mpz_class(static_cast<long>(k)) : mpz_class(0)) - m(i, j);
    const mpq_class value(bareiss_det(a));
    // basis polynomial prod_{j != k} (x - j) / (k - j)
    std::vector<mpq_class> basis{1};
    mpq_class denom = 1;
    for (std::size_t j = 0; j <= n; ++j) {
      if (j == k) continue;
      std::vector<mpq_class> next(basis.size() + 1, 0);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        next[i + 1] += basis[i];
        next[i] -= basis[i] * static_cast<long>(j);
      }
      basis = next;
      denom *= static_cast<long>(k) - static_cast<long>(j);
    }
    for (std::size_t i = 0; i < basis.size(); ++i) coeffs[i] += value * basis[i] / denom;
  }
  std::vector<mpz_class> z;
  for (auto& c : coeffs) {
    c.canonicalize();
    z.push_back(c.get_num());
  }
  return IntPolynomial(z);
}

// All length-n factors of the given words.
inline std::set<Word> factors(const std::vector<Word>& words, std::size_t n) {
  std::set<Word> out;
  for (const auto& w : words)
    for (std::size_t i = 0; i + n <= w.size(); ++i) out.insert(Word(w.begin() + i, w.begin() + i + n));
  return out;
}

}  // namespace denjoy::testing
