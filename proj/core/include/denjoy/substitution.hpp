#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "denjoy/matrix.hpp"

namespace denjoy {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);
  // Symbols named "1", ..., "r".
  static Alphabet numbered(std::size_t r);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Symbol s) const { return names_.at(s); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Symbol> find(const std::string& name) const;

  // Space-separated names, "" for the empty word.
  std::string format(const Word& w) const;
  // Inverse of format; throws ParseError on unknown names.
  Word parse(const std::string& text) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, Symbol> index_;
};

// A finite window of a bi-infinite sequence: symbols[origin] is coordinate 0.
struct DottedWord {
  Word symbols;
  std::int64_t origin = 0;

  std::int64_t min_index() const { return -origin; }
  std::int64_t max_index() const { return static_cast<std::int64_t>(symbols.size()) - origin - 1; }
  Symbol at(std::int64_t n) const { return symbols.at(static_cast<std::size_t>(n + origin)); }
  // Window [-radius, radius]; requires the coordinates to exist.
  DottedWord restrict(std::int64_t radius) const;

  friend bool operator==(const DottedWord& a, const DottedWord& b) {
    return a.origin == b.origin && a.symbols == b.symbols;
  }
  friend bool operator<(const DottedWord& a, const DottedWord& b) {
    if (a.origin != b.origin) return a.origin < b.origin;
    return a.symbols < b.symbols;
  }
};

// "x_{-m} ... x_{-1} . x_0 ... x_l" with alphabet names.
std::string format_dotted(const Alphabet& alphabet, const DottedWord& w);

class Substitution {
 public:
  Substitution() = default;
  Substitution(Alphabet alphabet, std::vector<Word> images);

  // Rule-per-line text format: "a -> a b", '#' starts a comment.
  static Substitution parse(const std::string& text);
  std::string print() const;

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return images_.size(); }
  const Word& image(Symbol a) const { return images_.at(a); }
  const std::vector<Word>& images() const { return images_; }

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.alphabet_ == b.alphabet_ && a.images_ == b.images_;
  }

 private:
  Alphabet alphabet_;
  std::vector<Word> images_;
};

// Process-wide cap on constructed word lengths (DENJOY_BUDGET_SYMBOLS, else 10^7).
std::size_t symbol_budget();
void set_symbol_budget(std::size_t budget);

IntMatrix incidence_matrix(const Substitution& sigma);

struct Primitivity {
  bool primitive = false;
  std::optional<int> exponent;
};
Primitivity is_primitive(const Substitution& sigma);

// a ↦ sigma(tau(a)).
Substitution compose(const Substitution& sigma, const Substitution& tau);

Word substitute(const Substitution& sigma, const Word& w);
Word iterate(const Substitution& sigma, const Word& w, int n, std::size_t budget = symbol_budget());

// Saturating table len[n][a] = |sigma^n(a)| for n ≤ max_n.
std::vector<std::vector<std::uint64_t>> length_table(const Substitution& sigma, int max_n);

// First (resp. last) k symbols of sigma^n(w), without building the iterate.
Word prefix_of_iterate(const Substitution& sigma, const Word& w, int n, std::size_t k);
Word suffix_of_iterate(const Substitution& sigma, const Word& w, int n, std::size_t k);

struct SplitTriple {
  Word prefix;
  Symbol center = 0;
  Word suffix;
  Symbol parent = 0;

  friend bool operator==(const SplitTriple& a, const SplitTriple& b) {
    return a.prefix == b.prefix && a.center == b.center && a.suffix == b.suffix && a.parent == b.parent;
  }
  friend bool operator<(const SplitTriple& a, const SplitTriple& b) {
    if (a.parent != b.parent) return a.parent < b.parent;
    return a.prefix.size() < b.prefix.size();
  }
};

std::vector<SplitTriple> splits(const Substitution& sigma, Symbol a);

// Ultimately periodic letter sequence indexed by level.
struct LetterSequence {
  std::vector<Symbol> head;
  std::vector<Symbol> period;

  Symbol at(std::size_t level) const {
    if (level < head.size()) return head[level];
    return period[(level - head.size()) % period.size()];
  }
  bool empty() const { return head.empty() && period.empty(); }
};

// Prefix-suffix decomposition in the orientation sigma(c_{i+1}) = p_i c_i s_i.
// Triple i is head[i] for i < |head|, then the period repeats. The optional
// anchors give, per level i, the letters at coordinates -1 and +1 of the
// level-i desubstituted point (the neighbours of c_i); they complete a side
// whose prefixes (resp. suffixes) are eventually all empty.
struct PrefixSuffixSeq {
  std::vector<SplitTriple> head;
  std::vector<SplitTriple> period;
  LetterSequence left_anchor;
  LetterSequence right_anchor;

  const SplitTriple& at(std::size_t level) const {
    if (level < head.size()) return head[level];
    return period[(level - head.size()) % period.size()];
  }
};

// Checks the chain condition including the wrap of the period.
bool satisfies_chain(const Substitution& sigma, const PrefixSuffixSeq& seq);
// Shortens the period to its primitive root and absorbs the longest head
// tail that already matches the period.
PrefixSuffixSeq normalize(PrefixSuffixSeq seq);

struct ExpandInfo {
  bool left_completed_by_anchor = false;
  bool right_completed_by_anchor = false;
  int levels_used = 0;
};

// Window [-radius, radius] of the point described by seq.
DottedWord expand(const Substitution& sigma, const PrefixSuffixSeq& seq, std::size_t radius,
                  ExpandInfo* info = nullptr);

// Length-n factors of the subshift of a primitive substitution.
std::set<Word> language(const Substitution& sigma, std::size_t n);

}  // namespace denjoy
