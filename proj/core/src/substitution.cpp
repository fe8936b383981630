#include "denjoy/substitution.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "denjoy/error.hpp"
#include "denjoy/numfield.hpp"

namespace denjoy {
namespace {

constexpr std::uint64_t kSaturated = std::uint64_t{1} << 62;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return std::min(kSaturated, a + b); }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::size_t initial_budget() {
  if (const char* env = std::getenv("DENJOY_BUDGET_SYMBOLS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 10'000'000;
}

std::size_t& budget_ref() {
  static std::size_t budget = initial_budget();
  return budget;
}

// Lazily grown saturating length table.
class Lengths {
 public:
  explicit Lengths(const Substitution& sigma) : sigma_(sigma) {
    table_.emplace_back(sigma.size(), 1);
  }

  std::uint64_t of(Symbol a, int n) {
    while (static_cast<int>(table_.size()) <= n) {
      const auto& prev = table_.back();
      std::vector<std::uint64_t> next(sigma_.size(), 0);
      for (Symbol b = 0; b < sigma_.size(); ++b)
        for (Symbol c : sigma_.image(b)) next[b] = sat_add(next[b], prev[c]);
      table_.push_back(std::move(next));
    }
    return table_[static_cast<std::size_t>(n)][a];
  }

  std::uint64_t of(const Word& w, int n) {
    std::uint64_t total = 0;
    for (Symbol a : w) total = sat_add(total, of(a, n));
    return total;
  }

 private:
  const Substitution& sigma_;
  std::vector<std::vector<std::uint64_t>> table_;
};

// Levels i ≥ result all have empty prefixes (or suffixes); SIZE_MAX if none.
std::size_t first_empty_level(const PrefixSuffixSeq& seq, bool prefixes) {
  auto empty_at = [&](const SplitTriple& t) { return prefixes ? t.prefix.empty() : t.suffix.empty(); };
  if (!std::all_of(seq.period.begin(), seq.period.end(), empty_at)) return SIZE_MAX;
  std::size_t level = seq.head.size();
  while (level > 0 && empty_at(seq.head[level - 1])) --level;
  return level;
}

}  // namespace

// ------------------------------------------------------------------ Alphabet

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], static_cast<Symbol>(i)).second)
      throw ParseError("duplicate symbol '" + names_[i] + "'");
  }
}

Alphabet Alphabet::numbered(std::size_t r) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= r; ++i) names.push_back(std::to_string(i));
  return Alphabet(std::move(names));
}

std::optional<Symbol> Alphabet::find(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Alphabet::format(const Word& w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += name(w[i]);
  }
  return out;
}

Word Alphabet::parse(const std::string& text) const {
  Word w;
  for (const auto& t : tokens(text)) {
    const auto s = find(t);
    if (!s) throw ParseError("unknown symbol '" + t + "'");
    w.push_back(*s);
  }
  return w;
}

DottedWord DottedWord::restrict(std::int64_t radius) const {
  if (radius > origin || radius > max_index())
    throw LengthBudgetExceeded("window of radius " + std::to_string(radius) + " not available");
  DottedWord out;
  out.origin = radius;
  out.symbols.assign(symbols.begin() + (origin - radius), symbols.begin() + (origin + radius + 1));
  return out;
}

std::string format_dotted(const Alphabet& alphabet, const DottedWord& w) {
  Word left(w.symbols.begin(), w.symbols.begin() + w.origin);
  Word right(w.symbols.begin() + w.origin, w.symbols.end());
  std::string out = alphabet.format(left);
  out += left.empty() ? "." : " .";
  if (!right.empty()) out += " " + alphabet.format(right);
  return out;
}

// -------------------------------------------------------------- Substitution

Substitution::Substitution(Alphabet alphabet, std::vector<Word> images)
    : alphabet_(std::move(alphabet)), images_(std::move(images)) {
  if (alphabet_.size() == 0) throw ParseError("empty alphabet");
  if (images_.size() != alphabet_.size()) throw ParseError("one image per symbol is required");
  for (std::size_t a = 0; a < images_.size(); ++a) {
    if (images_[a].empty()) throw ParseError("image of '" + alphabet_.name(static_cast<Symbol>(a)) + "' is empty");
    for (Symbol s : images_[a])
      if (s >= alphabet_.size()) throw ParseError("image symbol out of range");
  }
}

Substitution Substitution::parse(const std::string& text) {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> rhs;
  std::vector<int> rhs_line;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto arrow = line.find("->");
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (arrow == std::string::npos) throw ParseError(where + "expected a rule of the form 'a -> w'");
    const auto lhs = tokens(line.substr(0, arrow));
    if (lhs.size() != 1) throw ParseError(where + "expected exactly one symbol before '->'");
    auto image = tokens(line.substr(arrow + 2));
    if (image.empty()) throw ParseError(where + "image of '" + lhs[0] + "' is empty");
    for (const auto& t : image)
      if (t.find("->") != std::string::npos) throw ParseError(where + "more than one '->'");
    if (std::find(names.begin(), names.end(), lhs[0]) != names.end())
      throw ParseError(where + "symbol '" + lhs[0] + "' defined twice");
    names.push_back(lhs[0]);
    rhs.push_back(std::move(image));
    rhs_line.push_back(line_no);
  }
  if (names.empty()) throw ParseError("no substitution rules found");
  Alphabet alphabet(names);
  std::vector<Word> images;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    Word w;
    for (const auto& t : rhs[i]) {
      const auto s = alphabet.find(t);
      if (!s)
        throw ParseError("line " + std::to_string(rhs_line[i]) + ": symbol '" + t +
                         "' has no rule of its own");
      w.push_back(*s);
    }
    images.push_back(std::move(w));
  }
  return Substitution(std::move(alphabet), std::move(images));
}

std::string Substitution::print() const {
  std::string out;
  for (Symbol a = 0; a < size(); ++a) out += alphabet_.name(a) + " -> " + alphabet_.format(images_[a]) + "\n";
  return out;
}

std::size_t symbol_budget() { return budget_ref(); }
void set_symbol_budget(std::size_t budget) { budget_ref() = budget; }

IntMatrix incidence_matrix(const Substitution& sigma) {
  const std::size_t r = sigma.size();
  IntMatrix m(r, r);
  for (Symbol a = 0; a < r; ++a)
    for (Symbol b : sigma.image(a)) m(a, b) += 1;
  return m;
}

Primitivity is_primitive(const Substitution& sigma) {
  const auto n = primitivity_exponent(incidence_matrix(sigma));
  return {n.has_value(), n};
}

Substitution compose(const Substitution& sigma, const Substitution& tau) {
  if (!(sigma.alphabet() == tau.alphabet())) throw ParseError("composition over different alphabets");
  std::vector<Word> images;
  for (Symbol a = 0; a < tau.size(); ++a) images.push_back(substitute(sigma, tau.image(a)));
  return Substitution(sigma.alphabet(), std::move(images));
}

Word substitute(const Substitution& sigma, const Word& w) {
  Word out;
  for (Symbol a : w) {
    const Word& img = sigma.image(a);
    out.insert(out.end(), img.begin(), img.end());
  }
  return out;
}

Word iterate(const Substitution& sigma, const Word& w, int n, std::size_t budget) {
  Lengths lengths(sigma);
  if (lengths.of(w, n) > budget)
    throw LengthBudgetExceeded("sigma^" + std::to_string(n) + " of a word of length " +
                               std::to_string(w.size()) + " exceeds the budget of " +
                               std::to_string(budget) + " symbols");
  Word cur = w;
  for (int i = 0; i < n; ++i) cur = substitute(sigma, cur);
  return cur;
}

std::vector<std::vector<std::uint64_t>> length_table(const Substitution& sigma, int max_n) {
  Lengths lengths(sigma);
  std::vector<std::vector<std::uint64_t>> out;
  for (int n = 0; n <= max_n; ++n) {
    std::vector<std::uint64_t> row;
    for (Symbol a = 0; a < sigma.size(); ++a) row.push_back(lengths.of(a, n));
    out.push_back(std::move(row));
  }
  return out;
}

Word prefix_of_iterate(const Substitution& sigma, const Word& w, int n, std::size_t k) {
  Word out;
  if (k == 0) return out;
  std::vector<std::pair<Symbol, int>> stack;
  for (auto it = w.rbegin(); it != w.rend(); ++it) stack.emplace_back(*it, n);
  while (!stack.empty() && out.size() < k) {
    const auto [a, d] = stack.back();
    stack.pop_back();
    if (d == 0) {
      out.push_back(a);
      continue;
    }
    const Word& img = sigma.image(a);
    for (auto it = img.rbegin(); it != img.rend(); ++it) stack.emplace_back(*it, d - 1);
  }
  return out;
}

Word suffix_of_iterate(const Substitution& sigma, const Word& w, int n, std::size_t k) {
  Word out;
  if (k == 0) return out;
  std::vector<std::pair<Symbol, int>> stack;
  for (Symbol a : w) stack.emplace_back(a, n);
  while (!stack.empty() && out.size() < k) {
    const auto [a, d] = stack.back();
    stack.pop_back();
    if (d == 0) {
      out.push_back(a);
      continue;
    }
    for (Symbol b : sigma.image(a)) stack.emplace_back(b, d - 1);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<SplitTriple> splits(const Substitution& sigma, Symbol a) {
  const Word& img = sigma.image(a);
  std::vector<SplitTriple> out;
  for (std::size_t i = 0; i < img.size(); ++i) {
    SplitTriple t;
    t.prefix.assign(img.begin(), img.begin() + static_cast<std::ptrdiff_t>(i));
    t.center = img[i];
    t.suffix.assign(img.begin() + static_cast<std::ptrdiff_t>(i) + 1, img.end());
    t.parent = a;
    out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------- prefix-suffix sequences

bool satisfies_chain(const Substitution& sigma, const PrefixSuffixSeq& seq) {
  if (seq.period.empty()) return false;
  auto lcm = [](std::size_t a, std::size_t b) { return a / std::gcd(a, b) * b; };
  std::size_t horizon = std::max({seq.head.size(), seq.left_anchor.head.size(), seq.right_anchor.head.size()});
  std::size_t cycle = seq.period.size();
  if (!seq.left_anchor.period.empty()) cycle = lcm(cycle, seq.left_anchor.period.size());
  if (!seq.right_anchor.period.empty()) cycle = lcm(cycle, seq.right_anchor.period.size());
  horizon += cycle;
  for (std::size_t i = 0; i < horizon; ++i) {
    const SplitTriple& t = seq.at(i);
    const SplitTriple& up = seq.at(i + 1);
    if (t.parent != up.center) return false;
    Word joined = t.prefix;
    joined.push_back(t.center);
    joined.insert(joined.end(), t.suffix.begin(), t.suffix.end());
    if (joined != sigma.image(t.parent)) return false;
    if (!seq.left_anchor.empty()) {
      const Symbol expect = t.prefix.empty() ? sigma.image(seq.left_anchor.at(i + 1)).back() : t.prefix.back();
      if (seq.left_anchor.at(i) != expect) return false;
    }
    if (!seq.right_anchor.empty()) {
      const Symbol expect = t.suffix.empty() ? sigma.image(seq.right_anchor.at(i + 1)).front() : t.suffix.front();
      if (seq.right_anchor.at(i) != expect) return false;
    }
  }
  return true;
}

PrefixSuffixSeq normalize(PrefixSuffixSeq seq) {
  const std::size_t p = seq.period.size();
  for (std::size_t q = 1; q < p; ++q) {
    if (p % q != 0) continue;
    bool repeats = true;
    for (std::size_t i = 0; i + q < p && repeats; ++i) repeats = seq.period[i] == seq.period[i + q];
    if (repeats) {
      seq.period.resize(q);
      break;
    }
  }
  while (!seq.head.empty() && seq.head.back() == seq.period.back()) {
    seq.head.pop_back();
    std::rotate(seq.period.rbegin(), seq.period.rbegin() + 1, seq.period.rend());
  }
  return seq;
}

DottedWord expand(const Substitution& sigma, const PrefixSuffixSeq& seq, std::size_t radius, ExpandInfo* info) {
  if (seq.period.empty()) throw InsufficientGrowth("prefix-suffix sequence without a period");
  if (2 * radius + 1 > symbol_budget())
    throw LengthBudgetExceeded("window of radius " + std::to_string(radius) + " exceeds the symbol budget");
  Lengths lengths(sigma);
  ExpandInfo local;

  // Completes a side from level m on, where the side is σ^m(L) with L the
  // one-sided limit ending (or starting) with the anchor letters.
  auto complete = [&](const LetterSequence& anchor, std::size_t m, std::size_t need, bool left) {
    if (anchor.empty())
      throw InsufficientGrowth(std::string(left ? "prefixes" : "suffixes") +
                               " are eventually empty and no anchor letters were given");
    std::size_t level = m;
    while (lengths.of(anchor.at(level), static_cast<int>(level)) < need) ++level;
    local.levels_used = std::max(local.levels_used, static_cast<int>(level));
    const Word seed{anchor.at(level)};
    return left ? suffix_of_iterate(sigma, seed, static_cast<int>(level), need)
                : prefix_of_iterate(sigma, seed, static_cast<int>(level), need);
  };

  // Left side, built outward from the dot as a list of blocks.
  std::vector<Word> left_blocks;
  std::size_t left_len = 0;
  const std::size_t left_stop = first_empty_level(seq, true);
  for (std::size_t i = 0; left_len < radius; ++i) {
    const std::size_t need = radius - left_len;
    Word block;
    if (i >= left_stop) {
      block = complete(seq.left_anchor, i, need, true);
      local.left_completed_by_anchor = true;
    } else {
      block = suffix_of_iterate(sigma, seq.at(i).prefix, static_cast<int>(i), need);
    }
    local.levels_used = std::max(local.levels_used, static_cast<int>(i));
    left_len += block.size();
    left_blocks.push_back(std::move(block));
    if (i >= left_stop) break;
  }

  Word right{seq.at(0).center};
  const std::size_t right_stop = first_empty_level(seq, false);
  for (std::size_t i = 0; right.size() < radius + 1; ++i) {
    const std::size_t need = radius + 1 - right.size();
    Word block;
    if (i >= right_stop) {
      block = complete(seq.right_anchor, i, need, false);
      local.right_completed_by_anchor = true;
    } else {
      block = prefix_of_iterate(sigma, seq.at(i).suffix, static_cast<int>(i), need);
    }
    local.levels_used = std::max(local.levels_used, static_cast<int>(i));
    right.insert(right.end(), block.begin(), block.end());
    if (i >= right_stop) break;
  }

  DottedWord out;
  out.origin = static_cast<std::int64_t>(radius);
  out.symbols.reserve(2 * radius + 1);
  for (auto it = left_blocks.rbegin(); it != left_blocks.rend(); ++it)
    out.symbols.insert(out.symbols.end(), it->begin(), it->end());
  // Drop the excess on the far left.
  if (left_len > radius) out.symbols.erase(out.symbols.begin(), out.symbols.begin() + static_cast<std::ptrdiff_t>(left_len - radius));
  out.symbols.insert(out.symbols.end(), right.begin(), right.begin() + static_cast<std::ptrdiff_t>(radius + 1));
  if (info) *info = local;
  return out;
}

std::set<Word> language(const Substitution& sigma, std::size_t n) {
  std::set<Word> out;
  if (n == 0) {
    out.insert(Word{});
    return out;
  }
  // Legal two-letter words: closure of the 2-factors of the images.
  std::set<std::pair<Symbol, Symbol>> pairs;
  auto add_pairs = [&](const Word& w) {
    bool grew = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) grew |= pairs.emplace(w[i], w[i + 1]).second;
    return grew;
  };
  for (Symbol a = 0; a < sigma.size(); ++a) add_pairs(sigma.image(a));
  for (bool grew = true; grew;) {
    grew = false;
    const auto snapshot = pairs;
    for (const auto& [u, v] : snapshot) grew |= add_pairs(substitute(sigma, Word{u, v}));
  }
  if (n == 1) {
    for (Symbol a = 0; a < sigma.size(); ++a) out.insert(Word{a});
    return out;
  }
  // Every length-n factor sits inside σ^k(uv) for a legal uv once all
  // σ^k-blocks have length at least n - 1.
  Lengths lengths(sigma);
  int k = 0;
  for (;; ++k) {
    std::uint64_t shortest = kSaturated;
    for (Symbol a = 0; a < sigma.size(); ++a) shortest = std::min(shortest, lengths.of(a, k));
    if (shortest + 1 >= n) break;
    if (k > 64) throw LengthBudgetExceeded("substitution does not grow (not primitive?)");
  }
  for (const auto& [u, v] : pairs) {
    const Word w = iterate(sigma, Word{u, v}, k);
    for (std::size_t i = 0; i + n <= w.size(); ++i) out.emplace(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i + n));
  }
  return out;
}

}  // namespace denjoy
