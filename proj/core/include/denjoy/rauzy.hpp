#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "denjoy/matrix.hpp"
#include "denjoy/numfield.hpp"
#include "denjoy/substitution.hpp"

namespace denjoy {

// Permutation π of {1..r}: interval j of the domain is placed at position
// π(j) of the image.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);
  // "4 3 2 1"
  static Permutation parse(const std::string& text);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int j) const { return images_.at(static_cast<std::size_t>(j - 1)); }
  const std::vector<int>& images() const { return images_; }
  bool irreducible() const;
  std::string to_string() const;

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.images_ == b.images_; }

 private:
  std::vector<int> images_;
};

// Labelled Rauzy state: the order of the labels 1..r in the domain (top) and
// in the image (bottom).
struct RauzyState {
  std::vector<int> top;
  std::vector<int> bottom;

  static RauzyState from_permutation(const Permutation& pi);
  Permutation permutation() const;
  std::string to_string() const;

  friend bool operator==(const RauzyState& a, const RauzyState& b) {
    return a.top == b.top && a.bottom == b.bottom;
  }
  friend bool operator<(const RauzyState& a, const RauzyState& b) {
    return a.top != b.top ? a.top < b.top : a.bottom < b.bottom;
  }
};

// 't': the last domain interval is longer; 'b': the last image interval is.
struct StepRecord {
  char type = 't';
  int winner = 0;  // label, 1-based
  int loser = 0;
  IntMatrix matrix;  // identity plus a unit entry at (winner, loser)
};

// Move of the given type without lengths.
RauzyState rauzy_move(const RauzyState& state, char type, StepRecord* record = nullptr);

struct StepResult {
  std::vector<FieldElement> lambda;
  RauzyState state;
  StepRecord record;
};

// One Rauzy induction step; compares lengths by sign at `root_index`.
StepResult rauzy_step(const std::vector<FieldElement>& lambda, const RauzyState& state, int root_index);

struct RauzyDiagram {
  std::vector<RauzyState> vertices;  // sorted
  // edges[v][0] for type 't', edges[v][1] for type 'b': target vertex index.
  std::vector<std::array<std::size_t, 2>> edges;
  std::size_t index_of(const RauzyState& s) const;
};

RauzyDiagram rauzy_diagram(const Permutation& pi);

struct LoopResult {
  std::string path;  // edge types, e.g. "btbt"
  RauzyState base;
  std::vector<StepRecord> steps;
  IntMatrix r;
  PerronData perron;
  HypothesisReport hypotheses;
  Substitution sigma;
};

enum class LoopFilter { All, Positive, Passing };

// Loops at the base state of length ≤ max_len with strictly positive product,
// sorted by (length, path). `Passing` keeps loops that satisfy the
// hypotheses with a field of degree ≥ 3.
std::vector<LoopResult> loop_search(const Permutation& pi, int max_len, LoopFilter filter = LoopFilter::Passing,
                                    Theta2Choice choice = {});

// Builds the loop record for an explicit path (must return to the base).
LoopResult make_loop(const Permutation& pi, const std::string& path, Theta2Choice choice = {});

// Composition of the per-step substitutions along the loop.
Substitution loop_substitution(const LoopResult& loop);
Substitution loop_substitution(const RauzyState& base, const std::string& path);

// Interval exchange with field-valued lengths summing to 1.
struct IETExact {
  std::vector<FieldElement> lambda;  // indexed by label - 1
  RauzyState state;
  int root_index = 0;  // embedding used for comparisons (the Perron root)

  FieldElement top_start(int label) const;
  FieldElement bottom_start(int label) const;
  // Label of the domain interval containing x (right-continuous).
  int locate(const FieldElement& x) const;
  // Label of the image interval containing x.
  int locate_image(const FieldElement& x) const;
  FieldElement apply(const FieldElement& x) const;
  FieldElement apply_inverse(const FieldElement& x) const;
  // Interior domain and image breakpoints.
  bool is_breakpoint(const FieldElement& x) const;
};

struct CodingResult {
  DottedWord word;  // labels as symbols 0..r-1
  bool endpoint_orbit = false;
};

// Itinerary of t for times -n_steps..n_steps.
CodingResult coding(const IETExact& iet, const FieldElement& t, std::size_t n_steps);

}  // namespace denjoy
