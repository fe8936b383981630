#include "denjoy/rauzy.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include "denjoy/error.hpp"

namespace denjoy {
namespace {

std::size_t position_of(const std::vector<int>& row, int label) {
  return static_cast<std::size_t>(std::find(row.begin(), row.end(), label) - row.begin());
}

// Moves `loser` to the slot right after `winner` in `row`.
void reinsert(std::vector<int>& row, int winner, int loser) {
  row.erase(row.begin() + static_cast<std::ptrdiff_t>(position_of(row, loser)));
  row.insert(row.begin() + static_cast<std::ptrdiff_t>(position_of(row, winner) + 1), loser);
}

IntMatrix elementary(std::size_t r, int winner, int loser) {
  IntMatrix e = IntMatrix::identity(r);
  e(static_cast<std::size_t>(winner - 1), static_cast<std::size_t>(loser - 1)) += 1;
  return e;
}

// Per-step substitution: 't' sends loser to loser·winner, 'b' to winner·loser.
Substitution step_substitution(std::size_t r, const StepRecord& step) {
  std::vector<Word> images;
  for (Symbol a = 0; a < r; ++a) images.push_back({a});
  const Symbol w = static_cast<Symbol>(step.winner - 1);
  const Symbol l = static_cast<Symbol>(step.loser - 1);
  images[l] = step.type == 't' ? Word{l, w} : Word{w, l};
  return Substitution(Alphabet::numbered(r), std::move(images));
}

}  // namespace

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int r = size();
  if (r == 0) throw ParseError("empty permutation");
  std::vector<bool> seen(static_cast<std::size_t>(r), false);
  for (int v : images_) {
    if (v < 1 || v > r || seen[static_cast<std::size_t>(v - 1)])
      throw ParseError("not a permutation of 1.." + std::to_string(r) + ": " + to_string());
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
}

Permutation Permutation::parse(const std::string& text) {
  std::istringstream in(text);
  std::vector<int> images;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ParseError("bad permutation entry '" + token + "'");
    images.push_back(v);
  }
  return Permutation(std::move(images));
}

bool Permutation::irreducible() const {
  int max_seen = 0;
  for (int k = 1; k < size(); ++k) {
    max_seen = std::max(max_seen, (*this)(k));
    if (max_seen == k) return false;
  }
  return true;
}

std::string Permutation::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(images_[i]);
  }
  return out;
}

RauzyState RauzyState::from_permutation(const Permutation& pi) {
  if (!pi.irreducible()) throw ReduciblePermutation("permutation " + pi.to_string() + " is reducible");
  RauzyState s;
  const int r = pi.size();
  s.top.resize(static_cast<std::size_t>(r));
  s.bottom.resize(static_cast<std::size_t>(r));
  std::iota(s.top.begin(), s.top.end(), 1);
  for (int j = 1; j <= r; ++j) s.bottom[static_cast<std::size_t>(pi(j) - 1)] = j;
  return s;
}

Permutation RauzyState::permutation() const {
  std::vector<int> images;
  for (int label : top) images.push_back(static_cast<int>(position_of(bottom, label)) + 1);
  return Permutation(std::move(images));
}

std::string RauzyState::to_string() const {
  auto row = [](const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
    return out;
  };
  return "(" + row(top) + " / " + row(bottom) + ")";
}

RauzyState rauzy_move(const RauzyState& state, char type, StepRecord* record) {
  if (type != 't' && type != 'b') throw ParseError(std::string("unknown Rauzy move '") + type + "'");
  RauzyState next = state;
  const int winner = type == 't' ? state.top.back() : state.bottom.back();
  const int loser = type == 't' ? state.bottom.back() : state.top.back();
  if (type == 't')
    reinsert(next.bottom, winner, loser);
  else
    reinsert(next.top, winner, loser);
  if (record) {
    record->type = type;
    record->winner = winner;
    record->loser = loser;
    record->matrix = elementary(state.top.size(), winner, loser);
  }
  return next;
}

StepResult rauzy_step(const std::vector<FieldElement>& lambda, const RauzyState& state, int root_index) {
  const int last_top = state.top.back();
  const int last_bottom = state.bottom.back();
  const auto& lt = lambda.at(static_cast<std::size_t>(last_top - 1));
  const auto& lb = lambda.at(static_cast<std::size_t>(last_bottom - 1));
  const int c = compare_at(lt, lb, root_index);
  if (c == 0) throw KeaneTie("last intervals of the domain and the image have equal length");
  StepResult out;
  out.state = rauzy_move(state, c > 0 ? 't' : 'b', &out.record);
  out.lambda = lambda;
  auto& w = out.lambda[static_cast<std::size_t>(out.record.winner - 1)];
  w -= lambda[static_cast<std::size_t>(out.record.loser - 1)];
  return out;
}

std::size_t RauzyDiagram::index_of(const RauzyState& s) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), s);
  if (it == vertices.end() || !(*it == s)) throw ParseError("state not in the diagram: " + s.to_string());
  return static_cast<std::size_t>(it - vertices.begin());
}

RauzyDiagram rauzy_diagram(const Permutation& pi) {
  const RauzyState base = RauzyState::from_permutation(pi);
  std::vector<RauzyState> found{base};
  std::queue<RauzyState> queue;
  queue.push(base);
  auto known = [&](const RauzyState& s) { return std::find(found.begin(), found.end(), s) != found.end(); };
  while (!queue.empty()) {
    const RauzyState s = queue.front();
    queue.pop();
    for (char type : {'t', 'b'}) {
      RauzyState n = rauzy_move(s, type);
      if (!known(n)) {
        found.push_back(n);
        queue.push(n);
      }
    }
  }
  RauzyDiagram d;
  d.vertices = std::move(found);
  std::sort(d.vertices.begin(), d.vertices.end());
  for (const auto& s : d.vertices) d.edges.push_back({d.index_of(rauzy_move(s, 't')), d.index_of(rauzy_move(s, 'b'))});
  return d;
}

Substitution loop_substitution(const LoopResult& loop) {
  if (loop.steps.empty()) throw ParseError("a loop needs at least one step");
  const std::size_t r = loop.base.top.size();
  Substitution sigma = step_substitution(r, loop.steps.front());
  for (std::size_t i = 1; i < loop.steps.size(); ++i) sigma = compose(sigma, step_substitution(r, loop.steps[i]));
  if (!(incidence_matrix(sigma) == loop.r.transpose()))
    throw ConventionMismatch("incidence matrix of the loop substitution differs from the transposed loop matrix");
  return sigma;
}

Substitution loop_substitution(const RauzyState& base, const std::string& path) {
  LoopResult loop;
  loop.base = base;
  loop.r = IntMatrix::identity(base.top.size());
  RauzyState s = base;
  for (char type : path) {
    StepRecord rec;
    s = rauzy_move(s, type, &rec);
    loop.r = loop.r * rec.matrix;
    loop.steps.push_back(std::move(rec));
  }
  return loop_substitution(loop);
}

namespace {

LoopResult finish_loop(const RauzyState& base, std::string path, std::vector<StepRecord> steps, IntMatrix r,
                       Theta2Choice choice) {
  LoopResult loop;
  loop.path = std::move(path);
  loop.base = base;
  loop.steps = std::move(steps);
  loop.r = std::move(r);
  loop.perron = perron_field(loop.r);
  loop.hypotheses = check_hypotheses(*loop.perron.field, choice);
  loop.sigma = loop_substitution(loop);
  return loop;
}

}  // namespace

LoopResult make_loop(const Permutation& pi, const std::string& path, Theta2Choice choice) {
  if (path.empty()) throw ParseError("a loop needs at least one step");
  const RauzyState base = RauzyState::from_permutation(pi);
  RauzyState s = base;
  std::vector<StepRecord> steps;
  IntMatrix r = IntMatrix::identity(base.top.size());
  for (char type : path) {
    StepRecord rec;
    s = rauzy_move(s, type, &rec);
    r = r * rec.matrix;
    steps.push_back(std::move(rec));
  }
  if (!(s == base)) throw ParseError("path '" + path + "' does not return to the base state");
  return finish_loop(base, path, std::move(steps), std::move(r), choice);
}

std::vector<LoopResult> loop_search(const Permutation& pi, int max_len, LoopFilter filter, Theta2Choice choice) {
  const RauzyState base = RauzyState::from_permutation(pi);
  const std::size_t n = base.top.size();

  struct Frame {
    RauzyState state;
    IntMatrix r;
  };
  std::vector<Frame> stack{{base, IntMatrix::identity(n)}};
  std::vector<StepRecord> steps;
  std::string path;
  std::vector<LoopResult> out;

  // Positivity is only required when the path closes up at the base.
  auto dfs = [&](auto&& self) -> void {
    const Frame& top = stack.back();
    if (!path.empty() && top.state == base && top.r.all_positive()) {
      LoopResult loop = finish_loop(base, path, steps, top.r, choice);
      const bool keep = filter != LoopFilter::Passing ||
                        (loop.hypotheses.passed && loop.perron.field->degree() >= 3);
      if (keep) out.push_back(std::move(loop));
    }
    if (static_cast<int>(path.size()) == max_len) return;
    for (char type : {'t', 'b'}) {
      StepRecord rec;
      RauzyState next = rauzy_move(stack.back().state, type, &rec);
      IntMatrix r = stack.back().r * rec.matrix;
      stack.push_back({std::move(next), std::move(r)});
      steps.push_back(std::move(rec));
      path.push_back(type);
      self(self);
      path.pop_back();
      steps.pop_back();
      stack.pop_back();
    }
  };
  dfs(dfs);

  std::sort(out.begin(), out.end(), [](const LoopResult& a, const LoopResult& b) {
    if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
    return a.path < b.path;
  });
  return out;
}

// ------------------------------------------------------------------ IET

FieldElement IETExact::top_start(int label) const {
  FieldElement acc = lambda.front().field()->zero();
  for (int l : state.top) {
    if (l == label) return acc;
    acc += lambda[static_cast<std::size_t>(l - 1)];
  }
  throw ParseError("label " + std::to_string(label) + " not in the exchange");
}

FieldElement IETExact::bottom_start(int label) const {
  FieldElement acc = lambda.front().field()->zero();
  for (int l : state.bottom) {
    if (l == label) return acc;
    acc += lambda[static_cast<std::size_t>(l - 1)];
  }
  throw ParseError("label " + std::to_string(label) + " not in the exchange");
}

namespace {

int locate_in(const IETExact& iet, const std::vector<int>& row, const FieldElement& x) {
  if (x.sign_at(iet.root_index) < 0) throw CodingMismatch("point lies left of 0");
  FieldElement end = x.field()->zero();
  for (int l : row) {
    end += iet.lambda[static_cast<std::size_t>(l - 1)];
    if (compare_at(x, end, iet.root_index) < 0) return l;
  }
  throw CodingMismatch("point lies right of the interval");
}

}  // namespace

int IETExact::locate(const FieldElement& x) const { return locate_in(*this, state.top, x); }

int IETExact::locate_image(const FieldElement& x) const { return locate_in(*this, state.bottom, x); }

FieldElement IETExact::apply(const FieldElement& x) const {
  const int l = locate(x);
  return x - top_start(l) + bottom_start(l);
}

FieldElement IETExact::apply_inverse(const FieldElement& x) const {
  const int l = locate_image(x);
  return x - bottom_start(l) + top_start(l);
}

bool IETExact::is_breakpoint(const FieldElement& x) const {
  for (const auto* row : {&state.top, &state.bottom}) {
    FieldElement end = x.field()->zero();
    for (std::size_t i = 0; i + 1 < row->size(); ++i) {
      end += lambda[static_cast<std::size_t>((*row)[i] - 1)];
      if (x == end) return true;
    }
  }
  return false;
}

CodingResult coding(const IETExact& iet, const FieldElement& t, std::size_t n_steps) {
  const std::size_t r = iet.lambda.size();
  std::vector<FieldElement> shift(r);  // T(x) = x + shift[label - 1] on the domain interval of label
  for (std::size_t l = 1; l <= r; ++l)
    shift[l - 1] = iet.bottom_start(static_cast<int>(l)) - iet.top_start(static_cast<int>(l));

  CodingResult out;
  out.word.origin = static_cast<std::int64_t>(n_steps);
  out.word.symbols.assign(2 * n_steps + 1, 0);
  FieldElement x = t;
  for (std::size_t i = 0; i <= n_steps; ++i) {
    if (iet.is_breakpoint(x)) out.endpoint_orbit = true;
    const int l = iet.locate(x);
    out.word.symbols[n_steps + i] = static_cast<Symbol>(l - 1);
    if (i < n_steps) x += shift[static_cast<std::size_t>(l - 1)];
  }
  x = t;
  for (std::size_t i = 1; i <= n_steps; ++i) {
    x -= shift[static_cast<std::size_t>(iet.locate_image(x) - 1)];
    if (iet.is_breakpoint(x)) out.endpoint_orbit = true;
    out.word.symbols[n_steps - i] = static_cast<Symbol>(iet.locate(x) - 1);
  }
  return out;
}

}  // namespace denjoy
