#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "denjoy/error.hpp"
#include "denjoy/pipeline.hpp"
#include "denjoy/serialize.hpp"

namespace denjoy::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

struct Config {
  std::string command;
  std::vector<std::string> echo;
  unsigned precision_bits = 256;
  std::size_t radius = 2000;
  std::size_t atoms = 10000;
  int max_len = 12;
  std::string theta2_policy = "largest";
  std::string out_dir;
  bool require_hypotheses = false;
  bool timings = false;

  std::string input_path;              // analyze
  std::vector<std::string> permutation;  // search, denjoy
  std::string path;                    // denjoy: explicit loop
  std::size_t loop_index = 0;          // denjoy: index into the catalog
  std::string plot_kind;               // plotdata
  std::string from_dir;                // plotdata
};

// Thrown to leave a command with a specific exit code.
struct Exit {
  int code;
  std::string message;
};

class Timer {
 public:
  void mark(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    entries_[name] = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
  }
  json to_json() const { return entries_; }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  std::map<std::string, double> entries_;
};

Warnings dedupe(const Warnings& in) {
  Warnings out;
  for (const auto& w : in) {
    bool seen = false;
    for (const auto& o : out) seen = seen || (o.kind == w.kind && o.message == w.message);
    if (!seen) out.push_back(w);
  }
  return out;
}

json run_report(const Config& cfg, const Warnings& warnings, const Timer& timer, json result) {
  json report = {{"command", cfg.echo},
                 {"version", kVersion},
                 {"precision_bits", cfg.precision_bits},
                 {"warnings", to_json(dedupe(warnings))},
                 {"result", std::move(result)}};
  if (cfg.timings) report["timings_ms"] = timer.to_json();
  return report;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Exit{kInputError, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Exit{kInputError, "cannot write " + path.string()};
  out << text;
}

void emit(const Config& cfg, const std::string& name, const json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (cfg.out_dir.empty()) {
    out << text;
    return;
  }
  fs::create_directories(cfg.out_dir);
  write_file(fs::path(cfg.out_dir) / name, text);
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : " ") + p;
  return s;
}

json input_block(const Config& cfg) {
  return {{"command", cfg.command},
          {"permutation", join(cfg.permutation)},
          {"path", cfg.path},
          {"loop_index", cfg.loop_index},
          {"max_len", cfg.max_len},
          {"theta2_policy", cfg.theta2_policy},
          {"radius", cfg.radius},
          {"atoms", cfg.atoms},
          {"precision_bits", cfg.precision_bits}};
}

// --------------------------------------------------------------- analyze

json analyze_payload(const Substitution& sigma, const Config& cfg, Warnings& warnings, bool& passed) {
  const Theta2Choice choice = parse_theta2_policy(cfg.theta2_policy);
  const SubstitutionAnalysis a = analyze_substitution(sigma, choice);
  json result = {{"substitution", sigma.print()},
                 {"incidence_matrix", to_json(a.incidence)},
                 {"primitive", a.primitivity.primitive}};
  result["primitivity_exponent"] = a.primitivity.exponent ? json(*a.primitivity.exponent) : json(nullptr);
  if (a.perron) {
    result["charpoly"] = to_json(a.perron->charpoly);
    result["min_poly"] = to_json(a.perron->field->min_poly());
    result["theta1"] = real_string(a.perron->field->root_value(a.perron->field->perron_index()));
  }
  result["hypotheses"] = to_json(a.hypotheses);
  passed = a.hypotheses.passed;
  if (!a.gamma) return result;

  const GammaVector& gamma = *a.gamma;
  json g = json::array();
  for (const auto& x : gamma.values) g.push_back({{"exact", to_json(x)}, {"decimal", real_string(x.value_at(gamma.root_index))}});
  result["gamma"] = g;
  result["theta2"] = real_string(gamma.field->root_value(gamma.root_index));

  const MinimalPointsResult mp = minimal_points(gamma, sigma, cfg.radius, &warnings);
  json cands = json::array();
  for (const auto& c : mp.candidates) cands.push_back(candidate_json(sigma.alphabet(), gamma, c));
  result["minimal_points"] = {{"stabilization_level", mp.stabilization_level},
                              {"level_cap_hit", mp.level_cap_hit},
                              {"candidates", cands},
                              {"rejected", mp.rejected.size()}};
  result["value_table"] = value_table_json(sigma.alphabet(), gamma, mp.values);
  if (!mp.candidates.empty())
    result["growth"] = growth_json(growth_exponent(gamma, sigma, mp.candidates.front(), cfg.radius));
  return result;
}

int cmd_analyze(const Config& cfg, std::ostream& out) {
  Timer timer;
  Warnings warnings;
  Substitution sigma;
  try {
    sigma = Substitution::parse(read_file(cfg.input_path));
  } catch (const ParseError& e) {
    throw Exit{kInputError, cfg.input_path + ": " + e.what()};
  }
  bool passed = false;
  json result = analyze_payload(sigma, cfg, warnings, passed);
  result["input"] = input_block(cfg);
  result["input"]["substitution"] = sigma.print();
  timer.mark("analyze");
  emit(cfg, "report.json", run_report(cfg, warnings, timer, result), out);
  if (cfg.require_hypotheses && !passed) throw Exit{kHypothesisFailure, "hypotheses not satisfied"};
  return kOk;
}

// ---------------------------------------------------------------- search

Permutation permutation_of(const Config& cfg) {
  const Permutation pi = Permutation::parse(join(cfg.permutation));
  if (!pi.irreducible()) throw ReduciblePermutation("permutation " + pi.to_string() + " is reducible");
  return pi;
}

int cmd_search(const Config& cfg, std::ostream& out) {
  Timer timer;
  const Permutation pi = permutation_of(cfg);
  const auto loops = loop_search(pi, cfg.max_len, LoopFilter::Passing, parse_theta2_policy(cfg.theta2_policy));
  json catalog = json::array();
  for (const auto& l : loops) catalog.push_back(loop_json(l));
  timer.mark("search");
  json result = {{"permutation", pi.to_string()}, {"max_len", cfg.max_len}, {"loops", catalog}};
  emit(cfg, "search.json", run_report(cfg, {}, timer, result), out);
  return kOk;
}

// ---------------------------------------------------------------- denjoy

LoopResult resolve_loop(const Config& cfg) {
  const Permutation pi = permutation_of(cfg);
  const Theta2Choice choice = parse_theta2_policy(cfg.theta2_policy);
  if (!cfg.path.empty()) {
    LoopResult loop = make_loop(pi, cfg.path, choice);
    if (!loop.hypotheses.passed) throw Exit{kNoLoop, "loop " + cfg.path + " fails the hypotheses"};
    return loop;
  }
  auto loops = loop_search(pi, cfg.max_len, LoopFilter::Passing, choice);
  if (cfg.loop_index >= loops.size())
    throw Exit{kNoLoop, "no hypotheses-passing loop with index " + std::to_string(cfg.loop_index) + " up to length " +
                            std::to_string(cfg.max_len)};
  return loops[cfg.loop_index];
}

struct DenjoyArtifacts {
  LoopAnalysis analysis;
  DenjoyRun run;
};

DenjoyArtifacts build_denjoy(const Config& cfg, Warnings& warnings, Timer& timer) {
  const LoopResult loop = resolve_loop(cfg);
  timer.mark("loop");
  DenjoyArtifacts a;
  try {
    a.analysis = analyze_loop(loop, cfg.radius, parse_theta2_policy(cfg.theta2_policy), &warnings);
  } catch (const HypothesisFailure& e) {
    throw Exit{kNoLoop, e.what()};
  }
  timer.mark("minimal_points");
  const std::size_t n_iter = std::min<std::size_t>(200, cfg.atoms / 2);
  try {
    a.run = run_denjoy(a.analysis, cfg.atoms, n_iter, 10000, &warnings);
  } catch (const Error& e) {
    throw Exit{kConstructionFailure, e.kind() + ": " + e.what()};
  }
  timer.mark("construction");
  return a;
}

int cmd_denjoy(const Config& cfg, std::ostream& out) {
  Timer timer;
  Warnings warnings;
  Config c = cfg;
  if (c.out_dir.empty()) c.out_dir = "denjoy_out";
  const DenjoyArtifacts a = build_denjoy(c, warnings, timer);
  const auto& gamma = *a.analysis.substitution.gamma;
  const auto& sigma = a.analysis.loop.sigma;
  const auto& cand = a.analysis.minimal.candidates.front();

  fs::create_directories(c.out_dir);
  const json aiet = aiet_json(a.run.aiet, a.run.measure, a.run.wandering, a.run.semiconjugacy);
  write_file(fs::path(c.out_dir) / "aiet.json", aiet.dump(2) + "\n");
  write_file(fs::path(c.out_dir) / "orbit.csv", orbit_csv(a.run.wandering));
  const DottedWord window = expand(sigma, cand.decomposition, c.radius);
  write_file(fs::path(c.out_dir) / "broken_line.csv", broken_line_csv(gamma, window, c.radius));
  timer.mark("artifacts");

  json push = json::array();
  for (const auto& p : a.run.pushforward)
    push.push_back({{"label", p.label},
                    {"residual", real_string(p.residual)},
                    {"bound", real_string(p.bound)},
                    {"interior_residual", real_string(p.interior_residual)}});
  const bool ok = a.run.wandering.disjoint && a.run.wandering.total_length < 1;
  json result = {{"input", input_block(c)},
                 {"loop", loop_json(a.analysis.loop)},
                 {"candidate", candidate_json(sigma.alphabet(), gamma, cand)},
                 {"candidates", a.analysis.minimal.candidates.size()},
                 {"pushforward", push},
                 {"wandering_verified", ok},
                 {"artifacts", {"aiet.json", "orbit.csv", "broken_line.csv"}}};
  emit(c, "report.json", run_report(c, warnings, timer, result), out);
  if (!ok) {
    std::string pair;
    if (a.run.wandering.overlap)
      pair = " (images " + std::to_string(a.run.wandering.overlap->first) + " and " +
             std::to_string(a.run.wandering.overlap->second) + ")";
    throw Exit{kConstructionFailure, "OverlapDetected: forward images of the interval intersect" + pair};
  }
  return kOk;
}

// -------------------------------------------------------------- plotdata

int cmd_plotdata(const Config& cfg, std::ostream& out) {
  const fs::path report_path = fs::path(cfg.from_dir) / "report.json";
  if (!fs::exists(report_path)) throw Exit{kInputError, "missing artifact " + report_path.string()};
  json report;
  try {
    report = json::parse(read_file(report_path.string()));
  } catch (const json::exception& e) {
    throw Exit{kInputError, "unreadable report: " + std::string(e.what())};
  }
  const json& input = report.at("result").at("input");
  Config c;
  c.command = input.at("command");
  c.permutation = {input.at("permutation").get<std::string>()};
  c.path = input.at("path");
  c.loop_index = input.at("loop_index");
  c.max_len = input.at("max_len");
  c.theta2_policy = input.at("theta2_policy");
  c.radius = input.at("radius");
  c.atoms = input.at("atoms");
  c.precision_bits = input.at("precision_bits");
  set_working_precision(c.precision_bits);

  std::string csv;
  Warnings warnings;
  if (cfg.plot_kind == "broken-line") {
    Substitution sigma;
    std::optional<GammaVector> gamma;
    if (c.command == "analyze") {
      sigma = Substitution::parse(input.at("substitution").get<std::string>());
      gamma = analyze_substitution(sigma, parse_theta2_policy(c.theta2_policy)).gamma;
    } else {
      const LoopResult loop = resolve_loop(c);
      sigma = loop.sigma;
      gamma = analyze_substitution(sigma, parse_theta2_policy(c.theta2_policy)).gamma;
    }
    if (!gamma) throw Exit{kInputError, "the report has no minimal point"};
    const auto mp = minimal_points(*gamma, sigma, c.radius, &warnings);
    if (mp.candidates.empty()) throw Exit{kInputError, "the report has no minimal point"};
    csv = broken_line_csv(*gamma, expand(sigma, mp.candidates.front().decomposition, c.radius), c.radius);
  } else if (cfg.plot_kind == "orbit-lengths") {
    if (c.command != "denjoy") throw Exit{kInputError, "orbit lengths need a denjoy report"};
    Timer timer;
    csv = orbit_csv(build_denjoy(c, warnings, timer).run.wandering);
  } else {
    throw Exit{kInputError, "unknown plot kind '" + cfg.plot_kind + "' (broken-line or orbit-lengths)"};
  }
  if (cfg.out_dir.empty())
    out << csv;
  else {
    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / (cfg.plot_kind + ".csv"), csv);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  cfg.echo.assign(args.begin() + (args.empty() ? 0 : 1), args.end());

  CLI::App app{"Exact minimal points and Denjoy-type affine interval exchanges"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--precision-bits", cfg.precision_bits, "Working precision in bits")->check(CLI::Range(128u, 1u << 20));
  app.add_option("--radius", cfg.radius, "Verification radius for minimal points")->check(CLI::PositiveNumber);
  app.add_option("--atoms", cfg.atoms, "Atoms per side of the truncated measure");
  app.add_option("--max-len", cfg.max_len, "Maximal loop length")->check(CLI::PositiveNumber);
  app.add_option("--theta2-policy", cfg.theta2_policy, "largest, smallest or index:k");
  app.add_option("--out", cfg.out_dir, "Output directory");
  app.add_flag("--require-hypotheses", cfg.require_hypotheses, "Exit 3 when the hypotheses fail");
  app.add_flag("--timings", cfg.timings, "Include wall-clock timings in the report");

  auto* analyze = app.add_subcommand("analyze", "Analyze a substitution file");
  analyze->add_option("file", cfg.input_path)->required();
  auto* search = app.add_subcommand("search", "List hypotheses-passing Rauzy loops");
  search->add_option("permutation", cfg.permutation)->required();
  auto* denjoy = app.add_subcommand("denjoy", "Build the affine exchange with a wandering interval");
  denjoy->add_option("permutation", cfg.permutation)->required();
  denjoy->add_option("--path", cfg.path, "Explicit loop as a string of t/b moves");
  denjoy->add_option("--loop-index", cfg.loop_index, "Index into the loop catalog");
  auto* plot = app.add_subcommand("plotdata", "CSV series from a report directory");
  plot->add_option("kind", cfg.plot_kind, "broken-line or orbit-lengths")->required();
  plot->add_option("--from", cfg.from_dir, "Directory holding report.json")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    set_working_precision(cfg.precision_bits);
    if (const char* env = std::getenv("DENJOY_BUDGET_SYMBOLS")) set_symbol_budget(std::stoull(env));
    if (analyze->parsed()) {
      cfg.command = "analyze";
      return cmd_analyze(cfg, out);
    }
    if (search->parsed()) {
      cfg.command = "search";
      return cmd_search(cfg, out);
    }
    if (denjoy->parsed()) {
      cfg.command = "denjoy";
      return cmd_denjoy(cfg, out);
    }
    cfg.command = "plotdata";
    return cmd_plotdata(cfg, out);
  } catch (const Exit& e) {
    if (!e.message.empty()) err << "denjoy: " << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    err << "denjoy: " << e.kind() << ": " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "denjoy: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace denjoy::cli
