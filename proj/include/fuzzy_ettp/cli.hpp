#pragma once

// Batch command surface: generate, solve, bench, replay.
//
// Exit codes: 0 success, 1 malformed input / IO / refused request,
// 2 hard-infeasible result, 3 budget exhausted without a feasible solution.
// Every command writes manifest.json next to its artifacts. Wall-clock
// timings go to separate files so the other artifacts are reproducible.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzy_ettp/bench.hpp"
#include "fuzzy_ettp/carter.hpp"
#include "fuzzy_ettp/config.hpp"
#include "fuzzy_ettp/construct.hpp"
#include "fuzzy_ettp/evaluation.hpp"
#include "fuzzy_ettp/exact_solver.hpp"
#include "fuzzy_ettp/generator.hpp"
#include "fuzzy_ettp/instance_io.hpp"
#include "fuzzy_ettp/invigilation.hpp"
#include "fuzzy_ettp/local_search.hpp"
#include "fuzzy_ettp/model.hpp"
#include "fuzzy_ettp/timetable.hpp"

namespace fuzzy_ettp::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kBadInput = 1, kInfeasible = 2, kBudget = 3 };

/// Thrown for anything that should end the command with exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Io {
  std::ostream& out = std::cout;
  std::ostream& err = std::cerr;
};

inline void write_file(const fs::path& p, std::string_view text) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot write '" + p.string() + "'");
  f << text;
  if (!f) throw InputError("write failed for '" + p.string() + "'");
}

inline std::string read_input(const fs::path& p) {
  try {
    return fuzzy_ettp::read_text_file(p);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

/// Records what a run read and wrote. `argv` is enough to replay it.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv) {
    j_["command"] = std::move(command);
    j_["argv"] = std::move(argv);
    j_["inputs"] = json::array();
    j_["artifacts"] = json::array();
  }
  void input(const fs::path& p, std::string_view bytes) {
    j_["inputs"].push_back({{"path", p.generic_string()}, {"fnv1a", hex64(fnv1a(bytes))}});
  }
  void set(const std::string& key, json value) { j_[key] = std::move(value); }
  void artifact(const fs::path& dir, const std::string& name, std::string_view bytes) {
    write_file(dir / name, bytes);
    j_["artifacts"].push_back({{"path", name}, {"fnv1a", hex64(fnv1a(bytes))}});
  }
  void finish(const fs::path& dir) { write_file(dir / "manifest.json", j_.dump(2) + "\n"); }
  [[nodiscard]] const json& data() const { return j_; }

 private:
  json j_ = json::object();
};

inline json budget_json(const SearchBudget& b) {
  return {{"max_nodes", b.max_nodes}, {"max_seconds", b.max_seconds}, {"random_seed", b.random_seed}};
}

inline json params_json(const GeneratorParams& p) {
  return {{"num_courses", p.num_courses},
          {"num_exams", p.num_exams},
          {"num_events", p.num_events},
          {"num_semesters", p.num_semesters},
          {"num_teachers", p.num_teachers},
          {"num_rooms", p.num_rooms},
          {"num_days", p.num_days},
          {"sessions_per_day", p.sessions_per_day},
          {"students", p.students},
          {"mean_exams_per_student", p.mean_exams_per_student},
          {"lab_fraction", p.lab_fraction},
          {"seed", p.seed}};
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  GeneratorParams params;
  std::string config;
  std::string out = ".";
};

inline int cmd_generate(const GenerateArgs& a, const std::vector<std::string>& argv, Io io = {}) {
  Manifest man("generate", argv);
  InstitutionConfig cfg;
  if (!a.config.empty()) {
    const auto text = read_input(a.config);
    man.input(a.config, text);
    cfg = load_config(text);
  }
  Instance inst = generate_instance(a.params, cfg);
  const std::string text = dump_instance(inst);
  man.set("generator_params", params_json(a.params));
  man.set("seed", a.params.seed);
  man.set("soft_weights", inst.soft_weights);
  man.artifact(a.out, "instance.json", text);
  man.finish(a.out);
  io.out << "generated " << inst.name << ": " << inst.num_exams() << " exams, " << inst.num_rooms() << " rooms, "
         << inst.teachers.size() << " teachers, " << inst.num_students() << " students, " << inst.num_slots()
         << " slots -> " << (fs::path(a.out) / "instance.json").string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string instance;
  std::string carter;
  int slots = 0;  // Carter only; 0 picks the conventional budget
  int model = 3;
  std::string mode = "heuristic";
  std::string ranking = "centroid";
  std::string ordering = "sd";
  SearchBudget budget;
  std::uint64_t seed = 1;
  int runs = 1;
  std::int64_t var_cap = 5000;
  bool literal_room_link = false;
  std::string config;
  std::string out = ".";
};

inline Instance load_solve_instance(const SolveArgs& a, Manifest& man) {
  if (a.instance.empty() == a.carter.empty()) throw InputError("give exactly one of --instance or --carter");
  Instance inst;
  if (!a.instance.empty()) {
    const auto text = read_input(a.instance);
    man.input(a.instance, text);
    try {
      inst = load_instance_json(text);
    } catch (const ConfigError& e) {
      throw InputError(std::string("malformed instance: ") + e.what());
    }
  } else {
    fs::path stem = a.carter;
    if (stem.extension() == ".crs" || stem.extension() == ".stu") stem.replace_extension();
    CarterDataset ds;
    try {
      const auto crs = read_input(fs::path(stem).concat(".crs"));
      const auto stu = read_input(fs::path(stem).concat(".stu"));
      man.input(fs::path(stem).concat(".crs"), crs);
      man.input(fs::path(stem).concat(".stu"), stu);
      ds = parse_carter(crs, stu, stem.filename().string());
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      throw InputError(std::string("malformed Carter data: ") + e.what());
    }
    int slots = a.slots;
    if (slots <= 0) {
      const auto& std_periods = carter_standard_periods();
      auto it = std_periods.find(normalize_dataset(ds.name));
      if (it == std_periods.end()) throw InputError("no standard period count for '" + ds.name + "'; pass --slots");
      slots = it->second;
    }
    inst = carter_instance(ds, slots);
  }
  if (!a.config.empty()) {
    const auto text = read_input(a.config);
    man.input(a.config, text);
    try {
      apply_config(inst, load_config(text));
    } catch (const ConfigError& e) {
      throw InputError(std::string("malformed config: ") + e.what());
    }
  }
  if (auto defects = validate(inst); !defects.empty()) {
    std::string msg = "instance fails validation (" + std::to_string(defects.size()) + " defects), first: " +
                      std::string(to_string(defects.front().kind)) + " " + defects.front().detail;
    throw InputError(msg);
  }
  return inst;
}

inline int cmd_solve(const SolveArgs& a, const std::vector<std::string>& argv, Io io = {}) {
  Manifest man("solve", argv);
  RankingFunction r;
  try {
    r.method = parse_ranking_method(a.ranking);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (a.mode != "exact" && a.mode != "heuristic") throw InputError("--mode must be exact or heuristic");
  if (a.runs < 1) throw InputError("--runs must be at least 1");
  Instance inst = load_solve_instance(a, man);

  man.set("mode", a.mode);
  man.set("model", a.model);
  man.set("ranking", a.ranking);
  man.set("budget", budget_json(a.budget));
  man.set("seed", a.seed);
  man.set("runs", a.runs);
  man.set("soft_weights", inst.soft_weights);
  man.set("instance_hash", hex64(instance_hash(inst)));

  json report = {{"instance", inst.name}, {"mode", a.mode}, {"num_exams", inst.num_exams()},
                 {"num_slots", inst.num_slots()}};
  json timings = json::object();
  std::optional<Timetable> tt;
  int code = kOk;
  std::string status;

  try {
    if (a.mode == "exact") {
      ModelKind kind;
      try {
        kind = model_kind_from_int(a.model);
      } catch (const std::exception& e) {
        throw InputError(e.what());
      }
      BuildOptions opt;
      opt.variable_cap = a.var_cap;
      opt.literal_room_link = a.literal_room_link;
      FilpModel filp;
      try {
        filp = build_model(kind, inst, opt);
      } catch (const InstanceTooLarge& e) {
        throw InputError(std::string("exact mode refused: ") + e.what() + " (raise --var-cap or use --mode heuristic)");
      } catch (const std::invalid_argument& e) {
        throw InputError(std::string("cannot build model: ") + e.what());
      }
      const CrispModel crisp = defuzzify_model(filp, r);
      SearchBudget b = a.budget;
      b.random_seed = a.seed;
      const SolveResult res = solve_exact(crisp, b);
      status = std::string(to_string(res.status));
      report["model"] = a.model;
      report["solver"] = {{"status", status},
                          {"nodes", res.nodes},
                          {"variables", crisp.variables.size()},
                          {"constraints", crisp.constraints.size()},
                          {"root_bound", std::isfinite(res.bound) ? json(res.bound) : json(nullptr)},
                          {"objective", res.has_solution() ? json(res.objective) : json(nullptr)}};
      timings["solve_seconds"] = res.seconds;
      if (res.has_solution()) {
        tt = decode_timetable(crisp, res.values);
      } else if (res.status == SolveStatus::Infeasible) {
        code = kInfeasible;
      } else {
        code = kBudget;
      }
    } else {
      Ordering ord;
      try {
        ord = parse_ordering(a.ordering);
      } catch (const std::exception& e) {
        throw InputError(e.what());
      }
      json runs = json::array();
      double best_cost = 0.0;
      for (int k = 0; k < a.runs; ++k) {
        HeuristicRun run = run_heuristic(inst, a.seed + static_cast<std::uint64_t>(k), a.budget, ord, r);
        runs.push_back({{"seed", a.seed + static_cast<std::uint64_t>(k)},
                        {"construction", run.construction},
                        {"start_cost", run.stats.start_cost},
                        {"cost", run.cost},
                        {"feasible", run.feasible},
                        {"evaluations", run.stats.evaluations},
                        {"moves", run.stats.moves},
                        {"swaps", run.stats.swaps},
                        {"restarts", run.stats.restarts}});
        timings["run_seconds"].push_back(run.seconds);
        if (run.feasible && (!tt || run.cost < best_cost)) {
          best_cost = run.cost;
          tt = std::move(run.timetable);
        }
      }
      report["heuristic"] = {{"ordering", std::string(to_string(ord))}, {"runs", std::move(runs)}};
      status = tt ? "feasible" : "infeasible";
      if (!tt) code = kInfeasible;
    }

    if (tt && inst.models_teachers() && inst.models_rooms()) {
      auto inv = assign_invigilators(inst, *tt, r);
      tt = std::move(inv.timetable);
      report["invigilation_soft_shortfalls"] = inv.soft_shortfalls.size();
    }
  } catch (const Unplaceable& e) {
    status = "infeasible";
    report["error"] = e.what();
    code = kInfeasible;
  } catch (const InsufficientInvigilators& e) {
    status = "infeasible";
    report["error"] = e.what();
    code = kInfeasible;
    tt.reset();
  }

  report["status"] = status;
  if (tt) {
    AuditOptions audit;
    audit.ranking = r;
    audit.require_invigilators = inst.models_teachers() && inst.models_rooms();
    const ViolationReport v = check_feasibility(*tt, inst, audit);
    json viol = json::array();
    for (const auto& e : v.entries)
      viol.push_back({{"origin", e.origin},
                      {"severity", e.severity == Severity::Hard ? "hard" : "soft"},
                      {"count", e.count},
                      {"details", e.details}});
    report["feasible"] = v.is_feasible();
    report["hard_violations"] = v.hard_count();
    report["violations"] = std::move(viol);
    report["proximity_cost"] = proximity_cost(*tt, inst);
    if (v.is_feasible()) {
      report["cost_breakdown"] = to_json(cost_breakdown(*tt, inst, r));
    } else {
      code = kInfeasible;
    }
    man.artifact(a.out, "timetable.json", timetable_to_json(*tt, inst).dump(1) + "\n");
  } else {
    report["feasible"] = false;
  }
  man.artifact(a.out, "report.json", report.dump(2) + "\n");
  write_file(fs::path(a.out) / "timings.json", timings.dump(2) + "\n");
  man.set("exit_code", code);
  man.finish(a.out);

  io.out << inst.name << ": " << status;
  if (report.contains("proximity_cost")) io.out << ", proximity " << fixed(report["proximity_cost"].get<double>(), 4);
  if (report.contains("hard_violations")) io.out << ", hard violations " << report["hard_violations"].get<int>();
  io.out << "\n";
  if (code == kBudget) io.err << "budget exhausted before any feasible solution was found\n";
  if (code == kInfeasible) io.err << "no hard-feasible timetable" << (report.contains("error") ? ": " + report["error"].get<std::string>() : std::string()) << "\n";
  return code;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string dir;  // empty: $FUZZY_ETTP_DATA
  std::vector<std::string> datasets;
  int runs = 1;
  std::uint64_t seed = 1;
  int jobs = 1;
  int slots = 0;
  SearchBudget budget;
  std::string reference;  // CSV; empty uses the built-in table
  std::string out = ".";
};

/// Best costs cited for the thirteen Toronto datasets.
inline const std::map<std::string, double>& reference_best_cited() {
  static const std::map<std::string, double> ref = {
      {"car-f-92", 4.28}, {"car-s-91", 4.97}, {"ear-f-83", 36.86},  {"hec-s-92", 11.85}, {"kfu-s-93", 14.62},
      {"lse-f-91", 11.14}, {"pur-s-93", 4.73}, {"rye-s-93", 9.65},  {"sta-f-83", 158.33}, {"tre-s-92", 8.48},
      {"uta-s-92", 3.40},  {"ute-s-92", 28.88}, {"yor-f-83", 40.74},
  };
  return ref;
}

inline int cmd_bench(const BenchArgs& a, const std::vector<std::string>& argv, Io io = {}) {
  Manifest man("bench", argv);
  if (a.runs < 1) throw InputError("--runs must be at least 1");
  std::string dir = a.dir;
  if (dir.empty()) {
    const char* env = std::getenv("FUZZY_ETTP_DATA");
    if (!env || !*env) throw InputError("no dataset directory: pass a directory or set FUZZY_ETTP_DATA");
    dir = env;
  }
  std::map<std::string, double> reference = reference_best_cited();
  if (!a.reference.empty()) {
    const auto text = read_input(a.reference);
    man.input(a.reference, text);
    reference = load_reference_csv(text);
  }

  std::vector<fs::path> stems;
  if (a.datasets.empty()) {
    stems = discover_carter(dir);
  } else {
    for (const auto& name : a.datasets) stems.push_back(fs::path(dir) / name);
  }

  std::vector<BenchmarkRow> rows;
  json per_dataset = json::array();
  std::ostringstream timings;
  timings << "dataset,run,seed,seconds\n";
  std::vector<std::string> skipped;
  for (const auto& stem : stems) {
    const std::string name = stem.filename().string();
    CarterDataset ds;
    try {
      const auto crs = fuzzy_ettp::read_text_file(fs::path(stem).concat(".crs"));
      const auto stu = fuzzy_ettp::read_text_file(fs::path(stem).concat(".stu"));
      man.input(fs::path(stem).concat(".crs"), crs);
      man.input(fs::path(stem).concat(".stu"), stu);
      ds = parse_carter(crs, stu, name);
    } catch (const std::exception& e) {
      io.err << "warning: skipping " << name << ": " << e.what() << "\n";
      skipped.push_back(name);
      continue;
    }
    int slots = a.slots;
    if (auto it = carter_standard_periods().find(normalize_dataset(name)); it != carter_standard_periods().end())
      slots = it->second;
    if (slots <= 0) {
      io.err << "warning: skipping " << name << ": no standard period count (pass --slots)\n";
      skipped.push_back(name);
      continue;
    }
    const Instance inst = carter_instance(ds, slots);
    std::vector<HeuristicRun> runs;
    try {
      runs = run_many(inst, a.runs, a.seed, a.budget, a.jobs);
    } catch (const Unplaceable& e) {
      io.err << "warning: skipping " << name << ": " << e.what() << "\n";
      skipped.push_back(name);
      continue;
    }
    std::vector<double> costs, secs;
    json run_json = json::array();
    for (std::size_t k = 0; k < runs.size(); ++k) {
      timings << name << ',' << k << ',' << a.seed + k << ',' << fixed(runs[k].seconds, 3) << '\n';
      run_json.push_back({{"seed", a.seed + k}, {"cost", runs[k].cost}, {"feasible", runs[k].feasible},
                          {"construction", runs[k].construction}, {"evaluations", runs[k].stats.evaluations}});
      if (!runs[k].feasible) continue;
      costs.push_back(runs[k].cost);
      secs.push_back(runs[k].seconds);
    }
    if (costs.empty()) {
      io.err << "warning: skipping " << name << ": no run produced a feasible timetable\n";
      skipped.push_back(name);
      continue;
    }
    rows.push_back(aggregate_runs(costs, secs, name));
    per_dataset.push_back({{"dataset", name}, {"slots", slots}, {"exams", inst.num_exams()},
                           {"students", inst.num_students()}, {"runs", std::move(run_json)}});
  }

  if (rows.empty()) {
    io.err << "error: every dataset was skipped or none found in '" << dir << "'\n";
    return kBadInput;
  }

  std::vector<BenchmarkRow> with_ref;
  for (const auto& row : rows)
    if (reference.count(normalize_dataset(row.dataset))) with_ref.push_back(row);
  const auto diffs = diff_vs_reference(with_ref, reference);

  man.set("runs", a.runs);
  man.set("seed", a.seed);
  man.set("jobs", a.jobs);
  man.set("budget", budget_json(a.budget));
  man.set("ranking", "centroid");
  man.set("dataset_dir", fs::path(dir).generic_string());
  man.set("skipped", skipped);
  man.artifact(a.out, "bench.csv", bench_csv(rows));
  man.artifact(a.out, "diff.csv", diff_csv(diffs));
  json report = {{"datasets", std::move(per_dataset)}, {"skipped", skipped}};
  man.artifact(a.out, "report.json", report.dump(2) + "\n");
  write_file(fs::path(a.out) / "timings.csv", timings.str());
  man.finish(a.out);

  std::vector<std::vector<std::string>> table;
  for (const auto& row : rows) {
    std::string ref = "-", diff = "-";
    for (const auto& d : diffs)
      if (d.dataset == row.dataset) {
        ref = fixed(d.reference, 2);
        diff = fixed(d.difference, 2);
      }
    table.push_back({row.dataset, fixed(row.best, 2), fixed(row.mean, 2), std::to_string(row.runs), ref, diff,
                     fixed(row.wall_time, 1)});
  }
  io.out << aligned_table({"dataset", "best", "mean", "runs", "reference", "difference", "seconds"}, table);
  return kOk;
}

// ---------------------------------------------------------------------------
// argument parsing

inline int run_cli(const std::vector<std::string>& argv_in, Io io = {});

inline int cmd_replay(const std::string& manifest_path, const std::string& out, Io io) {
  const auto text = read_input(manifest_path);
  json m;
  try {
    m = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed manifest: ") + e.what());
  }
  if (!m.contains("argv") || !m["argv"].is_array()) throw InputError("manifest has no argv");
  auto argv = m["argv"].get<std::vector<std::string>>();
  if (!argv.empty() && argv[0] == "replay") throw InputError("manifest records a replay");
  for (const auto& in : m.value("inputs", json::array())) {
    const std::string p = in.value("path", "");
    std::error_code ec;
    if (p.empty() || !fs::exists(p, ec)) continue;
    if (hex64(fnv1a(fuzzy_ettp::read_text_file(p))) != in.value("fnv1a", ""))
      io.err << "warning: input '" << p << "' changed since the manifest was written\n";
  }
  if (!out.empty()) {
    for (std::size_t i = 0; i < argv.size();) {
      if (argv[i] == "--out" && i + 1 < argv.size())
        argv.erase(argv.begin() + static_cast<std::ptrdiff_t>(i), argv.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      else if (argv[i].rfind("--out=", 0) == 0)
        argv.erase(argv.begin() + static_cast<std::ptrdiff_t>(i));
      else
        ++i;
    }
    argv.push_back("--out");
    argv.push_back(out);
  }
  return run_cli(argv, io);
}

inline void add_budget_flags(CLI::App* app, SearchBudget& b) {
  app->add_option("--max-nodes", b.max_nodes, "Search nodes (exact) or move evaluations (heuristic)")
      ->capture_default_str();
  app->add_option("--max-seconds", b.max_seconds, "Wall-clock limit per solve or run")->capture_default_str();
}

/// argv excludes the program name.
inline int run_cli(const std::vector<std::string>& argv_in, Io io) {
  CLI::App app{"Examination timetabling with fuzzy integer programming models"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic institution instance");
  auto& p = gen.params;
  g->add_option("--seed", p.seed)->capture_default_str();
  g->add_option("--num-exams", p.num_exams)->capture_default_str();
  g->add_option("--num-courses", p.num_courses)->capture_default_str();
  g->add_option("--num-events", p.num_events)->capture_default_str();
  g->add_option("--num-semesters", p.num_semesters)->capture_default_str();
  g->add_option("--num-teachers", p.num_teachers)->capture_default_str();
  g->add_option("--num-rooms", p.num_rooms)->capture_default_str();
  g->add_option("--num-days", p.num_days)->capture_default_str();
  g->add_option("--sessions-per-day", p.sessions_per_day)->capture_default_str();
  g->add_option("--students", p.students)->capture_default_str();
  g->add_option("--mean-exams-per-student", p.mean_exams_per_student)->capture_default_str();
  g->add_option("--lab-fraction", p.lab_fraction)->capture_default_str();
  g->add_option("--config", gen.config, "Institution config JSON");
  g->add_option("--out", gen.out, "Output directory")->capture_default_str();

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Solve one instance (JSON or Carter) and audit the result");
  s->add_option("--instance", sol.instance, "Instance JSON");
  s->add_option("--carter", sol.carter, "Carter dataset stem or .crs/.stu path");
  s->add_option("--slots", sol.slots, "Carter slot count (default: conventional budget)");
  s->add_option("--model", sol.model, "Model 1, 2 or 3 (exact mode)")->capture_default_str()->check(CLI::Range(1, 3));
  s->add_option("--mode", sol.mode)->capture_default_str()->check(CLI::IsMember({"exact", "heuristic"}));
  s->add_option("--ranking", sol.ranking)->capture_default_str()->check(CLI::IsMember({"centroid", "modal"}));
  s->add_option("--ordering", sol.ordering, "Construction ordering: le, lcd or sd")->capture_default_str();
  s->add_option("--seed", sol.seed)->capture_default_str();
  s->add_option("--runs", sol.runs, "Heuristic runs; the best feasible one is kept")->capture_default_str();
  s->add_option("--var-cap", sol.var_cap, "Exact mode refuses models with more primary variables")
      ->capture_default_str();
  s->add_flag("--literal-room-link", sol.literal_room_link,
              "Model 3: use the literal C - delta <= r rows instead of the exact linking");
  s->add_option("--config", sol.config, "Institution config JSON applied to the instance");
  s->add_option("--out", sol.out, "Output directory")->capture_default_str();
  add_budget_flags(s, sol.budget);

  BenchArgs ben;
  auto* b = app.add_subcommand("bench", "Multi-run heuristic benchmark over Carter datasets");
  b->add_option("dir", ben.dir, "Dataset directory (default: $FUZZY_ETTP_DATA)");
  b->add_option("--datasets", ben.datasets, "Dataset names to run (default: every .crs/.stu pair)");
  b->add_option("--runs", ben.runs)->capture_default_str();
  b->add_option("--seed", ben.seed, "Seed of the first run")->capture_default_str();
  b->add_option("--jobs", ben.jobs, "Concurrent runs")->capture_default_str();
  b->add_option("--slots", ben.slots, "Slot count for non-standard datasets");
  b->add_option("--reference", ben.reference, "Reference CSV (dataset,value)");
  b->add_option("--ranking", [](const std::vector<std::string>& v) { return v.size() == 1 && v[0] == "centroid"; },
                "Only centroid applies to crisp Carter data");
  b->add_option("--out", ben.out, "Output directory")->capture_default_str();
  add_budget_flags(b, ben.budget);

  std::string manifest, replay_out;
  auto* rp = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  rp->add_option("manifest", manifest)->required();
  rp->add_option("--out", replay_out, "Write artifacts here instead of the recorded directory");

  std::vector<std::string> rev(argv_in.rbegin(), argv_in.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    io.out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    io.out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    io.err << "error: " << e.what() << "\n";
    return kBadInput;
  }

  try {
    if (g->parsed()) return cmd_generate(gen, argv_in, io);
    if (s->parsed()) return cmd_solve(sol, argv_in, io);
    if (b->parsed()) return cmd_bench(ben, argv_in, io);
    if (rp->parsed()) return cmd_replay(manifest, replay_out, io);
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}

}  // namespace fuzzy_ettp::cli
