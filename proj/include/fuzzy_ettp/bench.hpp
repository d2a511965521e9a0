#pragma once

// Multi-run heuristic benchmarking over Carter-format datasets.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fuzzy_ettp/carter.hpp"
#include "fuzzy_ettp/construct.hpp"
#include "fuzzy_ettp/evaluation.hpp"
#include "fuzzy_ettp/local_search.hpp"

namespace fuzzy_ettp {

struct HeuristicRun {
  Timetable timetable;
  double cost = 0.0;
  bool feasible = false;
  double seconds = 0.0;
  std::string construction;
  LocalSearchStats stats;
};

/// Construction followed by restarted hill climbing, seeded by `seed`.
inline HeuristicRun run_heuristic(const Instance& inst, std::uint64_t seed, SearchBudget budget,
                                  Ordering ordering = Ordering::SaturationDegree, const RankingFunction& r = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  HeuristicRun run;
  auto built = construct_feasible(inst, ordering, seed, 50, r);
  run.construction = built.method;
  budget.random_seed = seed;
  run.timetable = improve_local_search(inst, built.timetable, budget, &run.stats, r);
  AuditOptions audit;
  audit.ranking = r;
  run.feasible = check_feasibility(run.timetable, inst, audit).is_feasible();
  run.cost = proximity_cost(run.timetable, inst);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

/// Runs seeds first_seed .. first_seed+runs-1 on up to `jobs` threads.
/// Results are ordered by seed whatever the thread interleaving.
inline std::vector<HeuristicRun> run_many(const Instance& inst, int runs, std::uint64_t first_seed,
                                          const SearchBudget& budget, int jobs) {
  std::vector<HeuristicRun> out(static_cast<std::size_t>(std::max(runs, 0)));
  std::vector<std::exception_ptr> errors(out.size());
  std::mutex mu;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mu);
        if (next >= out.size()) return;
        i = next++;
      }
      try {
        out[i] = run_heuristic(inst, first_seed + i, budget);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, std::max(1, runs));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Dataset stems (paths without extension) having both .crs and .stu files.
inline std::vector<std::filesystem::path> discover_carter(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> stems;
  if (!std::filesystem::is_directory(dir)) return stems;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".crs") continue;
    auto stem = entry.path();
    stem.replace_extension();
    auto stu = stem;
    stu += ".stu";
    if (std::filesystem::exists(stu)) stems.push_back(stem);
  }
  std::sort(stems.begin(), stems.end());
  return stems;
}

/// Reads "dataset,value" lines; '#' starts a comment, a non-numeric value
/// line is treated as a header.
inline std::map<std::string, double> load_reference_csv(std::string_view text) {
  std::map<std::string, double> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    const std::string key = line.substr(0, comma);
    std::string rest = line.substr(comma + 1);
    if (auto c2 = rest.find(','); c2 != std::string::npos) rest.resize(c2);
    try {
      std::size_t used = 0;
      const double v = std::stod(rest, &used);
      if (used > 0) out[normalize_dataset(key)] = v;
    } catch (const std::exception&) {
      // header line
    }
  }
  return out;
}

inline std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

/// dataset,best,mean,runs  (no timings, so reruns are byte-identical)
inline std::string bench_csv(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream os;
  os << "dataset,best,mean,runs\n";
  for (const auto& r : rows) os << r.dataset << ',' << fixed(r.best, 4) << ',' << fixed(r.mean, 4) << ',' << r.runs << '\n';
  return os.str();
}

inline std::string diff_csv(const std::vector<ReferenceDiff>& diffs) {
  std::ostringstream os;
  os << "dataset,ours,reference,difference\n";
  for (const auto& d : diffs)
    os << d.dataset << ',' << fixed(d.ours, 2) << ',' << fixed(d.reference, 2) << ',' << fixed(d.difference, 2) << '\n';
  return os.str();
}

/// Aligned text table for terminals.
inline std::string aligned_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) os << "  ";
      if (c == 0)
        os << std::left << std::setw(static_cast<int>(width[c])) << r[c];
      else
        os << std::right << std::setw(static_cast<int>(width[c])) << r[c];
    }
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

}  // namespace fuzzy_ettp
