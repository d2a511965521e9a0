#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzy_ettp/fuzzy.hpp"
#include "fuzzy_ettp/instance.hpp"
#include "fuzzy_ettp/timetable.hpp"

namespace fuzzy_ettp {

class UncoveredExam : public std::runtime_error {
 public:
  explicit UncoveredExam(Index exam)
      : std::runtime_error("exam " + std::to_string(exam) + " has no slot"), exam_(exam) {}
  [[nodiscard]] Index exam() const { return exam_; }

 private:
  Index exam_;
};

class InfeasibleInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInput : public std::invalid_argument {
 public:
  EmptyInput() : std::invalid_argument("aggregate_runs needs at least one run") {}
};

class UnknownDataset : public std::invalid_argument {
 public:
  explicit UnknownDataset(const std::string& name)
      : std::invalid_argument("no reference value for dataset '" + name + "'"), name_(name) {}
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Proximity weight for two exams `distance` periods apart.
constexpr int proximity_weight(int distance) {
  switch (distance < 0 ? -distance : distance) {
    case 1: return 16;
    case 2: return 8;
    case 3: return 4;
    case 4: return 2;
    case 5: return 1;
    default: return 0;
  }
}

inline double proximity_cost(const Timetable& tt, const Instance& inst, const ClashMatrix& N) {
  const std::size_t n = inst.num_exams();
  if (tt.num_exams() != n) throw std::invalid_argument("timetable and instance disagree on the number of exams");
  for (std::size_t i = 0; i < n; ++i)
    if (tt.slot_of[i] < 0) throw UncoveredExam(static_cast<Index>(i));
  const std::size_t S = inst.num_students();
  if (S == 0) return 0.0;
  long total = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& nb : N.neighbors(static_cast<Index>(i)))
      if (static_cast<std::size_t>(nb.exam) > i)
        total += static_cast<long>(proximity_weight(tt.slot_of[i] - tt.slot_of[nb.exam])) * nb.common;
  return static_cast<double>(total) / static_cast<double>(S);
}

inline double proximity_cost(const Timetable& tt, const Instance& inst) {
  return proximity_cost(tt, inst, clash_matrix(inst));
}

// ---------------------------------------------------------------------------
// Feasibility audit

enum class Severity { Hard, Soft };

struct Violation {
  std::string origin;  // constraint origin label, or soft constraint name
  Severity severity = Severity::Hard;
  int count = 0;
  std::vector<std::string> details;
};

struct ViolationReport {
  std::vector<Violation> entries;

  [[nodiscard]] bool is_feasible() const {
    return std::none_of(entries.begin(), entries.end(), [](const Violation& v) { return v.severity == Severity::Hard; });
  }
  [[nodiscard]] int hard_count() const {
    int c = 0;
    for (const auto& v : entries)
      if (v.severity == Severity::Hard) c += v.count;
    return c;
  }
  [[nodiscard]] int count(std::string_view origin) const {
    for (const auto& v : entries)
      if (v.origin == origin) return v.count;
    return 0;
  }
  [[nodiscard]] int count(ConstraintOrigin origin) const { return count(to_string(origin)); }
};

struct AuditOptions {
  RankingFunction ranking;
  bool require_invigilators = false;  // enforce the two-invigilator rule even when none are assigned
  std::size_t max_details = 5;
};

namespace detail {

class ReportBuilder {
 public:
  explicit ReportBuilder(std::size_t max_details) : max_details_(max_details) {}

  void add(std::string_view origin, Severity sev, std::string detail, int count = 1) {
    auto key = std::string(origin);
    auto it = index_.find(key);
    if (it == index_.end()) {
      it = index_.emplace(key, entries_.size()).first;
      entries_.push_back({key, sev, 0, {}});
    }
    auto& v = entries_[it->second];
    v.count += count;
    if (v.details.size() < max_details_) v.details.push_back(std::move(detail));
  }
  void add(ConstraintOrigin o, std::string detail, int count = 1) {
    add(to_string(o), Severity::Hard, std::move(detail), count);
  }

  ViolationReport done() { return {std::move(entries_)}; }

 private:
  std::size_t max_details_;
  std::map<std::string, std::size_t> index_;
  std::vector<Violation> entries_;
};

inline std::string ex(Index i) { return "exam " + std::to_string(i); }

}  // namespace detail

/// Hours each teacher invigilates under `tt`.
inline std::vector<double> invigilation_hours(const Timetable& tt, const Instance& inst) {
  std::vector<double> hours(inst.teachers.size(), 0.0);
  for (std::size_t i = 0; i < tt.num_exams(); ++i)
    for (const auto& a : tt.rooms_of[i])
      for (Index t : a.invigilators)
        if (t >= 0 && static_cast<std::size_t>(t) < hours.size()) hours[t] += inst.exams[i].duration_hours;
  return hours;
}

inline ViolationReport check_feasibility(const Timetable& tt, const Instance& inst, const AuditOptions& opt = {}) {
  using O = ConstraintOrigin;
  detail::ReportBuilder rb(opt.max_details);
  const std::size_t n = inst.num_exams();
  const int T = inst.num_slots();
  if (tt.num_exams() != n) {
    rb.add(O::Coverage, "timetable lists " + std::to_string(tt.num_exams()) + " exams, instance has " +
                            std::to_string(n));
    return rb.done();
  }

  for (std::size_t i = 0; i < n; ++i) {
    const int k = tt.slot_of[i];
    if (k < 0) rb.add(O::Coverage, detail::ex(i) + " unscheduled");
    else if (k >= T) rb.add(O::SessionsPerDay, detail::ex(i) + " in slot " + std::to_string(k) + " outside the grid");
  }
  auto placed = [&](std::size_t i) { return tt.slot_of[i] >= 0 && tt.slot_of[i] < T; };

  // Student clashes: pairs of exams in one slot, weighted by shared students.
  const auto N = clash_matrix(inst);
  for (std::size_t i = 0; i < n; ++i) {
    if (!placed(i)) continue;
    for (const auto& nb : N.neighbors(static_cast<Index>(i)))
      if (static_cast<std::size_t>(nb.exam) > i && placed(nb.exam) && tt.slot_of[nb.exam] == tt.slot_of[i])
        rb.add(O::StudentClash,
               detail::ex(i) + " and " + detail::ex(nb.exam) + " share slot " + std::to_string(tt.slot_of[i]) + " (" +
                   std::to_string(nb.common) + " students)",
               nb.common);
  }

  // Semester rule.
  if (inst.num_semesters > 0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (placed(i) && placed(j) && tt.slot_of[i] == tt.slot_of[j] && semester_conflict(inst.exams[i], inst.exams[j]))
          rb.add(O::Semester, detail::ex(i) + " and " + detail::ex(j) + " of semester " +
                                  std::to_string(inst.exams[i].semester) + " share a slot");
  }

  if (inst.models_rooms()) {
    const std::size_t m = inst.num_rooms();
    std::vector<std::vector<std::pair<int, std::set<Index>>>> cell(
        static_cast<std::size_t>(std::max(T, 0)), std::vector<std::pair<int, std::set<Index>>>(m));
    for (std::size_t i = 0; i < n; ++i) {
      const auto& rooms = tt.rooms_of[i];
      if (rooms.empty()) {
        rb.add(O::Coverage, detail::ex(i) + " has no room");
        continue;
      }
      long seats = 0;
      for (const auto& a : rooms) {
        seats += a.seats;
        if (a.room < 0 || static_cast<std::size_t>(a.room) >= m) {
          rb.add(O::RoomKind, detail::ex(i) + " uses unknown room " + std::to_string(a.room));
          continue;
        }
        const auto& room = inst.rooms[a.room];
        if (!room_kind_matches(inst.exams[i], room))
          rb.add(O::RoomKind, detail::ex(i) + " (" + std::string(to_string(inst.exams[i].kind)) + ") in " +
                                  std::string(to_string(room.kind)) + " " + std::to_string(a.room));
        if (!placed(i)) continue;
        const int k = tt.slot_of[i];
        if (!room_available(room, k))
          rb.add(O::RoomAvailability, "room " + std::to_string(a.room) + " unavailable in slot " + std::to_string(k));
        else if (!room.has_generator && inst.grid.is_evening(k))
          rb.add(O::GeneratorEvening,
                 "room " + std::to_string(a.room) + " has no generator, slot " + std::to_string(k) + " is evening");
        cell[k][a.room].first += a.seats;
        cell[k][a.room].second.insert(static_cast<Index>(i));
      }
      if (seats != inst.enrollment(static_cast<Index>(i)))
        rb.add(O::SeatAllocation, detail::ex(i) + " seats " + std::to_string(seats) + " of " +
                                      std::to_string(inst.enrollment(static_cast<Index>(i))));
    }
    for (int k = 0; k < T; ++k)
      for (std::size_t r = 0; r < m; ++r) {
        const auto& [seated, exams] = cell[k][r];
        const double cap = rank(inst.rooms[r].exam_capacity, opt.ranking);
        if (seated > cap + 1e-9)
          rb.add(O::Capacity, "room " + std::to_string(r) + " slot " + std::to_string(k) + " seats " +
                                  std::to_string(seated) + " > " + std::to_string(cap));
        if (exams.size() > static_cast<std::size_t>(kMaxExamsPerRoom))
          rb.add(O::Mixing, "room " + std::to_string(r) + " slot " + std::to_string(k) + " holds " +
                                std::to_string(exams.size()) + " exams");
      }
  }

  // Invigilation.
  const bool audit_invigilators = inst.models_teachers() && inst.models_rooms() &&
                                  (opt.require_invigilators || tt.has_invigilators());
  if (audit_invigilators) {
    const std::size_t nt = inst.teachers.size();
    std::map<std::pair<Index, int>, int> sessions;  // (teacher, slot) -> sessions
    for (std::size_t i = 0; i < n; ++i) {
      if (!placed(i)) continue;
      const int k = tt.slot_of[i];
      for (const auto& a : tt.rooms_of[i]) {
        const std::string where = detail::ex(i) + " room " + std::to_string(a.room);
        if (a.invigilators.size() != static_cast<std::size_t>(kInvigilatorsPerSession))
          rb.add(O::TwoInvigilators, where + " has " + std::to_string(a.invigilators.size()) + " invigilators");
        bool qualified = false;
        for (Index t : a.invigilators) {
          if (t < 0 || static_cast<std::size_t>(t) >= nt) {
            rb.add(O::InvigilatorClash, where + " names unknown teacher " + std::to_string(t));
            continue;
          }
          if (!teacher_available(inst.teachers[t], k))
            rb.add(O::InvigilatorClash, "teacher " + std::to_string(t) + " unavailable in slot " + std::to_string(k));
          if (++sessions[{t, k}] == 2)
            rb.add(O::InvigilatorClash, "teacher " + std::to_string(t) + " in two sessions of slot " + std::to_string(k));
          qualified = qualified || inst.lecturers.qualified_for(t, static_cast<Index>(i));
        }
        if (inst.exams[i].kind == ExamKind::Laboratory && !qualified)
          rb.add(O::LabQualification, where + " has no qualified invigilator");
      }
    }
    // Soft: workload bounds and the one-gap preference.
    const auto hours = invigilation_hours(tt, inst);
    for (std::size_t t = 0; t < nt; ++t) {
      const auto& w = inst.teachers[t].workload;
      if (hours[t] > w.upper + 1e-9 || (hours[t] > 0 && hours[t] < w.lower - 1e-9))
        rb.add(to_string(SoftConstraint::Workload), Severity::Soft,
               "teacher " + std::to_string(t) + " invigilates " + std::to_string(hours[t]) + " h");
    }
    for (const auto& [key, c] : sessions) {
      const auto [t, k] = key;
      if (k + 1 < T && inst.grid.day_of(k) == inst.grid.day_of(k + 1) && sessions.count({t, k + 1}))
        rb.add(to_string(SoftConstraint::TeacherSchedule), Severity::Soft,
               "teacher " + std::to_string(t) + " has no gap after slot " + std::to_string(k));
    }
  }
  return rb.done();
}

// ---------------------------------------------------------------------------
// Cost breakdown

struct CostBreakdown {
  double proximity = 0.0;
  double room_wastage = 0.0;
  int consecutive_student = 0;
  int consecutive_lecturer = 0;
  double schedule_deviation = 0.0;
  double workload_excess = 0.0;
  double travel = 0.0;
};

inline json to_json(const CostBreakdown& c) {
  return {{"proximity", c.proximity},
          {"room_wastage", c.room_wastage},
          {"consecutive_student", c.consecutive_student},
          {"consecutive_lecturer", c.consecutive_lecturer},
          {"schedule_deviation", c.schedule_deviation},
          {"workload_excess", c.workload_excess},
          {"travel", c.travel}};
}

inline CostBreakdown cost_breakdown(const Timetable& tt, const Instance& inst, const RankingFunction& r = {}) {
  AuditOptions audit;
  audit.ranking = r;
  const auto report = check_feasibility(tt, inst, audit);
  if (!report.is_feasible())
    throw InfeasibleInput("cost_breakdown needs a hard-feasible timetable (" + std::to_string(report.hard_count()) +
                          " hard violations)");
  CostBreakdown c;
  const std::size_t n = inst.num_exams();
  const auto N = clash_matrix(inst);
  c.proximity = proximity_cost(tt, inst, N);

  for (std::size_t i = 0; i < n; ++i)
    for (const auto& nb : N.neighbors(static_cast<Index>(i)))
      if (static_cast<std::size_t>(nb.exam) > i && std::abs(tt.slot_of[i] - tt.slot_of[nb.exam]) == 1)
        c.consecutive_student += nb.common;

  const auto by_course = lecturers_of_course(inst);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(tt.slot_of[i] - tt.slot_of[j]) != 1) continue;
      const auto ci = inst.exams[i].course_id, cj = inst.exams[j].course_id;
      if (ci < 0 || cj < 0 || static_cast<std::size_t>(ci) >= by_course.size() ||
          static_cast<std::size_t>(cj) >= by_course.size())
        continue;
      for (Index t : by_course[ci])
        c.consecutive_lecturer += static_cast<int>(std::count(by_course[cj].begin(), by_course[cj].end(), t));
    }

  if (inst.models_rooms()) {
    std::map<std::pair<int, Index>, int> seated;
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& a : tt.rooms_of[i]) seated[{tt.slot_of[i], a.room}] += a.seats;
    for (const auto& [key, s] : seated)
      c.room_wastage += std::max(0.0, rank(inst.rooms[key.second].exam_capacity, r) - s);
  }

  if (inst.models_teachers() && tt.has_invigilators()) {
    // (slot, room) sessions per teacher, in slot order.
    std::vector<std::vector<std::pair<int, Index>>> sessions(inst.teachers.size());
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& a : tt.rooms_of[i])
        for (Index t : a.invigilators) {
          c.schedule_deviation += 1.0 - membership(inst.teachers[t].availability, tt.slot_of[i]);
          sessions[t].push_back({tt.slot_of[i], a.room});
        }
    const auto hours = invigilation_hours(tt, inst);
    for (std::size_t t = 0; t < inst.teachers.size(); ++t) {
      const auto& w = inst.teachers[t].workload;
      if (hours[t] > 0) c.workload_excess += std::max(0.0, w.lower - hours[t]) + std::max(0.0, hours[t] - w.upper);
      auto& s = sessions[t];
      std::sort(s.begin(), s.end());
      for (std::size_t a = 0; a + 1 < s.size(); ++a)
        if (inst.grid.day_of(s[a].first) == inst.grid.day_of(s[a + 1].first) && s[a].second != s[a + 1].second)
          c.travel += travel_time(inst, s[a].second, s[a + 1].second, r);
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Multi-run aggregation and reference comparison

struct BenchmarkRow {
  std::string dataset;
  double best = 0.0;
  double mean = 0.0;
  int runs = 0;
  double wall_time = 0.0;
};

inline BenchmarkRow aggregate_runs(const std::vector<double>& costs, const std::vector<double>& wall_times,
                                   std::string dataset = {}) {
  if (costs.empty()) throw EmptyInput();
  if (costs.size() != wall_times.size()) throw std::invalid_argument("costs and wall_times differ in length");
  // Sorted summation keeps the mean independent of run order; summing
  // offsets from the best makes equal runs average to exactly that value.
  std::vector<double> sorted = costs;
  std::sort(sorted.begin(), sorted.end());
  BenchmarkRow row;
  row.dataset = std::move(dataset);
  row.best = sorted.front();
  double spread = 0.0;
  for (double c : sorted) spread += c - row.best;
  row.mean = row.best + spread / static_cast<double>(sorted.size());
  row.mean = std::max(row.mean, row.best);
  row.runs = static_cast<int>(costs.size());
  row.wall_time = std::accumulate(wall_times.begin(), wall_times.end(), 0.0);
  return row;
}

inline double round2(double v) { return std::round(v * 100.0) / 100.0; }

inline std::string normalize_dataset(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

struct ReferenceDiff {
  std::string dataset;
  double ours = 0.0;
  double reference = 0.0;
  double difference = 0.0;  // reference - ours; positive: ours is lower
};

/// Compares each row's best cost with the reference, both at two decimals.
inline std::vector<ReferenceDiff> diff_vs_reference(const std::vector<BenchmarkRow>& rows,
                                                    const std::map<std::string, double>& reference) {
  std::map<std::string, double> ref;
  for (const auto& [k, v] : reference) ref[normalize_dataset(k)] = v;
  std::vector<ReferenceDiff> out;
  for (const auto& row : rows) {
    auto it = ref.find(normalize_dataset(row.dataset));
    if (it == ref.end()) throw UnknownDataset(row.dataset);
    const double ours = round2(row.best), theirs = round2(it->second);
    double d = round2(theirs - ours);
    if (d == 0.0) d = 0.0;  // no negative zero in reports
    out.push_back({row.dataset, ours, theirs, d});
  }
  return out;
}

}  // namespace fuzzy_ettp
