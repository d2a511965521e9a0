#pragma once

// Synthetic single-institution instances shaped like the Open University
// problem: 90 courses, 200 exams, 11 semesters, 50 teachers, 19 rooms,
// 12 days x 2 sessions.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzy_ettp/config.hpp"
#include "fuzzy_ettp/instance.hpp"
#include "fuzzy_ettp/random.hpp"

namespace fuzzy_ettp {

class InfeasibleParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GeneratorParams {
  int num_courses = 90;
  int num_exams = 200;
  int num_events = 210;
  int num_semesters = 11;
  int num_teachers = 50;
  int num_rooms = 19;
  int num_days = 12;
  int sessions_per_day = 2;
  int students = 1100;
  // Target mean exams per student; values above the semester baseline add
  // cross-semester electives. 0 keeps pure semester cohorts.
  double mean_exams_per_student = 0.0;
  double lab_fraction = 0.2;
  std::uint64_t seed = 1;
};

/// Default rooms and teachers: a fifth of the rooms are laboratories, every
/// third lecture theatre lacks a standby generator, every fifth teacher is
/// away for the first two days.
inline InstitutionConfig default_config(const GeneratorParams& p) {
  InstitutionConfig cfg;
  const int slots = p.num_days * p.sessions_per_day;
  const double last = std::max(0, slots - 1);
  const int labs = p.num_rooms >= 2 ? std::max(1, p.num_rooms / 5) : 0;
  const int theatres = p.num_rooms - labs;
  for (int r = 0; r < p.num_rooms; ++r) {
    Room room;
    room.id = r;
    if (r < theatres) {
      const double cap = 60.0 + 10.0 * (r % 10);
      room.kind = RoomKind::LectureTheatre;
      room.name = "LT" + std::to_string(r + 1);
      room.exam_capacity = {0.9 * cap, cap, 1.1 * cap};
      room.has_generator = r % 3 != 2;
    } else {
      room.kind = RoomKind::Laboratory;
      room.name = "LAB" + std::to_string(r - theatres + 1);
      room.exam_capacity = {36, 40, 44};
      room.has_generator = true;
    }
    room.availability = {0, last, 0};
    cfg.rooms.push_back(std::move(room));
  }
  for (int t = 0; t < p.num_teachers; ++t) {
    Teacher teacher;
    teacher.id = t;
    teacher.name = "T" + std::to_string(t + 1);
    const double from = (t % 5 == 4) ? std::min(last, 2.0 * p.sessions_per_day) : 0.0;
    teacher.availability = {from, last, 0};
    teacher.workload = {4, 8, 12};
    teacher.gap_preference = {1, 1, 0};
    cfg.teachers.push_back(std::move(teacher));
  }
  for (int a = 0; a < p.num_rooms; ++a) {
    std::vector<TriangularFuzzyNumber> row;
    for (int b = 0; b < p.num_rooms; ++b) {
      if (a == b) {
        row.push_back(TriangularFuzzyNumber::crisp(0));
      } else {
        const double base = 2.0 + std::abs(a - b) % 7;
        row.push_back({base - 1.0, base, base + 2.0});
      }
    }
    cfg.travel_times.push_back(std::move(row));
  }
  return cfg;
}

inline Instance generate_instance(const GeneratorParams& p, const InstitutionConfig& config) {
  if (p.num_exams < 0 || p.num_courses < 0 || p.num_semesters < 0 || p.num_teachers < 0 || p.num_rooms < 0 ||
      p.num_days < 0 || p.sessions_per_day < 1 || p.students < 0)
    throw InfeasibleParams("generator counts must be non-negative (sessions_per_day >= 1)");
  if (p.num_exams > 0 && (p.num_courses < 1 || p.num_semesters < 1))
    throw InfeasibleParams("exams need at least one course and one semester");
  if (p.num_events < p.num_exams) throw InfeasibleParams("num_events must be >= num_exams");
  if (!config.rooms.empty() && static_cast<int>(config.rooms.size()) != p.num_rooms)
    throw InfeasibleParams("config lists " + std::to_string(config.rooms.size()) + " rooms, params ask for " +
                           std::to_string(p.num_rooms));
  if (!config.teachers.empty() && static_cast<int>(config.teachers.size()) != p.num_teachers)
    throw InfeasibleParams("config lists " + std::to_string(config.teachers.size()) + " teachers, params ask for " +
                           std::to_string(p.num_teachers));

  Rng rng(p.seed);
  Instance inst;
  inst.name = "synthetic-" + std::to_string(p.seed);
  inst.num_semesters = p.num_exams > 0 ? p.num_semesters : 0;

  InstitutionConfig defaults = default_config(p);
  InstitutionConfig cfg = config;
  if (cfg.rooms.empty()) cfg.rooms = defaults.rooms;
  if (cfg.teachers.empty()) cfg.teachers = defaults.teachers;
  if (cfg.travel_times.empty()) cfg.travel_times = defaults.travel_times;
  cfg.grid = SlotGrid{p.num_days, p.sessions_per_day, {}};
  apply_config(inst, cfg);

  // Exams: the first exam of every course is a theory paper; later ones are
  // laboratory exams with probability lab_fraction.
  std::vector<int> course_semester(static_cast<std::size_t>(p.num_courses));
  for (int c = 0; c < p.num_courses; ++c) course_semester[c] = p.num_semesters ? c % p.num_semesters + 1 : 0;
  static constexpr double kDurations[] = {2.0, 2.5, 3.0};
  const bool allow_labs = p.num_teachers > 0 && std::any_of(inst.rooms.begin(), inst.rooms.end(), [](const Room& r) {
                            return r.kind == RoomKind::Laboratory;
                          });
  for (int i = 0; i < p.num_exams; ++i) {
    Exam e;
    e.id = i;
    e.course_id = i % p.num_courses;
    e.semester = course_semester[e.course_id];
    const bool first_of_course = i < p.num_courses;
    e.kind = (!first_of_course && allow_labs && rng.chance(p.lab_fraction)) ? ExamKind::Laboratory : ExamKind::Theory;
    e.duration_hours = kDurations[rng.below(3)];
    inst.exams.push_back(std::move(e));
  }

  // Lecturers: two per course where possible; they are qualified for the
  // laboratory exams of their courses.
  const int T = p.num_teachers;
  inst.lecturers.courses_of.assign(static_cast<std::size_t>(T), {});
  inst.lecturers.qualified_labs.assign(static_cast<std::size_t>(T), {});
  if (T > 0) {
    for (int c = 0; c < p.num_courses; ++c) {
      inst.lecturers.courses_of[c % T].push_back(c);
      const int second = (c * 7 + 3) % T;
      if (second != c % T) inst.lecturers.courses_of[second].push_back(c);
    }
    for (auto& cs : inst.lecturers.courses_of) std::sort(cs.begin(), cs.end());
    for (const auto& e : inst.exams) {
      if (e.kind != ExamKind::Laboratory) continue;
      for (int t = 0; t < T; ++t)
        if (inst.lecturers.teaches(t, e.course_id)) inst.lecturers.qualified_labs[t].push_back(e.id);
    }
  }

  // Students: one semester cohort each; all theory exams of the semester plus
  // one of its laboratory exams, so labs of a semester have disjoint groups.
  // A lab exam takes at most as many students as its qualified teachers can
  // seat in laboratories within one slot.
  int lab_seats = std::numeric_limits<int>::max();
  int lab_rooms = 0;
  for (const auto& r : inst.rooms)
    if (r.kind == RoomKind::Laboratory) {
      lab_seats = std::min(lab_seats, seat_capacity(r));
      ++lab_rooms;
    }
  std::vector<int> lab_limit(inst.exams.size(), 0);
  for (const auto& e : inst.exams) {
    if (e.kind != ExamKind::Laboratory) continue;
    int q = 0;
    for (int t = 0; t < T; ++t) q += inst.lecturers.qualified_for(t, e.id);
    lab_limit[e.id] = std::min(q, lab_rooms) * lab_seats;
  }
  std::vector<int> lab_taken(inst.exams.size(), 0);
  std::vector<std::vector<Index>> theory_of(static_cast<std::size_t>(p.num_semesters + 1));
  std::vector<std::vector<Index>> labs_of(static_cast<std::size_t>(p.num_semesters + 1));
  for (const auto& e : inst.exams)
    (e.kind == ExamKind::Theory ? theory_of : labs_of)[e.semester].push_back(e.id);

  std::vector<std::vector<Index>> students;
  if (p.num_exams > 0) {
    for (int s = 0; s < p.students; ++s) {
      const int sem = rng.uniform_int(1, p.num_semesters);
      std::vector<Index> row = theory_of[sem];
      if (!labs_of[sem].empty()) {
        // Start at a random lab of the semester, take the first with room left.
        const std::size_t first = rng.below(labs_of[sem].size());
        for (std::size_t q = 0; q < labs_of[sem].size(); ++q) {
          const Index lab = labs_of[sem][(first + q) % labs_of[sem].size()];
          if (lab_taken[lab] < lab_limit[lab]) {
            ++lab_taken[lab];
            row.push_back(lab);
            break;
          }
        }
      }
      if (!row.empty()) students.push_back(std::move(row));
    }
    double total = 0;
    for (const auto& r : students) total += static_cast<double>(r.size());
    const double target = p.mean_exams_per_student * static_cast<double>(students.size());
    std::vector<Index> all_theory;
    for (const auto& e : inst.exams)
      if (e.kind == ExamKind::Theory) all_theory.push_back(e.id);
    long attempts = 0;
    const long max_attempts = 100L * static_cast<long>(target + 1.0);
    while (total < target && !students.empty() && !all_theory.empty() && attempts++ < max_attempts) {
      auto& row = students[rng.below(students.size())];
      const Index extra = all_theory[rng.below(all_theory.size())];
      if (std::find(row.begin(), row.end(), extra) != row.end()) continue;
      row.push_back(extra);
      total += 1.0;
    }
  }
  inst.registrations = RegistrationMatrix(inst.exams.size(), std::move(students));

  // Capacity screen.
  long seats_theory = 0, seats_lab = 0;
  for (const auto& r : inst.rooms) {
    long per_slot_total = 0;
    for (int k = 0; k < inst.num_slots(); ++k)
      if (room_allows_slot(inst, r, k)) per_slot_total += seat_capacity(r);
    (r.kind == RoomKind::Laboratory ? seats_lab : seats_theory) += per_slot_total;
  }
  long need_theory = 0, need_lab = 0;
  for (const auto& e : inst.exams)
    (e.kind == ExamKind::Laboratory ? need_lab : need_theory) += inst.enrollment(e.id);
  if (need_theory > seats_theory || need_lab > seats_lab)
    throw InfeasibleParams("total enrollment exceeds total ranked room capacity over all slots");
  return inst;
}

inline Instance generate_instance(const GeneratorParams& p) { return generate_instance(p, InstitutionConfig{}); }

}  // namespace fuzzy_ettp
