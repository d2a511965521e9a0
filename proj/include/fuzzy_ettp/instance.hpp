#pragma once

// Examination timetabling data model: exams, registrations, lecturers,
// rooms, invigilating teachers, the slot grid, and the hard/soft
// constraint catalogue.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzy_ettp/fuzzy.hpp"

namespace fuzzy_ettp {

using Index = int;

// ---------------------------------------------------------------------------
// Constraint catalogue

enum class ConstraintOrigin {
  StudentClash,         // H1: no student in two exams of one slot
  InvigilatorClash,     // H1: no invigilator in two sessions of one slot
  Semester,             // H2: same-semester events apart unless both labs
  SessionsPerDay,       // H3: slot indices stay inside the day/session grid
  RoomKind,             // H4: theory -> lecture theatre, lab -> laboratory
  RoomAvailability,     // H5: room availability schedule
  LabQualification,     // H6: lab sessions need a qualified teacher
  TwoInvigilators,      // H7: two invigilators per session
  Capacity,             // seats per (slot, room)
  Mixing,               // at most four exams share a room in one slot
  Coverage,             // every exam scheduled
  SeatAllocation,       // seats handed out equal the enrollment
  GeneratorEvening,     // rooms without generator host no evening slot
  Linking,              // model-internal definitional rows
  SoftLink,             // model-internal rows defining soft penalties
};

inline std::string_view to_string(ConstraintOrigin o) {
  switch (o) {
    case ConstraintOrigin::StudentClash: return "H1";
    case ConstraintOrigin::InvigilatorClash: return "H1-invigilator";
    case ConstraintOrigin::Semester: return "H2";
    case ConstraintOrigin::SessionsPerDay: return "H3";
    case ConstraintOrigin::RoomKind: return "H4";
    case ConstraintOrigin::RoomAvailability: return "H5";
    case ConstraintOrigin::LabQualification: return "H6";
    case ConstraintOrigin::TwoInvigilators: return "H7";
    case ConstraintOrigin::Capacity: return "capacity";
    case ConstraintOrigin::Mixing: return "mixing<=4";
    case ConstraintOrigin::Coverage: return "coverage";
    case ConstraintOrigin::SeatAllocation: return "seats";
    case ConstraintOrigin::GeneratorEvening: return "generator-evening";
    case ConstraintOrigin::Linking: return "linking";
    case ConstraintOrigin::SoftLink: return "soft-link";
  }
  return "?";
}

enum class SoftConstraint {
  TeacherSchedule,      // S1
  Workload,             // S2
  Travel,               // S3
  RoomWastage,          // S4
  StudentConsecutive,   // S5
  LecturerConsecutive,  // S6
};

inline std::string_view to_string(SoftConstraint s) {
  switch (s) {
    case SoftConstraint::TeacherSchedule: return "teacher_schedule";
    case SoftConstraint::Workload: return "workload";
    case SoftConstraint::Travel: return "travel";
    case SoftConstraint::RoomWastage: return "room_wastage";
    case SoftConstraint::StudentConsecutive: return "student_consecutive";
    case SoftConstraint::LecturerConsecutive: return "lecturer_consecutive";
  }
  return "?";
}

inline constexpr SoftConstraint kAllSoftConstraints[] = {
    SoftConstraint::TeacherSchedule,    SoftConstraint::Workload,
    SoftConstraint::Travel,             SoftConstraint::RoomWastage,
    SoftConstraint::StudentConsecutive, SoftConstraint::LecturerConsecutive,
};

inline std::optional<SoftConstraint> parse_soft_constraint(std::string_view s) {
  for (auto c : kAllSoftConstraints)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

inline constexpr int kMaxExamsPerRoom = 4;
inline constexpr int kInvigilatorsPerSession = 2;

// ---------------------------------------------------------------------------
// Entities

enum class ExamKind { Theory, Laboratory };
enum class RoomKind { LectureTheatre, Laboratory };

inline std::string_view to_string(ExamKind k) { return k == ExamKind::Theory ? "theory" : "laboratory"; }
inline std::string_view to_string(RoomKind k) {
  return k == RoomKind::LectureTheatre ? "lecture_theatre" : "laboratory";
}

struct Exam {
  Index id = 0;
  Index course_id = 0;
  ExamKind kind = ExamKind::Theory;
  double duration_hours = 2.0;
  int semester = 0;  // 0: no semester structure (e.g. Carter data)
  std::string code;  // external code, e.g. "0042" in Carter files
};

/// Sparse boolean student x exam matrix, stored per student.
class RegistrationMatrix {
 public:
  RegistrationMatrix() = default;

  RegistrationMatrix(std::size_t num_exams, std::vector<std::vector<Index>> per_student)
      : students_(std::move(per_student)), enrollment_(num_exams, 0) {
    for (auto& row : students_) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
      for (Index e : row)
        if (e >= 0 && static_cast<std::size_t>(e) < num_exams) ++enrollment_[e];
    }
  }

  [[nodiscard]] std::size_t num_students() const { return students_.size(); }
  [[nodiscard]] std::size_t num_exams() const { return enrollment_.size(); }
  [[nodiscard]] std::span<const Index> exams_of(std::size_t student) const { return students_[student]; }
  [[nodiscard]] const std::vector<std::vector<Index>>& students() const { return students_; }
  [[nodiscard]] int enrollment(Index exam) const { return enrollment_[exam]; }
  [[nodiscard]] const std::vector<int>& enrollments() const { return enrollment_; }
  [[nodiscard]] long total_enrollment() const {
    return std::accumulate(enrollment_.begin(), enrollment_.end(), 0L);
  }

 private:
  std::vector<std::vector<Index>> students_;
  std::vector<int> enrollment_;
};

/// Lecturer/teacher to course assignment plus the lab exams each one may conduct.
struct LecturerAssignment {
  std::vector<std::vector<Index>> courses_of;     // per teacher, sorted course ids
  std::vector<std::vector<Index>> qualified_labs;  // per teacher, sorted exam ids

  [[nodiscard]] bool teaches(Index teacher, Index course) const {
    if (teacher < 0 || static_cast<std::size_t>(teacher) >= courses_of.size()) return false;
    const auto& c = courses_of[teacher];
    return std::binary_search(c.begin(), c.end(), course);
  }
  [[nodiscard]] bool qualified_for(Index teacher, Index exam) const {
    if (teacher < 0 || static_cast<std::size_t>(teacher) >= qualified_labs.size()) return false;
    const auto& q = qualified_labs[teacher];
    return std::binary_search(q.begin(), q.end(), exam);
  }
};

struct Room {
  Index id = 0;
  RoomKind kind = RoomKind::LectureTheatre;
  TriangularFuzzyNumber exam_capacity;
  TrapezoidalInterval availability;
  bool has_generator = true;
  std::string name;
};

struct Teacher {
  Index id = 0;
  TrapezoidalInterval availability;
  TriangularFuzzyNumber workload{4, 8, 12};
  TrapezoidalInterval gap_preference{1, 1, 0};
  std::string name;
};

struct SlotGrid {
  int num_days = 12;
  int sessions_per_day = 2;
  std::vector<int> evening_slots;  // sorted

  [[nodiscard]] int num_slots() const { return num_days * sessions_per_day; }
  [[nodiscard]] int day_of(int slot) const { return slot / sessions_per_day; }
  [[nodiscard]] int session_of(int slot) const { return slot % sessions_per_day; }
  [[nodiscard]] bool is_evening(int slot) const {
    return std::binary_search(evening_slots.begin(), evening_slots.end(), slot);
  }

  /// Grid with `slots` periods and one session per day (Carter-style).
  static SlotGrid linear(int slots) { return SlotGrid{slots, 1, {}}; }

  /// Evening set honoring the "slot index multiple of 3" rule.
  static std::vector<int> multiples_of_three(int num_slots) {
    std::vector<int> e;
    for (int k = 0; k < num_slots; k += 3) e.push_back(k);
    return e;
  }
};

using SoftWeights = std::map<std::string, double>;

inline double soft_weight(const SoftWeights& w, SoftConstraint s) {
  auto it = w.find(std::string(to_string(s)));
  return it == w.end() ? 1.0 : it->second;
}

struct Instance {
  std::string name;
  int num_semesters = 0;
  std::vector<Exam> exams;
  RegistrationMatrix registrations;
  LecturerAssignment lecturers;
  std::vector<Room> rooms;
  std::vector<Teacher> teachers;
  SlotGrid grid;
  std::vector<std::vector<TriangularFuzzyNumber>> travel_times;  // room x room, minutes
  SoftWeights soft_weights;
  double workload_min_hours = 4.0;
  double workload_max_hours = 12.0;

  [[nodiscard]] std::size_t num_exams() const { return exams.size(); }
  [[nodiscard]] std::size_t num_rooms() const { return rooms.size(); }
  [[nodiscard]] int num_slots() const { return grid.num_slots(); }
  [[nodiscard]] std::size_t num_students() const { return registrations.num_students(); }
  [[nodiscard]] int enrollment(Index exam) const { return registrations.enrollment(exam); }
  [[nodiscard]] bool models_rooms() const { return !rooms.empty(); }
  [[nodiscard]] bool models_teachers() const { return !teachers.empty(); }
};

// ---------------------------------------------------------------------------
// Feasibility predicates shared by the builders, heuristics and the audit.

inline bool room_available(const Room& room, int slot) { return membership(room.availability, slot) > 0.0; }

inline bool teacher_available(const Teacher& t, int slot) { return membership(t.availability, slot) > 0.0; }

inline bool room_kind_matches(const Exam& e, const Room& r) {
  return (e.kind == ExamKind::Laboratory) == (r.kind == RoomKind::Laboratory);
}

inline bool room_allows_slot(const Instance& inst, const Room& room, int slot) {
  if (!room_available(room, slot)) return false;
  return room.has_generator || !inst.grid.is_evening(slot);
}

/// Same-semester events may share a slot only when both are laboratory exams.
inline bool semester_conflict(const Exam& a, const Exam& b) {
  if (a.semester == 0 || a.semester != b.semester) return false;
  return !(a.kind == ExamKind::Laboratory && b.kind == ExamKind::Laboratory);
}

inline int seat_capacity(const Room& room, const RankingFunction& r = {}) {
  return static_cast<int>(std::floor(rank(room.exam_capacity, r) + 1e-9));
}

// ---------------------------------------------------------------------------
// Clash matrix

/// Symmetric exam x exam matrix of common-student counts (diagonal holds
/// enrollments), with sparse adjacency lists for the off-diagonal entries.
class ClashMatrix {
 public:
  struct Neighbor {
    Index exam;
    int common;
  };

  ClashMatrix() = default;
  explicit ClashMatrix(std::size_t n) : n_(n), dense_(n * n, 0), adjacency_(n) {}

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] int operator()(Index i, Index j) const { return dense_[static_cast<std::size_t>(i) * n_ + j]; }
  [[nodiscard]] std::span<const Neighbor> neighbors(Index i) const { return adjacency_[i]; }
  [[nodiscard]] int degree(Index i) const { return static_cast<int>(adjacency_[i].size()); }

  void add(Index i, Index j, int count) { dense_[static_cast<std::size_t>(i) * n_ + j] += count; }

  void finalize() {
    for (std::size_t i = 0; i < n_; ++i) {
      adjacency_[i].clear();
      for (std::size_t j = 0; j < n_; ++j)
        if (i != j && dense_[i * n_ + j] > 0)
          adjacency_[i].push_back({static_cast<Index>(j), dense_[i * n_ + j]});
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<int> dense_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

inline ClashMatrix clash_matrix(const RegistrationMatrix& reg) {
  ClashMatrix n(reg.num_exams());
  for (const auto& row : reg.students()) {
    for (std::size_t a = 0; a < row.size(); ++a) {
      n.add(row[a], row[a], 1);
      for (std::size_t b = a + 1; b < row.size(); ++b) {
        n.add(row[a], row[b], 1);
        n.add(row[b], row[a], 1);
      }
    }
  }
  n.finalize();
  return n;
}

inline ClashMatrix clash_matrix(const Instance& inst) { return clash_matrix(inst.registrations); }

inline int conflict_degree(const ClashMatrix& n, Index exam) { return n.degree(exam); }

inline int conflict_degree(const Instance& inst, Index exam) { return clash_matrix(inst).degree(exam); }

/// Exams that may never share a slot with each exam: common students or the
/// semester rule. Sorted, no duplicates.
inline std::vector<std::vector<Index>> slot_conflicts(const Instance& inst, const ClashMatrix& n) {
  std::vector<std::vector<Index>> out(inst.num_exams());
  for (std::size_t i = 0; i < inst.num_exams(); ++i) {
    for (const auto& nb : n.neighbors(static_cast<Index>(i))) out[i].push_back(nb.exam);
    if (inst.exams[i].semester != 0) {
      for (std::size_t j = 0; j < inst.num_exams(); ++j)
        if (i != j && semester_conflict(inst.exams[i], inst.exams[j])) out[i].push_back(static_cast<Index>(j));
    }
    std::sort(out[i].begin(), out[i].end());
    out[i].erase(std::unique(out[i].begin(), out[i].end()), out[i].end());
  }
  return out;
}

/// Teachers assigned to each course id.
inline std::vector<std::vector<Index>> lecturers_of_course(const Instance& inst) {
  Index max_course = -1;
  for (const auto& e : inst.exams) max_course = std::max(max_course, e.course_id);
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(max_course + 1));
  for (std::size_t t = 0; t < inst.lecturers.courses_of.size(); ++t)
    for (Index c : inst.lecturers.courses_of[t])
      if (c >= 0 && c <= max_course) out[c].push_back(static_cast<Index>(t));
  return out;
}

// ---------------------------------------------------------------------------
// Structural validation

enum class DefectKind {
  DurationOutOfRange,
  SemesterOutOfRange,
  ExamIdMismatch,
  UnknownExamInRegistration,
  RegistrationShape,
  UnknownCourse,
  NoQualifiedInvigilator,
  UnknownTeacher,
  InvalidCapacity,
  AvailabilityOutOfRange,
  InvalidFuzzyNumber,
  WorkloadOutOfRange,
  TravelTimesShape,
  TravelTimesAsymmetric,
  InvalidGrid,
  EveningSlotOutOfRange,
};

inline std::string_view to_string(DefectKind k) {
  switch (k) {
    case DefectKind::DurationOutOfRange: return "DurationOutOfRange";
    case DefectKind::SemesterOutOfRange: return "SemesterOutOfRange";
    case DefectKind::ExamIdMismatch: return "ExamIdMismatch";
    case DefectKind::UnknownExamInRegistration: return "UnknownExamInRegistration";
    case DefectKind::RegistrationShape: return "RegistrationShape";
    case DefectKind::UnknownCourse: return "UnknownCourse";
    case DefectKind::NoQualifiedInvigilator: return "NoQualifiedInvigilator";
    case DefectKind::UnknownTeacher: return "UnknownTeacher";
    case DefectKind::InvalidCapacity: return "InvalidCapacity";
    case DefectKind::AvailabilityOutOfRange: return "AvailabilityOutOfRange";
    case DefectKind::InvalidFuzzyNumber: return "InvalidFuzzyNumber";
    case DefectKind::WorkloadOutOfRange: return "WorkloadOutOfRange";
    case DefectKind::TravelTimesShape: return "TravelTimesShape";
    case DefectKind::TravelTimesAsymmetric: return "TravelTimesAsymmetric";
    case DefectKind::InvalidGrid: return "InvalidGrid";
    case DefectKind::EveningSlotOutOfRange: return "EveningSlotOutOfRange";
  }
  return "?";
}

struct Defect {
  DefectKind kind;
  Index id = -1;  // offending exam/room/teacher/student/slot, -1 when global
  std::string detail;

  bool operator==(const Defect&) const = default;
};

inline std::vector<Defect> validate(const Instance& inst) {
  std::vector<Defect> out;
  auto add = [&](DefectKind k, Index id, std::string d) { out.push_back({k, id, std::move(d)}); };

  if (inst.grid.num_days < 0 || inst.grid.sessions_per_day < 1)
    add(DefectKind::InvalidGrid, -1, "num_days >= 0 and sessions_per_day >= 1 required");
  const int slots = inst.num_slots();
  for (int k : inst.grid.evening_slots)
    if (k < 0 || k >= slots) add(DefectKind::EveningSlotOutOfRange, k, "evening slot outside the grid");

  for (std::size_t i = 0; i < inst.exams.size(); ++i) {
    const auto& e = inst.exams[i];
    const Index id = static_cast<Index>(i);
    if (e.id != id) add(DefectKind::ExamIdMismatch, id, "exam id must equal its position");
    if (!(e.duration_hours >= 2.0 && e.duration_hours <= 3.0))
      add(DefectKind::DurationOutOfRange, id, "duration_hours must lie in [2, 3]");
    if (inst.num_semesters > 0 ? (e.semester < 1 || e.semester > inst.num_semesters) : e.semester != 0)
      add(DefectKind::SemesterOutOfRange, id, "semester outside [1, num_semesters]");
    if (e.course_id < 0) add(DefectKind::UnknownCourse, id, "negative course id");
  }

  if (inst.registrations.num_exams() != inst.exams.size())
    add(DefectKind::RegistrationShape, -1, "registration matrix exam dimension differs from exam list");
  for (std::size_t s = 0; s < inst.registrations.num_students(); ++s)
    for (Index e : inst.registrations.exams_of(s))
      if (e < 0 || static_cast<std::size_t>(e) >= inst.exams.size())
        add(DefectKind::UnknownExamInRegistration, static_cast<Index>(s), "student references unknown exam");

  const auto& lec = inst.lecturers;
  if (lec.courses_of.size() > inst.teachers.size() || lec.qualified_labs.size() > inst.teachers.size())
    add(DefectKind::UnknownTeacher, -1, "lecturer assignment references more teachers than exist");
  for (std::size_t t = 0; t < lec.qualified_labs.size(); ++t)
    for (Index e : lec.qualified_labs[t])
      if (e < 0 || static_cast<std::size_t>(e) >= inst.exams.size())
        add(DefectKind::UnknownExamInRegistration, static_cast<Index>(t), "qualified-lab set references unknown exam");
  for (std::size_t i = 0; i < inst.exams.size(); ++i) {
    if (inst.exams[i].kind != ExamKind::Laboratory) continue;
    bool any = false;
    for (std::size_t t = 0; t < lec.qualified_labs.size() && !any; ++t)
      any = lec.qualified_for(static_cast<Index>(t), static_cast<Index>(i));
    if (!any) add(DefectKind::NoQualifiedInvigilator, static_cast<Index>(i), "laboratory exam has no qualified lecturer");
  }

  for (std::size_t r = 0; r < inst.rooms.size(); ++r) {
    const auto& room = inst.rooms[r];
    const Index id = static_cast<Index>(r);
    if (!room.exam_capacity.valid()) add(DefectKind::InvalidFuzzyNumber, id, "room capacity triplet invalid");
    if (room.exam_capacity.lower < 0) add(DefectKind::InvalidCapacity, id, "room capacity lower bound negative");
    if (!room.availability.valid()) add(DefectKind::InvalidFuzzyNumber, id, "room availability doublet invalid");
    if (room.availability.left < 0 || room.availability.right > slots - 1)
      add(DefectKind::AvailabilityOutOfRange, id, "room availability outside [0, num_slots - 1]");
  }

  for (std::size_t t = 0; t < inst.teachers.size(); ++t) {
    const auto& tc = inst.teachers[t];
    const Index id = static_cast<Index>(t);
    if (!tc.workload.valid() || !tc.availability.valid() || !tc.gap_preference.valid())
      add(DefectKind::InvalidFuzzyNumber, id, "teacher fuzzy data invalid");
    if (tc.workload.lower < inst.workload_min_hours || tc.workload.upper > inst.workload_max_hours)
      add(DefectKind::WorkloadOutOfRange, id, "workload triplet outside [workload_min, workload_max]");
  }

  if (!inst.travel_times.empty()) {
    const std::size_t m = inst.rooms.size();
    bool shape_ok = inst.travel_times.size() == m;
    for (const auto& row : inst.travel_times) shape_ok = shape_ok && row.size() == m;
    if (!shape_ok) {
      add(DefectKind::TravelTimesShape, -1, "travel_times must be num_rooms x num_rooms");
    } else {
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          if (!inst.travel_times[a][b].valid())
            add(DefectKind::InvalidFuzzyNumber, static_cast<Index>(a), "travel time triplet invalid");
          if (b > a && inst.travel_times[a][b] != inst.travel_times[b][a])
            add(DefectKind::TravelTimesAsymmetric, static_cast<Index>(a), "travel_times not symmetric");
        }
    }
  }
  return out;
}

inline double travel_time(const Instance& inst, Index a, Index b, const RankingFunction& r) {
  if (inst.travel_times.empty() || a < 0 || b < 0) return 0.0;
  return rank(inst.travel_times[a][b], r);
}

}  // namespace fuzzy_ettp
