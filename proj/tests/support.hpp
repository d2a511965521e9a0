#pragma once

// Small random instances shared by the test binaries.

#include <cstdint>
#include <vector>

#include "fuzzy_ettp/fuzzy_ettp.hpp"

namespace fuzzy_ettp::testing {

struct TinySpec {
  int exams = 5;
  int slots = 4;
  int rooms = 2;
  int students = 8;
  double take = 0.3;            // chance a student takes an exam
  bool fuzzy_capacity = true;
  bool labs = false;            // one lab room and some lab exams
  bool semesters = false;
  bool evenings = false;        // slot 0 is an evening, room 1 lacks a generator
  bool unavailable = false;     // room 0 closed in the last slot
  int cap_lo = 3;               // modal room capacity drawn from [cap_lo, cap_hi]
  int cap_hi = 8;
  int teachers = 0;             // available everywhere, qualified for every lab
};

inline Instance tiny_instance(std::uint64_t seed, const TinySpec& s = {}) {
  Rng rng(seed);
  Instance inst;
  inst.name = "tiny-" + std::to_string(seed);
  inst.grid = SlotGrid{s.slots, 1, {}};
  if (s.evenings) inst.grid.evening_slots = {0};
  for (int i = 0; i < s.exams; ++i) {
    Exam e;
    e.id = i;
    e.course_id = i;
    e.kind = (s.labs && i % 3 == 2) ? ExamKind::Laboratory : ExamKind::Theory;
    e.semester = s.semesters ? 1 + i % 2 : 0;
    inst.exams.push_back(e);
  }
  if (s.semesters) inst.num_semesters = 2;
  std::vector<std::vector<Index>> rows;
  for (int st = 0; st < s.students; ++st) {
    std::vector<Index> row;
    for (int i = 0; i < s.exams; ++i)
      if (rng.chance(s.take)) row.push_back(i);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  inst.registrations = RegistrationMatrix(inst.exams.size(), std::move(rows));
  for (int r = 0; r < s.rooms; ++r) {
    Room room;
    room.id = r;
    room.kind = (s.labs && r == s.rooms - 1) ? RoomKind::Laboratory : RoomKind::LectureTheatre;
    const double c = s.cap_lo + static_cast<double>(rng.below(static_cast<std::uint64_t>(s.cap_hi - s.cap_lo + 1)));
    room.exam_capacity = s.fuzzy_capacity ? Tfn{c - 1, c, c + 2} : Tfn::crisp(c);
    const double last = s.unavailable && r == 0 ? s.slots - 2 : s.slots - 1;
    room.availability = {0, last, 0};
    room.has_generator = !(s.evenings && r == 1);
    inst.rooms.push_back(room);
  }
  for (int t = 0; t < s.teachers; ++t) {
    Teacher teacher;
    teacher.id = t;
    teacher.availability = {0, static_cast<double>(s.slots - 1), 0};
    inst.teachers.push_back(teacher);
  }
  if (s.teachers > 0) {
    inst.lecturers.courses_of.assign(static_cast<std::size_t>(s.teachers), {});
    inst.lecturers.qualified_labs.assign(static_cast<std::size_t>(s.teachers), {});
    for (int i = 0; i < s.exams; ++i) {
      inst.lecturers.courses_of[static_cast<std::size_t>(i % s.teachers)].push_back(i);
      if (inst.exams[i].kind == ExamKind::Laboratory)
        for (auto& labs : inst.lecturers.qualified_labs) labs.push_back(i);
    }
  }
  return inst;
}

}  // namespace fuzzy_ettp::testing
