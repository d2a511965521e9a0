#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "support.hpp"

using namespace fuzzy_ettp;
using fuzzy_ettp::testing::tiny_instance;
using fuzzy_ettp::testing::TinySpec;

namespace {

Instance with_students(int exams, std::vector<std::vector<Index>> rows) {
  Instance inst;
  inst.grid = SlotGrid::linear(4);
  for (int i = 0; i < exams; ++i) {
    Exam e;
    e.id = i;
    e.course_id = i;
    inst.exams.push_back(e);
  }
  inst.registrations = RegistrationMatrix(static_cast<std::size_t>(exams), std::move(rows));
  return inst;
}

bool has_defect(const std::vector<Defect>& d, DefectKind k, Index id = -2) {
  return std::any_of(d.begin(), d.end(), [&](const Defect& x) { return x.kind == k && (id == -2 || x.id == id); });
}

}  // namespace

TEST(ClashMatrix, SinglePair) {
  const auto N = clash_matrix(with_students(2, {{0, 1}}));
  EXPECT_EQ(N(0, 1), 1);
  EXPECT_EQ(N(1, 0), 1);
  EXPECT_EQ(N(0, 0), 1);
}

TEST(ClashMatrix, DisjointPopulations) {
  const auto N = clash_matrix(with_students(2, {{0}, {1}, {0}}));
  EXPECT_EQ(N(0, 1), 0);
  EXPECT_EQ(N(0, 0), 2);
  EXPECT_EQ(conflict_degree(N, 0), 0);
}

TEST(ClashMatrix, ThreeStudentsThreeExams) {
  const auto inst = with_students(3, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
  const auto N = clash_matrix(inst);
  EXPECT_EQ(N(0, 1), 3);
  EXPECT_EQ(N(0, 2), 3);
  EXPECT_EQ(N(1, 2), 3);
  for (Index e = 0; e < 3; ++e) EXPECT_EQ(conflict_degree(inst, e), 2);
}

TEST(ClashMatrix, MatchesBruteForceDoubleLoop) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    TinySpec spec;
    spec.exams = 12;
    spec.students = 80;
    spec.take = 0.25;
    const auto inst = tiny_instance(seed, spec);
    const auto N = clash_matrix(inst);
    const auto& rows = inst.registrations.students();
    int enrollments = 0;
    for (const auto& r : rows) enrollments += static_cast<int>(r.size());
    ASSERT_LE(enrollments, 1000);
    for (Index a = 0; a < 12; ++a)
      for (Index b = 0; b < 12; ++b) {
        int count = 0;
        for (const auto& r : rows)
          count += std::count(r.begin(), r.end(), a) > 0 && std::count(r.begin(), r.end(), b) > 0;
        EXPECT_EQ(N(a, b), count) << a << "," << b;
      }
    for (Index a = 0; a < 12; ++a) EXPECT_EQ(N(a, a), inst.enrollment(a));
  }
}

TEST(ClashMatrix, EquivariantUnderPermutation) {
  TinySpec spec;
  spec.exams = 9;
  spec.students = 40;
  const auto inst = tiny_instance(3, spec);
  std::vector<Index> perm(9);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(8);
  rng.shuffle(perm);
  auto rows = inst.registrations.students();
  for (auto& r : rows)
    for (auto& e : r) e = perm[e];
  std::reverse(rows.begin(), rows.end());  // student order too
  const auto N = clash_matrix(inst);
  const auto P = clash_matrix(RegistrationMatrix(9, rows));
  for (Index a = 0; a < 9; ++a)
    for (Index b = 0; b < 9; ++b) EXPECT_EQ(N(a, b), P(perm[a], perm[b]));
}

TEST(ClashMatrix, NeighborListsAgreeWithDenseEntries) {
  const auto inst = tiny_instance(4, TinySpec{.exams = 10, .students = 30});
  const auto N = clash_matrix(inst);
  for (Index a = 0; a < 10; ++a) {
    int deg = 0;
    for (Index b = 0; b < 10; ++b) deg += (a != b && N(a, b) > 0);
    EXPECT_EQ(N.degree(a), deg);
    for (const auto& nb : N.neighbors(a)) EXPECT_EQ(nb.common, N(a, nb.exam));
  }
}

TEST(SlotGrid, IndexingAndEvenings) {
  SlotGrid g;
  EXPECT_EQ(g.num_slots(), 24);
  EXPECT_EQ(g.day_of(5), 2);
  EXPECT_EQ(g.session_of(5), 1);
  g.evening_slots = SlotGrid::multiples_of_three(g.num_slots());
  EXPECT_TRUE(g.is_evening(0));
  EXPECT_TRUE(g.is_evening(21));
  EXPECT_FALSE(g.is_evening(22));
  EXPECT_EQ(SlotGrid::linear(18).num_slots(), 18);
}

TEST(Predicates, SemesterRuleSparesLabPairs) {
  Exam a, b;
  a.semester = b.semester = 3;
  EXPECT_TRUE(semester_conflict(a, b));
  a.kind = ExamKind::Laboratory;
  EXPECT_TRUE(semester_conflict(a, b));
  b.kind = ExamKind::Laboratory;
  EXPECT_FALSE(semester_conflict(a, b));
  b.semester = 4;
  a.kind = ExamKind::Theory;
  EXPECT_FALSE(semester_conflict(a, b));
  Exam c, d;  // no semester structure
  EXPECT_FALSE(semester_conflict(c, d));
}

TEST(Predicates, RoomKindAndAvailability) {
  Exam lab;
  lab.kind = ExamKind::Laboratory;
  Room lt, lr;
  lr.kind = RoomKind::Laboratory;
  EXPECT_FALSE(room_kind_matches(lab, lt));
  EXPECT_TRUE(room_kind_matches(lab, lr));
  EXPECT_TRUE(room_kind_matches(Exam{}, lt));
  lt.availability = {2, 5, 0};
  EXPECT_FALSE(room_available(lt, 1));
  EXPECT_TRUE(room_available(lt, 2));
  EXPECT_TRUE(room_available(lt, 5));
  EXPECT_FALSE(room_available(lt, 6));
  lt.exam_capacity = {45, 50, 58};
  EXPECT_EQ(seat_capacity(lt), 51);
  EXPECT_EQ(seat_capacity(lt, {RankingMethod::ModalValue}), 50);
}

TEST(Validate, GeneratedDefaultInstanceIsClean) {
  const auto inst = generate_instance(GeneratorParams{});
  EXPECT_TRUE(validate(inst).empty());
}

TEST(Validate, DurationOutOfRange) {
  auto inst = generate_instance(GeneratorParams{});
  inst.exams[7].duration_hours = 5;
  const auto d = validate(inst);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, DefectKind::DurationOutOfRange);
  EXPECT_EQ(d[0].id, 7);
}

TEST(Validate, LabWithoutQualifiedLecturer) {
  auto inst = generate_instance(GeneratorParams{});
  Index lab = -1;
  for (const auto& e : inst.exams)
    if (e.kind == ExamKind::Laboratory) lab = e.id;
  ASSERT_GE(lab, 0);
  for (auto& q : inst.lecturers.qualified_labs) q.erase(std::remove(q.begin(), q.end(), lab), q.end());
  EXPECT_TRUE(has_defect(validate(inst), DefectKind::NoQualifiedInvigilator, lab));
}

TEST(Validate, StructuralDefectsNamed) {
  auto inst = tiny_instance(1, TinySpec{.teachers = 2});
  ASSERT_TRUE(validate(inst).empty());

  auto a = inst;
  a.exams[2].id = 9;
  EXPECT_TRUE(has_defect(validate(a), DefectKind::ExamIdMismatch, 2));

  auto b = inst;
  b.exams[0].semester = 3;
  EXPECT_TRUE(has_defect(validate(b), DefectKind::SemesterOutOfRange, 0));

  auto c = inst;
  c.registrations = RegistrationMatrix(5, {{0, 7}});
  EXPECT_TRUE(has_defect(validate(c), DefectKind::UnknownExamInRegistration));

  auto d = inst;
  d.rooms[0].exam_capacity = {-2, 1, 3};
  EXPECT_TRUE(has_defect(validate(d), DefectKind::InvalidCapacity, 0));

  auto e = inst;
  e.rooms[1].availability = {0, 40, 0};
  EXPECT_TRUE(has_defect(validate(e), DefectKind::AvailabilityOutOfRange, 1));

  auto f = inst;
  f.teachers[1].workload = {2, 8, 12};
  EXPECT_TRUE(has_defect(validate(f), DefectKind::WorkloadOutOfRange, 1));

  auto g = inst;
  g.travel_times = {{Tfn::crisp(0), Tfn{1, 2, 3}}, {Tfn{1, 2, 4}, Tfn::crisp(0)}};
  EXPECT_TRUE(has_defect(validate(g), DefectKind::TravelTimesAsymmetric));
  g.travel_times.pop_back();
  EXPECT_TRUE(has_defect(validate(g), DefectKind::TravelTimesShape));

  auto h = inst;
  h.grid.evening_slots = {99};
  EXPECT_TRUE(has_defect(validate(h), DefectKind::EveningSlotOutOfRange, 99));

  auto i = inst;
  i.lecturers.courses_of.resize(5);
  EXPECT_TRUE(has_defect(validate(i), DefectKind::UnknownTeacher));
}

TEST(Validate, IdempotentAndPure) {
  auto inst = generate_instance(GeneratorParams{.num_exams = 30, .num_events = 30, .students = 200});
  inst.exams[3].duration_hours = 1;
  const auto before = instance_hash(inst);
  const auto d1 = validate(inst);
  const auto d2 = validate(inst);
  EXPECT_EQ(d1, d2);
  EXPECT_EQ(instance_hash(inst), before);
}

TEST(Registration, EnrollmentEqualsColumnSums) {
  const auto inst = generate_instance(GeneratorParams{});
  std::vector<int> col(inst.num_exams(), 0);
  for (const auto& r : inst.registrations.students())
    for (Index e : r) ++col[e];
  EXPECT_EQ(col, inst.registrations.enrollments());
}

TEST(SoftWeights, DefaultToOne) {
  Instance inst;
  EXPECT_DOUBLE_EQ(soft_weight(inst.soft_weights, SoftConstraint::Travel), 1.0);
  inst.soft_weights["travel"] = 0.25;
  EXPECT_DOUBLE_EQ(soft_weight(inst.soft_weights, SoftConstraint::Travel), 0.25);
  EXPECT_EQ(parse_soft_constraint("room_wastage"), SoftConstraint::RoomWastage);
  EXPECT_FALSE(parse_soft_constraint("bogus").has_value());
}
