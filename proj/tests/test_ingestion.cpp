#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"

using namespace fuzzy_ettp;

TEST(ParseCarter, HandCountedExample) {
  const auto ds = parse_carter("0001 2\n0002 1", "0001 0002\n0001");
  ASSERT_EQ(ds.exams.size(), 2u);
  EXPECT_EQ(ds.exams[0].enrollment, 2);
  EXPECT_EQ(ds.exams[1].enrollment, 1);
  EXPECT_TRUE(ds.mismatches.empty());
  const auto inst = carter_instance(ds, 5);
  EXPECT_EQ(clash_matrix(inst)(0, 1), 1);
  EXPECT_TRUE(validate(inst).empty());
}

TEST(ParseCarter, EmptyStudentFileGivesZeroClashes) {
  const auto ds = parse_carter("0001 0\n0002 0\n0003 0\n", "");
  const auto N = clash_matrix(carter_instance(ds, 3));
  for (Index a = 0; a < 3; ++a)
    for (Index b = 0; b < 3; ++b) EXPECT_EQ(N(a, b), 0);
}

TEST(ParseCarter, UnknownCodeReportsLine) {
  try {
    parse_carter("0001 1\n0002 1\n", "0001\n0002 0099\n");
    FAIL() << "expected UnknownExamCode";
  } catch (const UnknownExamCode& e) {
    EXPECT_EQ(e.code(), "0099");
    EXPECT_EQ(e.lineno(), 2);
  }
}

TEST(ParseCarter, MalformedLines) {
  EXPECT_THROW(parse_carter("0001\n", ""), MalformedLine);
  EXPECT_THROW(parse_carter("0001 x\n", ""), MalformedLine);
  EXPECT_THROW(parse_carter("0001 -3\n", ""), MalformedLine);
  EXPECT_THROW(parse_carter("0001 1\n0001 2\n", ""), MalformedLine);
}

TEST(ParseCarter, StudentCountsWinOverDeclaredEnrollment) {
  const auto ds = parse_carter("0001 9\n0002 2\n", "0001\n0002\n0001 0002\n");
  EXPECT_EQ(ds.exams[0].enrollment, 2);
  ASSERT_EQ(ds.mismatches.size(), 1u);
  EXPECT_EQ(ds.mismatches[0].exam, 0);
  EXPECT_EQ(ds.mismatches[0].declared, 9);
  EXPECT_EQ(ds.mismatches[0].counted, 2);
}

TEST(ParseCarter, CrlfAndUnpaddedCodesTolerated) {
  const auto a = parse_carter("0001 1\r\n0002 2\r\n", "0001 0002\r\n0002\r\n");
  const auto b = parse_carter("0001 1\n0002 2\n", "1 2\n2\n");
  EXPECT_EQ(a.student_rows, b.student_rows);
  EXPECT_EQ(a.exams[1].enrollment, 2);
  EXPECT_EQ(b.exams[1].enrollment, 2);
}

TEST(ParseCarter, DuplicateCodeOnStudentLineCountsOnce) {
  const auto ds = parse_carter("0001 1\n", "0001 0001\n");
  EXPECT_EQ(ds.exams[0].enrollment, 1);
  EXPECT_TRUE(ds.mismatches.empty());
}

TEST(ParseCarter, SerializeRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto inst = fuzzy_ettp::testing::tiny_instance(seed, {.exams = 15, .students = 60});
    const auto ds = to_carter(inst);
    const auto text = serialize_carter(ds);
    const auto back = parse_carter(text.crs, text.stu);
    ASSERT_EQ(back.exams.size(), ds.exams.size());
    for (std::size_t i = 0; i < ds.exams.size(); ++i) {
      EXPECT_EQ(back.exams[i].code, ds.exams[i].code);
      EXPECT_EQ(back.exams[i].enrollment, ds.exams[i].enrollment);
    }
    EXPECT_EQ(back.student_rows, ds.student_rows);
    EXPECT_TRUE(back.mismatches.empty());
    const auto again = serialize_carter(back);
    EXPECT_EQ(again.crs, text.crs);
    EXPECT_EQ(again.stu, text.stu);
  }
}

TEST(ParseCarter, FilesOnDisk) {
  const auto dir = std::filesystem::temp_directory_path() / "fuzzy_ettp_ingest";
  std::filesystem::create_directories(dir);
  const auto ds = to_carter(fuzzy_ettp::testing::tiny_instance(3, {.exams = 6, .students = 20}));
  write_carter(ds, dir / "toy-s-00");
  const auto back = load_carter(dir / "toy-s-00.crs");
  EXPECT_EQ(back.name, "toy-s-00");
  EXPECT_EQ(back.student_rows, ds.student_rows);
  EXPECT_THROW(load_carter(dir / "missing"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST(ParseCarter, StandardPeriods) {
  const auto& p = carter_standard_periods();
  EXPECT_EQ(p.size(), 13u);
  EXPECT_EQ(p.at("sta-f-83"), 13);
  EXPECT_EQ(p.at("yor-f-83"), 21);
  EXPECT_EQ(p.at("hec-s-92"), 18);
}

TEST(LoadConfig, CapacityTriplet) {
  const auto cfg = load_config(R"({"rooms": [{"capacity": [45, 50, 55]}]})");
  ASSERT_EQ(cfg.rooms.size(), 1u);
  EXPECT_EQ(cfg.rooms[0].exam_capacity, (Tfn{45, 50, 55}));
  EXPECT_EQ(cfg.rooms[0].kind, RoomKind::LectureTheatre);
  EXPECT_TRUE(cfg.rooms[0].has_generator);
}

TEST(LoadConfig, ReversedTripletRejected) {
  try {
    load_config(R"({"rooms": [{"capacity": [55, 50, 45]}]})");
    FAIL() << "expected InvariantError";
  } catch (const InvariantError& e) {
    EXPECT_EQ(e.path(), "/rooms/0/capacity");
  }
}

TEST(LoadConfig, WorkloadBounds) {
  const auto cfg = load_config(R"({"teachers": [{"workload": [4, 8, 12]}]})");
  EXPECT_EQ(cfg.teachers[0].workload, (Tfn{4, 8, 12}));
  EXPECT_THROW(load_config(R"({"teachers": [{"workload": [3, 8, 12]}]})"), InvariantError);
  EXPECT_THROW(load_config(R"({"teachers": [{"workload": [4, 8, 13]}]})"), InvariantError);
}

TEST(LoadConfig, SchemaErrorsCarryPaths) {
  auto path_of = [](const char* text) {
    try {
      load_config(text);
    } catch (const SchemaError& e) {
      return e.path();
    }
    return std::string("no error");
  };
  EXPECT_EQ(path_of(R"({"bogus": 1})"), "/bogus");
  EXPECT_EQ(path_of(R"({"rooms": [{"capacity": [1, 2]}]})"), "/rooms/0/capacity");
  EXPECT_EQ(path_of(R"({"rooms": [{"capacity": [1, 2, 3], "kind": "gym"}]})"), "/rooms/0/kind");
  EXPECT_EQ(path_of(R"({"soft_weights": {"nap_time": 1}})"), "/soft_weights/nap_time");
  EXPECT_EQ(path_of("{not json"), "/");
}

TEST(LoadConfig, GridEveningsAndTravel) {
  const auto cfg = load_config(R"({
    "grid": {"days": 3, "sessions_per_day": 2},
    "evening_slots": [5, 1],
    "rooms": [{"capacity": [1, 2, 3]}, {"capacity": [1, 2, 3], "availability": [1, 4], "generator": false}],
    "travel_times": [[[0, 0, 0], [1, 2, 3]], [[1, 2, 3], [0, 0, 0]]]
  })");
  const auto g = cfg.resolve_grid(SlotGrid{});
  EXPECT_EQ(g.num_slots(), 6);
  EXPECT_EQ(g.evening_slots, (std::vector<int>{1, 5}));
  EXPECT_EQ(cfg.rooms[1].availability.right, 4);
  EXPECT_FALSE(cfg.rooms[1].has_generator);
  EXPECT_EQ(cfg.travel_times[0][1], (Tfn{1, 2, 3}));
  EXPECT_THROW(load_config(R"({"evening_slots": [24]})"), InvariantError);
  EXPECT_THROW(load_config(R"({"travel_times": [[[0,0,0],[1,2,3]],[[1,2,4],[0,0,0]]]})"), InvariantError);
}

TEST(LoadConfig, DefaultEveningsAreMultiplesOfThree) {
  const auto g = load_config("{}").resolve_grid(SlotGrid{});
  EXPECT_EQ(g.evening_slots, SlotGrid::multiples_of_three(24));
}

TEST(LoadConfig, SerializationRoundTrip) {
  const auto cfg = default_config(GeneratorParams{});
  const auto text = config_to_json(cfg).dump();
  const auto back = load_config(text);
  ASSERT_EQ(back.rooms.size(), cfg.rooms.size());
  for (std::size_t r = 0; r < cfg.rooms.size(); ++r) {
    EXPECT_EQ(back.rooms[r].exam_capacity, cfg.rooms[r].exam_capacity);
    EXPECT_EQ(back.rooms[r].has_generator, cfg.rooms[r].has_generator);
    EXPECT_EQ(back.rooms[r].kind, cfg.rooms[r].kind);
  }
  EXPECT_EQ(back.travel_times, cfg.travel_times);
  // absent teacher course lists come back as empty ones; after that it is a fixed point
  const auto once = config_to_json(back);
  EXPECT_EQ(config_to_json(load_config(once.dump())), once);
}

TEST(Generator, DefaultCounts) {
  const auto inst = generate_instance(GeneratorParams{});
  EXPECT_EQ(inst.num_exams(), 200u);
  EXPECT_EQ(inst.num_rooms(), 19u);
  EXPECT_EQ(inst.num_slots(), 24);
  EXPECT_EQ(inst.teachers.size(), 50u);
  EXPECT_EQ(inst.num_semesters, 11);
  std::set<Index> courses;
  for (const auto& e : inst.exams) courses.insert(e.course_id);
  EXPECT_EQ(courses.size(), 90u);
  EXPECT_TRUE(validate(inst).empty());
}

TEST(Generator, DeterministicPerSeed) {
  GeneratorParams p;
  EXPECT_EQ(dump_instance(generate_instance(p)), dump_instance(generate_instance(p)));
  auto q = p;
  q.seed = 2;
  EXPECT_NE(instance_hash(generate_instance(p)), instance_hash(generate_instance(q)));
}

TEST(Generator, NoExams) {
  GeneratorParams p;
  p.num_exams = 0;
  const auto inst = generate_instance(p);
  EXPECT_EQ(inst.num_exams(), 0u);
  EXPECT_EQ(inst.num_students(), 0u);
  EXPECT_TRUE(validate(inst).empty());
}

TEST(Generator, StudentsTakeOneSemesterCohort) {
  const auto inst = generate_instance(GeneratorParams{});
  for (const auto& row : inst.registrations.students()) {
    std::set<int> sems;
    for (Index e : row) sems.insert(inst.exams[e].semester);
    EXPECT_EQ(sems.size(), 1u);
    const int sem = *sems.begin();
    for (const auto& e : inst.exams) {
      if (e.semester == sem && e.kind == ExamKind::Theory) {
        EXPECT_TRUE(std::binary_search(row.begin(), row.end(), e.id));
      }
    }
  }
}

TEST(Generator, PropertiesOverSeeds) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    GeneratorParams p;
    p.seed = seed;
    p.mean_exams_per_student = seed % 3 == 0 ? 12.0 : 0.0;
    const auto inst = generate_instance(p);
    std::vector<int> col(inst.num_exams(), 0);
    for (const auto& r : inst.registrations.students())
      for (Index e : r) ++col[e];
    EXPECT_EQ(col, inst.registrations.enrollments());
    EXPECT_TRUE(validate(inst).empty()) << seed;
  }
}

TEST(Generator, RejectsBadParams) {
  GeneratorParams p;
  p.num_events = 10;
  EXPECT_THROW(generate_instance(p), InfeasibleParams);
  GeneratorParams q;
  q.num_rooms = 1;
  EXPECT_THROW(generate_instance(q), InfeasibleParams);  // one theatre cannot seat 1100 students' exams
  GeneratorParams r;
  r.students = -1;
  EXPECT_THROW(generate_instance(r), InfeasibleParams);
}

TEST(InstanceJson, RoundTrip) {
  const auto inst = generate_instance(GeneratorParams{});
  const auto text = dump_instance(inst);
  const auto back = load_instance_json(text);
  EXPECT_EQ(dump_instance(back), text);
  EXPECT_THROW(load_instance_json("[1,2"), SchemaError);
}
