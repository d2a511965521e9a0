#pragma once

// Instance documents: the institution config keys plus
//   "name", "num_semesters", "workload_bounds": [min, max],
//   "exams": [{"course": c, "kind": "theory", "duration": 2.5, "semester": s, "code": "..."}],
//   "students": [[exam ids], ...]

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "fuzzy_ettp/carter.hpp"
#include "fuzzy_ettp/config.hpp"
#include "fuzzy_ettp/instance.hpp"

namespace fuzzy_ettp {

inline json instance_to_json(const Instance& inst) {
  InstitutionConfig cfg;
  cfg.grid = SlotGrid{inst.grid.num_days, inst.grid.sessions_per_day, {}};
  cfg.evening_slots = inst.grid.evening_slots;
  cfg.rooms = inst.rooms;
  cfg.teachers = inst.teachers;
  cfg.lecturers = inst.lecturers;
  cfg.soft_weights = inst.soft_weights;
  cfg.travel_times = inst.travel_times;

  json j = config_to_json(cfg);
  j["name"] = inst.name;
  j["num_semesters"] = inst.num_semesters;
  j["workload_bounds"] = {inst.workload_min_hours, inst.workload_max_hours};
  json exams = json::array();
  for (const auto& e : inst.exams) {
    json ej = {{"course", e.course_id},
               {"kind", std::string(to_string(e.kind))},
               {"duration", e.duration_hours},
               {"semester", e.semester}};
    if (!e.code.empty()) ej["code"] = e.code;
    exams.push_back(std::move(ej));
  }
  j["exams"] = std::move(exams);
  j["students"] = inst.registrations.students();
  return j;
}

inline Instance instance_from_json(const json& j) {
  detail::expect_keys(j, "", {"rooms", "teachers", "grid", "evening_slots", "soft_weights", "travel_times", "name",
                              "num_semesters", "workload_bounds", "exams", "students"});
  Instance inst;
  if (j.contains("workload_bounds")) {
    const auto& b = j["workload_bounds"];
    if (!b.is_array() || b.size() != 2) throw SchemaError("/workload_bounds", "expected [min, max]");
    inst.workload_min_hours = detail::number_at(b[0], "/workload_bounds/0");
    inst.workload_max_hours = detail::number_at(b[1], "/workload_bounds/1");
  }
  auto cfg = parse_config_keys(j, inst.workload_min_hours, inst.workload_max_hours);
  apply_config(inst, cfg);
  if (j.contains("name")) inst.name = j["name"].get<std::string>();
  if (j.contains("num_semesters")) inst.num_semesters = detail::int_at(j["num_semesters"], "/num_semesters");

  if (!j.contains("exams") || !j["exams"].is_array()) throw SchemaError("/exams", "expected an array");
  const auto& exams = j["exams"];
  for (std::size_t i = 0; i < exams.size(); ++i) {
    const std::string p = "/exams/" + std::to_string(i);
    detail::expect_keys(exams[i], p, {"course", "kind", "duration", "semester", "code"});
    Exam e;
    e.id = static_cast<Index>(i);
    e.course_id = exams[i].contains("course") ? detail::int_at(exams[i]["course"], p + "/course") : e.id;
    if (exams[i].contains("kind")) e.kind = exam_kind_from_string(exams[i]["kind"].get<std::string>(), p + "/kind");
    if (exams[i].contains("duration")) e.duration_hours = detail::number_at(exams[i]["duration"], p + "/duration");
    if (exams[i].contains("semester")) e.semester = detail::int_at(exams[i]["semester"], p + "/semester");
    if (exams[i].contains("code")) e.code = exams[i]["code"].get<std::string>();
    inst.exams.push_back(std::move(e));
  }

  std::vector<std::vector<Index>> students;
  if (j.contains("students")) {
    const auto& s = j["students"];
    if (!s.is_array()) throw SchemaError("/students", "expected an array of exam-id arrays");
    for (std::size_t i = 0; i < s.size(); ++i) students.push_back(detail::index_list(s[i], "/students/" + std::to_string(i)));
  }
  inst.registrations = RegistrationMatrix(inst.exams.size(), std::move(students));
  return inst;
}

inline Instance load_instance_json(std::string_view text) {
  try {
    return instance_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  } catch (const json::type_error& e) {
    throw SchemaError("/", std::string("wrong JSON type: ") + e.what());
  }
}

inline std::string dump_instance(const Instance& inst) { return instance_to_json(inst).dump(1) + "\n"; }

/// 64-bit FNV-1a, used for manifest and determinism hashes.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xF];
  return s;
}

inline std::uint64_t instance_hash(const Instance& inst) { return fnv1a(dump_instance(inst)); }

}  // namespace fuzzy_ettp
