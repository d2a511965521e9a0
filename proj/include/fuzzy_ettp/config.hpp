#pragma once

// Institution configuration (rooms, teachers, grid, evening slots, soft
// weights, travel times) as a JSON document.
//
// Fuzzy numbers are JSON arrays: triangular [l, m, u]; trapezoid [l, r, spread]
// (spread may be omitted, meaning 0).
//
//   {
//     "grid": {"days": 12, "sessions_per_day": 2},
//     "evening_slots": [0, 3, 6],                      // default: multiples of 3
//     "rooms": [{"name": "LT1", "kind": "lecture_theatre", "capacity": [45, 50, 55],
//                "availability": [0, 23, 0], "generator": true}],
//     "teachers": [{"name": "T1", "availability": [0, 23], "workload": [4, 8, 12],
//                   "gap": [1, 1, 0], "courses": [0, 3], "qualified_labs": [7]}],
//     "soft_weights": {"room_wastage": 1.0},
//     "travel_times": [[[0, 0, 0]]]
//   }

#include <array>
#include <initializer_list>
#include <span>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzy_ettp/instance.hpp"
#include "json.hpp"

namespace fuzzy_ettp {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Wrong JSON type, missing or unknown key.
class SchemaError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Well-typed value that violates a domain invariant.
class InvariantError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct InstitutionConfig {
  std::optional<SlotGrid> grid;  // evening_slots filled in by resolve_grid()
  std::optional<std::vector<int>> evening_slots;
  std::vector<Room> rooms;
  std::vector<Teacher> teachers;
  LecturerAssignment lecturers;
  SoftWeights soft_weights;
  std::vector<std::vector<TriangularFuzzyNumber>> travel_times;

  /// Grid with the evening set applied (explicit or multiples of three).
  [[nodiscard]] SlotGrid resolve_grid(SlotGrid fallback) const {
    SlotGrid g = grid.value_or(fallback);
    g.evening_slots = evening_slots.value_or(SlotGrid::multiples_of_three(g.num_slots()));
    std::sort(g.evening_slots.begin(), g.evening_slots.end());
    return g;
  }
};

// ---------------------------------------------------------------------------
// Fuzzy <-> JSON

inline json to_json(const TriangularFuzzyNumber& f) { return json::array({f.lower, f.modal, f.upper}); }
inline json to_json(const TrapezoidalInterval& f) { return json::array({f.left, f.right, f.spread}); }

namespace detail {

inline void expect_keys(const json& j, const std::string& path, std::span<const std::string_view> allowed);
inline void expect_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  expect_keys(j, path, std::span<const std::string_view>(allowed.begin(), allowed.size()));
}

inline void expect_keys(const json& j, const std::string& path, std::span<const std::string_view> allowed) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == k;
    if (!ok) throw SchemaError(path + "/" + k, "unknown key");
  }
}

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

inline int int_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

inline std::vector<Index> index_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of integers");
  std::vector<Index> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(int_at(j[i], path + "/" + std::to_string(i)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

inline TriangularFuzzyNumber tfn_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw SchemaError(path, "expected a triplet [l, m, u]");
  TriangularFuzzyNumber f{detail::number_at(j[0], path + "/0"), detail::number_at(j[1], path + "/1"),
                          detail::number_at(j[2], path + "/2")};
  if (!f.valid()) throw InvariantError(path, "triplet must satisfy lower <= modal <= upper, got " + to_string(f));
  return f;
}

inline TrapezoidalInterval interval_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) throw SchemaError(path, "expected [left, right(, spread)]");
  TrapezoidalInterval f{detail::number_at(j[0], path + "/0"), detail::number_at(j[1], path + "/1"),
                        j.size() == 3 ? detail::number_at(j[2], path + "/2") : 0.0};
  if (!f.valid()) throw InvariantError(path, "doublet must satisfy left <= right and spread >= 0");
  return f;
}

// ---------------------------------------------------------------------------
// Config parsing

inline RoomKind room_kind_from_string(std::string_view s, const std::string& path) {
  if (s == "lecture_theatre") return RoomKind::LectureTheatre;
  if (s == "laboratory") return RoomKind::Laboratory;
  throw SchemaError(path, "room kind must be 'lecture_theatre' or 'laboratory'");
}

inline ExamKind exam_kind_from_string(std::string_view s, const std::string& path) {
  if (s == "theory") return ExamKind::Theory;
  if (s == "laboratory") return ExamKind::Laboratory;
  throw SchemaError(path, "exam kind must be 'theory' or 'laboratory'");
}

inline constexpr std::array<std::string_view, 6> kConfigKeys = {
    "rooms", "teachers", "grid", "evening_slots", "soft_weights", "travel_times"};

/// Parses the config keys of `j`; other keys are left for the caller.
inline InstitutionConfig parse_config_keys(const json& j, double workload_min = 4.0, double workload_max = 12.0) {
  using detail::expect_keys;
  InstitutionConfig cfg;

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    expect_keys(g, "/grid", {"days", "sessions_per_day"});
    SlotGrid grid;
    if (g.contains("days")) grid.num_days = detail::int_at(g["days"], "/grid/days");
    if (g.contains("sessions_per_day"))
      grid.sessions_per_day = detail::int_at(g["sessions_per_day"], "/grid/sessions_per_day");
    if (grid.num_days < 0) throw InvariantError("/grid/days", "must be >= 0");
    if (grid.sessions_per_day < 1) throw InvariantError("/grid/sessions_per_day", "must be >= 1");
    cfg.grid = grid;
  }
  const int slots = cfg.grid ? cfg.grid->num_slots() : SlotGrid{}.num_slots();

  if (j.contains("evening_slots")) {
    auto e = detail::index_list(j["evening_slots"], "/evening_slots");
    for (int k : e)
      if (k < 0 || k >= slots) throw InvariantError("/evening_slots", "slot " + std::to_string(k) + " outside grid");
    cfg.evening_slots = std::move(e);
  }

  if (j.contains("rooms")) {
    const auto& rooms = j["rooms"];
    if (!rooms.is_array()) throw SchemaError("/rooms", "expected an array");
    for (std::size_t i = 0; i < rooms.size(); ++i) {
      const std::string p = "/rooms/" + std::to_string(i);
      const auto& r = rooms[i];
      expect_keys(r, p, {"name", "kind", "capacity", "availability", "generator"});
      Room room;
      room.id = static_cast<Index>(i);
      if (r.contains("name")) room.name = r["name"].get<std::string>();
      if (r.contains("kind")) {
        if (!r["kind"].is_string()) throw SchemaError(p + "/kind", "expected a string");
        room.kind = room_kind_from_string(r["kind"].get<std::string>(), p + "/kind");
      }
      if (!r.contains("capacity")) throw SchemaError(p + "/capacity", "missing");
      room.exam_capacity = tfn_from_json(r["capacity"], p + "/capacity");
      if (room.exam_capacity.lower < 0) throw InvariantError(p + "/capacity", "capacity must be non-negative");
      room.availability = r.contains("availability") ? interval_from_json(r["availability"], p + "/availability")
                                                     : TrapezoidalInterval{0, static_cast<double>(slots - 1), 0};
      if (room.availability.left < 0 || room.availability.right > slots - 1)
        throw InvariantError(p + "/availability", "must lie inside [0, num_slots - 1]");
      if (r.contains("generator")) {
        if (!r["generator"].is_boolean()) throw SchemaError(p + "/generator", "expected a boolean");
        room.has_generator = r["generator"].get<bool>();
      }
      cfg.rooms.push_back(std::move(room));
    }
  }

  if (j.contains("teachers")) {
    const auto& ts = j["teachers"];
    if (!ts.is_array()) throw SchemaError("/teachers", "expected an array");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string p = "/teachers/" + std::to_string(i);
      const auto& t = ts[i];
      expect_keys(t, p, {"name", "availability", "workload", "gap", "courses", "qualified_labs"});
      Teacher teacher;
      teacher.id = static_cast<Index>(i);
      if (t.contains("name")) teacher.name = t["name"].get<std::string>();
      teacher.availability = t.contains("availability") ? interval_from_json(t["availability"], p + "/availability")
                                                        : TrapezoidalInterval{0, static_cast<double>(slots - 1), 0};
      if (t.contains("workload")) teacher.workload = tfn_from_json(t["workload"], p + "/workload");
      if (teacher.workload.lower < workload_min || teacher.workload.upper > workload_max)
        throw InvariantError(p + "/workload", "workload must lie within [" + std::to_string(workload_min) + ", " +
                                                  std::to_string(workload_max) + "] hours");
      if (t.contains("gap")) teacher.gap_preference = interval_from_json(t["gap"], p + "/gap");
      cfg.lecturers.courses_of.push_back(t.contains("courses") ? detail::index_list(t["courses"], p + "/courses")
                                                               : std::vector<Index>{});
      cfg.lecturers.qualified_labs.push_back(
          t.contains("qualified_labs") ? detail::index_list(t["qualified_labs"], p + "/qualified_labs")
                                       : std::vector<Index>{});
      cfg.teachers.push_back(std::move(teacher));
    }
  }

  if (j.contains("soft_weights")) {
    const auto& w = j["soft_weights"];
    if (!w.is_object()) throw SchemaError("/soft_weights", "expected an object");
    for (const auto& [k, v] : w.items()) {
      if (!parse_soft_constraint(k)) throw SchemaError("/soft_weights/" + k, "unknown soft constraint");
      double x = detail::number_at(v, "/soft_weights/" + k);
      if (x < 0) throw InvariantError("/soft_weights/" + k, "weight must be non-negative");
      cfg.soft_weights[k] = x;
    }
  }

  if (j.contains("travel_times")) {
    const auto& tt = j["travel_times"];
    if (!tt.is_array()) throw SchemaError("/travel_times", "expected a matrix of triplets");
    for (std::size_t a = 0; a < tt.size(); ++a) {
      if (!tt[a].is_array()) throw SchemaError("/travel_times/" + std::to_string(a), "expected an array");
      std::vector<TriangularFuzzyNumber> row;
      for (std::size_t b = 0; b < tt[a].size(); ++b)
        row.push_back(tfn_from_json(tt[a][b], "/travel_times/" + std::to_string(a) + "/" + std::to_string(b)));
      cfg.travel_times.push_back(std::move(row));
    }
    const std::size_t m = cfg.travel_times.size();
    for (std::size_t a = 0; a < m; ++a) {
      if (cfg.travel_times[a].size() != m) throw InvariantError("/travel_times", "matrix must be square");
      for (std::size_t b = 0; b < a; ++b)
        if (cfg.travel_times[a][b] != cfg.travel_times[b][a])
          throw InvariantError("/travel_times", "matrix must be symmetric");
    }
    if (!cfg.rooms.empty() && m != 0 && m != cfg.rooms.size())
      throw InvariantError("/travel_times", "matrix dimension must equal the number of rooms");
  }
  return cfg;
}

inline InstitutionConfig load_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  detail::expect_keys(j, "", kConfigKeys);
  try {
    return parse_config_keys(j);
  } catch (const json::type_error& e) {
    throw SchemaError("/", std::string("wrong JSON type: ") + e.what());
  }
}

inline json config_to_json(const InstitutionConfig& cfg) {
  json j = json::object();
  if (cfg.grid) j["grid"] = {{"days", cfg.grid->num_days}, {"sessions_per_day", cfg.grid->sessions_per_day}};
  if (cfg.evening_slots) j["evening_slots"] = *cfg.evening_slots;
  json rooms = json::array();
  for (const auto& r : cfg.rooms)
    rooms.push_back({{"name", r.name},
                     {"kind", std::string(to_string(r.kind))},
                     {"capacity", to_json(r.exam_capacity)},
                     {"availability", to_json(r.availability)},
                     {"generator", r.has_generator}});
  j["rooms"] = rooms;
  json teachers = json::array();
  for (std::size_t i = 0; i < cfg.teachers.size(); ++i) {
    const auto& t = cfg.teachers[i];
    json tj = {{"name", t.name},
               {"availability", to_json(t.availability)},
               {"workload", to_json(t.workload)},
               {"gap", to_json(t.gap_preference)}};
    if (i < cfg.lecturers.courses_of.size()) tj["courses"] = cfg.lecturers.courses_of[i];
    if (i < cfg.lecturers.qualified_labs.size()) tj["qualified_labs"] = cfg.lecturers.qualified_labs[i];
    teachers.push_back(std::move(tj));
  }
  j["teachers"] = teachers;
  j["soft_weights"] = cfg.soft_weights;
  json tt = json::array();
  for (const auto& row : cfg.travel_times) {
    json jr = json::array();
    for (const auto& f : row) jr.push_back(to_json(f));
    tt.push_back(std::move(jr));
  }
  j["travel_times"] = tt;
  return j;
}

/// Copies rooms, teachers, weights and travel data into an instance and
/// resolves its grid (keeping the instance's grid unless the config sets one).
inline void apply_config(Instance& inst, const InstitutionConfig& cfg) {
  inst.grid = cfg.resolve_grid(inst.grid);
  inst.rooms = cfg.rooms;
  inst.teachers = cfg.teachers;
  inst.lecturers = cfg.lecturers;
  inst.soft_weights = cfg.soft_weights;
  inst.travel_times = cfg.travel_times;
}

}  // namespace fuzzy_ettp
