#pragma once

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzy_ettp/config.hpp"
#include "fuzzy_ettp/instance.hpp"

namespace fuzzy_ettp {

struct RoomAllocation {
  Index room = -1;
  int seats = 0;
  std::vector<Index> invigilators;

  bool operator==(const RoomAllocation&) const = default;
};

/// Exam -> slot, exam -> rooms with seat counts, and per (exam, room)
/// session the invigilating teachers.
struct Timetable {
  std::vector<int> slot_of;                         // -1: unscheduled
  std::vector<std::vector<RoomAllocation>> rooms_of;

  Timetable() = default;
  explicit Timetable(std::size_t num_exams) : slot_of(num_exams, -1), rooms_of(num_exams) {}

  [[nodiscard]] std::size_t num_exams() const { return slot_of.size(); }
  [[nodiscard]] bool covers_all() const {
    return std::all_of(slot_of.begin(), slot_of.end(), [](int k) { return k >= 0; });
  }
  [[nodiscard]] bool has_invigilators() const {
    for (const auto& rs : rooms_of)
      for (const auto& a : rs)
        if (!a.invigilators.empty()) return true;
    return false;
  }

  bool operator==(const Timetable&) const = default;
};

inline json timetable_to_json(const Timetable& tt, const Instance& inst) {
  json exams = json::array();
  for (std::size_t i = 0; i < tt.num_exams(); ++i) {
    const int k = tt.slot_of[i];
    json ej = {{"exam", i}, {"slot", k}};
    if (i < inst.exams.size() && !inst.exams[i].code.empty()) ej["code"] = inst.exams[i].code;
    if (k >= 0) {
      ej["day"] = inst.grid.day_of(k);
      ej["session"] = inst.grid.session_of(k);
    }
    json rooms = json::array();
    for (const auto& a : tt.rooms_of[i])
      rooms.push_back({{"room", a.room}, {"seats", a.seats}, {"invigilators", a.invigilators}});
    ej["rooms"] = std::move(rooms);
    exams.push_back(std::move(ej));
  }
  return json{{"instance", inst.name}, {"num_slots", inst.num_slots()}, {"exams", std::move(exams)}};
}

inline Timetable timetable_from_json(const json& j) {
  if (!j.contains("exams") || !j["exams"].is_array()) throw SchemaError("/exams", "expected an array");
  const auto& exams = j["exams"];
  Timetable tt(exams.size());
  for (std::size_t n = 0; n < exams.size(); ++n) {
    const std::string p = "/exams/" + std::to_string(n);
    const auto& ej = exams[n];
    const int i = detail::int_at(ej.at("exam"), p + "/exam");
    if (i < 0 || static_cast<std::size_t>(i) >= tt.num_exams()) throw InvariantError(p + "/exam", "exam id out of range");
    tt.slot_of[i] = detail::int_at(ej.at("slot"), p + "/slot");
    if (ej.contains("rooms")) {
      for (const auto& rj : ej["rooms"]) {
        RoomAllocation a;
        a.room = rj.at("room").get<int>();
        a.seats = rj.at("seats").get<int>();
        if (rj.contains("invigilators")) a.invigilators = rj["invigilators"].get<std::vector<Index>>();
        tt.rooms_of[i].push_back(std::move(a));
      }
    }
  }
  return tt;
}

/// Days x sessions text grid; each cell lists the exam labels in that slot.
inline std::string render_grid(const Timetable& tt, const Instance& inst) {
  const int slots = inst.num_slots();
  std::vector<std::vector<std::string>> cells(static_cast<std::size_t>(std::max(slots, 0)));
  for (std::size_t i = 0; i < tt.num_exams(); ++i) {
    const int k = tt.slot_of[i];
    if (k < 0 || k >= slots) continue;
    std::string label = (i < inst.exams.size() && !inst.exams[i].code.empty()) ? inst.exams[i].code : "E" + std::to_string(i);
    if (!tt.rooms_of[i].empty()) {
      label += '@';
      for (std::size_t a = 0; a < tt.rooms_of[i].size(); ++a) {
        if (a) label += '+';
        label += std::to_string(tt.rooms_of[i][a].room);
      }
    }
    cells[k].push_back(std::move(label));
  }
  std::ostringstream os;
  os << std::left << std::setw(6) << "day";
  for (int s = 0; s < inst.grid.sessions_per_day; ++s) os << "| session " << s << ' ';
  os << '\n';
  for (int d = 0; d < inst.grid.num_days; ++d) {
    os << std::left << std::setw(6) << d;
    for (int s = 0; s < inst.grid.sessions_per_day; ++s) {
      const int k = d * inst.grid.sessions_per_day + s;
      os << "| ";
      for (std::size_t c = 0; c < cells[k].size(); ++c) os << (c ? " " : "") << cells[k][c];
      os << (inst.grid.is_evening(k) ? " (E) " : " ");
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace fuzzy_ettp
