#pragma once

// Greedy invigilator matching: two teachers per (exam, room) session.
// Hard: the teacher is available, has one session per slot, and lab sessions
// get at least one qualified teacher. Soft (best effort, reported): ranked
// workload upper bound and a free slot between two sessions on one day.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "fuzzy_ettp/evaluation.hpp"
#include "fuzzy_ettp/instance.hpp"
#include "fuzzy_ettp/timetable.hpp"

namespace fuzzy_ettp {

class InsufficientInvigilators : public std::runtime_error {
 public:
  InsufficientInvigilators(int slot, const std::string& why)
      : std::runtime_error("slot " + std::to_string(slot) + ": " + why), slot_(slot) {}
  [[nodiscard]] int slot() const { return slot_; }

 private:
  int slot_;
};

struct LabSession {
  Index exam;
  int slot;
};

/// One distinct qualified, available teacher per lab session (augmenting
/// paths; candidates tried in `preference` order). Empty optional when no
/// such matching exists.
template <class Preference>
std::optional<std::vector<Index>> qualified_matching(const Instance& inst, const std::vector<LabSession>& sessions,
                                                     Preference&& preference) {
  const std::size_t nt = inst.teachers.size();
  std::vector<std::vector<Index>> cand(sessions.size());
  for (std::size_t s = 0; s < sessions.size(); ++s) {
    for (std::size_t t = 0; t < nt; ++t)
      if (teacher_available(inst.teachers[t], sessions[s].slot) &&
          inst.lecturers.qualified_for(static_cast<Index>(t), sessions[s].exam))
        cand[s].push_back(static_cast<Index>(t));
    std::stable_sort(cand[s].begin(), cand[s].end(), [&](Index a, Index b) { return preference(a) < preference(b); });
  }
  std::vector<long> owner(nt, -1);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t s) {
    for (Index t : cand[s]) {
      if (seen[t]) continue;
      seen[t] = 1;
      if (owner[t] < 0 || augment(static_cast<std::size_t>(owner[t]))) {
        owner[t] = static_cast<long>(s);
        return true;
      }
    }
    return false;
  };
  for (std::size_t s = 0; s < sessions.size(); ++s) {
    seen.assign(nt, 0);
    if (!augment(s)) return std::nullopt;
  }
  std::vector<Index> out(sessions.size(), -1);
  for (std::size_t t = 0; t < nt; ++t)
    if (owner[t] >= 0) out[owner[t]] = static_cast<Index>(t);
  return out;
}

inline std::optional<std::vector<Index>> qualified_matching(const Instance& inst,
                                                            const std::vector<LabSession>& sessions) {
  return qualified_matching(inst, sessions, [](Index t) { return t; });
}

struct InvigilationResult {
  Timetable timetable;
  std::vector<std::string> soft_shortfalls;
};

inline InvigilationResult assign_invigilators(const Instance& inst, const Timetable& tt,
                                              const RankingFunction& r = {}) {
  InvigilationResult out{tt, {}};
  auto& res = out.timetable;
  const std::size_t nt = inst.teachers.size();
  const int T = inst.num_slots();
  for (auto& rooms : res.rooms_of)
    for (auto& a : rooms) a.invigilators.clear();
  if (res.num_exams() == 0) return out;

  struct Session {
    int slot;
    int lab_first;  // 0 for labs so they pick first
    Index exam;
    std::size_t alloc;
  };
  std::vector<Session> sessions;
  for (std::size_t i = 0; i < res.num_exams(); ++i) {
    const int k = res.slot_of[i];
    if (k < 0 || k >= T) throw InsufficientInvigilators(k, "exam " + std::to_string(i) + " has no valid slot");
    for (std::size_t a = 0; a < res.rooms_of[i].size(); ++a)
      sessions.push_back({k, inst.exams[i].kind == ExamKind::Laboratory ? 0 : 1, static_cast<Index>(i), a});
  }
  std::sort(sessions.begin(), sessions.end(), [](const Session& x, const Session& y) {
    return std::tie(x.slot, x.lab_first, x.exam, x.alloc) < std::tie(y.slot, y.lab_first, y.exam, y.alloc);
  });

  std::vector<double> hours(nt, 0.0);
  std::vector<int> last_slot(nt, -2);
  std::vector<double> cap(nt);
  for (std::size_t t = 0; t < nt; ++t) cap[t] = rank(inst.teachers[t].workload, r);
  std::vector<int> busy_in(nt, -1);  // slot of the teacher's latest session

  // First seat of every lab session: a qualified teacher, matched per slot.
  std::map<std::pair<Index, std::size_t>, Index> lab_seat;
  for (std::size_t b = 0; b < sessions.size();) {
    std::size_t e = b;
    std::vector<LabSession> labs;
    std::vector<std::size_t> which;
    while (e < sessions.size() && sessions[e].slot == sessions[b].slot) {
      if (sessions[e].lab_first == 0) {
        labs.push_back({sessions[e].exam, sessions[e].slot});
        which.push_back(e);
      }
      ++e;
    }
    if (!labs.empty()) {
      auto match = qualified_matching(inst, labs);
      if (!match) throw InsufficientInvigilators(sessions[b].slot, "lab sessions cannot all get a qualified teacher");
      for (std::size_t q = 0; q < which.size(); ++q)
        lab_seat[{sessions[which[q]].exam, sessions[which[q]].alloc}] = (*match)[q];
    }
    b = e;
  }
  std::vector<char> reserved(nt, 0);
  int reserved_slot = -1;

  for (const auto& s : sessions) {
    const auto& exam = inst.exams[s.exam];
    if (s.slot != reserved_slot) {
      std::fill(reserved.begin(), reserved.end(), 0);
      for (const auto& [key, t] : lab_seat)
        if (res.slot_of[key.first] == s.slot) reserved[t] = 1;
      reserved_slot = s.slot;
    }
    auto& alloc = res.rooms_of[s.exam][s.alloc];
    auto free = [&](std::size_t t) { return busy_in[t] != s.slot && teacher_available(inst.teachers[t], s.slot); };
    auto adjacent = [&](std::size_t t) {
      return last_slot[t] == s.slot - 1 && inst.grid.day_of(last_slot[t]) == inst.grid.day_of(s.slot);
    };
    // Preference: within the workload cap, with a gap, fewest hours, lowest id.
    auto key = [&](std::size_t t) {
      return std::make_tuple(hours[t] + exam.duration_hours > cap[t] + 1e-9, adjacent(t), hours[t], t);
    };
    auto pick = [&](bool need_qualified) -> long {
      if (need_qualified) return lab_seat.at({s.exam, s.alloc});
      long best = -1;
      for (std::size_t t = 0; t < nt; ++t) {
        if (!free(t) || reserved[t]) continue;
        if (best < 0 || key(t) < key(static_cast<std::size_t>(best))) best = static_cast<long>(t);
      }
      return best;
    };
    for (int seat = 0; seat < kInvigilatorsPerSession; ++seat) {
      const bool need_q = exam.kind == ExamKind::Laboratory && seat == 0;
      const long t = pick(need_q);
      if (t < 0)
        throw InsufficientInvigilators(
            s.slot, need_q ? "no qualified teacher free for lab exam " + std::to_string(s.exam)
                           : "fewer than two free teachers for exam " + std::to_string(s.exam));
      const auto tu = static_cast<std::size_t>(t);
      if (hours[tu] + exam.duration_hours > cap[tu] + 1e-9)
        out.soft_shortfalls.push_back("teacher " + std::to_string(t) + " exceeds ranked workload in slot " +
                                      std::to_string(s.slot));
      if (adjacent(tu))
        out.soft_shortfalls.push_back("teacher " + std::to_string(t) + " has no gap before slot " +
                                      std::to_string(s.slot));
      hours[tu] += exam.duration_hours;
      busy_in[tu] = s.slot;
      last_slot[tu] = s.slot;
      alloc.invigilators.push_back(static_cast<Index>(t));
    }
  }
  return out;
}

}  // namespace fuzzy_ettp
