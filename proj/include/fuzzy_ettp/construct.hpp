#pragma once

// Greedy construction: exams are placed one at a time, each into the
// feasible slot (and room set) with the lowest added proximity cost.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzy_ettp/evaluation.hpp"
#include "fuzzy_ettp/invigilation.hpp"
#include "fuzzy_ettp/instance.hpp"
#include "fuzzy_ettp/random.hpp"
#include "fuzzy_ettp/timetable.hpp"

namespace fuzzy_ettp {

enum class Ordering { LargestEnrollment, LargestConflictDegree, SaturationDegree };

inline std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::LargestEnrollment: return "largest_enrollment";
    case Ordering::LargestConflictDegree: return "largest_conflict_degree";
    case Ordering::SaturationDegree: return "saturation_degree";
  }
  return "?";
}

inline Ordering parse_ordering(std::string_view s) {
  if (s == "largest_enrollment" || s == "le") return Ordering::LargestEnrollment;
  if (s == "largest_conflict_degree" || s == "lcd") return Ordering::LargestConflictDegree;
  if (s == "saturation_degree" || s == "sd") return Ordering::SaturationDegree;
  throw std::invalid_argument("unknown ordering '" + std::string(s) + "'");
}

class Unplaceable : public std::runtime_error {
 public:
  explicit Unplaceable(Index exam)
      : std::runtime_error("exam " + std::to_string(exam) + " fits no slot; more slots or rooms are needed"),
        exam_(exam) {}
  [[nodiscard]] Index exam() const { return exam_; }

 private:
  Index exam_;
};

/// Remaining seats and exam count per (slot, room).
class RoomState {
 public:
  RoomState(const Instance& inst, const RankingFunction& r = {})
      : inst_(&inst), m_(inst.num_rooms()),
        residual_(static_cast<std::size_t>(std::max(inst.num_slots(), 0)) * inst.num_rooms()),
        count_(residual_.size(), 0), sessions_left_(static_cast<std::size_t>(std::max(inst.num_slots(), 0)), kUnlimited),
        labs_(sessions_left_.size()) {
    for (int k = 0; k < inst.num_slots(); ++k)
      for (std::size_t rm = 0; rm < m_; ++rm) residual_[k * m_ + rm] = seat_capacity(inst.rooms[rm], r);
    // Each session needs two free teachers.
    if (inst.models_teachers())
      for (int k = 0; k < inst.num_slots(); ++k) {
        int free = 0;
        for (const auto& t : inst.teachers) free += teacher_available(t, k);
        sessions_left_[k] = free / kInvigilatorsPerSession;
      }
  }

  /// Largest-residual-first split over rooms usable by `exam` in `slot`.
  [[nodiscard]] std::optional<std::vector<RoomAllocation>> plan(Index exam, int slot) const {
    if (m_ == 0) return std::vector<RoomAllocation>{};
    const auto& e = inst_->exams[exam];
    std::vector<std::size_t> usable;
    for (std::size_t rm = 0; rm < m_; ++rm) {
      const auto& room = inst_->rooms[rm];
      if (room_kind_matches(e, room) && room_allows_slot(*inst_, room, slot) && count_[slot * m_ + rm] < kMaxExamsPerRoom &&
          residual_[slot * m_ + rm] > 0)
        usable.push_back(rm);
    }
    std::stable_sort(usable.begin(), usable.end(),
                     [&](std::size_t a, std::size_t b) { return residual_[slot * m_ + a] > residual_[slot * m_ + b]; });
    int need = inst_->enrollment(exam);
    std::vector<RoomAllocation> out;
    for (std::size_t rm : usable) {
      if (need <= 0) break;
      const int take = std::min(need, residual_[slot * m_ + rm]);
      out.push_back({static_cast<Index>(rm), take, {}});
      need -= take;
    }
    if (need > 0) return std::nullopt;
    if (out.empty() && !usable.empty()) out.push_back({static_cast<Index>(usable.front()), 0, {}});
    if (out.empty() || static_cast<int>(out.size()) > sessions_left_[slot]) return std::nullopt;
    if (e.kind == ExamKind::Laboratory && inst_->models_teachers()) {
      std::vector<LabSession> labs;
      for (const auto& [other, count] : labs_[slot])
        for (int c = 0; c < count; ++c) labs.push_back({other, slot});
      for (std::size_t c = 0; c < out.size(); ++c) labs.push_back({exam, slot});
      if (!qualified_matching(*inst_, labs)) return std::nullopt;
    }
    return out;
  }

  void commit(Index exam, int slot, const std::vector<RoomAllocation>& rooms) { apply(exam, slot, rooms, -1); }
  void release(Index exam, int slot, const std::vector<RoomAllocation>& rooms) { apply(exam, slot, rooms, +1); }

 private:
  void apply(Index exam, int slot, const std::vector<RoomAllocation>& rooms, int sign) {
    if (m_ && inst_->exams[exam].kind == ExamKind::Laboratory && inst_->models_teachers()) {
      auto& labs = labs_[slot];
      if (sign < 0) {
        labs.emplace_back(exam, static_cast<int>(rooms.size()));
      } else {
        auto it = std::find_if(labs.begin(), labs.end(), [&](const auto& p) { return p.first == exam; });
        if (it != labs.end()) labs.erase(it);
      }
    }
    for (const auto& a : rooms) {
      residual_[slot * m_ + a.room] += sign * a.seats;
      count_[slot * m_ + a.room] -= sign;
    }
    if (sessions_left_[slot] != kUnlimited) sessions_left_[slot] += sign * static_cast<int>(rooms.size());
  }

  static constexpr int kUnlimited = std::numeric_limits<int>::max();

  const Instance* inst_;
  std::size_t m_;
  std::vector<int> residual_;
  std::vector<int> count_;
  std::vector<int> sessions_left_;  // per slot, when teachers are modelled
  std::vector<std::vector<std::pair<Index, int>>> labs_;  // per slot: lab exam, sessions
};

enum class SlotChoice { MinCost, FirstFit };

struct ConstructOptions {
  SlotChoice slot_choice = SlotChoice::MinCost;
  std::optional<std::uint64_t> shuffle_seed;  // random tie-breaking among equal keys
  RankingFunction ranking;
};

inline Timetable construct_greedy(const Instance& inst, Ordering ordering, const ConstructOptions& opt = {}) {
  const std::size_t n = inst.num_exams();
  const int T = inst.num_slots();
  const auto N = clash_matrix(inst);
  const auto conflicts = slot_conflicts(inst, N);

  std::vector<std::uint64_t> noise(n, 0);
  if (opt.shuffle_seed) {
    Rng rng(*opt.shuffle_seed);
    for (auto& v : noise) v = rng.next();
  }

  // Static keys: larger first, then noise, then lower id.
  std::vector<long> key(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    key[i] = ordering == Ordering::LargestEnrollment ? inst.enrollment(static_cast<Index>(i))
                                                     : static_cast<long>(conflicts[i].size());

  Timetable tt(n);
  RoomState rooms(inst, opt.ranking);
  // forbidden[i][k]: placed conflicting exams of i in slot k.
  std::vector<std::vector<int>> forbidden(n, std::vector<int>(static_cast<std::size_t>(std::max(T, 0)), 0));
  std::vector<int> saturation(n, 0);

  std::vector<Index> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<Index>(i);
  auto better = [&](Index a, Index b) {
    if (ordering == Ordering::SaturationDegree && saturation[a] != saturation[b]) return saturation[a] > saturation[b];
    if (key[a] != key[b]) return key[a] > key[b];
    if (noise[a] != noise[b]) return noise[a] < noise[b];
    return a < b;
  };
  if (ordering != Ordering::SaturationDegree) std::sort(order.begin(), order.end(), better);

  std::vector<char> done(n, 0);
  for (std::size_t step = 0; step < n; ++step) {
    Index exam = -1;
    if (ordering == Ordering::SaturationDegree) {
      for (std::size_t i = 0; i < n; ++i)
        if (!done[i] && (exam < 0 || better(static_cast<Index>(i), exam))) exam = static_cast<Index>(i);
    } else {
      exam = order[step];
    }

    int best_slot = -1;
    long best_cost = std::numeric_limits<long>::max();
    std::vector<RoomAllocation> best_rooms;
    for (int k = 0; k < T; ++k) {
      if (forbidden[exam][k]) continue;
      auto plan = rooms.plan(exam, k);
      if (!plan) continue;
      long cost = 0;
      for (const auto& nb : N.neighbors(exam))
        if (done[nb.exam]) cost += static_cast<long>(proximity_weight(k - tt.slot_of[nb.exam])) * nb.common;
      if (cost < best_cost) {
        best_cost = cost;
        best_slot = k;
        best_rooms = std::move(*plan);
        if (opt.slot_choice == SlotChoice::FirstFit) break;
      }
    }
    if (best_slot < 0) throw Unplaceable(exam);

    tt.slot_of[exam] = best_slot;
    tt.rooms_of[exam] = best_rooms;
    rooms.commit(exam, best_slot, best_rooms);
    done[exam] = 1;
    for (Index j : conflicts[exam])
      if (forbidden[j][best_slot]++ == 0) ++saturation[j];
  }
  return tt;
}

struct ConstructReport {
  Timetable timetable;
  int attempts = 0;
  std::string method;
};

/// Tries the requested ordering first, then first-fit and shuffled variants,
/// then an ejection repair. Throws Unplaceable when nothing succeeds.
inline ConstructReport construct_feasible(const Instance& inst, Ordering ordering, std::uint64_t seed,
                                          int max_attempts = 50, const RankingFunction& ranking = {}) {
  ConstructReport rep;
  std::optional<Unplaceable> last;
  auto attempt = [&](Ordering o, SlotChoice c, std::optional<std::uint64_t> s) -> bool {
    ++rep.attempts;
    try {
      rep.timetable = construct_greedy(inst, o, {c, s, ranking});
      rep.method = std::string(to_string(o)) + (c == SlotChoice::FirstFit ? "/first_fit" : "/min_cost") +
                   (s ? "/shuffled" : "");
      return true;
    } catch (const Unplaceable& e) {
      last = e;
      return false;
    }
  };
  if (attempt(ordering, SlotChoice::MinCost, std::nullopt)) return rep;
  if (attempt(ordering, SlotChoice::FirstFit, std::nullopt)) return rep;
  if (attempt(Ordering::SaturationDegree, SlotChoice::FirstFit, std::nullopt)) return rep;
  Rng rng(seed);
  for (int a = 0; a < max_attempts; ++a) {
    const auto choice = (a % 2) ? SlotChoice::FirstFit : SlotChoice::MinCost;
    if (attempt(Ordering::SaturationDegree, choice, rng.next())) return rep;
  }

  // Ejection repair: place the stuck exam in the slot with the fewest
  // conflicting exams, push those back onto the queue.
  const std::size_t n = inst.num_exams();
  const int T = inst.num_slots();
  if (T <= 0) throw Unplaceable(last ? last->exam() : 0);
  const auto N = clash_matrix(inst);
  const auto conflicts = slot_conflicts(inst, N);
  Timetable tt(n);
  RoomState rooms(inst, ranking);
  std::vector<Index> queue(n);
  for (std::size_t i = 0; i < n; ++i) queue[i] = static_cast<Index>(i);
  std::sort(queue.begin(), queue.end(), [&](Index a, Index b) {
    return conflicts[a].size() != conflicts[b].size() ? conflicts[a].size() < conflicts[b].size() : a > b;
  });  // back of the vector = hardest exam
  std::vector<int> tabu_until(n * static_cast<std::size_t>(T), -1);
  const long limit = 200L * static_cast<long>(n) + 1000;
  for (long it = 0; !queue.empty(); ++it) {
    if (it > limit) throw Unplaceable(queue.back());
    const Index exam = queue.back();
    queue.pop_back();
    int best = -1;
    std::size_t best_ejected = std::numeric_limits<std::size_t>::max();
    std::uint64_t best_tie = 0;
    for (int k = 0; k < T; ++k) {
      if (tabu_until[exam * T + k] > it) continue;
      std::size_t ejected = 0;
      for (Index j : conflicts[exam]) ejected += tt.slot_of[j] == k;
      const std::uint64_t tie = rng.next();
      if (ejected < best_ejected || (ejected == best_ejected && tie < best_tie)) {
        best = k;
        best_ejected = ejected;
        best_tie = tie;
      }
    }
    if (best < 0) best = static_cast<int>(rng.below(static_cast<std::uint64_t>(T)));
    for (Index j : conflicts[exam])
      if (tt.slot_of[j] == best) {
        rooms.release(j, best, tt.rooms_of[j]);
        tt.slot_of[j] = -1;
        tt.rooms_of[j].clear();
        tabu_until[j * T + best] = static_cast<int>(it + 10);
        queue.push_back(j);
      }
    auto plan = rooms.plan(exam, best);
    if (!plan) {
      // Room shortage in that slot: retry this exam elsewhere later.
      tabu_until[exam * T + best] = static_cast<int>(it + 10);
      queue.insert(queue.begin(), exam);
      continue;
    }
    tt.slot_of[exam] = best;
    tt.rooms_of[exam] = *plan;
    rooms.commit(exam, best, *plan);
  }
  rep.timetable = std::move(tt);
  rep.method = "ejection_repair";
  return rep;
}

}  // namespace fuzzy_ettp
