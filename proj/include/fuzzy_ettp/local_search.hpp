#pragma once

// Restarted hill climbing on proximity cost. Neighbourhoods: move one exam
// to another slot (with fresh rooms) and swap the slots of two exams. Only
// hard-feasible, strictly improving steps are taken; at a local optimum
// ceil(5%) of the exams are moved at random and the climb resumes. The best
// timetable seen is returned.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fuzzy_ettp/construct.hpp"
#include "fuzzy_ettp/evaluation.hpp"
#include "fuzzy_ettp/exact_solver.hpp"
#include "fuzzy_ettp/random.hpp"

namespace fuzzy_ettp {

struct LocalSearchStats {
  std::int64_t evaluations = 0;
  std::int64_t moves = 0;
  std::int64_t swaps = 0;
  int restarts = 0;
  double start_cost = 0.0;
  double final_cost = 0.0;
};

namespace detail {

class Climber {
 public:
  Climber(const Instance& inst, const Timetable& start, const SearchBudget& budget, const RankingFunction& ranking)
      : inst_(inst), budget_(budget), n_(inst.num_exams()), T_(inst.num_slots()), N_(clash_matrix(inst)),
        conflicts_(slot_conflicts(inst, N_)), rooms_(inst, ranking), rng_(budget.random_seed), tt_(start),
        g_(n_ * static_cast<std::size_t>(T_), 0), conf_(n_ * static_cast<std::size_t>(T_), 0) {
    for (std::size_t i = 0; i < n_; ++i) rooms_.commit(static_cast<Index>(i), tt_.slot_of[i], tt_.rooms_of[i]);
    for (std::size_t i = 0; i < n_; ++i) {
      for (const auto& nb : N_.neighbors(static_cast<Index>(i)))
        for (int s = 0; s < T_; ++s) g(i, s) += static_cast<long>(proximity_weight(s - tt_.slot_of[nb.exam])) * nb.common;
      for (Index j : conflicts_[i]) ++conf(i, tt_.slot_of[j]);
    }
    for (std::size_t i = 0; i < n_; ++i) cost_ += g(i, tt_.slot_of[i]);
    cost_ /= 2;
    best_ = tt_;
    best_cost_ = cost_;
  }

  Timetable run(LocalSearchStats& stats) {
    start_ = std::chrono::steady_clock::now();
    stats.start_cost = scaled(cost_);
    if (n_ == 0 || T_ <= 1) {
      stats.final_cost = stats.start_cost;
      return best_;
    }
    while (!exhausted()) {
      bool improved = move_pass(stats);
      if (exhausted()) break;
      if (!improved) improved = swap_pass(stats);
      if (cost_ < best_cost_) {
        best_cost_ = cost_;
        best_ = tt_;
      }
      if (!improved) {
        perturb();
        ++stats.restarts;
      }
    }
    if (cost_ < best_cost_) {
      best_cost_ = cost_;
      best_ = tt_;
    }
    stats.evaluations = evals_;
    stats.final_cost = scaled(best_cost_);
    return best_;
  }

 private:
  long& g(std::size_t i, int s) { return g_[i * T_ + s]; }
  int& conf(std::size_t i, int s) { return conf_[i * T_ + s]; }

  [[nodiscard]] double scaled(long c) const {
    return inst_.num_students() ? static_cast<double>(c) / static_cast<double>(inst_.num_students()) : 0.0;
  }

  bool exhausted() {
    if (evals_ >= budget_.max_nodes) return true;
    if ((++clock_checks_ & 255) == 0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() > budget_.max_seconds)
      timed_out_ = true;
    return timed_out_;
  }

  bool conflict_pair(Index a, Index b) const {
    return N_(a, b) > 0 || semester_conflict(inst_.exams[a], inst_.exams[b]);
  }

  // Shift exam i from its slot to s, maintaining g, conf and cost.
  void relocate(Index i, int s, std::vector<RoomAllocation> rooms) {
    const int old = tt_.slot_of[i];
    cost_ += g(i, s) - g(i, old);
    for (const auto& nb : N_.neighbors(i)) {
      const int lo = std::max(0, std::min(old, s) - 5), hi = std::min(T_ - 1, std::max(old, s) + 5);
      for (int q = lo; q <= hi; ++q)
        g(nb.exam, q) += static_cast<long>(proximity_weight(q - s) - proximity_weight(q - old)) * nb.common;
    }
    for (Index j : conflicts_[i]) {
      --conf(j, old);
      ++conf(j, s);
    }
    rooms_.release(i, old, tt_.rooms_of[i]);
    rooms_.commit(i, s, rooms);
    tt_.slot_of[i] = s;
    tt_.rooms_of[i] = std::move(rooms);
  }

  bool move_pass(LocalSearchStats& stats) {
    std::vector<Index> order(n_);
    for (std::size_t i = 0; i < n_; ++i) order[i] = static_cast<Index>(i);
    rng_.shuffle(order);
    bool improved = false;
    for (Index i : order) {
      if (exhausted()) break;
      ++evals_;
      const int cur = tt_.slot_of[i];
      const long here = g(i, cur);
      int best = -1;
      long best_delta = 0;
      std::vector<RoomAllocation> best_rooms;
      for (int s = 0; s < T_; ++s) {
        if (s == cur || conf(i, s) > 0) continue;
        const long delta = g(i, s) - here;
        if (delta >= best_delta) continue;
        auto plan = rooms_.plan(i, s);
        if (!plan) continue;
        best = s;
        best_delta = delta;
        best_rooms = std::move(*plan);
      }
      if (best >= 0) {
        relocate(i, best, std::move(best_rooms));
        ++stats.moves;
        improved = true;
      }
    }
    return improved;
  }

  bool swap_pass(LocalSearchStats& stats) {
    bool improved = false;
    std::vector<Index> order(n_);
    for (std::size_t i = 0; i < n_; ++i) order[i] = static_cast<Index>(i);
    rng_.shuffle(order);
    for (std::size_t ia = 0; ia < n_ && !exhausted(); ++ia) {
      const Index a = order[ia];
      for (std::size_t ib = ia + 1; ib < n_; ++ib) {
        const Index b = order[ib];
        ++evals_;
        const int ka = tt_.slot_of[a], kb = tt_.slot_of[b];
        if (ka == kb) continue;
        const int ab = conflict_pair(a, b) ? 1 : 0;
        if (conf(a, kb) - ab > 0 || conf(b, ka) - ab > 0) continue;
        const long corr = 2L * proximity_weight(ka - kb) * N_(a, b);
        const long delta = g(a, kb) - g(a, ka) + g(b, ka) - g(b, kb) + corr;
        if (delta >= 0) continue;
        if (!try_swap(a, b)) continue;
        ++stats.swaps;
        improved = true;
        if (evals_ >= budget_.max_nodes) break;
      }
    }
    return improved;
  }

  bool try_swap(Index a, Index b) {
    const int ka = tt_.slot_of[a], kb = tt_.slot_of[b];
    auto ra = tt_.rooms_of[a], rb = tt_.rooms_of[b];
    rooms_.release(a, ka, ra);
    rooms_.release(b, kb, rb);
    auto pa = rooms_.plan(a, kb);
    if (pa) rooms_.commit(a, kb, *pa);
    auto pb = pa ? rooms_.plan(b, ka) : std::nullopt;
    if (pa) rooms_.release(a, kb, *pa);
    rooms_.commit(a, ka, ra);
    rooms_.commit(b, kb, rb);
    if (!pa || !pb) return false;
    // Two relocations; the intermediate state may share a slot, which
    // relocate() tolerates since it only shifts counters.
    relocate(a, kb, std::move(*pa));
    relocate(b, ka, std::move(*pb));
    return true;
  }

  void perturb() {
    const std::size_t count = (n_ * 5 + 99) / 100;
    for (std::size_t c = 0; c < count; ++c) {
      const Index i = static_cast<Index>(rng_.below(n_));
      std::vector<int> feasible;
      for (int s = 0; s < T_; ++s)
        if (s != tt_.slot_of[i] && conf(i, s) == 0) feasible.push_back(s);
      while (!feasible.empty()) {
        const std::size_t pick = rng_.below(feasible.size());
        const int s = feasible[pick];
        if (auto plan = rooms_.plan(i, s)) {
          relocate(i, s, std::move(*plan));
          break;
        }
        feasible.erase(feasible.begin() + static_cast<std::ptrdiff_t>(pick));
      }
    }
  }

  const Instance& inst_;
  SearchBudget budget_;
  std::size_t n_;
  int T_;
  ClashMatrix N_;
  std::vector<std::vector<Index>> conflicts_;
  RoomState rooms_;
  Rng rng_;
  Timetable tt_;
  std::vector<long> g_;   // g[i][s]: weighted proximity of exam i if it sat in slot s
  std::vector<int> conf_;  // conf[i][s]: conflicting exams of i currently in slot s
  long cost_ = 0;          // proximity numerator of tt_
  Timetable best_;
  long best_cost_ = 0;
  std::int64_t evals_ = 0;
  std::uint64_t clock_checks_ = 0;
  bool timed_out_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// `start` must be hard-feasible; the result is never costlier.
inline Timetable improve_local_search(const Instance& inst, const Timetable& start, const SearchBudget& budget,
                                      LocalSearchStats* stats = nullptr, const RankingFunction& ranking = {}) {
  if (budget.max_nodes <= 0 || !(budget.max_seconds > 0)) throw BudgetZero();
  LocalSearchStats local;
  auto out = detail::Climber(inst, start, budget, ranking).run(stats ? *stats : local);
  return out;
}

}  // namespace fuzzy_ettp
