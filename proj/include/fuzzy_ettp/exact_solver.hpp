#pragma once

// Depth-first branch-and-bound for small crisp models.
//
// Branching follows the one-hot rows (sum of binaries = 1), picking the row
// with the fewest remaining candidates. Each node runs bound propagation on
// every row, then fixes free variables whose cheaper direction no open row
// objects to. The bound is the fixed part of the objective plus, per open
// one-hot row, its cheapest candidate, plus min(c*lo, c*hi) elsewhere.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "fuzzy_ettp/model.hpp"

namespace fuzzy_ettp {

class BudgetZero : public std::invalid_argument {
 public:
  BudgetZero() : std::invalid_argument("search budget must allow at least one node and a positive time") {}
};

struct SearchBudget {
  std::int64_t max_nodes = 1'000'000;
  double max_seconds = 300.0;
  std::uint64_t random_seed = 1;
};

enum class SolveStatus { ProvedOptimal, FeasibleBudgetExhausted, Infeasible, BudgetExhausted };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::ProvedOptimal: return "proved_optimal";
    case SolveStatus::FeasibleBudgetExhausted: return "feasible_budget_exhausted";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::BudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

struct IncumbentEvent {
  std::int64_t node;
  double objective;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<int> values;  // empty without an incumbent
  double objective = std::numeric_limits<double>::infinity();
  double bound = -std::numeric_limits<double>::infinity();  // root lower bound
  std::int64_t nodes = 0;
  double seconds = 0.0;
  std::vector<IncumbentEvent> trace;  // every incumbent improvement

  [[nodiscard]] bool has_solution() const { return !values.empty(); }
};

/// Passed to the node observer after propagation, before pruning.
struct NodeView {
  std::span<const int> lower;
  std::span<const int> upper;
  double bound;
  int depth;
};

struct SolveOptions {
  std::function<void(const NodeView&)> on_node;
  std::optional<std::vector<int>> warm_start;  // used as first incumbent if feasible
  double prune_eps = 1e-9;
};

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const CrispModel& m, const SearchBudget& budget, const SolveOptions& opt)
      : m_(m), budget_(budget), opt_(opt), cost_(m.variables.size(), 0.0), cols_(m.variables.size()),
        owner_(m.variables.size(), -1) {
    for (const auto& t : m.objective) cost_[t.var] += t.coef;
    for (std::size_t r = 0; r < m.constraints.size(); ++r)
      for (const auto& t : m.constraints[r].terms)
        if (t.coef != 0) cols_[t.var].push_back({static_cast<int>(r), t.coef});
    detect_groups();
  }

  SolveResult run() {
    start_ = std::chrono::steady_clock::now();
    std::vector<int> lo(m_.variables.size()), hi(m_.variables.size());
    for (const auto& v : m_.variables) {
      lo[v.id] = v.lower;
      hi[v.id] = v.upper;
    }
    if (opt_.warm_start && is_feasible(m_, *opt_.warm_start)) accept(*opt_.warm_start);

    bool root_ok = reduce(lo, hi);
    if (root_ok) {
      result_.bound = bound(lo, hi);
      search(lo, hi, result_.bound, 0);
    }
    result_.seconds = elapsed();
    if (aborted_)
      result_.status = result_.has_solution() ? SolveStatus::FeasibleBudgetExhausted : SolveStatus::BudgetExhausted;
    else
      result_.status = result_.has_solution() ? SolveStatus::ProvedOptimal : SolveStatus::Infeasible;
    if (result_.status == SolveStatus::ProvedOptimal) result_.bound = result_.objective;
    return std::move(result_);
  }

 private:
  struct Entry {
    int row;
    double coef;
  };
  static constexpr double kTol = 1e-7;

  void detect_groups() {
    for (std::size_t r = 0; r < m_.constraints.size(); ++r) {
      const auto& c = m_.constraints[r];
      if (c.relation != Relation::EQ || std::abs(c.rhs - 1.0) > 1e-12 || c.terms.size() < 1) continue;
      bool ok = true;
      for (const auto& t : c.terms) {
        const auto& v = m_.variables[t.var];
        ok = ok && t.coef == 1.0 && v.lower >= 0 && v.upper <= 1;
      }
      if (!ok) continue;
      std::vector<Index> vars;
      for (const auto& t : c.terms) vars.push_back(t.var);
      const bool disjoint = std::all_of(vars.begin(), vars.end(), [&](Index v) { return owner_[v] < 0; });
      const int g = static_cast<int>(groups_.size());
      groups_.push_back({std::move(vars), disjoint});
      if (disjoint)
        for (Index v : groups_.back().vars) owner_[v] = g;
    }
  }

  [[nodiscard]] double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  bool out_of_budget() {
    if (result_.nodes >= budget_.max_nodes) return true;
    // Clock reads are cheap enough; check every 64 nodes.
    if ((result_.nodes & 63) == 0 && elapsed() > budget_.max_seconds) return true;
    return false;
  }

  void accept(const std::vector<int>& x) {
    const double z = objective_value(m_, x);
    if (z < result_.objective - opt_.prune_eps || !result_.has_solution()) {
      result_.objective = z;
      result_.values = x;
      result_.trace.push_back({result_.nodes, z});
    }
  }

  void activity(int r, const std::vector<int>& lo, const std::vector<int>& hi, double& mn, double& mx) const {
    mn = mx = 0;
    for (const auto& t : m_.constraints[r].terms) {
      const double a = t.coef * lo[t.var], b = t.coef * hi[t.var];
      mn += std::min(a, b);
      mx += std::max(a, b);
    }
  }

  // Tighten bounds from one side "sum a x <= b" (sign = +1) or ">= b" (sign = -1).
  bool tighten(int r, double sign, std::vector<int>& lo, std::vector<int>& hi, std::vector<Index>& changed) const {
    const auto& c = m_.constraints[r];
    const double b = sign * c.rhs;
    double mn = 0;
    for (const auto& t : c.terms) {
      const double a = sign * t.coef;
      mn += a > 0 ? a * lo[t.var] : a * hi[t.var];
    }
    if (mn > b + kTol) return false;
    for (const auto& t : c.terms) {
      const double a = sign * t.coef;
      if (a == 0) continue;
      const Index v = t.var;
      const double rest = mn - (a > 0 ? a * lo[v] : a * hi[v]);
      const double lim = (b - rest) / a;
      if (a > 0) {
        const int nh = static_cast<int>(std::floor(lim + kTol));
        if (nh < hi[v]) {
          if (nh < lo[v]) return false;
          hi[v] = nh;
          changed.push_back(v);
        }
      } else {
        const int nl = static_cast<int>(std::ceil(lim - kTol));
        if (nl > lo[v]) {
          if (nl > hi[v]) return false;
          lo[v] = nl;
          changed.push_back(v);
        }
      }
    }
    return true;
  }

  bool propagate(std::vector<int>& lo, std::vector<int>& hi, std::vector<int> queue) {
    std::vector<char> queued(m_.constraints.size(), 0);
    for (int r : queue) queued[r] = 1;
    std::vector<Index> changed;
    while (!queue.empty()) {
      const int r = queue.back();
      queue.pop_back();
      queued[r] = 0;
      changed.clear();
      const auto rel = m_.constraints[r].relation;
      if (rel != Relation::GE && !tighten(r, 1.0, lo, hi, changed)) return false;
      if (rel != Relation::LE && !tighten(r, -1.0, lo, hi, changed)) return false;
      for (Index v : changed)
        for (const auto& e : cols_[v])
          if (!queued[e.row]) {
            queued[e.row] = 1;
            queue.push_back(e.row);
          }
    }
    return true;
  }

  // Does moving v in direction dir (-1 down, +1 up) risk violating an open row?
  bool locked(Index v, int dir, const std::vector<int>& lo, const std::vector<int>& hi) const {
    for (const auto& e : cols_[v]) {
      const auto& c = m_.constraints[e.row];
      const double effect = dir * e.coef;  // change of lhs per unit move
      if (c.relation == Relation::EQ) return true;
      const bool hurts = (c.relation == Relation::LE) ? effect > 0 : effect < 0;
      if (!hurts) continue;
      double mn, mx;
      activity(e.row, lo, hi, mn, mx);
      const bool redundant = c.relation == Relation::LE ? mx <= c.rhs + kTol : mn >= c.rhs - kTol;
      if (!redundant) return true;
    }
    return false;
  }

  // Propagation to fixpoint interleaved with dual fixing.
  bool reduce(std::vector<int>& lo, std::vector<int>& hi, std::vector<int> seed_rows = {}) {
    if (seed_rows.empty()) {
      seed_rows.resize(m_.constraints.size());
      std::iota(seed_rows.begin(), seed_rows.end(), 0);
    }
    if (!propagate(lo, hi, std::move(seed_rows))) return false;
    for (;;) {
      bool fixed_any = false;
      std::vector<int> touched;
      for (std::size_t v = 0; v < lo.size(); ++v) {
        if (lo[v] == hi[v]) continue;
        const double c = cost_[v];
        if (c >= 0 && !locked(static_cast<Index>(v), -1, lo, hi)) {
          hi[v] = lo[v];
        } else if (c <= 0 && !locked(static_cast<Index>(v), +1, lo, hi)) {
          lo[v] = hi[v];
        } else {
          continue;
        }
        fixed_any = true;
        for (const auto& e : cols_[v]) touched.push_back(e.row);
      }
      if (!fixed_any) return true;
      if (!propagate(lo, hi, std::move(touched))) return false;
    }
  }

  [[nodiscard]] double bound(const std::vector<int>& lo, const std::vector<int>& hi) const {
    double z = m_.objective_offset;
    for (std::size_t v = 0; v < lo.size(); ++v) {
      if (owner_[v] >= 0 && lo[v] != hi[v]) continue;
      const double c = cost_[v];
      z += c >= 0 ? c * lo[v] : c * hi[v];
    }
    for (const auto& g : groups_) {
      if (!g.owns) continue;
      double best = std::numeric_limits<double>::infinity();
      bool open = false;
      for (Index v : g.vars)
        if (lo[v] != hi[v]) {
          open = true;
          best = std::min(best, cost_[v]);
        }
      // An open group has no member fixed to 1; one candidate becomes 1.
      if (open) z += best;
    }
    return z;
  }

  struct Child {
    std::vector<int> lo, hi;
    double bound;
  };

  std::vector<Child> children(const std::vector<int>& lo, const std::vector<int>& hi) {
    std::vector<Child> out;
    int best_group = -1;
    std::size_t best_count = std::numeric_limits<std::size_t>::max();
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      std::size_t cand = 0;
      bool decided = false;
      for (Index v : groups_[g].vars) {
        if (lo[v] == 1) decided = true;
        cand += hi[v] == 1 && lo[v] == 0;
      }
      if (decided || cand < 2) continue;
      if (cand < best_count) {
        best_count = cand;
        best_group = static_cast<int>(g);
      }
    }
    auto make = [&](Index v, int lval, int hval) {
      Child ch{lo, hi, 0.0};
      ch.lo[v] = lval;
      ch.hi[v] = hval;
      std::vector<int> rows;
      for (const auto& e : cols_[v]) rows.push_back(e.row);
      if (rows.empty() || reduce(ch.lo, ch.hi, std::move(rows))) {
        ch.bound = bound(ch.lo, ch.hi);
        out.push_back(std::move(ch));
      }
    };
    if (best_group >= 0) {
      for (Index v : groups_[best_group].vars)
        if (hi[v] == 1 && lo[v] == 0) make(v, 1, 1);
    } else {
      Index pick = -1;
      int width = std::numeric_limits<int>::max();
      for (std::size_t v = 0; v < lo.size(); ++v)
        if (lo[v] != hi[v] && hi[v] - lo[v] < width) {
          width = hi[v] - lo[v];
          pick = static_cast<Index>(v);
        }
      if (pick < 0) return out;
      for (int val = lo[pick]; val <= hi[pick]; ++val) make(pick, val, val);
    }
    std::stable_sort(out.begin(), out.end(), [](const Child& a, const Child& b) { return a.bound < b.bound; });
    return out;
  }

  void search(const std::vector<int>& lo, const std::vector<int>& hi, double node_bound, int depth) {
    if (aborted_) return;
    if (out_of_budget()) {
      aborted_ = true;
      return;
    }
    ++result_.nodes;
    if (opt_.on_node) opt_.on_node(NodeView{lo, hi, node_bound, depth});
    if (result_.has_solution() && node_bound >= result_.objective - opt_.prune_eps) return;

    if (std::equal(lo.begin(), lo.end(), hi.begin())) {
      if (is_feasible(m_, lo)) accept(lo);
      return;
    }
    for (auto& ch : children(lo, hi)) {
      if (aborted_) return;
      if (result_.has_solution() && ch.bound >= result_.objective - opt_.prune_eps) continue;
      search(ch.lo, ch.hi, ch.bound, depth + 1);
    }
  }

  struct Group {
    std::vector<Index> vars;
    bool owns;  // counted in the bound (disjoint from earlier groups)
  };

  const CrispModel& m_;
  SearchBudget budget_;
  const SolveOptions& opt_;
  std::vector<double> cost_;
  std::vector<std::vector<Entry>> cols_;
  std::vector<int> owner_;
  std::vector<Group> groups_;
  SolveResult result_;
  bool aborted_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

inline SolveResult solve_exact(const CrispModel& model, const SearchBudget& budget = {},
                               const SolveOptions& options = {}) {
  if (budget.max_nodes <= 0 || !(budget.max_seconds > 0)) throw BudgetZero();
  return detail::BranchAndBound(model, budget, options).run();
}

}  // namespace fuzzy_ettp
