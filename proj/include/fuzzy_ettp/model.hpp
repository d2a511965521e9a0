#pragma once

// The three fuzzy integer linear formulations of the timetabling problem and
// their defuzzification into crisp integer programs.
//
//   Model 1: x[j,k,r]           exam j in slot k and room r       (n*t*m)
//   Model 2: x[j,k], y[j,r]     slot and room chosen separately   (n*(t+m))
//   Model 3: T[i], C[i], d[i,r] slot/room integers + room one-hot (published count t+n+n*m)
//
// Decision variables are crisp integers; fuzziness lives in coefficients,
// right-hand sides and the constant objective offset. Auxiliary variables
// (slot one-hots, used-room indicators, penalty indicators) are marked
// non-primary and excluded from the variable counts.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fuzzy_ettp/fuzzy.hpp"
#include "fuzzy_ettp/instance.hpp"
#include "fuzzy_ettp/timetable.hpp"

namespace fuzzy_ettp {

enum class ModelKind { Model1 = 1, Model2 = 2, Model3 = 3 };
enum class VarKind { Binary, Integer };
enum class Relation { LE, GE, EQ };

inline std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::LE: return "<=";
    case Relation::GE: return ">=";
    case Relation::EQ: return "=";
  }
  return "?";
}

inline ModelKind model_kind_from_int(int k) {
  if (k < 1 || k > 3) throw std::invalid_argument("model must be 1, 2 or 3");
  return static_cast<ModelKind>(k);
}

class InstanceTooLarge : public std::runtime_error {
 public:
  InstanceTooLarge(std::int64_t count, std::int64_t cap)
      : std::runtime_error("model needs " + std::to_string(count) + " primary variables, cap is " +
                           std::to_string(cap)),
        count_(count),
        cap_(cap) {}
  [[nodiscard]] std::int64_t count() const { return count_; }
  [[nodiscard]] std::int64_t cap() const { return cap_; }

 private:
  std::int64_t count_;
  std::int64_t cap_;
};

/// Primary variable count in each formulation, using the published counting
/// convention (Model 3: t + n + n*m).
inline std::int64_t count_variables(ModelKind kind, std::int64_t n, std::int64_t t, std::int64_t m) {
  switch (kind) {
    case ModelKind::Model1: return n * t * m;
    case ModelKind::Model2: return n * (t + m);
    case ModelKind::Model3: return t + n + n * m;
  }
  return 0;
}

struct Variable {
  Index id = 0;
  VarKind kind = VarKind::Binary;
  int lower = 0;
  int upper = 1;
  std::string tag;
  bool primary = true;
};

template <class Coef>
struct Term {
  Coef coef;
  Index var;
};

template <class Coef>
struct LinearConstraint {
  std::vector<Term<Coef>> terms;
  Relation relation = Relation::LE;
  Coef rhs{};
  ConstraintOrigin origin = ConstraintOrigin::Linking;
};

/// Where each variable family starts; enough to decode a solution vector
/// into a timetable.
struct ModelLayout {
  ModelKind kind = ModelKind::Model3;
  int num_exams = 0;
  int num_slots = 0;
  int num_rooms = 0;
  Index x_base = -1;      // M1 x[j,k,r] / M2 x[j,k]
  Index y_base = -1;      // M2 y[j,r]
  Index T_base = -1;      // M3 T[i]
  Index C_base = -1;      // M3 C[i]
  Index delta_base = -1;  // M3 d[i,r]
  Index z_base = -1;      // M3 z[i,k] (auxiliary)
  int room_offset = 0;    // 1 when C uses 1-based room numbers (literal room-link mode)
  std::vector<int> enrollment;

  [[nodiscard]] Index x1(int j, int k, int r) const { return x_base + (j * num_slots + k) * num_rooms + r; }
  [[nodiscard]] Index x2(int j, int k) const { return x_base + j * num_slots + k; }
  [[nodiscard]] Index y2(int j, int r) const { return y_base + j * num_rooms + r; }
  [[nodiscard]] Index T3(int i) const { return T_base + i; }
  [[nodiscard]] Index C3(int i) const { return C_base + i; }
  [[nodiscard]] Index d3(int i, int r) const { return delta_base + i * num_rooms + r; }
  [[nodiscard]] Index z3(int i, int k) const { return z_base + i * num_slots + k; }

  /// Variables whose sum is the indicator "exam j sits in slot k".
  [[nodiscard]] std::vector<Index> slot_indicator(int j, int k) const {
    switch (kind) {
      case ModelKind::Model1: {
        std::vector<Index> v;
        for (int r = 0; r < num_rooms; ++r) v.push_back(x1(j, k, r));
        return v;
      }
      case ModelKind::Model2: return {x2(j, k)};
      case ModelKind::Model3: return {z3(j, k)};
    }
    return {};
  }
};

template <class Coef>
struct LinearModel {
  ModelLayout layout;
  std::vector<Variable> variables;
  std::vector<LinearConstraint<Coef>> constraints;
  std::vector<Term<Coef>> objective;
  Coef objective_offset{};

  [[nodiscard]] std::size_t num_variables() const { return variables.size(); }
  [[nodiscard]] std::size_t primary_count() const {
    return static_cast<std::size_t>(
        std::count_if(variables.begin(), variables.end(), [](const Variable& v) { return v.primary; }));
  }
  [[nodiscard]] std::set<ConstraintOrigin> origins() const {
    std::set<ConstraintOrigin> s;
    for (const auto& c : constraints) s.insert(c.origin);
    return s;
  }
};

using FilpModel = LinearModel<TriangularFuzzyNumber>;

struct CrispModel : LinearModel<double> {
  RankingFunction provenance;
};

/// Constraint origins each builder can emit.
inline std::set<ConstraintOrigin> model_catalogue(ModelKind kind) {
  using O = ConstraintOrigin;
  std::set<O> s = {O::StudentClash, O::Semester,  O::RoomKind, O::RoomAvailability, O::Capacity,
                   O::Mixing,       O::Coverage, O::GeneratorEvening, O::SoftLink};
  if (kind == ModelKind::Model3) s.insert(O::Linking);
  return s;
}

struct BuildOptions {
  std::int64_t variable_cap = 1'000'000;
  // Model 3 only: keep the published "C_i - d_ir < r" rows instead of the
  // one-hot linking (for study; it does not define C correctly).
  bool literal_room_link = false;
};

// ---------------------------------------------------------------------------
// Assembly

namespace detail {

class Assembler {
 public:
  explicit Assembler(FilpModel& m) : m_(m) {}

  Index var(VarKind kind, int lo, int hi, std::string tag, bool primary) {
    const Index id = static_cast<Index>(m_.variables.size());
    m_.variables.push_back({id, kind, lo, hi, std::move(tag), primary});
    return id;
  }

  void row(std::vector<Term<Tfn>> terms, Relation rel, Tfn rhs, ConstraintOrigin origin) {
    merge(terms);
    // An empty row that holds for every ranking carries no information.
    if (terms.empty() && ((rel != Relation::GE && rhs.lower >= 0 && (rel == Relation::LE || rhs.upper == 0)) ||
                          (rel == Relation::GE && rhs.upper <= 0)))
      return;
    m_.constraints.push_back({std::move(terms), rel, rhs, origin});
  }

  void cost(Index v, Tfn c) {
    if (c == Tfn::crisp(0)) return;
    pending_.emplace_back(v, c);
  }

  void offset(Tfn c) { m_.objective_offset += c; }

  void finish() {
    std::map<Index, Tfn> acc;
    for (auto& [v, c] : pending_) {
      auto [it, fresh] = acc.emplace(v, c);
      if (!fresh) it->second += c;
    }
    for (auto& [v, c] : acc) m_.objective.push_back({c, v});
  }

 private:
  static void merge(std::vector<Term<Tfn>>& terms) {
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.var < b.var; });
    std::vector<Term<Tfn>> out;
    for (const auto& t : terms) {
      if (!out.empty() && out.back().var == t.var)
        out.back().coef += t.coef;
      else
        out.push_back(t);
    }
    terms = std::move(out);
  }

  FilpModel& m_;
  std::vector<std::pair<Index, Tfn>> pending_;
};

inline std::string tag3(std::string_view fam, int a, int b, int c) {
  return std::string(fam) + "[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "]";
}
inline std::string tag2(std::string_view fam, int a, int b) {
  return std::string(fam) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}
inline std::string tag1(std::string_view fam, int a) { return std::string(fam) + "[" + std::to_string(a) + "]"; }

/// Pairwise data shared by the builders.
struct PairData {
  struct Pair {
    int a, b;
    int students;   // N_ab
    int lecturers;  // teachers teaching both courses
  };
  std::vector<Pair> conflicting;  // may not share a slot
  std::vector<Pair> consecutive;  // penalised at distance 1
};

inline PairData pair_data(const Instance& inst, bool with_lecturers) {
  PairData pd;
  const auto N = clash_matrix(inst);
  const auto conflicts = slot_conflicts(inst, N);
  const auto by_course = lecturers_of_course(inst);
  auto shared_lecturers = [&](int a, int b) {
    const Index ca = inst.exams[a].course_id, cb = inst.exams[b].course_id;
    if (ca < 0 || cb < 0 || static_cast<std::size_t>(ca) >= by_course.size() ||
        static_cast<std::size_t>(cb) >= by_course.size())
      return 0;
    const auto& la = by_course[ca];
    const auto& lb = by_course[cb];
    int c = 0;
    for (Index t : la) c += std::count(lb.begin(), lb.end(), t) > 0;
    return c;
  };
  const int n = static_cast<int>(inst.num_exams());
  for (int a = 0; a < n; ++a) {
    for (Index b : conflicts[a])
      if (b > a) pd.conflicting.push_back({a, b, N(a, b), 0});
    for (int b = a + 1; b < n; ++b) {
      const int s = N(a, b);
      const int l = with_lecturers ? shared_lecturers(a, b) : 0;
      if (s > 0 || l > 0) pd.consecutive.push_back({a, b, s, l});
    }
  }
  return pd;
}

inline Tfn teacher_schedule_constant(const Instance& inst) {
  Tfn sum = Tfn::crisp(0);
  for (const auto& t : inst.teachers) {
    const auto& a = t.availability;
    sum += Tfn{a.left - a.spread, 0.5 * (a.left + a.right), a.right + a.spread};
  }
  return sum;
}

inline Tfn workload_constant(const Instance& inst) {
  Tfn sum = Tfn::crisp(0);
  for (const auto& t : inst.teachers) sum += t.workload;
  return sum;
}

inline Tfn travel_constant(const Instance& inst) {
  Tfn sum = Tfn::crisp(0);
  for (std::size_t a = 0; a < inst.travel_times.size(); ++a)
    for (std::size_t b = a + 1; b < inst.travel_times[a].size(); ++b) sum += inst.travel_times[a][b];
  return sum;
}

inline void add_constant_terms(Assembler& as, const Instance& inst) {
  const auto& w = inst.soft_weights;
  as.offset(tfn_scale(soft_weight(w, SoftConstraint::TeacherSchedule), teacher_schedule_constant(inst)));
  as.offset(tfn_scale(soft_weight(w, SoftConstraint::Workload), workload_constant(inst)));
  as.offset(tfn_scale(soft_weight(w, SoftConstraint::Travel), travel_constant(inst)));
}

/// q >= I(a,k) + I(b,k+1) - 1 and q' >= I(b,k) + I(a,k+1) - 1, cost w on each.
inline void add_consecutive_penalties(Assembler& as, const ModelLayout& L, const PairData& pd, double w_student,
                                      double w_lecturer, std::string_view prefix) {
  for (const auto& p : pd.consecutive) {
    const double w = w_student * p.students + w_lecturer * p.lecturers;
    if (w <= 0) continue;
    for (int k = 0; k + 1 < L.num_slots; ++k) {
      for (int dir = 0; dir < 2; ++dir) {
        const int first = dir ? p.b : p.a, second = dir ? p.a : p.b;
        const Index q = as.var(VarKind::Binary, 0, 1,
                               std::string(prefix) + ".q[" + std::to_string(first) + "," + std::to_string(second) +
                                   "," + std::to_string(k) + "]",
                               false);
        std::vector<Term<Tfn>> t{{Tfn::crisp(1), q}};
        for (Index v : L.slot_indicator(first, k)) t.push_back({Tfn::crisp(-1), v});
        for (Index v : L.slot_indicator(second, k + 1)) t.push_back({Tfn::crisp(-1), v});
        as.row(std::move(t), Relation::GE, Tfn::crisp(-1), ConstraintOrigin::SoftLink);
        as.cost(q, Tfn::crisp(w));
      }
    }
  }
}

inline void check_buildable(const Instance& inst, ModelKind kind, const BuildOptions& opt) {
  const std::int64_t n = static_cast<std::int64_t>(inst.num_exams());
  const std::int64_t t = inst.num_slots();
  const std::int64_t m = static_cast<std::int64_t>(inst.num_rooms());
  const std::int64_t count = kind == ModelKind::Model3 ? 2 * n + n * m : count_variables(kind, n, t, m);
  if (count > opt.variable_cap) throw InstanceTooLarge(count, opt.variable_cap);
  if (n > 0 && m == 0) throw std::invalid_argument("model builders need at least one room");
}

inline ModelLayout base_layout(const Instance& inst, ModelKind kind) {
  ModelLayout L;
  L.kind = kind;
  L.num_exams = static_cast<int>(inst.num_exams());
  L.num_slots = inst.num_slots();
  L.num_rooms = static_cast<int>(inst.num_rooms());
  L.enrollment = inst.registrations.enrollments();
  return L;
}

/// Why room r cannot host anything in slot k, if it cannot.
inline std::optional<ConstraintOrigin> slot_room_block(const Instance& inst, int k, int r) {
  const auto& room = inst.rooms[r];
  if (!room_available(room, k)) return ConstraintOrigin::RoomAvailability;
  if (!room.has_generator && inst.grid.is_evening(k)) return ConstraintOrigin::GeneratorEvening;
  return std::nullopt;
}

}  // namespace detail

inline FilpModel build_model1(const Instance& inst, const BuildOptions& opt = {}) {
  using detail::Assembler;
  detail::check_buildable(inst, ModelKind::Model1, opt);
  FilpModel model;
  model.layout = detail::base_layout(inst, ModelKind::Model1);
  auto& L = model.layout;
  const int n = L.num_exams, t = L.num_slots, m = L.num_rooms;
  Assembler as(model);
  const auto& w = inst.soft_weights;
  const auto one = Tfn::crisp(1);

  L.x_base = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < t; ++k)
      for (int r = 0; r < m; ++r) as.var(VarKind::Binary, 0, 1, detail::tag3("M1.x", j, k, r), true);

  // Coverage: each exam in exactly one (slot, room) cell.
  for (int j = 0; j < n; ++j) {
    std::vector<Term<Tfn>> terms;
    for (int k = 0; k < t; ++k)
      for (int r = 0; r < m; ++r) terms.push_back({one, L.x1(j, k, r)});
    as.row(std::move(terms), Relation::EQ, one, ConstraintOrigin::Coverage);
  }

  // Room kind, availability and evening rule fix cells to zero.
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < m; ++r) {
      const bool kind_ok = room_kind_matches(inst.exams[j], inst.rooms[r]);
      for (int k = 0; k < t; ++k) {
        auto block = kind_ok ? detail::slot_room_block(inst, k, r) : std::optional(ConstraintOrigin::RoomKind);
        if (block) as.row({{one, L.x1(j, k, r)}}, Relation::LE, Tfn::crisp(0), *block);
      }
    }

  // Student clash and semester rule.
  const auto pd = detail::pair_data(inst, true);
  for (const auto& p : pd.conflicting)
    for (int k = 0; k < t; ++k) {
      std::vector<Term<Tfn>> terms;
      for (int r = 0; r < m; ++r) {
        terms.push_back({one, L.x1(p.a, k, r)});
        terms.push_back({one, L.x1(p.b, k, r)});
      }
      as.row(std::move(terms), Relation::LE, one,
             p.students > 0 ? ConstraintOrigin::StudentClash : ConstraintOrigin::Semester);
    }

  // Capacity and mixing per (slot, room); used-cell indicators for wastage.
  const double w_waste = soft_weight(w, SoftConstraint::RoomWastage);
  for (int k = 0; k < t; ++k)
    for (int r = 0; r < m; ++r) {
      std::vector<Term<Tfn>> cap, mix;
      for (int j = 0; j < n; ++j) {
        cap.push_back({Tfn::crisp(L.enrollment[j]), L.x1(j, k, r)});
        mix.push_back({one, L.x1(j, k, r)});
      }
      as.row(std::move(cap), Relation::LE, inst.rooms[r].exam_capacity, ConstraintOrigin::Capacity);
      if (n > kMaxExamsPerRoom)
        as.row(std::move(mix), Relation::LE, Tfn::crisp(kMaxExamsPerRoom), ConstraintOrigin::Mixing);
      if (w_waste > 0 && n > 0) {
        const Index u = as.var(VarKind::Binary, 0, 1, detail::tag2("M1.used", k, r), false);
        for (int j = 0; j < n; ++j)
          as.row({{one, u}, {Tfn::crisp(-1), L.x1(j, k, r)}}, Relation::GE, Tfn::crisp(0), ConstraintOrigin::SoftLink);
        as.cost(u, tfn_scale(w_waste, inst.rooms[r].exam_capacity));
        for (int j = 0; j < n; ++j) as.cost(L.x1(j, k, r), Tfn::crisp(-w_waste * L.enrollment[j]));
      }
    }

  detail::add_consecutive_penalties(as, L, pd, soft_weight(w, SoftConstraint::StudentConsecutive),
                                    soft_weight(w, SoftConstraint::LecturerConsecutive), "M1");
  detail::add_constant_terms(as, inst);
  as.finish();
  return model;
}

inline FilpModel build_model2(const Instance& inst, const BuildOptions& opt = {}) {
  using detail::Assembler;
  detail::check_buildable(inst, ModelKind::Model2, opt);
  FilpModel model;
  model.layout = detail::base_layout(inst, ModelKind::Model2);
  auto& L = model.layout;
  const int n = L.num_exams, t = L.num_slots, m = L.num_rooms;
  Assembler as(model);
  const auto& w = inst.soft_weights;
  const auto one = Tfn::crisp(1);

  L.x_base = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < t; ++k) as.var(VarKind::Binary, 0, 1, detail::tag2("M2.x", j, k), true);
  L.y_base = static_cast<Index>(model.variables.size());
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < m; ++r) as.var(VarKind::Binary, 0, 1, detail::tag2("M2.y", j, r), true);

  for (int j = 0; j < n; ++j) {
    std::vector<Term<Tfn>> slots, rooms;
    for (int k = 0; k < t; ++k) slots.push_back({one, L.x2(j, k)});
    for (int r = 0; r < m; ++r) rooms.push_back({one, L.y2(j, r)});
    as.row(std::move(slots), Relation::EQ, one, ConstraintOrigin::Coverage);
    as.row(std::move(rooms), Relation::GE, one, ConstraintOrigin::Coverage);
  }

  for (int j = 0; j < n; ++j)
    for (int r = 0; r < m; ++r) {
      if (!room_kind_matches(inst.exams[j], inst.rooms[r])) {
        as.row({{one, L.y2(j, r)}}, Relation::LE, Tfn::crisp(0), ConstraintOrigin::RoomKind);
        continue;
      }
      for (int k = 0; k < t; ++k)
        if (auto block = detail::slot_room_block(inst, k, r))
          as.row({{one, L.x2(j, k)}, {one, L.y2(j, r)}}, Relation::LE, one, *block);
    }

  const auto pd = detail::pair_data(inst, true);
  for (const auto& p : pd.conflicting)
    for (int k = 0; k < t; ++k)
      as.row({{one, L.x2(p.a, k)}, {one, L.x2(p.b, k)}}, Relation::LE, one,
             p.students > 0 ? ConstraintOrigin::StudentClash : ConstraintOrigin::Semester);

  // Per-room capacity over the whole period, as formulated.
  const double w_waste = soft_weight(w, SoftConstraint::RoomWastage);
  long seated = 0;
  for (int j = 0; j < n; ++j) seated += L.enrollment[j];
  for (int r = 0; r < m; ++r) {
    std::vector<Term<Tfn>> cap;
    for (int j = 0; j < n; ++j) cap.push_back({Tfn::crisp(L.enrollment[j]), L.y2(j, r)});
    as.row(std::move(cap), Relation::LE, inst.rooms[r].exam_capacity, ConstraintOrigin::Capacity);
    if (w_waste > 0 && n > 0) {
      const Index v = as.var(VarKind::Binary, 0, 1, detail::tag1("M2.used", r), false);
      for (int j = 0; j < n; ++j)
        as.row({{one, v}, {Tfn::crisp(-1), L.y2(j, r)}}, Relation::GE, Tfn::crisp(0), ConstraintOrigin::SoftLink);
      as.cost(v, tfn_scale(w_waste, inst.rooms[r].exam_capacity));
    }
  }
  if (w_waste > 0) as.offset(Tfn::crisp(-w_waste * static_cast<double>(seated)));

  // Mixing per (slot, room) through w[j,k,r] >= x[j,k] + y[j,r] - 1.
  for (int r = 0; r < m; ++r) {
    std::vector<int> eligible;
    for (int j = 0; j < n; ++j)
      if (room_kind_matches(inst.exams[j], inst.rooms[r])) eligible.push_back(j);
    if (static_cast<int>(eligible.size()) <= kMaxExamsPerRoom) continue;
    for (int k = 0; k < t; ++k) {
      std::vector<Term<Tfn>> mix;
      for (int j : eligible) {
        const Index wv = as.var(VarKind::Binary, 0, 1, detail::tag3("M2.w", j, k, r), false);
        as.row({{one, wv}, {Tfn::crisp(-1), L.x2(j, k)}, {Tfn::crisp(-1), L.y2(j, r)}}, Relation::GE,
               Tfn::crisp(-1), ConstraintOrigin::SoftLink);
        mix.push_back({one, wv});
      }
      as.row(std::move(mix), Relation::LE, Tfn::crisp(kMaxExamsPerRoom), ConstraintOrigin::Mixing);
    }
  }

  detail::add_consecutive_penalties(as, L, pd, soft_weight(w, SoftConstraint::StudentConsecutive),
                                    soft_weight(w, SoftConstraint::LecturerConsecutive), "M2");
  detail::add_constant_terms(as, inst);
  as.finish();
  return model;
}

inline FilpModel build_model3(const Instance& inst, const BuildOptions& opt = {}) {
  using detail::Assembler;
  detail::check_buildable(inst, ModelKind::Model3, opt);
  FilpModel model;
  model.layout = detail::base_layout(inst, ModelKind::Model3);
  auto& L = model.layout;
  const int n = L.num_exams, t = L.num_slots, m = L.num_rooms;
  Assembler as(model);
  const auto& w = inst.soft_weights;
  const auto one = Tfn::crisp(1);
  const int room_offset = opt.literal_room_link ? 1 : 0;
  L.room_offset = room_offset;

  L.T_base = 0;
  for (int i = 0; i < n; ++i) as.var(VarKind::Integer, 0, std::max(0, t - 1), detail::tag1("M3.T", i), true);
  L.C_base = static_cast<Index>(model.variables.size());
  for (int i = 0; i < n; ++i)
    as.var(VarKind::Integer, room_offset, std::max(0, m - 1) + room_offset, detail::tag1("M3.C", i), true);
  L.delta_base = static_cast<Index>(model.variables.size());
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < m; ++r) as.var(VarKind::Binary, 0, 1, detail::tag2("M3.delta", i, r), true);
  L.z_base = static_cast<Index>(model.variables.size());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < t; ++k) as.var(VarKind::Binary, 0, 1, detail::tag2("M3.z", i, k), false);

  for (int i = 0; i < n; ++i) {
    // One slot per exam, T[i] = sum_k k z[i,k].
    std::vector<Term<Tfn>> onehot, link{{one, L.T3(i)}};
    for (int k = 0; k < t; ++k) {
      onehot.push_back({one, L.z3(i, k)});
      if (k) link.push_back({Tfn::crisp(-k), L.z3(i, k)});
    }
    as.row(std::move(onehot), Relation::EQ, one, ConstraintOrigin::Coverage);
    as.row(std::move(link), Relation::EQ, Tfn::crisp(0), ConstraintOrigin::Linking);

    if (opt.literal_room_link) {
      for (int r = 0; r < m; ++r)
        as.row({{one, L.C3(i)}, {Tfn::crisp(-1), L.d3(i, r)}}, Relation::LE, Tfn::crisp(r + 1 - 1),
               ConstraintOrigin::Linking);
    } else {
      std::vector<Term<Tfn>> rooms, clink{{one, L.C3(i)}};
      for (int r = 0; r < m; ++r) {
        rooms.push_back({one, L.d3(i, r)});
        if (r) clink.push_back({Tfn::crisp(-r), L.d3(i, r)});
      }
      as.row(std::move(rooms), Relation::EQ, one, ConstraintOrigin::Coverage);
      as.row(std::move(clink), Relation::EQ, Tfn::crisp(0), ConstraintOrigin::Linking);
    }
  }

  for (int i = 0; i < n; ++i)
    for (int r = 0; r < m; ++r) {
      if (!room_kind_matches(inst.exams[i], inst.rooms[r])) {
        as.row({{one, L.d3(i, r)}}, Relation::LE, Tfn::crisp(0), ConstraintOrigin::RoomKind);
        continue;
      }
      for (int k = 0; k < t; ++k)
        if (auto block = detail::slot_room_block(inst, k, r))
          as.row({{one, L.z3(i, k)}, {one, L.d3(i, r)}}, Relation::LE, one, *block);
    }

  // T_i != T_j for conflicting exams, linearised on the slot one-hots.
  const auto pd = detail::pair_data(inst, false);
  for (const auto& p : pd.conflicting)
    for (int k = 0; k < t; ++k)
      as.row({{one, L.z3(p.a, k)}, {one, L.z3(p.b, k)}}, Relation::LE, one,
             p.students > 0 ? ConstraintOrigin::StudentClash : ConstraintOrigin::Semester);

  const double w_waste = soft_weight(w, SoftConstraint::RoomWastage);
  for (int r = 0; r < m; ++r) {
    std::vector<Term<Tfn>> cap;
    for (int i = 0; i < n; ++i) cap.push_back({Tfn::crisp(L.enrollment[i]), L.d3(i, r)});
    as.row(std::move(cap), Relation::LE, inst.rooms[r].exam_capacity, ConstraintOrigin::Capacity);
    if (w_waste > 0 && n > 0) {
      const Index v = as.var(VarKind::Binary, 0, 1, detail::tag1("M3.used", r), false);
      for (int i = 0; i < n; ++i)
        as.row({{one, v}, {Tfn::crisp(-1), L.d3(i, r)}}, Relation::GE, Tfn::crisp(0), ConstraintOrigin::SoftLink);
      as.cost(v, tfn_scale(w_waste, inst.rooms[r].exam_capacity));
      for (int i = 0; i < n; ++i) as.cost(L.d3(i, r), Tfn::crisp(-w_waste * L.enrollment[i]));
    }
  }

  for (int r = 0; r < m; ++r) {
    std::vector<int> eligible;
    for (int i = 0; i < n; ++i)
      if (room_kind_matches(inst.exams[i], inst.rooms[r])) eligible.push_back(i);
    if (static_cast<int>(eligible.size()) <= kMaxExamsPerRoom) continue;
    for (int k = 0; k < t; ++k) {
      std::vector<Term<Tfn>> mix;
      for (int i : eligible) {
        const Index wv = as.var(VarKind::Binary, 0, 1, detail::tag3("M3.w", i, k, r), false);
        as.row({{one, wv}, {Tfn::crisp(-1), L.z3(i, k)}, {Tfn::crisp(-1), L.d3(i, r)}}, Relation::GE,
               Tfn::crisp(-1), ConstraintOrigin::SoftLink);
        mix.push_back({one, wv});
      }
      as.row(std::move(mix), Relation::LE, Tfn::crisp(kMaxExamsPerRoom), ConstraintOrigin::Mixing);
    }
  }

  // Spacing: penalty max(0, 2 - |T_i - T_j|) per shared student; distance 0
  // is already infeasible, so only distance 1 costs.
  detail::add_consecutive_penalties(as, L, pd, soft_weight(w, SoftConstraint::StudentConsecutive), 0.0, "M3");
  detail::add_constant_terms(as, inst);
  as.finish();
  return model;
}

inline FilpModel build_model(ModelKind kind, const Instance& inst, const BuildOptions& opt = {}) {
  switch (kind) {
    case ModelKind::Model1: return build_model1(inst, opt);
    case ModelKind::Model2: return build_model2(inst, opt);
    case ModelKind::Model3: return build_model3(inst, opt);
  }
  throw std::invalid_argument("unknown model kind");
}

// ---------------------------------------------------------------------------
// Defuzzification and evaluation

inline CrispModel defuzzify_model(const FilpModel& filp, const RankingFunction& r = {}) {
  CrispModel out;
  out.provenance = r;
  out.layout = filp.layout;
  out.variables = filp.variables;
  out.constraints.reserve(filp.constraints.size());
  for (const auto& c : filp.constraints) {
    LinearConstraint<double> cc;
    cc.relation = c.relation;
    cc.origin = c.origin;
    cc.rhs = rank(c.rhs, r);
    cc.terms.reserve(c.terms.size());
    for (const auto& t : c.terms) cc.terms.push_back({rank(t.coef, r), t.var});
    out.constraints.push_back(std::move(cc));
  }
  for (const auto& t : filp.objective) out.objective.push_back({rank(t.coef, r), t.var});
  out.objective_offset = rank(filp.objective_offset, r);
  return out;
}

/// Crisp model whose coefficients are the crisp triplets (c, c, c).
inline FilpModel lift_crisp(const CrispModel& crisp) {
  FilpModel out;
  out.layout = crisp.layout;
  out.variables = crisp.variables;
  for (const auto& c : crisp.constraints) {
    LinearConstraint<Tfn> fc;
    fc.relation = c.relation;
    fc.origin = c.origin;
    fc.rhs = Tfn::crisp(c.rhs);
    for (const auto& t : c.terms) fc.terms.push_back({Tfn::crisp(t.coef), t.var});
    out.constraints.push_back(std::move(fc));
  }
  for (const auto& t : crisp.objective) out.objective.push_back({Tfn::crisp(t.coef), t.var});
  out.objective_offset = Tfn::crisp(crisp.objective_offset);
  return out;
}

inline double objective_value(const CrispModel& m, std::span<const int> x) {
  double z = m.objective_offset;
  for (const auto& t : m.objective) z += t.coef * x[t.var];
  return z;
}

/// Fuzzy objective value of an assignment (requires non-negative values).
inline Tfn objective_value(const FilpModel& m, std::span<const int> x) {
  Tfn z = m.objective_offset;
  for (const auto& t : m.objective) z += tfn_scale(static_cast<double>(x[t.var]), t.coef);
  return z;
}

inline constexpr double kFeasibilityTolerance = 1e-6;

inline bool row_satisfied(const LinearConstraint<double>& c, std::span<const int> x,
                          double tol = kFeasibilityTolerance) {
  double lhs = 0;
  for (const auto& t : c.terms) lhs += t.coef * x[t.var];
  switch (c.relation) {
    case Relation::LE: return lhs <= c.rhs + tol;
    case Relation::GE: return lhs >= c.rhs - tol;
    case Relation::EQ: return std::abs(lhs - c.rhs) <= tol;
  }
  return false;
}

inline bool is_feasible(const CrispModel& m, std::span<const int> x) {
  if (x.size() != m.variables.size()) return false;
  for (const auto& v : m.variables)
    if (x[v.id] < v.lower || x[v.id] > v.upper) return false;
  return std::all_of(m.constraints.begin(), m.constraints.end(), [&](const auto& c) { return row_satisfied(c, x); });
}

/// Turns a solution vector into a timetable. Model 2 rooms: the lowest
/// selected room seats the whole exam (its capacity row already admits it).
template <class Coef>
Timetable decode_timetable(const LinearModel<Coef>& model, std::span<const int> x) {
  const auto& L = model.layout;
  Timetable tt(static_cast<std::size_t>(L.num_exams));
  for (int j = 0; j < L.num_exams; ++j) {
    const int seats = L.enrollment[j];
    switch (L.kind) {
      case ModelKind::Model1:
        for (int k = 0; k < L.num_slots; ++k)
          for (int r = 0; r < L.num_rooms; ++r)
            if (x[L.x1(j, k, r)] == 1 && tt.slot_of[j] < 0) {
              tt.slot_of[j] = k;
              tt.rooms_of[j].push_back({r, seats, {}});
            }
        break;
      case ModelKind::Model2:
        for (int k = 0; k < L.num_slots; ++k)
          if (x[L.x2(j, k)] == 1) tt.slot_of[j] = k;
        for (int r = 0; r < L.num_rooms; ++r)
          if (x[L.y2(j, r)] == 1) {
            tt.rooms_of[j].push_back({r, seats, {}});
            break;
          }
        break;
      case ModelKind::Model3: {
        tt.slot_of[j] = x[L.T3(j)];
        const int room = x[L.C3(j)] - L.room_offset;
        if (room >= 0 && room < L.num_rooms) tt.rooms_of[j].push_back({room, seats, {}});
        break;
      }
    }
  }
  return tt;
}

// ---------------------------------------------------------------------------
// Export

namespace detail {
inline std::string lp_name(const std::string& tag) {
  std::string s;
  for (char c : tag) s += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s;
}

inline std::string lp_num(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

inline void lp_terms(std::ostringstream& os, const std::vector<Term<double>>& terms, const CrispModel& m) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef == 0) continue;
    os << (t.coef < 0 ? " - " : (first ? " " : " + ")) << lp_num(std::abs(t.coef)) << ' '
       << lp_name(m.variables[t.var].tag);
    first = false;
  }
  if (first) os << " 0 " << lp_name(m.variables.empty() ? "zero" : m.variables[0].tag);
}
}  // namespace detail

/// CPLEX LP text. The objective constant is carried by a variable fixed to 1.
inline std::string to_lp(const CrispModel& m) {
  std::ostringstream os;
  os << "\\ model " << static_cast<int>(m.layout.kind) << ", ranking " << to_string(m.provenance.method) << "\n";
  os << "Minimize\n obj:";
  detail::lp_terms(os, m.objective, m);
  if (m.objective_offset != 0)
    os << (m.objective_offset < 0 ? " - " : " + ") << detail::lp_num(std::abs(m.objective_offset)) << " obj_constant";
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < m.constraints.size(); ++i) {
    const auto& c = m.constraints[i];
    os << " c" << i << "_" << detail::lp_name(std::string(to_string(c.origin))) << ":";
    detail::lp_terms(os, c.terms, m);
    os << ' ' << to_string(c.relation) << ' ' << detail::lp_num(c.rhs) << '\n';
  }
  os << "Bounds\n";
  for (const auto& v : m.variables)
    if (v.kind == VarKind::Integer || v.lower != 0 || v.upper != 1)
      os << ' ' << v.lower << " <= " << detail::lp_name(v.tag) << " <= " << v.upper << '\n';
  if (m.objective_offset != 0) os << " obj_constant = 1\n";
  os << "Binaries\n";
  for (const auto& v : m.variables)
    if (v.kind == VarKind::Binary) os << ' ' << detail::lp_name(v.tag) << '\n';
  os << "Generals\n";
  for (const auto& v : m.variables)
    if (v.kind == VarKind::Integer) os << ' ' << detail::lp_name(v.tag) << '\n';
  os << "End\n";
  return os.str();
}

inline json model_to_json(const CrispModel& m) {
  json vars = json::array();
  for (const auto& v : m.variables)
    vars.push_back({{"tag", v.tag},
                    {"kind", v.kind == VarKind::Binary ? "binary" : "integer"},
                    {"lower", v.lower},
                    {"upper", v.upper},
                    {"primary", v.primary}});
  json rows = json::array();
  for (const auto& c : m.constraints) {
    json terms = json::array();
    for (const auto& t : c.terms) terms.push_back({t.var, t.coef});
    rows.push_back({{"origin", std::string(to_string(c.origin))},
                    {"relation", std::string(to_string(c.relation))},
                    {"rhs", c.rhs},
                    {"terms", std::move(terms)}});
  }
  json obj = json::array();
  for (const auto& t : m.objective) obj.push_back({t.var, t.coef});
  return {{"model", static_cast<int>(m.layout.kind)},
          {"ranking", std::string(to_string(m.provenance.method))},
          {"sense", "minimize"},
          {"variables", std::move(vars)},
          {"constraints", std::move(rows)},
          {"objective", {{"terms", std::move(obj)}, {"constant", m.objective_offset}}}};
}

}  // namespace fuzzy_ettp
