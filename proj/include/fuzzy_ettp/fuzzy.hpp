#pragma once

// Triangular and LR-trapezoidal fuzzy quantities and the ranking functions
// that turn them into crisp numbers.

#include <algorithm>
#include <cmath>
#include <compare>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fuzzy_ettp {

class FuzzyInvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Triangular fuzzy number (lower, modal, upper) with lower <= modal <= upper.
struct TriangularFuzzyNumber {
  double lower = 0.0;
  double modal = 0.0;
  double upper = 0.0;

  constexpr TriangularFuzzyNumber() = default;
  constexpr TriangularFuzzyNumber(double l, double m, double u) : lower(l), modal(m), upper(u) {}

  static constexpr TriangularFuzzyNumber crisp(double c) { return {c, c, c}; }

  [[nodiscard]] bool valid() const {
    return std::isfinite(lower) && std::isfinite(modal) && std::isfinite(upper) && lower <= modal &&
           modal <= upper;
  }
  [[nodiscard]] bool is_crisp() const { return lower == modal && modal == upper; }

  bool operator==(const TriangularFuzzyNumber&) const = default;
};

using Tfn = TriangularFuzzyNumber;

/// Flat-top LR interval: membership 1 on [left, right], linear shoulders of
/// width `spread` on both sides. spread == 0 is the crisp interval indicator.
struct TrapezoidalInterval {
  double left = 0.0;
  double right = 0.0;
  double spread = 0.0;

  constexpr TrapezoidalInterval() = default;
  constexpr TrapezoidalInterval(double l, double r, double s = 0.0) : left(l), right(r), spread(s) {}

  [[nodiscard]] bool valid() const {
    return std::isfinite(left) && std::isfinite(right) && std::isfinite(spread) && left <= right &&
           spread >= 0.0;
  }

  bool operator==(const TrapezoidalInterval&) const = default;
};

inline std::string to_string(const TriangularFuzzyNumber& f) {
  std::ostringstream os;
  os << '(' << f.lower << ", " << f.modal << ", " << f.upper << ')';
  return os.str();
}

inline std::string to_string(const TrapezoidalInterval& f) {
  std::ostringstream os;
  os << '[' << f.left << ", " << f.right << " ~" << f.spread << ']';
  return os.str();
}

inline TriangularFuzzyNumber make_tfn(double l, double m, double u) {
  TriangularFuzzyNumber f{l, m, u};
  if (!f.valid()) {
    throw FuzzyInvariantError("triangular fuzzy number requires lower <= modal <= upper, got " +
                              to_string(f));
  }
  return f;
}

inline TrapezoidalInterval make_interval(double left, double right, double spread = 0.0) {
  TrapezoidalInterval f{left, right, spread};
  if (!f.valid()) {
    throw FuzzyInvariantError("trapezoidal interval requires left <= right and spread >= 0, got " +
                              to_string(f));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Membership

inline double membership(const TriangularFuzzyNumber& f, double x) {
  if (x == f.modal) return 1.0;
  if (x <= f.lower || x >= f.upper) return 0.0;
  if (x < f.modal) return (x - f.lower) / (f.modal - f.lower);
  return (f.upper - x) / (f.upper - f.modal);
}

inline double membership(const TrapezoidalInterval& f, double x) {
  if (x >= f.left && x <= f.right) return 1.0;
  if (f.spread <= 0.0) return 0.0;
  if (x < f.left) {
    double d = f.left - x;
    return d >= f.spread ? 0.0 : 1.0 - d / f.spread;
  }
  double d = x - f.right;
  return d >= f.spread ? 0.0 : 1.0 - d / f.spread;
}

// ---------------------------------------------------------------------------
// Arithmetic. Only the operations the models need: sums of fuzzy
// coefficients and multiplication by crisp scalars.

inline TriangularFuzzyNumber tfn_add(const TriangularFuzzyNumber& a, const TriangularFuzzyNumber& b) {
  return {a.lower + b.lower, a.modal + b.modal, a.upper + b.upper};
}

inline TriangularFuzzyNumber tfn_scale(double c, const TriangularFuzzyNumber& a) {
  if (c >= 0.0) return {c * a.lower, c * a.modal, c * a.upper};
  return {c * a.upper, c * a.modal, c * a.lower};
}

inline TriangularFuzzyNumber operator+(const TriangularFuzzyNumber& a, const TriangularFuzzyNumber& b) {
  return tfn_add(a, b);
}
inline TriangularFuzzyNumber operator*(double c, const TriangularFuzzyNumber& a) { return tfn_scale(c, a); }
inline TriangularFuzzyNumber& operator+=(TriangularFuzzyNumber& a, const TriangularFuzzyNumber& b) {
  a = tfn_add(a, b);
  return a;
}

// ---------------------------------------------------------------------------
// Ranking

enum class RankingMethod { Centroid, ModalValue };
enum class TieBreak { ByModal, ByLower };

struct RankingFunction {
  RankingMethod method = RankingMethod::Centroid;
  TieBreak tie_break = TieBreak::ByLower;

  bool operator==(const RankingFunction&) const = default;
};

inline std::string_view to_string(RankingMethod m) {
  return m == RankingMethod::Centroid ? "centroid" : "modal";
}

inline RankingMethod parse_ranking_method(std::string_view s) {
  if (s == "centroid") return RankingMethod::Centroid;
  if (s == "modal") return RankingMethod::ModalValue;
  throw std::invalid_argument("unknown ranking method '" + std::string(s) + "' (expected centroid|modal)");
}

inline double rank(const TriangularFuzzyNumber& f, const RankingFunction& r = {}) {
  if (r.method == RankingMethod::ModalValue) return f.modal;
  return (f.lower + f.modal + f.upper) / 3.0;
}

// Shoulders are symmetric, so the area centroid coincides with the midpoint
// of the core for both methods.
inline double rank(const TrapezoidalInterval& f, const RankingFunction& /*r*/ = {}) {
  return 0.5 * (f.left + f.right);
}

/// Total order: rank first, then the tie-break key, then the remaining
/// endpoints lexicographically.
inline std::strong_ordering compare(const TriangularFuzzyNumber& a, const TriangularFuzzyNumber& b,
                                    const RankingFunction& r = {}) {
  auto three_way = [](double x, double y) {
    return x < y ? std::strong_ordering::less
                 : (y < x ? std::strong_ordering::greater : std::strong_ordering::equal);
  };
  if (auto c = three_way(rank(a, r), rank(b, r)); c != 0) return c;
  if (r.tie_break == TieBreak::ByLower) {
    if (auto c = three_way(a.lower, b.lower); c != 0) return c;
    if (auto c = three_way(a.modal, b.modal); c != 0) return c;
  } else {
    if (auto c = three_way(a.modal, b.modal); c != 0) return c;
    if (auto c = three_way(a.lower, b.lower); c != 0) return c;
  }
  return three_way(a.upper, b.upper);
}

inline std::strong_ordering compare(const TrapezoidalInterval& a, const TrapezoidalInterval& b,
                                    const RankingFunction& r = {}) {
  auto three_way = [](double x, double y) {
    return x < y ? std::strong_ordering::less
                 : (y < x ? std::strong_ordering::greater : std::strong_ordering::equal);
  };
  if (auto c = three_way(rank(a, r), rank(b, r)); c != 0) return c;
  if (auto c = three_way(a.left, b.left); c != 0) return c;
  if (auto c = three_way(a.right, b.right); c != 0) return c;
  return three_way(a.spread, b.spread);
}

}  // namespace fuzzy_ettp
