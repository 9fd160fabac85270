#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "polyreg/linalg.hpp"
#include "polyreg/rational.hpp"

namespace polyreg {

enum class Relation { LessEqual, Equal, Less };

/// coeffs . x  (<=, =, <)  rhs
struct LinearConstraint {
  RatVector coeffs;
  Rational rhs;
  Relation rel = Relation::LessEqual;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  RatVector x;     // optimal point when status == Optimal
  Rational value;  // optimal objective value when status == Optimal
};

namespace detail {

/// Dense simplex tableau over the rationals. All columns are nonnegative
/// variables; the last column holds the right-hand side and the last row the
/// reduced costs of a maximization problem.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), a_((rows + 1) * (cols + 1), Rational(0)), basis_(rows) {}

  Rational& at(std::size_t i, std::size_t j) { return a_[i * (n_ + 1) + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return a_[i * (n_ + 1) + j]; }
  Rational& rhs(std::size_t i) { return at(i, n_); }
  Rational& cost(std::size_t j) { return at(m_, j); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    Rational inv = 1 / at(r, c);
    nonzero_.clear();
    for (std::size_t j = 0; j <= n_; ++j)
      if (at(r, j) != 0) {
        at(r, j) *= inv;
        nonzero_.push_back(j);
      }
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r || at(i, c) == 0) continue;
      Rational f = at(i, c);
      for (std::size_t j : nonzero_) at(i, j) -= f * at(r, j);
    }
    basis_[r] = c;
  }

  /// Sets the cost row to -objective and prices out the current basis.
  void set_objective(const std::vector<Rational>& objective) {
    for (std::size_t j = 0; j <= n_; ++j) cost(j) = j < n_ ? Rational(-objective[j]) : Rational(0);
    for (std::size_t i = 0; i < m_; ++i) {
      Rational f = cost(basis_[i]);
      if (f == 0) continue;
      for (std::size_t j = 0; j <= n_; ++j)
        if (at(i, j) != 0) cost(j) -= f * at(i, j);
    }
  }

  /// Runs Bland's-rule simplex; `allowed[j]` masks columns that may enter.
  /// Returns false when the problem is unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (allowed[j] && cost(j) < 0) {
          enter = j;
          break;
        }
      if (enter == n_) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (at(i, enter) <= 0) continue;
        Rational ratio = rhs(i) / at(i, enter);
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  void drop_row(std::size_t r) {
    std::vector<Rational> b;
    b.reserve((m_) * (n_ + 1));
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      for (std::size_t j = 0; j <= n_; ++j) b.push_back(at(i, j));
    }
    a_ = std::move(b);
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<Rational> a_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nonzero_;
};

}  // namespace detail

/// Maximizes objective . x over non-strict constraints with x free.
/// Exact two-phase simplex with Bland's anti-cycling rule.
inline LpResult maximize(const RatVector& objective, const std::vector<LinearConstraint>& constraints, std::size_t n) {
  if (objective.size() != n) throw UsageError("maximize: objective has wrong dimension");
  const std::size_t m = constraints.size();
  std::size_t slack_count = 0;
  for (const auto& c : constraints) {
    if (c.coeffs.size() != n) throw UsageError("maximize: constraint has wrong dimension");
    if (c.rel == Relation::Less) throw UsageError("maximize: strict constraints are not supported");
    if (c.rel == Relation::LessEqual) ++slack_count;
  }
  // Columns: x+ (n), x- (n), slacks, artificials (one per row).
  const std::size_t slack0 = 2 * n;
  const std::size_t art0 = slack0 + slack_count;
  const std::size_t cols = art0 + m;
  detail::Tableau t(m, cols);
  std::size_t s = slack0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = constraints[i];
    const bool flip = c.rhs < 0;
    const Rational mult = flip ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (c.coeffs[j] == 0) continue;
      t.at(i, j) = mult * c.coeffs[j];
      t.at(i, n + j) = -mult * c.coeffs[j];
    }
    t.rhs(i) = mult * c.rhs;
    if (c.rel == Relation::LessEqual) {
      t.at(i, s) = mult;
      if (!flip) {
        t.basis()[i] = s;
        ++s;
        continue;
      }
      ++s;
    }
    t.at(i, art0 + i) = 1;
    t.basis()[i] = art0 + i;
  }

  std::vector<Rational> phase1(cols, Rational(0));
  bool any_artificial = false;
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis()[i] >= art0) {
      phase1[t.basis()[i]] = -1;
      any_artificial = true;
    }
  std::vector<bool> allowed(cols, true);
  if (any_artificial) {
    t.set_objective(phase1);
    t.optimize(allowed);
    if (t.cost(cols) != 0) return {LpStatus::Infeasible, {}, 0};
    // Drive artificials out of the basis; drop rows that are redundant.
    for (std::size_t i = 0; i < t.rows();) {
      if (t.basis()[i] < art0) {
        ++i;
        continue;
      }
      std::size_t c = art0;
      for (std::size_t j = 0; j < art0; ++j)
        if (t.at(i, j) != 0) {
          c = j;
          break;
        }
      if (c == art0) {
        t.drop_row(i);
      } else {
        t.pivot(i, c);
        ++i;
      }
    }
  }
  for (std::size_t j = art0; j < cols; ++j) allowed[j] = false;

  std::vector<Rational> phase2(cols, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    phase2[j] = objective[j];
    phase2[n + j] = -objective[j];
  }
  t.set_objective(phase2);
  if (!t.optimize(allowed)) return {LpStatus::Unbounded, {}, 0};

  LpResult result;
  result.status = LpStatus::Optimal;
  result.x = zeros(n);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    std::size_t b = t.basis()[i];
    if (b < n)
      result.x[b] += t.rhs(i);
    else if (b < 2 * n)
      result.x[b - n] -= t.rhs(i);
  }
  result.value = t.cost(cols);
  return result;
}

/// Finds an exact point satisfying every constraint, strict ones strictly.
/// Strict constraints share a slack t in [0, 1] that is maximized; the
/// system is feasible iff the optimal slack is positive.
inline std::optional<RatVector> lp_feasible(const std::vector<LinearConstraint>& constraints, std::size_t n) {
  bool has_strict = false;
  for (const auto& c : constraints) {
    if (c.coeffs.size() != n) throw UsageError("lp_feasible: constraint has wrong dimension");
    has_strict = has_strict || c.rel == Relation::Less;
  }
  if (!has_strict) {
    LpResult r = maximize(zeros(n), constraints, n);
    if (r.status != LpStatus::Optimal) return std::nullopt;
    return r.x;
  }
  std::vector<LinearConstraint> lifted;
  lifted.reserve(constraints.size() + 2);
  for (const auto& c : constraints) {
    LinearConstraint l{c.coeffs, c.rhs, c.rel == Relation::Equal ? Relation::Equal : Relation::LessEqual};
    l.coeffs.push_back(c.rel == Relation::Less ? Rational(1) : Rational(0));
    lifted.push_back(std::move(l));
  }
  RatVector cap = unit_vector(n + 1, n);
  lifted.push_back({cap, 1, Relation::LessEqual});
  lifted.push_back({-cap, 0, Relation::LessEqual});
  LpResult r = maximize(unit_vector(n + 1, n), lifted, n + 1);
  if (r.status != LpStatus::Optimal || r.value <= 0) return std::nullopt;
  r.x.pop_back();
  return r.x;
}

/// Exact check of a constraint set at a point.
inline bool satisfies(const std::vector<LinearConstraint>& constraints, const RatVector& x) {
  for (const auto& c : constraints) {
    Rational v = dot(c.coeffs, x);
    switch (c.rel) {
      case Relation::LessEqual:
        if (v > c.rhs) return false;
        break;
      case Relation::Equal:
        if (v != c.rhs) return false;
        break;
      case Relation::Less:
        if (v >= c.rhs) return false;
        break;
    }
  }
  return true;
}

}  // namespace polyreg
