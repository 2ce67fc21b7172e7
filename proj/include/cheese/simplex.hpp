#pragma once

// Dense two-phase simplex over exact rationals with Bland's rule, so it
// terminates on degenerate problems. Sized for probe problems (tens of rows,
// hundreds of columns), not for production LP.

#include <optional>
#include <vector>

#include "cheese/rational.hpp"

namespace cheese {

enum class Sense { le, ge, eq };

/// maximize objective . x  subject to  rows[i] . x (sense[i]) rhs[i],  x >= 0.
struct LinearProgram {
  std::vector<std::vector<QRational>> rows;
  std::vector<Sense> sense;
  std::vector<QRational> rhs;
  std::vector<QRational> objective;

  void add(std::vector<QRational> row, Sense s, QRational b) {
    rows.push_back(std::move(row));
    sense.push_back(s);
    rhs.push_back(std::move(b));
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  QRational value;
  std::vector<QRational> x;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : t_(rows, std::vector<QRational>(cols + 1)), basis_(rows), cols_(cols) {}

  QRational& at(std::size_t i, std::size_t j) { return t_[i][j]; }
  QRational& rhs(std::size_t i) { return t_[i][cols_]; }
  std::size_t& basis(std::size_t i) { return basis_[i]; }
  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    QRational inv = 1 / t_[r][c];
    for (auto& v : t_[r]) v *= inv;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r || sgn(t_[i][c]) == 0) continue;
      QRational f = t_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (sgn(t_[r][j]) != 0) t_[i][j] -= f * t_[r][j];
    }
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<long>(r));
    basis_.erase(basis_.begin() + static_cast<long>(r));
  }

  /// Maximizes cost . x over columns with allowed[j]; false if unbounded.
  bool optimize(const std::vector<QRational>& cost, const std::vector<bool>& allowed) {
    while (true) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < cols_ && !enter; ++j) {
        if (!allowed[j]) continue;
        QRational red = cost[j];
        for (std::size_t i = 0; i < t_.size(); ++i)
          if (sgn(t_[i][j]) != 0) red -= cost[basis_[i]] * t_[i][j];
        if (red > 0) enter = j;
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      QRational best;
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (t_[i][*enter] <= 0) continue;
        QRational ratio = t_[i][cols_] / t_[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

  QRational value(const std::vector<QRational>& cost) const {
    QRational v;
    for (std::size_t i = 0; i < t_.size(); ++i) v += cost[basis_[i]] * t_[i][cols_];
    return v;
  }

 private:
  std::vector<std::vector<QRational>> t_;
  std::vector<std::size_t> basis_;
  std::size_t cols_;
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) {
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.objective.size();
  if (lp.sense.size() != m || lp.rhs.size() != m)
    throw Error(ErrorKind::invalid_input, "linear program: row metadata size mismatch");
  for (const auto& r : lp.rows)
    if (r.size() != n) throw Error(ErrorKind::invalid_input, "linear program: row width mismatch");

  // Normalize to rhs >= 0.
  std::vector<std::vector<QRational>> a = lp.rows;
  std::vector<QRational> b = lp.rhs;
  std::vector<Sense> sense = lp.sense;
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0) {
      for (auto& v : a[i]) v = -v;
      b[i] = -b[i];
      if (sense[i] == Sense::le) sense[i] = Sense::ge;
      else if (sense[i] == Sense::ge) sense[i] = Sense::le;
    }

  std::size_t slack_count = 0, art_count = 0;
  for (auto s : sense) {
    if (s != Sense::eq) ++slack_count;
    if (s != Sense::le) ++art_count;
  }
  const std::size_t cols = n + slack_count + art_count;
  const std::size_t art_begin = n + slack_count;
  detail::Tableau tab(m, cols);
  std::size_t next_slack = n, next_art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = a[i][j];
    tab.rhs(i) = b[i];
    if (sense[i] == Sense::le) {
      tab.at(i, next_slack) = 1;
      tab.basis(i) = next_slack++;
    } else {
      if (sense[i] == Sense::ge) tab.at(i, next_slack++) = -1;
      tab.at(i, next_art) = 1;
      tab.basis(i) = next_art++;
    }
  }

  LpSolution sol;
  std::vector<bool> allowed(cols, true);
  if (art_count > 0) {
    std::vector<QRational> phase1(cols);
    for (std::size_t j = art_begin; j < cols; ++j) phase1[j] = -1;
    tab.optimize(phase1, allowed);
    if (tab.value(phase1) < 0) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    for (std::size_t i = 0; i < tab.rows();) {
      if (tab.basis(i) < art_begin) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < art_begin && !col; ++j)
        if (sgn(tab.at(i, j)) != 0) col = j;
      if (col) {
        tab.pivot(i, *col);
        ++i;
      } else {
        tab.drop_row(i);
      }
    }
    for (std::size_t j = art_begin; j < cols; ++j) allowed[j] = false;
  }

  std::vector<QRational> cost(cols);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective[j];
  if (!tab.optimize(cost, allowed)) {
    sol.status = LpStatus::unbounded;
    return sol;
  }
  sol.status = LpStatus::optimal;
  sol.value = tab.value(cost);
  sol.x.assign(n, QRational(0));
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.basis(i) < n) sol.x[tab.basis(i)] = tab.rhs(i);
  return sol;
}

}  // namespace cheese
