#pragma once

// Brute-force reference for tiny LPs: enumerates every basic solution of the
// box-bounded system and keeps the best feasible one.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "bisectlp/lp.hpp"

namespace testing {

inline bisectlp::LpProblem random_small_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvar(1, 6), nrow(0, 8), coef(-3, 3), cost(-5, 5);
  bisectlp::LpProblem p;
  const int n = nvar(rng), m = nrow(rng);
  p.c.resize(n);
  for (auto& c : p.c) c = cost(rng);
  std::uniform_int_distribution<int> lo(-2, 1), width(0, 3), eq_pick(0, 4);
  p.lo.resize(n);
  p.hi.resize(n);
  std::vector<double> point(n);
  for (int j = 0; j < n; ++j) {
    p.lo[j] = lo(rng);
    p.hi[j] = p.lo[j] + width(rng);
    point[j] = p.lo[j] + (p.hi[j] - p.lo[j]) * std::uniform_real_distribution<double>(0, 1)(rng);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<double> row(n);
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      row[j] = coef(rng);
      act += row[j] * point[j];
    }
    if (eq_pick(rng) == 0) {
      // Integer rhs: sometimes infeasible, often degenerate.
      p.eq.push_back(row);
      p.eq_rhs.push_back(std::round(act));
    } else {
      p.ineq.push_back(row);
      p.ineq_rhs.push_back(std::floor(act) + (eq_pick(rng) == 0 ? -2 : 0));
    }
  }
  return p;
}

inline bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                         std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-10) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

/// Optimal objective, or nullopt when infeasible. Requires finite bounds.
inline std::optional<double> enumerate_vertices(const bisectlp::LpProblem& p) {
  const int n = static_cast<int>(p.c.size());
  // Candidate active constraints: all rows plus both bounds of every variable.
  // A vertex is fixed by n linearly independent active constraints.
  std::vector<std::vector<double>> rows(p.eq.begin(), p.eq.end());
  std::vector<double> rhs(p.eq_rhs.begin(), p.eq_rhs.end());
  for (std::size_t i = 0; i < p.ineq.size(); ++i) {
    rows.push_back(p.ineq[i]);
    rhs.push_back(p.ineq_rhs[i]);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    rows.push_back(e);
    rhs.push_back(p.lo[j]);
    rows.push_back(e);
    rhs.push_back(p.hi[j]);
  }
  auto feasible = [&](const std::vector<double>& x) {
    const double tol = 1e-9;
    for (int j = 0; j < n; ++j)
      if (x[j] < p.lo[j] - tol || x[j] > p.hi[j] + tol) return false;
    for (std::size_t i = 0; i < p.eq.size(); ++i) {
      double a = 0;
      for (int j = 0; j < n; ++j) a += p.eq[i][j] * x[j];
      if (std::abs(a - p.eq_rhs[i]) > tol) return false;
    }
    for (std::size_t i = 0; i < p.ineq.size(); ++i) {
      double a = 0;
      for (int j = 0; j < n; ++j) a += p.ineq[i][j] * x[j];
      if (a > p.ineq_rhs[i] + tol) return false;
    }
    return true;
  };
  const int total = static_cast<int>(rows.size());
  std::optional<double> best;
  std::vector<int> pick(total, 0);
  std::fill(pick.end() - n, pick.end(), 1);
  do {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int i = 0; i < total; ++i)
      if (pick[i]) {
        a.push_back(rows[i]);
        b.push_back(rhs[i]);
      }
    std::vector<double> x;
    if (solve_square(a, b, x) && feasible(x)) {
      double z = 0;
      for (int j = 0; j < n; ++j) z += p.c[j] * x[j];
      if (!best || z < *best) best = z;
    }
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace testing
