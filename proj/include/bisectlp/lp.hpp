#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace bisectlp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s);

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, Free };

struct LpTolerances {
  double primal = 1e-9;
  double dual = 1e-9;
  /// Smallest admissible pivot magnitude.
  double pivot = 1e-9;
  /// Iterations without objective progress before Bland's rule takes over.
  int stall_limit = 500;
  /// Hard iteration limit; exceeding it raises SolverError.
  long max_iterations = 2'000'000;
  /// Rank-one updates between refactorizations of the basis inverse.
  int refactor_every = 200;
};

struct SparseEntry {
  int index = 0;
  double value = 0.0;
};
using SparseVec = std::vector<SparseEntry>;

/// Basis descriptor: one status per structural followed by one per row logical.
struct Basis {
  std::vector<VarStatus> status;
};

/// Bounded-variable revised simplex (primal and dual) over
///
///   min c.x  s.t.  lo_i <= a_i.x <= hi_i  (rows),  l_j <= x_j <= u_j.
///
/// Every row i carries a logical s_i = a_i.x with bounds [lo_i, hi_i], so
/// equality rows are logicals with lo = hi. Rows may be added and, while
/// their logical is basic, removed between solves; the basis survives both,
/// which is what makes cutting-plane loops cheap.
///
/// The basis inverse is kept implicitly: with S the basic structurals and R
/// the rows whose logicals are nonbasic, the basis matrix is invertible iff
/// the square kernel K = A[R, S] is, and only K^-1 is stored (dense).
class SimplexSolver {
 public:
  explicit SimplexSolver(int num_vars, LpTolerances tol = {});

  int num_vars() const { return n_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  void set_objective(std::vector<double> c);
  const std::vector<double>& objective_coefficients() const { return c_; }
  void set_var_bounds(int j, double lo, double hi);

  /// Appends lo <= row.x <= hi with its logical basic; returns the row id.
  int add_row(SparseVec row, double lo, double hi);
  /// Removes rows whose logicals are basic; surviving rows keep their
  /// relative order and are renumbered. Throws SolverError otherwise.
  void remove_rows(std::vector<int> rows);
  bool row_is_basic(int i) const { return status_[n_ + i] == VarStatus::Basic; }
  const SparseVec& row(int i) const { return rows_[i]; }
  /// Changes the bounds of row i; a nonbasic logical moves to the new bound.
  void set_row_bounds(int i, double lo, double hi);
  double row_lower(int i) const { return lo_[n_ + i]; }
  double row_upper(int i) const { return hi_[n_ + i]; }

  LpStatus solve();

  /// Values of the structural variables at the current basis.
  std::vector<double> primal() const;
  double value(int j) const { return x_[j]; }
  double row_activity(int i) const { return x_[n_ + i]; }
  double objective() const;
  /// Row multipliers y with c = A^T y + d; y_i > 0 marks an active lower
  /// row bound, y_i < 0 an active upper one.
  std::vector<double> row_duals() const;
  std::vector<double> reduced_costs() const;
  /// Lagrangian lower bound built from the current duals; tiny
  /// coefficients facing an infinite bound are clamped to zero.
  double dual_bound() const;

  Basis basis() const;
  /// Installs a basis (e.g. from an earlier solve of a similar problem).
  /// Falls back to the all-logical basis if the counts do not match.
  void set_basis(const Basis& b);

  long iterations() const { return iterations_; }
  const LpTolerances& tolerances() const { return tol_; }

 private:
  struct Step;

  bool is_boxed(int v) const { return lo_[v] > -kInf && hi_[v] < kInf; }
  double cost(int v) const { return v < n_ ? c_[v] : 0.0; }
  void add_var_slot(double lo, double hi);
  void place_nonbasic(int v);
  void reset_to_slack_basis();

  void refactor();
  void compute_basic_values();
  void compute_duals();
  bool dual_infeasible(int v, double d) const;
  double primal_infeasibility(int v) const;
  bool primal_feasible() const;
  bool dual_feasible() const;

  /// Column of the basic variables' response to unit moves of the given
  /// nonbasic variables: out_s over S positions, out_l over rows (L only).
  void ftran(const std::vector<SparseEntry>& moves, std::vector<double>& out_s,
             std::vector<double>& out_l) const;
  /// Row p of the tableau: alpha_[v] for every nonbasic v, with rho_ the
  /// helper vector over R positions.
  void tableau_row(int p);
  void apply_step(double theta, const std::vector<double>& ws, const std::vector<double>& wl);
  void pivot(int q, int p, const std::vector<double>& ws, VarStatus leave_status);

  LpStatus dual_loop(bool zero_cost);
  LpStatus primal_loop();
  struct BoundShift;
  void count_iteration(double obj);

  int n_;
  LpTolerances tol_;
  std::vector<double> c_;
  std::vector<SparseVec> rows_;
  std::vector<std::vector<SparseEntry>> cols_;  // (row, value) per structural

  std::vector<double> lo_, hi_, x_, d_;
  std::vector<VarStatus> status_;

  std::vector<int> spos_;    // S position -> structural
  std::vector<int> colpos_;  // structural -> S position or -1
  std::vector<int> rpos_;    // R position -> row
  std::vector<int> rowpos_;  // row -> R position or -1

  // Dense K^-1, rows indexed by S position, columns by R position.
  std::vector<double> kinv_;
  int kdim_ = 0;
  int kstride_ = 0;
  double& kinv(int t, int a) { return kinv_[static_cast<std::size_t>(t) * kstride_ + a]; }
  double kinv(int t, int a) const { return kinv_[static_cast<std::size_t>(t) * kstride_ + a]; }
  void ensure_stride(int k);
  // A refactor costs O(k^3) against O(k^2) per update; scale the interval.
  int refactor_interval() const { return std::max(tol_.refactor_every, 4 * kdim_); }

  bool factor_valid_ = false;
  int updates_since_refactor_ = 0;
  bool zero_cost_mode_ = false;
  // Cost shifts active during the dual loop; empty when unperturbed.
  std::vector<double> shift_;
  void perturb_costs(double scale);

  std::vector<double> alpha_, rho_;

  long iterations_ = 0;
  double best_obj_ = kInf;
  int stall_ = 0;
  bool bland_ = false;
};

/// Dense problem statement: min c.x s.t. Eq x = eq_rhs, Ineq x <= ineq_rhs,
/// lo <= x <= hi.
struct LpProblem {
  std::vector<double> c;
  std::vector<std::vector<double>> eq;
  std::vector<double> eq_rhs;
  std::vector<std::vector<double>> ineq;
  std::vector<double> ineq_rhs;
  std::vector<double> lo;
  std::vector<double> hi;
};

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// Objective minus the Lagrangian dual bound (Optimal only).
  double duality_gap = 0.0;
  Basis basis;
  long iterations = 0;
};

/// Throws ConfigError on inconsistent dimensions or lo > hi.
LpOutcome solve(const LpProblem& problem, const std::optional<Basis>& warm = std::nullopt,
                const LpTolerances& tol = {});

}  // namespace bisectlp
