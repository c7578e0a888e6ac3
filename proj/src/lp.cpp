#include "bisectlp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bisectlp/error.hpp"

namespace bisectlp {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

SimplexSolver::SimplexSolver(int num_vars, LpTolerances tol) : n_(num_vars), tol_(tol) {
  if (num_vars < 0) throw ConfigError("simplex: negative variable count");
  c_.assign(n_, 0.0);
  cols_.assign(n_, {});
  colpos_.assign(n_, -1);
  for (int j = 0; j < n_; ++j) {
    add_var_slot(0.0, kInf);
    place_nonbasic(j);
  }
}

void SimplexSolver::add_var_slot(double lo, double hi) {
  lo_.push_back(lo);
  hi_.push_back(hi);
  x_.push_back(0.0);
  d_.push_back(0.0);
  status_.push_back(VarStatus::AtLower);
}

void SimplexSolver::place_nonbasic(int v) {
  const bool has_lo = lo_[v] > -kInf, has_hi = hi_[v] < kInf;
  if (has_lo && has_hi) {
    status_[v] = cost(v) < 0 ? VarStatus::AtUpper : VarStatus::AtLower;
  } else if (has_lo) {
    status_[v] = VarStatus::AtLower;
  } else if (has_hi) {
    status_[v] = VarStatus::AtUpper;
  } else {
    status_[v] = VarStatus::Free;
    x_[v] = 0.0;
    return;
  }
  x_[v] = status_[v] == VarStatus::AtLower ? lo_[v] : hi_[v];
}

void SimplexSolver::set_objective(std::vector<double> c) {
  if (static_cast<int>(c.size()) != n_) throw ConfigError("simplex: objective has wrong length");
  c_ = std::move(c);
}

void SimplexSolver::set_var_bounds(int j, double lo, double hi) {
  if (j < 0 || j >= n_) throw ConfigError("simplex: variable index out of range");
  if (!(lo <= hi)) throw ConfigError("simplex: lower bound exceeds upper bound");
  lo_[j] = lo;
  hi_[j] = hi;
  if (status_[j] != VarStatus::Basic) place_nonbasic(j);
  factor_valid_ = false;
}

void SimplexSolver::set_row_bounds(int i, double lo, double hi) {
  if (i < 0 || i >= num_rows()) throw ConfigError("simplex: row index out of range");
  if (!(lo <= hi)) throw ConfigError("simplex: row lower bound exceeds upper bound");
  lo_[n_ + i] = lo;
  hi_[n_ + i] = hi;
  if (status_[n_ + i] != VarStatus::Basic) place_nonbasic(n_ + i);
  factor_valid_ = false;
}

int SimplexSolver::add_row(SparseVec row, double lo, double hi) {
  if (!(lo <= hi)) throw ConfigError("simplex: row lower bound exceeds upper bound");
  std::sort(row.begin(), row.end(), [](auto& a, auto& b) { return a.index < b.index; });
  SparseVec merged;
  for (const auto& e : row) {
    if (e.index < 0 || e.index >= n_) throw ConfigError("simplex: row references unknown variable");
    if (!merged.empty() && merged.back().index == e.index) {
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const SparseEntry& e) { return e.value == 0.0; });

  const int i = num_rows();
  double activity = 0.0;
  for (const auto& e : merged) {
    cols_[e.index].push_back({i, e.value});
    activity += e.value * x_[e.index];
  }
  rows_.push_back(std::move(merged));
  add_var_slot(lo, hi);
  status_.back() = VarStatus::Basic;
  x_.back() = activity;
  rowpos_.push_back(-1);
  return i;
}

void SimplexSolver::remove_rows(std::vector<int> rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  if (rows.empty()) return;
  const int m = num_rows();
  std::vector<char> drop(m, 0);
  for (int i : rows) {
    if (i < 0 || i >= m) throw ConfigError("simplex: row index out of range");
    if (!row_is_basic(i)) throw SolverError("simplex: cannot remove a row whose logical is nonbasic");
    drop[i] = 1;
  }
  std::vector<int> renum(m, -1);
  int next = 0;
  for (int i = 0; i < m; ++i) {
    if (drop[i]) continue;
    renum[i] = next;
    if (next == i) {
      ++next;
      continue;
    }
    const int from = n_ + i, to = n_ + next;
    rows_[next] = std::move(rows_[i]);
    lo_[to] = lo_[from];
    hi_[to] = hi_[from];
    x_[to] = x_[from];
    d_[to] = d_[from];
    status_[to] = status_[from];
    rowpos_[next] = rowpos_[i];
    ++next;
  }
  rows_.resize(next);
  lo_.resize(n_ + next);
  hi_.resize(n_ + next);
  x_.resize(n_ + next);
  d_.resize(n_ + next);
  status_.resize(n_ + next);
  rowpos_.resize(next);
  for (auto& r : rpos_) r = renum[r];
  for (auto& col : cols_) col.clear();
  for (int i = 0; i < next; ++i)
    for (const auto& e : rows_[i]) cols_[e.index].push_back({i, e.value});
}

void SimplexSolver::ensure_stride(int k) {
  if (k <= kstride_) return;
  const int stride = std::max({k, 2 * kstride_, 8});
  std::vector<double> fresh(static_cast<std::size_t>(stride) * stride, 0.0);
  for (int t = 0; t < kdim_; ++t)
    for (int a = 0; a < kdim_; ++a) fresh[static_cast<std::size_t>(t) * stride + a] = kinv(t, a);
  kinv_ = std::move(fresh);
  kstride_ = stride;
}

void SimplexSolver::reset_to_slack_basis() {
  for (int j = 0; j < n_; ++j) {
    colpos_[j] = -1;
    place_nonbasic(j);
  }
  for (int i = 0; i < num_rows(); ++i) {
    status_[n_ + i] = VarStatus::Basic;
    rowpos_[i] = -1;
  }
  spos_.clear();
  rpos_.clear();
  kdim_ = 0;
  factor_valid_ = false;
}

Basis SimplexSolver::basis() const { return Basis{status_}; }

void SimplexSolver::set_basis(const Basis& b) {
  const int m = num_rows();
  if (static_cast<int>(b.status.size()) != n_ + m) {
    reset_to_slack_basis();
    return;
  }
  int basic_struct = 0, nonbasic_logical = 0;
  for (int j = 0; j < n_; ++j) basic_struct += b.status[j] == VarStatus::Basic;
  for (int i = 0; i < m; ++i) nonbasic_logical += b.status[n_ + i] != VarStatus::Basic;
  if (basic_struct != nonbasic_logical) {
    reset_to_slack_basis();
    return;
  }
  spos_.clear();
  rpos_.clear();
  for (int v = 0; v < n_ + m; ++v) {
    status_[v] = b.status[v];
    if (status_[v] == VarStatus::Basic) {
      if (v < n_) {
        colpos_[v] = static_cast<int>(spos_.size());
        spos_.push_back(v);
      } else {
        rowpos_[v - n_] = -1;
      }
      continue;
    }
    if (v < n_) colpos_[v] = -1;
    else {
      rowpos_[v - n_] = static_cast<int>(rpos_.size());
      rpos_.push_back(v - n_);
    }
    const bool ok = (status_[v] == VarStatus::AtLower && lo_[v] > -kInf) ||
                    (status_[v] == VarStatus::AtUpper && hi_[v] < kInf) ||
                    (status_[v] == VarStatus::Free && lo_[v] == -kInf && hi_[v] == kInf);
    if (!ok) {
      place_nonbasic(v);
    } else if (status_[v] != VarStatus::Free) {
      x_[v] = status_[v] == VarStatus::AtLower ? lo_[v] : hi_[v];
    }
  }
  kdim_ = 0;
  factor_valid_ = false;
}

// Gauss-Jordan inversion of K = A[R, S] with partial pivoting. Columns that
// turn out dependent are swapped for the logicals of the unpivoted rows.
void SimplexSolver::refactor() {
  const int k = static_cast<int>(spos_.size());
  const auto idx = [k](int r, int c) { return static_cast<std::size_t>(r) * k + c; };
  std::vector<double> mat(static_cast<std::size_t>(k) * k, 0.0);
  std::vector<double> inv(static_cast<std::size_t>(k) * k, 0.0);
  double scale = 1.0;
  for (int a = 0; a < k; ++a) {
    for (const auto& e : rows_[rpos_[a]]) {
      const int t = colpos_[e.index];
      if (t >= 0) {
        mat[idx(a, t)] = e.value;
        scale = std::max(scale, std::abs(e.value));
      }
    }
    inv[idx(a, a)] = 1.0;
  }
  std::vector<int> prow(k, -1);
  std::vector<char> used(k, 0);
  std::vector<int> dependent;
  for (int t = 0; t < k; ++t) {
    int r = -1;
    double best = 0.0;
    for (int a = 0; a < k; ++a) {
      if (!used[a] && std::abs(mat[idx(a, t)]) > best) {
        best = std::abs(mat[idx(a, t)]);
        r = a;
      }
    }
    if (best <= 1e-11 * scale) {
      dependent.push_back(t);
      continue;
    }
    used[r] = 1;
    prow[t] = r;
    const double piv = 1.0 / mat[idx(r, t)];
    for (int c = t; c < k; ++c) mat[idx(r, c)] *= piv;
    for (int c = 0; c < k; ++c) inv[idx(r, c)] *= piv;
    for (int a = 0; a < k; ++a) {
      if (a == r) continue;
      const double f = mat[idx(a, t)];
      if (f == 0.0) continue;
      for (int c = t; c < k; ++c) mat[idx(a, c)] -= f * mat[idx(r, c)];
      for (int c = 0; c < k; ++c) inv[idx(a, c)] -= f * inv[idx(r, c)];
    }
  }

  if (!dependent.empty()) {
    for (int t : dependent) {
      const int j = spos_[t];
      colpos_[j] = -1;
      const bool has_lo = lo_[j] > -kInf, has_hi = hi_[j] < kInf;
      if (has_lo && (!has_hi || x_[j] - lo_[j] <= hi_[j] - x_[j])) {
        status_[j] = VarStatus::AtLower;
        x_[j] = lo_[j];
      } else if (has_hi) {
        status_[j] = VarStatus::AtUpper;
        x_[j] = hi_[j];
      } else {
        status_[j] = VarStatus::Free;
      }
      spos_[t] = -1;
    }
    for (int a = 0; a < k; ++a) {
      if (used[a]) continue;
      const int r = rpos_[a];
      status_[n_ + r] = VarStatus::Basic;
      rowpos_[r] = -1;
      rpos_[a] = -1;
    }
    std::erase(spos_, -1);
    std::erase(rpos_, -1);
    for (int t = 0; t < static_cast<int>(spos_.size()); ++t) colpos_[spos_[t]] = t;
    for (int a = 0; a < static_cast<int>(rpos_.size()); ++a) rowpos_[rpos_[a]] = a;
    refactor();
    return;
  }

  kdim_ = 0;
  ensure_stride(k);
  kdim_ = k;
  for (int t = 0; t < k; ++t)
    std::copy_n(&inv[idx(prow[t], 0)], k, &kinv(t, 0));
  factor_valid_ = true;
  updates_since_refactor_ = 0;
  compute_basic_values();
}

void SimplexSolver::compute_basic_values() {
  const int k = kdim_;
  std::vector<double> rhs(k);
  for (int a = 0; a < k; ++a) {
    const int r = rpos_[a];
    double v = x_[n_ + r];
    for (const auto& e : rows_[r])
      if (colpos_[e.index] < 0) v -= e.value * x_[e.index];
    rhs[a] = v;
  }
  for (int t = 0; t < k; ++t) {
    double v = 0.0;
    for (int a = 0; a < k; ++a) v += kinv(t, a) * rhs[a];
    x_[spos_[t]] = v;
  }
  for (int i = 0; i < num_rows(); ++i) {
    if (rowpos_[i] >= 0) continue;
    double v = 0.0;
    for (const auto& e : rows_[i]) v += e.value * x_[e.index];
    x_[n_ + i] = v;
  }
}

void SimplexSolver::compute_duals() {
  const int k = kdim_;
  const int m = num_rows();
  const bool shifted = !shift_.empty();
  // Effective structural costs; a cost on a basic logical folds into the
  // structurals of its row.
  std::vector<double> ce(n_);
  for (int j = 0; j < n_; ++j) ce[j] = (zero_cost_mode_ ? 0.0 : c_[j]) + (shifted ? shift_[j] : 0.0);
  if (shifted) {
    for (int i = 0; i < m; ++i) {
      const double cs = shift_[n_ + i];
      if (cs == 0.0 || rowpos_[i] >= 0) continue;
      for (const auto& e : rows_[i]) ce[e.index] += cs * e.value;
    }
  }
  std::vector<double> y(k, 0.0);
  for (int t = 0; t < k; ++t) {
    const double ct = ce[spos_[t]];
    if (ct == 0.0) continue;
    for (int a = 0; a < k; ++a) y[a] += kinv(t, a) * ct;
  }
  for (int v = 0; v < n_ + m; ++v) {
    if (status_[v] == VarStatus::Basic) {
      d_[v] = 0.0;
    } else if (v < n_) {
      double dv = ce[v];
      for (const auto& e : cols_[v]) {
        const int a = rowpos_[e.index];
        if (a >= 0) dv -= y[a] * e.value;
      }
      d_[v] = dv;
    } else {
      d_[v] = y[rowpos_[v - n_]] + (shifted ? shift_[v] : 0.0);
    }
  }
}

bool SimplexSolver::dual_infeasible(int v, double d) const {
  switch (status_[v]) {
    case VarStatus::Basic: return false;
    case VarStatus::AtLower: return lo_[v] < hi_[v] && d < -tol_.dual;
    case VarStatus::AtUpper: return lo_[v] < hi_[v] && d > tol_.dual;
    case VarStatus::Free: return std::abs(d) > tol_.dual;
  }
  return false;
}

double SimplexSolver::primal_infeasibility(int v) const {
  const double lo_gap = lo_[v] - x_[v];
  const double hi_gap = x_[v] - hi_[v];
  const double gap = std::max(lo_gap, hi_gap);
  if (gap <= 0.0) return 0.0;
  const double bound = lo_gap > 0 ? lo_[v] : hi_[v];
  return gap > tol_.primal * (1.0 + std::abs(bound)) ? gap : 0.0;
}

bool SimplexSolver::primal_feasible() const {
  for (int v = 0; v < n_ + num_rows(); ++v)
    if (status_[v] == VarStatus::Basic && primal_infeasibility(v) > 0.0) return false;
  return true;
}

bool SimplexSolver::dual_feasible() const {
  for (int v = 0; v < n_ + num_rows(); ++v)
    if (dual_infeasible(v, d_[v])) return false;
  return true;
}

void SimplexSolver::ftran(const std::vector<SparseEntry>& moves, std::vector<double>& out_s,
                          std::vector<double>& out_l) const {
  const int k = kdim_;
  std::vector<double> g(k, 0.0);
  out_l.assign(num_rows(), 0.0);
  for (const auto& mv : moves) {
    if (mv.index < n_) {
      for (const auto& e : cols_[mv.index]) {
        const int a = rowpos_[e.index];
        if (a >= 0) g[a] -= mv.value * e.value;
        else out_l[e.index] += mv.value * e.value;
      }
    } else {
      g[rowpos_[mv.index - n_]] += mv.value;
    }
  }
  std::vector<int> nz;
  for (int a = 0; a < k; ++a)
    if (g[a] != 0.0) nz.push_back(a);
  out_s.assign(k, 0.0);
  for (int t = 0; t < k; ++t) {
    double v = 0.0;
    for (int a : nz) v += kinv(t, a) * g[a];
    out_s[t] = v;
    if (v == 0.0) continue;
    for (const auto& e : cols_[spos_[t]])
      if (rowpos_[e.index] < 0) out_l[e.index] += e.value * v;
  }
}

void SimplexSolver::tableau_row(int p) {
  const int k = kdim_;
  rho_.assign(k, 0.0);
  alpha_.assign(n_ + num_rows(), 0.0);
  if (p < n_) {
    const int t = colpos_[p];
    for (int a = 0; a < k; ++a) rho_[a] = kinv(t, a);
  } else {
    const int l = p - n_;
    for (const auto& e : rows_[l]) {
      const int t = colpos_[e.index];
      if (t < 0) continue;
      for (int a = 0; a < k; ++a) rho_[a] += e.value * kinv(t, a);
    }
    for (const auto& e : rows_[l]) alpha_[e.index] += e.value;
  }
  for (int a = 0; a < k; ++a) {
    const double r = rho_[a];
    if (r == 0.0) continue;
    for (const auto& e : rows_[rpos_[a]]) alpha_[e.index] -= r * e.value;
    alpha_[n_ + rpos_[a]] = r;
  }
}

void SimplexSolver::apply_step(double theta, const std::vector<double>& ws,
                               const std::vector<double>& wl) {
  if (theta == 0.0) return;
  for (int t = 0; t < kdim_; ++t) x_[spos_[t]] += theta * ws[t];
  for (int i = 0; i < num_rows(); ++i)
    if (rowpos_[i] < 0) x_[n_ + i] += theta * wl[i];
}

// Updates K^-1 and the index maps for entering q, leaving p. ws is the unit
// response of the S part to q; rho_ must hold the tableau row of p.
void SimplexSolver::pivot(int q, int p, const std::vector<double>& ws, VarStatus leave_status) {
  const int k = kdim_;
  const bool q_struct = q < n_, p_struct = p < n_;
  if (q_struct && p_struct) {
    const int t = colpos_[p];
    const double piv = -ws[t];
    for (int a = 0; a < k; ++a) kinv(t, a) /= piv;
    for (int i = 0; i < k; ++i) {
      if (i == t) continue;
      const double f = -ws[i];
      if (f == 0.0) continue;
      for (int a = 0; a < k; ++a) kinv(i, a) -= f * kinv(t, a);
    }
    spos_[t] = q;
    colpos_[q] = t;
    colpos_[p] = -1;
  } else if (q_struct) {
    const int l = p - n_;
    double s = 0.0;
    for (const auto& e : rows_[l]) {
      const int t = colpos_[e.index];
      if (e.index == q) s += e.value;
      if (t >= 0) s += e.value * ws[t];
    }
    ensure_stride(k + 1);
    for (int t = 0; t < k; ++t) {
      const double g = -ws[t] / s;
      if (g != 0.0)
        for (int a = 0; a < k; ++a) kinv(t, a) += g * rho_[a];
      kinv(t, k) = ws[t] / s;
    }
    for (int a = 0; a < k; ++a) kinv(k, a) = -rho_[a] / s;
    kinv(k, k) = 1.0 / s;
    kdim_ = k + 1;
    spos_.push_back(q);
    colpos_[q] = k;
    rpos_.push_back(l);
    rowpos_[l] = k;
  } else if (p_struct) {
    const int r = q - n_;
    const int a = rowpos_[r];
    const int t = colpos_[p];
    const double piv = kinv(t, a);
    for (int i = 0; i < k; ++i) {
      if (i == t) continue;
      const double f = kinv(i, a) / piv;
      if (f == 0.0) continue;
      for (int b = 0; b < k; ++b) kinv(i, b) -= f * kinv(t, b);
    }
    const int last = k - 1;
    if (t != last)
      for (int b = 0; b < k; ++b) kinv(t, b) = kinv(last, b);
    if (a != last)
      for (int i = 0; i < last; ++i) kinv(i, a) = kinv(i, last);
    colpos_[p] = -1;
    rowpos_[r] = -1;
    spos_[t] = spos_[last];
    spos_.pop_back();
    if (t != last) colpos_[spos_[t]] = t;
    rpos_[a] = rpos_[last];
    rpos_.pop_back();
    if (a != last) rowpos_[rpos_[a]] = a;
    kdim_ = last;
  } else {
    const int r = q - n_;
    const int a = rowpos_[r];
    const int l = p - n_;
    const double za = rho_[a];
    std::vector<double> scaled(k);
    for (int b = 0; b < k; ++b) scaled[b] = rho_[b] / za;
    scaled[a] = 0.0;
    for (int t = 0; t < k; ++t) {
      const double ct = kinv(t, a);
      if (ct == 0.0) continue;
      double* row = &kinv(t, 0);
      for (int b = 0; b < k; ++b) row[b] -= ct * scaled[b];
      row[a] = ct / za;
    }
    rpos_[a] = l;
    rowpos_[l] = a;
    rowpos_[r] = -1;
  }
  status_[q] = VarStatus::Basic;
  status_[p] = leave_status;
  ++updates_since_refactor_;
}

void SimplexSolver::count_iteration(double progress) {
  if (++iterations_ > tol_.max_iterations) {
    throw SolverError("simplex: iteration limit " + std::to_string(tol_.max_iterations) +
                      " exceeded");
  }
  if (best_obj_ == -kInf || progress > best_obj_ + 1e-12 * (1.0 + std::abs(best_obj_))) {
    best_obj_ = progress;
    stall_ = 0;
  } else if (++stall_ > tol_.stall_limit) {
    bland_ = true;
  }
}

// Small deterministic shifts that push every nonbasic reduced cost further
// into its feasible sign; breaks the ties that make degenerate LPs stall.
void SimplexSolver::perturb_costs(double scale) {
  const int total = n_ + num_rows();
  shift_.resize(total, 0.0);
  std::uint64_t h = 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(scale * 1e9);
  for (int v = 0; v < total; ++v) {
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 29;
    if (status_[v] == VarStatus::Basic || status_[v] == VarStatus::Free) continue;
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    const double mag = scale * (1.0 + std::abs(zero_cost_mode_ ? 0.0 : cost(v))) * (1.0 + u);
    shift_[v] += status_[v] == VarStatus::AtUpper ? -mag : mag;
  }
}

LpStatus SimplexSolver::dual_loop(bool zero_cost) {
  zero_cost_mode_ = zero_cost;
  best_obj_ = -kInf;
  stall_ = 0;
  bland_ = false;
  double scale = 5e-7;
  perturb_costs(scale);
  struct Unshift {
    std::vector<double>& s;
    ~Unshift() { s.clear(); }
  } unshift{shift_};
  compute_duals();
  std::vector<double> ws, wl, fs, fl;
  struct Cand {
    int v;
    double ratio;
    double abs_alpha;
  };
  std::vector<Cand> cands;
  std::vector<double> weight(n_ + num_rows(), 1.0);
  double gain = 0.0;
  while (true) {
    if (!factor_valid_ || updates_since_refactor_ >= refactor_interval()) {
      refactor();
      compute_duals();
    }
    // Dual Devex pricing: infeasibility squared over the reference weight.
    int p = -1;
    double worst = 0.0, score = 0.0;
    for (int v = 0; v < n_ + num_rows(); ++v) {
      if (status_[v] != VarStatus::Basic) continue;
      const double inf = primal_infeasibility(v);
      if (inf <= 0.0) continue;
      const double sc = inf * inf / weight[v];
      if (sc > score) {
        score = sc;
        worst = inf;
        p = v;
        if (bland_) break;
      }
    }
    if (p < 0) return LpStatus::Optimal;

    const bool below = x_[p] < lo_[p];
    const double target = below ? lo_[p] : hi_[p];
    tableau_row(p);

    cands.clear();
    for (int v = 0; v < n_ + num_rows(); ++v) {
      const VarStatus st = status_[v];
      if (st == VarStatus::Basic || lo_[v] == hi_[v]) continue;
      const double a = alpha_[v];
      if (std::abs(a) <= tol_.pivot) continue;
      double slack;
      if (st == VarStatus::AtLower) {
        if ((a > 0) != below) continue;
        slack = d_[v];
      } else if (st == VarStatus::AtUpper) {
        if ((a < 0) != below) continue;
        slack = -d_[v];
      } else {
        slack = std::abs(d_[v]);
      }
      cands.push_back({v, std::max(0.0, slack) / std::abs(a), std::abs(a)});
    }
    if (cands.empty()) {
      if (updates_since_refactor_ > 0) {
        factor_valid_ = false;
        continue;
      }
      return LpStatus::Infeasible;
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
      return x.ratio != y.ratio ? x.ratio < y.ratio : x.v < y.v;
    });

    // Bound flipping: pass breakpoints of boxed variables while the
    // primal infeasibility of p stays positive.
    std::size_t first = 0;
    double slope = std::abs(target - x_[p]);
    if (!bland_) {
      while (first < cands.size()) {
        const int v = cands[first].v;
        if (!is_boxed(v)) break;
        const double dec = cands[first].abs_alpha * (hi_[v] - lo_[v]);
        if (slope - dec <= tol_.primal) break;
        slope -= dec;
        ++first;
      }
      if (first == cands.size()) {
        if (updates_since_refactor_ > 0) {
          factor_valid_ = false;
          continue;
        }
        return LpStatus::Infeasible;
      }
    }

    // Harris: among breakpoints reachable with a dual tolerance, take the
    // largest pivot.
    std::size_t pick = first;
    if (!bland_) {
      double bound = kInf;
      for (std::size_t c = first; c < cands.size(); ++c) {
        const Cand& cd = cands[c];
        const double slack = cd.ratio * cd.abs_alpha;
        bound = std::min(bound, (slack + tol_.dual) / cd.abs_alpha);
      }
      for (std::size_t c = first; c < cands.size(); ++c) {
        if (cands[c].ratio > bound) break;
        if (cands[c].abs_alpha > cands[pick].abs_alpha) pick = c;
      }
    }
    const int q = cands[pick].v;
    // A Harris pick may sit slightly on the wrong side; shift its cost so
    // the step never moves the dual objective backwards.
    if ((status_[q] == VarStatus::AtLower && d_[q] < 0.0) ||
        (status_[q] == VarStatus::AtUpper && d_[q] > 0.0)) {
      shift_[q] -= d_[q];
      d_[q] = 0.0;
    }

    if (first > 0) {
      std::vector<SparseEntry> moves;
      for (std::size_t c = 0; c < first; ++c) {
        const int v = cands[c].v;
        if (status_[v] == VarStatus::AtLower) {
          moves.push_back({v, hi_[v] - lo_[v]});
          status_[v] = VarStatus::AtUpper;
          x_[v] = hi_[v];
        } else {
          moves.push_back({v, lo_[v] - hi_[v]});
          status_[v] = VarStatus::AtLower;
          x_[v] = lo_[v];
        }
      }
      ftran(moves, fs, fl);
      apply_step(1.0, fs, fl);
    }

    ftran({{q, 1.0}}, ws, wl);
    const double wp = p < n_ ? ws[colpos_[p]] : wl[p - n_];
    const double aq = alpha_[q];
    if (std::abs(wp - aq) > 1e-7 * (1.0 + std::abs(aq)) || std::abs(wp) <= tol_.pivot * 1e-3) {
      factor_valid_ = false;
      continue;
    }
    const double theta = (target - x_[p]) / wp;
    apply_step(theta, ws, wl);
    {
      const double wref = weight[p];
      for (int t = 0; t < kdim_; ++t) {
        const double r = ws[t] / wp;
        if (r != 0.0) weight[spos_[t]] = std::max(weight[spos_[t]], r * r * wref);
      }
      for (int i = 0; i < num_rows(); ++i) {
        if (rowpos_[i] >= 0 || wl[i] == 0.0) continue;
        const double r = wl[i] / wp;
        weight[n_ + i] = std::max(weight[n_ + i], r * r * wref);
      }
      weight[q] = std::max(wref / (wp * wp), 1.0);
    }
    x_[q] += theta;

    const double t = d_[q] / aq;
    if (t != 0.0) {
      for (int v = 0; v < n_ + num_rows(); ++v)
        if (status_[v] != VarStatus::Basic && alpha_[v] != 0.0) d_[v] -= t * alpha_[v];
    }
    pivot(q, p, ws, below ? VarStatus::AtLower : VarStatus::AtUpper);
    x_[p] = target;
    d_[p] = t;
    d_[q] = 0.0;
    // Dual objective gain of this step (perturbed costs included).
    gain += std::abs(t) * worst;
    count_iteration(gain);
    if (bland_ && scale < 1e-4) {
      // Stalled: strengthen the perturbation before resorting to Bland.
      scale *= 10.0;
      perturb_costs(scale);
      compute_duals();
      bland_ = false;
      stall_ = 0;
      best_obj_ = -kInf;
    }
  }
}

// Widens the bounds of basic variables by small deterministic amounts for
// the duration of a primal loop; restore() snaps nonbasic values back.
struct SimplexSolver::BoundShift {
  SimplexSolver& s;
  std::vector<int> vars;
  std::vector<double> lo, hi;

  explicit BoundShift(SimplexSolver& solver) : s(solver) {
    std::uint64_t h = 0x2545f4914f6cdd1dULL;
    for (int v = 0; v < s.n_ + s.num_rows(); ++v) {
      if (s.status_[v] != VarStatus::Basic || !(s.lo_[v] < s.hi_[v])) continue;
      h ^= h << 13;
      h ^= h >> 7;
      h ^= h << 17;
      const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
      vars.push_back(v);
      lo.push_back(s.lo_[v]);
      hi.push_back(s.hi_[v]);
      if (s.lo_[v] > -kInf) s.lo_[v] -= 1e-7 * (1.0 + std::abs(s.lo_[v])) * (1.0 + u);
      if (s.hi_[v] < kInf) s.hi_[v] += 1e-7 * (1.0 + std::abs(s.hi_[v])) * (1.0 + u);
    }
  }
  ~BoundShift() {
    bool moved = false;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const int v = vars[i];
      s.lo_[v] = lo[i];
      s.hi_[v] = hi[i];
      if (s.status_[v] == VarStatus::AtLower && s.x_[v] != lo[i]) {
        s.x_[v] = lo[i];
        moved = true;
      } else if (s.status_[v] == VarStatus::AtUpper && s.x_[v] != hi[i]) {
        s.x_[v] = hi[i];
        moved = true;
      }
    }
    if (moved) s.factor_valid_ = false;
  }
};

LpStatus SimplexSolver::primal_loop() {
  zero_cost_mode_ = false;
  best_obj_ = -kInf;
  stall_ = 0;
  bland_ = false;
  BoundShift widen(*this);
  compute_duals();
  std::vector<double> ws, wl;
  std::vector<double> weight(n_ + num_rows(), 1.0);
  while (true) {
    if (!factor_valid_ || updates_since_refactor_ >= refactor_interval()) {
      refactor();
      compute_duals();
    }
    // Primal Devex pricing.
    int q = -1;
    double best = 0.0;
    for (int v = 0; v < n_ + num_rows(); ++v) {
      if (!dual_infeasible(v, d_[v])) continue;
      const double sc = d_[v] * d_[v] / weight[v];
      if (sc > best) {
        best = sc;
        q = v;
        if (bland_) break;
      }
    }
    if (q < 0) return LpStatus::Optimal;
    const double dir = d_[q] < 0 ? 1.0 : -1.0;

    ftran({{q, 1.0}}, ws, wl);
    auto basic_change = [&](int v) { return dir * (v < n_ ? ws[colpos_[v]] : wl[v - n_]); };

    // Harris two-pass ratio test over the basic variables.
    double relaxed = kInf;
    for (int v = 0; v < n_ + num_rows(); ++v) {
      if (status_[v] != VarStatus::Basic) continue;
      const double ch = basic_change(v);
      if (ch > tol_.pivot && hi_[v] < kInf) {
        relaxed = std::min(relaxed, (hi_[v] + tol_.primal - x_[v]) / ch);
      } else if (ch < -tol_.pivot && lo_[v] > -kInf) {
        relaxed = std::min(relaxed, (lo_[v] - tol_.primal - x_[v]) / ch);
      }
    }
    int p = -1;
    double p_ratio = kInf, p_mag = 0.0;
    if (relaxed < kInf) {
      for (int v = 0; v < n_ + num_rows(); ++v) {
        if (status_[v] != VarStatus::Basic) continue;
        const double ch = basic_change(v);
        double ratio;
        if (ch > tol_.pivot && hi_[v] < kInf) {
          ratio = (hi_[v] - x_[v]) / ch;
        } else if (ch < -tol_.pivot && lo_[v] > -kInf) {
          ratio = (lo_[v] - x_[v]) / ch;
        } else {
          continue;
        }
        if (ratio > relaxed) continue;
        const bool better = bland_ ? (p < 0 || ratio < p_ratio) : std::abs(ch) > p_mag;
        if (better) {
          p = v;
          p_ratio = ratio;
          p_mag = std::abs(ch);
        }
      }
    }
    const double range = hi_[q] - lo_[q];
    if (p < 0 && !(range < kInf)) return LpStatus::Unbounded;

    const double theta = std::max(0.0, p_ratio);
    if (p < 0 || range <= theta) {
      apply_step(dir * range, ws, wl);
      if (status_[q] == VarStatus::AtLower) {
        status_[q] = VarStatus::AtUpper;
        x_[q] = hi_[q];
      } else {
        status_[q] = VarStatus::AtLower;
        x_[q] = lo_[q];
      }
      count_iteration(-objective());
      continue;
    }

    tableau_row(p);
    const double aq = alpha_[q];
    const double wp = p < n_ ? ws[colpos_[p]] : wl[p - n_];
    if (std::abs(wp - aq) > 1e-7 * (1.0 + std::abs(aq))) {
      factor_valid_ = false;
      continue;
    }
    const bool to_lower = basic_change(p) < 0;
    {
      const double wq = weight[q];
      for (int v = 0; v < n_ + num_rows(); ++v) {
        if (status_[v] == VarStatus::Basic || alpha_[v] == 0.0 || v == q) continue;
        const double r = alpha_[v] / aq;
        weight[v] = std::max(weight[v], r * r * wq);
      }
      weight[p] = std::max(wq / (aq * aq), 1.0);
    }
    apply_step(dir * theta, ws, wl);
    x_[q] += dir * theta;
    const double t = d_[q] / aq;
    for (int v = 0; v < n_ + num_rows(); ++v)
      if (status_[v] != VarStatus::Basic && alpha_[v] != 0.0) d_[v] -= t * alpha_[v];
    pivot(q, p, ws, to_lower ? VarStatus::AtLower : VarStatus::AtUpper);
    x_[p] = to_lower ? lo_[p] : hi_[p];
    d_[p] = t;
    d_[q] = 0.0;
    count_iteration(-objective());
  }
}

LpStatus SimplexSolver::solve() {
  for (int round = 0; round < 12; ++round) {
    // Adding or removing basic rows leaves the kernel intact, so a warm
    // start can reuse the current inverse.
    if (round == 0 && factor_valid_ && updates_since_refactor_ < refactor_interval()) {
      compute_basic_values();
    } else {
      refactor();
    }
    zero_cost_mode_ = false;
    compute_duals();
    const bool pf = primal_feasible();
    const bool df = dual_feasible();
    if (pf && df) return LpStatus::Optimal;
    if (df) {
      if (dual_loop(false) == LpStatus::Infeasible) return LpStatus::Infeasible;
      continue;
    }
    if (!pf) {
      if (dual_loop(true) == LpStatus::Infeasible) return LpStatus::Infeasible;
    }
    if (primal_loop() == LpStatus::Unbounded) return LpStatus::Unbounded;
  }
  throw SolverError("simplex: no convergence after repeated refactorization");
}

std::vector<double> SimplexSolver::primal() const { return {x_.begin(), x_.begin() + n_}; }

double SimplexSolver::objective() const {
  double z = 0.0;
  for (int j = 0; j < n_; ++j) z += c_[j] * x_[j];
  return z;
}

std::vector<double> SimplexSolver::row_duals() const {
  const int k = kdim_;
  std::vector<double> y(k, 0.0);
  for (int t = 0; t < k; ++t) {
    const double ct = c_[spos_[t]];
    if (ct == 0.0) continue;
    for (int a = 0; a < k; ++a) y[a] += kinv(t, a) * ct;
  }
  std::vector<double> out(num_rows(), 0.0);
  for (int a = 0; a < k; ++a) out[rpos_[a]] = y[a];
  return out;
}

std::vector<double> SimplexSolver::reduced_costs() const {
  const auto y = row_duals();
  std::vector<double> d(c_);
  for (int i = 0; i < num_rows(); ++i) {
    if (y[i] == 0.0) continue;
    for (const auto& e : rows_[i]) d[e.index] -= y[i] * e.value;
  }
  return d;
}

double SimplexSolver::dual_bound() const {
  const auto term = [this](double coef, double lo, double hi) {
    const double b = coef >= 0 ? lo : hi;
    if (std::isinf(b)) return std::abs(coef) <= tol_.dual ? 0.0 : -kInf;
    return coef * b;
  };
  const auto y = row_duals();
  const auto d = reduced_costs();
  double bound = 0.0;
  for (int i = 0; i < num_rows(); ++i) bound += term(y[i], lo_[n_ + i], hi_[n_ + i]);
  for (int j = 0; j < n_; ++j) bound += term(d[j], lo_[j], hi_[j]);
  return bound;
}

LpOutcome solve(const LpProblem& problem, const std::optional<Basis>& warm,
                const LpTolerances& tol) {
  const int n = static_cast<int>(problem.c.size());
  auto check_rows = [n](const std::vector<std::vector<double>>& rows, std::size_t rhs,
                        const char* what) {
    if (rows.size() != rhs) throw ConfigError(std::string("lp: ") + what + " rhs size mismatch");
    for (const auto& r : rows)
      if (static_cast<int>(r.size()) != n) throw ConfigError(std::string("lp: ") + what + " row has wrong length");
  };
  check_rows(problem.eq, problem.eq_rhs.size(), "equality");
  check_rows(problem.ineq, problem.ineq_rhs.size(), "inequality");
  if (!problem.lo.empty() && static_cast<int>(problem.lo.size()) != n)
    throw ConfigError("lp: lower bound vector has wrong length");
  if (!problem.hi.empty() && static_cast<int>(problem.hi.size()) != n)
    throw ConfigError("lp: upper bound vector has wrong length");

  SimplexSolver s(n, tol);
  for (int j = 0; j < n; ++j) {
    const double lo = problem.lo.empty() ? 0.0 : problem.lo[j];
    const double hi = problem.hi.empty() ? kInf : problem.hi[j];
    if (!(lo <= hi)) throw ConfigError("lp: variable " + std::to_string(j) + " has lo > hi");
    s.set_var_bounds(j, lo, hi);
  }
  s.set_objective(problem.c);
  auto sparse = [](const std::vector<double>& dense) {
    SparseVec row;
    for (int j = 0; j < static_cast<int>(dense.size()); ++j)
      if (dense[j] != 0.0) row.push_back({j, dense[j]});
    return row;
  };
  for (std::size_t i = 0; i < problem.eq.size(); ++i)
    s.add_row(sparse(problem.eq[i]), problem.eq_rhs[i], problem.eq_rhs[i]);
  for (std::size_t i = 0; i < problem.ineq.size(); ++i)
    s.add_row(sparse(problem.ineq[i]), -kInf, problem.ineq_rhs[i]);
  if (warm) s.set_basis(*warm);

  LpOutcome out;
  out.status = s.solve();
  out.x = s.primal();
  out.objective = s.objective();
  out.basis = s.basis();
  out.iterations = s.iterations();
  if (out.status == LpStatus::Optimal) out.duality_gap = out.objective - s.dual_bound();
  return out;
}

}  // namespace bisectlp
