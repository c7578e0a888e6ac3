#include "bisectlp/metric_lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "bisectlp/error.hpp"

namespace bisectlp {

std::size_t pair_index(int i, int j, int n) {
  if (i == j) throw ConfigError("pair_index: i == j");
  if (i > j) std::swap(i, j);
  const auto si = static_cast<std::size_t>(i);
  return si * (2 * static_cast<std::size_t>(n) - si - 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

double CutVector::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

CutVector cut_vector(const Bisection& b) {
  const int n = b.size();
  CutVector x{n, std::vector<double>(num_pairs(n), 0.0)};
  std::size_t p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++p) x.values[p] = b.same_side(i, j) ? 0.0 : 1.0;
  return x;
}

std::uint64_t TriangleRow::key(int n) const {
  const auto un = static_cast<std::uint64_t>(n);
  return ((static_cast<std::uint64_t>(i) * un + j) * un + k) * 4 + kind;
}

SparseVec TriangleRow::coefficients(int n) const {
  const int ij = static_cast<int>(pair_index(i, j, n));
  const int ik = static_cast<int>(pair_index(i, k, n));
  const int jk = static_cast<int>(pair_index(j, k, n));
  switch (kind) {
    case 0: return {{ij, 1.0}, {ik, -1.0}, {jk, -1.0}};
    case 1: return {{ij, -1.0}, {ik, 1.0}, {jk, -1.0}};
    case 2: return {{ij, -1.0}, {ik, -1.0}, {jk, 1.0}};
    default: return {{ij, 1.0}, {ik, 1.0}, {jk, 1.0}};
  }
}

double TriangleRow::lhs_minus_rhs(const CutVector& x) const {
  const double a = x.at(i, j), b = x.at(i, k), c = x.at(j, k);
  switch (kind) {
    case 0: return a - b - c;
    case 1: return b - a - c;
    case 2: return c - a - b;
    default: return a + b + c - 2.0;
  }
}

std::vector<TriangleRow> separate_triangles(const CutVector& x, double tol, std::size_t max_new) {
  const int n = x.n;
  std::vector<TriangleRow> found;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double a = x.at(i, j);
      const std::size_t base_i = pair_index(i, j, n) - (j - i - 1);  // index of (i, i+1)
      const std::size_t base_j = j + 1 < n ? pair_index(j, j + 1, n) : 0;
      for (int k = j + 1; k < n; ++k) {
        const double b = x.values[base_i + (k - i - 1)];
        const double c = x.values[base_j + (k - j - 1)];
        const double v[4] = {a - b - c, b - a - c, c - a - b, a + b + c - 2.0};
        for (int kind = 0; kind < 4; ++kind)
          if (v[kind] > tol) found.push_back({i, j, k, kind, v[kind]});
      }
    }
  }
  const auto order = [n](const TriangleRow& p, const TriangleRow& q) {
    if (p.violation != q.violation) return p.violation > q.violation;
    return p.key(n) < q.key(n);
  };
  if (found.size() > max_new) {
    std::partial_sort(found.begin(), found.begin() + static_cast<std::ptrdiff_t>(max_new), found.end(), order);
    found.resize(max_new);
  } else {
    std::sort(found.begin(), found.end(), order);
  }
  return found;
}

namespace {

// The working LP: row 0 is the balance row; triangle rows follow, possibly
// interleaved with other pinned rows (tag < 0).
struct WorkingLp {
  int n;
  SimplexSolver lp;
  std::vector<TriangleRow> info;  // parallel to LP rows
  std::vector<int> tag;           // 1 = triangle row, -1 = pinned
  std::vector<int> idle;
  std::unordered_set<std::uint64_t> keys;
  std::unordered_set<std::uint64_t> dropped;

  WorkingLp(int nodes, const LpTolerances& tol)
      : n(nodes), lp(static_cast<int>(num_pairs(nodes)), tol) {
    const int m = static_cast<int>(num_pairs(n));
    for (int p = 0; p < m; ++p) lp.set_var_bounds(p, 0.0, 1.0);
    SparseVec ones(m);
    for (int p = 0; p < m; ++p) ones[p] = {p, 1.0};
    const double half = static_cast<double>(n) * n / 4.0;
    add_pinned(std::move(ones), half, half);
  }

  void add_pinned(SparseVec row, double lo, double hi) {
    lp.add_row(std::move(row), lo, hi);
    info.push_back({});
    tag.push_back(-1);
    idle.push_back(0);
  }

  bool add_triangle(const TriangleRow& r) {
    if (!keys.insert(r.key(n)).second) return false;
    lp.add_row(r.coefficients(n), -kInf, r.rhs());
    info.push_back(r);
    tag.push_back(1);
    idle.push_back(0);
    return true;
  }

  CutVector point() const { return {n, lp.primal()}; }

  void drop_idle(const MetricLpOptions& opts) {
    std::vector<int> gone;
    for (int r = 0; r < lp.num_rows(); ++r) {
      if (tag[r] < 0) continue;
      const double slack = info[r].rhs() - lp.row_activity(r);
      // A row that comes back after being dropped stays for good.
      if (slack > opts.drop_slack && lp.row_is_basic(r) && !dropped.count(info[r].key(n))) {
        if (++idle[r] >= opts.drop_after) gone.push_back(r);
      } else {
        idle[r] = 0;
      }
    }
    if (gone.empty()) return;
    lp.remove_rows(gone);
    std::size_t g = 0, next = 0;
    for (std::size_t r = 0; r < info.size(); ++r) {
      if (g < gone.size() && static_cast<std::size_t>(gone[g]) == r) {
        keys.erase(info[r].key(n));
        dropped.insert(info[r].key(n));
        ++g;
        continue;
      }
      info[next] = info[r];
      tag[next] = tag[r];
      idle[next] = idle[r];
      ++next;
    }
    info.resize(next);
    tag.resize(next);
    idle.resize(next);
  }

  // Solve / separate until no triangle row is violated.
  LpStatus cut_loop(const MetricLpOptions& opts, int& rounds, std::size_t& added) {
    while (true) {
      if (rounds >= opts.max_rounds) {
        throw SolverError("metric LP: separation did not converge within " +
                          std::to_string(opts.max_rounds) + " rounds");
      }
      const LpStatus st = lp.solve();
      ++rounds;
      if (st != LpStatus::Optimal) return st;
      auto violated = separate_triangles(point(), opts.separation_tol, opts.batch);
      std::size_t fresh = 0;
      for (const auto& r : violated) fresh += keys.count(r.key(n)) ? 0 : 1;
      if (fresh == 0) return LpStatus::Optimal;
      drop_idle(opts);
      if (fresh * 20 < opts.batch) violated = with_tight_neighbours(std::move(violated), opts.batch);
      for (const auto& r : violated) added += add_triangle(r) ? 1 : 0;
    }
  }

  // Few violated rows usually means the LP is hopping between alternative
  // optima; rows that are tight on triples sharing a pair with a violated
  // row are the likely next offenders, so add them up front.
  std::vector<TriangleRow> with_tight_neighbours(std::vector<TriangleRow> rows, std::size_t cap) const {
    const CutVector x = point();
    std::unordered_set<std::uint64_t> seen;
    for (const auto& r : rows) seen.insert(r.key(n));
    const std::size_t base = rows.size();
    for (std::size_t v = 0; v < base && rows.size() < cap; ++v) {
      const int tri[3] = {rows[v].i, rows[v].j, rows[v].k};
      for (int e = 0; e < 3; ++e) {
        const int a = tri[e == 2 ? 1 : 0], b = tri[e == 0 ? 1 : 2];
        for (int l = 0; l < n && rows.size() < cap; ++l) {
          if (l == a || l == b) continue;
          int t[3] = {a, b, l};
          std::sort(t, t + 3);
          for (int kind = 0; kind < 4; ++kind) {
            TriangleRow cand{t[0], t[1], t[2], kind, 0.0};
            const double viol = cand.lhs_minus_rhs(x);
            if (viol < -1e-9) continue;
            const auto key = cand.key(n);
            if (keys.count(key) || !seen.insert(key).second) continue;
            cand.violation = viol;
            rows.push_back(cand);
          }
        }
      }
    }
    return rows;
  }

  std::vector<TriangleRow> triangle_rows() const {
    std::vector<TriangleRow> out;
    for (std::size_t r = 0; r < info.size(); ++r)
      if (tag[r] > 0) out.push_back(info[r]);
    return out;
  }
};

std::vector<double> objective_of(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<double> c(num_pairs(n), 0.0);
  for (const auto& e : g.edges()) c[pair_index(e.u, e.v, n)] = 1.0;
  return c;
}

}  // namespace

MetricSolveReport solve_metric_lp(const Graph& g, const MetricLpOptions& opts) {
  const int n = g.num_nodes();
  if (n < 4 || n % 2 != 0) throw ConfigError("metric LP: n must be even and >= 4");
  WorkingLp w(n, opts.lp);
  w.lp.set_objective(objective_of(g));
  MetricSolveReport rep;
  rep.status = w.cut_loop(opts, rep.rounds, rep.constraints_added);
  if (rep.status != LpStatus::Optimal) {
    throw SolverError(std::string("metric LP: solver reported ") + to_string(rep.status));
  }
  rep.solution = w.point();
  rep.objective = w.lp.objective();
  rep.iterations = w.lp.iterations();
  rep.rows = w.triangle_rows();
  rep.basis = w.lp.basis();
  rep.reduced_costs = w.lp.reduced_costs();
  rep.row_duals = w.lp.row_duals();
  return rep;
}

ProbeResult uniqueness_probe(const Graph& g, const MetricSolveReport& report,
                             const CutVector& planted, const MetricLpOptions& opts) {
  const int n = g.num_nodes();
  if (report.status != LpStatus::Optimal) throw ConfigError("probe: main solve is not optimal");
  if (planted.n != n) throw ConfigError("probe: planted vector has the wrong size");
  const auto c = objective_of(g);
  double planted_value = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p) planted_value += c[p] * planted.values[p];

  ProbeResult res;
  if (std::abs(report.objective - planted_value) > opts.objective_tol * (1.0 + std::abs(planted_value))) {
    res.error = "planted vector is not optimal: relaxation value " + std::to_string(report.objective) +
                " vs planted value " + std::to_string(planted_value);
    return res;
  }
  res.planted_optimal = true;

  WorkingLp w(n, opts.lp);
  w.lp.set_objective(c);
  for (const auto& r : report.rows) w.add_triangle(r);
  w.lp.set_basis(report.basis);
  for (std::size_t p = 0; p < report.reduced_costs.size(); ++p) {
    const double d = report.reduced_costs[p];
    if (d > opts.face_fix_tol) w.lp.set_var_bounds(static_cast<int>(p), 0.0, 0.0);
    if (d < -opts.face_fix_tol) w.lp.set_var_bounds(static_cast<int>(p), 1.0, 1.0);
  }
  for (std::size_t r = 1; r < report.row_duals.size() && r < w.info.size(); ++r) {
    if (std::abs(report.row_duals[r]) > opts.face_fix_tol) {
      const double rhs = w.info[r].rhs();
      w.lp.set_row_bounds(static_cast<int>(r), rhs, rhs);
    }
  }

  SparseVec pin;
  for (std::size_t p = 0; p < c.size(); ++p)
    if (c[p] != 0.0) pin.push_back({static_cast<int>(p), c[p]});
  w.add_pinned(std::move(pin), -kInf, planted_value);

  std::vector<double> dev(c.size());
  for (std::size_t p = 0; p < c.size(); ++p) dev[p] = 2.0 * planted.values[p] - 1.0;
  w.lp.set_objective(std::move(dev));
  std::size_t added = 0;
  const LpStatus st = w.cut_loop(opts, res.rounds, added);
  if (st != LpStatus::Optimal) {
    throw SolverError(std::string("probe: solver reported ") + to_string(st));
  }
  res.argmax = w.point();
  for (std::size_t p = 0; p < c.size(); ++p) res.delta += std::abs(res.argmax.values[p] - planted.values[p]);
  return res;
}

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Recovered: return "recovered";
    case VerdictKind::AlternateOptimum: return "alternate_optimum";
    case VerdictKind::FractionalOptimum: return "fractional_optimum";
  }
  return "?";
}

RecoveryVerdict lp_recovery_verdict(const PlantedInstance& inst, const MetricLpOptions& opts) {
  const int n = inst.num_nodes();
  const auto rep = solve_metric_lp(inst.graph, opts);
  RecoveryVerdict v;
  v.lp_value = rep.objective;
  v.planted_value = static_cast<double>(inst.num_cross_edges());
  v.rounds = rep.rounds;
  v.constraints_added = rep.constraints_added;
  const double tol = opts.objective_tol * (1.0 + v.planted_value);
  if (rep.objective > v.planted_value + tol) {
    throw SolverError("metric LP: relaxation value exceeds the planted cut value");
  }
  v.objective_match = rep.objective >= v.planted_value - tol;
  if (!v.objective_match) {
    v.kind = VerdictKind::FractionalOptimum;
    v.witness = rep.solution;
    return v;
  }
  if (!opts.probe) {
    v.kind = VerdictKind::Recovered;
    return v;
  }
  const auto planted = cut_vector(inst.planted);
  auto probe = uniqueness_probe(inst.graph, rep, planted, opts);
  if (!probe.planted_optimal) throw SolverError("probe: " + probe.error);
  v.delta = probe.delta;
  v.rounds += probe.rounds;
  if (probe.delta <= opts.probe_tol * static_cast<double>(n) * n) {
    v.kind = VerdictKind::Recovered;
  } else {
    v.kind = VerdictKind::AlternateOptimum;
    v.witness = std::move(probe.argmax);
  }
  return v;
}

}  // namespace bisectlp
