#include "bisectlp/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "bisectlp/error.hpp"

namespace bisectlp {

NullspaceResult nullspace_rank(const DenseMatrix& m, int cols) {
  const int rows = static_cast<int>(m.size());
  DenseMatrix r = m;
  double scale = 0.0;
  for (const auto& row : r) {
    if (static_cast<int>(row.size()) != cols) throw ConfigError("nullspace: ragged matrix");
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  const double eps = 1e-10 * std::max(scale, 1e-300);
  std::vector<int> pivot_col;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int best = -1;
    double best_abs = eps;
    for (int i = rank; i < rows; ++i) {
      if (std::abs(r[i][c]) > best_abs) {
        best_abs = std::abs(r[i][c]);
        best = i;
      }
    }
    if (best < 0) continue;
    std::swap(r[rank], r[best]);
    const double inv = 1.0 / r[rank][c];
    for (int k = c; k < cols; ++k) r[rank][k] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == rank) continue;
      const double f = r[i][c];
      if (std::abs(f) <= 0.0) continue;
      for (int k = c; k < cols; ++k) r[i][k] -= f * r[rank][k];
      r[i][c] = 0.0;
    }
    pivot_col.push_back(c);
    ++rank;
  }
  NullspaceResult out;
  out.rank = rank;
  std::vector<char> is_pivot(cols, 0);
  for (int c : pivot_col) is_pivot[c] = 1;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<double> v(cols, 0.0);
    v[f] = 1.0;
    for (int i = 0; i < rank; ++i) v[pivot_col[i]] = -r[i][f];
    out.basis.push_back(std::move(v));
  }
  return out;
}

namespace {

std::vector<double> densify(const SparseVec& row, int cols) {
  std::vector<double> d(cols, 0.0);
  for (const auto& e : row) d[e.index] += e.value;
  return d;
}

SparseVec sparsify(const std::vector<double>& row) {
  SparseVec s;
  for (int j = 0; j < static_cast<int>(row.size()); ++j)
    if (row[j] != 0.0) s.push_back({j, row[j]});
  return s;
}

}  // namespace

ConeResult cone_has_nonzero(const std::vector<SparseVec>& a, const std::vector<SparseVec>& ck,
                            const std::vector<SparseVec>& cl, int cols, double tol) {
  DenseMatrix stacked;
  stacked.reserve(a.size() + ck.size() + cl.size());
  for (const auto* block : {&a, &ck, &cl})
    for (const auto& row : *block) stacked.push_back(densify(row, cols));
  auto ns = nullspace_rank(stacked, cols);
  ConeResult res;
  if (!ns.basis.empty()) {
    res.nonzero = true;
    res.witness = ns.basis.front();
    return res;
  }
  if (cl.empty()) return res;

  LpTolerances lt;
  SimplexSolver lp(cols, lt);
  std::vector<double> c(cols, 0.0);
  for (int j = 0; j < cols; ++j) lp.set_var_bounds(j, -kInf, kInf);
  for (const auto& row : cl)
    for (const auto& e : row) c[e.index] -= e.value;
  lp.set_objective(c);
  for (const auto& row : a) lp.add_row(row, 0.0, 0.0);
  for (const auto& row : ck) lp.add_row(row, 0.0, 0.0);
  for (const auto& row : cl) lp.add_row(row, 0.0, 1.0);
  const auto st = lp.solve();
  if (st != LpStatus::Optimal) {
    throw SolverError(std::string("cone check: auxiliary LP ended ") + to_string(st));
  }
  if (-lp.objective() > tol) {
    res.nonzero = true;
    res.witness = lp.primal();
  }
  return res;
}

ConeResult cone_has_nonzero(const DenseMatrix& a, const DenseMatrix& ck, const DenseMatrix& cl,
                            int cols, double tol) {
  auto conv = [cols](const DenseMatrix& m) {
    std::vector<SparseVec> out;
    for (const auto& row : m) {
      if (static_cast<int>(row.size()) != cols) throw ConfigError("cone check: ragged matrix");
      out.push_back(sparsify(row));
    }
    return out;
  };
  return cone_has_nonzero(conv(a), conv(ck), conv(cl), cols, tol);
}

}  // namespace bisectlp
