#pragma once

#include <vector>

#include "bisectlp/lp.hpp"

namespace bisectlp {

using DenseMatrix = std::vector<std::vector<double>>;

struct NullspaceResult {
  int rank = 0;
  /// Kernel basis: one vector per free column of the
  /// reduced row echelon form.
  std::vector<std::vector<double>> basis;
};

/// Rank and kernel basis by Gauss-Jordan elimination with partial pivoting;
/// entries below 1e-10 * max|entry| count as zero. `cols` is needed when the
/// matrix has no rows.
NullspaceResult nullspace_rank(const DenseMatrix& m, int cols);

struct ConeResult {
  bool nonzero = false;
  /// A nonzero x with A x = 0, C_K x = 0, C_L x >= 0 when one exists.
  std::vector<double> witness;
};

/// Decides whether {x : A x = 0, C_K x = 0, C_L x >= 0} contains a nonzero
/// point. First checks the kernel of the stacked matrix; if that is trivial,
/// solves max sum(C_L x) over the same system with 0 <= C_L x <= 1.
ConeResult cone_has_nonzero(const DenseMatrix& a, const DenseMatrix& ck, const DenseMatrix& cl,
                            int cols, double tol = 1e-7);

/// Sparse-row variant used by the uniqueness machinery.
ConeResult cone_has_nonzero(const std::vector<SparseVec>& a, const std::vector<SparseVec>& ck,
                            const std::vector<SparseVec>& cl, int cols, double tol = 1e-7);

}  // namespace bisectlp
