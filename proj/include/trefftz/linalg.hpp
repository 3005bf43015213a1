#pragma once

#include <stdexcept>
#include <vector>

#include "trefftz/geometry.hpp"

namespace trefftz {

// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }
  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }

  CMatrix adjoint() const;
  std::vector<cplx> apply(const std::vector<cplx>& x) const;        // A x
  std::vector<cplx> apply_adjoint(const std::vector<cplx>& x) const;  // A^H x
  double max_abs() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> a_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);

// Thrown when Gaussian elimination hits an exactly singular pivot.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(int pivot, const std::string& msg)
      : std::runtime_error(msg), pivot_index(pivot) {}
  int pivot_index;
};

struct SolveReport {
  std::vector<cplx> solution;
  double residual_norm = 0.0;  // ||A x - b||_2 / max(||b||_2, tiny)
  double cond2 = 1.0;          // spectral condition estimate (see lu_solve)
  int rank_used = 0;
};

// LU factorization with partial pivoting.  cond2 in the report is a
// power/inverse-iteration estimate reusing the factorization; svd_cond gives
// the exact value.  Throws SingularMatrixError on an exactly singular pivot.
SolveReport lu_solve(const CMatrix& a, const std::vector<cplx>& b);

struct SVD {
  CMatrix u;                   // m x r
  std::vector<double> sigma;   // descending, length r = min(m, n)
  CMatrix v;                   // n x r
};

// Full SVD by one-sided Jacobi orthogonalization (accurate small singular
// values).  cond2 = sigma_max / sigma_min (inf when sigma_min == 0).
SVD svd(const CMatrix& a);
double svd_cond(const CMatrix& a);

// Minimal-norm least-squares solution through the truncated SVD: directions
// with sigma < rel_threshold * sigma_max are dropped.  rank_used reports the
// retained count.
SolveReport truncated_svd_solve(const CMatrix& a, const std::vector<cplx>& b,
                                double rel_threshold);

// Block-diagonal congruence preconditioner from per-block Hermitian
// positive-definite Gram matrices: with G_k = L_k L_k^H, the transformed
// unknowns satisfy (T^H A T) ct = T^H b, T = blockdiag(L_k^{-H}), and
// apply(ct) maps back to the original coefficients.  Throws
// std::runtime_error when a block is not positive definite.
class BlockOrthoTransform {
 public:
  BlockOrthoTransform(std::vector<CMatrix> cholesky_factors,
                      std::vector<int> offsets)
      : l_(std::move(cholesky_factors)), offsets_(std::move(offsets)) {}
  std::vector<cplx> apply(const std::vector<cplx>& coeffs_t) const;
  CMatrix transform_matrix(const CMatrix& a) const;      // T^H A T
  std::vector<cplx> transform_rhs(const std::vector<cplx>& b) const;  // T^H b

 private:
  std::vector<CMatrix> l_;  // lower Cholesky factor per block
  std::vector<int> offsets_;
};

BlockOrthoTransform local_orthonormalize(const std::vector<CMatrix>& grams);

// Lower Cholesky factor of a Hermitian positive-definite matrix.
CMatrix cholesky(const CMatrix& g);

}  // namespace trefftz
