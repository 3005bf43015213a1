#include "trefftz/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace trefftz {

namespace {

double vec_norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

CMatrix CMatrix::adjoint() const {
  CMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  }
  return t;
}

std::vector<cplx> CMatrix::apply(const std::vector<cplx>& x) const {
  std::vector<cplx> y(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    cplx s = 0.0;
    const cplx* row = a_.data() + static_cast<std::size_t>(i) * cols_;
    for (int j = 0; j < cols_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<cplx> CMatrix::apply_adjoint(const std::vector<cplx>& x) const {
  std::vector<cplx> y(cols_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    const cplx* row = a_.data() + static_cast<std::size_t>(i) * cols_;
    const cplx xi = std::conj(x[i]);
    for (int j = 0; j < cols_; ++j) y[j] += std::conj(row[j] * xi);
  }
  return y;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& z : a_) m = std::max(m, std::abs(z));
  return m;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("linalg: product shape mismatch");
  CMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int l = 0; l < a.cols(); ++l) {
      const cplx ail = a(i, l);
      if (ail == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
    }
  }
  return c;
}

namespace {

struct LUFactors {
  CMatrix lu;
  std::vector<int> perm;
};

LUFactors lu_factor(CMatrix a) {
  const int n = a.rows();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(a(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) {
      throw SingularMatrixError(
          col, "lu_solve: exactly singular pivot at index " + std::to_string(col));
    }
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(perm[col], perm[piv]);
    }
    const cplx d = a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const cplx f = a(r, col) / d;
      a(r, col) = f;
      if (f == 0.0) continue;
      for (int j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return {std::move(a), std::move(perm)};
}

std::vector<cplx> lu_apply(const LUFactors& f, const std::vector<cplx>& b,
                           bool adjoint = false) {
  const int n = f.lu.rows();
  std::vector<cplx> x(n);
  if (!adjoint) {
    for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (int i = 0; i < n; ++i) {      // L y = P b
      for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    }
    for (int i = n - 1; i >= 0; --i) {  // U x = y
      for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
      x[i] /= f.lu(i, i);
    }
    return x;
  }
  // Solve A^H x = b via U^H z = b, L^H w = z, x = P^T w.
  std::vector<cplx> z = b;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) z[i] -= std::conj(f.lu(j, i)) * z[j];
    z[i] /= std::conj(f.lu(i, i));
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) z[i] -= std::conj(f.lu(j, i)) * z[j];
  }
  for (int i = 0; i < n; ++i) x[f.perm[i]] = z[i];
  return x;
}

// Spectral condition estimate: power iteration for sigma_max(A), inverse
// iteration through the LU factors for sigma_min(A).
double lu_cond_estimate(const CMatrix& a, const LUFactors& f) {
  const int n = a.rows();
  if (n == 0) return 1.0;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx(unit(rng), unit(rng));
  double smax = 0.0;
  for (int it = 0; it < 20; ++it) {
    std::vector<cplx> w = a.apply_adjoint(a.apply(v));
    const double nw = vec_norm(w);
    if (nw == 0.0) break;
    for (auto& z : w) z /= nw;
    smax = std::sqrt(nw);
    v = std::move(w);
  }
  for (auto& z : v) z = cplx(unit(rng), unit(rng));
  double smin_inv = 0.0;
  for (int it = 0; it < 20; ++it) {
    std::vector<cplx> w = lu_apply(f, lu_apply(f, v), true);
    const double nw = vec_norm(w);
    if (nw == 0.0) break;
    for (auto& z : w) z /= nw;
    smin_inv = std::sqrt(nw);
    v = std::move(w);
  }
  if (smin_inv == 0.0) return 1.0;
  return std::max(1.0, smax * smin_inv);
}

}  // namespace

SolveReport lu_solve(const CMatrix& a, const std::vector<cplx>& b) {
  if (a.rows() != a.cols() || a.rows() != static_cast<int>(b.size())) {
    throw std::invalid_argument("lu_solve: square system required");
  }
  const LUFactors f = lu_factor(a);
  SolveReport rep;
  rep.solution = lu_apply(f, b);
  std::vector<cplx> r = a.apply(rep.solution);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  rep.residual_norm = vec_norm(r) / std::max(vec_norm(b), 1e-300);
  rep.cond2 = lu_cond_estimate(a, f);
  rep.rank_used = a.rows();
  return rep;
}

SVD svd(const CMatrix& a) {
  const bool transposed = a.rows() < a.cols();
  CMatrix w = transposed ? a.adjoint() : a;  // m x n with m >= n
  const int m = w.rows(), n = w.cols();
  CMatrix v(n, n);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;

  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        long double app = 0.0L, aqq = 0.0L;
        cplx apq = 0.0;
        for (int i = 0; i < m; ++i) {
          app += std::norm(w(i, p));
          aqq += std::norm(w(i, q));
          apq += std::conj(w(i, p)) * w(i, q);
        }
        const double na = static_cast<double>(app), nb = static_cast<double>(aqq);
        if (std::abs(apq) <= 10.0 * eps * std::sqrt(na * nb) ||
            na == 0.0 || nb == 0.0) {
          continue;
        }
        rotated = true;
        // Phase factor aligning the pair, then a real Jacobi rotation on the
        // 2x2 Gram [[na, |apq|], [|apq|, nb]].
        const cplx phase = apq / std::abs(apq);
        const double zeta = (nb - na) / (2.0 * std::abs(apq));
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (int i = 0; i < m; ++i) {
          const cplx wp = w(i, p);
          const cplx wq = std::conj(phase) * w(i, q);
          w(i, p) = cs * wp - sn * wq;
          w(i, q) = phase * (sn * wp + cs * wq);
        }
        for (int i = 0; i < n; ++i) {
          const cplx vp = v(i, p);
          const cplx vq = std::conj(phase) * v(i, q);
          v(i, p) = cs * vp - sn * vq;
          v(i, q) = phase * (sn * vp + cs * vq);
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sig(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int j = 0; j < n; ++j) {
    long double s = 0.0L;
    for (int i = 0; i < m; ++i) s += std::norm(w(i, j));
    sig[j] = std::sqrt(static_cast<double>(s));
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return sig[x] > sig[y]; });

  SVD out;
  out.sigma.resize(n);
  out.u = CMatrix(m, n);
  out.v = CMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    const int src = order[j];
    out.sigma[j] = sig[src];
    const double inv = sig[src] > 0.0 ? 1.0 / sig[src] : 0.0;
    for (int i = 0; i < m; ++i) out.u(i, j) = w(i, src) * inv;
    for (int i = 0; i < n; ++i) out.v(i, j) = v(i, src);
  }
  if (transposed) std::swap(out.u, out.v);
  return out;
}

double svd_cond(const CMatrix& a) {
  const SVD s = svd(a);
  const double smax = s.sigma.empty() ? 0.0 : s.sigma.front();
  const double smin = s.sigma.empty() ? 0.0 : s.sigma.back();
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

SolveReport truncated_svd_solve(const CMatrix& a, const std::vector<cplx>& b,
                                double rel_threshold) {
  if (a.rows() != static_cast<int>(b.size())) {
    throw std::invalid_argument("truncated_svd_solve: dimension mismatch");
  }
  const SVD s = svd(a);
  const double smax = s.sigma.empty() ? 0.0 : s.sigma.front();
  SolveReport rep;
  rep.solution.assign(a.cols(), 0.0);
  rep.cond2 = smax > 0.0 && s.sigma.back() > 0.0
                  ? smax / s.sigma.back()
                  : std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < s.sigma.size(); ++j) {
    if (s.sigma[j] < rel_threshold * smax || s.sigma[j] == 0.0) continue;
    cplx proj = 0.0;
    for (int i = 0; i < a.rows(); ++i) proj += std::conj(s.u(i, j)) * b[i];
    proj /= s.sigma[j];
    for (int i = 0; i < a.cols(); ++i) {
      rep.solution[i] += s.v(i, static_cast<int>(j)) * proj;
    }
    ++rep.rank_used;
  }
  std::vector<cplx> r = a.apply(rep.solution);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  rep.residual_norm = vec_norm(r) / std::max(vec_norm(b), 1e-300);
  return rep;
}

CMatrix cholesky(const CMatrix& g) {
  const int n = g.rows();
  if (g.cols() != n) throw std::invalid_argument("cholesky: square matrix required");
  CMatrix l(n, n);
  for (int j = 0; j < n; ++j) {
    long double diag = g(j, j).real();
    for (int p = 0; p < j; ++p) diag -= std::norm(l(j, p));
    if (!(diag > 0.0L) || !std::isfinite(static_cast<double>(diag))) {
      throw std::runtime_error(
          "cholesky: matrix is not positive definite at pivot " +
          std::to_string(j));
    }
    const double d = std::sqrt(static_cast<double>(diag));
    l(j, j) = d;
    for (int i = j + 1; i < n; ++i) {
      cplx s = g(i, j);
      for (int p = 0; p < j; ++p) s -= l(i, p) * std::conj(l(j, p));
      l(i, j) = s / d;
    }
  }
  return l;
}

std::vector<cplx> BlockOrthoTransform::apply(const std::vector<cplx>& ct) const {
  // c = T ct blockwise, T_k = L_k^{-H}: solve L_k^H c_k = ct_k.
  std::vector<cplx> c = ct;
  for (std::size_t k = 0; k < l_.size(); ++k) {
    const CMatrix& l = l_[k];
    const int off = offsets_[k], n = l.rows();
    for (int i = n - 1; i >= 0; --i) {
      cplx s = c[off + i];
      for (int j = i + 1; j < n; ++j) s -= std::conj(l(j, i)) * c[off + j];
      c[off + i] = s / std::conj(l(i, i));
    }
  }
  return c;
}

CMatrix BlockOrthoTransform::transform_matrix(const CMatrix& a) const {
  // T^H A T with T = blockdiag(L^{-H}): right-solve columns blockwise, then
  // left-solve rows.
  CMatrix b = a;
  const int n = a.rows();
  for (std::size_t k = 0; k < l_.size(); ++k) {  // B <- B T: solve X L^H = B
    const CMatrix& l = l_[k];
    const int off = offsets_[k], nb = l.rows();
    for (int r = 0; r < n; ++r) {
      for (int i = 0; i < nb; ++i) {
        cplx s = b(r, off + i);
        for (int j = 0; j < i; ++j) s -= b(r, off + j) * std::conj(l(i, j));
        b(r, off + i) = s / std::conj(l(i, i));
      }
    }
  }
  for (std::size_t k = 0; k < l_.size(); ++k) {  // B <- T^H B: solve L X = B
    const CMatrix& l = l_[k];
    const int off = offsets_[k], nb = l.rows();
    for (int c = 0; c < n; ++c) {
      for (int i = 0; i < nb; ++i) {
        cplx s = b(off + i, c);
        for (int j = 0; j < i; ++j) s -= l(i, j) * b(off + j, c);
        b(off + i, c) = s / l(i, i);
      }
    }
  }
  return b;
}

std::vector<cplx> BlockOrthoTransform::transform_rhs(
    const std::vector<cplx>& b) const {
  // y = T^H b blockwise: solve L y = b.
  std::vector<cplx> y = b;
  for (std::size_t k = 0; k < l_.size(); ++k) {
    const CMatrix& l = l_[k];
    const int off = offsets_[k], nb = l.rows();
    for (int i = 0; i < nb; ++i) {
      cplx s = y[off + i];
      for (int j = 0; j < i; ++j) s -= l(i, j) * y[off + j];
      y[off + i] = s / l(i, i);
    }
  }
  return y;
}

BlockOrthoTransform local_orthonormalize(const std::vector<CMatrix>& grams) {
  std::vector<CMatrix> factors;
  std::vector<int> offsets;
  factors.reserve(grams.size());
  int off = 0;
  for (std::size_t k = 0; k < grams.size(); ++k) {
    try {
      factors.push_back(cholesky(grams[k]));
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("local_orthonormalize: block " +
                               std::to_string(k) + ": " + e.what());
    }
    offsets.push_back(off);
    off += grams[k].rows();
  }
  return BlockOrthoTransform(std::move(factors), std::move(offsets));
}

}  // namespace trefftz
