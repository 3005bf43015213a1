#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "trefftz/linalg.hpp"

using trefftz::BlockOrthoTransform;
using trefftz::CMatrix;
using trefftz::cplx;
using trefftz::SolveReport;
using trefftz::SVD;

namespace {

CMatrix random_matrix(int m, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(u(rng), u(rng));
  return a;
}

std::vector<cplx> random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> b(n);
  for (auto& x : b) x = cplx(u(rng), u(rng));
  return b;
}

double vec_norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double frob(const CMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("matrix product, adjoint, apply") {
    CMatrix a(2, 3), b(3, 2);
    int v = 1;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = cplx(v++, 1.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) b(i, j) = cplx(0.0, v++);
    const CMatrix c = a * b;
    REQUIRE(c.rows() == 2);
    REQUIRE(c.cols() == 2);
    // Entry (0,0): sum_k a(0,k) b(k,0) with a(0,:) = 1+i,2+i,3+i and
    // b(:,0) = 7i, 9i, 11i -> (1+i)7i + (2+i)9i + (3+i)11i = -27 + 58i.
    CHECK(c(0, 0).real() == doctest::Approx(-27.0).epsilon(1e-15));
    CHECK(c(0, 0).imag() == doctest::Approx(58.0).epsilon(1e-15));

    const CMatrix ah = a.adjoint();
    REQUIRE(ah.rows() == 3);
    REQUIRE(ah.cols() == 2);
    CHECK(ah(2, 0) == std::conj(a(0, 2)));

    const auto x = random_vector(3, 5);
    const auto ax = a.apply(x);
    const auto ahx2 = a.apply_adjoint(random_vector(2, 6));
    REQUIRE(ax.size() == 2);
    REQUIRE(ahx2.size() == 3);
    // <A x, y> == <x, A^H y>.
    const auto y = random_vector(2, 7);
    cplx lhs = 0.0, rhs = 0.0;
    const auto ahy = a.apply_adjoint(y);
    for (int i = 0; i < 2; ++i) lhs += ax[i] * std::conj(y[i]);
    for (int j = 0; j < 3; ++j) rhs += x[j] * std::conj(ahy[j]);
    CHECK(std::abs(lhs - rhs) < 1e-13);
  }

  TEST_CASE("LU solve recovers manufactured solutions") {
    for (int n : {1, 2, 5, 17, 40}) {
      const CMatrix a = random_matrix(n, n, 100 + n);
      const auto x_true = random_vector(n, 200 + n);
      const auto b = a.apply(x_true);
      const SolveReport rep = trefftz::lu_solve(a, b);
      REQUIRE(static_cast<int>(rep.solution.size()) == n);
      double err = 0.0;
      for (int i = 0; i < n; ++i) err += std::norm(rep.solution[i] - x_true[i]);
      CHECK(std::sqrt(err) < 1e-10 * vec_norm(x_true));
      CHECK(rep.residual_norm < 1e-12);
      CHECK(rep.rank_used == n);
      CHECK(rep.cond2 >= 1.0);
    }
  }

  TEST_CASE("LU reports the failing pivot for singular matrices") {
    // Third row equals the sum of the first two: elimination finds a zero
    // pivot in column 2.
    CMatrix a(3, 3);
    a(0, 0) = 1.0; a(0, 1) = 2.0; a(0, 2) = cplx(0.0, 1.0);
    a(1, 0) = 3.0; a(1, 1) = cplx(0.0, -2.0); a(1, 2) = 1.0;
    for (int j = 0; j < 3; ++j) a(2, j) = a(0, j) + a(1, j);
    try {
      (void)trefftz::lu_solve(a, random_vector(3, 9));
      FAIL("expected SingularMatrixError");
    } catch (const trefftz::SingularMatrixError& e) {
      CHECK(e.pivot_index == 2);
    }
  }

  TEST_CASE("LU condition estimate tracks the exact spectral condition number") {
    // diag(10, 1, 0.01) has cond2 = 1000 exactly.
    CMatrix d(3, 3);
    d(0, 0) = 10.0;
    d(1, 1) = 1.0;
    d(2, 2) = 0.01;
    const SolveReport rep = trefftz::lu_solve(d, random_vector(3, 11));
    CHECK(rep.cond2 == doctest::Approx(1000.0).epsilon(1e-6));

    // Against the exact SVD value for a generic matrix.  The iterative
    // estimate is a diagnostic, not an exact value; it must land within 10%
    // and never exceed the true condition number by more than round-off.
    const CMatrix a = random_matrix(12, 12, 313);
    const double exact = trefftz::svd_cond(a);
    const SolveReport r2 = trefftz::lu_solve(a, random_vector(12, 14));
    CHECK(r2.cond2 == doctest::Approx(exact).epsilon(0.1));
    CHECK(r2.cond2 <= exact * (1.0 + 1e-8));
  }

  TEST_CASE("SVD: known spectra and reconstruction") {
    // diag(3, 1).
    CMatrix d(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    const SVD sd = trefftz::svd(d);
    REQUIRE(sd.sigma.size() == 2);
    CHECK(sd.sigma[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(sd.sigma[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(trefftz::svd_cond(d) == doctest::Approx(3.0).epsilon(1e-14));

    // 1x1.
    CMatrix one(1, 1);
    one(0, 0) = cplx(0.0, -2.0);
    CHECK(trefftz::svd(one).sigma[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(trefftz::svd_cond(one) == doctest::Approx(1.0).epsilon(1e-15));

    // Reconstruction ||A - U S V^H|| for square, tall, and wide shapes.
    for (auto [m, n] : {std::pair{6, 6}, std::pair{9, 4}, std::pair{4, 9}}) {
      const CMatrix a = random_matrix(m, n, 1000 + 10 * m + n);
      const SVD s = trefftz::svd(a);
      const int r = static_cast<int>(s.sigma.size());
      REQUIRE(r == std::min(m, n));
      // Singular values descending and nonnegative.
      for (int i = 1; i < r; ++i) CHECK(s.sigma[i] <= s.sigma[i - 1]);
      CHECK(s.sigma[r - 1] >= 0.0);
      // U and V have orthonormal columns.
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
          cplx gu = 0.0, gv = 0.0;
          for (int t = 0; t < m; ++t) gu += std::conj(s.u(t, i)) * s.u(t, j);
          for (int t = 0; t < n; ++t) gv += std::conj(s.v(t, i)) * s.v(t, j);
          const cplx id = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
          CHECK(std::abs(gu - id) < 1e-12);
          CHECK(std::abs(gv - id) < 1e-12);
        }
      CMatrix recon(m, n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
          cplx acc = 0.0;
          for (int t = 0; t < r; ++t)
            acc += s.u(i, t) * s.sigma[t] * std::conj(s.v(j, t));
          recon(i, j) = acc;
        }
      double diff = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) diff += std::norm(recon(i, j) - a(i, j));
      CHECK(std::sqrt(diff) < 1e-12 * frob(a));
    }
  }

  TEST_CASE("SVD handles graded singular values accurately") {
    // Build A = U diag(1, 1e-4, 1e-8, 1e-12) V^H from random unitary factors
    // (QR-free: use SVD of random matrices to get unitary U, V).
    const int n = 4;
    const SVD qu = trefftz::svd(random_matrix(n, n, 77));
    const SVD qv = trefftz::svd(random_matrix(n, n, 78));
    const std::vector<double> sig{1.0, 1e-4, 1e-8, 1e-12};
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cplx acc = 0.0;
        for (int t = 0; t < n; ++t)
          acc += qu.u(i, t) * sig[t] * std::conj(qv.u(j, t));
        a(i, j) = acc;
      }
    // Forming A in double precision already perturbs each singular value by
    // up to ~n eps ||A|| absolutely, which dominates for the graded tail; the
    // factorization itself must not add more than that.
    const SVD s = trefftz::svd(a);
    for (int t = 0; t < n; ++t)
      CHECK(std::abs(s.sigma[t] - sig[t]) <= 1e-8 * sig[t] + 1e-14);
    CHECK(trefftz::svd_cond(a) == doctest::Approx(1e12).epsilon(0.02));
  }

  TEST_CASE("truncated SVD least squares") {
    // Overdetermined consistent system: exact recovery, full rank retained.
    const CMatrix a = random_matrix(10, 4, 55);
    const auto x_true = random_vector(4, 56);
    const auto b = a.apply(x_true);
    const SolveReport rep = trefftz::truncated_svd_solve(a, b, 1e-12);
    CHECK(rep.rank_used == 4);
    double err = 0.0;
    for (int i = 0; i < 4; ++i) err += std::norm(rep.solution[i] - x_true[i]);
    CHECK(std::sqrt(err) < 1e-10);
    CHECK(rep.residual_norm < 1e-12);
    CHECK(rep.cond2 >= 1.0);

    // Rank-deficient: duplicate column; truncation drops one direction and
    // returns the minimal-norm solution that splits the coefficient.
    CMatrix dup(6, 2);
    for (int i = 0; i < 6; ++i) {
      const cplx v = cplx(std::sin(1.0 + i), std::cos(0.5 * i));
      dup(i, 0) = v;
      dup(i, 1) = v;
    }
    std::vector<cplx> rhs(6);
    for (int i = 0; i < 6; ++i) rhs[i] = dup(i, 0) * cplx(2.0, 0.0);
    const SolveReport r2 = trefftz::truncated_svd_solve(dup, rhs, 1e-10);
    CHECK(r2.rank_used == 1);
    CHECK(std::abs(r2.solution[0] - cplx(1.0, 0.0)) < 1e-10);
    CHECK(std::abs(r2.solution[1] - cplx(1.0, 0.0)) < 1e-10);
  }

  TEST_CASE("Cholesky factors Hermitian positive definite matrices") {
    // G = B^H B + I is Hermitian positive definite.
    const CMatrix b = random_matrix(5, 5, 60);
    CMatrix g = b.adjoint() * b;
    for (int i = 0; i < 5; ++i) g(i, i) += 1.0;
    const CMatrix l = trefftz::cholesky(g);
    // L lower triangular with positive diagonal.
    for (int i = 0; i < 5; ++i) {
      CHECK(l(i, i).imag() == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(l(i, i).real() > 0.0);
      for (int j = i + 1; j < 5; ++j) CHECK(std::abs(l(i, j)) == 0.0);
    }
    const CMatrix back = l * l.adjoint();
    double diff = 0.0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) diff += std::norm(back(i, j) - g(i, j));
    CHECK(std::sqrt(diff) < 1e-12 * frob(g));

    // Indefinite input is rejected.
    CMatrix bad(2, 2);
    bad(0, 0) = 1.0;
    bad(1, 1) = -1.0;
    CHECK_THROWS_AS(static_cast<void>(trefftz::cholesky(bad)), std::runtime_error);
  }

  TEST_CASE("block orthonormalization congruence matches an explicit transform") {
    // Two blocks of sizes 2 and 3 with HPD Grams; build T explicitly as
    // blockdiag(L^{-H}) by solving L^H T_block = I, then compare
    // transform_matrix / transform_rhs / apply against direct arithmetic.
    const int sizes[2] = {2, 3};
    const int n = 5;
    std::vector<CMatrix> grams;
    for (int blk = 0; blk < 2; ++blk) {
      const int s = sizes[blk];
      const CMatrix m = random_matrix(s, s, 600 + blk);
      CMatrix g = m.adjoint() * m;
      for (int i = 0; i < s; ++i) g(i, i) += 0.5;
      grams.push_back(g);
    }
    const BlockOrthoTransform t = trefftz::local_orthonormalize(grams);

    // Explicit T (n x n): per block solve L^H X = I by back substitution.
    CMatrix t_full(n, n);
    int off = 0;
    for (int blk = 0; blk < 2; ++blk) {
      const int s = sizes[blk];
      const CMatrix l = trefftz::cholesky(grams[blk]);
      for (int col = 0; col < s; ++col) {
        std::vector<cplx> x(s, cplx(0.0, 0.0));
        for (int i = s - 1; i >= 0; --i) {
          cplx acc = (i == col) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
          for (int j = i + 1; j < s; ++j) acc -= std::conj(l(j, i)) * x[j];
          x[i] = acc / std::conj(l(i, i));
        }
        for (int i = 0; i < s; ++i) t_full(off + i, off + col) = x[i];
      }
      off += s;
    }

    const CMatrix a = random_matrix(n, n, 777);
    const CMatrix expect = t_full.adjoint() * a * t_full;
    const CMatrix got = t.transform_matrix(a);
    double diff = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) diff += std::norm(expect(i, j) - got(i, j));
    CHECK(std::sqrt(diff) < 1e-11 * frob(expect));

    const auto bb = random_vector(n, 778);
    const auto rt = t.transform_rhs(bb);
    const auto rt_expect = t_full.apply_adjoint(bb);
    for (int i = 0; i < n; ++i) CHECK(std::abs(rt[i] - rt_expect[i]) < 1e-11);

    const auto ct = random_vector(n, 779);
    const auto mapped = t.apply(ct);
    const auto mapped_expect = t_full.apply(ct);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(mapped[i] - mapped_expect[i]) < 1e-11);

    // The congruence orthonormalizes the Gram itself: T^H G T = I.
    CMatrix g_full(n, n);
    off = 0;
    for (int blk = 0; blk < 2; ++blk) {
      const int s = sizes[blk];
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) g_full(off + i, off + j) = grams[blk](i, j);
      off += s;
    }
    const CMatrix eye = t.transform_matrix(g_full);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const cplx id = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        CHECK(std::abs(eye(i, j) - id) < 1e-12);
      }

    // Round trip: solving the transformed system equals solving the original.
    const auto b2 = random_vector(n, 780);
    const auto direct = trefftz::lu_solve(a, b2).solution;
    const auto tilde = trefftz::lu_solve(t.transform_matrix(a), t.transform_rhs(b2)).solution;
    const auto mapped_back = t.apply(tilde);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(mapped_back[i] - direct[i]) < 1e-9 * (1.0 + vec_norm(direct)));
  }

  TEST_CASE("shape validation") {
    const CMatrix a = random_matrix(3, 3, 1);
    CHECK_THROWS_AS(static_cast<void>(trefftz::lu_solve(a, random_vector(2, 2))),
                    std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(random_matrix(2, 3, 3) * random_matrix(2, 3, 4)),
                    std::invalid_argument);
  }
}
