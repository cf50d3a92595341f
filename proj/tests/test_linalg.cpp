#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "critzero/aberth.hpp"
#include "critzero/linalg.hpp"
#include "critzero/matching.hpp"
#include "critzero/polynomial.hpp"

using namespace critzero;

namespace {

// Determinant by LU with partial pivoting.
cplx lu_det(ComplexMatrix a) {
  const std::size_t n = a.size();
  cplx det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

double angle_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

// Characteristic polynomial of an upper Hessenberg matrix by the standard
// determinant recurrence, carried out in 256-bit arithmetic.
Polynomial<mp_real<256>> hessenberg_charpoly(const ComplexMatrix& h) {
  using C = mp_complex<256>;
  const std::size_t n = h.size();
  std::vector<std::vector<C>> p(n + 1);
  p[0] = {C(1)};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<C> next(k + 1, C(0));
    const C hkk(h(k - 1, k - 1).real(), h(k - 1, k - 1).imag());
    for (std::size_t d = 0; d < k; ++d) {
      next[d + 1] += p[k - 1][d];
      next[d] -= hkk * p[k - 1][d];
    }
    C prod(1);
    for (std::size_t i = k - 1; i-- > 0;) {
      prod *= C(h(i + 1, i).real(), h(i + 1, i).imag());
      const C hik(h(i, k - 1).real(), h(i, k - 1).imag());
      for (std::size_t d = 0; d < p[i].size(); ++d) next[d] -= hik * prod * p[i][d];
    }
    p[k] = std::move(next);
  }
  return Polynomial<mp_real<256>>(p[n]);
}

}  // namespace

TEST(Ginibre, RejectsZeroDimension) {
  try {
    (void)sample_ginibre(0, {1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_dimension);
  }
}

TEST(Ginibre, Deterministic) {
  EXPECT_EQ(sample_ginibre(1, {9, 4}), sample_ginibre(1, {9, 4}));
  EXPECT_EQ(sample_ginibre(5, {9, 4}), sample_ginibre(5, {9, 4}));
  EXPECT_FALSE(sample_ginibre(2, {9, 4}) == sample_ginibre(2, {10, 4}));
}

TEST(Ginibre, ComponentMoments) {
  // 1563 matrices of size 8 give just over 1e5 entries.
  double s_re = 0, s_im = 0, q_re = 0, q_im = 0;
  std::size_t count = 0;
  for (std::uint64_t m = 0; m < 1563; ++m) {
    const auto g = sample_ginibre(8, {77, m});
    for (const auto& z : g.entries()) {
      s_re += z.real();
      s_im += z.imag();
      q_re += z.real() * z.real();
      q_im += z.imag() * z.imag();
      ++count;
    }
  }
  const double n = static_cast<double>(count);
  EXPECT_GT(s_re / n, -0.02);
  EXPECT_LT(s_re / n, 0.02);
  EXPECT_GT(s_im / n, -0.02);
  EXPECT_LT(s_im / n, 0.02);
  EXPECT_GT(q_re / n - (s_re / n) * (s_re / n), 0.98);
  EXPECT_LT(q_re / n - (s_re / n) * (s_re / n), 1.02);
  EXPECT_GT(q_im / n - (s_im / n) * (s_im / n), 0.98);
  EXPECT_LT(q_im / n - (s_im / n) * (s_im / n), 1.02);
}

TEST(HouseholderQr, Reconstructs) {
  const auto g = sample_ginibre(12, {3, 1});
  const auto [q, r] = householder_qr(g);
  EXPECT_LT(max_abs_entry(adjoint(q) * q - ComplexMatrix::identity(12)), 1e-13);
  const auto qr = q * r;
  double err = 0;
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 12; ++j) {
      err = std::max(err, std::abs(qr(i, j) - g(i, j)));
      if (i > j) EXPECT_EQ(r(i, j), cplx(0.0));
    }
  }
  EXPECT_LT(err, 1e-12);
}

TEST(QrHaarFix, IdentityInIdentityOut) {
  const auto u = qr_haar_fix(ComplexMatrix::identity(5));
  EXPECT_LT(max_abs_entry(u.matrix() - ComplexMatrix::identity(5)), 1e-15);
}

TEST(QrHaarFix, RankDeficientRejected) {
  ComplexMatrix g(3);
  g(0, 0) = 1.0;
  g(1, 1) = 1.0;
  try {
    (void)qr_haar_fix(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_input);
  }
}

TEST(QrHaarFix, UnitarityContract) {
  for (const std::size_t n : {1u, 2u, 8u, 40u, 100u}) {
    const auto u = haar_unitary(n, {5, n});
    EXPECT_LE(u.unitarity_defect(), UnitaryMatrix::tolerance(n));
    // Exact Frobenius bound as a cross-check of the power-iteration estimate.
    EXPECT_LT(max_abs_entry(adjoint(u.matrix()) * u.matrix() - ComplexMatrix::identity(n)), 1e-10 * n);
  }
}

TEST(UnitaryMatrix, CertifyRejectsNonUnitary) {
  auto m = ComplexMatrix::identity(4);
  m(0, 0) = 1.001;
  try {
    (void)UnitaryMatrix::certify(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::precision);
  }
}

TEST(UnitarityDefect, MatchesKnownNorm) {
  // U = diag(2, 1, 1): U*U - I = diag(3, 0, 0).
  auto m = ComplexMatrix::identity(3);
  m(0, 0) = 2.0;
  EXPECT_NEAR(unitarity_defect(m), 3.0, 1e-12);
}

TEST(Eigenvalues, Diagonal) {
  const std::vector<cplx> d{1.0, cplx(0, 1), -1.0};
  const auto s = eigenvalues_unitary(UnitaryMatrix::certify(ComplexMatrix::diagonal(d)));
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s[0], 0.0, 1e-14);
  EXPECT_NEAR(s[1], std::numbers::pi / 2, 1e-14);
  EXPECT_NEAR(s[2], std::numbers::pi, 1e-14);
}

TEST(Eigenvalues, PlaneRotation) {
  const double phi = 0.7;
  ComplexMatrix m(2);
  m(0, 0) = std::cos(phi);
  m(0, 1) = -std::sin(phi);
  m(1, 0) = std::sin(phi);
  m(1, 1) = std::cos(phi);
  const auto s = eigenvalues_unitary(UnitaryMatrix::certify(m));
  EXPECT_NEAR(s[0], phi, 1e-13);
  EXPECT_NEAR(s[1], two_pi - phi, 1e-13);
}

TEST(Eigenvalues, OneByOne) {
  ComplexMatrix m(1);
  m(0, 0) = std::polar(1.0, -2.0);
  const auto s = eigenvalues_unitary(UnitaryMatrix::certify(m));
  EXPECT_NEAR(s[0], two_pi - 2.0, 1e-14);
}

TEST(Eigenvalues, AngleSumMatchesLuDeterminant) {
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto u = haar_unitary(8, {11, k});
    const auto s = eigenvalues_unitary(u);
    double sum = 0;
    for (const double a : s.angles()) sum += a;
    EXPECT_LT(angle_distance(sum, std::arg(lu_det(u.matrix()))), 1e-8) << k;
  }
}

TEST(Eigenvalues, SortedInRange) {
  const auto s = eigenvalues_unitary(haar_unitary(30, {1, 2}));
  ASSERT_EQ(s.size(), 30u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_GE(s[i], 0.0);
    EXPECT_LT(s[i], two_pi);
    if (i) EXPECT_GT(s[i], s[i - 1]);
  }
}

TEST(Hessenberg, SimilarityPreservesStructure) {
  const auto u = haar_unitary(10, {4, 4});
  const auto h = hessenberg_reduce(u.matrix());
  for (std::size_t i = 2; i < 10; ++i) {
    for (std::size_t j = 0; j + 1 < i; ++j) EXPECT_EQ(h(i, j), cplx(0.0));
  }
  cplx tr_u = 0, tr_h = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    tr_u += u(i, i);
    tr_h += h(i, i);
  }
  EXPECT_LT(std::abs(tr_u - tr_h), 1e-12);
  EXPECT_LT(std::abs(lu_det(u.matrix()) - lu_det(h)), 1e-12);
}

TEST(Eigenvalues, AgreeWithCharacteristicPolynomialRoots) {
  for (const std::size_t n : {5u, 20u, 40u}) {
    const auto u = haar_unitary(n, {21, n});
    const auto s = eigenvalues_unitary(u);
    const auto p = hessenberg_charpoly(hessenberg_reduce(u.matrix()));
    const auto rs = find_roots_aberth(p);
    std::vector<cplx> roots;
    for (const auto& z : rs.roots) roots.push_back(to_cplx(z));
    const auto m = match_points(s.zeros(), roots);
    EXPECT_LT(m.max_distance, 1e-8) << n;
  }
}

TEST(Haar, EigenangleUniformityChiSquare) {
  constexpr std::size_t bins = 16;
  std::vector<double> counts(bins, 0.0);
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const auto s = eigenvalues_unitary(haar_unitary(8, {31337, k}));
    for (const double a : s.angles()) {
      counts[std::min<std::size_t>(bins - 1, static_cast<std::size_t>(a / two_pi * bins))] += 1;
    }
  }
  const double expected = 80000.0 / bins;
  double chi2 = 0;
  for (const double c : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
    // Per-bin 5 sigma envelope (binomial).
    EXPECT_LT(std::abs(c - expected), 5.0 * std::sqrt(expected * (1.0 - 1.0 / bins)));
  }
  // CUE eigenangles are strongly repulsive, so chi2 sits well below the
  // independent-sample critical value; rejection would signal bias.
  const double crit = boost::math::quantile(boost::math::chi_squared(bins - 1), 0.999);
  EXPECT_LT(chi2, crit);
}

TEST(Haar, PhaseFixMatters) {
  // Without the phase fix Q has a biased diagonal: E[Q_11] != 0.
  cplx fixed = 0, raw = 0;
  const int m = 4000;
  for (int k = 0; k < m; ++k) {
    const auto g = sample_ginibre(2, {8, static_cast<std::uint64_t>(k)});
    raw += householder_qr(g).q(0, 0);
    fixed += qr_haar_fix(g)(0, 0);
  }
  EXPECT_LT(std::abs(fixed) / m, 0.03);
  EXPECT_GT(std::abs(raw) / m, 0.1);
}
