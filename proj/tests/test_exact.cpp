#include <gtest/gtest.h>

#include <functional>

#include "gen.hpp"
#include "qf/exact.hpp"
#include "qf/interval.hpp"

using namespace qf;
using qftest::Gen;

namespace {

// Laplace expansion, the independent determinant oracle.
Int laplace_det(const IntMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  if (n == 1) return a(0, 0);
  Int d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = a(r, c);
    const Int term = a(0, j) * laplace_det(minor);
    d += (j % 2 == 0) ? term : Int(-term);
  }
  return d;
}

bool is_diagonal(const IntMatrix& d) {
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (i != j && d(i, j) != 0) return false;
  return true;
}

}  // namespace

TEST(Snf, AlreadyDiagonal) {
  const SnfResult r = smith_normal_form(IntMatrix{{2, 0}, {0, 6}});
  EXPECT_EQ(r.diagonal(), (std::vector<Int>{2, 6}));
}

TEST(Snf, TwoOneOneTwo) {
  const SnfResult r = smith_normal_form(IntMatrix{{2, 1}, {1, 2}});
  EXPECT_EQ(r.diagonal(), (std::vector<Int>{1, 3}));
}

TEST(Snf, ZeroMatrix) {
  const SnfResult r = smith_normal_form(IntMatrix(2, 2));
  EXPECT_EQ(r.diagonal(), (std::vector<Int>{0, 0}));
  EXPECT_EQ(r.rank, 0u);
}

TEST(Snf, RandomReconstructionAndChain) {
  Gen g(101);
  for (int t = 0; t < 150; ++t) {
    const auto r = static_cast<std::size_t>(g.uniform(1, 8));
    const auto c = static_cast<std::size_t>(g.uniform(1, 8));
    IntMatrix a = g.matrix(r, c, t % 3 == 0 ? 10000 : 6);
    if (t % 5 == 0 && r > 1) a.add_row(0, 1, Int(3));  // occasional dependence
    const SnfResult s = smith_normal_form(a);
    ASSERT_EQ(s.U * a * s.V, s.D);
    ASSERT_TRUE(is_diagonal(s.D));
    EXPECT_EQ(abs_int(determinant(s.U)), 1);
    EXPECT_EQ(abs_int(determinant(s.V)), 1);
    const auto d = s.diagonal();
    for (std::size_t i = 0; i < d.size(); ++i) {
      EXPECT_GE(d[i], 0);
      if (i + 1 < d.size() && d[i] != 0) { EXPECT_TRUE(d[i + 1] % d[i] == 0); }
      if (d[i] == 0) {
        for (std::size_t j = i; j < d.size(); ++j) EXPECT_EQ(d[j], 0);
      }
    }
    if (r == c) {
      Int prod = 1;
      for (const auto& x : d) prod *= x;
      EXPECT_EQ(prod, abs_int(laplace_det(a)));
    }
  }
}

TEST(Snf, Deterministic) {
  Gen g(7);
  const IntMatrix a = g.matrix(5, 4, 50);
  const SnfResult x = smith_normal_form(a), y = smith_normal_form(a);
  EXPECT_EQ(x.U, y.U);
  EXPECT_EQ(x.V, y.V);
}

TEST(Determinant, MatchesLaplace) {
  Gen g(202);
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::size_t>(g.uniform(1, 6));
    const IntMatrix a = g.matrix(n, n, 20);
    EXPECT_EQ(determinant(a), laplace_det(a));
    EXPECT_EQ(determinant(to_rat(a)), Rat(laplace_det(a)));
  }
}

TEST(Inverse, RoundTrip) {
  Gen g(303);
  int done = 0;
  while (done < 50) {
    const auto n = static_cast<std::size_t>(g.uniform(1, 6));
    const RatMatrix a = to_rat(g.matrix(n, n, 9));
    if (determinant(a) == 0) {
      EXPECT_THROW(inverse(a), Error);
      continue;
    }
    EXPECT_EQ(a * inverse(a), RatMatrix::identity(n));
    ++done;
  }
}

TEST(Cholesky, Identity) {
  const CholeskyResult r = rational_cholesky(IntMatrix::identity(2));
  EXPECT_EQ(r.diag, (std::vector<Rat>{1, 1}));
  EXPECT_EQ(r.upper, RatMatrix::identity(2));
}

TEST(Cholesky, TwoOneOneTwo) {
  const CholeskyResult r = rational_cholesky(IntMatrix{{2, 1}, {1, 2}});
  EXPECT_EQ(r.diag, (std::vector<Rat>{2, Rat(3, 2)}));
  EXPECT_EQ(r.upper(0, 1), Rat(1, 2));
}

TEST(Cholesky, Indefinite) {
  try {
    rational_cholesky(IntMatrix{{1, 2}, {2, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
  }
}

TEST(Cholesky, RecomposesIffLeadingMinorsPositive) {
  Gen g(404);
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<std::size_t>(g.uniform(1, 5));
    IntMatrix s = g.symmetric(n, 5);
    for (std::size_t i = 0; i < n; ++i) s(i, i) += g.uniform(0, 12);
    bool minors_positive = true;
    for (std::size_t k = 1; k <= n; ++k)
      if (laplace_det(s.block(0, 0, k, k)) <= 0) minors_positive = false;
    bool ok = true;
    try {
      const CholeskyResult r = rational_cholesky(s);
      RatMatrix delta(n, n);
      for (std::size_t i = 0; i < n; ++i) delta(i, i) = r.diag[i];
      EXPECT_EQ(r.upper.transpose() * delta * r.upper, to_rat(s));
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_EQ(r.upper(i, i), 1);
        for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(r.upper(i, j), 0);
      }
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
      ok = false;
    }
    EXPECT_EQ(ok, minors_positive);
  }
}

TEST(Signature, MatchesCongruentDiagonal) {
  Gen g(505);
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::size_t>(g.uniform(1, 6));
    std::vector<Int> d(n);
    Signature expect;
    for (auto& x : d) {
      x = g.uniform(-3, 3);
      if (x > 0) ++expect.positive;
      else if (x < 0) ++expect.negative;
      else ++expect.zero;
    }
    const IntMatrix u = g.unimodular(n, 12, 3);
    const IntMatrix s = u.transpose() * IntMatrix::diagonal(d) * u;
    EXPECT_EQ(congruence_signature(to_rat(s)), expect);
  }
}

TEST(Hnf, CanonicalUnderColumnOperations) {
  Gen g(606);
  for (int t = 0; t < 60; ++t) {
    const auto n = static_cast<std::size_t>(g.uniform(1, 5));
    const IntMatrix a = g.matrix(n, n, 8);
    if (determinant(a) == 0) continue;
    const IntMatrix u = g.unimodular(n, 10, 4);
    EXPECT_EQ(column_hnf(a), column_hnf(a * u));
  }
}

TEST(Kernel, SpansIntegerKernel) {
  Gen g(707);
  for (int t = 0; t < 60; ++t) {
    const auto r = static_cast<std::size_t>(g.uniform(1, 3));
    const auto c = static_cast<std::size_t>(g.uniform(r + 1, 5));
    const IntMatrix a = g.matrix(r, c, 6);
    const IntMatrix k = integer_kernel(a);
    EXPECT_TRUE((a * k).is_zero());
    EXPECT_EQ(k.cols() + rank(to_rat(a)), c);
    // primitive: the kernel basis extends to saturated lattice, so its SNF is all ones
    if (k.cols() > 0) {
      for (const auto& d : smith_normal_form(k).diagonal()) EXPECT_EQ(d, 1);
    }
  }
}

TEST(Helpers, FloorModValuation) {
  EXPECT_EQ(floor_div(Int(-7), Int(2)), -4);
  EXPECT_EQ(mod_floor(Int(-7), Int(3)), 2);
  EXPECT_EQ(floor_rat(Rat(-7, 2)), -4);
  EXPECT_EQ(ceil_rat(Rat(7, 2)), 4);
  EXPECT_EQ(valuation(Int(48), Int(2)), 4);
  EXPECT_EQ(valuation(Rat(9, 8), Int(2)), -3);
  EXPECT_EQ(reduce_mod(Rat(1, 3), Int(5)), 2);
  EXPECT_TRUE(is_prime(Int(9973)));
  EXPECT_FALSE(is_prime(Int(9975)));
}

TEST(Interval, EnclosesKnownValues) {
  const Interval pi = Interval::pi(128);
  EXPECT_TRUE(pi.lower_gt(Rat(314159, 100000)));
  EXPECT_TRUE(pi.upper_lt(Rat(3927, 1250)));
  const Interval two = Interval::exact(2, 128);
  EXPECT_TRUE((two.sqrt() * two.sqrt()).contains(Rat(2)));
  EXPECT_TRUE(Interval::exact(3, 128).acosh().overlaps((Interval::exact(3, 128) + two * two.sqrt()).log()));
  EXPECT_TRUE(Interval::exact(Rat(1, 3), 64).contains(Rat(1, 3)));
}

TEST(Interval, NestsWhenPrecisionDoubles) {
  for (mpfr_prec_t p : {64, 128, 256}) {
    const Interval lo = (Interval::e(p) * Interval::pi(p)).sqrt();
    const Interval hi = (Interval::e(2 * p) * Interval::pi(2 * p)).sqrt();
    EXPECT_TRUE(hi.subset_of(lo));
  }
}
