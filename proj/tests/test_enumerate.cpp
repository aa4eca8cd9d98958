#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "qf/enumerate.hpp"

using namespace qf;
using qftest::Gen;

namespace {

// Nested-loop count over the box |x_i| <= floor(sqrt(m (G^{-1})_ii)).
Int brute_count(const GramForm& f, long m) {
  const std::size_t n = f.dim();
  const RatMatrix inv = inverse(to_rat(f.gram()));
  std::vector<long> bound(n);
  for (std::size_t i = 0; i < n; ++i) bound[i] = static_cast<long>(std::floor(std::sqrt(Rat(Rat(m) * inv(i, i)).get_d()))) + 1;
  IntVec x(n);
  std::vector<long> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = -bound[i];
  Int hits = 0;
  while (true) {
    for (std::size_t i = 0; i < n; ++i) x[i] = c[i];
    if (f.value(x) == m) ++hits;
    std::size_t i = 0;
    while (i < n && ++c[i] > bound[i]) c[i] = -bound[i], ++i;
    if (i == n) break;
  }
  return hits;
}

// Every T with entries in {-1, 0, 1} and T^T G T = G.
Int brute_automorphisms(const GramForm& f) {
  const std::size_t n = f.dim(), cells = n * n;
  std::vector<int> d(cells, -1);
  Int hits = 0;
  while (true) {
    IntMatrix t(n, n);
    for (std::size_t i = 0; i < cells; ++i) t(i / n, i % n) = d[i];
    if (t.transpose() * f.gram() * t == f.gram()) ++hits;
    std::size_t i = 0;
    while (i < cells && ++d[i] > 1) d[i++] = -1;
    if (i == cells) break;
  }
  return hits;
}

Int factorial(unsigned n) {
  Int r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

TEST(ShortVectors, Examples) {
  const ShortVectorList e8 = short_vectors(e8_form(), 2);
  EXPECT_EQ(e8.size_with_signs(), 240u);
  EXPECT_EQ(short_vectors(identity_form(2), 1).size_with_signs(), 4u);
  EXPECT_EQ(short_vectors(GramForm(IntMatrix{{2, 1}, {1, 2}}), 2).size_with_signs(), 6u);
  EXPECT_THROW(short_vectors(GramForm(IntMatrix{{1, 0}, {0, -1}}), 2), Error);
}

TEST(ShortVectors, ListInvariants) {
  const GramForm f(IntMatrix{{3, 1, 0}, {1, 4, 1}, {0, 1, 5}});
  const ShortVectorList l = short_vectors(f, 20);
  std::set<Coords> seen;
  for (std::size_t i = 0; i < l.vectors.size(); ++i) {
    const auto& s = l.vectors[i];
    IntVec v(s.v.begin(), s.v.end());
    EXPECT_EQ(f.value(v), s.norm);
    EXPECT_GT(s.norm, 0);
    EXPECT_LE(s.norm, 20);
    auto nz = std::find_if(s.v.begin(), s.v.end(), [](auto x) { return x != 0; });
    ASSERT_NE(nz, s.v.end());
    EXPECT_GT(*nz, 0);
    EXPECT_TRUE(seen.insert(s.v).second);
    if (i > 0) { EXPECT_LT(l.vectors[i - 1].v, s.v); }
  }
  // Σ_{m <= B} r(m) + 1 equals the number of points with f <= B
  Int total = 1;
  for (long m = 1; m <= 20; ++m) total += representation_count(f, m);
  EXPECT_EQ(total, Int(static_cast<long>(l.size_with_signs() + 1)));
}

TEST(RepresentationCount, Examples) {
  EXPECT_EQ(representation_count(e8_form(), 2), 240);
  EXPECT_EQ(representation_count(identity_form(2), 1), 4);
  EXPECT_EQ(representation_count(identity_form(4), 2), 24);
  EXPECT_EQ(representation_count(identity_form(4), 1), 8);
  EXPECT_EQ(representation_count(identity_form(5), 1), 10);
  EXPECT_EQ(representation_count(identity_form(5), 2), 40);
}

TEST(RepresentationCount, MatchesBruteForce) {
  Gen g(81);
  for (int t = 0; t < 40; ++t) {
    const auto n = static_cast<std::size_t>(g.uniform(1, 4));
    const GramForm f(g.positive_definite(n, 2, 200));
    for (long m = 1; m <= 10; ++m) EXPECT_EQ(representation_count(f, m), brute_count(f, m)) << to_string(f.gram());
  }
  EXPECT_EQ(brute_count(identity_form(4), 2), 24);
  EXPECT_EQ(brute_count(identity_form(5), 1), 10);
}

TEST(RepresentationCount, IsometryInvariant) {
  Gen g(91);
  for (int t = 0; t < 25; ++t) {
    const auto n = static_cast<std::size_t>(g.uniform(2, 5));
    const IntMatrix s = g.positive_definite(n, 2, 100);
    const IntMatrix u = g.unimodular(n, 6, 2);
    const GramForm a(s), b(u.transpose() * s * u);
    EXPECT_EQ(fingerprint(a, 6), fingerprint(b, 6));
  }
}

TEST(Represents, Examples) {
  EXPECT_TRUE(represents(e8_form(), 2));
  EXPECT_FALSE(represents(diagonal_form({3}), 2));
  EXPECT_FALSE(represents(GramForm(IntMatrix{{2, 1}, {1, 2}}), 1));
}

TEST(Fingerprint, Examples) {
  EXPECT_EQ(fingerprint(identity_form(2), 2), (std::vector<Int>{4, 4}));
  EXPECT_EQ(fingerprint(e8_form(), 2), (std::vector<Int>{0, 240}));
  const auto fp = fingerprint(GramForm(IntMatrix{{2, 1}, {1, 4}}), 9);
  for (std::size_t i = 0; i < fp.size(); i += 2) EXPECT_EQ(fp[i], 0);
}

TEST(Automorphisms, Examples) {
  EXPECT_EQ(automorphism_order(diagonal_form({1})), 2);
  EXPECT_EQ(automorphism_order(identity_form(2)), 8);
  EXPECT_EQ(brute_automorphisms(identity_form(2)), 8);
  EXPECT_EQ(automorphism_order(GramForm(IntMatrix{{2, 1}, {1, 2}})), 12);
  EXPECT_EQ(brute_automorphisms(GramForm(IntMatrix{{2, 1}, {1, 2}})), 12);
  try {
    automorphism_order(identity_form(9));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionLimit);
  }
}

TEST(Automorphisms, HyperoctahedralAndDiagonal) {
  for (unsigned n = 1; n <= 4; ++n)
    EXPECT_EQ(automorphism_order(identity_form(n)), pow_int(Int(2), n) * factorial(n));
  EXPECT_EQ(automorphism_order(diagonal_form({1, 2, 3})), 8);
  EXPECT_EQ(automorphism_order(diagonal_form({1, 1, 2})), 16);
  EXPECT_EQ(brute_automorphisms(diagonal_form({1, 1, 2})), 16);
}

TEST(Automorphisms, BruteForceOnSmallForms) {
  // forms whose automorphisms all have entries in {-1, 0, 1}
  for (const IntMatrix& s : {IntMatrix{{2, 1, 0}, {1, 2, 1}, {0, 1, 2}}, IntMatrix{{2, -1, 0}, {-1, 2, 0}, {0, 0, 3}},
                             IntMatrix{{2, 1, 1}, {1, 2, 1}, {1, 1, 2}}})
    EXPECT_EQ(automorphism_order(GramForm(s)), brute_automorphisms(GramForm(s))) << to_string(s);
}

TEST(Automorphisms, GeneratorsAreIsometries) {
  const GramForm f(IntMatrix{{2, 1, 0, 0}, {1, 2, 1, 0}, {0, 1, 2, 1}, {0, 0, 1, 4}});
  const AutomorphismResult r = automorphism_group(f);
  Int prod = 1;
  for (auto o : r.orbit_sizes) prod *= Int(static_cast<unsigned long>(o));
  EXPECT_EQ(prod, r.order);
  for (const auto& t : r.generators) {
    EXPECT_EQ(t.transpose() * f.gram() * t, f.gram());
    EXPECT_EQ(abs_int(determinant(t)), 1);
  }
}

TEST(Automorphisms, E8) { EXPECT_EQ(automorphism_order(e8_form()), 696729600); }

TEST(Decompose, Examples) {
  const auto a = orthogonal_decompose(identity_form(2));
  ASSERT_EQ(a.blocks.size(), 2u);
  EXPECT_EQ(a.blocks[0], diagonal_form({1}));
  const auto b = orthogonal_decompose(GramForm(IntMatrix{{2, 1}, {1, 2}}));
  EXPECT_EQ(b.blocks.size(), 1u);
  const auto c = orthogonal_decompose(orthogonal_sum(e8_form(), GramForm(IntMatrix{{2}})));
  ASSERT_EQ(c.blocks.size(), 2u);
  EXPECT_EQ(c.blocks[0].dim(), 8u);
  EXPECT_EQ(c.blocks[0].det(), 1);
  EXPECT_EQ(c.blocks[1], GramForm(IntMatrix{{2}}));
}

TEST(Decompose, RecomposesUnderBaseChange) {
  Gen g(99);
  const std::vector<GramForm> parts{GramForm(IntMatrix{{2, 1}, {1, 2}}), diagonal_form({1}), diagonal_form({3}),
                                    GramForm(IntMatrix{{2, 1, 0}, {1, 2, 1}, {0, 1, 2}})};
  for (int t = 0; t < 15; ++t) {
    const GramForm a = parts[static_cast<std::size_t>(g.uniform(0, 3))];
    const GramForm b = parts[static_cast<std::size_t>(g.uniform(0, 3))];
    const GramForm s = orthogonal_sum(a, b);
    const IntMatrix u = g.unimodular(s.dim(), 5, 1);
    const GramForm f(u.transpose() * s.gram() * u);
    const OrthogonalDecomposition d = orthogonal_decompose(f);
    EXPECT_EQ(d.blocks.size(), 2u);
    std::vector<IntVec> cols;
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
      EXPECT_EQ(d.bases[i].transpose() * f.gram() * d.bases[i], d.blocks[i].gram());
      for (std::size_t c = 0; c < d.bases[i].cols(); ++c) cols.push_back(d.bases[i].column(c));
    }
    EXPECT_EQ(abs_int(determinant(IntMatrix::from_columns(cols, f.dim()))), 1);
    std::multiset<Int> dets{a.det(), b.det()}, got;
    for (const auto& blk : d.blocks) got.insert(blk.det());
    EXPECT_EQ(dets, got);
  }
}
