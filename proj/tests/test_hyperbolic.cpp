#include <gtest/gtest.h>

#include <functional>

#include "gen.hpp"
#include "qf/enumerate.hpp"
#include "qf/hyperbolic.hpp"

using namespace qf;
using qftest::Gen;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

// Root condition straight from the definition: primitive, f(v) != 0 and
// 2(v, e_j)/f(v) integral for every standard basis vector.
bool is_root_oracle(const GramForm& f, const IntVec& v) {
  if (content(v) != 1) return false;
  const Int n = f.value(v);
  if (n == 0) return false;
  for (std::size_t j = 0; j < f.dim(); ++j) {
    Int s = 0;
    for (std::size_t i = 0; i < f.dim(); ++i) s += v[i] * f(i, j);
    if ((2 * s) % n != 0) return false;
  }
  return true;
}

GramForm u_plus(const std::vector<long>& diag, long alpha = 1) {
  return orthogonal_sum(scale(hyperbolic_plane(), alpha), diagonal_form(std::vector<Int>(diag.begin(), diag.end())));
}

}  // namespace

TEST(ClassifyRoot, Examples) {
  const Lattice i2 = Lattice::standard(identity_form(2));
  EXPECT_EQ(classify_root(i2, IntVec{1, 0}).kind, RootKind::PositiveRoot);
  EXPECT_EQ(classify_root(i2, IntVec{1, 1}).kind, RootKind::PositiveRoot);
  const RootClass imp = classify_root(i2, IntVec{2, 0});
  EXPECT_EQ(imp.kind, RootKind::NotRoot);
  EXPECT_EQ(imp.reason, "imprimitive");
  const Lattice l = Lattice::standard(diagonal_form({1, -1}));
  EXPECT_EQ(classify_root(l, IntVec{0, 1}).kind, RootKind::NegativeRoot);
  EXPECT_EQ(classify_root(l, IntVec{1, 1}).reason, "isotropic");
  EXPECT_EQ(classify_root(Lattice::standard(identity_form(2)), IntVec{1, 2}).reason, "not reflective");
  EXPECT_EQ(kind_of([&] { classify_root(i2, IntVec{0, 0}); }), ErrorKind::ZeroVector);
}

TEST(ClassifyRoot, MatchesDefinition) {
  Gen g(12);
  const GramForm f = u_plus({1, 2, -1});
  const Lattice l = Lattice::standard(f);
  for (int t = 0; t < 500; ++t) {
    const IntVec v = g.vec(f.dim(), 4);
    if (content(v) == 0) continue;
    const RootClass rc = classify_root(l, v);
    EXPECT_EQ(rc.kind != RootKind::NotRoot, is_root_oracle(f, v));
    if (rc.kind == RootKind::PositiveRoot) { EXPECT_GT(f.value(v), 0); }
    if (rc.kind == RootKind::NegativeRoot) { EXPECT_LT(f.value(v), 0); }
  }
}

TEST(Reflect, Examples) {
  const Lattice l = Lattice::standard(diagonal_form({1, -1}));
  EXPECT_EQ(reflect(l, RatVec{1, 0}, RatVec{3, 2}), (RatVec{-3, 2}));
  EXPECT_EQ(reflection_matrix(l, RatVec{1, 0}), (RatMatrix{{-1, 0}, {0, 1}}));
  EXPECT_EQ(kind_of([&] { reflect(l, RatVec{1, 1}, RatVec{3, 2}); }), ErrorKind::NotARoot);
}

TEST(Cartan, Examples) {
  const Lattice l = Lattice::standard(diagonal_form({1, -1}));
  const Isometry c = cartan_involution(l, RatVec{0, 1});
  EXPECT_EQ(c.matrix, (RatMatrix{{-1, 0}, {0, 1}}));
  EXPECT_TRUE(c.preserves_sheet);
  EXPECT_EQ(kind_of([&] { cartan_involution(l, RatVec{1, 0}); }), ErrorKind::NotNegativeRoot);
}

TEST(Reflect, RandomProperties) {
  Gen g(1000);
  const std::vector<GramForm> forms{u_plus({1}), u_plus({2, -1}), u_plus({1, 1}, 2), diagonal_form({1, 1, -1}),
                                    diagonal_form({2, 1, -3})};
  int checked = 0, cartans = 0;
  while (checked < 1000) {
    const GramForm& f = forms[static_cast<std::size_t>(g.uniform(0, static_cast<long>(forms.size()) - 1))];
    const Lattice l = Lattice::standard(f);
    const IntVec v = g.vec(f.dim(), 3);
    if (content(v) == 0 || !is_root_oracle(f, v)) continue;
    const RatVec rv = to_rat(v);
    const RatMatrix r = reflection_matrix(l, rv);
    const RatVec x = to_rat(g.vec(f.dim(), 9));
    const RatVec y = to_rat(g.vec(f.dim(), 9));
    EXPECT_TRUE(is_isometry(f, r));
    EXPECT_EQ(determinant(r), -1);
    EXPECT_EQ(r * r, RatMatrix::identity(f.dim()));
    RatVec minus = rv;
    for (auto& c : minus) c = -c;
    EXPECT_EQ(r * rv, minus);
    EXPECT_TRUE(is_integral(r * x));
    EXPECT_EQ(reflect(l, rv, x), r * x);
    EXPECT_EQ(f.pair(reflect(l, rv, x), reflect(l, rv, y)), f.pair(x, y));
    // fixes v^⊥
    RatVec w = x;
    const Rat k = f.pair(rv, x) / f.value(rv);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= k * rv[i];
    EXPECT_EQ(r * w, w);
    if (f.value(v) < 0) {
      const Isometry c = cartan_involution(l, rv);
      EXPECT_EQ(c.matrix * rv, rv);
      EXPECT_TRUE(c.preserves_sheet);
      EXPECT_FALSE(reflection(l, rv).preserves_sheet);
      ++cartans;
    }
    ++checked;
  }
  EXPECT_GT(cartans, 10);
}

TEST(Distance, Basics) {
  const GramForm f = diagonal_form({1, 1, -1});
  const RatVec x{0, 0, 1};
  EXPECT_TRUE(hyperbolic_distance(f, x, x).contains(Rat(0)));
  EXPECT_EQ(cosh_distance_squared(f, x, RatVec{2, 2, 3}), 9);
  const Interval d = hyperbolic_distance(f, x, RatVec{2, 2, 3});
  EXPECT_TRUE(d.overlaps(Interval::exact(3).acosh()));
  EXPECT_EQ(kind_of([&] { cosh_distance_squared(f, x, RatVec{0, 0, -1}); }), ErrorKind::DifferentSheet);
  EXPECT_EQ(kind_of([&] { cosh_distance_squared(f, x, RatVec{1, 0, 0}); }), ErrorKind::InvalidArgument);
  // projective: scaling a point does not move it
  EXPECT_EQ(cosh_distance_squared(f, RatVec{0, 0, 2}, RatVec{2, 2, 3}), 9);
}

TEST(Distance, ReflectedTriple) {
  const GramForm f = diagonal_form({1, 1, -1});
  const RatVec v1{0, 0, 1}, v2{2, 2, 3}, v3{-2, -2, 3};
  EXPECT_EQ(cosh_distance_squared(f, v1, v2), 9);
  EXPECT_EQ(cosh_distance_squared(f, v1, v3), 9);
  EXPECT_EQ(cosh_distance_squared(f, v2, v3), 17 * 17);
  const Interval d12 = hyperbolic_distance(f, v1, v2), d23 = hyperbolic_distance(f, v2, v3);
  EXPECT_TRUE(d23.overlaps(Interval::exact(2) * d12));
  // v1 is the midpoint: c_{v1} swaps v2 and v3
  const Isometry c = cartan_involution(Lattice::standard(f), v1);
  EXPECT_EQ(c.matrix * v2, v3);
}

TEST(Meet, Trichotomy) {
  const GramForm f = u_plus({1});
  EXPECT_EQ(classify_hyperplane_meet(f, 2, 1, IntVec{0, 0, 1}).kind, MeetKind::Whole);
  const MeetResult h = classify_hyperplane_meet(f, 2, 1, IntVec{1, 1, 0});
  EXPECT_EQ(h.kind, MeetKind::HyperplaneOf);
  EXPECT_EQ(h.w, (IntVec{1, 1}));
  EXPECT_EQ(h.multiple, 1);
  EXPECT_TRUE(h.w_verified);
  const MeetResult e = classify_hyperplane_meet(f, 2, 1, IntVec{1, -1, 2});
  EXPECT_EQ(e.kind, MeetKind::Empty);
  EXPECT_EQ(kind_of([&] { classify_hyperplane_meet(f, 2, 1, IntVec{1, 0, 0}); }), ErrorKind::NotARoot);
  EXPECT_EQ(kind_of([&] { classify_hyperplane_meet(f, 2, 2, IntVec{0, 0, 1}); }), ErrorKind::BadDecomposition);
}

TEST(Meet, RandomRootsScaled) {
  Gen g(88);
  for (long alpha : {1L, 2L, 3L}) {
    const GramForm f = u_plus({1, 1}, alpha);
    int n = 0;
    while (n < 200) {
      const IntVec v = g.vec(4, 4);
      if (content(v) == 0 || !is_root_oracle(f, v) || f.value(v) <= 0) continue;
      const MeetResult m = classify_hyperplane_meet(f, 2, alpha, v);
      const IntVec u{v[0], v[1]};
      const Int qu = 2 * u[0] * u[1];
      if (u[0] == 0 && u[1] == 0) { EXPECT_EQ(m.kind, MeetKind::Whole); }
      else if (qu <= 0) EXPECT_EQ(m.kind, MeetKind::Empty);
      else {
        EXPECT_EQ(m.kind, MeetKind::HyperplaneOf);
        EXPECT_EQ(m.w[0] * m.multiple, u[0]);
        EXPECT_EQ(m.w[1] * m.multiple, u[1]);
        EXPECT_EQ(content(m.w), 1);
        EXPECT_EQ(m.w_verified, is_root_oracle(hyperbolic_plane(), m.w));
      }
      ++n;
    }
  }
}

TEST(Complement, Examples) {
  const Lattice l = Lattice::standard(u_plus({1}));
  const GramForm u = complement_form(l, IntVec{0, 0, 1});
  EXPECT_EQ(u.det(), -1);
  EXPECT_TRUE(u.even());
  const GramForm c = complement_form(l, IntVec{1, 1, 0});
  EXPECT_EQ(c.det(), -2);
  EXPECT_EQ(c.dim(), 2u);
  const GramForm d = complement_form(l, IntVec{1, -1, 0});
  EXPECT_EQ(d.det(), 2);
  EXPECT_EQ(kind_of([&] { complement_form(l, IntVec{1, 0, 0}); }), ErrorKind::IsotropicVector);
  EXPECT_EQ(kind_of([&] { complement_form(l, IntVec{0, 0, 0}); }), ErrorKind::ZeroVector);
}

TEST(Complement, InvariantUnderAutomorphisms) {
  // orthogonal complements of roots in one automorphism orbit are isometric
  const GramForm e8 = e8_form();
  const Lattice l = Lattice::standard(e8);
  const auto roots = short_vectors(e8, 2);
  const auto gens = automorphism_group(e8).generators;
  ASSERT_FALSE(gens.empty());
  const GramForm c0 = complement_form(l, IntVec(roots.vectors[0].v.begin(), roots.vectors[0].v.end()));
  const auto fp0 = fingerprint(c0, 4);
  EXPECT_EQ(c0.det(), 2);
  for (std::size_t i = 0; i < 5 && i < gens.size(); ++i) {
    const IntVec v(roots.vectors[i * 7].v.begin(), roots.vectors[i * 7].v.end());
    const IntVec w = gens[i] * v;
    const GramForm a = complement_form(l, v), b = complement_form(l, w);
    EXPECT_EQ(fingerprint(a, 4), fingerprint(b, 4));
    EXPECT_EQ(fingerprint(a, 4), fp0);  // E8 acts transitively on roots
  }
}
