#include <gtest/gtest.h>

#include "gen.hpp"
#include "qf/enumerate.hpp"
#include "qf/lattice.hpp"

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

bool squarefree(const Int& d) {
  for (const auto& [p, e] : factorize(d))
    if (e > 1) return false;
  return true;
}

// (L*)-membership straight from the definition: (v, b_j) integral for all j.
bool in_dual(const Lattice& l, const RatVec& v) {
  for (std::size_t j = 0; j < l.rank(); ++j)
    if (l.ambient().pair(v, l.basis().column(j)).get_den() != 1) return false;
  return true;
}

}  // namespace

TEST(GramForm, Basics) {
  const GramForm f(IntMatrix{{2, 1}, {1, 2}});
  EXPECT_EQ(f.det(), 3);
  EXPECT_TRUE(f.positive_definite());
  EXPECT_TRUE(f.even());
  EXPECT_EQ(f.value(IntVec{1, -1}), 2);
  EXPECT_EQ(kind_of([] { GramForm(IntMatrix{{1, 2}, {3, 1}}); }), ErrorKind::InvalidArgument);
  const GramForm l(IntMatrix{{1, 0}, {0, -1}});
  EXPECT_TRUE(l.lorentzian());
  EXPECT_FALSE(l.positive_definite());
}

TEST(GramForm, E8) {
  const GramForm e8 = e8_form();
  EXPECT_EQ(e8.det(), 1);
  EXPECT_TRUE(e8.even());
  EXPECT_TRUE(e8.positive_definite());
  const GramForm ii = even_unimodular_lorentzian(1);
  EXPECT_EQ(ii.dim(), 10u);
  EXPECT_EQ(ii.det(), -1);
  EXPECT_TRUE(ii.lorentzian());
}

TEST(GramForm, ParseAndFormat) {
  const GramForm f = parse_gram("# comment\n3\n1 0 0\n0 2 1\n# inner\n0 1 2\n");
  EXPECT_EQ(f.gram(), (IntMatrix{{1, 0, 0}, {0, 2, 1}, {0, 1, 2}}));
  EXPECT_EQ(parse_gram(format_gram(f)), f);
  EXPECT_EQ(kind_of([] { parse_gram("2\n1 2\n3 1\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_gram("2\n1 2\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_gram("2\n1 x\nx 1\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(form_hash(f), form_hash(parse_gram(format_gram(f))));
  EXPECT_NE(form_hash(f), form_hash(identity_form(3)));
}

TEST(OrthogonalSum, Examples) {
  EXPECT_EQ(orthogonal_sum(diagonal_form({1}), diagonal_form({2})), diagonal_form({1, 2}));
  const GramForm t = orthogonal_sum(e8_form(), GramForm(IntMatrix{{2}}));
  EXPECT_EQ(t.dim(), 9u);
  EXPECT_EQ(t.det(), 2);
  const GramForm uu = orthogonal_sum(hyperbolic_plane(), hyperbolic_plane());
  EXPECT_EQ(uu.dim(), 4u);
  EXPECT_EQ(uu.det(), 1);
  EXPECT_TRUE(uu.even());
}

TEST(Scale, Examples) {
  EXPECT_EQ(scale(identity_form(2), 2), diagonal_form({2, 2}));
  EXPECT_EQ(scale(e8_form(), 1), e8_form());
  const GramForm u3 = scale(hyperbolic_plane(), 3);
  EXPECT_EQ(u3.gram(), (IntMatrix{{0, 3}, {3, 0}}));
  EXPECT_EQ(u3.det(), -9);
}

TEST(Dual, Diag19) {
  const Lattice d = dual_lattice(Lattice::standard(diagonal_form({1, 9})));
  const Lattice expect(diagonal_form({1, 9}), RatMatrix{{1, 0}, {0, Rat(1, 9)}});
  EXPECT_TRUE(d.same_lattice(expect));
}

TEST(Dual, UnimodularIsSelfDual) {
  for (const GramForm& f : {e8_form(), identity_form(3), hyperbolic_plane()}) {
    const Lattice l = Lattice::standard(f);
    EXPECT_TRUE(dual_lattice(l).same_lattice(l));
  }
}

TEST(Dual, SingularRejected) {
  EXPECT_EQ(kind_of([] { dual_lattice(Lattice::standard(diagonal_form({1, 0}))); }), ErrorKind::SingularForm);
}

TEST(Dual, DefinitionAndInvolution) {
  Gen g(11);
  for (int t = 0; t < 40; ++t) {
    const auto n = static_cast<std::size_t>(g.uniform(1, 4));
    const GramForm f(g.positive_definite(n, 3, 1000));
    const Lattice l = Lattice::standard(f);
    const Lattice d = dual_lattice(l);
    for (std::size_t j = 0; j < n; ++j) EXPECT_TRUE(in_dual(l, d.basis().column(j)));
    EXPECT_TRUE(d.contains_lattice(l));
    EXPECT_EQ(abs(d.discriminant()) * abs(l.discriminant()), 1);
    EXPECT_TRUE(dual_lattice(d).same_lattice(l));
  }
}

TEST(InvariantFactors, Examples) {
  EXPECT_EQ(invariant_factors(diagonal_form({1, 9})), (std::vector<Int>{1, 9}));
  EXPECT_EQ(invariant_factors(e8_form()), std::vector<Int>(8, Int(1)));
  EXPECT_EQ(invariant_factors(diagonal_form({2, 2})), (std::vector<Int>{2, 2}));
  EXPECT_EQ(kind_of([] { invariant_factors(diagonal_form({0, 1})); }), ErrorKind::SingularForm);
}

TEST(Saturate, Examples) {
  const Lattice s = saturate(Lattice::standard(diagonal_form({1, 9})));
  EXPECT_EQ(s.gram(), RatMatrix::identity(2));
  const Lattice keep = Lattice::standard(diagonal_form({1, 2}));
  EXPECT_TRUE(saturate(keep).same_lattice(keep));
  const Lattice four = saturate(Lattice::standard(diagonal_form({4})));
  EXPECT_EQ(four.gram(), (RatMatrix{{1}}));
  EXPECT_EQ(four.basis(), (RatMatrix{{Rat(1, 2)}}));
  EXPECT_EQ(kind_of([] { saturate(Lattice::standard(diagonal_form({0, 1}))); }), ErrorKind::SingularForm);
}

TEST(Saturate, StepAddsExactlyTheIntersection) {
  // pL* ∩ p^{-1}L for diag(1, 9) at p = 3 is generated by L and e2/3
  const Lattice l = Lattice::standard(diagonal_form({1, 9}));
  const Lattice step = saturation_step(l, 3);
  EXPECT_TRUE(step.same_lattice(Lattice(l.ambient(), RatMatrix{{1, 0}, {0, Rat(1, 3)}})));
}

TEST(Saturate, RandomProperties) {
  Gen g(2024);
  for (int t = 0; t < 100; ++t) {
    const GramForm f(g.positive_definite(3, 4, 500));
    const Lattice l = Lattice::standard(f);
    const Lattice s = saturate(l);
    EXPECT_TRUE(s.contains_lattice(l));
    EXPECT_TRUE(s.classically_integral());
    for (const auto& d : invariant_factors(s)) EXPECT_TRUE(squarefree(d)) << d;
    EXPECT_TRUE(saturate(s).same_lattice(s));
    const Int ds = to_int(RatVec{s.discriminant()})[0], dl = f.det();
    EXPECT_TRUE(dl % ds == 0);
    // SNF of the induced Gram agrees with the invariant factors
    auto snf = smith_normal_form(to_int(s.gram())).diagonal();
    for (auto& x : snf) x = abs_int(x);
    EXPECT_EQ(snf, invariant_factors(s));
  }
}

TEST(Saturate, PreservedByAutomorphisms) {
  // spot check: isometries of L map the saturation into itself
  const GramForm f(IntMatrix{{4, 0, 0}, {0, 4, 0}, {0, 0, 9}});
  const Lattice s = saturate(Lattice::standard(f));
  for (const auto& gen : automorphism_group(f).generators) {
    const Lattice image(f, to_rat(gen) * s.basis());
    EXPECT_TRUE(image.same_lattice(s));
  }
}

TEST(Factorize, Small) {
  const auto m = factorize(Int(360));
  EXPECT_EQ(m.at(Int(2)), 3);
  EXPECT_EQ(m.at(Int(3)), 2);
  EXPECT_EQ(m.at(Int(5)), 1);
}

TEST(Lattice, Membership) {
  const Lattice l(identity_form(2), RatMatrix{{2, 0}, {0, 1}});
  EXPECT_TRUE(l.contains(RatVec{4, 3}));
  EXPECT_FALSE(l.contains(RatVec{1, 0}));
  EXPECT_EQ(l.coordinates(RatVec{1, 0}), (RatVec{Rat(1, 2), 0}));
  const Lattice line(identity_form(2), RatMatrix{{1}, {1}});
  EXPECT_EQ(kind_of([&] { line.coordinates(RatVec{1, 0}); }), ErrorKind::NotInLattice);
  EXPECT_EQ(kind_of([] { Lattice(identity_form(2), RatMatrix{{1, 2}, {1, 2}}); }), ErrorKind::InvalidArgument);
}
