#pragma once
// Signature (n,1) geometry: roots, reflections r_v(x) = x - (2(v,x)/f(v)) v,
// Cartan involutions c_v = -r_v, distances on the hyperboloid, the projection
// trichotomy for hyperplanes of α·q ⊕ t, and orthogonal complement forms.

#include <optional>
#include <string>
#include <vector>

#include "qf/error.hpp"
#include "qf/exact.hpp"
#include "qf/interval.hpp"
#include "qf/lattice.hpp"

namespace qf {

enum class RootKind { PositiveRoot, NegativeRoot, NotRoot };

inline const char* to_string(RootKind k) {
  switch (k) {
    case RootKind::PositiveRoot: return "PositiveRoot";
    case RootKind::NegativeRoot: return "NegativeRoot";
    case RootKind::NotRoot: return "NotRoot";
  }
  return "?";
}

struct RootClass {
  RootKind kind = RootKind::NotRoot;
  std::string reason;  // set for NotRoot: "imprimitive", "isotropic", "not reflective"
  Rat norm;
};

/// Exact matrix with T^T G T = G, plus whether it keeps the sheet of a seed.
struct Isometry {
  RatMatrix matrix;
  bool preserves_sheet = true;
};

inline bool is_isometry(const GramForm& f, const RatMatrix& t) {
  const RatMatrix g = to_rat(f.gram());
  return t.transpose() * g * t == g;
}

/// A vector with f(v) < 0, from exact congruence diagonalisation.
inline std::optional<IntVec> negative_vector(const GramForm& f) {
  const std::size_t n = f.dim();
  RatMatrix g = to_rat(f.gram());
  RatMatrix t = RatMatrix::identity(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t piv = s;
    while (piv < n && g(piv, piv) == 0) ++piv;
    if (piv == n) {
      std::optional<std::pair<std::size_t, std::size_t>> off;
      for (std::size_t i = s; i < n && !off; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (g(i, j) != 0) {
            off = {i, j};
            break;
          }
      if (!off) break;
      // pick e_i ± e_j so the new diagonal 2 g_ij is negative
      const Rat k = g(off->first, off->second) > 0 ? Rat(-1) : Rat(1);
      g.add_row(off->first, off->second, k);
      g.add_col(off->first, off->second, k);
      t.add_col(off->first, off->second, k);
      piv = off->first;
    }
    g.swap_rows(s, piv);
    g.swap_cols(s, piv);
    t.swap_cols(s, piv);
    if (g(s, s) < 0) {
      auto [m, d] = clear_denominators(RatMatrix::from_columns({t.column(s)}, n));
      IntVec v = m.column(0);
      const Int c = content(v);
      for (auto& x : v) x /= c;
      return v;
    }
    for (std::size_t i = s + 1; i < n; ++i) {
      if (g(i, s) == 0) continue;
      Rat k = -g(i, s) / g(s, s);
      g.add_row(i, s, k);
      g.add_col(i, s, k);
      t.add_col(i, s, k);
    }
  }
  return std::nullopt;
}

/// Whether T keeps the hyperboloid sheet containing `seed` (f(seed) < 0).
inline bool preserves_sheet(const GramForm& f, const RatMatrix& t, const RatVec& seed) {
  if (f.value(seed) >= 0) fail(ErrorKind::InvalidArgument, "sheet seed must satisfy f(seed) < 0");
  return f.pair(t * seed, seed) < 0;
}

inline RootClass classify_root(const Lattice& l, const RatVec& v) {
  if (std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; }))
    fail(ErrorKind::ZeroVector, "zero vector");
  const RatVec c = l.coordinates(v);
  if (!is_integral(c)) fail(ErrorKind::NotInLattice, "vector is not in the lattice");
  RootClass out;
  out.norm = l.ambient().value(v);
  if (content(to_int(c)) != 1) {
    out.reason = "imprimitive";
    return out;
  }
  if (out.norm == 0) {
    out.reason = "isotropic";
    return out;
  }
  for (std::size_t j = 0; j < l.rank(); ++j) {
    const Rat q = 2 * l.ambient().pair(v, l.basis().column(j)) / out.norm;
    if (q.get_den() != 1) {
      out.reason = "not reflective";
      return out;
    }
  }
  out.kind = out.norm > 0 ? RootKind::PositiveRoot : RootKind::NegativeRoot;
  return out;
}

inline RootClass classify_root(const Lattice& l, const IntVec& v) { return classify_root(l, to_rat(v)); }

/// I - (2/f(v)) v v^T G.
inline RatMatrix reflection_matrix(const Lattice& l, const RatVec& v) {
  const RootClass rc = classify_root(l, v);
  if (rc.kind == RootKind::NotRoot) fail(ErrorKind::NotARoot, "not a root: " + rc.reason);
  const std::size_t n = v.size();
  const RatVec gv = to_rat(l.ambient().gram()) * v;
  RatMatrix r = RatMatrix::identity(n);
  const Rat k = Rat(2) / rc.norm;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) -= k * v[i] * gv[j];
  return r;
}

inline RatVec reflect(const Lattice& l, const RatVec& v, const RatVec& x) {
  const RootClass rc = classify_root(l, v);
  if (rc.kind == RootKind::NotRoot) fail(ErrorKind::NotARoot, "not a root: " + rc.reason);
  const Rat k = 2 * l.ambient().pair(v, x) / rc.norm;
  RatVec y = x;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= k * v[i];
  return y;
}

inline Isometry reflection(const Lattice& l, const RatVec& v) {
  Isometry out{reflection_matrix(l, v), true};
  // a reflection in a timelike vector swaps the two sheets
  out.preserves_sheet = l.ambient().value(v) > 0;
  return out;
}

/// c_v = -r_v for a negative root v; fixes the ray of v on its sheet.
inline Isometry cartan_involution(const Lattice& l, const RatVec& v) {
  const RootClass rc = classify_root(l, v);
  if (rc.kind != RootKind::NegativeRoot) fail(ErrorKind::NotNegativeRoot, "c_v needs a negative root");
  Isometry out{-reflection_matrix(l, v), true};
  out.preserves_sheet = preserves_sheet(l.ambient(), out.matrix, v);
  return out;
}

// ---------------------------------------------------------------------------
// Distances on the hyperboloid

/// cosh² d(x, y) = (x,y)² / (f(x) f(y)) for timelike x, y on one sheet.
inline Rat cosh_distance_squared(const GramForm& f, const RatVec& x, const RatVec& y) {
  const Rat fx = f.value(x), fy = f.value(y);
  if (fx >= 0 || fy >= 0) fail(ErrorKind::InvalidArgument, "points must satisfy f < 0");
  const Rat xy = f.pair(x, y);
  if (xy >= 0) fail(ErrorKind::DifferentSheet, "points lie on different sheets");
  return xy * xy / (fx * fy);
}

/// d(x, y) where cosh d = -(x,y)/sqrt(f(x) f(y)); the points are taken
/// projectively, so both levels f = -k are allowed to differ.
inline Interval hyperbolic_distance(const GramForm& f, const RatVec& x, const RatVec& y,
                                    mpfr_prec_t prec = kDefaultPrecisionBits) {
  const Rat c2 = cosh_distance_squared(f, x, y);
  if (c2 == 1) return Interval::exact(0, prec);
  return Interval::exact(c2, prec).sqrt().acosh();
}

// ---------------------------------------------------------------------------
// Hyperplanes of α·q ⊕ t

enum class MeetKind { Empty, Whole, HyperplaneOf };

inline const char* to_string(MeetKind k) {
  switch (k) {
    case MeetKind::Empty: return "Empty";
    case MeetKind::Whole: return "Whole";
    case MeetKind::HyperplaneOf: return "HyperplaneOf";
  }
  return "?";
}

struct MeetResult {
  MeetKind kind = MeetKind::Empty;
  IntVec u;          // projection to the q-block
  IntVec w;          // HyperplaneOf: primitive root of q with u = multiple · w
  Int multiple = 0;
  bool w_verified = false;
};

/// For f = α·q ⊕ t (q on the first q_dim coordinates) and a positive root v
/// of f: Whole if v has no q-part, Empty if q(u) ≤ 0, else the root w of q
/// whose hyperplane is cut out.
inline MeetResult classify_hyperplane_meet(const GramForm& f, std::size_t q_dim, const Int& alpha, const IntVec& v) {
  const std::size_t n = f.dim();
  if (q_dim == 0 || q_dim > n) fail(ErrorKind::BadDecomposition, "q block dimension out of range");
  if (alpha < 1) fail(ErrorKind::BadDecomposition, "alpha must be >= 1");
  if (v.size() != n) fail(ErrorKind::InvalidArgument, "vector length does not match the form");
  IntMatrix q(q_dim, q_dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const bool top = i < q_dim && j < q_dim;
      const bool bottom = i >= q_dim && j >= q_dim;
      if (!top && !bottom && f(i, j) != 0) fail(ErrorKind::BadDecomposition, "form is not block diagonal");
      if (top) {
        if (!mpz_divisible_p(f(i, j).get_mpz_t(), alpha.get_mpz_t()))
          fail(ErrorKind::BadDecomposition, "top block is not divisible by alpha");
        q(i, j) = f(i, j) / alpha;
      }
    }
  const Lattice lf = Lattice::standard(f);
  const RootClass rc = classify_root(lf, v);
  if (rc.kind != RootKind::PositiveRoot) fail(ErrorKind::NotARoot, "v must be a positive root of f");

  MeetResult out;
  out.u.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(q_dim));
  const Int g = content(out.u);
  if (g == 0) {
    out.kind = MeetKind::Whole;
    return out;
  }
  const GramForm qform(q);
  if (qform.value(out.u) <= 0) {
    out.kind = MeetKind::Empty;
    return out;
  }
  out.kind = MeetKind::HyperplaneOf;
  out.multiple = g;
  out.w = out.u;
  for (auto& x : out.w) x /= g;
  out.w_verified = classify_root(Lattice::standard(qform), out.w).kind == RootKind::PositiveRoot;
  return out;
}

// ---------------------------------------------------------------------------
// Orthogonal complements

/// Gram matrix of {u ∈ L : (v, u) = 0} in an HNF basis of that sublattice.
inline GramForm complement_form(const Lattice& l, const RatVec& v) {
  if (std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; }))
    fail(ErrorKind::ZeroVector, "zero vector");
  if (l.ambient().value(v) == 0) fail(ErrorKind::IsotropicVector, "v is isotropic");
  if (!l.classically_integral()) fail(ErrorKind::NotIntegral, "lattice is not classically integral");
  const std::size_t r = l.rank();
  RatMatrix row(1, r);
  for (std::size_t j = 0; j < r; ++j) row(0, j) = l.ambient().pair(v, l.basis().column(j));
  const IntMatrix k = integer_kernel(clear_denominators(row).first);
  const IntMatrix g = to_int(l.gram());
  return GramForm(k.transpose() * g * k);
}

inline GramForm complement_form(const Lattice& l, const IntVec& v) { return complement_form(l, to_rat(v)); }

}  // namespace qf
