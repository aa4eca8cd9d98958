#pragma once
// Positive definite forms: Fincke-Pohst enumeration over the exact LDL^T
// factorization, representation numbers, automorphism group orders and
// orthogonal decomposition into indecomposable summands.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "qf/error.hpp"
#include "qf/exact.hpp"
#include "qf/lattice.hpp"

namespace qf {

using Coords = std::vector<std::int64_t>;

struct ShortVector {
  Coords v;
  Int norm;
};

/// Vectors with 0 < f(v) <= bound, one per ± pair (first nonzero coordinate
/// positive), sorted lexicographically by coordinates.
struct ShortVectorList {
  GramForm form;
  Int bound;
  std::vector<ShortVector> vectors;

  std::size_t size_with_signs() const { return 2 * vectors.size(); }
  std::vector<ShortVector> expanded() const {
    std::vector<ShortVector> out;
    out.reserve(2 * vectors.size());
    for (const auto& s : vectors) {
      out.push_back(s);
      ShortVector neg = s;
      for (auto& x : neg.v) x = -x;
      out.push_back(std::move(neg));
    }
    return out;
  }
};

namespace detail {

/// Calls `visit(x, f(x))` for every nonzero x with f(x) <= bound whose last
/// nonzero coordinate is positive. `visit` returns false to stop early.
inline void fincke_pohst(const GramForm& g, const Int& bound,
                         const std::function<bool(const Coords&, const Int&)>& visit) {
  if (!g.positive_definite()) fail(ErrorKind::NotPositiveDefinite, "form is not positive definite");
  const std::size_t n = g.dim();
  if (n == 0 || bound < 1) return;
  const CholeskyResult ch = rational_cholesky(g.gram());
  Coords x(n, 0);
  std::vector<Rat> rem(n + 1);
  rem[n] = Rat(bound);
  bool stop = false;

  // level i chooses x_i given x_{i+1..n-1}
  std::function<void(std::size_t, bool)> rec = [&](std::size_t i, bool all_zero_above) {
    Rat c = 0;
    for (std::size_t j = i + 1; j < n; ++j)
      if (x[j] != 0) c -= ch.upper(i, j) * Rat(static_cast<long>(x[j]));
    const Rat& r = rem[i + 1];
    const Rat& d = ch.diag[i];
    auto try_value = [&](std::int64_t xi) {
      Rat t = Rat(static_cast<long>(xi)) - c;
      Rat used = d * t * t;
      if (used > r) return false;
      x[i] = xi;
      rem[i] = r - used;
      const bool zero = all_zero_above && xi == 0;
      if (i == 0) {
        if (!zero) {
          Rat norm = Rat(bound) - rem[0];
          if (!visit(x, norm.get_num())) stop = true;
        }
      } else {
        rec(i - 1, zero);
      }
      return true;
    };
    const std::int64_t start = floor_rat(c).get_si();
    // sign normalisation: the last nonzero coordinate is positive
    const std::int64_t lowest = all_zero_above ? 0 : INT64_MIN;
    for (std::int64_t xi = start; xi >= lowest && !stop; --xi)
      if (!try_value(xi)) break;
    for (std::int64_t xi = std::max(start + 1, lowest); !stop; ++xi)
      if (!try_value(xi)) break;
    x[i] = 0;
  };
  rec(n - 1, true);
}

inline void normalise_sign(Coords& v) {
  for (auto x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    return;
  }
}

}  // namespace detail

inline ShortVectorList short_vectors(const GramForm& g, const Int& bound) {
  if (bound < 1) fail(ErrorKind::InvalidArgument, "bound must be >= 1");
  ShortVectorList out{g, bound, {}};
  detail::fincke_pohst(g, bound, [&](const Coords& x, const Int& norm) {
    ShortVector s{x, norm};
    detail::normalise_sign(s.v);
    out.vectors.push_back(std::move(s));
    return true;
  });
  std::sort(out.vectors.begin(), out.vectors.end(), [](const ShortVector& a, const ShortVector& b) { return a.v < b.v; });
  return out;
}

/// r(m) = #{v : f(v) = m}, counting both signs.
inline Int representation_count(const GramForm& g, const Int& m) {
  if (!g.positive_definite()) fail(ErrorKind::NotPositiveDefinite, "form is not positive definite");
  if (m < 0) return 0;
  if (m == 0) return 1;
  Int count = 0;
  detail::fincke_pohst(g, m, [&](const Coords&, const Int& norm) {
    if (norm == m) count += 2;
    return true;
  });
  return count;
}

inline bool represents(const GramForm& g, const Int& m) {
  if (!g.positive_definite()) fail(ErrorKind::NotPositiveDefinite, "form is not positive definite");
  if (m <= 0) return m == 0;
  bool hit = false;
  detail::fincke_pohst(g, m, [&](const Coords&, const Int& norm) {
    hit = norm == m;
    return !hit;
  });
  return hit;
}

/// (r(1), ..., r(M)).
inline std::vector<Int> fingerprint(const GramForm& g, unsigned M) {
  if (!g.positive_definite()) fail(ErrorKind::NotPositiveDefinite, "form is not positive definite");
  std::vector<Int> r(M, 0);
  if (M == 0) return r;
  detail::fincke_pohst(g, Int(M), [&](const Coords&, const Int& norm) {
    r[norm.get_ui() - 1] += 2;
    return true;
  });
  return r;
}

// ---------------------------------------------------------------------------
// Automorphism group order

struct AutomorphismResult {
  Int order;
  std::vector<std::size_t> orbit_sizes;  // |b_i^{Stab(b_0..b_{i-1})}|
  std::vector<IntMatrix> generators;     // each satisfies T^T G T = G
};

/// |{T ∈ GL_n(Z) : T^T G T = G}| via a stabilizer chain on the basis vectors.
/// Orbits grow by closure under generators found so far; a backtrack search
/// for an extension runs only for candidates the closure has not reached.
inline AutomorphismResult automorphism_group(const GramForm& g, std::size_t dim_limit = 8) {
  if (!g.positive_definite()) fail(ErrorKind::NotPositiveDefinite, "form is not positive definite");
  const std::size_t n = g.dim();
  if (n > dim_limit)
    fail(ErrorKind::DimensionLimit, "dimension " + std::to_string(n) + " exceeds limit " + std::to_string(dim_limit));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!g(i, j).fits_slong_p()) fail(ErrorKind::InvalidArgument, "Gram entries too large");

  std::vector<std::int64_t> gm(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gm[i * n + j] = g(i, j).get_si();

  Int max_diag = 0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, g(i, i));
  // candidates by norm, with G v precomputed for fast pairings
  struct Cand {
    Coords v, gv;
  };
  std::map<std::int64_t, std::vector<Cand>> by_norm;
  for (const auto& s : short_vectors(g, max_diag).expanded()) {
    Cand c{s.v, Coords(n, 0)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c.gv[i] += gm[i * n + j] * s.v[j];
    by_norm[s.norm.get_si()].push_back(std::move(c));
  }
  auto pair = [&](const Cand& a, const Coords& b) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < n; ++i) s += a.gv[i] * b[i];
    return s;
  };

  std::vector<Coords> img(n);  // current images of e_0..e_{n-1}
  // depth-first completion of the images of e_j, e_{j+1}, ...
  std::function<bool(std::size_t)> extend = [&](std::size_t j) {
    if (j == n) return true;
    for (const auto& c : by_norm[gm[j * n + j]]) {
      bool ok = true;
      for (std::size_t l = 0; l < j && ok; ++l) ok = pair(c, img[l]) == gm[l * n + j];
      if (!ok) continue;
      img[j] = c.v;
      if (extend(j + 1)) return true;
    }
    return false;
  };

  auto apply = [&](const IntMatrix& t, const Coords& v) {
    Coords w(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w[i] += t(i, j).get_si() * v[j];
    return w;
  };

  AutomorphismResult res;
  res.order = 1;
  res.orbit_sizes.assign(n, 1);
  for (std::size_t lvl = n; lvl-- > 0;) {
    Coords base(n, 0);
    base[lvl] = 1;
    std::set<Coords> orbit{base};
    std::vector<Coords> frontier{base};
    auto close = [&]() {
      while (!frontier.empty()) {
        Coords v = frontier.back();
        frontier.pop_back();
        for (const auto& t : res.generators) {
          Coords w = apply(t, v);
          if (orbit.insert(w).second) frontier.push_back(std::move(w));
        }
      }
    };
    close();
    for (std::size_t l = 0; l < lvl; ++l) {
      img[l] = Coords(n, 0);
      img[l][l] = 1;
    }
    for (const auto& c : by_norm[gm[lvl * n + lvl]]) {
      if (orbit.count(c.v)) continue;
      bool ok = true;
      for (std::size_t l = 0; l < lvl && ok; ++l) ok = pair(c, img[l]) == gm[l * n + lvl];
      if (!ok) continue;
      img[lvl] = c.v;
      if (!extend(lvl + 1)) continue;
      IntMatrix t(n, n);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) t(i, j) = static_cast<long>(img[j][i]);
      if (t.transpose() * g.gram() * t != g.gram()) fail(ErrorKind::InvalidArgument, "automorphism check failed");
      res.generators.push_back(std::move(t));
      frontier.assign(orbit.begin(), orbit.end());
      close();
    }
    res.orbit_sizes[lvl] = orbit.size();
    res.order *= static_cast<unsigned long>(orbit.size());
  }
  return res;
}

inline Int automorphism_order(const GramForm& g, std::size_t dim_limit = 8) {
  return automorphism_group(g, dim_limit).order;
}

// ---------------------------------------------------------------------------
// Orthogonal decomposition

struct OrthogonalDecomposition {
  std::vector<GramForm> blocks;
  std::vector<IntMatrix> bases;  // columns in ambient coordinates
};

/// Splits G into indecomposable orthogonal summands: vectors of norm at most
/// max G_ii that are not sums of two orthogonal nonzero lattice vectors are
/// grouped into connected components of the non-orthogonality graph.
inline OrthogonalDecomposition orthogonal_decompose(const GramForm& g, std::size_t vector_budget = 20000) {
  if (!g.positive_definite()) fail(ErrorKind::NotPositiveDefinite, "form is not positive definite");
  const std::size_t n = g.dim();
  Int max_diag = 0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, g(i, i));
  std::vector<ShortVector> vs;
  detail::fincke_pohst(g, max_diag, [&](const Coords& x, const Int& norm) {
    if (vs.size() >= vector_budget) fail(ErrorKind::BudgetExceeded, "too many short vectors for decomposition");
    vs.push_back({x, norm});
    return true;
  });
  std::sort(vs.begin(), vs.end(), [](const ShortVector& a, const ShortVector& b) { return a.v < b.v; });

  const std::size_t N = vs.size();
  std::vector<IntVec> gv(N);
  for (std::size_t a = 0; a < N; ++a) {
    IntVec v(vs[a].v.begin(), vs[a].v.end());
    gv[a] = g.gram() * v;
  }
  auto pairing = [&](std::size_t a, std::size_t b) {
    Int s = 0;
    for (std::size_t i = 0; i < n; ++i) s += gv[a][i] * vs[b].v[i];
    return s;
  };
  // v decomposes iff some w with f(w) < f(v) has |(w, v)| = f(w)
  std::vector<char> indecomposable(N, 1);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N && indecomposable[a]; ++b)
      if (vs[b].norm < vs[a].norm && abs_int(pairing(b, a)) == vs[b].norm) indecomposable[a] = 0;

  std::vector<std::size_t> parent(N);
  for (std::size_t i = 0; i < N; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = a + 1; b < N; ++b)
      if (indecomposable[a] && indecomposable[b] && pairing(a, b) != 0) parent[find(a)] = find(b);

  std::map<std::size_t, std::vector<std::size_t>> comps;
  std::vector<std::size_t> order;
  for (std::size_t a = 0; a < N; ++a) {
    if (!indecomposable[a]) continue;
    auto r = find(a);
    if (!comps.count(r)) order.push_back(r);
    comps[r].push_back(a);
  }
  OrthogonalDecomposition out;
  for (auto r : order) {
    const auto& idx = comps[r];
    IntMatrix m(n, idx.size());
    for (std::size_t c = 0; c < idx.size(); ++c)
      for (std::size_t i = 0; i < n; ++i) m(i, c) = static_cast<long>(vs[idx[c]].v[i]);
    out.bases.push_back(column_hnf(m));
  }
  std::stable_sort(out.bases.begin(), out.bases.end(), [](const IntMatrix& a, const IntMatrix& b) { return a.cols() > b.cols(); });
  std::size_t total = 0;
  for (const auto& b : out.bases) total += b.cols();
  if (total != n) fail(ErrorKind::BadDecomposition, "components do not span the lattice");
  IntMatrix all(n, n);
  std::size_t c0 = 0;
  for (const auto& b : out.bases) {
    for (std::size_t c = 0; c < b.cols(); ++c)
      for (std::size_t i = 0; i < n; ++i) all(i, c0 + c) = b(i, c);
    c0 += b.cols();
    out.blocks.emplace_back(b.transpose() * g.gram() * b);
  }
  const Int det = determinant(all);
  if (det != 1 && det != -1) fail(ErrorKind::BadDecomposition, "component bases do not form a lattice basis");
  return out;
}

}  // namespace qf
