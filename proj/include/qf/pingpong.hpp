#pragma once
// Hyperbolic isometries of a Lorentzian form: dominant eigenvalue, the two
// isotropic eigen-rays (exact in Q(√D) when the eigenvalue is quadratic),
// translation length, and a ping-pong certificate for <g1^m, g2^m>.
//
// The certificate uses Dirichlet half-spaces at a base point x0:
//   D(a) = {x : d(x, a x0) <= d(x, x0)} = {x : (x, a x0 - x0) >= 0}.
// a maps the complement of D(a^{-1}) strictly into D(a) for every isometry a,
// so four pairwise disjoint half-spaces for a^{±1}, b^{±1} make <a, b> free.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qf/error.hpp"
#include "qf/exact.hpp"
#include "qf/hyperbolic.hpp"
#include "qf/interval.hpp"
#include "qf/lattice.hpp"

namespace qf {

// ---------------------------------------------------------------------------
// Polynomials over Q, coefficients from degree 0 upwards

using Poly = std::vector<Rat>;

namespace poly {

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Rat eval(const Poly& p, const Rat& x) {
  Rat r = 0;
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

inline Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

/// p = q d + r with deg r < deg d.
inline std::pair<Poly, Poly> divmod(Poly p, const Poly& d) {
  if (d.empty()) fail(ErrorKind::InvalidArgument, "polynomial division by zero");
  trim(p);
  Poly q(p.size() >= d.size() ? p.size() - d.size() + 1 : 0, Rat(0));
  while (!p.empty() && p.size() >= d.size()) {
    const std::size_t shift = p.size() - d.size();
    const Rat k = p.back() / d.back();
    q[shift] = k;
    for (std::size_t i = 0; i < d.size(); ++i) p[shift + i] -= k * d[i];
    trim(p);
  }
  trim(q);
  return {q, p};
}

inline Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const Rat lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

inline std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> s{p, derivative(p)};
  while (!s.back().empty()) {
    Poly r = divmod(s[s.size() - 2], s.back()).second;
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    s.push_back(std::move(r));
  }
  if (s.back().empty()) s.pop_back();
  return s;
}

inline int sign_changes(const std::vector<Poly>& chain, const Rat& x) {
  int changes = 0, last = 0;
  for (const auto& p : chain) {
    const int s = sgn(eval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace poly

/// det(x I - A) by Faddeev-LeVerrier.
inline Poly characteristic_polynomial(const RatMatrix& a) {
  if (!a.square()) fail(ErrorKind::InvalidArgument, "characteristic polynomial of non-square matrix");
  const std::size_t n = a.rows();
  Poly c(n + 1, Rat(0));
  c[n] = 1;
  RatMatrix m(n, n);
  const RatMatrix id = RatMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * id;
    const RatMatrix am = a * m;
    Rat tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / static_cast<long>(k);
  }
  return c;
}

/// Rational isolating intervals (lo, hi] for the real roots of a squarefree p.
inline std::vector<std::pair<Rat, Rat>> isolate_real_roots(const Poly& p) {
  std::vector<std::pair<Rat, Rat>> out;
  if (poly::degree(p) < 1) return out;
  Rat bound = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) bound = std::max(bound, Rat(abs(p[i] / p.back())));
  bound += 1;
  const auto chain = poly::sturm_chain(p);
  std::vector<std::pair<Rat, Rat>> todo{{-bound, bound}};
  while (!todo.empty()) {
    auto [lo, hi] = todo.back();
    todo.pop_back();
    const int count = poly::sign_changes(chain, lo) - poly::sign_changes(chain, hi);
    if (count == 0) continue;
    if (count == 1) {
      out.emplace_back(lo, hi);
      continue;
    }
    const Rat mid = (lo + hi) / 2;
    todo.push_back({lo, mid});
    todo.push_back({mid, hi});
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Shrinks an isolating interval (lo, hi] to width below `width`.
inline std::pair<Rat, Rat> refine_root(const Poly& p, Rat lo, Rat hi, const Rat& width) {
  const auto chain = poly::sturm_chain(p);
  while (hi - lo > width) {
    const Rat mid = (lo + hi) / 2;
    if (poly::sign_changes(chain, lo) - poly::sign_changes(chain, mid) == 1)
      hi = mid;
    else
      lo = mid;
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Q(√D)

struct Quad {
  Rat a, b;  // a + b √D
  friend bool operator==(const Quad&, const Quad&) = default;
};

struct QuadField {
  Int D;

  Quad add(const Quad& x, const Quad& y) const { return {x.a + y.a, x.b + y.b}; }
  Quad sub(const Quad& x, const Quad& y) const { return {x.a - y.a, x.b - y.b}; }
  Quad mul(const Quad& x, const Quad& y) const { return {x.a * y.a + Rat(D) * x.b * y.b, x.a * y.b + x.b * y.a}; }
  Quad inv(const Quad& x) const {
    const Rat n = x.a * x.a - Rat(D) * x.b * x.b;
    if (n == 0) fail(ErrorKind::InvalidArgument, "division by zero in Q(sqrt D)");
    return {x.a / n, -x.b / n};
  }
  static bool zero(const Quad& x) { return x.a == 0 && x.b == 0; }
  static Quad conj(const Quad& x) { return {x.a, -x.b}; }
  Interval approx(const Quad& x, mpfr_prec_t prec) const {
    return Interval::exact(x.a, prec) + Interval::exact(x.b, prec) * Interval::exact(Rat(D), prec).sqrt();
  }
};

using QuadVec = std::vector<Quad>;

namespace detail {

/// A nonzero kernel vector of a square matrix over Q(√D) of corank >= 1.
inline QuadVec quad_kernel_vector(const QuadField& k, std::vector<QuadVec> m) {
  const std::size_t rows = m.size(), cols = m.empty() ? 0 : m[0].size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && QuadField::zero(m[piv][c])) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    const Quad inv = k.inv(m[r][c]);
    for (auto& x : m[r]) x = k.mul(x, inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || QuadField::zero(m[i][c])) continue;
      const Quad f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = k.sub(m[i][j], k.mul(f, m[r][j]));
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::size_t free_col = cols;
  for (std::size_t c = 0; c < cols && free_col == cols; ++c)
    if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) free_col = c;
  if (free_col == cols) fail(ErrorKind::InvalidArgument, "matrix has trivial kernel");
  QuadVec v(cols, Quad{0, 0});
  v[free_col] = Quad{1, 0};
  for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = Quad{-m[i][free_col].a, -m[i][free_col].b};
  return v;
}

/// Interval enclosure of the eigenvector of A for an interval eigenvalue,
/// normalised so one coordinate equals 1.
inline std::optional<std::vector<Interval>> interval_eigenvector(const RatMatrix& a, const Interval& lambda, mpfr_prec_t prec) {
  const std::size_t n = a.rows();
  for (std::size_t fix = 0; fix < n; ++fix)
    for (std::size_t drop = 0; drop < n; ++drop) {
      // (n-1) equations, unknowns all coordinates but `fix`
      std::vector<std::vector<Interval>> m;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == drop) continue;
        std::vector<Interval> row;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == fix) continue;
          Interval e = Interval::exact(a(i, j), prec);
          if (i == j) e = e - lambda;
          row.push_back(e);
        }
        Interval rhs = Interval::exact(a(i, fix), prec);
        if (i == fix) rhs = rhs - lambda;
        row.push_back(-rhs);
        m.push_back(std::move(row));
      }
      const std::size_t k = n - 1;
      bool ok = true;
      for (std::size_t c = 0; c < k && ok; ++c) {
        std::size_t piv = c;
        while (piv < k && m[piv][c].contains_zero()) ++piv;
        if (piv == k) {
          ok = false;
          break;
        }
        std::swap(m[c], m[piv]);
        for (std::size_t i = c + 1; i < k; ++i) {
          const Interval f = m[i][c] / m[c][c];
          for (std::size_t j = c; j <= k; ++j) m[i][j] = m[i][j] - f * m[c][j];
        }
      }
      if (!ok) continue;
      std::vector<Interval> sol(k, Interval::exact(0, prec));
      for (std::size_t c = k; c-- > 0;) {
        Interval s = m[c][k];
        for (std::size_t j = c + 1; j < k; ++j) s = s - m[c][j] * sol[j];
        sol[c] = s / m[c][c];
      }
      std::vector<Interval> v;
      for (std::size_t j = 0, t = 0; j < n; ++j) v.push_back(j == fix ? Interval::exact(1, prec) : sol[t++]);
      return v;
    }
  return std::nullopt;
}

}  // namespace detail

/// An isotropic eigen-ray: exact over Q(√D) when `exact`, always enclosed by
/// `approx`.
struct LightRay {
  bool exact = false;
  QuadVec coords;
  std::vector<Interval> approx;
};

struct TranslationAxis {
  Interval lambda;  // dominant eigenvalue, |lambda| > 1
  bool quadratic = false;
  Int trace;        // t with lambda^2 - t lambda + 1 = 0 (quadratic case)
  Int D;            // t^2 - 4
  LightRay attracting, repelling;
};

namespace detail {

inline std::vector<QuadVec> shifted_matrix(const RatMatrix& a, const Quad& lambda) {
  const std::size_t n = a.rows();
  std::vector<QuadVec> m(n, QuadVec(n, Quad{0, 0}));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = Quad{a(i, j) - (i == j ? lambda.a : Rat(0)), i == j ? -lambda.b : Rat(0)};
  return m;
}

inline Interval dominant_eigenvalue(const Poly& charpoly, mpfr_prec_t prec) {
  const Poly sf = poly::divmod(charpoly, poly::gcd(charpoly, poly::derivative(charpoly))).first;
  const Rat width(1, pow_int(Int(2), static_cast<unsigned long>(prec + 8)));
  std::optional<std::pair<Rat, Rat>> best;
  for (auto [lo, hi] : isolate_real_roots(sf)) {
    // decide |root| > 1 exactly: ±1 are rational and tested directly
    auto contains = [&](const Rat& x) { return lo < x && x <= hi; };
    if ((contains(Rat(1)) && poly::eval(sf, Rat(1)) == 0) || (contains(Rat(-1)) && poly::eval(sf, Rat(-1)) == 0)) continue;
    while ((lo < 1 && hi > 1) || (lo < -1 && hi > -1)) std::tie(lo, hi) = refine_root(sf, lo, hi, (hi - lo) / 2);
    if (hi <= 1 && lo >= -1) continue;
    std::tie(lo, hi) = refine_root(sf, lo, hi, width);
    auto mag = [](const std::pair<Rat, Rat>& r) { return std::max(Rat(abs(r.first)), Rat(abs(r.second))); };
    if (!best || mag({lo, hi}) > mag(*best)) best = {lo, hi};
  }
  if (!best) fail(ErrorKind::NotHyperbolic, "no real eigenvalue of modulus > 1");
  return Interval::hull(best->first, best->second, prec);
}

}  // namespace detail

/// Attracting and repelling isotropic eigen-rays of a hyperbolic isometry.
inline TranslationAxis translation_axis(const GramForm& f, const RatMatrix& g, mpfr_prec_t prec = kDefaultPrecisionBits) {
  if (!is_isometry(f, g)) fail(ErrorKind::InvalidArgument, "matrix does not preserve the form");
  const Poly cp = characteristic_polynomial(g);
  TranslationAxis ax;
  ax.lambda = detail::dominant_eigenvalue(cp, prec);

  // quadratic case: x^2 - t x + 1 divides the characteristic polynomial
  const Interval tl = ax.lambda + Interval::exact(1, prec) / ax.lambda;
  for (Int t = floor_rat(tl.lower_rat()); t <= ceil_rat(tl.upper_rat()); ++t) {
    if (abs_int(t) <= 2) continue;
    const Poly quad{Rat(1), Rat(-t), Rat(1)};
    if (!poly::divmod(cp, quad).second.empty()) continue;
    const QuadField k{t * t - 4};
    const Quad lam{Rat(t) / 2, Rat(t > 0 ? 1 : -1) / 2};
    if (!k.approx(lam, prec).overlaps(ax.lambda)) continue;
    ax.quadratic = true;
    ax.trace = t;
    ax.D = k.D;
    ax.lambda = k.approx(lam, prec);
    QuadVec v = detail::quad_kernel_vector(k, detail::shifted_matrix(g, lam));
    QuadVec w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = QuadField::conj(v[i]);
    for (auto* ray : {&ax.attracting, &ax.repelling}) {
      ray->exact = true;
      ray->coords = ray == &ax.attracting ? v : w;
      for (const auto& c : ray->coords) ray->approx.push_back(k.approx(c, prec));
    }
    return ax;
  }

  auto v = detail::interval_eigenvector(g, ax.lambda, prec);
  auto w = detail::interval_eigenvector(g, Interval::exact(1, prec) / ax.lambda, prec);
  if (!v || !w) fail(ErrorKind::PrecisionTooLow, "eigenvector enclosure failed");
  ax.attracting.approx = *v;
  ax.repelling.approx = *w;
  return ax;
}

/// f evaluated on a ray: exact zero over Q(√D), or an enclosure containing 0.
inline bool ray_is_isotropic(const GramForm& f, const TranslationAxis& ax, const LightRay& ray) {
  const std::size_t n = f.dim();
  if (ray.exact) {
    const QuadField k{ax.D};
    Quad s{0, 0};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        s = k.add(s, k.mul(Quad{Rat(f(i, j)), 0}, k.mul(ray.coords[i], ray.coords[j])));
    return QuadField::zero(s);
  }
  Interval s = Interval::exact(0, ray.approx[0].precision());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s = s + Interval::exact(Rat(f(i, j))) * ray.approx[i] * ray.approx[j];
  return s.contains_zero();
}

/// log |lambda| for the dominant eigenvalue.
inline Interval translation_length(const GramForm& f, const RatMatrix& g, mpfr_prec_t prec = kDefaultPrecisionBits) {
  return translation_axis(f, g, prec).lambda.abs().log();
}

// ---------------------------------------------------------------------------
// Ping-pong

struct HalfSpace {
  std::string label;  // "a+", "a-", "b+", "b-"
  RatVec normal;      // region {x : (x, normal) >= 0}
};

struct SchottkyCertificate {
  unsigned m = 0;
  RatVec base_point;
  std::vector<HalfSpace> regions;
  std::vector<std::vector<Rat>> pairings;  // (n_i, n_j)
  bool mapping_verified = false;           // a n(a-) = -n(a+), b n(b-) = -n(b+)
  std::size_t words_checked = 0;
  bool word_audit_passed = false;
};

inline RatMatrix isometry_inverse(const GramForm& f, const RatMatrix& t) {
  const RatMatrix g = to_rat(f.gram());
  return inverse(g) * t.transpose() * g;
}

inline RatMatrix matrix_power(RatMatrix a, unsigned e) {
  RatMatrix r = RatMatrix::identity(a.rows());
  while (e) {
    if (e & 1) r = r * a;
    a = a * a;
    e >>= 1;
  }
  return r;
}

/// All reduced words of length 1..max_len in a^{±1}, b^{±1}; returns the
/// number checked and whether none equals the identity.
inline std::pair<std::size_t, bool> word_audit(const GramForm& f, const RatMatrix& a, const RatMatrix& b, unsigned max_len) {
  const std::vector<RatMatrix> letters{a, isometry_inverse(f, a), b, isometry_inverse(f, b)};
  const RatMatrix id = RatMatrix::identity(a.rows());
  std::size_t checked = 0;
  bool ok = true;
  std::function<void(const RatMatrix&, int, unsigned)> rec = [&](const RatMatrix& w, int last, unsigned len) {
    if (len == max_len) return;
    for (int l = 0; l < 4; ++l) {
      if (last >= 0 && (l ^ 1) == last) continue;  // inverse pairs are (0,1), (2,3)
      RatMatrix next = w * letters[static_cast<std::size_t>(l)];
      ++checked;
      if (next == id) ok = false;
      rec(next, l, len + 1);
    }
  };
  rec(id, -1, 0);
  return {checked, ok};
}

namespace detail {

inline bool same_ray(const TranslationAxis& x, const LightRay& r, const TranslationAxis& y, const LightRay& s) {
  const std::size_t n = r.approx.size();
  if (r.exact && s.exact) {
    if (x.D != y.D) return false;  // distinct quadratic fields share no irrational direction
    const QuadField k{x.D};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!QuadField::zero(k.sub(k.mul(r.coords[i], s.coords[j]), k.mul(r.coords[j], s.coords[i])))) return false;
    return true;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!(r.approx[i] * s.approx[j] - r.approx[j] * s.approx[i]).contains_zero()) return false;
  return true;
}

}  // namespace detail

/// Least m <= m_max such that the Dirichlet half-spaces of g1^{±m}, g2^{±m}
/// at x0 are pairwise disjoint, with the ping-pong table and word audit.
inline SchottkyCertificate schottky_certify(const GramForm& f, const RatMatrix& g1, const RatMatrix& g2, const RatVec& x0,
                                            unsigned m_max = 20, unsigned audit_length = 6,
                                            mpfr_prec_t prec = kDefaultPrecisionBits) {
  if (!f.lorentzian()) fail(ErrorKind::InvalidArgument, "form must have signature (n,1)");
  if (f.value(x0) >= 0) fail(ErrorKind::InvalidArgument, "base point must satisfy f(x0) < 0");
  for (const auto* g : {&g1, &g2}) {
    if (!is_isometry(f, *g)) fail(ErrorKind::InvalidArgument, "generator does not preserve the form");
    if (!preserves_sheet(f, *g, x0)) fail(ErrorKind::InvalidArgument, "generator swaps the sheets");
  }
  const TranslationAxis a1 = translation_axis(f, g1, prec);
  const TranslationAxis a2 = translation_axis(f, g2, prec);
  if (g1 * g2 == g2 * g1) fail(ErrorKind::SharedEndpoint, "generators commute");
  for (const auto* r : {&a1.attracting, &a1.repelling})
    for (const auto* s : {&a2.attracting, &a2.repelling})
      if (detail::same_ray(a1, *r, a2, *s)) fail(ErrorKind::SharedEndpoint, "axes share a boundary point");

  const RatMatrix g1i = isometry_inverse(f, g1), g2i = isometry_inverse(f, g2);
  for (unsigned m = 1; m <= m_max; ++m) {
    const RatMatrix a = matrix_power(g1, m), ai = matrix_power(g1i, m);
    const RatMatrix b = matrix_power(g2, m), bi = matrix_power(g2i, m);
    auto normal = [&](const RatMatrix& t) {
      RatVec y = t * x0;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= x0[i];
      return y;
    };
    std::vector<HalfSpace> hs{{"a+", normal(a)}, {"a-", normal(ai)}, {"b+", normal(b)}, {"b-", normal(bi)}};
    std::vector<std::vector<Rat>> table(4, std::vector<Rat>(4));
    bool ok = true;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) table[i][j] = f.pair(hs[i].normal, hs[j].normal);
    for (std::size_t i = 0; i < 4 && ok; ++i) {
      ok = table[i][i] > 0;
      for (std::size_t j = i + 1; j < 4 && ok; ++j)
        ok = table[i][j] < 0 && table[i][j] * table[i][j] > table[i][i] * table[j][j];
    }
    if (!ok) continue;
    SchottkyCertificate cert;
    cert.m = m;
    cert.base_point = x0;
    cert.regions = hs;
    cert.pairings = table;
    auto negated = [](RatVec v) {
      for (auto& x : v) x = -x;
      return v;
    };
    cert.mapping_verified = a * hs[1].normal == negated(hs[0].normal) && b * hs[3].normal == negated(hs[2].normal);
    std::tie(cert.words_checked, cert.word_audit_passed) = word_audit(f, a, b, audit_length);
    return cert;
  }
  fail(ErrorKind::SearchExhausted, "no disjoint half-space configuration for m <= " + std::to_string(m_max));
}

/// Symmetric-square action of M = [[p,q],[r,s]] on binary forms (a, b, c),
/// preserving b^2 - 4ac when det M = ±1.
inline RatMatrix symmetric_square(const IntMatrix& mtx) {
  if (mtx.rows() != 2 || mtx.cols() != 2) fail(ErrorKind::InvalidArgument, "symmetric square needs a 2x2 matrix");
  const Rat p(mtx(0, 0)), q(mtx(0, 1)), r(mtx(1, 0)), s(mtx(1, 1));
  return RatMatrix{{p * p, p * r, r * r}, {2 * p * q, p * s + q * r, 2 * r * s}, {q * q, q * s, s * s}};
}

/// Gram matrix of the discriminant form b^2 - 4ac on (a, b, c).
inline GramForm discriminant_form() { return GramForm(IntMatrix{{0, 0, -2}, {0, 1, 0}, {-2, 0, 0}}); }

}  // namespace qf
