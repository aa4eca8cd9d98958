#pragma once
// Local invariants: p-adic densities by counting solutions of f(x) = m mod p^k,
// the archimedean density, ω_n, odd-p Jordan splitting and 2-adic splitting
// into hyperbolic planes.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qf/error.hpp"
#include "qf/exact.hpp"
#include "qf/interval.hpp"
#include "qf/lattice.hpp"

namespace qf {

enum class DensityKind { Padic, Archimedean };

struct DensityValue {
  DensityKind kind = DensityKind::Padic;
  Rat exact;                        // p-adic value
  std::optional<Interval> interval; // archimedean value
  unsigned stabilized_at_k = 0;
  bool stabilized = false;
  std::string certificate;          // "hensel", "consecutive", "unstabilized", "closed-form"
  std::vector<Rat> by_k;            // value at k = 1, 2, ...
};

enum class DensityMethod { Blocks, Exhaustive };

struct DensityOptions {
  DensityMethod method = DensityMethod::Blocks;
  unsigned k_max = 6;
  std::uint64_t budget = 100'000'000;  // counting work per k
  bool hensel_shortcut = true;
};

namespace detail {

inline Int balanced_mod(const Int& a, const Int& q) {
  Int r = mod_floor(a, q);
  if (2 * r > q) r -= q;
  return r;
}

inline std::optional<int> val_or_none(const Rat& a, const Int& p) {
  if (a == 0) return std::nullopt;
  return valuation(a, p);
}

/// Checked p^k as a machine integer; nullopt past `limit`.
inline std::optional<std::uint64_t> small_power(std::uint64_t p, unsigned k, std::uint64_t limit) {
  std::uint64_t q = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (q > limit / p) return std::nullopt;
    q *= p;
  }
  return q;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Splitting over Z_(p)

/// Block-diagonal form of G over the p-local integers: T^T G T = ⊕ blocks,
/// with T rational, denominators prime to p and det T a p-unit. Blocks are
/// 1×1, except 2×2 blocks at p = 2 when an off-diagonal entry has strictly
/// smaller valuation than every diagonal entry.
struct LocalSplit {
  std::vector<RatMatrix> blocks;
  RatMatrix transform;
};

inline LocalSplit local_block_split(const IntMatrix& g, const Int& p) {
  const std::size_t n = g.rows();
  RatMatrix a = to_rat(g);
  RatMatrix t = RatMatrix::identity(n);
  auto add = [&](std::size_t dst, std::size_t src, const Rat& k) {
    if (k == 0) return;
    a.add_row(dst, src, k);
    a.add_col(dst, src, k);
    t.add_col(dst, src, k);
  };
  auto swap = [&](std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    a.swap_cols(i, j);
    t.swap_cols(i, j);
  };

  LocalSplit out;
  std::size_t s = 0;
  while (s < n) {
    std::optional<int> vmin;
    for (std::size_t i = s; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        if (auto v = detail::val_or_none(a(i, j), p); v && (!vmin || *v < *vmin)) vmin = v;
    if (!vmin) {
      for (; s < n; ++s) out.blocks.push_back(RatMatrix(1, 1));
      break;
    }
    std::optional<std::size_t> diag;
    for (std::size_t i = s; i < n && !diag; ++i)
      if (auto v = detail::val_or_none(a(i, i), p); v && *v == *vmin) diag = i;
    if (diag) {
      swap(s, *diag);
      for (std::size_t i = s + 1; i < n; ++i) add(i, s, -a(i, s) / a(s, s));
      out.blocks.push_back(a.block(s, s, 1, 1));
      ++s;
      continue;
    }
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (std::size_t i = s; i < n && !found; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (auto v = detail::val_or_none(a(i, j), p); v && *v == *vmin) {
          bi = i, bj = j, found = true;
          break;
        }
    if (p != 2) {
      add(bi, bj, Rat(1));  // new diagonal 2a_ij + (higher valuation terms)
      continue;
    }
    swap(s, bi);
    swap(s + 1, bj == s ? bi : bj);
    RatMatrix binv = inverse(a.block(s, s, 2, 2));
    for (std::size_t r = s + 2; r < n; ++r) {
      Rat c1 = -(a(r, s) * binv(0, 0) + a(r, s + 1) * binv(1, 0));
      Rat c2 = -(a(r, s) * binv(0, 1) + a(r, s + 1) * binv(1, 1));
      add(r, s, c1);
      add(r, s + 1, c2);
    }
    out.blocks.push_back(a.block(s, s, 2, 2));
    s += 2;
  }
  out.transform = std::move(t);
  return out;
}

// ---------------------------------------------------------------------------
// Orbits of Z/p^k under multiplication by unit squares

namespace detail {

struct OrbitTable {
  std::uint64_t q = 1;
  std::vector<std::uint16_t> orb;   // orbit id of every residue
  std::vector<std::uint64_t> rep;   // a representative per orbit
  std::size_t count() const { return rep.size(); }
};

inline OrbitTable make_orbits(std::uint64_t p, unsigned k, std::uint64_t q) {
  OrbitTable t;
  t.q = q;
  t.orb.assign(q, 0);
  std::vector<char> square(p, 0);
  if (p != 2)
    for (std::uint64_t x = 1; x < p; ++x) square[(x * x) % p] = 1;
  std::vector<std::vector<int>> id(k + 1);
  for (std::uint64_t s = 0; s < q; ++s) {
    unsigned v = 0;
    std::uint64_t u = s;
    if (s == 0) {
      v = k;
    } else {
      while (u % p == 0) {
        u /= p;
        ++v;
      }
    }
    std::uint64_t cls = 0;
    if (v < k) {
      if (p == 2) {
        std::uint64_t w = 1;
        for (unsigned i = 0; i < std::min(3u, k - v); ++i) w *= 2;
        cls = u % w;
      } else {
        cls = square[u % p] ? 0 : 1;
      }
    }
    auto& row = id[v];
    if (row.size() <= cls) row.resize(cls + 1, -1);
    if (row[cls] < 0) {
      row[cls] = static_cast<int>(t.rep.size());
      t.rep.push_back(s);
    }
    t.orb[s] = static_cast<std::uint16_t>(row[cls]);
  }
  return t;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % q);
}

/// Number of solutions of f ≡ m (mod p^k) for a split form, via convolution
/// of per-block value histograms on unit-square orbits.
inline Int count_blocks(const LocalSplit& split, std::uint64_t p, unsigned k, const Int& m, std::uint64_t budget) {
  auto qopt = small_power(p, k, std::uint64_t(1) << 40);
  if (!qopt) fail(ErrorKind::BudgetExceeded, "modulus p^k too large");
  const std::uint64_t q = *qopt;
  const Int qz(std::to_string(q));
  std::uint64_t work = 0;
  for (const auto& b : split.blocks) {
    std::uint64_t w = b.rows() == 1 ? q : (q > (std::uint64_t(1) << 32) ? UINT64_MAX : q * q);
    work = (work > UINT64_MAX - w) ? UINT64_MAX : work + w;
  }
  if (work > budget || q > budget) fail(ErrorKind::BudgetExceeded, "block counting at p^" + std::to_string(k) + " exceeds budget");
  OrbitTable ot = make_orbits(p, k, q);
  const std::size_t no = ot.count();
  if (no * q > 4 * budget) fail(ErrorKind::BudgetExceeded, "orbit convolution exceeds budget");

  // pair[o][o1][o2] = #{s : orb(s) = o1, orb(rep_o - s) = o2}
  std::vector<std::uint64_t> pair(no * no * no, 0);
  for (std::size_t o = 0; o < no; ++o) {
    const std::uint64_t r = ot.rep[o];
    for (std::uint64_t s = 0; s < q; ++s) {
      const std::uint64_t d = (r + q - s) % q;
      pair[(o * no + ot.orb[s]) * no + ot.orb[d]]++;
    }
  }

  std::vector<Int> acc(no, 0);
  acc[ot.orb[0]] = 1;
  std::vector<std::uint64_t> cnt(q);
  for (const auto& b : split.blocks) {
    std::fill(cnt.begin(), cnt.end(), 0);
    if (b.rows() == 1) {
      const std::uint64_t a = std::stoull(reduce_mod(b(0, 0), qz).get_str());
      for (std::uint64_t x = 0; x < q; ++x) cnt[mulmod(a, mulmod(x, x, q), q)]++;
    } else {
      const std::uint64_t a = std::stoull(reduce_mod(b(0, 0), qz).get_str());
      const std::uint64_t c = std::stoull(reduce_mod(b(1, 1), qz).get_str());
      const std::uint64_t b2 = std::stoull(reduce_mod(2 * b(0, 1), qz).get_str());
      for (std::uint64_t x = 0; x < q; ++x) {
        const std::uint64_t ax2 = mulmod(a, mulmod(x, x, q), q);
        const std::uint64_t bx = mulmod(b2, x, q);
        for (std::uint64_t y = 0; y < q; ++y) {
          std::uint64_t v = (ax2 + mulmod(bx, y, q)) % q;
          v = (v + mulmod(c, mulmod(y, y, q), q)) % q;
          cnt[v]++;
        }
      }
    }
    std::vector<Int> h(no);
    for (std::size_t o = 0; o < no; ++o) h[o] = Int(std::to_string(cnt[ot.rep[o]]));
    std::vector<Int> next(no, 0);
    for (std::size_t o = 0; o < no; ++o)
      for (std::size_t o1 = 0; o1 < no; ++o1) {
        if (acc[o1] == 0) continue;
        for (std::size_t o2 = 0; o2 < no; ++o2) {
          const std::uint64_t c = pair[(o * no + o1) * no + o2];
          if (c == 0 || h[o2] == 0) continue;
          next[o] += Int(std::to_string(c)) * acc[o1] * h[o2];
        }
      }
    acc = std::move(next);
  }
  const std::uint64_t target = std::stoull(mod_floor(m, qz).get_str());
  return acc[ot.orb[target]];
}

/// Plain odometer count over (Z/p^k)^n with incremental form update.
inline Int count_exhaustive(const IntMatrix& g, std::uint64_t p, unsigned k, const Int& m, std::uint64_t budget) {
  const std::size_t n = g.rows();
  auto qopt = small_power(p, k, std::uint64_t(1) << 31);
  if (!qopt) fail(ErrorKind::BudgetExceeded, "modulus p^k too large");
  const std::uint64_t q = *qopt;
  if (!small_power(q, static_cast<unsigned>(n), budget))
    fail(ErrorKind::BudgetExceeded, "p^(k n) exceeds the counting budget");
  const Int qz(std::to_string(q));
  std::vector<std::uint64_t> gm(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gm[i * n + j] = std::stoull(mod_floor(g(i, j), qz).get_str());
  const std::uint64_t target = std::stoull(mod_floor(m, qz).get_str());
  std::vector<std::uint64_t> x(n, 0), y(n, 0);  // y = G x mod q
  std::uint64_t f = 0;
  std::uint64_t hits = 0;
  while (true) {
    if (f == target) ++hits;
    std::size_t j = 0;
    for (; j < n; ++j) {
      // x_j += 1 (mod q): f += 2 y_j + G_jj, y += G e_j
      f = (f + 2 * y[j] + gm[j * n + j]) % q;
      for (std::size_t i = 0; i < n; ++i) y[i] = (y[i] + gm[i * n + j]) % q;
      if (++x[j] < q) break;
      x[j] = 0;
    }
    if (j == n) break;
  }
  return Int(std::to_string(hits));
}

}  // namespace detail

/// Df_p^{-1}(m): #{x mod p^k : f(x) ≡ m} / p^{k(n-1)}, evaluated at k = 1, 2, ...
/// until two consecutive values agree.
inline DensityValue local_density(const GramForm& g, const Int& p, const Int& m, const DensityOptions& opt = {}) {
  if (!is_prime(p)) fail(ErrorKind::InvalidArgument, "p must be prime");
  if (opt.k_max < 1) fail(ErrorKind::InvalidArgument, "k_max must be >= 1");
  if (!p.fits_ulong_p() || p > 2'000'000'000) fail(ErrorKind::BudgetExceeded, "prime too large for counting");
  const std::uint64_t pp = p.get_ui();
  const std::size_t n = g.dim();

  std::optional<LocalSplit> split;
  auto value_at = [&](unsigned k) {
    Int count;
    if (opt.method == DensityMethod::Exhaustive) {
      count = detail::count_exhaustive(g.gram(), pp, k, m, opt.budget);
    } else {
      if (!split) split = local_block_split(g.gram(), p);
      count = detail::count_blocks(*split, pp, k, m, opt.budget);
    }
    Rat r(count, pow_int(p, static_cast<unsigned long>(k * (n - 1))));
    r.canonicalize();
    return r;
  };

  DensityValue out;
  out.kind = DensityKind::Padic;
  const bool smooth = pp != 2 && mod_floor(m, p) != 0 && mod_floor(g.det(), p) != 0;
  if (opt.hensel_shortcut && smooth) {
    out.by_k.push_back(value_at(1));
    out.exact = out.by_k.back();
    out.stabilized = true;
    out.stabilized_at_k = 1;
    out.certificate = "hensel";
    return out;
  }
  for (unsigned k = 1; k <= opt.k_max; ++k) {
    out.by_k.push_back(value_at(k));
    if (k >= 2 && out.by_k[k - 1] == out.by_k[k - 2]) {
      out.exact = out.by_k.back();
      out.stabilized = true;
      out.stabilized_at_k = k - 1;
      out.certificate = "consecutive";
      return out;
    }
  }
  out.exact = out.by_k.back();
  out.stabilized = false;
  out.stabilized_at_k = opt.k_max;
  out.certificate = "unstabilized";
  return out;
}

// ---------------------------------------------------------------------------
// Archimedean side

/// ω_n = π^{n/2} / Γ(n/2 + 1), volume of the unit n-ball.
inline Interval omega(unsigned n, mpfr_prec_t prec = kDefaultPrecisionBits) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "omega needs n >= 1");
  const Interval pi = Interval::pi(prec);
  if (n % 2 == 0) {
    Int fact = 1;
    for (unsigned i = 2; i <= n / 2; ++i) fact *= i;
    return pi.pow(n / 2) / Interval::exact(Rat(fact), prec);
  }
  // Γ(n/2 + 1) = n!! √π / 2^{(n+1)/2}
  Int dfact = 1;
  for (unsigned i = n; i > 1; i -= 2) dfact *= i;
  Rat c(pow_int(Int(2), (n + 1) / 2), dfact);
  c.canonicalize();
  return Interval::exact(c, prec) * pi.pow((n - 1) / 2);
}

/// (nπ)^{-1/2} (2πe/n)^{n/2}, an upper bound for ω_n from Γ(x+1) ≥ √(2πx)(x/e)^x.
inline Interval omega_stirling_bound(unsigned n, mpfr_prec_t prec = kDefaultPrecisionBits) {
  const Interval pi = Interval::pi(prec);
  const Interval nn = Interval::exact(static_cast<long>(n), prec);
  Interval base = Interval::exact(2, prec) * pi * Interval::e(prec) / nn;
  Interval half = base.sqrt();
  return half.pow(n) / (nn * pi).sqrt();
}

/// Df_∞^{-1}(y) = n / (2√disc) · ω_n · y^{n/2 - 1}.
inline DensityValue infinity_density(unsigned n, const Int& disc, const Rat& y, mpfr_prec_t prec = kDefaultPrecisionBits) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "dimension must be >= 1");
  if (disc <= 0) fail(ErrorKind::InvalidArgument, "discriminant must be positive");
  if (y <= 0) fail(ErrorKind::InvalidArgument, "y must be positive");
  const Interval yi = Interval::exact(y, prec);
  Interval ypow = Interval::exact(1, prec);
  if (n >= 2) {
    ypow = yi.pow((n - 2) / 2);
    if (n % 2 == 1) ypow = ypow * yi.sqrt();
  } else {
    ypow = Interval::exact(1, prec) / yi.sqrt();
  }
  Interval lead = Interval::exact(Rat(static_cast<long>(n)), prec) /
                  (Interval::exact(2, prec) * Interval::exact(Rat(disc), prec).sqrt());
  DensityValue out;
  out.kind = DensityKind::Archimedean;
  out.interval = lead * omega(n, prec) * ypow;
  out.stabilized = true;
  out.certificate = "closed-form";
  return out;
}

/// ζ(s) for integer s ≥ 2: partial sum to N plus the integral tail bracket
/// [1/((s-1)(N+1)^{s-1}), 1/((s-1)N^{s-1})].
inline Interval zeta_interval(unsigned s, unsigned long terms = 20000, mpfr_prec_t prec = kDefaultPrecisionBits) {
  if (s < 2) fail(ErrorKind::InvalidArgument, "zeta needs s >= 2");
  if (terms < 1) fail(ErrorKind::InvalidArgument, "zeta needs at least one term");
  Interval sum = Interval::exact(0, prec);
  const Interval one = Interval::exact(1, prec);
  for (unsigned long k = 1; k <= terms; ++k) sum = sum + one / Interval::exact(Rat(static_cast<long>(k)), prec).pow(s);
  const Int N(std::to_string(terms));
  Rat lo(1, Int((s - 1) * pow_int(N + 1, s - 1)));
  Rat hi(1, Int((s - 1) * pow_int(N, s - 1)));
  lo.canonicalize();
  hi.canonicalize();
  return sum + Interval::hull(lo, hi, prec);
}

// ---------------------------------------------------------------------------
// Jordan splitting at odd p

struct JordanBlock {
  int exponent = 0;
  Int scale = 1;        // p^exponent
  GramForm unit_block;  // diagonal, entries reduced mod p^K
};

struct JordanDecomposition {
  std::vector<JordanBlock> blocks;
  IntMatrix transform;     // T mod p^K, det T a p-unit
  IntMatrix reduced_gram;  // T^T G T mod p^K
  Int modulus;             // p^K
};

/// T^T G T ≡ ⊕ p^{e_i} U_i (mod p^K) with U_i diagonal p-unit blocks and
/// e_1 < e_2 < ....
inline JordanDecomposition jordan_decompose_odd(const GramForm& g, const Int& p, unsigned K) {
  if (p == 2 || !is_prime(p)) fail(ErrorKind::InvalidArgument, "p must be an odd prime");
  if (K < 1) fail(ErrorKind::InvalidArgument, "precision exponent must be >= 1");
  if (g.det() == 0) fail(ErrorKind::SingularForm, "form is singular");
  const Int q = pow_int(p, K);
  LocalSplit split = local_block_split(g.gram(), p);
  const std::size_t n = g.dim();
  std::vector<int> ex(n);
  std::vector<Rat> unit(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Rat& d = split.blocks[i](0, 0);
    ex[i] = valuation(d, p);
    if (ex[i] >= static_cast<int>(K))
      fail(ErrorKind::PrecisionTooLow, "Jordan exponent " + std::to_string(ex[i]) + " not below K = " + std::to_string(K));
    unit[i] = d / Rat(pow_int(p, static_cast<unsigned long>(ex[i])));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ex[a] < ex[b]; });

  JordanDecomposition out;
  out.modulus = q;
  out.transform = IntMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r)
      out.transform(r, c) = detail::balanced_mod(reduce_mod(split.transform(r, order[c]), q), q);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    std::vector<Int> diag;
    while (j < n && ex[order[j]] == ex[order[i]]) diag.push_back(detail::balanced_mod(reduce_mod(unit[order[j++]], q), q));
    JordanBlock b;
    b.exponent = ex[order[i]];
    b.scale = pow_int(p, static_cast<unsigned long>(b.exponent));
    b.unit_block = diagonal_form(diag);
    out.blocks.push_back(std::move(b));
    i = j;
  }
  IntMatrix tg = out.transform.transpose() * g.gram() * out.transform;
  out.reduced_gram = IntMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.reduced_gram(i, j) = detail::balanced_mod(tg(i, j), q);
  return out;
}

// ---------------------------------------------------------------------------
// 2-adic splitting

enum class TwoAdicBlockType { Hyperbolic, HyperbolicPlusSquare };  // 2x1x2, 2x1x2 + x2^2

struct TwoAdicBlock {
  TwoAdicBlockType type;
  IntMatrix gram;  // [[0,1],[1,0]] or [[0,1],[1,1]]
};

struct TwoAdicSplit {
  std::vector<TwoAdicBlock> blocks;
  IntMatrix residual;   // Gram of the remainder mod 2^K (balanced residues)
  IntMatrix transform;  // columns: block vectors, then remainder basis; mod 2^K
  IntMatrix reduced_gram;
  Int modulus;
};

namespace detail {

/// Primitive x mod 8 with f(x) ≡ 0 (mod 8) and Gx ≢ 0 (mod 2), searched by
/// increasing support; nullopt if none within the candidate cap.
inline std::optional<std::vector<int>> isotropic_mod8(const IntMatrix& g, std::uint64_t cap = 16'777'216) {
  const std::size_t d = g.rows();
  std::vector<int> gm(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) gm[i * d + j] = static_cast<int>(mod_floor(g(i, j), Int(8)).get_si());
  std::uint64_t tried = 0;
  for (std::size_t s = 1; s <= d; ++s) {
    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<int> val(s, 1);
      while (true) {
        if (++tried > cap) return std::nullopt;
        bool odd = false;
        for (int v : val) odd = odd || (v & 1);
        if (odd) {
          int f = 0;
          for (std::size_t a = 0; a < s; ++a)
            for (std::size_t b = 0; b < s; ++b) f += gm[idx[a] * d + idx[b]] * val[a] * val[b];
          if (f % 8 == 0) {
            bool unit_pairing = false;
            for (std::size_t i = 0; i < d && !unit_pairing; ++i) {
              int y = 0;
              for (std::size_t a = 0; a < s; ++a) y += gm[i * d + idx[a]] * val[a];
              unit_pairing = (y & 1) != 0;
            }
            if (unit_pairing) {
              std::vector<int> x(d, 0);
              for (std::size_t a = 0; a < s; ++a) x[idx[a]] = val[a];
              return x;
            }
          }
        }
        std::size_t a = 0;
        while (a < s && val[a] == 7) val[a++] = 1;
        if (a == s) break;
        ++val[a];
      }
      // next subset of size s
      std::size_t i = s;
      while (i > 0 && idx[i - 1] == d - s + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Repeatedly splits off 2x1x2 or 2x1x2 + x2^2 planes (mod 2^K) while an
/// isotropic vector with a unit pairing exists in the remainder.
inline TwoAdicSplit two_adic_split(const GramForm& g, unsigned K) {
  if (K < 3) fail(ErrorKind::InvalidArgument, "2-adic precision exponent must be >= 3");
  const std::size_t n = g.dim();
  const Int q = pow_int(Int(2), K);
  auto red = [&](const Int& a) { return detail::balanced_mod(a, q); };
  auto reduce_matrix = [&](IntMatrix m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = red(m(i, j));
    return m;
  };

  TwoAdicSplit out;
  out.modulus = q;
  IntMatrix basis = IntMatrix::identity(n);  // remainder basis, ambient coordinates
  std::vector<IntVec> block_vectors;
  while (basis.cols() >= 2) {
    const std::size_t d = basis.cols();
    const IntMatrix r = reduce_matrix(basis.transpose() * g.gram() * basis);
    auto x8 = detail::isotropic_mod8(r);
    if (!x8) break;
    IntVec x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = (*x8)[i];
    auto pairing = [&](const IntVec& a, const IntVec& b) { return red(dot(a, r * b)); };
    std::size_t piv = 0;
    {
      IntVec rx = r * x;
      while (mpz_even_p(rx[piv].get_mpz_t())) ++piv;
    }
    IntVec y(d, 0);
    y[piv] = 1;
    // Hensel: x <- x + 2^{j-1} s y keeps f(x) ≡ 0 one power further
    for (unsigned j = 3; j < K; ++j) {
      const Int fx = mod_floor(dot(x, r * x), pow_int(Int(2), j + 1));
      if (fx == 0) continue;
      const Int step = pow_int(Int(2), j - 1);
      for (std::size_t i = 0; i < d; ++i) x[i] = red(x[i] + step * y[i]);
    }
    if (mod_floor(dot(x, r * x), q) != 0) fail(ErrorKind::InvalidArgument, "2-adic lift failed");
    Int inv;
    const Int xy = mod_floor(pairing(x, y), q);
    mpz_invert(inv.get_mpz_t(), xy.get_mpz_t(), q.get_mpz_t());
    IntVec w(d);
    for (std::size_t i = 0; i < d; ++i) w[i] = red(y[i] * inv);
    const Int t = -floor_div(mod_floor(dot(w, r * w), q), Int(2));
    for (std::size_t i = 0; i < d; ++i) w[i] = red(w[i] + t * x[i]);
    const Int b = mod_floor(dot(w, r * w), q);
    // coordinates (i, j) where [x w] has an odd 2x2 minor
    std::size_t pi = d, pj = d;
    for (std::size_t i = 0; i < d && pi == d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (mpz_odd_p(Int(x[i] * w[j] - x[j] * w[i]).get_mpz_t())) {
          pi = i, pj = j;
          break;
        }
    if (pi == d) fail(ErrorKind::InvalidArgument, "2-adic block is not primitive");
    // B^{-1} = [[-b, 1], [1, 0]] for B = [[0, 1], [1, b]]
    IntMatrix next(d, d - 2);
    std::size_t c = 0;
    for (std::size_t k = 0; k < d; ++k) {
      if (k == pi || k == pj) continue;
      IntVec e(d, 0);
      e[k] = 1;
      const Int xe = pairing(x, e), we = pairing(w, e);
      const Int alpha = -b * xe + we, beta = xe;
      for (std::size_t i = 0; i < d; ++i) next(i, c) = red(e[i] - alpha * x[i] - beta * w[i]);
      ++c;
    }
    block_vectors.push_back(basis * x);
    block_vectors.push_back(basis * w);
    out.blocks.push_back(b == 0 ? TwoAdicBlock{TwoAdicBlockType::Hyperbolic, IntMatrix{{0, 1}, {1, 0}}}
                                : TwoAdicBlock{TwoAdicBlockType::HyperbolicPlusSquare, IntMatrix{{0, 1}, {1, 1}}});
    basis = reduce_matrix(basis * next);
  }
  if (out.blocks.empty())
    fail(ErrorKind::NoIsotropicVector, "no isotropic vector with a unit pairing found mod 8");

  out.transform = IntMatrix(n, n);
  for (std::size_t c = 0; c < block_vectors.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) out.transform(i, c) = red(block_vectors[c][i]);
  for (std::size_t c = 0; c < basis.cols(); ++c)
    for (std::size_t i = 0; i < n; ++i) out.transform(i, block_vectors.size() + c) = basis(i, c);
  out.residual = reduce_matrix(basis.transpose() * g.gram() * basis);
  out.reduced_gram = reduce_matrix(out.transform.transpose() * g.gram() * out.transform);
  return out;
}

}  // namespace qf
