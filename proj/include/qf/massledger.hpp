#pragma once
// Siegel's mass formula as a checkable identity
//   Σ w_i r_i(m) = ε · Df_∞^{-1}(m) · ∏_p Df_p^{-1}(m),
// the inequality ledger for the 41-dimensional genus of discriminant 2, and
// the class-count chain built on King's mass.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qf/enumerate.hpp"
#include "qf/error.hpp"
#include "qf/exact.hpp"
#include "qf/interval.hpp"
#include "qf/lattice.hpp"
#include "qf/localform.hpp"

namespace qf {

inline std::vector<unsigned long> primes_up_to(unsigned long bound) {
  std::vector<unsigned long> out;
  if (bound < 2) return out;
  std::vector<bool> composite(bound + 1, false);
  for (unsigned long i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (unsigned long j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

/// ε = 1/2 for binary forms, 1 from dimension 3 on.
inline Rat siegel_epsilon(std::size_t n) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "the mass formula needs dimension >= 2");
  return n == 2 ? Rat(1, 2) : Rat(1);
}

struct PrimeFactor {
  unsigned long p = 0;
  DensityValue density;
};

struct SiegelRhs {
  Int m;
  unsigned long prime_bound = 0;
  Rat epsilon;
  Interval archimedean;
  std::vector<PrimeFactor> factors;
  Rat euler_product;  // exact product over p <= prime_bound
  Interval value;
  // |log ∏_{p > B} D_p| <= tail_log_bound when every prime dividing 2·m·det is
  // <= B and n >= 4 (then |D_p - 1| <= p^{-(n-1)/2}); empty otherwise.
  std::optional<Rat> tail_log_bound;
};

namespace detail {

/// Σ_{k > B} k^{-s} / (1 - B^{-s}) with s = (n-1)/2, bounded by the integral.
inline std::optional<Rat> euler_tail_bound(std::size_t n, unsigned long bound, const Int& m, const Int& det, mpfr_prec_t prec) {
  if (n < 4 || bound < 2) return std::nullopt;
  Int rest = abs_int(2 * m * det);
  for (unsigned long p : primes_up_to(bound))
    while (rest % p == 0) rest /= p;
  if (rest != 1) return std::nullopt;
  const Interval b = Interval::exact(Rat(static_cast<long>(bound)), prec);
  const Interval s = Interval::exact(Rat(static_cast<long>(n - 1)) / 2, prec);
  const Interval one = Interval::exact(1, prec);
  const Interval bs = (s * b.log()).exp();  // B^s
  const Interval t = b / ((s - one) * bs) / (one - one / bs);
  return t.upper_rat();
}

}  // namespace detail

/// ε · Df_∞^{-1}(m) · ∏_{p <= prime_bound} Df_p^{-1}(m); the tail is not included.
inline SiegelRhs siegel_rhs(const GramForm& g, const Int& m, unsigned long prime_bound, const DensityOptions& opt = {},
                            mpfr_prec_t prec = kDefaultPrecisionBits) {
  if (!g.positive_definite()) fail(ErrorKind::NotPositiveDefinite, "the mass formula needs a positive definite form");
  if (m <= 0) fail(ErrorKind::InvalidArgument, "m must be positive");
  if (prime_bound < 2) fail(ErrorKind::InvalidArgument, "prime bound must be >= 2");
  SiegelRhs out;
  out.m = m;
  out.prime_bound = prime_bound;
  out.epsilon = siegel_epsilon(g.dim());
  out.archimedean = *infinity_density(static_cast<unsigned>(g.dim()), g.det(), Rat(m), prec).interval;
  out.euler_product = 1;
  for (unsigned long p : primes_up_to(prime_bound)) {
    PrimeFactor f{p, local_density(g, Int(static_cast<long>(p)), m, opt)};
    out.euler_product *= f.density.exact;
    out.factors.push_back(std::move(f));
  }
  out.value = Interval::exact(out.epsilon, prec) * out.archimedean * Interval::exact(out.euler_product, prec);
  out.tail_log_bound = detail::euler_tail_bound(g.dim(), prime_bound, m, g.det(), prec);
  return out;
}

struct GenusInput {
  std::vector<GramForm> forms;
  std::vector<Int> automorphism_orders;  // empty: computed
};

/// w_i = |O_i|^{-1} / Σ_j |O_j|^{-1}.
inline std::vector<Rat> class_weights(const std::vector<Int>& orders) {
  if (orders.empty()) fail(ErrorKind::EmptyGenus, "no classes");
  Rat total = 0;
  for (const auto& o : orders) {
    if (o <= 0) fail(ErrorKind::InvalidArgument, "automorphism orders must be positive");
    total += Rat(1) / Rat(o);
  }
  std::vector<Rat> w;
  for (const auto& o : orders) w.push_back(Rat(1) / Rat(o) / total);
  return w;
}

struct MassLedger {
  std::vector<Rat> weights;
  std::vector<Int> orders;
  std::vector<Int> representation_counts;
  Rat lhs;  // Σ w_i r_i(m)
  SiegelRhs rhs;
  Interval relative_gap;  // (rhs - lhs) / lhs
  Rat tolerance;
  bool pass = false;
};

inline MassLedger siegel_check(const GenusInput& genus, const Int& m, unsigned long prime_bound, const Rat& tol,
                               const DensityOptions& opt = {}, mpfr_prec_t prec = kDefaultPrecisionBits) {
  if (genus.forms.empty()) fail(ErrorKind::EmptyGenus, "genus has no representatives");
  if (!genus.automorphism_orders.empty() && genus.automorphism_orders.size() != genus.forms.size())
    fail(ErrorKind::InvalidArgument, "one automorphism order per representative");
  const GramForm& f0 = genus.forms.front();
  for (const auto& f : genus.forms) {
    if (!f.positive_definite()) fail(ErrorKind::NotPositiveDefinite, "representatives must be positive definite");
    if (f.dim() != f0.dim() || f.det() != f0.det())
      fail(ErrorKind::InvalidArgument, "representatives differ in dimension or discriminant");
  }
  if (tol < 0) fail(ErrorKind::InvalidArgument, "tolerance must be non-negative");
  MassLedger out;
  out.tolerance = tol;
  out.orders = genus.automorphism_orders;
  if (out.orders.empty())
    for (const auto& f : genus.forms) out.orders.push_back(automorphism_order(f));
  out.weights = class_weights(out.orders);
  out.lhs = 0;
  for (std::size_t i = 0; i < genus.forms.size(); ++i) {
    out.representation_counts.push_back(representation_count(genus.forms[i], m));
    out.lhs += out.weights[i] * Rat(out.representation_counts.back());
  }
  out.rhs = siegel_rhs(f0, m, prime_bound, opt, prec);
  if (out.lhs == 0) {
    out.relative_gap = out.rhs.value;
    out.pass = out.rhs.value.upper_le(Rat(0));
    return out;
  }
  const Interval l = Interval::exact(out.lhs, prec);
  out.relative_gap = (out.rhs.value - l) / l;
  out.pass = out.relative_gap.lower_ge(-tol) && out.relative_gap.upper_le(tol);
  return out;
}

// ---------------------------------------------------------------------------
// The dimension-41 inequality ledger

struct LedgerCheck {
  std::string check;
  std::string statement;
  std::optional<Interval> interval;
  std::optional<Rat> value;
  std::string bound;
  bool pass = false;
  std::string detail;
};

struct LedgerReport {
  std::vector<LedgerCheck> checks;
  const LedgerCheck& get(const std::string& name) const {
    for (const auto& c : checks)
      if (c.check == name) return c;
    fail(ErrorKind::InvalidArgument, "no ledger check named " + name);
  }
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const LedgerCheck& c) { return c.pass; });
  }
};

/// The 41-dimensional even form e8^5 ⊕ (2x^2) of discriminant 2.
inline GramForm genus41_member() {
  GramForm f = e8_form();
  for (int i = 0; i < 4; ++i) f = orthogonal_sum(f, e8_form());
  return orthogonal_sum(f, GramForm(IntMatrix{{2}}));
}

inline LedgerReport bounds_ledger_41(mpfr_prec_t prec = kDefaultPrecisionBits) {
  LedgerReport rep;
  const Interval one = Interval::exact(1, prec);

  // (a) odd-prime factor
  {
    LedgerCheck c;
    c.check = "a";
    c.statement = "prod_{p != 2} (1 - p^-4)/(1 - p^-3) = 14 zeta(3) / (15 zeta(4)) <= 11/10, value in [1.03, 1.04]";
    const Interval v = Interval::exact(Rat(14, 15), prec) * zeta_interval(3, 20000, prec) / zeta_interval(4, 20000, prec);
    c.interval = v;
    c.bound = "11/10";
    // every factor exceeds 1, so a truncated product stays below the limit
    Interval partial = one;
    for (unsigned long p : primes_up_to(10000)) {
      if (p == 2) continue;
      const Interval pi = Interval::exact(Rat(static_cast<long>(p)), prec);
      partial = partial * (one - one / pi.pow(4)) / (one - one / pi.pow(3));
    }
    const bool consistent = partial.upper_le(v.upper_rat());
    c.pass = v.upper_le(Rat(11, 10)) && v.lower_ge(Rat(103, 100)) && v.upper_le(Rat(26, 25)) && consistent;
    c.detail = "partial product over odd p <= 10^4: " + partial.str(12);
    rep.checks.push_back(std::move(c));
  }
  // (a_sup) the per-prime bound for x_1^2 + ... + x_8^2, sampled
  {
    LedgerCheck c;
    c.check = "a_sup";
    c.statement = "D_p(m) of x_1^2+...+x_8^2 <= (1 - p^-4)/(1 - p^-3) for p = 3, 5, 7 and 1 <= m <= p^2";
    c.bound = "(1 - p^-4)/(1 - p^-3)";
    const GramForm g = identity_form(8);
    bool ok = true;
    Rat worst = 0;
    for (long p : {3L, 5L, 7L}) {
      const Rat pr(p);
      Rat b = (1 - 1 / (pr * pr * pr * pr)) / (1 - 1 / (pr * pr * pr));
      for (long m = 1; m <= p * p; ++m) {
        const DensityValue d = local_density(g, Int(p), Int(m));
        if (!d.stabilized || d.exact > b) ok = false;
        worst = std::max(worst, Rat(d.exact / b));
      }
    }
    c.value = worst;
    c.pass = ok;
    c.detail = "largest ratio density / bound: " + worst.get_str();
    rep.checks.push_back(std::move(c));
  }
  // (b) the 2-adic statement for h = 2 x_1 x_2, checked as stated
  {
    LedgerCheck c;
    c.check = "b";
    c.statement = "D_2(m) of 2 x_1 x_2 is 2 for even m and 0 for odd m, 1 <= m <= 10";
    c.bound = "{0, 2}";
    const GramForm h = hyperbolic_plane();
    bool ok = true;
    std::string seen;
    for (long m = 1; m <= 10; ++m) {
      const DensityValue d = local_density(h, Int(2), Int(m), DensityOptions{DensityMethod::Blocks, 10});
      const Rat expect = m % 2 == 0 ? Rat(2) : Rat(0);
      if (!d.stabilized || d.exact != expect) ok = false;
      seen += (seen.empty() ? "" : ", ") + std::to_string(m) + ":" + d.exact.get_str();
    }
    c.pass = ok;
    c.detail = "computed " + seen;
    rep.checks.push_back(std::move(c));
  }
  // (b_actual) the 2-adic factor actually entering the bound
  {
    LedgerCheck c;
    c.check = "b_actual";
    c.statement = "D_2(2) of e8^5 + (2) <= 2";
    c.bound = "2";
    const DensityValue d = local_density(genus41_member(), Int(2), Int(2));
    c.value = d.exact;
    c.pass = d.stabilized && d.exact <= 2;
    c.detail = "certificate " + d.certificate + " at k = " + std::to_string(d.stabilized_at_k);
    rep.checks.push_back(std::move(c));
  }
  // (c) archimedean factor
  {
    LedgerCheck c;
    c.check = "c";
    c.statement = "D_inf(2) for n = 41, disc 2 is <= 1/50, by the closed form and by the Stirling bound";
    c.bound = "1/50";
    const Interval exact = *infinity_density(41, Int(2), Rat(2), prec).interval;
    const Interval n = Interval::exact(41, prec);
    const Interval base = Interval::exact(2, prec) * Interval::pi(prec) * Interval::e(prec) / n;
    const Interval stirling = (Interval::exact(Rat(pow_int(Int(2), 36)), prec) * n / Interval::pi(prec) * base.pow(41)).sqrt();
    c.interval = exact;
    c.pass = exact.upper_le(Rat(1, 50)) && stirling.upper_le(Rat(1, 50)) && exact.upper_le(stirling.upper_rat());
    c.detail = "Stirling route " + stirling.str(12);
    rep.checks.push_back(std::move(c));
  }
  // (d) combined
  {
    LedgerCheck c;
    c.check = "d";
    c.statement = "(11/10) * 2 * (1/50) <= 1/20";
    c.bound = "1/20";
    const Rat v = Rat(11, 10) * 2 * Rat(1, 50);
    c.value = v;
    c.pass = v <= Rat(1, 20) && rep.get("a").pass && rep.get("c").pass;
    rep.checks.push_back(std::move(c));
  }
  // (d_actual) the truncated right-hand side for a member of the genus
  {
    LedgerCheck c;
    c.check = "d_actual";
    c.statement = "D_inf(2) * prod_{p <= 100} D_p(2) for e8^5 + (2) <= 1/20";
    c.bound = "1/20";
    const SiegelRhs r = siegel_rhs(genus41_member(), Int(2), 100, {}, prec);
    c.interval = r.value;
    c.pass = r.value.upper_le(Rat(1, 20));
    c.detail = "Euler product over p <= 100: " + Interval::exact(r.euler_product, prec).str(12);
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Class-count chain

inline const Rat kKingMass{10968923, 2};
inline const Int kE8Order{696729600};
inline const Int kE8RootCount{240};
inline const Rat kCtBound{1, 20};

struct ChainStep {
  std::string statement;
  Rat lhs, rhs;  // lhs <= rhs
  bool pass = false;
};

struct Prop41Report {
  Rat king_mass;
  Int e8_order;
  Int e8_r2;
  Rat ct_bound;
  Rat M1;
  Int chain_coefficient;  // floor(e8_r2 + 2 - ct), 241 for the defaults
  Rat lower;              // 7/10
  std::vector<ChainStep> chain;
  Int s_paper;  // from lower <= chain_coefficient M1
  Int s_sharp;  // ceil(2 chain_coefficient M1 / ct)
  Int s_tight;  // ceil(2 (e8_r2 + 2 - ct) M1 / ct)
  bool pass() const {
    return std::all_of(chain.begin(), chain.end(), [](const ChainStep& s) { return s.pass; });
  }
};

inline Prop41Report prop41_arithmetic(const Rat& king_mass = kKingMass, const Int& e8_order = kE8Order,
                                      const Int& e8_r2 = kE8RootCount, const Rat& ct_bound = kCtBound) {
  if (king_mass <= 0 || e8_order <= 0 || e8_r2 <= 0 || ct_bound <= 0)
    fail(ErrorKind::NonPositiveInput, "all inputs must be positive");
  Prop41Report r;
  r.king_mass = king_mass;
  r.e8_order = e8_order;
  r.e8_r2 = e8_r2;
  r.ct_bound = ct_bound;
  // |O(f_i)| = |O(g_i)| |O(e8)| |O(2x^2)| with |O(2x^2)| = 2
  r.M1 = king_mass / (2 * Rat(e8_order));
  r.M1.canonicalize();
  const Rat c = Rat(e8_r2 + 2) - ct_bound;
  r.chain_coefficient = floor_rat(c);
  r.lower = Rat(7, 10);
  const Rat k(r.chain_coefficient);
  r.chain.push_back({"M1 >= 3/1000", Rat(3, 1000), r.M1, r.M1 >= Rat(3, 1000)});
  r.chain.push_back({"7/10 <= " + r.chain_coefficient.get_str() + " * 3/1000", r.lower, k * Rat(3, 1000),
                     r.lower <= k * Rat(3, 1000)});
  r.chain.push_back({"7/10 <= " + r.chain_coefficient.get_str() + " M1", r.lower, k * r.M1, r.lower <= k * r.M1});
  r.chain.push_back({"(e8_r2 + 2 - ct) M1 <= ct M3 drops to coefficient " + r.chain_coefficient.get_str(), k, c, k <= c});
  r.chain.push_back({"ct < 2, so the M2 terms can be dropped", ct_bound, Rat(2), ct_bound < 2});
  r.s_paper = ceil_rat(r.lower * 2 / ct_bound);
  r.s_sharp = ceil_rat(k * r.M1 * 2 / ct_bound);
  r.s_tight = ceil_rat(c * r.M1 * 2 / ct_bound);
  r.chain.push_back({"s >= " + r.s_paper.get_str() + " (paper chain)", Rat(r.s_paper), Rat(r.s_sharp), r.s_paper <= r.s_sharp});
  return r;
}

}  // namespace qf
