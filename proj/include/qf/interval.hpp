#pragma once
// Certified real intervals over MPFR. Lower endpoints are rounded down and
// upper endpoints up, so every operation returns an enclosure of the exact
// real result.

#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <utility>

#include "qf/error.hpp"
#include "qf/exact.hpp"

namespace qf {

inline constexpr mpfr_prec_t kDefaultPrecisionBits = 128;

/// QF_PRECISION_BITS if set and sane, otherwise 128.
inline mpfr_prec_t precision_from_env() {
  if (const char* s = std::getenv("QF_PRECISION_BITS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v >= 32 && v <= 1 << 20) return static_cast<mpfr_prec_t>(v);
  }
  return kDefaultPrecisionBits;
}

class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = kDefaultPrecisionBits) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }
  Interval(const Interval& o) {
    mpfr_init2(lo_, o.precision());
    mpfr_init2(hi_, o.precision());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  Interval(Interval&& o) noexcept : Interval(mpfr_prec_t(MPFR_PREC_MIN)) {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }
  Interval& operator=(Interval o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
  }
  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  static Interval exact(const Rat& q, mpfr_prec_t prec = kDefaultPrecisionBits) {
    Interval r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
  }
  static Interval exact(long v, mpfr_prec_t prec = kDefaultPrecisionBits) { return exact(Rat(v), prec); }

  static Interval hull(const Rat& a, const Rat& b, mpfr_prec_t prec = kDefaultPrecisionBits) {
    Interval r(prec);
    const Rat& lo = a < b ? a : b;
    const Rat& hi = a < b ? b : a;
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  static Interval pi(mpfr_prec_t prec = kDefaultPrecisionBits) {
    Interval r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
  }

  static Interval e(mpfr_prec_t prec = kDefaultPrecisionBits) {
    Interval one = exact(1, prec);
    return one.exp();
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }

  double lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid() const { return 0.5 * (lower() + upper()); }

  /// Upper endpoint as an exact rational (MPFR values are dyadic).
  Rat upper_rat() const { return to_rat(hi_); }
  Rat lower_rat() const { return to_rat(lo_); }

  bool upper_le(const Rat& q) const { return mpfr_cmp_q(hi_, q.get_mpq_t()) <= 0; }
  bool upper_lt(const Rat& q) const { return mpfr_cmp_q(hi_, q.get_mpq_t()) < 0; }
  bool lower_ge(const Rat& q) const { return mpfr_cmp_q(lo_, q.get_mpq_t()) >= 0; }
  bool lower_gt(const Rat& q) const { return mpfr_cmp_q(lo_, q.get_mpq_t()) > 0; }
  bool contains(const Rat& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
  }
  bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
  bool positive() const { return mpfr_sgn(lo_) > 0; }
  bool negative() const { return mpfr_sgn(hi_) < 0; }

  /// [lo, hi] subset of [o.lo, o.hi]
  bool subset_of(const Interval& o) const {
    return mpfr_cmp(lo_, o.lo_) >= 0 && mpfr_cmp(hi_, o.hi_) <= 0;
  }
  bool overlaps(const Interval& o) const {
    return mpfr_cmp(lo_, o.hi_) <= 0 && mpfr_cmp(o.lo_, hi_) <= 0;
  }

  Interval width() const {
    Interval r(precision());
    mpfr_sub(r.hi_, hi_, lo_, MPFR_RNDU);
    mpfr_set(r.lo_, r.hi_, MPFR_RNDD);
    return r;
  }

  std::string str(int digits = 20) const {
    return "[" + endpoint_str(lo_, MPFR_RNDD, digits) + ", " + endpoint_str(hi_, MPFR_RNDU, digits) + "]";
  }
  std::string lower_str(int digits = 20) const { return endpoint_str(lo_, MPFR_RNDD, digits); }
  std::string upper_str(int digits = 20) const { return endpoint_str(hi_, MPFR_RNDU, digits); }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }
  friend Interval operator-(const Interval& a) {
    Interval r(a.precision());
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
  }
  friend Interval operator*(const Interval& a, const Interval& b) {
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    Interval r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    bool first = true;
    for (const auto* x : {&a.lo_, &a.hi_})
      for (const auto* y : {&b.lo_, &b.hi_}) {
        mpfr_mul(t, *x, *y, MPFR_RNDD);
        if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, *x, *y, MPFR_RNDU);
        if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
        first = false;
      }
    mpfr_clear(t);
    return r;
  }
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) fail(ErrorKind::InvalidArgument, "interval division by an interval containing zero");
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    Interval inv(prec);
    mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
    mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
    return a * inv;
  }

  Interval sqrt() const {
    if (mpfr_sgn(lo_) < 0) fail(ErrorKind::InvalidArgument, "sqrt of interval with negative part");
    Interval r(precision());
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
  }
  Interval exp() const {
    Interval r(precision());
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
  }
  Interval log() const {
    if (mpfr_sgn(lo_) <= 0) fail(ErrorKind::InvalidArgument, "log of non-positive interval");
    Interval r(precision());
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
  }
  /// arccosh on [max(lo,1), hi]; requires hi >= 1.
  Interval acosh() const {
    if (mpfr_cmp_ui(hi_, 1) < 0) fail(ErrorKind::InvalidArgument, "acosh of interval below 1");
    Interval r(precision());
    if (mpfr_cmp_ui(lo_, 1) <= 0)
      mpfr_set_zero(r.lo_, 1);
    else
      mpfr_acosh(r.lo_, lo_, MPFR_RNDD);
    mpfr_acosh(r.hi_, hi_, MPFR_RNDU);
    return r;
  }
  Interval pow(unsigned long e) const {
    Interval r = exact(1, precision());
    Interval base = *this;
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }
  Interval abs() const {
    if (mpfr_sgn(lo_) >= 0) return *this;
    if (mpfr_sgn(hi_) <= 0) return -*this;
    Interval r(precision());
    mpfr_set_zero(r.lo_, 1);
    if (mpfr_cmpabs(lo_, hi_) > 0)
      mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    else
      mpfr_set(r.hi_, hi_, MPFR_RNDU);
    return r;
  }
  /// Smallest interval containing both.
  friend Interval join(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

 private:
  static Rat to_rat(const mpfr_t x) {
    mpz_t m;
    mpz_init(m);
    mpfr_exp_t e = mpfr_get_z_2exp(m, x);
    Rat r{Int(m)};
    mpz_clear(m);
    if (e >= 0)
      r *= Rat(pow_int(Int(2), static_cast<unsigned long>(e)));
    else
      r /= Rat(pow_int(Int(2), static_cast<unsigned long>(-e)));
    return r;
  }

  static std::string endpoint_str(const mpfr_t x, mpfr_rnd_t rnd, int digits) {
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "R" + (rnd == MPFR_RNDD ? "D" : "U") + "g";
    mpfr_asprintf(&buf, fmt.c_str(), x);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace qf
