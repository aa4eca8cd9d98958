#pragma once
// Integral quadratic forms f(x) = x^T G x and lattices inside a rational
// quadratic space: duals, invariant factors, orthogonal sums and the
// saturation L <- L + (pL* ∩ p^{-1}L).

#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qf/error.hpp"
#include "qf/exact.hpp"

namespace qf {

/// Symmetric integral Gram matrix with cached signature and determinant.
/// The pairing is (x, y) = x^T G y, so the form is classically integral.
class GramForm {
 public:
  GramForm() = default;
  explicit GramForm(IntMatrix gram) : gram_(std::move(gram)) {
    if (!gram_.square()) fail(ErrorKind::InvalidArgument, "Gram matrix must be square");
    if (!gram_.is_symmetric()) fail(ErrorKind::InvalidArgument, "Gram matrix must be symmetric");
    det_ = determinant(gram_);
    sig_ = congruence_signature(to_rat(gram_));
  }

  std::size_t dim() const noexcept { return gram_.rows(); }
  const IntMatrix& gram() const noexcept { return gram_; }
  const Int& operator()(std::size_t i, std::size_t j) const { return gram_(i, j); }
  const Int& det() const noexcept { return det_; }
  const Signature& signature() const noexcept { return sig_; }

  bool nonsingular() const { return det_ != 0; }
  bool positive_definite() const { return sig_.positive == dim(); }
  bool lorentzian() const { return sig_.negative == 1 && sig_.zero == 0; }
  bool even() const {
    for (std::size_t i = 0; i < dim(); ++i)
      if (mpz_odd_p(gram_(i, i).get_mpz_t())) return false;
    return true;
  }
  bool unimodular() const { return det_ == 1 || det_ == -1; }

  Int pair(const IntVec& x, const IntVec& y) const { return dot(x, gram_ * y); }
  Int value(const IntVec& x) const { return pair(x, x); }
  Rat pair(const RatVec& x, const RatVec& y) const { return dot(x, to_rat(gram_) * y); }
  Rat value(const RatVec& x) const { return pair(x, x); }

  friend bool operator==(const GramForm& a, const GramForm& b) { return a.gram_ == b.gram_; }

 private:
  IntMatrix gram_;
  Int det_ = 1;
  Signature sig_;
};

// ---------------------------------------------------------------------------
// Named forms

inline GramForm identity_form(std::size_t n) { return GramForm(IntMatrix::identity(n)); }

inline GramForm diagonal_form(const std::vector<Int>& d) { return GramForm(IntMatrix::diagonal(d)); }

/// U = [[0,1],[1,0]], i.e. f = 2 x1 x2.
inline GramForm hyperbolic_plane() { return GramForm(IntMatrix{{0, 1}, {1, 0}}); }

/// Cartan matrix of E8 (Bourbaki labelling, branch at node 4).
inline GramForm e8_form() {
  IntMatrix g(8, 8);
  for (std::size_t i = 0; i < 8; ++i) g(i, i) = 2;
  const int edges[][2] = {{0, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}};
  for (const auto& e : edges) g(e[0], e[1]) = g(e[1], e[0]) = -1;
  return GramForm(std::move(g));
}

inline GramForm orthogonal_sum(const GramForm& a, const GramForm& b) {
  const std::size_t n = a.dim(), m = b.dim();
  IntMatrix g(n + m, n + m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = a(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g(n + i, n + j) = b(i, j);
  return GramForm(std::move(g));
}

inline GramForm scale(const GramForm& a, const Int& alpha) {
  if (alpha < 1) fail(ErrorKind::InvalidArgument, "scale factor must be >= 1");
  return GramForm(alpha * a.gram());
}

/// e8^k ⊕ U: the even unimodular form of signature (8k+1, 1).
inline GramForm even_unimodular_lorentzian(std::size_t k) {
  GramForm f = hyperbolic_plane();
  for (std::size_t i = 0; i < k; ++i) f = orthogonal_sum(e8_form(), f);
  return f;
}

// ---------------------------------------------------------------------------
// Gram text format: first line n, then n rows of n integers. Lines whose
// first non-blank character is '#' are comments.

inline GramForm parse_gram(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  if (tokens.empty()) fail(ErrorKind::ParseError, "empty Gram input");
  auto parse_int = [](const std::string& s) {
    Int v;
    if (v.set_str(s, 10) != 0) fail(ErrorKind::ParseError, "not an integer: '" + s + "'");
    return v;
  };
  Int n_big = parse_int(tokens[0]);
  if (n_big < 1 || n_big > 4096) fail(ErrorKind::ParseError, "bad dimension " + tokens[0]);
  const std::size_t n = n_big.get_ui();
  if (tokens.size() != 1 + n * n)
    fail(ErrorKind::ParseError, "expected " + std::to_string(n * n) + " entries, got " + std::to_string(tokens.size() - 1));
  IntMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = parse_int(tokens[1 + i * n + j]);
  if (!g.is_symmetric()) fail(ErrorKind::ParseError, "Gram matrix is not symmetric");
  return GramForm(std::move(g));
}

inline GramForm parse_gram(const std::string& text) {
  std::istringstream in(text);
  return parse_gram(in);
}

inline std::string format_gram(const GramForm& f) {
  std::ostringstream os;
  os << f.dim() << '\n';
  for (std::size_t i = 0; i < f.dim(); ++i) {
    for (std::size_t j = 0; j < f.dim(); ++j) os << (j ? " " : "") << f(i, j);
    os << '\n';
  }
  return os.str();
}

/// FNV-1a over the canonical text serialization, as 16 hex digits.
inline std::string form_hash(const GramForm& f) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : format_gram(f)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = hex[h & 0xf];
  return s;
}

// ---------------------------------------------------------------------------
// Lattices

/// Lattice spanned by the columns of `basis` (ambient coordinates) inside
/// the quadratic space of `ambient`.
class Lattice {
 public:
  Lattice(GramForm ambient, RatMatrix basis) : ambient_(std::move(ambient)), basis_(std::move(basis)) {
    if (basis_.rows() != ambient_.dim()) fail(ErrorKind::InvalidArgument, "basis rows must match ambient dimension");
    if (qf::rank(basis_) != basis_.cols()) fail(ErrorKind::InvalidArgument, "basis columns are linearly dependent");
    gram_ = basis_.transpose() * to_rat(ambient_.gram()) * basis_;
  }

  /// Z^n with the standard basis.
  static Lattice standard(const GramForm& f) { return Lattice(f, RatMatrix::identity(f.dim())); }

  const GramForm& ambient() const noexcept { return ambient_; }
  const RatMatrix& basis() const noexcept { return basis_; }
  std::size_t rank() const noexcept { return basis_.cols(); }

  /// Induced Gram matrix B^T G B.
  const RatMatrix& gram() const noexcept { return gram_; }
  Rat discriminant() const { return determinant(gram_); }
  bool classically_integral() const { return is_integral(gram_); }

  GramForm induced_form() const {
    if (!classically_integral()) fail(ErrorKind::NotIntegral, "induced Gram matrix is not integral");
    return GramForm(to_int(gram_));
  }

  /// Lattice coordinates of an ambient vector in the rational span.
  RatVec coordinates(const RatVec& v) const {
    // least-squares free: solve the normal system with the ambient-free Euclidean product
    RatMatrix bt = basis_.transpose();
    RatVec c = solve(bt * basis_, bt * v);
    if (basis_ * c != v) fail(ErrorKind::NotInLattice, "vector is not in the rational span of the lattice");
    return c;
  }

  bool contains(const RatVec& v) const {
    try {
      return is_integral(coordinates(v));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotInLattice) return false;
      throw;
    }
  }

  /// Span equality via canonical column HNF.
  bool same_lattice(const Lattice& o) const {
    return basis_.rows() == o.basis_.rows() && column_hnf(basis_) == column_hnf(o.basis_);
  }

  bool contains_lattice(const Lattice& o) const {
    for (std::size_t j = 0; j < o.rank(); ++j)
      if (!contains(o.basis_.column(j))) return false;
    return true;
  }

 private:
  GramForm ambient_;
  RatMatrix basis_;
  RatMatrix gram_;
};

/// L* = {v in span(L) : (v, u) in Z for all u in L}; basis B · Gram^{-1}.
inline Lattice dual_lattice(const Lattice& l) {
  if (l.discriminant() == 0) fail(ErrorKind::SingularForm, "induced Gram matrix is singular");
  return Lattice(l.ambient(), l.basis() * inverse(l.gram()));
}

/// Invariant factors d_1 | ... | d_n of L*/L (full length, including 1s).
inline std::vector<Int> invariant_factors(const Lattice& l) {
  if (l.discriminant() == 0) fail(ErrorKind::SingularForm, "induced Gram matrix is singular");
  if (!l.classically_integral()) fail(ErrorKind::NotIntegral, "lattice is not classically integral");
  SnfResult s = smith_normal_form(to_int(l.gram()));
  std::vector<Int> d;
  for (const auto& x : s.diagonal()) d.push_back(abs_int(x));
  return d;
}

inline std::vector<Int> invariant_factors(const GramForm& f) { return invariant_factors(Lattice::standard(f)); }

/// Prime factorization by trial division (desk-scale discriminants).
inline std::map<Int, int> factorize(Int n) {
  std::map<Int, int> out;
  n = abs_int(n);
  if (n < 2) return out;
  for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      out[p]++;
      n /= p;
    }
  }
  if (n > 1) out[n]++;
  return out;
}

/// One saturation step at p: L + (pL* ∩ p^{-1}L). In lattice coordinates
/// the added vectors are y/p with Gram·y ≡ 0 (mod p²).
inline Lattice saturation_step(const Lattice& l, const Int& p) {
  const IntMatrix g = to_int(l.gram());
  const std::size_t r = l.rank();
  const Int p2 = p * p;
  SnfResult s = smith_normal_form(g);  // U g V = D
  // D z ≡ 0 mod p² with z = V^{-1} y  ⇔  z_i ∈ (p²/gcd(d_i, p²)) Z
  RatMatrix gens(r, 2 * r);
  for (std::size_t i = 0; i < r; ++i) gens(i, i) = 1;
  for (std::size_t j = 0; j < r; ++j) {
    Int step = p2 / gcd_int(s.D(j, j), p2);
    for (std::size_t i = 0; i < r; ++i) gens(i, r + j) = Rat(Int(s.V(i, j) * step), p);
  }
  for (auto i = 0u; i < r; ++i)
    for (auto j = 0u; j < 2 * r; ++j) gens(i, j).canonicalize();
  RatMatrix coords = column_hnf(gens);
  return Lattice(l.ambient(), l.basis() * coords);
}

/// Repeats saturation steps, primes in increasing order, until every
/// invariant p-factor is 1 or p. The discriminant strictly drops each step.
inline Lattice saturate(const Lattice& l) {
  if (l.discriminant() == 0) fail(ErrorKind::SingularForm, "induced Gram matrix is singular");
  if (!l.classically_integral()) fail(ErrorKind::NotIntegral, "lattice is not classically integral");
  Lattice cur = l;
  while (true) {
    const auto factors = invariant_factors(cur);
    Int disc = 1;
    for (const auto& d : factors) disc *= d;
    bool changed = false;
    for (const auto& [p, e] : factorize(disc)) {
      (void)e;
      auto needs_step = [&](const std::vector<Int>& fs) {
        const Int p2 = p * p;
        for (const auto& d : fs)
          if (mpz_divisible_p(d.get_mpz_t(), p2.get_mpz_t())) return true;
        return false;
      };
      while (needs_step(invariant_factors(cur))) {
        Rat before = abs(cur.discriminant());
        cur = saturation_step(cur, p);
        if (abs(cur.discriminant()) >= before) fail(ErrorKind::InvalidArgument, "saturation step did not shrink the discriminant");
        changed = true;
      }
    }
    if (!changed) return cur;
  }
}

}  // namespace qf
