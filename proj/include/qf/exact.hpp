#pragma once
// Exact integer/rational matrix kernel: Smith and Hermite normal forms,
// integer kernels, rational LDL^T. Everything here is exact; nothing
// touches floating point.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qf/error.hpp"

namespace qf {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

/// Dense row-major matrix over an exact ring.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) fail(ErrorKind::InvalidArgument, "ragged matrix initializer");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix diagonal(const std::vector<T>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static Matrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) fail(ErrorKind::InvalidArgument, "column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  bool is_symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& k) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const T& k) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }
  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
  }

  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::InvalidArgument, "matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& x) {
    if (a.cols_ != x.size()) fail(ErrorKind::InvalidArgument, "matrix-vector dimension mismatch");
    std::vector<T> y(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::InvalidArgument, "matrix sum dimension mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::InvalidArgument, "matrix difference dimension mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }
  friend Matrix operator*(const T& k, Matrix a) {
    for (auto& x : a.data_) x *= k;
    return a;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

// ---------------------------------------------------------------------------
// Scalar helpers

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd_int(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm_int(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int trunc_div(const Int& a, const Int& b) {
  Int q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int mod_floor(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int floor_rat(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Int ceil_rat(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// p-adic valuation of a nonzero integer.
inline int valuation(const Int& a, const Int& p) {
  if (a == 0) fail(ErrorKind::InvalidArgument, "valuation of zero");
  Int x = abs_int(a);
  int v = 0;
  while (mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t())) {
    x /= p;
    ++v;
  }
  return v;
}

/// p-adic valuation of a nonzero rational.
inline int valuation(const Rat& a, const Int& p) {
  return valuation(Int(a.get_num()), p) - valuation(Int(a.get_den()), p);
}

/// Reduce a p-integral rational (denominator prime to the modulus) into [0, modulus).
inline Int reduce_mod(const Rat& a, const Int& modulus) {
  Int den = a.get_den();
  Int inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t()) == 0)
    fail(ErrorKind::InvalidArgument, "denominator not invertible modulo " + modulus.get_str());
  return mod_floor(Int(a.get_num()) * inv, modulus);
}

inline bool is_prime(const Int& p) { return p > 1 && mpz_probab_prime_p(p.get_mpz_t(), 40) > 0; }

template <class T>
std::string to_string(const std::vector<T>& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

template <class T>
std::string to_string(const Matrix<T>& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

// ---------------------------------------------------------------------------
// Conversions

inline RatMatrix to_rat(const IntMatrix& a) {
  RatMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = Rat(a(i, j));
  return r;
}

inline RatVec to_rat(const IntVec& v) { return RatVec(v.begin(), v.end()); }

inline bool is_integral(const RatMatrix& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](const Rat& x) { return x.get_den() == 1; });
}

inline bool is_integral(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x.get_den() == 1; });
}

inline IntMatrix to_int(const RatMatrix& a) {
  if (!is_integral(a)) fail(ErrorKind::NotIntegral, "matrix has non-integral entries");
  IntMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).get_num();
  return r;
}

inline IntVec to_int(const RatVec& v) {
  if (!is_integral(v)) fail(ErrorKind::NotIntegral, "vector has non-integral entries");
  IntVec r;
  r.reserve(v.size());
  for (const auto& x : v) r.emplace_back(x.get_num());
  return r;
}

/// Writes A = M / d with M integral and d the least common denominator.
inline std::pair<IntMatrix, Int> clear_denominators(const RatMatrix& a) {
  Int d = 1;
  for (const auto& x : a.data()) d = lcm_int(d, Int(x.get_den()));
  IntMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Rat s = a(i, j) * d;
      m(i, j) = s.get_num();
    }
  return {m, d};
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// gcd of the entries (0 for the zero vector).
inline Int content(const IntVec& v) {
  Int g = 0;
  for (const auto& x : v) g = gcd_int(g, x);
  return g;
}

// ---------------------------------------------------------------------------
// Determinant, rank, inverse

/// Fraction-free Bareiss elimination.
inline Int determinant(IntMatrix a) {
  if (!a.square()) fail(ErrorKind::InvalidArgument, "determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      a.swap_rows(k, piv);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

inline Rat determinant(const RatMatrix& a) {
  auto [m, d] = clear_denominators(a);
  return Rat(determinant(m)) / Rat(pow_int(d, static_cast<unsigned long>(a.rows())));
}

inline std::size_t rank(RatMatrix a) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    a.swap_rows(r, piv);
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0) continue;
      Rat k = -a(i, c) / a(r, c);
      a.add_row(i, r, k);
    }
    ++r;
  }
  return r;
}

inline RatMatrix inverse(const RatMatrix& a) {
  if (!a.square()) fail(ErrorKind::InvalidArgument, "inverse of non-square matrix");
  const std::size_t n = a.rows();
  RatMatrix m = a;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) fail(ErrorKind::SingularForm, "matrix is singular");
    m.swap_rows(c, piv);
    inv.swap_rows(c, piv);
    Rat s = 1 / m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) *= s;
      inv(c, j) *= s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      Rat k = -m(i, c);
      m.add_row(i, c, k);
      inv.add_row(i, c, k);
    }
  }
  return inv;
}

/// Solves A x = b for square nonsingular A.
inline RatVec solve(const RatMatrix& a, const RatVec& b) { return inverse(a) * b; }

// ---------------------------------------------------------------------------
// Smith normal form

struct SnfResult {
  IntMatrix U;  // unimodular, rows x rows
  IntMatrix V;  // unimodular, cols x cols
  IntMatrix D;  // diagonal, d_1 | d_2 | ..., zeros last
  std::size_t rank = 0;

  std::vector<Int> diagonal() const {
    std::vector<Int> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
  }
};

/// U * A * V = D. Pivot: smallest nonzero |entry| in the active block, ties by
/// lowest (row, col), so the output is deterministic.
inline SnfResult smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SnfResult r{IntMatrix::identity(m), IntMatrix::identity(n), a, 0};
  IntMatrix& D = r.D;

  auto find_pivot = [&](std::size_t t) -> std::optional<std::pair<std::size_t, std::size_t>> {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Int best_abs;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (D(i, j) == 0) continue;
        Int v = abs_int(D(i, j));
        if (!best || v < best_abs) {
          best = {i, j};
          best_abs = v;
        }
      }
    return best;
  };

  const std::size_t lim = std::min(m, n);
  for (std::size_t t = 0; t < lim; ++t) {
    bool done = false;
    while (true) {
      auto piv = find_pivot(t);
      if (!piv) {
        done = true;
        break;
      }
      D.swap_rows(t, piv->first);
      r.U.swap_rows(t, piv->first);
      D.swap_cols(t, piv->second);
      r.V.swap_cols(t, piv->second);

      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        Int q = trunc_div(D(i, t), D(t, t));
        D.add_row(i, t, -q);
        r.U.add_row(i, t, -q);
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        Int q = trunc_div(D(t, j), D(t, t));
        D.add_col(j, t, -q);
        r.V.add_col(j, t, -q);
      }
      bool clean = true;
      for (std::size_t i = t + 1; i < m && clean; ++i) clean = D(i, t) == 0;
      for (std::size_t j = t + 1; j < n && clean; ++j) clean = D(t, j) == 0;
      if (!clean) continue;

      // divisibility chain: fold an offending row into the pivot row
      std::optional<std::size_t> bad_row;
      for (std::size_t i = t + 1; i < m && !bad_row; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            bad_row = i;
            break;
          }
      if (!bad_row) break;
      D.add_row(t, *bad_row, Int(1));
      r.U.add_row(t, *bad_row, Int(1));
    }
    if (done) break;
    if (D(t, t) < 0) {
      D.negate_row(t);
      r.U.negate_row(t);
    }
    r.rank = t + 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Hermite normal form and kernels

/// Column-style HNF: a basis (n x r, r = rank) of the Z-span of the columns,
/// lower echelon with positive pivots and entries left of each pivot reduced
/// into [0, pivot). Canonical for the lattice.
inline IntMatrix column_hnf(const IntMatrix& a) {
  IntMatrix h = a;
  const std::size_t n = h.rows(), k = h.cols();
  std::size_t r = 0;
  for (std::size_t i = 0; i < n && r < k; ++i) {
    bool have_pivot = false;
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t j = r; j < k; ++j) {
        if (h(i, j) == 0) continue;
        if (!best || abs_int(h(i, j)) < abs_int(h(i, *best))) best = j;
      }
      if (!best) break;
      have_pivot = true;
      h.swap_cols(r, *best);
      bool clean = true;
      for (std::size_t j = r + 1; j < k; ++j) {
        if (h(i, j) == 0) continue;
        Int q = floor_div(h(i, j), h(i, r));
        h.add_col(j, r, -q);
        if (h(i, j) != 0) clean = false;
      }
      if (clean) break;
    }
    if (!have_pivot) continue;
    if (h(i, r) < 0) h.negate_col(r);
    for (std::size_t j = 0; j < r; ++j) {
      Int q = floor_div(h(i, j), h(i, r));
      if (q != 0) h.add_col(j, r, -q);
    }
    ++r;
  }
  return h.block(0, 0, n, r);
}

/// Canonical basis of the Z-span of rational columns.
inline RatMatrix column_hnf(const RatMatrix& a) {
  auto [m, d] = clear_denominators(a);
  IntMatrix h = column_hnf(m);
  RatMatrix out(h.rows(), h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) out(i, j) = Rat(h(i, j)) / d;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) out(i, j).canonicalize();
  return out;
}

/// Basis (as columns, HNF-canonical) of {x in Z^n : A x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  SnfResult s = smith_normal_form(a);
  const std::size_t n = a.cols();
  IntMatrix k(n, n - s.rank);
  for (std::size_t j = s.rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) k(i, j - s.rank) = s.V(i, j);
  return column_hnf(k);
}

// ---------------------------------------------------------------------------
// Rational LDL^T

struct CholeskyResult {
  std::vector<Rat> diag;  // Delta
  RatMatrix upper;        // unit upper triangular U, G = U^T Delta U
};

/// G = U^T diag(d) U; succeeds iff G is positive definite.
inline CholeskyResult rational_cholesky(const IntMatrix& g) {
  if (!g.is_symmetric()) fail(ErrorKind::InvalidArgument, "Gram matrix is not symmetric");
  const std::size_t n = g.rows();
  CholeskyResult r{std::vector<Rat>(n), RatMatrix::identity(n)};
  for (std::size_t i = 0; i < n; ++i) {
    Rat d = Rat(g(i, i));
    for (std::size_t k = 0; k < i; ++k) d -= r.upper(k, i) * r.upper(k, i) * r.diag[k];
    if (d <= 0) fail(ErrorKind::NotPositiveDefinite, "pivot " + std::to_string(i) + " is " + d.get_str());
    r.diag[i] = d;
    for (std::size_t j = i + 1; j < n; ++j) {
      Rat s = Rat(g(i, j));
      for (std::size_t k = 0; k < i; ++k) s -= r.upper(k, i) * r.upper(k, j) * r.diag[k];
      r.upper(i, j) = s / d;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Congruence diagonalization (signature)

struct Signature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Sylvester inertia via exact symmetric elimination.
inline Signature congruence_signature(const RatMatrix& g_in) {
  RatMatrix g = g_in;
  const std::size_t n = g.rows();
  Signature sig;
  std::size_t t = 0;
  while (t < n) {
    std::size_t piv = t;
    while (piv < n && g(piv, piv) == 0) ++piv;
    if (piv == n) {
      // all remaining diagonal entries vanish; combine two indices if possible
      std::optional<std::pair<std::size_t, std::size_t>> off;
      for (std::size_t i = t; i < n && !off; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (g(i, j) != 0) {
            off = {i, j};
            break;
          }
      if (!off) {
        sig.zero += n - t;
        break;
      }
      // e_i <- e_i + e_j gives diagonal 2 g_ij
      g.add_row(off->first, off->second, Rat(1));
      g.add_col(off->first, off->second, Rat(1));
      piv = off->first;
    }
    g.swap_rows(t, piv);
    g.swap_cols(t, piv);
    const Rat d = g(t, t);
    for (std::size_t i = t + 1; i < n; ++i) {
      if (g(i, t) == 0) continue;
      Rat k = -g(i, t) / d;
      g.add_row(i, t, k);
      g.add_col(i, t, k);
    }
    (d > 0 ? sig.positive : sig.negative)++;
    ++t;
  }
  return sig;
}

}  // namespace qf
