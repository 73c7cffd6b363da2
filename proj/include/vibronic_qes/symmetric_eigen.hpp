#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace vibronic_qes {

/// Dense symmetric matrix, row-major. Only used as the oracle's storage.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

  /// Writes a(i,j) and a(j,i).
  void set(std::size_t i, std::size_t j, double x) {
    a_[i * n_ + j] = x;
    a_[j * n_ + i] = x;
  }

  bool is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  double* row(std::size_t i) { return a_.data() + i * n_; }
  const double* row(std::size_t i) const { return a_.data() + i * n_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

class EigenSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;  ///< offdiag[k] couples k and k+1
};

/// Householder reduction H A H of a symmetric matrix to tridiagonal form.
inline Tridiagonal householder_tridiagonalize(SymmetricMatrix a) {
  const std::size_t n = a.size();
  Tridiagonal t;
  t.diag.assign(n, 0.0);
  t.offdiag.assign(n > 0 ? n - 1 : 0, 0.0);
  std::vector<double> v(n), p(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    // Reflect x = a(k+1.., k) onto alpha e_{k+1}.
    double norm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm2 += a(i, k) * a(i, k);
    const double norm = std::sqrt(norm2);
    t.diag[k] = a(k, k);
    if (norm == 0.0) {
      t.offdiag[k] = 0.0;
      continue;
    }
    const double x0 = a(k + 1, k);
    const double alpha = x0 > 0.0 ? -norm : norm;
    t.offdiag[k] = alpha;

    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    const double vinv = 1.0 / std::sqrt(vnorm2);
    for (std::size_t i = k + 1; i < n; ++i) v[i] *= vinv;

    // A' = A − 2 v qᵀ − 2 q vᵀ with p = A v and q = p − (vᵀp) v.
    double K = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double* ri = a.row(i);
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += ri[j] * v[j];
      p[i] = s;
      K += v[i] * s;
    }
    for (std::size_t i = k + 1; i < n; ++i) p[i] -= K * v[i];
    for (std::size_t i = k + 1; i < n; ++i) {
      double* ri = a.row(i);
      const double vi = 2.0 * v[i], pi = 2.0 * p[i];
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= vi * p[j] + pi * v[j];
    }
  }
  if (n >= 2) {
    t.diag[n - 2] = a(n - 2, n - 2);
    t.offdiag[n - 2] = a(n - 1, n - 2);
  }
  if (n >= 1) t.diag[n - 1] = a(n - 1, n - 1);
  return t;
}

/// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift QL
/// algorithm, ascending. Throws EigenSolverError past the iteration cap.
inline std::vector<double> tridiagonal_eigenvalues(Tridiagonal t, int max_iter_per_value = 60) {
  auto& d = t.diag;
  const std::size_t n = d.size();
  std::vector<double> e(n, 0.0);
  std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == max_iter_per_value)
          throw EigenSolverError("tridiagonal QL: no convergence for eigenvalue index " + std::to_string(l) +
                                 " after " + std::to_string(max_iter_per_value) + " iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i = m;
        bool underflow = false;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

inline std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& a) {
  return tridiagonal_eigenvalues(householder_tridiagonalize(a));
}

namespace detail {

// A ← Gᵀ A G for a rotation in the (p, p+1) plane, touching only the index
// window [lo, hi) where nonzeros can live.
inline void rotate_plane(SymmetricMatrix& a, std::size_t p, double c, double s, std::size_t lo, std::size_t hi) {
  const std::size_t q = p + 1;
  double* rp = a.row(p);
  double* rq = a.row(q);
  for (std::size_t k = lo; k < hi; ++k) {
    const double x = rp[k], y = rq[k];
    rp[k] = c * x + s * y;
    rq[k] = -s * x + c * y;
  }
  for (std::size_t k = lo; k < hi; ++k) {
    double* rk = a.row(k);
    const double x = rk[p], y = rk[q];
    rk[p] = c * x + s * y;
    rk[q] = -s * x + c * y;
  }
}

}  // namespace detail

/// Reduces a symmetric band matrix of half-bandwidth kd to tridiagonal form
/// with Givens rotations, chasing each fill-in element down the band. Work
/// is O(n² kd) instead of the dense O(n³).
inline Tridiagonal band_tridiagonalize(SymmetricMatrix a, std::size_t kd) {
  const std::size_t n = a.size();
  Tridiagonal t;
  t.diag.assign(n, 0.0);
  t.offdiag.assign(n > 0 ? n - 1 : 0, 0.0);
  if (kd > 1) {
    auto window = [&](std::size_t p, std::size_t& lo, std::size_t& hi) {
      lo = p > kd + 2 ? p - kd - 2 : 0;
      hi = std::min(n, p + kd + 4);
    };
    // Zeroes a(row, col) against a(row − 1, col).
    auto annihilate = [&](std::size_t row, std::size_t col) {
      const double x = a(row - 1, col), y = a(row, col);
      if (y == 0.0) return false;
      const double r = std::hypot(x, y);
      std::size_t lo, hi;
      window(row - 1, lo, hi);
      detail::rotate_plane(a, row - 1, x / r, y / r, lo, hi);
      a.set(row, col, 0.0);
      return true;
    };
    for (std::size_t j = 0; j + 2 < n; ++j) {
      for (std::size_t i = std::min(j + kd, n - 1); i >= j + 2; --i) {
        if (!annihilate(i, j)) continue;
        // The rotation in plane (i−1, i) fills (i−1+kd+1, i−1); chase it down.
        std::size_t col = i - 1;
        std::size_t row = col + kd + 1;
        while (row < n && a(row, col) != 0.0) {
          annihilate(row, col);
          col = row - 1;
          row = col + kd + 1;
        }
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) t.diag[k] = a(k, k);
  for (std::size_t k = 0; k + 1 < n; ++k) t.offdiag[k] = a(k + 1, k);
  return t;
}

inline std::vector<double> banded_symmetric_eigenvalues(const SymmetricMatrix& a, std::size_t kd) {
  return tridiagonal_eigenvalues(band_tridiagonalize(a, kd));
}

}  // namespace vibronic_qes
