#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace vibronic_qes {

template <class T>
struct scalar_traits {
  static double abs(const T& x) { return std::abs(x); }
};

/// Dense polynomial Σ c_k z^k. Trailing zero coefficients are always stripped,
/// so the zero polynomial has an empty coefficient vector and degree −1.
template <class T>
class Polynomial {
 public:
  using value_type = T;

  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { normalize(); }
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { normalize(); }

  static Polynomial constant(T value) { return Polynomial(std::vector<T>{value}); }

  static Polynomial monomial(int power, T scale = T(1)) {
    if (power < 0) throw std::invalid_argument("Polynomial::monomial: negative power");
    std::vector<T> c(static_cast<std::size_t>(power) + 1, T(0));
    c.back() = scale;
    return Polynomial(std::move(c));
  }

  /// ∏ (z − r_i)
  template <class Range>
  static Polynomial from_roots(const Range& roots) {
    std::vector<T> c{T(1)};
    for (const auto& r : roots) {
      std::vector<T> next(c.size() + 1, T(0));
      for (std::size_t k = 0; k < c.size(); ++k) {
        next[k + 1] += c[k];
        next[k] -= T(r) * c[k];
      }
      c = std::move(next);
    }
    return Polynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }

  T coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : T(0);
  }

  T leading() const { return c_.empty() ? T(0) : c_.back(); }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& x : c_) m = std::max(m, scalar_traits<T>::abs(x));
    return m;
  }

  template <class U>
  auto operator()(const U& z) const {
    using R = decltype(T() * U());
    R acc = R(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + R(*it);
    return acc;
  }

  Polynomial derivative(int order = 1) const {
    if (order < 0) throw std::invalid_argument("Polynomial::derivative: negative order");
    if (order == 0) return *this;
    if (degree() < order) return {};
    std::vector<T> d(c_.size() - static_cast<std::size_t>(order));
    for (std::size_t k = 0; k < d.size(); ++k) {
      double f = 1.0;
      for (int j = 0; j < order; ++j) f *= static_cast<double>(k + static_cast<std::size_t>(order) - j);
      d[k] = c_[k + static_cast<std::size_t>(order)] * T(f);
    }
    return Polynomial(std::move(d));
  }

  /// Drops trailing coefficients below tol·max|c|.
  Polynomial trimmed(double rel_tol) const {
    std::vector<T> c = c_;
    const double cut = rel_tol * max_abs_coeff();
    while (!c.empty() && scalar_traits<T>::abs(c.back()) <= cut) c.pop_back();
    return Polynomial(std::move(c));
  }

  /// Scaled so the leading coefficient is one.
  Polynomial monic() const {
    if (is_zero()) throw std::domain_error("Polynomial::monic: zero polynomial");
    Polynomial out = *this;
    const T lead = leading();
    for (auto& x : out.c_) x /= lead;
    out.c_.back() = T(1);
    return out;
  }

  template <class U>
  Polynomial<U> cast() const {
    return Polynomial<U>(std::vector<U>(c_.begin(), c_.end()));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    normalize();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    normalize();
    return *this;
  }
  Polynomial& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    normalize();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= T(-1); }
  friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
  friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_;
};

using RealPolynomial = Polynomial<double>;
using ComplexPolynomial = Polynomial<std::complex<double>>;

/// Largest coefficient difference, scaled by max(1, max|coeff|) of either side.
template <class T>
double relative_distance(const Polynomial<T>& a, const Polynomial<T>& b) {
  const double scale = std::max({1.0, a.max_abs_coeff(), b.max_abs_coeff()});
  return (a - b).max_abs_coeff() / scale;
}

namespace detail {

// Newton polish of a single root on the original polynomial. Keeps the
// iterate only while |p| strictly decreases.
inline std::complex<double> polish_root(const ComplexPolynomial& p, const ComplexPolynomial& dp,
                                        std::complex<double> z) {
  double best = std::abs(p(z));
  for (int it = 0; it < 20 && best > 0.0; ++it) {
    const auto d = dp(z);
    if (d == std::complex<double>(0.0)) break;
    const auto trial = z - p(z) / d;
    const double r = std::abs(p(trial));
    if (!(r < best)) break;
    z = trial;
    best = r;
  }
  return z;
}

}  // namespace detail

/// All complex roots with multiplicity, from the eigenvalues of the companion
/// matrix followed by Newton polishing. Sorted by real then imaginary part.
template <class T>
std::vector<std::complex<double>> poly_roots(const Polynomial<T>& p) {
  using cd = std::complex<double>;
  if (p.is_zero()) throw std::domain_error("poly_roots: zero polynomial");
  const int deg = p.degree();
  std::vector<cd> roots;
  if (deg == 0) return roots;

  // Roots at the origin come out exactly.
  int zeros = 0;
  while (p.coeff(zeros) == T(0)) ++zeros;
  roots.assign(static_cast<std::size_t>(zeros), cd(0.0));
  const int m = deg - zeros;

  if (m > 0) {
    const cd lead = cd(p.leading());
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) companion(i, m - 1) = -cd(p.coeff(i + zeros)) / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("poly_roots: eigensolver failed");

    const ComplexPolynomial pc = p.template cast<cd>();
    const ComplexPolynomial dpc = pc.derivative();
    for (int i = 0; i < m; ++i) roots.push_back(detail::polish_root(pc, dpc, solver.eigenvalues()(i)));
  }

  std::sort(roots.begin(), roots.end(), [](const cd& a, const cd& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

}  // namespace vibronic_qes
