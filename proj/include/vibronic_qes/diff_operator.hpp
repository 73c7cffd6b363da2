#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace vibronic_qes {

/// Linear differential operator Σ_k p_k(z) d^k/dz^k with polynomial
/// coefficients. Trailing zero coefficient polynomials are stripped, so
/// order() is the true order (−1 for the zero operator).
template <class T>
class DiffOperator {
 public:
  using poly_type = Polynomial<T>;

  static constexpr int kMaxOrder = 8;

  DiffOperator() = default;
  explicit DiffOperator(std::vector<poly_type> coeffs) : p_(std::move(coeffs)) { normalize(); }
  DiffOperator(std::initializer_list<poly_type> coeffs) : p_(coeffs) { normalize(); }

  static DiffOperator identity() { return DiffOperator({poly_type::constant(T(1))}); }

  /// d^k/dz^k
  static DiffOperator derivative(int k) {
    std::vector<poly_type> p(static_cast<std::size_t>(k) + 1);
    p.back() = poly_type::constant(T(1));
    return DiffOperator(std::move(p));
  }

  /// Multiplication by q(z).
  static DiffOperator multiply(poly_type q) { return DiffOperator({std::move(q)}); }

  int order() const { return static_cast<int>(p_.size()) - 1; }
  bool is_zero() const { return p_.empty(); }

  /// Coefficient polynomial of d^k.
  const poly_type& coeff(int k) const {
    static const poly_type zero;
    return (k >= 0 && k < static_cast<int>(p_.size())) ? p_[static_cast<std::size_t>(k)] : zero;
  }

  const std::vector<poly_type>& coeffs() const { return p_; }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& q : p_) m = std::max(m, q.max_abs_coeff());
    return m;
  }

  DiffOperator& operator+=(const DiffOperator& o) {
    if (o.p_.size() > p_.size()) p_.resize(o.p_.size());
    for (std::size_t k = 0; k < o.p_.size(); ++k) p_[k] += o.p_[k];
    normalize();
    return *this;
  }
  DiffOperator& operator-=(const DiffOperator& o) {
    if (o.p_.size() > p_.size()) p_.resize(o.p_.size());
    for (std::size_t k = 0; k < o.p_.size(); ++k) p_[k] -= o.p_[k];
    normalize();
    return *this;
  }
  DiffOperator& operator*=(const T& s) {
    for (auto& q : p_) q *= s;
    normalize();
    return *this;
  }

  friend DiffOperator operator+(DiffOperator a, const DiffOperator& b) { return a += b; }
  friend DiffOperator operator-(DiffOperator a, const DiffOperator& b) { return a -= b; }
  friend DiffOperator operator*(DiffOperator a, const T& s) { return a *= s; }
  friend DiffOperator operator*(const T& s, DiffOperator a) { return a *= s; }

  friend bool operator==(const DiffOperator&, const DiffOperator&) = default;

 private:
  void normalize() {
    while (!p_.empty() && p_.back().is_zero()) p_.pop_back();
  }

  std::vector<poly_type> p_;
};

using RealOperator = DiffOperator<double>;

/// Σ_k p_k(z) · y^{(k)}(z)
template <class T, class U>
Polynomial<U> apply(const DiffOperator<T>& op, const Polynomial<U>& y) {
  Polynomial<U> out;
  for (int k = 0; k <= op.order(); ++k) {
    const auto& pk = op.coeff(k);
    if (pk.is_zero()) continue;
    const auto dy = y.derivative(k);
    if (dy.is_zero()) continue;
    out += pk.template cast<U>() * dy;
  }
  return out;
}

/// a∘b through the Leibniz rule:
///   a_k d^k (b_m d^m) = a_k Σ_r C(k,r) b_m^{(r)} d^{k−r+m}
template <class T>
DiffOperator<T> compose(const DiffOperator<T>& a, const DiffOperator<T>& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const int order = a.order() + b.order();
  if (order > DiffOperator<T>::kMaxOrder)
    throw std::length_error("compose: combined order exceeds the supported cap");
  std::vector<Polynomial<T>> out(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= a.order(); ++k) {
    const auto& ak = a.coeff(k);
    if (ak.is_zero()) continue;
    double binom = 1.0;  // C(k, r)
    for (int r = 0; r <= k; ++r) {
      for (int m = 0; m <= b.order(); ++m) {
        const auto dbm = b.coeff(m).derivative(r);
        if (dbm.is_zero()) continue;
        out[static_cast<std::size_t>(k - r + m)] += (ak * dbm) * T(binom);
      }
      binom = binom * (k - r) / (r + 1);
    }
  }
  return DiffOperator<T>(std::move(out));
}

template <class T>
DiffOperator<T> commutator(const DiffOperator<T>& a, const DiffOperator<T>& b) {
  return compose(a, b) - compose(b, a);
}

/// Largest coefficient of a − b, relative to max(1, largest coefficient).
template <class T>
double relative_distance(const DiffOperator<T>& a, const DiffOperator<T>& b) {
  const double scale = std::max({1.0, a.max_abs_coeff(), b.max_abs_coeff()});
  return (a - b).max_abs_coeff() / scale;
}

}  // namespace vibronic_qes
