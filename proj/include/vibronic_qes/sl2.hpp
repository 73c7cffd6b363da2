#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "diff_operator.hpp"
#include "model.hpp"
#include "polynomial.hpp"

namespace vibronic_qes {

/// Differential realization of sl(2) acting on polynomials of degree ≤ n:
///   J⁺ = z² d − n z,  J⁰ = z d − n/2,  J⁻ = d
struct Sl2Generators {
  int n = 0;
  RealOperator jplus;
  RealOperator jzero;
  RealOperator jminus;
};

inline Sl2Generators make_generators(int n) {
  if (n < 0) throw std::invalid_argument("make_generators: n must be non-negative");
  const double nd = n;
  Sl2Generators g;
  g.n = n;
  g.jplus = RealOperator({RealPolynomial{0.0, -nd}, RealPolynomial{0.0, 0.0, 1.0}});
  g.jzero = RealOperator({RealPolynomial{-nd / 2.0}, RealPolynomial{0.0, 1.0}});
  g.jminus = RealOperator::derivative(1);
  return g;
}

/// Weights of the bilinear and linear generator terms in the general
/// second-order QES operator.
struct QesCoefficients {
  double c_pp = 0, c_p0 = 0, c_pm = 0, c_0m = 0, c_mm = 0;
  double c_p = 0, c_0 = 0, c_m = 0, c = 0;
};

/// The P₄ d² + P₃ d + P₂ form of the general QES operator, written out
/// coefficient by coefficient.
inline RealOperator qes_closed_form(const QesCoefficients& k, int n) {
  const double nd = n;
  RealPolynomial p4{k.c_mm, k.c_0m, k.c_pm, k.c_p0, k.c_pp};
  RealPolynomial p3{k.c_m - nd / 2.0 * k.c_0m, k.c_0 - nd * k.c_pm,
                    k.c_p + k.c_p0 * (1.0 - 1.5 * nd), k.c_pp * (2.0 - 2.0 * nd)};
  RealPolynomial p2{k.c - nd / 2.0 * k.c_0, nd * nd / 2.0 * k.c_p0 - nd * k.c_p,
                    k.c_pp * nd * (nd - 1.0)};
  return RealOperator({p2, p3, p4});
}

/// Expands C₊₊J⁺J⁺ + C₊₀J⁺J⁰ + C₊₋J⁺J⁻ + C₀₋J⁰J⁻ + C₋₋J⁻J⁻ + C₊J⁺ + C₀J⁰ + C₋J⁻ + C
/// by operator composition and checks it against qes_closed_form.
inline RealOperator build_general_qes(const QesCoefficients& k, int n) {
  const auto g = make_generators(n);
  RealOperator h;
  h += k.c_pp * compose(g.jplus, g.jplus);
  h += k.c_p0 * compose(g.jplus, g.jzero);
  h += k.c_pm * compose(g.jplus, g.jminus);
  h += k.c_0m * compose(g.jzero, g.jminus);
  h += k.c_mm * compose(g.jminus, g.jminus);
  h += k.c_p * g.jplus;
  h += k.c_0 * g.jzero;
  h += k.c_m * g.jminus;
  h += RealOperator::multiply(RealPolynomial::constant(k.c));
  if (relative_distance(h, qes_closed_form(k, n)) > 1e-12)
    throw std::logic_error("build_general_qes: expansion disagrees with closed-form coefficients");
  return h;
}

/// Fourth-order operator of the decoupled vibronic problem:
///   ¼ d⁴ − z d³ + [z² + (F/2) z + (E1/2 + E2/2 − 1)] d²
///   + [−F z² + (1 − E2 − E1) z] d + [F E2 z + (E1 E2 − v²)]
/// Its polynomial kernel is the gauged channel-2 component y₂. It factors as
/// L₁∘M − v² with L₁ = ½d² − z d + (F z + E1) and M = ½d² − z d + E2.
inline RealOperator build_h4(const LevelParams& lp, const ModelParams& mp) {
  const double F = mp.F, E1 = lp.E1, E2 = lp.E2;
  return RealOperator({
      RealPolynomial{E1 * E2 - mp.v * mp.v, F * E2},
      RealPolynomial{0.0, 1.0 - E2 - E1, -F},
      RealPolynomial{0.5 * E1 + 0.5 * E2 - 1.0, 0.5 * F, 1.0},
      RealPolynomial{0.0, -1.0},
      RealPolynomial{0.25},
  });
}

/// Channel-1 operator of the gauged pair: ½d² − z d + (F z + E1).
inline RealOperator channel1_operator(const LevelParams& lp, const ModelParams& mp) {
  return RealOperator({RealPolynomial{lp.E1, mp.F}, RealPolynomial{0.0, -1.0}, RealPolynomial{0.5}});
}

/// Channel-2 operator of the gauged pair: ½d² − z d + E2.
inline RealOperator channel2_operator(const LevelParams& lp) {
  return RealOperator({RealPolynomial{lp.E2}, RealPolynomial{0.0, -1.0}, RealPolynomial{0.5}});
}

struct QesConditionRecord {
  std::string name;      ///< e.g. "b3 = -2(n-1) a4"
  std::string fixes;     ///< what the condition constrains
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  bool holds = false;
  bool degenerate = false;  ///< both sides vanish identically
};

struct QesConditionReport {
  int n = 0;
  bool holds = false;
  bool degenerate = false;  ///< every condition reduced to 0 = 0
  std::array<QesConditionRecord, 3> conditions;
  double a4 = 0, a3 = 0, b3 = 0, b2 = 0, c2 = 0, c1 = 0;
};

/// Checks the three hidden-algebraization conditions
///   b₃ = −2(n−1)a₄,  c₂ = n(n−1)a₄,  c₁ = −n[(n−1)a₃ + b₂]
/// on the d², d, 1 coefficient polynomials (a, b, c) of a fourth-order
/// operator. Exactly these three conditions are tested; nothing is assumed
/// about the d³ and d⁴ coefficients.
inline QesConditionReport qes_condition_check(const RealOperator& op, int n, double tol = 1e-12) {
  if (op.coeff(2).degree() > 4 || op.coeff(1).degree() > 3 || op.coeff(0).degree() > 2)
    throw std::invalid_argument("qes_condition_check: coefficient degrees exceed (4, 3, 2)");
  QesConditionReport r;
  r.n = n;
  r.a4 = op.coeff(2).coeff(4);
  r.a3 = op.coeff(2).coeff(3);
  r.b3 = op.coeff(1).coeff(3);
  r.b2 = op.coeff(1).coeff(2);
  r.c2 = op.coeff(0).coeff(2);
  r.c1 = op.coeff(0).coeff(1);
  const double nd = n;

  auto record = [tol](std::string name, std::string fixes, double lhs, double rhs) {
    QesConditionRecord c{std::move(name), std::move(fixes), lhs, rhs, std::abs(lhs - rhs)};
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    c.holds = c.residual <= tol * scale;
    c.degenerate = std::abs(lhs) <= tol && std::abs(rhs) <= tol;
    return c;
  };
  r.conditions[0] = record("b3 = -2(n-1) a4", "leading d coefficient against the d2 coefficient", r.b3,
                           -2.0 * (nd - 1.0) * r.a4);
  r.conditions[1] = record("c2 = n(n-1) a4", "quadratic potential term against the d2 coefficient", r.c2,
                           nd * (nd - 1.0) * r.a4);
  r.conditions[2] = record("c1 = -n[(n-1) a3 + b2]",
                           "linear potential term; for the vibronic operator c1 = F*E2 and b2 = -F, "
                           "so it fixes E2 = n",
                           r.c1, -nd * ((nd - 1.0) * r.a3 + r.b2));
  r.holds = std::all_of(r.conditions.begin(), r.conditions.end(), [](const auto& c) { return c.holds; });
  r.degenerate =
      std::all_of(r.conditions.begin(), r.conditions.end(), [](const auto& c) { return c.degenerate; });
  return r;
}

/// Solves the algebraization conditions of the vibronic operator for E2 at
/// level n. Ĥ₄'s condition residuals are affine in E2, so two probes fix the
/// root. Returns nullopt when the conditions do not depend on E2 (F = 0).
inline std::optional<double> solve_exceptional_e2(int n, const ModelParams& mp) {
  auto residual = [&](double e2) {
    const LevelParams lp{n, e2 - mp.F * mp.b, e2};
    const auto rep = qes_condition_check(build_h4(lp, mp), n);
    return rep.conditions[2].lhs - rep.conditions[2].rhs;
  };
  const double r0 = residual(0.0);
  const double slope = residual(1.0) - r0;
  if (std::abs(slope) <= 1e-14) return std::nullopt;
  return -r0 / slope;
}

/// Matrix of an operator on span{1, z, …, zⁿ}; column j holds vibronic_qes::apply(op, z^j)
/// truncated to degree n.
struct SubspaceProjection {
  int n = 0;
  Eigen::MatrixXd matrix;
  double spill = 0.0;  ///< largest |coefficient| above degree n, relative to the matrix scale
  bool invariant_flag = false;
};

inline SubspaceProjection project_invariant_subspace(const RealOperator& op, int n, double tol = 1e-10) {
  if (n < 0) throw std::invalid_argument("project_invariant_subspace: n must be non-negative");
  SubspaceProjection s;
  s.n = n;
  s.matrix = Eigen::MatrixXd::Zero(n + 1, n + 1);
  double spill = 0.0;
  for (int j = 0; j <= n; ++j) {
    const auto image = vibronic_qes::apply(op, RealPolynomial::monomial(j));
    for (int i = 0; i <= image.degree(); ++i) {
      if (i <= n)
        s.matrix(i, j) = image.coeff(i);
      else
        spill = std::max(spill, std::abs(image.coeff(i)));
    }
  }
  const double scale = std::max(1.0, s.matrix.cwiseAbs().maxCoeff());
  s.spill = spill / scale;
  s.invariant_flag = s.spill <= tol;
  return s;
}

/// One admissible coupling at level n and the matching polynomial solution.
struct AllowedCoupling {
  std::complex<double> v_squared;
  ComplexPolynomial kernel_poly;  ///< monic unless degree_deficient
  bool real = false;              ///< v² and kernel are real to rounding
  bool physical = false;          ///< real and v² ≥ 0
  bool degree_deficient = false;  ///< F = 0 only: zⁿ coefficient of the eigenvector ≤ 1e-12
  int multiplicity = 1;           ///< algebraic multiplicity of μ (numerical clustering)

  RealPolynomial real_kernel() const {
    std::vector<double> c;
    c.reserve(kernel_poly.coeffs().size());
    for (const auto& x : kernel_poly.coeffs()) c.push_back(x.real());
    return RealPolynomial(std::move(c));
  }
  std::vector<std::complex<double>> roots() const {
    return kernel_poly.degree() >= 1 ? poly_roots(kernel_poly) : std::vector<std::complex<double>>{};
  }
};

namespace detail {

struct HessenbergKernel {
  std::complex<double> mu;
  Eigen::VectorXcd x;  ///< x_n = 1
};

// Kernel of (A − μ) for an unreduced upper Hessenberg A (Hyman's method).
// With x_n = 1, rows n..1 are a triangular system for x_{n−1}..x_0; row 0
// is the characteristic function f(μ), which Newton drives to zero starting
// from the estimate. The triangular solve keeps every coefficient
// componentwise accurate, unlike a normwise eigenvector.
inline HessenbergKernel hessenberg_kernel(const Eigen::MatrixXd& a, std::complex<double> mu0) {
  using cd = std::complex<double>;
  const Eigen::Index n = a.rows() - 1;
  auto solve = [&](cd mu, Eigen::VectorXcd& x, Eigen::VectorXcd& dx) {
    x = Eigen::VectorXcd::Zero(n + 1);
    dx = Eigen::VectorXcd::Zero(n + 1);
    x(n) = 1.0;
    for (Eigen::Index i = n; i >= 1; --i) {
      cd s = -(a(i, i) - mu) * x(i), ds = x(i) - (a(i, i) - mu) * dx(i);
      for (Eigen::Index j = i + 1; j <= n; ++j) s -= a(i, j) * x(j), ds -= a(i, j) * dx(j);
      x(i - 1) = s / a(i, i - 1);
      dx(i - 1) = ds / a(i, i - 1);
    }
    cd f = (a(0, 0) - mu) * x(0), df = (a(0, 0) - mu) * dx(0) - x(0);
    double fscale = std::abs(a(0, 0) * x(0)) + std::abs(mu * x(0));
    for (Eigen::Index j = 1; j <= n; ++j) {
      f += a(0, j) * x(j), df += a(0, j) * dx(j);
      fscale += std::abs(a(0, j) * x(j));
    }
    return std::tuple<cd, cd, double>{f, df, fscale};
  };
  HessenbergKernel out{mu0, {}};
  Eigen::VectorXcd dx;
  auto [f, df, fscale] = solve(mu0, out.x, dx);
  const double anorm = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (int it = 0; it < 20 && std::abs(f) > 0.0 && df != cd(0.0); ++it) {
    const cd next = out.mu - f / df;
    // Stay on the eigenvalue we started from.
    if (std::abs(next - mu0) > 1e-6 * anorm) break;
    Eigen::VectorXcd xn, dxn;
    auto [fn, dfn, sn] = solve(next, xn, dxn);
    if (!(std::abs(fn) / std::max(sn, 1e-300) < std::abs(f) / std::max(fscale, 1e-300))) break;
    out.mu = next, out.x = xn, f = fn, df = dfn, fscale = sn;
  }
  return out;
}

/// ‖(A − μ)x‖ / (‖A‖ ‖x‖) in the max norm.
inline double relative_eigen_residual(const Eigen::MatrixXd& a, std::complex<double> mu, const Eigen::VectorXcd& x) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff()) * x.cwiseAbs().maxCoeff();
  return ((a.cast<std::complex<double>>() * x) - mu * x).cwiseAbs().maxCoeff() / scale;
}

}  // namespace detail

/// All couplings v² for which Ĥ₄ at E2 = n has a polynomial solution of
/// degree ≤ n. With A₀ the projection of Ĥ₄ without its E1E2 − v² term,
/// Ĥ₄ y = 0 ⇔ A₀ y = (v² − E1E2) y, so each eigenpair (μ, y) of A₀ gives
/// v² = E1E2 + μ. The v field of mp is ignored.
inline std::vector<AllowedCoupling> allowed_couplings(int n, const ModelParams& mp) {
  using cd = std::complex<double>;
  if (n < 0) throw std::invalid_argument("allowed_couplings: n must be non-negative");
  const LevelParams lp = level_params(n, mp);
  const double e1e2 = lp.E1 * lp.E2;
  RealOperator a0 = build_h4(lp, ModelParams{mp.F, mp.b, 0.0});
  a0 -= RealOperator::multiply(RealPolynomial::constant(e1e2));

  const auto proj = project_invariant_subspace(a0, n);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(proj.matrix, true);
  if (solver.info() != Eigen::Success) throw std::runtime_error("allowed_couplings: eigensolver failed");

  const Eigen::VectorXcd mu = solver.eigenvalues();
  const Eigen::MatrixXcd vecs = solver.eigenvectors();
  const double scale = std::max(1.0, proj.matrix.cwiseAbs().maxCoeff());

  std::vector<AllowedCoupling> out;
  for (int k = 0; k <= n; ++k) {
    AllowedCoupling a;
    a.v_squared = e1e2 + mu(k);
    Eigen::VectorXcd vec = vecs.col(k);
    // Fix the overall complex phase on the largest component.
    Eigen::Index imax = 0;
    vec.cwiseAbs().maxCoeff(&imax);
    vec /= vec(imax);
    const double vnorm = vec.cwiseAbs().maxCoeff();
    if (mp.F != 0.0 && n > 0) {
      // A₀ is unreduced Hessenberg (subdiagonal F(n − j)), so every kernel
      // has exact degree n.
      // Two candidates: the triangular-solve kernel, componentwise accurate
      // unless μ is pinned to a diagonal entry by a tiny F, and the
      // normwise eigenvector. The first is kept whenever its residual is as
      // small as the second's.
      const auto hk = detail::hessenberg_kernel(proj.matrix, mu(k));
      const Eigen::VectorXcd monic = vec / vec(n);
      const double res_h = detail::relative_eigen_residual(proj.matrix, hk.mu, hk.x);
      const double res_e = vec(n) != cd(0.0) ? detail::relative_eigen_residual(proj.matrix, mu(k), monic) : INFINITY;
      if (!std::isfinite(res_e) || (std::isfinite(res_h) && res_h <= 10.0 * std::max(res_e, 1e-15))) {
        a.v_squared = e1e2 + hk.mu;
        vec = hk.x;
      } else {
        vec = monic;
      }
    } else {
      a.degree_deficient = std::abs(vec(n)) <= 1e-12 * vnorm;
      if (!a.degree_deficient) vec /= vec(n);
    }
    std::vector<cd> c(vec.data(), vec.data() + vec.size());
    if (!a.degree_deficient) c.back() = 1.0;
    a.kernel_poly = ComplexPolynomial(std::move(c));

    double imag = std::abs(a.v_squared.imag()) / scale;
    for (const auto& x : a.kernel_poly.coeffs())
      imag = std::max(imag, std::abs(x.imag()) / std::max(1.0, a.kernel_poly.max_abs_coeff()));
    a.real = imag <= 1e-9;
    if (a.real) {
      a.v_squared = a.v_squared.real();
      std::vector<cd> r;
      for (const auto& x : a.kernel_poly.coeffs()) r.emplace_back(x.real(), 0.0);
      a.kernel_poly = ComplexPolynomial(std::move(r));
    }
    a.physical = a.real && a.v_squared.real() >= 0.0;
    for (int j = 0; j <= n; ++j)
      if (j != k && std::abs(mu(j) - mu(k)) <= 1e-8 * scale) ++a.multiplicity;
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end(), [](const AllowedCoupling& x, const AllowedCoupling& y) {
    return x.v_squared.real() != y.v_squared.real() ? x.v_squared.real() < y.v_squared.real()
                                                    : x.v_squared.imag() < y.v_squared.imag();
  });
  return out;
}

}  // namespace vibronic_qes
