#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "model.hpp"
#include "polynomial.hpp"
#include "sl2.hpp"

namespace vibronic_qes {

using Complex = std::complex<double>;

/// Roots closer than this are treated as coincident.
inline constexpr double kMinRootSeparation = 1e-10;
/// A root set is converged when every residue is at most this in magnitude.
inline constexpr double kResidueTolerance = 1e-9;
/// Solutions whose sorted root lists agree within this are the same.
inline constexpr double kDedupTolerance = 1e-7;

struct BetheSolution {
  int n = 0;
  std::vector<Complex> roots;
  LevelParams level;
  ModelParams model;              ///< model.v is the coupling the solution is checked against
  Complex implied_v_squared;      ///< v² required by the parameter restriction
  double constraint_residual = 0.0;
  double max_residue = 0.0;
  bool converged = false;
  int iterations = 0;
  ComplexPolynomial ansatz;       ///< ∏(z − z_i), monic of degree n

  bool physical(double tol = kResidueTolerance) const { return converged && constraint_residual <= tol; }
};

struct BetheSearch {
  std::vector<BetheSolution> solutions;
  int seeds_tried = 0;
  int converged_runs = 0;
  std::vector<std::string> diagnostics;
};

namespace detail {

inline void check_separation(std::span<const Complex> roots) {
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) <= kMinRootSeparation)
        throw std::invalid_argument("bethe: coincident roots");
}

// Elementary symmetric sums e1, e2, e3 of w_j = 1/(z_i − z_j), j ≠ i.
struct ResidueSums {
  std::vector<Complex> w;  // w[i] is unused
  Complex e1, e2, e3;
};

inline ResidueSums residue_sums(std::span<const Complex> z, std::size_t i) {
  ResidueSums s;
  s.w.assign(z.size(), Complex(0.0));
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (j == i) continue;
    const Complex w = 1.0 / (z[i] - z[j]);
    s.w[j] = w;
    s.e3 += w * s.e2;
    s.e2 += w * s.e1;
    s.e1 += w;
  }
  return s;
}

}  // namespace detail

/// Residue of Ĥ₄y/y at z_i for y = ∏(z − z_k):
///   ¼ Σ_{p,l,j} 4/[(z_i−z_p)(z_i−z_l)(z_i−z_j)] − z_i Σ_{l,j} 3/[(z_i−z_l)(z_i−z_j)]
///   + [z_i² + (F/2) z_i + (E1/2 + E2/2 − 1)] Σ_j 2/(z_i−z_j) + [−F z_i² + z_i(1 − E2 − E1)]
/// with ordered sums over mutually distinct indices, all different from i.
/// An ordered sum over k distinct indices equals k! e_k of the w_j.
inline std::vector<Complex> bethe_residues(std::span<const Complex> roots, const LevelParams& lp,
                                           const ModelParams& mp) {
  detail::check_separation(roots);
  const double F = mp.F;
  const double c2 = 0.5 * lp.E1 + 0.5 * lp.E2 - 1.0;
  const double c1 = 1.0 - lp.E2 - lp.E1;
  std::vector<Complex> r(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const Complex zi = roots[i];
    const auto s = detail::residue_sums(roots, i);
    const Complex q = zi * zi + 0.5 * F * zi + c2;
    r[i] = 6.0 * s.e3 - 6.0 * zi * s.e2 + 2.0 * q * s.e1 + (-F * zi * zi + c1 * zi);
  }
  return r;
}

/// Analytic Jacobian ∂R_i/∂z_k of bethe_residues.
inline Eigen::MatrixXcd bethe_jacobian(std::span<const Complex> roots, const LevelParams& lp,
                                       const ModelParams& mp) {
  detail::check_separation(roots);
  const double F = mp.F;
  const double c2 = 0.5 * lp.E1 + 0.5 * lp.E2 - 1.0;
  const double c1 = 1.0 - lp.E2 - lp.E1;
  const auto n = static_cast<Eigen::Index>(roots.size());
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const Complex zi = roots[i];
    const auto s = detail::residue_sums(roots, i);
    const Complex q = zi * zi + 0.5 * F * zi + c2;
    const Complex dq = 2.0 * zi + 0.5 * F;
    Complex diag = -6.0 * s.e2 + 2.0 * dq * s.e1 + (-2.0 * F * zi + c1);
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j == i) continue;
      const Complex w = s.w[j];
      // e_k with w_j left out
      const Complex e1 = s.e1 - w;
      const Complex e2 = s.e2 - w * e1;
      const Complex dR_dw = 6.0 * e2 - 6.0 * zi * e1 + 2.0 * q;
      // ∂w_j/∂z_i = −w_j², ∂w_j/∂z_j = +w_j²
      J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dR_dw * w * w;
      diag -= dR_dw * w * w;
    }
    J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag;
  }
  return J;
}

/// v² implied by the parameter restriction
///   v² − E1E2 = −F Σz_i + n(n−1) + n(1 − E2 − E1)
inline Complex implied_v_squared(std::span<const Complex> roots, const LevelParams& lp, const ModelParams& mp) {
  const double n = static_cast<double>(roots.size());
  Complex sum(0.0);
  for (const auto& z : roots) sum += z;
  return lp.E1 * lp.E2 - mp.F * sum + n * (n - 1.0) + n * (1.0 - lp.E2 - lp.E1);
}

/// |v² − E1E2 − (−F Σz_i + n(n−1) + n(1 − E2 − E1))| with v from sol.model.
inline double constraint_residual(const BetheSolution& sol) {
  return std::abs(sol.model.v * sol.model.v - implied_v_squared(sol.roots, sol.level, sol.model));
}

namespace detail {

inline std::vector<Complex> sorted_roots(std::vector<Complex> r) {
  std::sort(r.begin(), r.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return r;
}

inline double max_abs(const std::vector<Complex>& r) {
  double m = 0.0;
  for (const auto& x : r) m = std::max(m, std::abs(x));
  return m;
}

inline bool separated(const std::vector<Complex>& z) {
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (std::abs(z[i] - z[j]) <= kMinRootSeparation) return false;
  return true;
}

struct NewtonOutcome {
  std::vector<Complex> roots;
  double max_residue = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string failure;
};

// Newton iteration with backtracking on max|R|. A few extra steps are taken
// after reaching the tolerance to polish the roots to rounding level.
inline NewtonOutcome newton_bethe(std::vector<Complex> z, const LevelParams& lp, const ModelParams& mp,
                                  int max_iter = 100) {
  NewtonOutcome out;
  if (!separated(z)) {
    out.failure = "seed has coincident roots";
    out.roots = std::move(z);
    return out;
  }
  auto residual = bethe_residues(z, lp, mp);
  double rnorm = max_abs(residual);
  int polish = 0;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it;
    if (rnorm <= kResidueTolerance) {
      if (++polish > 3) break;
    }
    const auto J = bethe_jacobian(z, lp, mp);
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(z.size()));
    for (std::size_t i = 0; i < z.size(); ++i) rhs(static_cast<Eigen::Index>(i)) = residual[i];
    const Eigen::VectorXcd step = J.fullPivLu().solve(rhs);
    if (!step.allFinite()) {
      out.failure = "singular Jacobian";
      break;
    }
    // Limit the step to the current root scale.
    double lambda = 1.0;
    const double cap = 2.0 * std::max(1.0, max_abs(z));
    if (step.cwiseAbs().maxCoeff() > cap) lambda = cap / step.cwiseAbs().maxCoeff();

    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      std::vector<Complex> trial(z);
      for (std::size_t i = 0; i < z.size(); ++i) trial[i] -= lambda * step(static_cast<Eigen::Index>(i));
      if (separated(trial)) {
        auto tr = bethe_residues(trial, lp, mp);
        const double tn = max_abs(tr);
        if (std::isfinite(tn) && (tn < rnorm || (rnorm <= kResidueTolerance && tn <= rnorm * 1.5))) {
          z = std::move(trial);
          residual = std::move(tr);
          rnorm = tn;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      if (rnorm > kResidueTolerance) out.failure = "line search stalled";
      break;
    }
  }
  out.roots = std::move(z);
  out.max_residue = rnorm;
  out.converged = rnorm <= kResidueTolerance;
  if (!out.converged && out.failure.empty()) out.failure = "iteration cap reached";
  return out;
}

// Chebyshev-style spreads over the classically allowed width, with complex
// jitter so Newton can leave the real line when it needs to.
inline std::vector<std::vector<Complex>> fallback_seeds(int n, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> jitter(0.0, 0.15);
  std::vector<std::vector<Complex>> seeds;
  const double width = std::sqrt(2.0 * n + 1.0);
  for (int s = 0; s < count; ++s) {
    const double scale = width * (0.5 + 0.25 * (s % 4));
    std::vector<Complex> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const double x = scale * std::cos(std::numbers::pi * (k + 0.5) / n);
      z[static_cast<std::size_t>(k)] = Complex(x + jitter(rng), (s % 2 ? 1.0 : 0.0) * jitter(rng));
    }
    seeds.push_back(std::move(z));
  }
  return seeds;
}

}  // namespace detail

inline BetheSolution make_bethe_solution(std::vector<Complex> roots, const LevelParams& lp,
                                         const ModelParams& mp) {
  BetheSolution sol;
  sol.n = static_cast<int>(roots.size());
  sol.roots = detail::sorted_roots(std::move(roots));
  sol.level = lp;
  sol.model = mp;
  sol.ansatz = ComplexPolynomial::from_roots(sol.roots);
  sol.max_residue = sol.roots.empty() ? 0.0 : detail::max_abs(bethe_residues(sol.roots, lp, mp));
  sol.converged = sol.max_residue <= kResidueTolerance;
  sol.implied_v_squared = implied_v_squared(sol.roots, lp, mp);
  sol.constraint_residual = constraint_residual(sol);
  return sol;
}

/// Newton multistart on the residue equations. Seeds come from the caller
/// when given; otherwise from the roots of every degree-n kernel polynomial
/// of allowed_couplings, then deterministic spreads if those do not
/// converge. n = 0 yields the single empty-root solution.
inline BetheSearch solve_bethe(int n, const LevelParams& lp, const ModelParams& mp,
                               std::optional<std::vector<std::vector<Complex>>> seeds = std::nullopt) {
  if (n < 0) throw std::invalid_argument("solve_bethe: n must be non-negative");
  BetheSearch search;
  if (n == 0) {
    search.solutions.push_back(make_bethe_solution({}, lp, mp));
    search.seeds_tried = 0;
    search.converged_runs = 1;
    return search;
  }

  auto run = [&](const std::vector<std::vector<Complex>>& list) {
    for (const auto& seed : list) {
      if (static_cast<int>(seed.size()) != n) {
        search.diagnostics.push_back("seed of wrong length skipped");
        continue;
      }
      ++search.seeds_tried;
      auto outcome = detail::newton_bethe(seed, lp, mp);
      if (!outcome.converged) {
        search.diagnostics.push_back("seed " + std::to_string(search.seeds_tried) + ": " + outcome.failure);
        continue;
      }
      ++search.converged_runs;
      auto sol = make_bethe_solution(std::move(outcome.roots), lp, mp);
      sol.iterations = outcome.iterations;
      search.solutions.push_back(std::move(sol));
    }
  };

  if (seeds) {
    run(*seeds);
  } else {
    std::vector<std::vector<Complex>> kernel_seeds;
    for (const auto& a : allowed_couplings(n, mp))
      if (!a.degree_deficient && a.kernel_poly.degree() == n) {
        auto r = a.roots();
        if (detail::separated(r)) kernel_seeds.push_back(std::move(r));
      }
    run(kernel_seeds);
    if (search.solutions.empty()) run(detail::fallback_seeds(n, 24, 0x5eedu + static_cast<unsigned>(n)));
  }

  // Deterministic order, then dedup.
  auto& sols = search.solutions;
  std::sort(sols.begin(), sols.end(), [](const BetheSolution& a, const BetheSolution& b) {
    for (std::size_t i = 0; i < a.roots.size(); ++i) {
      if (a.roots[i].real() != b.roots[i].real()) return a.roots[i].real() < b.roots[i].real();
      if (a.roots[i].imag() != b.roots[i].imag()) return a.roots[i].imag() < b.roots[i].imag();
    }
    return false;
  });
  std::vector<BetheSolution> unique;
  for (auto& s : sols) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const BetheSolution& u) {
      for (std::size_t i = 0; i < u.roots.size(); ++i)
        if (std::abs(u.roots[i] - s.roots[i]) > kDedupTolerance) return false;
      return true;
    });
    if (!dup) unique.push_back(std::move(s));
  }
  sols = std::move(unique);
  if (sols.empty()) search.diagnostics.push_back("no seed converged");
  return search;
}

/// Gauged components ψ_k = e^{−z²/2} y_k of one solution.
struct ChannelPolynomials {
  ComplexPolynomial y1;
  ComplexPolynomial y2;
};

/// The ansatz is the channel-2 factor y₂. Channel 1 follows from the
/// second gauged equation: y₁ = [½y₂'' − z y₂' + E2 y₂] / v.
inline ChannelPolynomials wavefunctions(const BetheSolution& sol) {
  if (sol.model.v == 0.0)
    throw std::domain_error("wavefunctions: v = 0, channels are decoupled and y1 is not fixed by y2");
  ChannelPolynomials out;
  out.y2 = sol.ansatz;
  out.y1 = vibronic_qes::apply(channel2_operator(sol.level), sol.ansatz) * Complex(1.0 / sol.model.v);
  return out;
}

}  // namespace vibronic_qes
