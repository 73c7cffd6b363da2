#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "model.hpp"
#include "symmetric_eigen.hpp"

namespace vibronic_qes {

struct OracleConfig {
  int basis_size = 200;
  double match_tolerance = 1e-7;

  void validate() const {
    if (basis_size < 8) throw std::invalid_argument("OracleConfig: basis_size must be at least 8");
    if (!(match_tolerance > 0.0)) throw std::invalid_argument("OracleConfig: match_tolerance must be positive");
  }
};

struct MatchRecord {
  int n = 0;
  double target = 0.0;   ///< n + 1/2
  double nearest = 0.0;  ///< closest oracle eigenvalue
  double gap = 0.0;      ///< |nearest − target|
  bool matched = false;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

/// Oracle spectrum of the coupled pair in the variable λ = E2 + 1/2.
/// Only eigenvalues up to trusted_limit (the lower half of the 2N values)
/// are considered free of truncation error.
struct SpectrumReport {
  int basis_size = 0;
  std::vector<double> eigenvalues;
  double trusted_limit = 0.0;
  std::vector<MatchRecord> matches;
};

/// Position operator z in the oscillator number basis: ⟨k|z|k+1⟩ = √((k+1)/2).
inline SymmetricMatrix position_matrix(int N) {
  if (N < 2) throw std::invalid_argument("position_matrix: N must be at least 2");
  SymmetricMatrix z(static_cast<std::size_t>(N));
  for (int k = 0; k + 1 < N; ++k)
    z.set(static_cast<std::size_t>(k), static_cast<std::size_t>(k) + 1, std::sqrt((k + 1) / 2.0));
  return z;
}

/// Block matrix of the dimensionless coupled equations written as one
/// eigenproblem in λ = E2 + 1/2:
///   [ H₀ + F Z + F b   v ] [ψ₁]     [ψ₁]
///   [ v             H₀ ] [ψ₂] = λ [ψ₂],   H₀ = diag(k + 1/2)
/// The F b shift on channel 1 is E2 − E1.
inline SymmetricMatrix coupled_matrix(const ModelParams& mp, const OracleConfig& cfg) {
  cfg.validate();
  mp.validate();
  const auto N = static_cast<std::size_t>(cfg.basis_size);
  const auto Z = position_matrix(cfg.basis_size);
  SymmetricMatrix h(2 * N);
  for (std::size_t k = 0; k < N; ++k) {
    const double osc = static_cast<double>(k) + 0.5;
    h(k, k) = osc + mp.F * mp.b;
    h(N + k, N + k) = osc;
    h.set(k, N + k, mp.v);
    if (k + 1 < N) h.set(k, k + 1, mp.F * Z(k, k + 1));
  }
  return h;
}

/// coupled_matrix with the channels interleaved (ψ₁ₖ at 2k, ψ₂ₖ at 2k+1).
/// Same spectrum, half-bandwidth 2.
inline SymmetricMatrix interleaved_coupled_matrix(const ModelParams& mp, const OracleConfig& cfg) {
  const auto block = coupled_matrix(mp, cfg);
  const std::size_t N = static_cast<std::size_t>(cfg.basis_size);
  auto index = [N](std::size_t i) { return i < N ? 2 * i : 2 * (i - N) + 1; };
  SymmetricMatrix h(2 * N);
  for (std::size_t i = 0; i < 2 * N; ++i)
    for (std::size_t j = 0; j < 2 * N; ++j)
      if (block(i, j) != 0.0) h(index(i), index(j)) = block(i, j);
  return h;
}

/// Oracle eigenvalues, ascending, from the band reduction of the interleaved
/// matrix followed by implicit QL.
inline SpectrumReport spectrum(const ModelParams& mp, const OracleConfig& cfg) {
  SpectrumReport r;
  r.basis_size = cfg.basis_size;
  r.eigenvalues = banded_symmetric_eigenvalues(interleaved_coupled_matrix(mp, cfg), 2);
  r.trusted_limit = r.eigenvalues[static_cast<std::size_t>(cfg.basis_size) - 1];
  return r;
}

/// Nearest oracle eigenvalue to the exceptional value n + 1/2.
inline MatchRecord match_exceptional(const SpectrumReport& report, int n, const OracleConfig& cfg) {
  if (n < 0) throw std::invalid_argument("match_exceptional: n must be non-negative");
  if (report.eigenvalues.empty()) throw std::invalid_argument("match_exceptional: empty spectrum");
  const double target = n + 0.5;
  if (report.basis_size < n + 20)
    throw std::out_of_range("match_exceptional: basis size must be at least n + 20");
  if (target > report.trusted_limit) throw std::out_of_range("match_exceptional: n + 1/2 outside trusted range");

  const auto& ev = report.eigenvalues;
  auto it = std::lower_bound(ev.begin(), ev.end(), target);
  double nearest = it != ev.end() ? *it : ev.back();
  if (it != ev.begin() && std::abs(*std::prev(it) - target) < std::abs(nearest - target)) nearest = *std::prev(it);

  MatchRecord m;
  m.n = n;
  m.target = target;
  m.nearest = nearest;
  m.gap = std::abs(nearest - target);
  m.matched = m.gap <= cfg.match_tolerance;
  return m;
}

}  // namespace vibronic_qes
