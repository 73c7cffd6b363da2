#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vibronic_qes {

/// Dimensionful inputs of the two-channel harmonic vibronic model:
///   -ħ²/2m ψ₁'' + (mΩ²x²/2 − F₁x) ψ₁ + V ψ₂ = E ψ₁
///   -ħ²/2m ψ₂'' + (mΩ²x²/2 − F₂x) ψ₂ + V ψ₁ = E ψ₂
struct PhysicalParams {
  double m = 1.0;
  double hbar = 1.0;
  double Omega = 1.0;
  double F1 = 0.0;
  double F2 = 0.0;
  double V = 0.0;

  void validate() const {
    if (!(std::isfinite(m) && std::isfinite(hbar) && std::isfinite(Omega) && std::isfinite(F1) &&
          std::isfinite(F2) && std::isfinite(V)))
      throw std::invalid_argument("PhysicalParams: all fields must be finite");
    if (!(m > 0.0 && hbar > 0.0 && Omega > 0.0))
      throw std::invalid_argument("PhysicalParams: m, hbar and Omega must be positive");
  }

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

/// Dimensionless parameters in the oscillator length unit (ħ/mΩ)^{1/2}.
/// F is the slope difference, b the channel-2 shift and v the coupling.
struct ModelParams {
  double F = 0.0;
  double b = 0.0;
  double v = 0.0;

  void validate() const {
    if (!(std::isfinite(F) && std::isfinite(b) && std::isfinite(v)))
      throw std::invalid_argument("ModelParams: all fields must be finite");
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Per-level energies of the gauged equations. E2 is the channel-2 energy
/// shifted by −½; E1 = E2 − F·b.
struct LevelParams {
  int n = 0;
  double E1 = 0.0;
  double E2 = 0.0;

  friend bool operator==(const LevelParams&, const LevelParams&) = default;
};

inline ModelParams to_dimensionless(const PhysicalParams& p) {
  p.validate();
  const double scale = std::sqrt(p.hbar * p.m * p.Omega * p.Omega * p.Omega);
  ModelParams mp{(p.F2 - p.F1) / scale, p.F2 / scale, std::abs(p.V) / (p.hbar * p.Omega)};
  if (!(std::isfinite(mp.F) && std::isfinite(mp.b) && std::isfinite(mp.v)))
    throw std::invalid_argument("to_dimensionless: result is not finite");
  return mp;
}

/// Level parameters at the exceptional energy E2 = n.
inline LevelParams level_params(int n, const ModelParams& mp) {
  if (n < 0) throw std::invalid_argument("level_params: n must be non-negative");
  const double e2 = static_cast<double>(n);
  return LevelParams{n, e2 - mp.F * mp.b, e2};
}

/// E1 and E2 for an arbitrary dimensionful energy E, straight from their
/// definitions. Used to cross-check level_params.
inline LevelParams level_params_from_energy(int n, double E, const PhysicalParams& p) {
  p.validate();
  const double hw = p.hbar * p.Omega;
  const double mw2 = p.m * p.Omega * p.Omega;
  const double e1 = (E - p.F2 * p.F2 / (2.0 * mw2) + p.F1 * p.F2 / mw2) / hw - 0.5;
  const double e2 = (E + p.F2 * p.F2 / (2.0 * mw2)) / hw - 0.5;
  return LevelParams{n, e1, e2};
}

/// ε = E/ħΩ + ½ of level n: (n+1) − b²/2.
inline double exceptional_epsilon(int n, double b) { return (n + 1.0) - 0.5 * b * b; }

struct ExceptionalEnergy {
  double epsilon = 0.0;  ///< E/ħΩ + ½
  double E = 0.0;        ///< dimensionful energy
};

/// ε = (n+1) − b²/2 and E = ħΩ(n+½) − F₂²/(2mΩ²). Throws if the two routes
/// disagree beyond rounding.
inline ExceptionalEnergy exceptional_energy(int n, const PhysicalParams& p) {
  if (n < 0) throw std::invalid_argument("exceptional_energy: n must be non-negative");
  const double b = to_dimensionless(p).b;
  const double hw = p.hbar * p.Omega;
  ExceptionalEnergy out;
  out.epsilon = exceptional_epsilon(n, b);
  out.E = hw * (n + 0.5) - p.F2 * p.F2 / (2.0 * p.m * p.Omega * p.Omega);
  const double eps_from_E = out.E / hw + 0.5;
  const double scale = std::max({1.0, std::abs(out.epsilon), 0.5 * b * b});
  if (std::abs(eps_from_E - out.epsilon) > 1e-12 * scale)
    throw std::logic_error("exceptional_energy: epsilon routes disagree");
  return out;
}

inline PhysicalParams channel_swap(const PhysicalParams& p) {
  PhysicalParams q = p;
  q.F1 = p.F2;
  q.F2 = p.F1;
  return q;
}

/// x = (ħ/mΩ)^{1/2} z + F₂/(mΩ²)
inline double to_physical_coordinate(double z, const PhysicalParams& p) {
  return std::sqrt(p.hbar / (p.m * p.Omega)) * z + p.F2 / (p.m * p.Omega * p.Omega);
}

inline double to_dimensionless_coordinate(double x, const PhysicalParams& p) {
  return (x - p.F2 / (p.m * p.Omega * p.Omega)) / std::sqrt(p.hbar / (p.m * p.Omega));
}

/// ψ = e^{−z²/2} y
inline double gauge_envelope(double z) { return std::exp(-0.5 * z * z); }

}  // namespace vibronic_qes
