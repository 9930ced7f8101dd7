// Copyright 2026 The kipa-esr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <complex>

#include "kipa/constants.hpp"

namespace kipa {

using Complex = std::complex<double>;

// Refuse |xi| at or beyond this fraction of kappa_L/2.
inline constexpr double kStabilityMargin = 0.999;
// Internal pump phase that amplifies along I. User phases are offsets from it.
inline constexpr double kMaxGainPhase = 1.5 * kPi;

struct HamiltonianParams {
  double delta_dc = 0.0;
  double delta_p = 0.0;
  double K_kerr = 0.0;  // carried for reference; the gain model ignores it
  Complex xi{0.0, 0.0};
};

// Three-wave-mixing Hamiltonian coefficients for kinetic-inductance fraction alpha.
HamiltonianParams hamiltonian_params(double alpha, double I_dc, double I_p, double phi_p, double I_star,
                                     double omega0, double L_T);

struct KipaParams {
  double omega0 = 0.0;
  double kappa = 0.0;   // external coupling, omega0/Qc
  double gamma = 0.0;   // internal loss, omega0/Qi
  double Delta = 0.0;   // omega0 - omega_p/2
  double xi_mag = 0.0;
  double phi_p = kMaxGainPhase;

  double kappaL() const { return kappa + gamma; }
  double omega_p() const { return 2.0 * (omega0 - Delta); }
  Complex xi() const { return std::polar(xi_mag, -phi_p); }
  void validate() const;      // signs and finiteness
  void check_stable() const;  // ThresholdError past the margin
};

// Signal-to-signal reflection.
Complex reflection_gain(const KipaParams& p, double omega);
// Signal-to-idler (conjugate) coefficient from the same input-output solution:
// a_out(w) = Gamma a_in(w) + Lambda a_in^*(w_p - w).
Complex idler_gain(const KipaParams& p, double omega);

// Amplitude gain along the amplified quadrature, kappa/(kappa_L/2 - |xi|) - 1.
double degenerate_gain(const KipaParams& p);
// Largest quadrature gain at w_p/2 from the full reflection, |Gamma| + |Lambda|;
// equals degenerate_gain at Delta = 0.
double max_quadrature_gain(const KipaParams& p);
// |xi| that gives amplitude gain G_k.
double xi_for_gain(double kappa, double gamma, double G_k);

using Matrix2 = std::array<std::array<double, 2>, 2>;
// Real quadrature map (I, Q)_in -> (I, Q)_out in degenerate mode.
Matrix2 quadrature_transform(const KipaParams& p);

// Noise per I quadrature added by internal loss, in photons.
double added_noise(const KipaParams& p, double n_th_bath);
double added_noise_for_gain(double G_k, double gamma_over_kappa, double n_th_bath);

// Pump power for alpha given the pump current that would suffice at alpha = 1.
double pump_power(double alpha, double I_p_alpha1, double Z_r0);
// Analytic minimizer of pump_power over alpha.
double optimal_pump_alpha();

// Full width at half maximum of |Gamma(w)|^2 around w_p/2 (rad/s).
double gain_fwhm(const KipaParams& p);

}  // namespace kipa
