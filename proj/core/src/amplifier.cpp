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

#include "kipa/amplifier.hpp"

#include <cmath>

#include "kipa/errors.hpp"

namespace kipa {

HamiltonianParams hamiltonian_params(double alpha, double I_dc, double I_p, double phi_p, double I_star,
                                     double omega0, double L_T) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (!(I_star > 0.0)) throw DomainError("I_star must be positive");
  if (std::abs(I_dc) >= I_star || std::abs(I_p) >= I_star) throw DomainError("currents must stay below I_star");
  if (!(L_T > 0.0) || !(omega0 > 0.0)) throw DomainError("L_T and omega0 must be positive");
  const double is2 = I_star * I_star;
  HamiltonianParams h;
  h.delta_dc = -(alpha / 2.0) * (I_dc * I_dc / is2) * omega0;
  h.delta_p = -(alpha / 8.0) * (I_p * I_p / is2) * omega0;
  h.K_kerr = -(3.0 * alpha / 8.0) * (kHbar * omega0 / (L_T * is2)) * omega0;
  h.xi = std::polar(-(alpha / 4.0) * (I_dc * I_p / is2) * omega0, -phi_p);
  return h;
}

void KipaParams::validate() const {
  if (!std::isfinite(omega0) || !std::isfinite(kappa) || !std::isfinite(gamma) || !std::isfinite(Delta) ||
      !std::isfinite(xi_mag) || !std::isfinite(phi_p))
    throw DomainError("non-finite amplifier parameter");
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  if (gamma < 0.0) throw DomainError("gamma must be >= 0");
  if (xi_mag < 0.0) throw DomainError("|xi| must be >= 0");
}

void KipaParams::check_stable() const {
  validate();
  if (xi_mag >= kStabilityMargin * 0.5 * kappaL())
    throw ThresholdError("|xi| at or above the parametric threshold (kappa_L/2)");
}

namespace {

Complex denominator(const KipaParams& p, double omega) {
  const double nu = omega - 0.5 * p.omega_p();
  const Complex half(0.5 * p.kappaL(), nu);
  const Complex den = p.Delta * p.Delta + half * half - p.xi_mag * p.xi_mag;
  if (std::abs(den) < 1e-12 * p.kappaL() * p.kappaL()) throw PoleError("reflection evaluated at a pole");
  return den;
}

}  // namespace

Complex reflection_gain(const KipaParams& p, double omega) {
  p.check_stable();
  const double nu = omega - 0.5 * p.omega_p();
  const Complex num(p.kappa * p.kappaL() / 2.0, p.kappa * (p.Delta + nu));
  return num / denominator(p, omega) - 1.0;
}

Complex idler_gain(const KipaParams& p, double omega) {
  p.check_stable();
  return Complex(0.0, -p.kappa) * p.xi() / denominator(p, omega);
}

double degenerate_gain(const KipaParams& p) {
  p.check_stable();
  return p.kappa / (0.5 * p.kappaL() - p.xi_mag) - 1.0;
}

double max_quadrature_gain(const KipaParams& p) {
  const double w = 0.5 * p.omega_p();
  return std::abs(reflection_gain(p, w)) + std::abs(idler_gain(p, w));
}

double xi_for_gain(double kappa, double gamma, double G_k) {
  if (!(kappa > 0.0) || gamma < 0.0) throw DomainError("need kappa > 0, gamma >= 0");
  const double kl = kappa + gamma;
  const double g_min = (kappa - gamma) / kl;
  if (G_k < g_min) throw DomainError("gain below the unpumped reflection");
  const double xi = 0.5 * kl - kappa / (G_k + 1.0);
  if (xi >= kStabilityMargin * 0.5 * kl) throw ThresholdError("requested gain needs |xi| past the threshold margin");
  return xi;
}

Matrix2 quadrature_transform(const KipaParams& p) {
  p.check_stable();
  const double kl2 = 0.5 * p.kappaL();
  const double den = p.Delta * p.Delta + kl2 * kl2 - p.xi_mag * p.xi_mag;
  if (!(den > 0.0)) throw ThresholdError("quadrature transform denominator is not positive");
  const double f = p.kappa / den;
  const double s = std::sin(p.phi_p), c = std::cos(p.phi_p);
  Matrix2 m;
  m[0][0] = f * (kl2 - p.xi_mag * s) - 1.0;
  m[0][1] = f * (-p.xi_mag * c + p.Delta);
  m[1][0] = f * (-p.xi_mag * c - p.Delta);
  m[1][1] = f * (kl2 + p.xi_mag * s) - 1.0;
  return m;
}

double added_noise_for_gain(double G_k, double gamma_over_kappa, double n_th_bath) {
  if (gamma_over_kappa < 0.0 || n_th_bath < 0.0) throw DomainError("loss ratio and bath occupation must be >= 0");
  if (!(G_k > 1.0)) throw DegenerateInputError("added noise per quadrature is undefined for G_k <= 1");
  return gamma_over_kappa * ((G_k + 1.0) / (G_k - 1.0)) * (0.25 + n_th_bath);
}

double added_noise(const KipaParams& p, double n_th_bath) {
  return added_noise_for_gain(degenerate_gain(p), p.gamma / p.kappa, n_th_bath);
}

double pump_power(double alpha, double I_p_alpha1, double Z_r0) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("pump_power needs 0 < alpha < 1");
  if (!(Z_r0 > 0.0)) throw DomainError("Z_r0 must be positive");
  return I_p_alpha1 * I_p_alpha1 * Z_r0 / (2.0 * alpha * alpha * std::sqrt(1.0 - alpha));
}

// d/da [a^-2 (1-a)^-1/2] = 0  ->  2/a = 1/(2(1-a))  ->  a = 4/5.
double optimal_pump_alpha() { return 0.8; }

double gain_fwhm(const KipaParams& p) {
  p.check_stable();
  const double c = 0.5 * p.omega_p();
  const double peak = std::norm(reflection_gain(p, c));
  const double half = 0.5 * peak;
  auto g = [&](double nu) { return std::norm(reflection_gain(p, c + nu)) - half; };
  // Expand outward until below half, then bisect each edge.
  auto edge = [&](double sign) {
    double lo = 0.0, hi = 1e-3 * p.kappaL();
    int guard = 0;
    while (g(sign * hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++guard > 200) throw NumericalError("gain_fwhm: no half-maximum crossing");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * p.kappaL(); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (g(sign * mid) > 0.0) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  if (g(0.0) < 0.0) throw NumericalError("gain_fwhm: peak is not at w_p/2");
  return edge(+1.0) + edge(-1.0);
}

}  // namespace kipa
