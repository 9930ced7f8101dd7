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

#include "kipa/noise.hpp"

#include <cmath>

#include "kipa/constants.hpp"
#include "kipa/errors.hpp"

namespace kipa {

void NoiseChain::validate() const {
  if (!(G_k >= 0.0)) throw DomainError("G_k must be >= 0");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("eta must lie in (0, 1]");
  if (!(G_h >= 1.0)) throw DomainError("G_h must be >= 1");
  if (n_k < 0.0 || n_eta < 0.0 || n_h < 0.0) throw DomainError("noise occupations must be >= 0");
  if (noise_in < kVacuumQuadrature - 1e-12) throw DomainError("input noise below the vacuum floor");
  if (!std::isfinite(signal_I)) throw DomainError("signal must be finite");
}

double n_thermal(double T, double omega) {
  if (!(T > 0.0)) throw DomainError("temperature must be positive");
  if (!(omega > 0.0)) throw DomainError("frequency must be positive");
  const double x = kHbar * omega / (kBoltzmann * T);
  return 0.5 / std::expm1(x);
}

double polarization(double T, double omega) {
  if (!(T > 0.0)) throw DomainError("temperature must be positive");
  if (!(omega > 0.0)) throw DomainError("frequency must be positive");
  return std::tanh(kHbar * omega / (2.0 * kBoltzmann * T));
}

double system_noise(const NoiseChain& c) {
  c.validate();
  const double e2 = c.eta * c.eta, g2 = c.G_h * c.G_h;
  return (1.0 / e2 - 1.0) * (kVacuumQuadrature + c.n_eta) + (1.0 - 1.0 / g2) * (kVacuumQuadrature + c.n_h) / e2;
}

namespace {

double snr_denominator(const NoiseChain& c, double G_k) {
  const double g2 = G_k * G_k;
  const double den = g2 * c.noise_in + (g2 - 1.0) * c.n_k + system_noise(c);
  if (!(den > 0.0)) throw DomainError("SNR denominator is not positive");
  return den;
}

}  // namespace

double chain_snr(const NoiseChain& c) {
  c.validate();
  return std::sqrt(c.G_k * c.G_k * c.signal_I * c.signal_I / snr_denominator(c, c.G_k));
}

double snr_gain(const NoiseChain& c) {
  c.validate();
  const double g2 = c.G_k * c.G_k;
  return std::sqrt(g2 * snr_denominator(c, 1.0) / snr_denominator(c, c.G_k));
}

double snr_gain_high_gain_limit(const NoiseChain& c) {
  c.validate();
  return std::sqrt((c.noise_in + system_noise(c)) / (c.noise_in + c.n_k));
}

SignalNoise attenuator_transform(SignalNoise in, double eta, double n_eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0, 1]");
  if (n_eta < 0.0) throw DomainError("n_eta must be >= 0");
  const double e2 = eta * eta;
  return SignalNoise{eta * in.signal, e2 * in.noise + (1.0 - e2) * (kVacuumQuadrature + n_eta)};
}

SignalNoise hemt_transform(SignalNoise in, double G_h, double n_h) {
  if (!(G_h >= 1.0)) throw DomainError("G_h must be >= 1");
  if (n_h < 0.0) throw DomainError("n_h must be >= 0");
  const double g2 = G_h * G_h;
  return SignalNoise{G_h * in.signal, g2 * in.noise + (g2 - 1.0) * (kVacuumQuadrature + n_h)};
}

SnrCurveCoefficients snr_curve_coefficients(const NoiseChain& c) {
  const double n_sys = system_noise(c);
  if (!(n_sys > c.n_k)) throw DomainError("curve form needs n_sys > n_k");
  return SnrCurveCoefficients{c.signal_I * c.signal_I / (n_sys - c.n_k), (c.noise_in + c.n_k) / (n_sys - c.n_k)};
}

}  // namespace kipa
