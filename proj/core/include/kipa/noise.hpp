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

namespace kipa {

// Quadrature convention: vacuum variance is 1/4 per quadrature, so a thermal
// bath at occupation n_th contributes 1/4 + n_th.
inline constexpr double kVacuumQuadrature = 0.25;

// KIPA -> attenuator (loss between device and HEMT) -> HEMT.
// eta and G_h are amplitude factors. Noise is referred to the KIPA output.
struct NoiseChain {
  double G_k = 1.0;
  double eta = 1.0;
  double G_h = 1.0;
  double n_k = 0.0;
  double n_eta = 0.0;
  double n_h = 0.0;
  double signal_I = 0.0;
  double noise_in = kVacuumQuadrature;

  void validate() const;
};

// Half the Bose occupation: thermal photons per quadrature.
double n_thermal(double T, double omega);
// tanh(hbar w / 2 k T).
double polarization(double T, double omega);

double system_noise(const NoiseChain& chain);
double chain_snr(const NoiseChain& chain);
double snr_gain(const NoiseChain& chain);
// G_k -> infinity limit of snr_gain.
double snr_gain_high_gain_limit(const NoiseChain& chain);

struct SignalNoise {
  double signal = 0.0;
  double noise = 0.0;  // <I^2>, photons per quadrature
};

SignalNoise attenuator_transform(SignalNoise in, double eta, double n_eta);
SignalNoise hemt_transform(SignalNoise in, double G_h, double n_h);

// Coefficients of SNR = sqrt(G^2 A / (G^2 B + 1)) implied by a chain.
struct SnrCurveCoefficients {
  double A = 0.0;
  double B = 0.0;
};
SnrCurveCoefficients snr_curve_coefficients(const NoiseChain& chain);

}  // namespace kipa
