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

#include <functional>
#include <string>
#include <vector>

namespace kipa {

struct FitParameter {
  std::string name;
  double initial = 0.0;
  bool positive = false;  // optimized as log(value)
  double scale = 0.0;     // typical magnitude for finite differences; 0 = from initial
};

struct LeastSquaresOptions {
  int max_iterations = 200;
  double param_tol = 1e-8;  // relative step for convergence
};

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> params;
  std::vector<double> std_errors;   // residual-scaled, sqrt(s^2 (J^T J)^-1)
  std::vector<double> unit_errors;  // sqrt((J^T J)^-1), per unit data noise
  double residual_rms = 0.0;
  bool converged = false;
  int iterations = 0;
  std::string message;

  double value(const std::string& name) const;
  double error(const std::string& name) const;
};

using ModelFn = std::function<double(double x, const std::vector<double>& p)>;

// Levenberg-Marquardt with forward-difference Jacobians and Marquardt
// diagonal scaling. Never throws on non-convergence: the best point is
// returned with converged = false and a message. Parameters the data cannot
// constrain (vanishing or collinear Jacobian columns) also clear the flag.
FitResult least_squares(const ModelFn& model, const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<FitParameter>& params, const LeastSquaresOptions& opt = {});

// y = offset + peak / (1 + ((x - center)/(fwhm/2))^2)
FitResult fit_lorentzian(const std::vector<double>& x, const std::vector<double>& y);
double lorentzian(double x, double center, double fwhm, double peak, double offset);

enum class ExpKind { Decay, Recovery };
// decay: A exp(-t/tau) + c; recovery: A (1 - exp(-t/tau)) + c
FitResult fit_exponential(const std::vector<double>& t, const std::vector<double>& y, ExpKind kind);
double exponential(double t, ExpKind kind, double amplitude, double tau, double offset);

// SNR = sqrt(G^2 A / (G^2 B + 1)); B is left free in sign so B -> 0 is reachable.
FitResult fit_snr_vs_gain(const std::vector<double>& Gk, const std::vector<double>& snr);
double snr_vs_gain(double Gk, double A, double B);

// G_SNR = a (1 - exp(-T_e / tau_k))
FitResult fit_gsnr_vs_te(const std::vector<double>& Te, const std::vector<double>& gsnr);
double gsnr_vs_te(double Te, double a, double tau_k);

}  // namespace kipa
