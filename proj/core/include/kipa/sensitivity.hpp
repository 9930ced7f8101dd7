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

#include <iosfwd>
#include <string>
#include <vector>

namespace kipa {

// n = 4 kappa P / (hbar w0 (kappa + gamma)^2); kappa is the port coupling rate.
double intracavity_photons(double P_in, double omega0, double kappa, double gamma);

// Omega_R = pi / (2 t_pi2) = 2 g0 sqrt(n).
double rabi_to_g0(double pi2_duration, double n_bar);
double g0_to_pi2_duration(double g0, double n_bar);

// Vacuum-fluctuation amplitude of a mode with peak field B1 at n photons.
double rms_field(double B1, double n_bar);
double coupling_from_field(double delta_B1_perp, double M, double gamma_e);

struct FieldSample {
  double x = 0.0, y = 0.0, z = 0.0;
  double volume = 0.0;  // m^3
  double B1perp = 0.0;  // T, any common scale
  bool in_implant = false;
};

struct FieldMap {
  std::vector<FieldSample> samples;
  double max_B1 = 0.0;  // max |B1| over the mode, same scale as B1perp

  void validate() const;
};

struct VolumeResult {
  double V_d = 0.0;
  double V_m = 0.0;
  double filling = 0.0;
};

VolumeResult effective_volume(const FieldMap& map);

// CSV: x_m,y_m,z_m,cell_vol_m3,B1perp_T,in_implant. An optional comment line
// `# max_B1_T=<v>` sets max_B1; otherwise the largest B1perp is used.
FieldMap read_field_map(std::istream& in, const std::string& source = "<stream>");
FieldMap read_field_map_file(const std::string& path);
void write_field_map(std::ostream& out, const FieldMap& map);

struct CouplingBin {
  double g0 = 0.0;  // rad/s
  double weight = 0.0;
};

// beta_c = sum g w sin^3(pi g / 2 g0) / sum g w, weights are spins per linear-g bin.
double spin_fraction(const std::vector<CouplingBin>& dist, double g0_cal);

// CSV: g0_hz,weight
std::vector<CouplingBin> read_coupling_histogram(std::istream& in, const std::string& source = "<stream>");
std::vector<CouplingBin> read_coupling_histogram_file(const std::string& path);

// Fraction of a Lorentzian spin line (FWHM, centre offset from w0) inside the
// excitation window R = cavity Lorentzian x sinc^2(t_p d/2), R(0) = 1.
double pulse_overlap(double linewidth_fwhm, double line_offset, double QL, double omega0, double t_p);

struct BudgetInputs {
  double beta_a = 1.0;
  double beta_b = 1.0;
  double beta_c = 1.0;
  double beta_d = 1.0;
  double C_d = 0.0;  // m^-3
  double V_d = 0.0;  // m^3

  void validate() const;
};

struct SpinCounts {
  double N_d = 0.0;
  double N_tot = 0.0;
};

SpinCounts total_spins(const BudgetInputs& in);
double n_min_measured(double N_tot, double SNR1);

// N_min = ((kappa + w)/(2 g0 p)) sqrt(n_n w kappa / (kappa_c (kappa + 2w))),
// kappa the loaded rate, w_echo = 1/T_E.
double n_min_theory(double kappa, double kappa_c, double w_echo, double g0, double p, double n_n);
double noise_from_n_min(double kappa, double kappa_c, double w_echo, double g0, double p, double N_min);

double purcell_rate(double g0, double kappa, double gamma, double delta);

// Ratios of each figure of merit at alpha against alpha_ref (default: a purely
// geometric resonator, alpha = 0).
struct AlphaScaling {
  double g0 = 1.0;
  double N_tot = 1.0;
  double N_min = 1.0;
  double SNR = 1.0;
  double N_min_sqrt_T1 = 1.0;  // absolute sensitivity, Purcell-limited repetition
  double SNR_per_sqrt_T1 = 1.0;
  double length = 1.0;
};

AlphaScaling alpha_scaling(double alpha, double alpha_ref = 0.0);

}  // namespace kipa
