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

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace kipa {

using Complex = std::complex<double>;

// Complete elliptic integral of the first kind, modulus k in [0, 1).
double elliptic_k(double k);

// Coplanar waveguide on a thick substrate, quasi-static conformal mapping
// plus thin-film kinetic inductance.
struct CpwLine {
  double w = 0.0;
  double gap = 0.0;
  double length = 0.0;
  double eps_r = 1.0;
  double Lk0_sq = 0.0;

  double C_l = 0.0;   // F/m
  double Lg_l = 0.0;  // H/m
  double Lk_l = 0.0;  // H/m
  double Z = 0.0;     // ohm
  double alpha = 0.0;

  double L_l() const { return Lg_l + Lk_l; }
  double phase_velocity() const;
  double beta(double omega) const { return omega / phase_velocity(); }
};

CpwLine cpw_params(double w, double gap, double eps_r, double Lk0_sq, double length = 0.0);

// Lk(I) = Lk0 (1 + I^2/I*^2).
double kinetic_inductance(double Lk0, double I, double I_star);

// Quadratic DC frequency shift, -w0 I^2 / (2 I*^2).
double dc_tuning(double omega0_at_zero, double I_dc, double I_star);

// Quarter-wave fundamental pi / (2 l sqrt(L C)).
double resonator_frequency(const CpwLine& line, double l);
double quarter_wave_length(const CpwLine& line, double omega);

double loaded_q(double Qi, double Qc);
double coupling_q_from_loaded(double QL, double Qi);

struct ResonatorState {
  double omega0 = 0.0;
  double I_dc = 0.0;
  double I_star = 0.0;
  double l = 0.0;
  double Qi = 0.0;
  double Qc = 0.0;
  double QL = 0.0;

  static ResonatorState from_q(double omega0, double Qi, double Qc);
  void validate() const;
  double kappa() const;  // omega0 / Qc
  double gamma() const;  // omega0 / Qi
};

struct Abcd {
  Complex a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

  Complex det() const { return a * d - b * c; }
  friend Abcd operator*(const Abcd& x, const Abcd& y);
};

struct SifNetwork {
  std::vector<CpwLine> segments;  // port side first
  double Z0 = 50.0;

  void validate() const;
};

Abcd segment_abcd(const CpwLine& line, double omega);
Abcd abcd_cascade(const SifNetwork& network, double omega);

struct SParams {
  Complex s11;
  Complex s21;
};

SParams s_params(const Abcd& m, double Z0);
Complex s21(const SifNetwork& network, double omega, double Z0);

// Eight alternating lo/hi sections, the last hi one narrower, each lambda/4
// at omega_design with its own phase velocity.
SifNetwork reference_sif(double eps_r, double Lk0_sq, double omega_design, double Z0);

// Text format: header lines `eps_r=`, `Lk0_sq=`, `Z0=`, then one
// `w_m gap_m length_m` line per segment. '#' starts a comment.
SifNetwork read_network(std::istream& in, const std::string& source = "<stream>");
SifNetwork read_network_file(const std::string& path);
void write_network(std::ostream& out, const SifNetwork& network);

}  // namespace kipa
