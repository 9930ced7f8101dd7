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

#include "kipa/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "kipa/constants.hpp"
#include "kipa/errors.hpp"
#include "kipa/io.hpp"
#include "kipa/quadrature.hpp"

namespace kipa {

double intracavity_photons(double P_in, double omega0, double kappa, double gamma) {
  if (P_in < 0.0) throw DomainError("input power must be >= 0");
  if (!(omega0 > 0.0) || !(kappa > 0.0) || gamma < 0.0) throw DomainError("need omega0, kappa > 0 and gamma >= 0");
  const double kl = kappa + gamma;
  return 4.0 * kappa * P_in / (kHbar * omega0 * kl * kl);
}

double rabi_to_g0(double pi2_duration, double n_bar) {
  if (!(pi2_duration > 0.0)) throw DomainError("pi/2 duration must be positive");
  if (!(n_bar > 0.0)) throw DomainError("photon number must be positive");
  const double omega_r = kPi / (2.0 * pi2_duration);
  return omega_r / (2.0 * std::sqrt(n_bar));
}

double g0_to_pi2_duration(double g0, double n_bar) {
  if (!(g0 > 0.0) || !(n_bar > 0.0)) throw DomainError("g0 and photon number must be positive");
  return kPi / (2.0 * 2.0 * g0 * std::sqrt(n_bar));
}

double rms_field(double B1, double n_bar) {
  if (!(n_bar > 0.0)) throw DomainError("photon number must be positive");
  return B1 / (2.0 * std::sqrt(n_bar));
}

double coupling_from_field(double delta_B1_perp, double M, double gamma_e) {
  if (delta_B1_perp < 0.0 || M < 0.0 || gamma_e < 0.0) throw DomainError("coupling inputs must be >= 0");
  return delta_B1_perp * M * gamma_e;
}

void FieldMap::validate() const {
  if (samples.empty()) throw DomainError("field map is empty");
  if (!(max_B1 > 0.0)) throw DomainError("field map max_B1 must be positive");
  for (const FieldSample& s : samples) {
    if (!(s.volume > 0.0)) throw DomainError("field map cell with non-positive volume");
    if (!(s.B1perp >= 0.0)) throw DomainError("field map cell with negative field");
    if (s.B1perp > max_B1 * (1.0 + 1e-9)) throw DomainError("field map cell exceeds max_B1");
  }
}

VolumeResult effective_volume(const FieldMap& map) {
  map.validate();
  VolumeResult r;
  const double inv = 1.0 / map.max_B1;
  for (const FieldSample& s : map.samples) {
    const double u = s.B1perp * inv;
    const double v = s.volume * u * u;
    r.V_m += v;
    if (s.in_implant) r.V_d += v;
  }
  r.filling = r.V_m > 0.0 ? r.V_d / r.V_m : 0.0;
  return r;
}

FieldMap read_field_map(std::istream& in, const std::string& source) {
  FieldMap map;
  double declared_max = -1.0;
  CsvReader csv(in, source, {"x_m", "y_m", "z_m", "cell_vol_m3", "B1perp_T", "in_implant"});
  csv.on_comment([&](const std::string& text) {
    const std::string key = "max_B1_T=";
    if (auto pos = text.find(key); pos != std::string::npos) declared_max = parse_double(text.substr(pos + key.size()), source);
  });
  std::vector<double> row;
  while (csv.next(row)) {
    FieldSample s;
    s.x = row[0];
    s.y = row[1];
    s.z = row[2];
    s.volume = row[3];
    s.B1perp = row[4];
    if (row[5] != 0.0 && row[5] != 1.0) csv.fail("in_implant must be 0 or 1");
    s.in_implant = row[5] == 1.0;
    map.samples.push_back(s);
  }
  if (map.samples.empty()) throw ParseError(source + ": field map has no rows");
  double biggest = 0.0;
  for (const FieldSample& s : map.samples) biggest = std::max(biggest, s.B1perp);
  map.max_B1 = declared_max > 0.0 ? declared_max : biggest;
  return map;
}

FieldMap read_field_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open field map " + path);
  return read_field_map(in, path);
}

void write_field_map(std::ostream& out, const FieldMap& map) {
  out << "# max_B1_T=" << format_double(map.max_B1) << "\n";
  out << "x_m,y_m,z_m,cell_vol_m3,B1perp_T,in_implant\n";
  for (const FieldSample& s : map.samples)
    out << format_double(s.x) << ',' << format_double(s.y) << ',' << format_double(s.z) << ','
        << format_double(s.volume) << ',' << format_double(s.B1perp) << ',' << (s.in_implant ? 1 : 0) << '\n';
}

double spin_fraction(const std::vector<CouplingBin>& dist, double g0_cal) {
  if (!(g0_cal > 0.0)) throw DomainError("calibrated g0 must be positive");
  if (dist.empty()) throw DomainError("coupling distribution is empty");
  double num = 0.0, den = 0.0;
  bool any = false;
  for (const CouplingBin& b : dist) {
    if (b.weight < 0.0 || b.g0 < 0.0) throw DomainError("coupling bins must have g0, weight >= 0");
    if (b.weight > 0.0) any = true;
    const double s = std::sin(kPi * b.g0 / (2.0 * g0_cal));
    num += b.g0 * b.weight * s * s * s;
    den += b.g0 * b.weight;
  }
  if (!any || !(den > 0.0)) throw DomainError("coupling distribution has no positive weight");
  return num / den;
}

std::vector<CouplingBin> read_coupling_histogram(std::istream& in, const std::string& source) {
  std::vector<CouplingBin> out;
  CsvReader csv(in, source, {"g0_hz", "weight"});
  std::vector<double> row;
  while (csv.next(row)) out.push_back(CouplingBin{rad(row[0]), row[1]});
  if (out.empty()) throw ParseError(source + ": histogram has no rows");
  return out;
}

std::vector<CouplingBin> read_coupling_histogram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open coupling histogram " + path);
  return read_coupling_histogram(in, path);
}

double pulse_overlap(double linewidth_fwhm, double line_offset, double QL, double omega0, double t_p) {
  if (!(linewidth_fwhm > 0.0) || !(QL > 0.0) || !(omega0 > 0.0) || !(t_p > 0.0))
    throw DomainError("pulse_overlap inputs must be positive");
  const double kappa = omega0 / QL;
  const double hw = 0.5 * linewidth_fwhm;
  auto response = [&](double d) {
    const double cav = 1.0 / (1.0 + 4.0 * d * d / (kappa * kappa));
    const double x = 0.5 * t_p * d;
    const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    return cav * sinc * sinc;
  };
  auto line = [&](double d) {
    const double u = d - line_offset;
    return (hw / kPi) / (u * u + hw * hw);
  };
  // R confines the integrand; cover it and the line core, with breakpoints at
  // the sinc nulls near the centre so each panel is smooth.
  const double null = kTwoPi / t_p;
  const double reach = std::max({200.0 * kappa, 200.0 * null, std::abs(line_offset) + 10.0 * linewidth_fwhm});
  std::vector<double> bp;
  const int inner = 40;
  bp.push_back(-reach);
  for (int k = -inner; k <= inner; ++k) bp.push_back(k * null);
  bp.push_back(reach);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  const double num = adaptive_simpson([&](double d) { return response(d) * line(d); }, bp, 1e-6);
  // The line is normalized to unit area, so the denominator is exactly 1.
  return num;
}

void BudgetInputs::validate() const {
  for (double b : {beta_a, beta_b, beta_c, beta_d})
    if (!(b >= 0.0 && b <= 1.0)) throw DomainError("beta factors must lie in [0, 1]");
  if (C_d < 0.0 || V_d < 0.0) throw DomainError("C_d and V_d must be >= 0");
}

SpinCounts total_spins(const BudgetInputs& in) {
  in.validate();
  SpinCounts c;
  c.N_d = in.beta_a * in.C_d * in.V_d;
  c.N_tot = in.beta_b * in.beta_c * in.beta_d * c.N_d;
  return c;
}

double n_min_measured(double N_tot, double SNR1) {
  if (!(SNR1 > 0.0)) throw DomainError("single-shot SNR must be positive");
  if (N_tot < 0.0) throw DomainError("N_tot must be >= 0");
  return N_tot / SNR1;
}

namespace {

void check_theory_inputs(double kappa, double kappa_c, double w, double g0, double p) {
  if (!(kappa > 0.0) || !(kappa_c > 0.0) || !(w > 0.0) || !(g0 > 0.0)) throw DomainError("rates must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("polarization must lie in (0, 1]");
}

double theory_prefactor(double kappa, double kappa_c, double w, double g0, double p) {
  return ((kappa + w) / (2.0 * g0 * p)) * std::sqrt(w * kappa / (kappa_c * (kappa + 2.0 * w)));
}

}  // namespace

double n_min_theory(double kappa, double kappa_c, double w_echo, double g0, double p, double n_n) {
  check_theory_inputs(kappa, kappa_c, w_echo, g0, p);
  if (n_n < 0.0) throw DomainError("noise photons must be >= 0");
  return theory_prefactor(kappa, kappa_c, w_echo, g0, p) * std::sqrt(n_n);
}

double noise_from_n_min(double kappa, double kappa_c, double w_echo, double g0, double p, double N_min) {
  check_theory_inputs(kappa, kappa_c, w_echo, g0, p);
  if (N_min < 0.0) throw DomainError("N_min must be >= 0");
  const double r = N_min / theory_prefactor(kappa, kappa_c, w_echo, g0, p);
  return r * r;
}

double purcell_rate(double g0, double kappa, double gamma, double delta) {
  if (g0 < 0.0 || !(kappa > 0.0) || gamma < 0.0) throw DomainError("need g0 >= 0, kappa > 0, gamma >= 0");
  const double kl = kappa + gamma;
  return kl * g0 * g0 / (0.25 * kl * kl + delta * delta);
}

AlphaScaling alpha_scaling(double alpha, double alpha_ref) {
  // The reference may be 0 (geometric resonator); the target must be a
  // proper kinetic-inductance fraction.
  if (!(alpha >= 0.0 && alpha < 1.0) || !(alpha_ref >= 0.0 && alpha_ref < 1.0))
    throw DomainError("alpha must lie in [0, 1)");
  const double r = (1.0 - alpha) / (1.0 - alpha_ref);
  AlphaScaling s;
  s.g0 = std::pow(r, 0.25);
  s.N_min = std::pow(r, -0.25);
  s.N_tot = std::pow(r, 0.5);
  s.SNR = std::pow(r, 0.75);
  s.N_min_sqrt_T1 = std::pow(r, -0.5);
  s.SNR_per_sqrt_T1 = r;
  s.length = std::pow(r, 0.5);
  return s;
}

}  // namespace kipa
