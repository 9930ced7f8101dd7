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

#include "kipa/network.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kipa/constants.hpp"
#include "kipa/errors.hpp"

namespace kipa {

double elliptic_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw DomainError("elliptic_k: modulus must lie in [0, 1)");
  double a = 1.0, g = std::sqrt(1.0 - k * k);
  for (int it = 0; it < 64; ++it) {
    if (std::abs(a - g) <= 1e-15 * a) return kPi / (2.0 * a);
    const double an = 0.5 * (a + g);
    g = std::sqrt(a * g);
    a = an;
  }
  throw ConvergenceError("elliptic_k: AGM did not converge", 64);
}

double CpwLine::phase_velocity() const { return 1.0 / std::sqrt(L_l() * C_l); }

CpwLine cpw_params(double w, double gap, double eps_r, double Lk0_sq, double length) {
  if (!(w > 0.0) || !(gap > 0.0)) throw DomainError("cpw_params: width and gap must be positive");
  if (!(eps_r >= 1.0)) throw DomainError("cpw_params: eps_r must be >= 1");
  if (!(Lk0_sq >= 0.0)) throw DomainError("cpw_params: sheet inductance must be >= 0");
  if (!(length >= 0.0)) throw DomainError("cpw_params: length must be >= 0");
  CpwLine line;
  line.w = w;
  line.gap = gap;
  line.length = length;
  line.eps_r = eps_r;
  line.Lk0_sq = Lk0_sq;

  const double k = w / (w + 2.0 * gap);
  const double kp = std::sqrt(1.0 - k * k);
  const double ratio = elliptic_k(k) / elliptic_k(kp);
  const double eps_eff = 0.5 * (1.0 + eps_r);
  line.C_l = 4.0 * kEps0 * eps_eff * ratio;
  line.Lg_l = 0.25 * kMu0 / ratio;
  line.Lk_l = Lk0_sq / w;
  line.Z = std::sqrt(line.L_l() / line.C_l);
  line.alpha = line.Lk_l / line.L_l();
  return line;
}

double kinetic_inductance(double Lk0, double I, double I_star) {
  if (!(I_star > 0.0)) throw DomainError("I_star must be positive");
  if (std::abs(I) >= I_star) throw DomainError("current at or above I_star; quadratic model invalid");
  return Lk0 * (1.0 + (I * I) / (I_star * I_star));
}

double dc_tuning(double omega0_at_zero, double I_dc, double I_star) {
  if (!(I_star > 0.0)) throw DomainError("I_star must be positive");
  if (std::abs(I_dc) >= I_star) throw DomainError("|I_dc| must stay below I_star");
  return -omega0_at_zero * I_dc * I_dc / (2.0 * I_star * I_star);
}

double resonator_frequency(const CpwLine& line, double l) {
  if (!(l > 0.0)) throw DomainError("resonator length must be positive");
  return kPi / (2.0 * l * std::sqrt(line.L_l() * line.C_l));
}

double quarter_wave_length(const CpwLine& line, double omega) {
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  return kPi / (2.0 * line.beta(omega));
}

double loaded_q(double Qi, double Qc) {
  if (!(Qi > 0.0) || !(Qc > 0.0)) throw DomainError("quality factors must be positive");
  return 1.0 / (1.0 / Qi + 1.0 / Qc);
}

double coupling_q_from_loaded(double QL, double Qi) {
  if (!(QL > 0.0) || !(Qi > QL)) throw DomainError("need 0 < QL < Qi");
  return 1.0 / (1.0 / QL - 1.0 / Qi);
}

ResonatorState ResonatorState::from_q(double omega0, double Qi, double Qc) {
  ResonatorState r;
  r.omega0 = omega0;
  r.Qi = Qi;
  r.Qc = Qc;
  r.QL = loaded_q(Qi, Qc);
  return r;
}

void ResonatorState::validate() const {
  if (!(omega0 > 0.0)) throw DomainError("omega0 must be positive");
  if (!(Qi > 0.0) || !(Qc > 0.0) || !(QL > 0.0)) throw DomainError("quality factors must be positive");
  const double inv = 1.0 / Qi + 1.0 / Qc;
  if (std::abs(inv * QL - 1.0) > 1e-12) throw DomainError("1/QL != 1/Qi + 1/Qc");
  if (I_star > 0.0 && std::abs(I_dc) >= I_star) throw DomainError("|I_dc| must stay below I_star");
}

double ResonatorState::kappa() const { return omega0 / Qc; }
double ResonatorState::gamma() const { return omega0 / Qi; }

Abcd operator*(const Abcd& x, const Abcd& y) {
  return Abcd{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

void SifNetwork::validate() const {
  if (segments.empty()) throw DomainError("network has no segments");
  if (!(Z0 > 0.0)) throw DomainError("port impedance must be positive");
  for (const CpwLine& s : segments)
    if (!(s.Z > 0.0) || !(s.length >= 0.0)) throw DomainError("segment with non-positive impedance or length");
}

Abcd segment_abcd(const CpwLine& line, double omega) {
  const double bl = line.beta(omega) * line.length;
  const double c = std::cos(bl), s = std::sin(bl);
  const Complex j(0.0, 1.0);
  return Abcd{c, j * line.Z * s, j * s / line.Z, c};
}

Abcd abcd_cascade(const SifNetwork& network, double omega) {
  network.validate();
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  Abcd m;
  for (const CpwLine& seg : network.segments) m = m * segment_abcd(seg, omega);
  return m;
}

SParams s_params(const Abcd& m, double Z0) {
  if (!(Z0 > 0.0)) throw DomainError("Z0 must be positive");
  const Complex den = m.a + m.b / Z0 + m.c * Z0 + m.d;
  return SParams{(m.a + m.b / Z0 - m.c * Z0 - m.d) / den, 2.0 / den};
}

Complex s21(const SifNetwork& network, double omega, double Z0) {
  return s_params(abcd_cascade(network, omega), Z0).s21;
}

SifNetwork reference_sif(double eps_r, double Lk0_sq, double omega_design, double Z0) {
  const CpwLine lo = cpw_params(138e-6, 6e-6, eps_r, Lk0_sq);
  const CpwLine hi = cpw_params(10e-6, 70e-6, eps_r, Lk0_sq);
  const CpwLine fin = cpw_params(5e-6, 15e-6, eps_r, Lk0_sq);
  SifNetwork net;
  net.Z0 = Z0;
  for (int k = 0; k < 4; ++k) {
    net.segments.push_back(lo);
    net.segments.push_back(k == 3 ? fin : hi);
  }
  for (CpwLine& s : net.segments) s.length = quarter_wave_length(s, omega_design);
  return net;
}

SifNetwork read_network(std::istream& in, const std::string& source) {
  double eps_r = -1.0, lk0 = -1.0, z0 = -1.0;
  struct Raw {
    double w, gap, length;
  };
  std::vector<Raw> raw;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError(source + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (auto eq = line.find('='); eq != std::string::npos) {
      std::string key = line.substr(0, eq);
      key.erase(key.find_last_not_of(" \t") + 1);
      key.erase(0, key.find_first_not_of(" \t"));
      double value = 0.0;
      std::istringstream vs(line.substr(eq + 1));
      if (!(vs >> value)) fail("bad numeric value for '" + key + "'");
      if (key == "eps_r") eps_r = value;
      else if (key == "Lk0_sq") lk0 = value;
      else if (key == "Z0") z0 = value;
      else fail("unknown header key '" + key + "'");
      continue;
    }
    std::istringstream ls(line);
    Raw r{};
    std::string extra;
    if (!(ls >> r.w >> r.gap >> r.length) || (ls >> extra)) fail("expected `w_m gap_m length_m`");
    raw.push_back(r);
  }
  if (eps_r < 0.0 || lk0 < 0.0 || z0 < 0.0) throw ParseError(source + ": missing eps_r=, Lk0_sq= or Z0= header");
  if (raw.empty()) throw ParseError(source + ": no segments");
  SifNetwork net;
  net.Z0 = z0;
  for (const Raw& r : raw) net.segments.push_back(cpw_params(r.w, r.gap, eps_r, lk0, r.length));
  return net;
}

SifNetwork read_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open network file " + path);
  return read_network(in, path);
}

void write_network(std::ostream& out, const SifNetwork& network) {
  network.validate();
  const CpwLine& first = network.segments.front();
  out.precision(17);
  out << "eps_r=" << first.eps_r << "\nLk0_sq=" << first.Lk0_sq << "\nZ0=" << network.Z0 << "\n";
  for (const CpwLine& s : network.segments) out << s.w << ' ' << s.gap << ' ' << s.length << "\n";
}

}  // namespace kipa
