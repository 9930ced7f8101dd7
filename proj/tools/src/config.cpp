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

#include "kipa_cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "kipa/errors.hpp"
#include "kipa/io.hpp"
#include "kipa/reference_device.hpp"
#include "kipa/spin.hpp"

namespace kipa::cli {
namespace {

namespace ref = kipa::reference;
namespace fs = std::filesystem;

std::string num(double v) { return format_double(v); }

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_number(const std::string& key, const std::string& text) {
  try {
    return parse_double(text, key);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

Config::Config() {
  using K = Kind;
  auto add = [&](const std::string& key, K kind, std::string value, std::string help,
                 std::vector<std::string> choices = {}) {
    entries_[key] = Entry{kind, std::move(value), std::move(choices), std::move(help)};
    order_.push_back(key);
  };
  const SpinSystem bi = bismuth209();

  add("spin.A_Hz", K::Number, num(hz(bi.A)), "hyperfine constant");
  add("spin.gamma_e_Hz_per_T", K::Number, num(hz(bi.gamma_e)), "electron gyromagnetic ratio");
  add("spin.gamma_n_Hz_per_T", K::Number, num(hz(bi.gamma_n)), "nuclear gyromagnetic ratio");

  add("resonator.w_m", K::Number, num(ref::kResonatorW), "centre track width");
  add("resonator.gap_m", K::Number, num(ref::kResonatorGap), "gap to ground");
  add("resonator.length_m", K::Number, num(ref::kResonatorLength), "quarter-wave length");
  add("resonator.eps_r", K::Number, num(ref::kEpsR), "substrate permittivity");
  add("resonator.Lk0_H_per_sq", K::Number, num(ref::kLk0Sq), "sheet kinetic inductance");
  add("resonator.f0_Hz", K::Number, num(ref::kF0ZeroBiasHz), "measured zero-bias frequency");
  add("resonator.I_star_A", K::Number, num(ref::kIStar), "nonlinearity scale current");
  add("resonator.I_dc_A", K::Number, num(ref::kIdcMax), "DC bias current");
  add("resonator.Qi", K::Number, num(ref::kQi), "internal quality factor");
  add("resonator.QL", K::Number, num(ref::kQL), "loaded quality factor");

  add("spectrum.table", K::Choice, "transitions", "sweep table or target crossings", {"transitions", "crossings"});
  add("spectrum.operator", K::Choice, "both", "drive operator", {"Sx", "Sz", "both"});
  add("spectrum.B_min_T", K::Number, "0", "");
  add("spectrum.B_max_T", K::Number, "0.37", "");
  add("spectrum.B_step_T", K::Number, "0.0005", "");
  add("spectrum.f_min_Hz", K::Number, "0", "transitions table keeps lines in [f_min, f_max]");
  add("spectrum.f_max_Hz", K::Number, "2e10", "");
  add("spectrum.threshold", K::Number, num(kDefaultAllowedThreshold), "minimum matrix element");
  add("spectrum.target_Hz", K::Number, "7.2e9", "crossings table only");

  add("sif.design_Hz", K::Number, num(ref::kSifDesignHz), "quarter-wave design frequency");
  add("sif.port_Z0_ohm", K::Number, num(ref::kPortZ0), "");
  add("sif.network_file", K::Path, "", "segment CSV; empty = reference filter");
  add("sif.f_min_Hz", K::Number, "1e7", "");
  add("sif.f_max_Hz", K::Number, "2e10", "");
  add("sif.f_step_Hz", K::Number, "1e7", "");

  add("kipa.sweep", K::Choice, "frequency", "", {"frequency", "phase"});
  add("kipa.gain_dB", K::Number, "8", "degenerate gain; sets the pump strength");
  add("kipa.detuning_Hz", K::Number, "0", "f0 - f_p/2");
  add("kipa.phase_rad", K::Number, "0", "pump phase, frequency sweep only");
  add("kipa.phase_origin", K::Choice, "max-gain", "max-gain: phase 0 maximizes gain", {"max-gain", "hamiltonian"});
  add("kipa.span_Hz", K::Number, "1e6", "full span around f_p/2");
  add("kipa.points", K::Number, "401", "");

  add("noise.f_Hz", K::Number, num(ref::kFEsrHz), "");
  add("noise.T_device_K", K::Number, num(ref::kDeviceTemperature), "");
  add("noise.T_hemt_K", K::Number, num(ref::kHemtNoiseTemperature), "");
  add("noise.insertion_loss_dB", K::Number, num(ref::kInsertionLossDb), "device to HEMT");
  add("noise.hemt_gain_dB", K::Number, "40", "");
  add("noise.signal_I", K::Number, "1", "input signal quadrature amplitude");
  add("noise.kipa_model", K::Choice, "lossy", "added noise from internal loss or none", {"lossy", "ideal"});
  add("noise.gain_min_dB", K::Number, "0", "");
  add("noise.gain_max_dB", K::Number, "30", "");
  add("noise.gain_step_dB", K::Number, "0.5", "");
  add("noise.measurement", K::Path, "", "CSV to fit SNR = sqrt(G^2 A / (G^2 B + 1)) against");
  add("noise.measurement_gain_column", K::Text, "G_k", "");
  add("noise.measurement_snr_column", K::Text, "SNR", "");

  add("budget.beta_a", K::Number, num(ref::kBetaA), "");
  add("budget.inv_beta_b", K::Number, "54.3", "1/beta_b when beta_b_mode = given");
  add("budget.beta_b_mode", K::Choice, "given", "", {"given", "computed"});
  add("budget.linewidth_Hz", K::Number, num(ref::kLinewidthHz), "computed beta_b");
  add("budget.line_offset_T", K::Number, num(ref::kLineOffsetT), "computed beta_b");
  add("budget.B0_T", K::Number, num(ref::kBEsr), "computed beta_b: field for the offset gradient");
  add("budget.f_Hz", K::Number, num(ref::kFEsrHz), "spin and cavity frequency");
  add("budget.pulse_s", K::Number, num(ref::kPulseDuration), "computed beta_b");
  add("budget.beta_c", K::Number, num(ref::kBetaC), "ignored when a histogram is given");
  add("budget.coupling_histogram", K::Path, "", "g0_hz,weight CSV");
  add("budget.g0_Hz", K::Number, num(ref::kG0Hz), "calibrated coupling");
  add("budget.beta_d", K::Number, num(ref::kBetaD), "");
  add("budget.C_d_per_m3", K::Number, num(ref::kDonorConcentration), "");
  add("budget.V_d_m3", K::Number, num(ref::kDonorVolume), "ignored when a field map is given");
  add("budget.field_map", K::Path, "", "field-map CSV");
  add("budget.snr", K::Text, num(ref::kSnrPumpOff) + ", " + num(ref::kSnrGain8dB), "single-shot SNRs");
  add("budget.polarization", K::Number, num(ref::kPolarization), "");
  add("budget.echo_s", K::Number, num(ref::kEchoDuration), "echo duration");

  add("optimize.alpha_min", K::Number, "0", "");
  add("optimize.alpha_max", K::Number, "0.95", "");
  add("optimize.alpha_step", K::Number, "0.05", "");
  add("optimize.alpha_ref", K::Number, "0", "normalization point for the scaling columns");

  add("fit.input", K::Path, "", "data CSV");
  add("fit.x_column", K::Text, "", "empty = kind default");
  add("fit.y_column", K::Text, "", "empty = kind default");

  add("echo.signal", K::Path, "", "trace CSV t_s,I,Q");
  add("echo.blank", K::Path, "", "trace CSV t_s,I,Q, no spins");
  add("echo.t1_s", K::Number, "0", "echo window start");
  add("echo.t2_s", K::Number, "0", "echo window end");
  add("echo.lowpass_Hz", K::Number, "1e6", "<= 0 disables");
  add("echo.offset_fraction", K::Number, "0.1", "");
}

const Config::Entry& Config::entry(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

Config::Entry& Config::entry(const std::string& key) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

void Config::set(const std::string& key, const std::string& value) { entry(key).value = trim(value); }

void Config::load_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  const fs::path dir = fs::path(path).parent_path();
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(path + ": key '" + section + "' outside any section");
    for (const auto& [name, node] : body) {
      const std::string key = section + "." + name;
      Entry& e = entry(key);
      std::string v = trim(node.get_value<std::string>());
      if (e.kind == Kind::Path && !v.empty() && fs::path(v).is_relative()) v = (dir / v).lexically_normal().string();
      e.value = v;
    }
  }
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void Config::validate() const {
  for (const std::string& key : order_) {
    const Entry& e = entries_.at(key);
    switch (e.kind) {
      case Kind::Number:
        to_number(key, e.value);
        break;
      case Kind::Choice: {
        bool ok = false;
        for (const auto& c : e.choices) ok = ok || c == e.value;
        if (!ok) {
          std::string list;
          for (const auto& c : e.choices) list += (list.empty() ? "" : ", ") + c;
          throw ConfigError(key + ": '" + e.value + "' is not one of " + list);
        }
        break;
      }
      case Kind::Path:
        if (!e.value.empty() && !fs::is_regular_file(e.value))
          throw ConfigError(key + ": no such file '" + e.value + "'");
        break;
      case Kind::Text:
        break;
    }
  }
  numbers("budget.snr");
}

double Config::number(const std::string& key) const {
  const Entry& e = entry(key);
  if (e.kind != Kind::Number) throw std::logic_error(key + " is not numeric");
  return to_number(key, e.value);
}

int Config::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key + " must be an integer");
  return static_cast<int>(v);
}

const std::string& Config::text(const std::string& key) const { return entry(key).value; }

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(text(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_number(key, item));
  if (out.empty()) throw ConfigError(key + " needs at least one number");
  return out;
}

std::string Config::dump() const {
  std::ostringstream out;
  std::string section;
  for (const std::string& key : order_) {
    const auto dot = key.find('.');
    const std::string s = key.substr(0, dot);
    if (s != section) {
      out << (section.empty() ? "" : "\n") << "[" << s << "]\n";
      section = s;
    }
    out << key.substr(dot + 1) << " = " << entries_.at(key).value << "\n";
  }
  return out.str();
}

}  // namespace kipa::cli
