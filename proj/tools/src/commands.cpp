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

#include "kipa_cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "kipa/amplifier.hpp"
#include "kipa/constants.hpp"
#include "kipa/echo.hpp"
#include "kipa/errors.hpp"
#include "kipa/fit.hpp"
#include "kipa/io.hpp"
#include "kipa/network.hpp"
#include "kipa/noise.hpp"
#include "kipa/sensitivity.hpp"
#include "kipa/spin.hpp"

namespace kipa::cli {
namespace {

std::string num(double v) { return format_double(v); }

double db20(double amplitude) { return 20.0 * std::log10(std::max(amplitude, 1e-300)); }

// Inclusive grid lo, lo + step, ... up to hi; indices keep it free of drift.
std::vector<double> grid(const std::string& what, double lo, double hi, double step) {
  if (!(step > 0.0)) throw ConfigError(what + ": step must be positive");
  if (!(hi >= lo)) throw ConfigError(what + ": empty range");
  const double n = std::floor((hi - lo) / step * (1.0 + 1e-12) + 1e-9);
  if (n > 1e7) throw ConfigError(what + ": more than 1e7 points");
  std::vector<double> v;
  for (int k = 0; k <= static_cast<int>(n); ++k) v.push_back(lo + k * step);
  return v;
}

// Named columns from a CSV with a header row; other columns are ignored.
std::vector<std::vector<double>> read_columns(const std::string& path, const std::vector<std::string>& names) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) {
      const auto a = f.find_first_not_of(" \t\r"), b = f.find_last_not_of(" \t\r");
      out.push_back(a == std::string::npos ? "" : f.substr(a, b - a + 1));
    }
    return out;
  };
  std::string line;
  std::vector<std::size_t> idx;
  std::vector<std::vector<double>> cols(names.size());
  std::size_t width = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto fields = split(line);
    if (idx.empty()) {
      for (const auto& n : names) {
        std::size_t k = 0;
        while (k < fields.size() && fields[k] != n) ++k;
        if (k == fields.size()) throw ParseError(path + ": no column '" + n + "'");
        idx.push_back(k);
      }
      width = fields.size();
      continue;
    }
    if (fields.size() != width) throw ParseError(path + ":" + std::to_string(lineno) + ": column count changed");
    for (std::size_t c = 0; c < names.size(); ++c)
      cols[c].push_back(parse_double(fields[idx[c]], path + ":" + std::to_string(lineno)));
  }
  if (idx.empty()) throw ParseError(path + ": missing header row");
  if (cols[0].empty()) throw ParseError(path + ": no data rows");
  return cols;
}

SpinSystem spin_system(const Config& cfg) {
  SpinSystem s = bismuth209();
  s.A = rad(cfg.number("spin.A_Hz"));
  s.gamma_e = rad(cfg.number("spin.gamma_e_Hz_per_T"));
  s.gamma_n = rad(cfg.number("spin.gamma_n_Hz_per_T"));
  return s;
}

struct Rates {
  double omega0, kappa, gamma, Qc;
};

Rates rates(const Config& cfg, double f_hz) {
  const double Qi = cfg.number("resonator.Qi"), QL = cfg.number("resonator.QL");
  const double Qc = coupling_q_from_loaded(QL, Qi);
  const double w = rad(f_hz);
  return Rates{w, w / Qc, w / Qi, Qc};
}

std::vector<SpinOperator> operators(const std::string& which) {
  if (which == "Sx") return {SpinOperator::Sx};
  if (which == "Sz") return {SpinOperator::Sz};
  return {SpinOperator::Sx, SpinOperator::Sz};
}

double half(int doubled) { return 0.5 * doubled; }

void spectrum(const Config& cfg, std::ostream& out) {
  const SpinSystem sys = spin_system(cfg);
  const double lo = cfg.number("spectrum.B_min_T"), hi = cfg.number("spectrum.B_max_T");
  const double step = cfg.number("spectrum.B_step_T"), thr = cfg.number("spectrum.threshold");
  if (lo < 0.0) throw ConfigError("spectrum.B_min_T must be >= 0");
  if (!(hi > lo)) throw ConfigError("spectrum: empty field range");
  const auto ops = operators(cfg.text("spectrum.operator"));

  if (cfg.text("spectrum.table") == "crossings") {
    if (!(step > 0.0)) throw ConfigError("spectrum.B_step_T must be positive");
    const double target = rad(cfg.number("spectrum.target_Hz"));
    write_csv_header(out, {"op_is_Sz", "F_lower", "mF_lower", "F_upper", "mF_upper", "B0_T", "element"});
    for (SpinOperator op : ops)
      for (const Crossing& c : find_crossings(sys, op, target, lo, hi, step, thr))
        write_csv_row(out, {op == SpinOperator::Sz ? 1.0 : 0.0, half(c.pair.lower.twoF), half(c.pair.lower.twoMF),
                            half(c.pair.upper.twoF), half(c.pair.upper.twoMF), c.field, c.element});
    return;
  }

  const auto fields = grid("spectrum", lo, hi, step);
  const double fmin = cfg.number("spectrum.f_min_Hz"), fmax = cfg.number("spectrum.f_max_Hz");
  write_csv_header(out, {"B0_T", "F_lower", "mF_lower", "F_upper", "mF_upper", "f_Hz", "Sx_element", "Sz_element",
                         "dfdB_Hz_per_T"});
  for (double B : fields) {
    const EigenSolution sol = solve(sys, B);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<Transition> rows;
    for (SpinOperator op : ops)
      for (const Transition& t : transitions(sys, sol, op, thr))
        if (seen.insert({t.lower_index, t.upper_index}).second) rows.push_back(t);
    std::sort(rows.begin(), rows.end(), [](const Transition& a, const Transition& b) {
      return std::tie(a.lower_index, a.upper_index) < std::tie(b.lower_index, b.upper_index);
    });
    for (const Transition& t : rows) {
      const double f = hz(t.frequency);
      if (f < fmin || f > fmax) continue;
      write_csv_row(out, {B, half(t.lower.twoF), half(t.lower.twoMF), half(t.upper.twoF), half(t.upper.twoMF), f, t.mx,
                          t.mz, hz(t.dfdB)});
    }
  }
}

void sif(const Config& cfg, std::ostream& out) {
  const auto freqs = grid("sif", cfg.number("sif.f_min_Hz"), cfg.number("sif.f_max_Hz"), cfg.number("sif.f_step_Hz"));
  if (!(freqs.front() > 0.0)) throw ConfigError("sif.f_min_Hz must be positive");
  const SifNetwork net = cfg.has_path("sif.network_file")
                             ? read_network_file(cfg.text("sif.network_file"))
                             : reference_sif(cfg.number("resonator.eps_r"), cfg.number("resonator.Lk0_H_per_sq"),
                                             rad(cfg.number("sif.design_Hz")), cfg.number("sif.port_Z0_ohm"));
  write_csv_header(out, {"f_Hz", "S21_mag", "S21_dB", "S21_phase_rad", "S11_mag"});
  for (double f : freqs) {
    const SParams s = s_params(abcd_cascade(net, rad(f)), net.Z0);
    write_csv_row(out, {f, std::abs(s.s21), db20(std::abs(s.s21)), std::arg(s.s21), std::abs(s.s11)});
  }
}

void kipa_gain(const Config& cfg, std::ostream& out) {
  const Rates r = rates(cfg, cfg.number("resonator.f0_Hz"));
  const int points = cfg.integer("kipa.points");
  if (points < 2) throw ConfigError("kipa.points must be >= 2");
  KipaParams p;
  p.omega0 = r.omega0;
  p.kappa = r.kappa;
  p.gamma = r.gamma;
  p.Delta = rad(cfg.number("kipa.detuning_Hz"));
  p.xi_mag = xi_for_gain(r.kappa, r.gamma, std::pow(10.0, cfg.number("kipa.gain_dB") / 20.0));
  const double origin = cfg.text("kipa.phase_origin") == "max-gain" ? kMaxGainPhase : 0.0;

  if (cfg.text("kipa.sweep") == "phase") {
    write_csv_header(out, {"phase_rad", "I_gain_dB", "Q_gain_dB", "I_to_Q", "Q_to_I"});
    for (int k = 0; k < points; ++k) {
      const double phase = kTwoPi * k / points;
      p.phi_p = phase + origin;
      const Matrix2 m = quadrature_transform(p);
      write_csv_row(out, {phase, db20(std::abs(m[0][0])), db20(std::abs(m[1][1])), m[1][0], m[0][1]});
    }
    return;
  }
  const double span = cfg.number("kipa.span_Hz");
  if (!(span > 0.0)) throw ConfigError("kipa.span_Hz must be positive");
  p.phi_p = cfg.number("kipa.phase_rad") + origin;
  p.check_stable();
  const double centre = 0.5 * p.omega_p();
  out << "# degenerate amplitude gain " << num(degenerate_gain(p));
  // Below |Gamma|^2 = 2 at the centre the response never halves.
  try {
    const double fwhm = gain_fwhm(p);
    out << ", FWHM_Hz " << num(hz(fwhm));
  } catch (const NumericalError&) {
    out << ", no half-maximum width";
  }
  out << "\n";
  write_csv_header(out, {"offset_Hz", "signal_gain_dB", "idler_gain_dB"});
  for (int k = 0; k < points; ++k) {
    const double nu = span * (static_cast<double>(k) / (points - 1) - 0.5);
    write_csv_row(out, {nu, db20(std::abs(reflection_gain(p, centre + rad(nu)))),
                        db20(std::abs(idler_gain(p, centre + rad(nu))))});
  }
}

void snr_chain(const Config& cfg, std::ostream& out) {
  const auto gains_db =
      grid("noise", cfg.number("noise.gain_min_dB"), cfg.number("noise.gain_max_dB"), cfg.number("noise.gain_step_dB"));
  if (gains_db.front() < 0.0) throw ConfigError("noise.gain_min_dB must be >= 0");
  const double w = rad(cfg.number("noise.f_Hz"));
  const Rates r = rates(cfg, cfg.number("noise.f_Hz"));
  const double n_dev = n_thermal(cfg.number("noise.T_device_K"), w);
  const bool lossy = cfg.text("noise.kipa_model") == "lossy";

  FitResult fit;
  const bool have_fit = cfg.has_path("noise.measurement");
  if (have_fit) {
    const auto cols = read_columns(cfg.text("noise.measurement"),
                                   {cfg.text("noise.measurement_gain_column"), cfg.text("noise.measurement_snr_column")});
    fit = fit_snr_vs_gain(cols[0], cols[1]);
    if (!fit.converged) throw NumericalError("SNR-vs-gain fit did not converge: " + fit.message);
    out << "# fit A " << num(fit.value("A")) << ", B " << num(fit.value("B")) << ", 1/B " << num(1.0 / fit.value("B"))
        << "\n";
  }

  NoiseChain c;
  c.eta = std::sqrt(db_to_power(-cfg.number("noise.insertion_loss_dB")));
  c.G_h = db_to_amplitude(cfg.number("noise.hemt_gain_dB"));
  c.n_h = n_thermal(cfg.number("noise.T_hemt_K"), w);
  c.noise_in = kVacuumQuadrature + n_dev;
  c.signal_I = cfg.number("noise.signal_I");

  std::vector<std::string> header{"G_k_dB", "G_k", "n_k", "SNR", "G_SNR"};
  if (have_fit) header.push_back("SNR_fit");
  write_csv_header(out, header);
  for (double db : gains_db) {
    c.G_k = db_to_amplitude(db);
    // Pump off, the amplifier is a plain mirror and adds nothing.
    c.n_k = lossy && c.G_k > 1.0 ? added_noise_for_gain(c.G_k, r.Qc / cfg.number("resonator.Qi"), n_dev) : 0.0;
    std::vector<double> row{db, c.G_k, c.n_k, chain_snr(c), snr_gain(c)};
    if (have_fit) row.push_back(snr_vs_gain(c.G_k, fit.value("A"), fit.value("B")));
    write_csv_row(out, row);
  }
}

void budget(const Config& cfg, std::ostream& out) {
  const std::vector<double> snrs = cfg.numbers("budget.snr");
  BudgetInputs in;
  in.beta_a = cfg.number("budget.beta_a");
  in.beta_d = cfg.number("budget.beta_d");
  in.C_d = cfg.number("budget.C_d_per_m3");
  const double f = cfg.number("budget.f_Hz");
  const Rates r = rates(cfg, f);
  const double g0 = rad(cfg.number("budget.g0_Hz"));

  if (cfg.text("budget.beta_b_mode") == "computed") {
    const TransitionSelector probe{StateLabel::of(4, -4), StateLabel::of(5, -5)};
    const double grad = std::abs(transition_gradient(spin_system(cfg), probe, cfg.number("budget.B0_T")));
    in.beta_b = pulse_overlap(rad(cfg.number("budget.linewidth_Hz")), cfg.number("budget.line_offset_T") * grad,
                              cfg.number("resonator.QL"), r.omega0, cfg.number("budget.pulse_s"));
  } else {
    const double inv = cfg.number("budget.inv_beta_b");
    if (!(inv >= 1.0)) throw ConfigError("budget.inv_beta_b must be >= 1");
    in.beta_b = 1.0 / inv;
  }
  in.beta_c = cfg.has_path("budget.coupling_histogram")
                  ? spin_fraction(read_coupling_histogram_file(cfg.text("budget.coupling_histogram")), g0)
                  : cfg.number("budget.beta_c");
  in.V_d = cfg.has_path("budget.field_map") ? effective_volume(read_field_map_file(cfg.text("budget.field_map"))).V_d
                                            : cfg.number("budget.V_d_m3");
  const SpinCounts n = total_spins(in);

  out << "quantity,value,unit\n";
  auto row = [&](const std::string& q, double v, const char* unit) { out << q << "," << num(v) << "," << unit << "\n"; };
  row("beta_a", in.beta_a, "1");
  row("beta_b", in.beta_b, "1");
  row("beta_c", in.beta_c, "1");
  row("beta_d", in.beta_d, "1");
  row("C_d", in.C_d, "m^-3");
  row("V_d", in.V_d, "m^3");
  row("N_d", n.N_d, "spins");
  row("N_tot", n.N_tot, "spins");
  for (std::size_t k = 0; k < snrs.size(); ++k) {
    const std::string tag = "[" + std::to_string(k + 1) + "]";
    row("SNR" + tag, snrs[k], "1");
    const double nmin = n_min_measured(n.N_tot, snrs[k]);
    row("N_min" + tag, nmin, "spins/sqrt(shot)");
    if (nmin > 0.0)
      row("n_n" + tag,
          noise_from_n_min(r.omega0 / cfg.number("resonator.QL"), r.kappa, 1.0 / cfg.number("budget.echo_s"), g0,
                           cfg.number("budget.polarization"), nmin),
          "photons");
  }
}

void optimize_alpha(const Config& cfg, std::ostream& out) {
  const auto alphas = grid("optimize", cfg.number("optimize.alpha_min"), cfg.number("optimize.alpha_max"),
                           cfg.number("optimize.alpha_step"));
  const double ref_alpha = cfg.number("optimize.alpha_ref");
  if (alphas.front() < 0.0 || alphas.back() >= 1.0) throw ConfigError("optimize: alpha must lie in [0, 1)");
  if (!(ref_alpha >= 0.0 && ref_alpha < 1.0)) throw ConfigError("optimize.alpha_ref must lie in [0, 1)");
  // Pump power is relative to the analytic optimum; there is no three-wave
  // mixing without kinetic inductance, so alpha = 0 needs infinite pump.
  const double p_opt = pump_power(optimal_pump_alpha(), 1.0, 1.0);
  double best = -1.0, best_p = 0.0;
  std::ostringstream body;
  write_csv_header(body, {"alpha", "P_p_rel", "P_p_dB", "g0_rel", "N_tot_rel", "N_min_rel", "SNR_rel",
                          "N_min_sqrt_T1_rel", "SNR_per_sqrt_T1_rel", "length_rel"});
  for (double a : alphas) {
    const double P = a > 0.0 ? pump_power(a, 1.0, 1.0) / p_opt : HUGE_VAL;
    if (a > 0.0 && (best < 0.0 || P < best_p)) best = a, best_p = P;
    const AlphaScaling s = alpha_scaling(a, ref_alpha);
    write_csv_row(body, {a, P, 10.0 * std::log10(P), s.g0, s.N_tot, s.N_min, s.SNR, s.N_min_sqrt_T1, s.SNR_per_sqrt_T1,
                         s.length});
  }
  if (best > 0.0) out << "# grid minimum of P_p at alpha " << num(best) << "\n";
  out << "# analytic minimum of P_p at alpha " << num(optimal_pump_alpha()) << "\n" << body.str();
}

void fit(const Config& cfg, const std::string& kind, std::ostream& out) {
  static const std::map<std::string, std::pair<std::string, std::string>> columns = {
      {"lorentzian", {"x", "y"}},    {"decay", {"t_s", "y"}},          {"recovery", {"t_s", "y"}},
      {"snr-gain", {"G_k", "SNR"}}, {"gsnr-te", {"T_e_s", "G_SNR"}}};
  const auto it = columns.find(kind);
  if (it == columns.end()) throw ConfigError("unknown fit kind '" + kind + "'");
  if (!cfg.has_path("fit.input")) throw ConfigError("fit needs fit.input");
  const std::string xc = cfg.text("fit.x_column").empty() ? it->second.first : cfg.text("fit.x_column");
  const std::string yc = cfg.text("fit.y_column").empty() ? it->second.second : cfg.text("fit.y_column");
  const auto cols = read_columns(cfg.text("fit.input"), {xc, yc});

  FitResult r;
  if (kind == "lorentzian") r = fit_lorentzian(cols[0], cols[1]);
  if (kind == "decay") r = fit_exponential(cols[0], cols[1], ExpKind::Decay);
  if (kind == "recovery") r = fit_exponential(cols[0], cols[1], ExpKind::Recovery);
  if (kind == "snr-gain") r = fit_snr_vs_gain(cols[0], cols[1]);
  if (kind == "gsnr-te") r = fit_gsnr_vs_te(cols[0], cols[1]);
  if (!r.converged) throw NumericalError(kind + " fit did not converge: " + r.message);

  out << "# iterations " << r.iterations << ", residual_rms " << num(r.residual_rms) << "\n";
  out << "parameter,value,std_error\n";
  for (std::size_t k = 0; k < r.names.size(); ++k)
    out << r.names[k] << "," << num(r.params[k]) << "," << num(r.std_errors[k]) << "\n";
  if (kind == "snr-gain") {
    const double B = r.value("B");
    std::size_t k = 0;
    while (r.names[k] != "B") ++k;
    out << "inv_B," << num(1.0 / B) << "," << num(r.std_errors[k] / (B * B)) << "\n";
  }
}

void echo(const Config& cfg, std::ostream& out) {
  if (!cfg.has_path("echo.signal") || !cfg.has_path("echo.blank")) throw ConfigError("echo-snr needs echo.signal and echo.blank");
  const double t1 = cfg.number("echo.t1_s"), t2 = cfg.number("echo.t2_s");
  if (!(t2 > t1)) throw ConfigError("echo window needs t2_s > t1_s");
  EchoOptions opt;
  opt.lowpass_hz = cfg.number("echo.lowpass_Hz");
  opt.offset_fraction = cfg.number("echo.offset_fraction");
  const Trace sig = read_trace_file(cfg.text("echo.signal")), blank = read_trace_file(cfg.text("echo.blank"));
  const EchoResult e = echo_snr(sig, blank, t1, t2, opt);
  out << "quantity,value,unit\n";
  out << "SNR," << num(e.snr) << ",1\n";
  out << "rotation," << num(e.rotation) << ",rad\n";
  out << "signal_mean," << num(e.signal_mean) << ",input units\n";
  out << "blank_rms," << num(e.blank_rms) << ",input units\n";
  out << "window_samples," << e.window_samples << ",1\n";
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"spectrum", "sif",    "kipa-gain", "snr-chain",
                                                 "budget",   "optimize-alpha", "fit",  "echo-snr"};
  return names;
}

const std::vector<std::string>& fit_kinds() {
  static const std::vector<std::string> kinds = {"lorentzian", "decay", "recovery", "snr-gain", "gsnr-te"};
  return kinds;
}

void run_command(const std::string& command, const std::string& arg, const Config& cfg, std::ostream& out) {
  if (command != "fit" && !arg.empty()) throw ConfigError(command + " takes no argument");
  if (command == "spectrum") return spectrum(cfg, out);
  if (command == "sif") return sif(cfg, out);
  if (command == "kipa-gain") return kipa_gain(cfg, out);
  if (command == "snr-chain") return snr_chain(cfg, out);
  if (command == "budget") return budget(cfg, out);
  if (command == "optimize-alpha") return optimize_alpha(cfg, out);
  if (command == "fit") return fit(cfg, arg, out);
  if (command == "echo-snr") return echo(cfg, out);
  throw ConfigError("unknown command '" + command + "'");
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ESR spectrometer and parametric-amplifier design tool", "kipa-esr"};
  app.require_subcommand(1);
  std::string config_path, out_path, fit_kind;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "INI file; keys not given keep the reference values");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--set", overrides, "section.key=value, repeatable")->take_all()->allow_extra_args(false);
  app.fallthrough();
  for (const std::string& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    if (name == "fit") sub->add_option("kind", fit_kind, "model to fit")->required()->check(CLI::IsMember(fit_kinds()));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "kipa-esr: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    Config cfg;
    if (!config_path.empty()) {
      if (!std::filesystem::is_regular_file(config_path)) throw ConfigError("no such config file '" + config_path + "'");
      cfg.load_file(config_path);
    }
    for (const auto& o : overrides) cfg.apply_override(o);
    cfg.validate();

    // Buffer so a failed run never leaves a partial output file.
    std::ostringstream buf;
    run_command(app.get_subcommands().front()->get_name(), fit_kind, cfg, buf);
    if (out_path.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw ConfigError("cannot write '" + out_path + "'");
      f << buf.str();
      if (!f.flush()) throw ConfigError("write to '" + out_path + "' failed");
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "kipa-esr: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "kipa-esr: input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "kipa-esr: invalid parameters: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "kipa-esr: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace kipa::cli
