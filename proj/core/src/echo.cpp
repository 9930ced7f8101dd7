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

#include "kipa/echo.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "kipa/constants.hpp"
#include "kipa/errors.hpp"
#include "kipa/io.hpp"

namespace kipa {

void Trace::validate() const {
  if (t.size() < 2) throw DomainError("trace needs at least 2 samples");
  if (I.size() != t.size() || Q.size() != t.size()) throw DomainError("trace columns differ in length");
  const double h = t[1] - t[0];
  if (!(h > 0.0)) throw DomainError("trace time axis must increase");
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double d = t[k] - t[k - 1];
    if (!(d > 0.0)) throw DomainError("trace time axis must increase strictly");
    if (std::abs(d - h) > 1e-3 * h) throw DomainError("trace time axis must be uniform");
  }
}

Trace read_trace(std::istream& in, const std::string& source) {
  Trace tr;
  CsvReader csv(in, source, {"t_s", "I", "Q"});
  std::vector<double> row;
  while (csv.next(row)) {
    tr.t.push_back(row[0]);
    tr.I.push_back(row[1]);
    tr.Q.push_back(row[2]);
  }
  tr.validate();
  return tr;
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace " + path);
  return read_trace(in, path);
}

void write_trace(std::ostream& out, const Trace& tr) {
  write_csv_header(out, {"t_s", "I", "Q"});
  for (std::size_t k = 0; k < tr.size(); ++k) write_csv_row(out, {tr.t[k], tr.I[k], tr.Q[k]});
}

std::pair<double, double> dc_offsets(const Trace& tr, double t1, double offset_fraction) {
  tr.validate();
  if (!(offset_fraction > 0.0 && offset_fraction <= 1.0)) throw DomainError("offset fraction must lie in (0, 1]");
  const auto n = static_cast<std::size_t>(std::ceil(offset_fraction * static_cast<double>(tr.size())));
  double si = 0.0, sq = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < n && k < tr.size() && tr.t[k] < t1; ++k, ++used) {
    si += tr.I[k];
    sq += tr.Q[k];
  }
  if (used == 0) throw DomainError("no pre-echo samples available for the DC offset");
  return {si / static_cast<double>(used), sq / static_cast<double>(used)};
}

Trace subtract_offsets(const Trace& tr, double t1, double offset_fraction) {
  const auto [oi, oq] = dc_offsets(tr, t1, offset_fraction);
  Trace out = tr;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.I[k] -= oi;
    out.Q[k] -= oq;
  }
  return out;
}

Trace lowpass(const Trace& tr, double cutoff_hz) {
  tr.validate();
  if (!(cutoff_hz > 0.0)) return tr;
  const double a = -std::expm1(-kTwoPi * cutoff_hz * tr.dt());
  Trace out = tr;
  for (std::size_t k = 1; k < out.size(); ++k) {
    out.I[k] = out.I[k - 1] + a * (tr.I[k] - out.I[k - 1]);
    out.Q[k] = out.Q[k - 1] + a * (tr.Q[k] - out.Q[k - 1]);
  }
  return out;
}

Trace rotate(const Trace& tr, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Trace out = tr;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.I[k] = tr.I[k] * c + tr.Q[k] * s;
    out.Q[k] = tr.Q[k] * c - tr.I[k] * s;
  }
  return out;
}

namespace {

struct Window {
  std::size_t first = 0, last = 0;  // inclusive/exclusive
  std::size_t size() const { return last - first; }
};

Window window_of(const Trace& tr, double t1, double t2) {
  if (!(t2 > t1)) throw DomainError("echo window must have t2 > t1");
  if (t1 < tr.t.front() || t2 > tr.t.back()) throw DomainError("echo window lies outside the trace");
  Window w;
  while (w.first < tr.size() && tr.t[w.first] < t1) ++w.first;
  w.last = w.first;
  while (w.last < tr.size() && tr.t[w.last] <= t2) ++w.last;
  if (w.size() == 0) throw DomainError("echo window contains no samples");
  return w;
}

}  // namespace

double best_rotation(const Trace& tr, double t1, double t2, const EchoOptions& opt) {
  const Window w = window_of(tr, t1, t2);
  auto cost = [&](double th) {
    const double c = std::cos(th), s = std::sin(th);
    double acc = 0.0;
    for (std::size_t k = w.first; k < w.last; ++k) acc += std::abs(tr.Q[k] * c - tr.I[k] * s);
    return acc;
  };
  const int n = std::max(opt.rotation_grid, 4);
  const double h = kPi / n;
  int best = 0;
  double best_cost = cost(0.0);
  for (int k = 1; k < n; ++k) {
    const double c = cost(k * h);
    if (c < best_cost) {
      best_cost = c;
      best = k;
    }
  }
  // Golden section on the bracket around the best grid node. The objective
  // has period pi, so the bracket may leave [0, pi) freely.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = (best - 1) * h, b = (best + 1) * h;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = cost(x1), f2 = cost(x2);
  while (b - a > opt.rotation_tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = cost(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = cost(x2);
    }
  }
  double theta = std::fmod(0.5 * (a + b), kPi);
  if (theta < 0.0) theta += kPi;

  double mean = 0.0;
  const double c = std::cos(theta), s = std::sin(theta);
  for (std::size_t k = w.first; k < w.last; ++k) mean += tr.I[k] * c + tr.Q[k] * s;
  if (mean < 0.0) theta += kPi;
  return theta;
}

EchoResult echo_snr(const Trace& signal, const Trace& blank, double t1, double t2, const EchoOptions& opt) {
  signal.validate();
  blank.validate();
  const Trace sig = lowpass(subtract_offsets(signal, t1, opt.offset_fraction), opt.lowpass_hz);
  const Trace blk = lowpass(subtract_offsets(blank, t1, opt.offset_fraction), opt.lowpass_hz);
  const Window ws = window_of(sig, t1, t2);
  const Window wb = window_of(blk, t1, t2);

  EchoResult r;
  r.rotation = best_rotation(sig, t1, t2, opt);
  const Trace sr = rotate(sig, r.rotation);
  const Trace br = rotate(blk, r.rotation);
  for (std::size_t k = ws.first; k < ws.last; ++k) r.signal_mean += sr.I[k];
  r.signal_mean /= static_cast<double>(ws.size());
  double ss = 0.0;
  for (std::size_t k = wb.first; k < wb.last; ++k) ss += br.I[k] * br.I[k];
  r.blank_rms = std::sqrt(ss / static_cast<double>(wb.size()));
  if (!(r.blank_rms > 0.0)) throw DegenerateInputError("blank trace has zero RMS in the window");
  r.window_samples = ws.size();
  r.snr = r.signal_mean / r.blank_rms;
  return r;
}

}  // namespace kipa
