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

// Homodyne record: uniformly sampled I and Q quadratures.
struct Trace {
  std::vector<double> t;
  std::vector<double> I;
  std::vector<double> Q;

  void validate() const;  // equal lengths >= 2, strictly increasing, uniform t
  double dt() const { return t[1] - t[0]; }
  std::size_t size() const { return t.size(); }
};

Trace read_trace(std::istream& in, const std::string& source = "<stream>");
Trace read_trace_file(const std::string& path);
void write_trace(std::ostream& out, const Trace& trace);

struct EchoOptions {
  double lowpass_hz = 1e6;        // single-pole; <= 0 disables filtering
  double offset_fraction = 0.1;   // leading share of the record used for DC offsets
  int rotation_grid = 64;         // coarse scan of [0, pi) before golden section
  double rotation_tol = 1e-10;    // rad
};

struct EchoResult {
  double snr = 0.0;
  double rotation = 0.0;  // rad, applied to both traces
  double signal_mean = 0.0;
  double blank_rms = 0.0;
  std::size_t window_samples = 0;
};

// Mean of each quadrature over the first offset_fraction of samples that lie
// before t1. DomainError when no such samples exist.
std::pair<double, double> dc_offsets(const Trace& tr, double t1, double offset_fraction);
Trace subtract_offsets(const Trace& tr, double t1, double offset_fraction);
Trace lowpass(const Trace& tr, double cutoff_hz);
// I' = I cos(th) + Q sin(th), Q' = Q cos(th) - I sin(th)
Trace rotate(const Trace& tr, double theta);
// Angle minimizing sum |Q'| over [t1, t2], sign chosen so mean I' > 0.
double best_rotation(const Trace& tr, double t1, double t2, const EchoOptions& opt = {});

EchoResult echo_snr(const Trace& signal, const Trace& blank, double t1, double t2, const EchoOptions& opt = {});

}  // namespace kipa
