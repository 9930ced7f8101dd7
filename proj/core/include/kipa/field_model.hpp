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

#include <vector>

#include "kipa/network.hpp"
#include "kipa/sensitivity.hpp"

namespace kipa {

// Straight-line layout: quarter-wave resonator shorted at y = 0, then the
// filter sections in order towards the port. The resonator runs along B0 and
// the filter across it, which sets which field components count as B1-perp.
struct DeviceLayout {
  CpwLine resonator;             // length must be set
  std::vector<CpwLine> filter;   // port side first, lengths set
  bool resonator_along_B0 = true;
  double port_Z0 = 50.0;
};

struct FieldModelOptions {
  double implant_top = 0.35e-6;
  double implant_bottom = 1.6e-6;
  double depth_max = 20e-6;       // sampled substrate depth
  double lateral_margin = 20e-6;  // beyond the outer edge of the return strips
  double dz_implant = 0.05e-6;
  double min_cell_fraction = 0.05;  // smallest lateral cell, fraction of min(w, gap)
  double growth = 0.25;             // lateral cell size / distance to nearest edge
  int filaments = 100;              // per conducting strip
  int slices = 8;                   // current samples along each section
};

struct AnalyticFieldResult {
  FieldMap map;
  double omega = 0.0;                // frequency of the standing wave used
  std::vector<double> section_V_d;   // resonator first, then filter towards the port
  std::vector<double> section_peak_current;  // |I| relative to the short
};

// Uniform-current filaments on the centre track; the return current is split
// over one track width of ground plane at each gap edge. The current envelope
// comes from lossless propagation from the short. With a filter, the
// frequency is the loaded resonance, where nothing comes in from the port;
// without one it is the resonator's own quarter-wave frequency. Cells cover
// the substrate (z > 0) only.
AnalyticFieldResult analytic_field_map(const DeviceLayout& layout, const FieldModelOptions& opt = {});

}  // namespace kipa
