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

#include "kipa/field_model.hpp"

#include <algorithm>
#include <cmath>

#include "kipa/constants.hpp"
#include "kipa/errors.hpp"

namespace kipa {
namespace {

struct Cell {
  double x, dx;
};

std::vector<Cell> lateral_cells(const CpwLine& line, const FieldModelOptions& opt) {
  const double hw = 0.5 * line.w;
  const double outer = hw + line.gap + line.w;
  const double X = outer + opt.lateral_margin;
  const std::vector<double> edges = {-outer, -hw - line.gap, -hw, hw, hw + line.gap, outer};
  const double h0 = opt.min_cell_fraction * std::min(line.w, line.gap);
  std::vector<Cell> cells;
  double x = -X;
  while (x < X - 1e-15) {
    double d = 1e300, next_edge = X;
    for (double e : edges) {
      d = std::min(d, std::abs(x - e));
      if (e > x + 1e-15) next_edge = std::min(next_edge, e);
    }
    // Size by the distance at the far end too, so cells shrink into an edge.
    double h = std::max(h0, opt.growth * d);
    h = std::min(h, std::max(h0, opt.growth * std::abs(next_edge - x) / (1.0 + opt.growth)));
    const double x1 = std::min(x + h, next_edge);
    cells.push_back(Cell{0.5 * (x + x1), x1 - x});
    x = x1;
  }
  return cells;
}

std::vector<Cell> depth_cells(const FieldModelOptions& opt) {
  std::vector<Cell> cells;
  auto uniform = [&](double a, double b) {
    const int n = std::max(1, static_cast<int>(std::lround((b - a) / opt.dz_implant)));
    const double h = (b - a) / n;
    for (int k = 0; k < n; ++k) cells.push_back(Cell{a + (k + 0.5) * h, h});
  };
  uniform(0.0, opt.implant_top);
  uniform(opt.implant_top, opt.implant_bottom);
  double z = opt.implant_bottom, h = opt.dz_implant;
  while (z < opt.depth_max - 1e-15) {
    h *= 1.25;
    const double z1 = std::min(z + h, opt.depth_max);
    cells.push_back(Cell{0.5 * (z + z1), z1 - z});
    z = z1;
  }
  return cells;
}

struct Filament {
  double x, current;
};

std::vector<Filament> filaments(const CpwLine& line, int n) {
  std::vector<Filament> f;
  const double hw = 0.5 * line.w;
  for (int k = 0; k < n; ++k) f.push_back({-hw + (k + 0.5) / n * line.w, 1.0 / n});
  for (double s : {-1.0, 1.0})
    for (int k = 0; k < n; ++k) f.push_back({s * (hw + line.gap + (k + 0.5) / n * line.w), -0.5 / n});
  return f;
}

// Incoming wave amplitude at the port for unit current at the short.
double incoming_at_port(const std::vector<CpwLine>& lines, double omega, double Z0) {
  const Complex j(0.0, 1.0);
  Complex I(1.0, 0.0), V(0.0, 0.0);
  for (const CpwLine& L : lines) {
    const double bl = L.beta(omega) * L.length;
    const Complex I1 = I * std::cos(bl) + j * V / L.Z * std::sin(bl);
    V = V * std::cos(bl) + j * L.Z * I * std::sin(bl);
    I = I1;
  }
  return 0.5 * std::abs(V - Z0 * I);
}

double loaded_resonance(const std::vector<CpwLine>& lines, double omega0, double Z0) {
  // The filter pulls the mode by a few percent; scan +-10%, then refine.
  // The step is well below the external linewidth.
  const int n = 40000;
  const double lo = 0.9 * omega0, step = 0.2 * omega0 / n;
  int best = 0;
  double best_val = 1e300;
  for (int k = 0; k <= n; ++k) {
    const double v = incoming_at_port(lines, lo + k * step, Z0);
    if (v < best_val) best_val = v, best = k;
  }
  if (best == 0 || best == n) throw NumericalError("no loaded resonance within 10% of the bare quarter-wave frequency");
  double a = lo + (best - 1) * step, b = lo + (best + 1) * step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = incoming_at_port(lines, c, Z0), fd = incoming_at_port(lines, d, Z0);
  while (b - a > 1e-12 * omega0) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - g * (b - a);
      fc = incoming_at_port(lines, c, Z0);
    } else {
      a = c, c = d, fc = fd;
      d = a + g * (b - a);
      fd = incoming_at_port(lines, d, Z0);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

AnalyticFieldResult analytic_field_map(const DeviceLayout& layout, const FieldModelOptions& opt) {
  if (!(layout.resonator.length > 0.0)) throw DomainError("resonator length must be set");
  if (!(opt.implant_bottom > opt.implant_top) || opt.implant_top < 0.0 || !(opt.depth_max > opt.implant_bottom))
    throw DomainError("implant window must satisfy 0 <= top < bottom < depth_max");
  if (opt.filaments < 1 || opt.slices < 1 || !(opt.growth > 0.0) || !(opt.min_cell_fraction > 0.0) ||
      !(opt.dz_implant > 0.0))
    throw DomainError("field model resolution settings must be positive");

  struct Section {
    CpwLine line;
    bool along_B0;
  };
  std::vector<Section> sections{{layout.resonator, layout.resonator_along_B0}};
  for (auto it = layout.filter.rbegin(); it != layout.filter.rend(); ++it) {
    if (!(it->length > 0.0)) throw DomainError("filter section length must be set");
    sections.push_back({*it, !layout.resonator_along_B0});
  }

  AnalyticFieldResult out;
  out.omega = resonator_frequency(layout.resonator, layout.resonator.length);
  if (!layout.filter.empty()) {
    if (!(layout.port_Z0 > 0.0)) throw DomainError("port impedance must be positive");
    std::vector<CpwLine> lines;
    for (const Section& sec : sections) lines.push_back(sec.line);
    out.omega = loaded_resonance(lines, out.omega, layout.port_Z0);
  }
  const std::vector<Cell> zc = depth_cells(opt);

  Complex I(1.0, 0.0), V(0.0, 0.0);
  const Complex j(0.0, 1.0);
  double y0 = 0.0, max_b1 = 0.0;
  std::vector<std::size_t> first_sample;
  for (const Section& sec : sections) {
    const CpwLine& L = sec.line;
    const double beta = L.beta(out.omega);
    auto current_at = [&](double s) { return I * std::cos(beta * s) + j * V / L.Z * std::sin(beta * s); };

    double peak = 0.0;
    for (int k = 0; k <= 2000; ++k) peak = std::max(peak, std::abs(current_at(L.length * k / 2000.0)));
    out.section_peak_current.push_back(peak);

    const std::vector<Cell> xc = lateral_cells(L, opt);
    const std::vector<Filament> fil = filaments(L, opt.filaments);
    // Unit-current cross-section field, mu0/(2 pi r) per filament.
    std::vector<double> bperp(xc.size() * zc.size()), btot(xc.size() * zc.size());
    double bmax_unit = 0.0;
    for (std::size_t a = 0; a < xc.size(); ++a) {
      for (std::size_t c = 0; c < zc.size(); ++c) {
        double bx = 0.0, bz = 0.0;
        for (const Filament& f : fil) {
          const double dx = xc[a].x - f.x, z = zc[c].x;
          const double r2 = dx * dx + z * z;
          bx -= f.current * z / r2;
          bz += f.current * dx / r2;
        }
        bx *= 2e-7;
        bz *= 2e-7;
        const double t = std::hypot(bx, bz);
        btot[a * zc.size() + c] = t;
        bperp[a * zc.size() + c] = sec.along_B0 ? t : std::abs(bz);
        bmax_unit = std::max(bmax_unit, t);
      }
    }
    max_b1 = std::max(max_b1, peak * bmax_unit);

    first_sample.push_back(out.map.samples.size());
    const double ds = L.length / opt.slices;
    for (int k = 0; k < opt.slices; ++k) {
      const double s = (k + 0.5) * ds;
      const double amp = std::abs(current_at(s));
      for (std::size_t a = 0; a < xc.size(); ++a)
        for (std::size_t c = 0; c < zc.size(); ++c) {
          FieldSample fs;
          fs.x = xc[a].x;
          fs.y = y0 + s;
          fs.z = -zc[c].x;
          fs.volume = xc[a].dx * zc[c].dx * ds;
          fs.B1perp = amp * bperp[a * zc.size() + c];
          fs.in_implant = zc[c].x > opt.implant_top && zc[c].x < opt.implant_bottom;
          out.map.samples.push_back(fs);
        }
    }
    const Complex I1 = current_at(L.length);
    const Complex V1 = V * std::cos(beta * L.length) + j * L.Z * I * std::sin(beta * L.length);
    I = I1;
    V = V1;
    y0 += L.length;
  }
  out.map.max_B1 = max_b1;
  first_sample.push_back(out.map.samples.size());

  const double inv = 1.0 / max_b1;
  for (std::size_t s = 0; s + 1 < first_sample.size(); ++s) {
    double vd = 0.0;
    for (std::size_t k = first_sample[s]; k < first_sample[s + 1]; ++k) {
      const FieldSample& f = out.map.samples[k];
      if (f.in_implant) vd += f.volume * (f.B1perp * inv) * (f.B1perp * inv);
    }
    out.section_V_d.push_back(vd);
  }
  return out;
}

}  // namespace kipa
