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

#include <optional>
#include <string>
#include <vector>

#include "kipa/constants.hpp"
#include "kipa/matrix.hpp"

namespace kipa {

// Electron spin S coupled to nuclear spin I by an isotropic hyperfine term,
// field along z. All rates are angular frequencies (rad/s, rad/s/T).
struct SpinSystem {
  double S = 0.5;
  double I = 4.5;
  double A = rad(1.478e9);
  double gamma_e = rad(27.997e9);
  double gamma_n = rad(-6.96e6);

  int dim() const;
  void validate() const;
};

SpinSystem bismuth209();

// Half-integer quantum numbers stored doubled so labels compare exactly.
struct StateLabel {
  int twoF = 0;
  int twoMF = 0;

  double F() const { return 0.5 * twoF; }
  double mF() const { return 0.5 * twoMF; }
  static StateLabel of(double F, double mF);
  std::string str() const;  // "|4,-4>"

  friend bool operator==(const StateLabel&, const StateLabel&) = default;
  friend auto operator<=>(const StateLabel&, const StateLabel&) = default;
};

struct EigenSolution {
  double field = 0.0;
  std::vector<double> energies;  // ascending, rad/s
  Matrix states;                 // columns are eigenvectors in |m_S, m_I> basis
  std::vector<StateLabel> labels;
  int sweeps = 0;

  std::size_t index_of(const StateLabel& label) const;
  double energy(const StateLabel& label) const { return energies[index_of(label)]; }
};

enum class SpinOperator { Sx, Sz };
const char* to_string(SpinOperator op);

struct Transition {
  StateLabel lower;
  StateLabel upper;
  std::size_t lower_index = 0;
  std::size_t upper_index = 0;
  double frequency = 0.0;  // rad/s
  double mx = 0.0;         // |<upper|S_x|lower>|
  double mz = 0.0;         // |<upper|S_z|lower>|
  double dfdB = 0.0;       // rad/s/T, exact (Hellmann-Feynman)
};

struct TransitionSelector {
  StateLabel lower;
  StateLabel upper;
};

// Product basis index: m_S and m_I run from +S and +I downward.
enum class SpinComponent { Sx, Sz, Ix, Iz, Fz };
Matrix spin_matrix(const SpinSystem& sys, SpinComponent which);

Matrix build_hamiltonian(const SpinSystem& sys, double B0);

// Diagonalize and attach |F, m_F> labels. m_F is exact (F_z commutes with H
// for a z field); F is the energy rank inside each m_F block.
EigenSolution diagonalize(const SpinSystem& sys, const Matrix& H, double B0);
EigenSolution solve(const SpinSystem& sys, double B0);

inline constexpr double kDefaultAllowedThreshold = 0.2;

// Pairs with |<f|op|i>| >= threshold. Degenerate pairs (zero frequency) are
// skipped: they carry no spectral line and their elements are basis-dependent.
std::vector<Transition> transitions(const SpinSystem& sys, const EigenSolution& sol, SpinOperator op,
                                    double threshold = kDefaultAllowedThreshold);

// E(upper) - E(lower); signed, so a selector keeps meaning across crossings.
double transition_frequency(const SpinSystem& sys, const TransitionSelector& sel, double B0);
double matrix_element(const SpinSystem& sys, const TransitionSelector& sel, SpinOperator op, double B0);

// Central difference, step 1 uT (or B0/2 if smaller).
double transition_gradient(const SpinSystem& sys, const TransitionSelector& sel, double B0,
                           double step = 1e-6);

// Bracket by scanning [B_lo, B_hi], then bisect to within 2pi x 1 kHz.
// Returns the lowest crossing. NoCrossingError when none exists.
double resonant_field(const SpinSystem& sys, const TransitionSelector& sel, double omega_target,
                      double B_lo = 0.0, double B_hi = 0.4, double scan_step = 1e-4);

struct Crossing {
  SpinOperator op;
  TransitionSelector pair;
  double field = 0.0;
  double element = 0.0;  // |<upper|op|lower>| at the crossing
};

// Every labeled pair whose frequency passes through omega_target on the grid
// [B_lo, B_hi] while allowed by op. Sorted by field.
std::vector<Crossing> find_crossings(const SpinSystem& sys, SpinOperator op, double omega_target, double B_lo,
                                     double B_hi, double step, double threshold = kDefaultAllowedThreshold);

struct WindowHit {
  SpinOperator op;
  TransitionSelector pair;
  double field = 0.0;      // grid field closest to the window centre
  double element = 0.0;    // largest element seen inside the window
};

// Distinct allowed transitions that enter [omega_c - half_width, omega_c + half_width]
// somewhere on the field grid (B_lo, B_hi].
std::vector<WindowHit> window_scan(const SpinSystem& sys, double omega_c, double half_width, double B_lo,
                                   double B_hi, double step, double threshold = kDefaultAllowedThreshold);

}  // namespace kipa
