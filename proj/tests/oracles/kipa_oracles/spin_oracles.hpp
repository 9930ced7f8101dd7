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

// Independent references for the spin module. Nothing here calls into the
// library: the Hamiltonian is rebuilt with complex Kronecker products and
// solved by Eigen, and the Breit-Rabi levels are closed form.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace kipa_oracle {

using CMat = Eigen::MatrixXcd;

struct SpinOps {
  CMat x, y, z;
};

inline SpinOps spin_ops(double j) {
  const int n = static_cast<int>(std::lround(2 * j)) + 1;
  CMat p = CMat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double m = j - k;
    p(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const std::complex<double> i(0, 1);
  SpinOps o;
  o.x = 0.5 * (p + p.adjoint());
  o.y = (p - p.adjoint()) / (2.0 * i);
  o.z = CMat::Zero(n, n);
  for (int k = 0; k < n; ++k) o.z(k, k) = j - k;
  return o;
}

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

struct Hyperfine {
  double S, I, A, ge, gn;
};

inline CMat hamiltonian(const Hyperfine& p, double B) {
  const SpinOps s = spin_ops(p.S), n = spin_ops(p.I);
  const CMat es = CMat::Identity(s.z.rows(), s.z.rows()), en = CMat::Identity(n.z.rows(), n.z.rows());
  const CMat SI = kron(s.x, n.x) + kron(s.y, n.y) + kron(s.z, n.z);
  return p.A * SI + B * (p.ge * kron(s.z, en) + p.gn * kron(es, n.z));
}

inline std::vector<double> eigenvalues(const Hyperfine& p, double B) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hamiltonian(p, B));
  const Eigen::VectorXd v = es.eigenvalues();
  return std::vector<double>(v.data(), v.data() + v.size());
}

// S = 1/2: every level in closed form, sorted ascending.
inline std::vector<double> breit_rabi(const Hyperfine& p, double B) {
  std::vector<double> e;
  const double I = p.I, dg = p.ge - p.gn;
  e.push_back(p.A * I / 2 + B * (p.ge / 2 + p.gn * I));
  e.push_back(p.A * I / 2 - B * (p.ge / 2 + p.gn * I));
  for (double m = -I + 0.5; m <= I - 0.5 + 1e-9; m += 1.0) {
    const double root = std::sqrt(p.A * p.A * (I + 0.5) * (I + 0.5) + 2 * p.A * m * B * dg + B * B * dg * dg);
    e.push_back(-p.A / 4 + p.gn * B * m + 0.5 * root);
    e.push_back(-p.A / 4 + p.gn * B * m - 0.5 * root);
  }
  std::sort(e.begin(), e.end());
  return e;
}

// Closed-form F-manifold energies at zero field.
inline double zero_field_energy(double F, double S, double I, double A) {
  return 0.5 * A * (F * (F + 1) - S * (S + 1) - I * (I + 1));
}

}  // namespace kipa_oracle
