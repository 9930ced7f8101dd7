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

#include "kipa/spin.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "kipa/errors.hpp"
#include "kipa/jacobi.hpp"

namespace kipa {
namespace {

int doubled(double j) { return static_cast<int>(std::lround(2.0 * j)); }

// J+ matrix element <j, m+1| J+ |j, m>, everything doubled.
double raise(int twoJ, int twoM) {
  const double j = 0.5 * twoJ, m = 0.5 * twoM;
  return std::sqrt(j * (j + 1.0) - m * (m + 1.0));
}

struct Basis {
  int twoS, twoI, nS, nI;
  explicit Basis(const SpinSystem& sys)
      : twoS(doubled(sys.S)), twoI(doubled(sys.I)), nS(twoS + 1), nI(twoI + 1) {}
  int twoMS(int iS) const { return twoS - 2 * iS; }
  int twoMI(int iI) const { return twoI - 2 * iI; }
  std::size_t index(int iS, int iI) const { return static_cast<std::size_t>(iS * nI + iI); }
  std::size_t dim() const { return static_cast<std::size_t>(nS * nI); }
};

}  // namespace

int SpinSystem::dim() const { return (doubled(S) + 1) * (doubled(I) + 1); }

void SpinSystem::validate() const {
  if (S <= 0.0 || I < 0.0 || std::abs(2.0 * S - doubled(S)) > 1e-12 || std::abs(2.0 * I - doubled(I)) > 1e-12)
    throw DomainError("spin quantum numbers must be positive half-integers");
  if (!std::isfinite(A) || !std::isfinite(gamma_e) || !std::isfinite(gamma_n))
    throw DomainError("spin system constants must be finite");
}

SpinSystem bismuth209() { return SpinSystem{}; }

StateLabel StateLabel::of(double F, double mF) { return StateLabel{doubled(F), doubled(mF)}; }

std::string StateLabel::str() const {
  auto half = [](int two) {
    if (two % 2 == 0) return std::to_string(two / 2);
    return std::to_string(two) + "/2";
  };
  return "|" + half(twoF) + "," + half(twoMF) + ">";
}

std::size_t EigenSolution::index_of(const StateLabel& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw DomainError("no eigenstate labeled " + label.str());
  return static_cast<std::size_t>(it - labels.begin());
}

const char* to_string(SpinOperator op) { return op == SpinOperator::Sx ? "Sx" : "Sz"; }

Matrix spin_matrix(const SpinSystem& sys, SpinComponent which) {
  sys.validate();
  const Basis b(sys);
  Matrix m(b.dim(), b.dim());
  for (int iS = 0; iS < b.nS; ++iS) {
    for (int iI = 0; iI < b.nI; ++iI) {
      const std::size_t k = b.index(iS, iI);
      switch (which) {
        case SpinComponent::Sz: m(k, k) = 0.5 * b.twoMS(iS); break;
        case SpinComponent::Iz: m(k, k) = 0.5 * b.twoMI(iI); break;
        case SpinComponent::Fz: m(k, k) = 0.5 * (b.twoMS(iS) + b.twoMI(iI)); break;
        case SpinComponent::Sx:
          if (iS > 0) {
            const double e = 0.5 * raise(b.twoS, b.twoMS(iS));
            m(b.index(iS - 1, iI), k) = e;
            m(k, b.index(iS - 1, iI)) = e;
          }
          break;
        case SpinComponent::Ix:
          if (iI > 0) {
            const double e = 0.5 * raise(b.twoI, b.twoMI(iI));
            m(b.index(iS, iI - 1), k) = e;
            m(k, b.index(iS, iI - 1)) = e;
          }
          break;
      }
    }
  }
  return m;
}

Matrix build_hamiltonian(const SpinSystem& sys, double B0) {
  sys.validate();
  if (!(B0 >= 0.0)) throw DomainError("B0 must be >= 0");
  const Basis b(sys);
  Matrix h(b.dim(), b.dim());
  for (int iS = 0; iS < b.nS; ++iS) {
    for (int iI = 0; iI < b.nI; ++iI) {
      const std::size_t k = b.index(iS, iI);
      const double ms = 0.5 * b.twoMS(iS), mi = 0.5 * b.twoMI(iI);
      h(k, k) = sys.A * ms * mi + B0 * (sys.gamma_e * ms + sys.gamma_n * mi);
      // (A/2)(S+ I- + S- I+): S+ I- couples (ms, mi) -> (ms+1, mi-1).
      if (iS > 0 && iI + 1 < b.nI) {
        const std::size_t k2 = b.index(iS - 1, iI + 1);
        const double e = 0.5 * sys.A * raise(b.twoS, b.twoMS(iS)) * raise(b.twoI, b.twoMI(iI + 1));
        h(k2, k) = e;
        h(k, k2) = e;
      }
    }
  }
  return h;
}

EigenSolution diagonalize(const SpinSystem& sys, const Matrix& H, double B0) {
  const std::size_t n = H.rows();
  if (H.cols() != n || n != static_cast<std::size_t>(sys.dim()))
    throw DomainError("Hamiltonian shape does not match the spin system");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(H(i, j) - H(j, i)) > 1e-12 * std::max(1.0, H.max_abs()))
        throw DomainError("Hamiltonian is not symmetric");

  SymmetricEigen eig = jacobi_eigen(H);
  EigenSolution sol;
  sol.field = B0;
  sol.energies = eig.values;
  sol.states = eig.vectors;
  sol.sweeps = eig.sweeps;

  // Inside degenerate clusters any rotation is an eigenbasis; pick the one
  // diagonalizing F_z so every state has a sharp m_F.
  const Matrix fz = spin_matrix(sys, SpinComponent::Fz);
  const double tol = 1e-9 * std::max(1.0, H.max_abs());
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && sol.energies[end] - sol.energies[end - 1] < tol) ++end;
    const std::size_t m = end - start;
    if (m > 1) {
      Matrix sub(m, m);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t c = 0; c < m; ++c) sub(a, c) = sandwich(sol.states, start + a, fz, sol.states, start + c);
      const SymmetricEigen r = jacobi_eigen(sub);
      Matrix rotated(n, m);
      for (std::size_t row = 0; row < n; ++row)
        for (std::size_t c = 0; c < m; ++c) {
          double s = 0.0;
          for (std::size_t a = 0; a < m; ++a) s += sol.states(row, start + a) * r.vectors(a, c);
          rotated(row, c) = s;
        }
      for (std::size_t row = 0; row < n; ++row)
        for (std::size_t c = 0; c < m; ++c) sol.states(row, start + c) = rotated(row, c);
    }
    start = end;
  }

  // Fix each eigenvector's sign so its largest component is positive.
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r)
      if (std::abs(sol.states(r, k)) > std::abs(sol.states(best, k)) + 1e-12) best = r;
    if (sol.states(best, k) < 0.0)
      for (std::size_t r = 0; r < n; ++r) sol.states(r, k) = -sol.states(r, k);
  }

  std::vector<int> twoMF(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double mf = sandwich(sol.states, k, fz, sol.states, k);
    twoMF[k] = static_cast<int>(std::lround(2.0 * mf));
    if (std::abs(2.0 * mf - twoMF[k]) > 1e-6)
      throw NumericalError("eigenstate has no sharp m_F; field not along z?");
  }

  const int twoS = doubled(sys.S), twoI = doubled(sys.I);
  sol.labels.assign(n, StateLabel{});
  std::map<int, std::vector<std::size_t>> blocks;
  for (std::size_t k = 0; k < n; ++k) blocks[twoMF[k]].push_back(k);  // ascending energy already
  for (auto& [mf2, members] : blocks) {
    std::vector<int> twoFs;
    for (int twoF = std::abs(twoI - twoS); twoF <= twoI + twoS; twoF += 2)
      if (twoF >= std::abs(mf2)) twoFs.push_back(twoF);
    if (twoFs.size() != members.size()) throw NumericalError("m_F block size does not match the F multiplets");
    // Zero-field energy grows with F(F+1) when A > 0; no crossings inside a block.
    if (sys.A < 0.0) std::reverse(twoFs.begin(), twoFs.end());
    for (std::size_t r = 0; r < members.size(); ++r) sol.labels[members[r]] = StateLabel{twoFs[r], mf2};
  }
  return sol;
}

EigenSolution solve(const SpinSystem& sys, double B0) { return diagonalize(sys, build_hamiltonian(sys, B0), B0); }

std::vector<Transition> transitions(const SpinSystem& sys, const EigenSolution& sol, SpinOperator op,
                                    double threshold) {
  if (!(threshold > 0.0 && threshold < 0.5)) throw DomainError("threshold must lie in (0, 0.5)");
  const Matrix sx = spin_matrix(sys, SpinComponent::Sx);
  const Matrix sz = spin_matrix(sys, SpinComponent::Sz);
  const Matrix dh = sys.gamma_e * sz + sys.gamma_n * spin_matrix(sys, SpinComponent::Iz);
  const std::size_t n = sol.energies.size();
  double scale = 0.0;
  for (double e : sol.energies) scale = std::max(scale, std::abs(e));
  const double degenerate = 1e-9 * std::max(1.0, scale);

  std::vector<Transition> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double freq = sol.energies[j] - sol.energies[i];
      if (freq < degenerate) continue;
      const double mx = std::abs(sandwich(sol.states, j, sx, sol.states, i));
      const double mz = std::abs(sandwich(sol.states, j, sz, sol.states, i));
      if ((op == SpinOperator::Sx ? mx : mz) < threshold) continue;
      Transition t;
      t.lower = sol.labels[i];
      t.upper = sol.labels[j];
      t.lower_index = i;
      t.upper_index = j;
      t.frequency = freq;
      t.mx = mx;
      t.mz = mz;
      t.dfdB = sandwich(sol.states, j, dh, sol.states, j) - sandwich(sol.states, i, dh, sol.states, i);
      out.push_back(t);
    }
  }
  return out;
}

double transition_frequency(const SpinSystem& sys, const TransitionSelector& sel, double B0) {
  const EigenSolution sol = solve(sys, B0);
  return sol.energy(sel.upper) - sol.energy(sel.lower);
}

double matrix_element(const SpinSystem& sys, const TransitionSelector& sel, SpinOperator op, double B0) {
  const EigenSolution sol = solve(sys, B0);
  const Matrix m = spin_matrix(sys, op == SpinOperator::Sx ? SpinComponent::Sx : SpinComponent::Sz);
  return std::abs(sandwich(sol.states, sol.index_of(sel.upper), m, sol.states, sol.index_of(sel.lower)));
}

double transition_gradient(const SpinSystem& sys, const TransitionSelector& sel, double B0, double step) {
  if (!(B0 > 0.0)) throw DomainError("transition_gradient needs B0 > 0");
  const double h = std::min(step, 0.5 * B0);
  return (transition_frequency(sys, sel, B0 + h) - transition_frequency(sys, sel, B0 - h)) / (2.0 * h);
}

namespace {

constexpr double kFieldTolerance = kTwoPi * 1e3;

template <class F>
double bisect(F&& g, double lo, double hi, double glo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::abs(gm) < kFieldTolerance) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("field bisection stalled", 200);
}

}  // namespace

double resonant_field(const SpinSystem& sys, const TransitionSelector& sel, double omega_target, double B_lo,
                      double B_hi, double scan_step) {
  if (!(B_hi > B_lo) || B_lo < 0.0 || !(scan_step > 0.0)) throw DomainError("bad field search interval");
  auto g = [&](double B) { return transition_frequency(sys, sel, B) - omega_target; };
  double prev_b = B_lo, prev_g = g(B_lo);
  if (std::abs(prev_g) < kFieldTolerance) return B_lo;
  const int steps = static_cast<int>(std::ceil((B_hi - B_lo) / scan_step));
  for (int k = 1; k <= steps; ++k) {
    const double b = std::min(B_hi, B_lo + k * scan_step);
    const double gb = g(b);
    if (std::abs(gb) < kFieldTolerance) return b;
    if ((gb < 0.0) != (prev_g < 0.0)) return bisect(g, prev_b, b, prev_g);
    prev_b = b;
    prev_g = gb;
  }
  throw NoCrossingError(sel.lower.str() + "->" + sel.upper.str() + " never reaches the target frequency in [" +
                        std::to_string(B_lo) + ", " + std::to_string(B_hi) + "] T");
}

std::vector<Crossing> find_crossings(const SpinSystem& sys, SpinOperator op, double omega_target, double B_lo,
                                     double B_hi, double step, double threshold) {
  if (!(B_hi > B_lo) || B_lo < 0.0 || !(step > 0.0)) throw DomainError("empty or invalid field range");
  using Key = std::pair<StateLabel, StateLabel>;
  const int steps = static_cast<int>(std::ceil((B_hi - B_lo) / step - 1e-9));

  auto allowed_keys = [&](const EigenSolution& sol) {
    std::set<Key> keys;
    for (const Transition& t : transitions(sys, sol, op, threshold)) keys.insert({t.lower, t.upper});
    return keys;
  };

  std::vector<Crossing> out;
  EigenSolution prev = solve(sys, B_lo);
  std::set<Key> prev_keys = allowed_keys(prev);
  for (int k = 1; k <= steps; ++k) {
    const double b = std::min(B_hi, B_lo + k * step);
    EigenSolution cur = solve(sys, b);
    std::set<Key> keys = allowed_keys(cur);
    std::set<Key> both = keys;
    both.insert(prev_keys.begin(), prev_keys.end());
    for (const Key& key : both) {
      const double g0 = prev.energy(key.second) - prev.energy(key.first) - omega_target;
      const double g1 = cur.energy(key.second) - cur.energy(key.first) - omega_target;
      // Half-open on the left so a crossing exactly on a grid node counts once.
      const bool crossed = g0 != 0.0 && (g1 == 0.0 || (g0 < 0.0) != (g1 < 0.0));
      if (!crossed) continue;
      const TransitionSelector sel{key.first, key.second};
      auto g = [&](double B) { return transition_frequency(sys, sel, B) - omega_target; };
      const double field = std::abs(g1) < kFieldTolerance ? b : bisect(g, prev.field, b, g0);
      const double element = matrix_element(sys, sel, op, field);
      if (element >= threshold) out.push_back(Crossing{op, sel, field, element});
    }
    prev = std::move(cur);
    prev_keys = std::move(keys);
  }
  std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& c) { return a.field < c.field; });
  return out;
}

std::vector<WindowHit> window_scan(const SpinSystem& sys, double omega_c, double half_width, double B_lo,
                                   double B_hi, double step, double threshold) {
  if (!(B_hi > B_lo) || B_lo < 0.0 || !(step > 0.0)) throw DomainError("empty or invalid field range");
  struct Acc {
    WindowHit hit;
    double best_offset;
  };
  std::map<std::tuple<int, StateLabel, StateLabel>, Acc> acc;
  const int steps = static_cast<int>(std::ceil((B_hi - B_lo) / step - 1e-9));
  for (int k = 1; k <= steps; ++k) {
    const double b = std::min(B_hi, B_lo + k * step);
    const EigenSolution sol = solve(sys, b);
    for (SpinOperator op : {SpinOperator::Sx, SpinOperator::Sz}) {
      for (const Transition& t : transitions(sys, sol, op, threshold)) {
        const double offset = std::abs(t.frequency - omega_c);
        if (offset > half_width) continue;
        const double element = op == SpinOperator::Sx ? t.mx : t.mz;
        auto key = std::make_tuple(static_cast<int>(op), t.lower, t.upper);
        auto it = acc.find(key);
        if (it == acc.end()) {
          acc.emplace(key, Acc{WindowHit{op, {t.lower, t.upper}, b, element}, offset});
          continue;
        }
        it->second.hit.element = std::max(it->second.hit.element, element);
        if (offset < it->second.best_offset) {
          it->second.best_offset = offset;
          it->second.hit.field = b;
        }
      }
    }
  }
  std::vector<WindowHit> out;
  for (auto& [key, a] : acc) out.push_back(a.hit);
  std::sort(out.begin(), out.end(), [](const WindowHit& a, const WindowHit& c) { return a.field < c.field; });
  return out;
}

}  // namespace kipa
