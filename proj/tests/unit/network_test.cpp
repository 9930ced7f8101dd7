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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "kipa/constants.hpp"
#include "kipa/errors.hpp"
#include "kipa/reference_device.hpp"

namespace {

using namespace kipa;
namespace ref = kipa::reference;

CpwLine ideal_line(double Z, double v, double length) {
  CpwLine l;
  l.C_l = 1.0 / (Z * v);
  l.Lg_l = Z / v;
  l.Z = Z;
  l.length = length;
  return l;
}

TEST(EllipticK, KnownValues) {
  EXPECT_NEAR(elliptic_k(0.0), kPi / 2, 1e-15);
  // K(1/sqrt 2) = Gamma(1/4)^2 / (4 sqrt(pi)).
  const double lemniscate = std::pow(std::tgamma(0.25), 2) / (4.0 * std::sqrt(kPi));
  EXPECT_NEAR(elliptic_k(1.0 / std::sqrt(2.0)), lemniscate, 1e-14);
  // Small-k series.
  const double k = 1e-3;
  EXPECT_NEAR(elliptic_k(k), kPi / 2 * (1 + k * k / 4 + 9 * std::pow(k, 4) / 64), 1e-15);
  EXPECT_THROW(elliptic_k(1.0), DomainError);
}

TEST(Cpw, ReferenceResonatorImpedanceAndFraction) {
  const CpwLine l = cpw_params(ref::kResonatorW, ref::kResonatorGap, ref::kEpsR, ref::kLk0Sq);
  EXPECT_NEAR(l.Z, 240.0, 0.15 * 240.0);
  EXPECT_NEAR(l.alpha, 0.80, 0.05);
  EXPECT_DOUBLE_EQ(l.Lk_l, ref::kLk0Sq / ref::kResonatorW);
}

TEST(Cpw, GeometricLimitMatchesTextbookImpedance) {
  const double w = 10e-6, g = 6e-6, er = 11.9;
  const CpwLine l = cpw_params(w, g, er, 0.0);
  EXPECT_EQ(l.alpha, 0.0);
  const double k = w / (w + 2 * g), kp = std::sqrt(1 - k * k);
  const double z = 30.0 * kPi / std::sqrt((1 + er) / 2) * elliptic_k(kp) / elliptic_k(k);
  EXPECT_NEAR(l.Z, z, 1e-3 * z);  // 30 pi approximates eta0/4
  EXPECT_NEAR(l.phase_velocity(), 299792458.0 / std::sqrt((1 + er) / 2), 1.0);
}

TEST(Cpw, Monotonicity) {
  double prevZ = 0.0;
  for (double g = 1e-6; g < 200e-6; g *= 1.3) {
    const double z = cpw_params(5e-6, g, 11.9, 1e-12).Z;
    EXPECT_GT(z, prevZ);
    prevZ = z;
  }
  double prevA = -1.0;
  for (double lk = 0.0; lk < 20e-12; lk += 0.5e-12) {
    const double a = cpw_params(5e-6, 10e-6, 11.9, lk).alpha;
    EXPECT_GT(a, prevA);
    prevA = a;
  }
}

TEST(Cpw, RejectsBadGeometry) {
  EXPECT_THROW(cpw_params(0.0, 1e-6, 11.9, 0.0), DomainError);
  EXPECT_THROW(cpw_params(1e-6, 1e-6, 0.5, 0.0), DomainError);
}

TEST(KineticInductance, QuadraticInCurrent) {
  EXPECT_EQ(kinetic_inductance(2.0, 0.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(kinetic_inductance(2.0, 0.5, 1.0), 2.5);
  EXPECT_THROW(kinetic_inductance(1.0, ref::kIStar, ref::kIStar), DomainError);
}

TEST(DcTuning, ReferenceRange) {
  EXPECT_EQ(dc_tuning(1.0, 0.0, 1.0), 0.0);
  EXPECT_NEAR(hz(dc_tuning(rad(ref::kF0ZeroBiasHz), ref::kIdcMax, ref::kIStar)), -40.0e6, 1e6);
  const double d3 = hz(dc_tuning(rad(ref::kF0ZeroBiasHz), 3.0e-3, ref::kIStar));
  EXPECT_NEAR(d3, -7.233e9 * 9e-6 / (2 * 34.5e-3 * 34.5e-3), 1.0);
  EXPECT_NEAR(d3, -27.4e6, 0.1e6);  // quoted to three figures
}

TEST(DcTuning, PureQuadraticFit) {
  const double w0 = rad(ref::kF0ZeroBiasHz), Is = ref::kIStar;
  double num = 0.0, den = 0.0;
  for (int k = -20; k <= 20; ++k) {
    const double I = 3.5e-3 * k / 20.0;
    num += dc_tuning(w0, I, Is) * I * I;
    den += std::pow(I, 4);
  }
  const double c = num / den;
  EXPECT_NEAR(c, -w0 / (2 * Is * Is), 1e-10 * w0 / (2 * Is * Is));
}

TEST(ResonatorFrequency, ReferenceDesign) {
  const CpwLine l = cpw_params(ref::kResonatorW, ref::kResonatorGap, ref::kEpsR, ref::kLk0Sq);
  const double f = hz(resonator_frequency(l, ref::kResonatorLength));
  EXPECT_NEAR(f, 7.3e9, 0.1 * 7.3e9);
  EXPECT_NEAR(hz(resonator_frequency(l, 2 * ref::kResonatorLength)), f / 2, 1e-6 * f);
  // Removing the kinetic part at fixed length.
  const CpwLine g = cpw_params(ref::kResonatorW, ref::kResonatorGap, ref::kEpsR, 0.0);
  EXPECT_NEAR(resonator_frequency(g, ref::kResonatorLength) / resonator_frequency(l, ref::kResonatorLength),
              1.0 / std::sqrt(1.0 - l.alpha), 1e-12);
  EXPECT_NEAR(quarter_wave_length(l, resonator_frequency(l, 1e-3)), 1e-3, 1e-15);
}

TEST(QualityFactors, Composition) {
  const double Qc = coupling_q_from_loaded(ref::kQL, ref::kQi);
  EXPECT_NEAR(loaded_q(ref::kQi, Qc), ref::kQL, 1e-9 * ref::kQL);
  EXPECT_NEAR(Qc, 37.2e3, 0.05e3);
  const ResonatorState r = ResonatorState::from_q(rad(7.2e9), ref::kQi, Qc);
  EXPECT_NO_THROW(r.validate());
  EXPECT_NEAR(r.kappa() + r.gamma(), r.omega0 / r.QL, 1e-9 * r.omega0 / r.QL);
  EXPECT_THROW(coupling_q_from_loaded(2.0, 1.0), DomainError);
}

TEST(Abcd, HalfWaveIsMinusIdentity) {
  const double v = 1e8, w = rad(5e9);
  SifNetwork n;
  n.segments.push_back(ideal_line(80.0, v, kPi / (w / v)));
  const Abcd m = abcd_cascade(n, w);
  EXPECT_NEAR(std::abs(m.a + 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(m.d + 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(m.b), 0.0, 1e-12 * 80);
  EXPECT_NEAR(std::abs(m.c), 0.0, 1e-12);
}

TEST(Abcd, TwoQuarterWavesAreMinusIdentity) {
  const double v = 1.3e8, w = rad(7e9);
  SifNetwork n;
  for (int k = 0; k < 2; ++k) n.segments.push_back(ideal_line(120.0, v, 0.5 * kPi / (w / v)));
  const Abcd m = abcd_cascade(n, w);
  EXPECT_NEAR(std::abs(m.a + 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(m.d + 1.0), 0.0, 1e-12);
  EXPECT_LT(std::abs(m.b), 1e-9);
  EXPECT_LT(std::abs(m.c), 1e-12);
}

TEST(SParams, MatchedLineTransmitsFully) {
  SifNetwork n;
  for (int k = 0; k < 3; ++k) n.segments.push_back(ideal_line(50.0, 1.1e8, 1.7e-3 * (k + 1)));
  for (double f = 0.1e9; f < 20e9; f += 0.37e9) EXPECT_NEAR(std::abs(s21(n, rad(f), 50.0)), 1.0, 1e-12);
}

TEST(SParams, ReferenceFilterBands) {
  const SifNetwork sif = reference_sif(ref::kEpsR, ref::kLk0Sq, rad(ref::kSifDesignHz), ref::kPortZ0);
  ASSERT_EQ(sif.segments.size(), 8u);
  EXPECT_LT(std::abs(s21(sif, rad(ref::kSifDesignHz), 50.0)), 0.01);
  EXPECT_GT(std::abs(s21(sif, rad(2 * ref::kSifDesignHz), 50.0)), 0.9);
  EXPECT_NEAR(std::abs(s21(sif, rad(1e3), 50.0)), 1.0, 1e-6);
}

TEST(SParams, LosslessProperties) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> Z(10.0, 300.0), L(0.1e-3, 5e-3), V(0.5e8, 2e8), F(0.05e9, 30e9);
  for (int trial = 0; trial < 50; ++trial) {
    SifNetwork n;
    const int segs = 1 + trial % 9;
    for (int k = 0; k < segs; ++k) n.segments.push_back(ideal_line(Z(rng), V(rng), L(rng)));
    // The same network with every segment halved.
    SifNetwork split;
    for (CpwLine s : n.segments) {
      s.length *= 0.5;
      split.segments.push_back(s);
      split.segments.push_back(s);
    }
    for (int j = 0; j < 5; ++j) {
      const double w = rad(F(rng));
      const Abcd m = abcd_cascade(n, w);
      EXPECT_NEAR(std::abs(m.det()), 1.0, 1e-9);
      const SParams s = s_params(m, 50.0);
      EXPECT_NEAR(std::norm(s.s11) + std::norm(s.s21), 1.0, 1e-9);
      EXPECT_LE(std::abs(s.s21), 1.0 + 1e-12);
      EXPECT_LT(std::abs(s21(split, w, 50.0) - s.s21), 1e-9);
    }
  }
}

TEST(NetworkFile, RoundTrip) {
  const SifNetwork sif = reference_sif(ref::kEpsR, ref::kLk0Sq, rad(ref::kSifDesignHz), ref::kPortZ0);
  std::stringstream ss;
  write_network(ss, sif);
  const SifNetwork back = read_network(ss);
  ASSERT_EQ(back.segments.size(), sif.segments.size());
  for (double f : {1e9, 7.3e9, 14.6e9})
    EXPECT_NEAR(std::abs(s21(back, rad(f), back.Z0) - s21(sif, rad(f), sif.Z0)), 0.0, 1e-12);
}

TEST(NetworkFile, Errors) {
  std::istringstream missing("eps_r=11.9\n1e-6 1e-6 1e-3\n");
  EXPECT_THROW(read_network(missing), ParseError);
  std::istringstream junk("eps_r=11.9\nLk0_sq=0\nZ0=50\n1e-6 oops 1e-3\n");
  EXPECT_THROW(read_network(junk), ParseError);
  std::istringstream key("eps_r=11.9\nLk0_sq=0\nZ0=50\nfoo=1\n");
  EXPECT_THROW(read_network(key), ParseError);
  std::istringstream ok("# comment\neps_r = 11.9\nLk0_sq=0\nZ0=50\n1e-6 1e-6 1e-3  # trailing\n");
  EXPECT_EQ(read_network(ok).segments.size(), 1u);
}

}  // namespace
