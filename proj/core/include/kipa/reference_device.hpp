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

// Design and measured values of the reference NbTiN device on 28Si:Bi.
// Shipped as defaults; every one of them can be overridden from config.

namespace kipa::reference {

// Geometry (m). Resonator is a quarter-wave CPW shorted at the far end.
inline constexpr double kEpsR = 11.9;
inline constexpr double kLk0Sq = 3.5e-12;  // H per square
inline constexpr double kResonatorW = 1e-6;
inline constexpr double kResonatorGap = 10e-6;
inline constexpr double kResonatorLength = 1.75e-3;
inline constexpr double kSifLoW = 138e-6, kSifLoGap = 6e-6;
inline constexpr double kSifHiW = 10e-6, kSifHiGap = 70e-6;
inline constexpr double kSifFinalW = 5e-6, kSifFinalGap = 15e-6;
inline constexpr double kSifDesignHz = 7.3e9;
inline constexpr double kPortZ0 = 50.0;

// Resonator / amplifier operating point.
inline constexpr double kF0ZeroBiasHz = 7.233e9;
inline constexpr double kIStar = 34.5e-3;
inline constexpr double kIdcMax = 3.63e-3;
inline constexpr double kQi = 117e3;
inline constexpr double kQL = 28.2e3;
inline constexpr double kAlpha = 0.8;

// Spin measurement point.
inline constexpr double kFEsrHz = 7.203e9;
inline constexpr double kBEsr = 6.78e-3;
inline constexpr double kDeviceTemperature = 0.4;
inline constexpr double kHemtNoiseTemperature = 3.6;
inline constexpr double kInsertionLossDb = 3.5;

// Sensitivity budget.
inline constexpr double kBetaA = 0.6;
inline constexpr double kBetaB = 1.0 / 54.3;
inline constexpr double kBetaC = 0.082;
inline constexpr double kBetaD = 0.1;
inline constexpr double kDonorConcentration = 1.03e23;  // m^-3
inline constexpr double kDonorVolume = 1009.8e-18;      // m^3
inline constexpr double kImplantTop = 0.35e-6;
inline constexpr double kImplantBottom = 1.6e-6;
inline constexpr double kPi2Duration = 3e-6;
inline constexpr double kPhotonNumber = 1.0e7;
inline constexpr double kRabiPowerDbm = -73.0;
inline constexpr double kPulseDuration = 10e-6;
inline constexpr double kLinewidthHz = 2.55e6;
inline constexpr double kLinewidthT = 0.10e-3;
inline constexpr double kLineOffsetT = 0.02e-3;
inline constexpr double kEchoDuration = 20e-6;
inline constexpr double kG0Hz = 13.2;
inline constexpr double kPolarization = 0.40;
inline constexpr double kMatrixElement = 0.473;
inline constexpr double kSnrPumpOff = 0.55;
inline constexpr double kSnrGain8dB = 3.99;

}  // namespace kipa::reference
